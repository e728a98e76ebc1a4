#pragma once

#include "oretower/field.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oretower {

/// PBW-style monomial x1^e1 *...* xn^en over the tower generators, stored as
/// the exponent sequence with trailing zeros trimmed.
struct Mono {
    std::vector<unsigned> e;

    Mono() = default;
    explicit Mono(std::vector<unsigned> exps) : e(std::move(exps)) { trim(); }

    static Mono unit() { return {}; }
    static Mono gen(int index, unsigned power = 1);

    void trim() {
        while (!e.empty() && e.back() == 0) e.pop_back();
    }
    bool is_unit() const { return e.empty(); }
    /// number of the highest level used (1-based); 0 for the unit monomial
    int top_level() const { return static_cast<int>(e.size()); }
    unsigned exp(int i) const { return i < static_cast<int>(e.size()) ? e[i] : 0; }

    /// exponent-wise product; only meaningful when the factors are already
    /// in normal-form position (used for appending top-variable powers)
    Mono exp_mul(const Mono& o) const;
    Mono without_top() const; // drops the top generator's power

    std::string to_string(const std::vector<std::string>& names) const;
};

bool operator==(const Mono& a, const Mono& b);
bool operator<(const Mono& a, const Mono& b); // plain lex with zero-fill, for map keys

/// Element of a tower level in left normal form: sparse monomial -> scalar.
class TowerElement {
public:
    using Terms = std::map<Mono, FieldValue>;

    TowerElement() = default;

    static TowerElement zero() { return {}; }
    static TowerElement scalar(const FieldValue& c);
    static TowerElement monomial(Mono m, const FieldValue& c);

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    int level() const; // smallest tower level containing all generators used
    size_t term_count() const { return terms_.size(); }

    void add_term(const Mono& m, const FieldValue& c); // accumulates, drops zeros
    void add_scaled(const TowerElement& o, const FieldValue& c);

    TowerElement operator+(const TowerElement& o) const;
    TowerElement operator-(const TowerElement& o) const;
    TowerElement operator-() const;
    TowerElement scaled(const FieldValue& c) const;
    bool operator==(const TowerElement& o) const;
    bool operator!=(const TowerElement& o) const { return !(*this == o); }

    FieldValue coeff(const Mono& m) const;
    /// the scalar value when the element is 0 or c*1; nullopt otherwise
    std::optional<FieldValue> as_scalar() const;

private:
    Terms terms_;
};

/// Unnormalized expression tree over named generators and scalars, used to
/// state relations before Ore normalization.
struct FreeExpr {
    enum class Kind { Add, Mul, Neg, Pow, Scalar, Gen };

    Kind kind = Kind::Scalar;
    std::vector<FreeExpr> kids;   // Add, Mul, Neg, Pow(base = kids[0])
    FieldValue scalar;            // Scalar
    std::string gen;              // Gen
    long exponent = 1;            // Pow

    static FreeExpr make_scalar(FieldValue v);
    static FreeExpr make_gen(std::string name);
    static FreeExpr add(std::vector<FreeExpr> kids);
    static FreeExpr mul(std::vector<FreeExpr> kids);
    static FreeExpr neg(FreeExpr k);
    static FreeExpr pow(FreeExpr base, long e);
};

} // namespace oretower
