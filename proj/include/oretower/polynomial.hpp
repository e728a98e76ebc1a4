#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace oretower {

using Rat = mpq_class;

/// Exponent vector of a commutative monomial in the field parameters.
/// All vectors of one polynomial have the same length (one slot per
/// declared parameter).
using Exps = std::vector<unsigned>;

int exps_total_degree(const Exps& e);

/// deglex: higher total degree first, ties broken lexicographically
/// (larger exponent on the earliest differing variable first).
/// Returns <0, 0, >0 like strcmp, with "greater in deglex" reported as >0.
int exps_deglex_cmp(const Exps& a, const Exps& b);

/// Sparse multivariate polynomial with rational coefficients.
/// Terms are kept sorted deglex-descending with no zero coefficients.
class Poly {
public:
    using Term = std::pair<Exps, Rat>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rat& c);
    static Poly variable(int nvars, int index);
    /// Builds from an arbitrary term list (sorts, merges, drops zeros).
    static Poly from_terms(int nvars, std::vector<Term> terms);

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term value (the whole value if is_constant()).
    Rat constant_value() const;
    int total_degree() const; // -1 for the zero polynomial

    const Term& leading_term() const; // deglex leading term; poly must be nonzero

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rat& c) const;
    bool operator==(const Poly& o) const;

    /// Exact division; caller guarantees divisibility (used by gcd cofactors).
    Poly div_exact(const Poly& d) const;

    /// Substitutes values for all variables.
    Rat evaluate(const std::vector<Rat>& point) const;

    /// Renders with the given variable names, e.g. "2*p^4 - p^2*q".
    std::string to_string(const std::vector<std::string>& names) const;

private:
    int nvars_;
    std::vector<Term> terms_;

    void normalize();
};

/// gcd up to a unit; result is primitive with positive integer content
/// convention. gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

} // namespace oretower
