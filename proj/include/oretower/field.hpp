#pragma once

#include "oretower/polynomial.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace oretower {

/// Reduced fraction of multivariate polynomials. Canonical form:
/// num/den coprime, den's deglex leading coefficient equal to 1,
/// zero stored as 0/1.
struct Frac {
    Poly num, den;

    Frac() : num(0), den(Poly::constant(0, 1)) {}
    Frac(Poly n, Poly d);

    static Frac of_poly(Poly p);
    static Frac of_rat(int nvars, const Rat& r);

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.is_constant() && den.is_constant(); }
    Rat constant_value() const { return num.constant_value() / den.constant_value(); }

    Frac operator+(const Frac& o) const;
    Frac operator-(const Frac& o) const;
    Frac operator*(const Frac& o) const;
    Frac operator/(const Frac& o) const;
    Frac operator-() const;
    bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

/// Declares the coefficient field tower: Q, then rational functions in the
/// listed parameters, then optionally one quadratic element alpha with
/// alpha^2 = m1*alpha + m0 (m1, m0 over the parameters).
struct FieldConfig {
    struct Algebraic {
        std::string name;
        Frac m1, m0;
    };

    std::vector<std::string> params;
    std::optional<Algebraic> algebraic;
    // when non-empty, binds every parameter to a rational for numeric runs
    std::vector<std::pair<std::string, Rat>> numeric_bindings;

    int nvars() const { return static_cast<int>(params.size()); }
    int param_index(const std::string& name) const; // -1 if absent

    void validate() const; // checks the invariants from the data definition
    bool same_structure(const FieldConfig& o) const;
};

using FieldConfigPtr = std::shared_ptr<const FieldConfig>;

/// An element u + v*alpha of the configured field. Immutable.
/// A default-constructed value is the canonical zero, compatible with any
/// configuration.
class FieldValue {
public:
    FieldValue() = default;
    FieldValue(FieldConfigPtr cfg, Frac u);
    FieldValue(FieldConfigPtr cfg, Frac u, Frac v);

    static FieldValue zero() { return {}; }
    static FieldValue one(const FieldConfigPtr& cfg);
    static FieldValue of_rat(const FieldConfigPtr& cfg, const Rat& r);
    static FieldValue parameter(const FieldConfigPtr& cfg, const std::string& name);
    static FieldValue algebraic_gen(const FieldConfigPtr& cfg);

    bool is_zero() const { return !cfg_ || (u_.is_zero() && v_.is_zero()); }
    bool is_one() const;
    const FieldConfigPtr& config() const { return cfg_; }
    const Frac& u() const { return u_; }
    const Frac& v() const { return v_; }
    /// true when the value lies in Q (no parameters, no algebraic part)
    bool is_rational() const;
    Rat rational_value() const;

    FieldValue operator+(const FieldValue& o) const;
    FieldValue operator-(const FieldValue& o) const;
    FieldValue operator*(const FieldValue& o) const;
    FieldValue operator/(const FieldValue& o) const;
    FieldValue operator-() const;
    FieldValue inv() const;
    FieldValue pow(long e) const;
    bool operator==(const FieldValue& o) const;
    bool operator!=(const FieldValue& o) const { return !(*this == o); }

    /// Canonical rendering, round-trippable by the DSL scalar grammar.
    std::string to_string() const;

private:
    FieldConfigPtr cfg_; // null only for the canonical zero
    Frac u_, v_;

    void check_same(const FieldValue& o) const;
};

/// Rewrites u0 + u1*alpha + u2*alpha^2 with the declared minimal polynomial.
FieldValue quad_reduce(const FieldConfigPtr& cfg, const Frac& u0, const Frac& u1, const Frac& u2);

/// The parameter-free configuration obtained by substituting
/// numeric_bindings (alpha kept, its minimal polynomial evaluated).
FieldConfigPtr instance_config(const FieldConfigPtr& cfg);

/// Substitutes numeric_bindings into a value; result lives over
/// instance_config(cfg).
FieldValue evaluate_instance(const FieldConfigPtr& cfg, const FieldValue& value);

} // namespace oretower
