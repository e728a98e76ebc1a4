#include "oretower/field.hpp"

#include "oretower/errors.hpp"

#include <algorithm>
#include <sstream>

namespace oretower {

Frac::Frac(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw division_by_zero("fraction with zero denominator");
    if (num.is_zero()) {
        den = Poly::constant(num.nvars(), 1);
        return;
    }
    Poly g = poly_gcd(num, den);
    if (!g.is_constant()) {
        num = num.div_exact(g);
        den = den.div_exact(g);
    }
    // normalize: deglex leading coefficient of den becomes 1
    Rat lc = den.leading_term().second;
    if (lc != 1) {
        Rat inv_lc = Rat(1) / lc;
        num = num.scaled(inv_lc);
        den = den.scaled(inv_lc);
    }
}

Frac Frac::of_poly(Poly p) {
    int nv = p.nvars();
    return Frac(std::move(p), Poly::constant(nv, 1));
}

Frac Frac::of_rat(int nvars, const Rat& r) { return of_poly(Poly::constant(nvars, r)); }

Frac Frac::operator+(const Frac& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    return Frac(num * o.den + o.num * den, den * o.den);
}

Frac Frac::operator-(const Frac& o) const { return *this + (-o); }

Frac Frac::operator*(const Frac& o) const {
    if (is_zero() || o.is_zero()) return Frac();
    return Frac(num * o.num, den * o.den);
}

Frac Frac::operator/(const Frac& o) const {
    if (o.is_zero()) throw division_by_zero("division by zero rational function");
    if (is_zero()) return Frac();
    return Frac(num * o.den, den * o.num);
}

Frac Frac::operator-() const {
    Frac r;
    r.num = -num;
    r.den = den;
    return r;
}

int FieldConfig::param_index(const std::string& name) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i] == name) return static_cast<int>(i);
    return -1;
}

void FieldConfig::validate() const {
    for (size_t i = 0; i < params.size(); ++i)
        for (size_t j = i + 1; j < params.size(); ++j)
            if (params[i] == params[j])
                throw parameter_mismatch("duplicate parameter name '" + params[i] + "'");
    if (algebraic) {
        if (param_index(algebraic->name) >= 0)
            throw parameter_mismatch("algebraic name '" + algebraic->name +
                                     "' collides with a parameter");
    }
    if (!numeric_bindings.empty()) {
        for (const auto& p : params) {
            bool found = false;
            for (const auto& [n, v] : numeric_bindings)
                if (n == p) found = true;
            if (!found) throw unbound_parameter("parameter '" + p + "' has no binding");
        }
        for (const auto& [n, v] : numeric_bindings)
            if (param_index(n) < 0) throw unbound_parameter("binding for unknown parameter '" + n + "'");
    }
}

bool FieldConfig::same_structure(const FieldConfig& o) const {
    if (params != o.params) return false;
    if (algebraic.has_value() != o.algebraic.has_value()) return false;
    if (algebraic &&
        (algebraic->name != o.algebraic->name || !(algebraic->m1 == o.algebraic->m1) ||
         !(algebraic->m0 == o.algebraic->m0)))
        return false;
    return true;
}

FieldValue::FieldValue(FieldConfigPtr cfg, Frac u) : cfg_(std::move(cfg)), u_(std::move(u)) {
    v_ = Frac::of_rat(cfg_->nvars(), 0);
}

FieldValue::FieldValue(FieldConfigPtr cfg, Frac u, Frac v)
    : cfg_(std::move(cfg)), u_(std::move(u)), v_(std::move(v)) {
    if (!v_.is_zero() && !cfg_->algebraic)
        throw no_algebraic_element("value has an algebraic part but no algebraic element is declared");
}

FieldValue FieldValue::one(const FieldConfigPtr& cfg) { return of_rat(cfg, 1); }

FieldValue FieldValue::of_rat(const FieldConfigPtr& cfg, const Rat& r) {
    if (r == 0) return {};
    return FieldValue(cfg, Frac::of_rat(cfg->nvars(), r));
}

FieldValue FieldValue::parameter(const FieldConfigPtr& cfg, const std::string& name) {
    int i = cfg->param_index(name);
    if (i < 0) throw unbound_parameter("unknown parameter '" + name + "'");
    return FieldValue(cfg, Frac::of_poly(Poly::variable(cfg->nvars(), i)));
}

FieldValue FieldValue::algebraic_gen(const FieldConfigPtr& cfg) {
    if (!cfg->algebraic) throw no_algebraic_element("no algebraic element declared");
    return FieldValue(cfg, Frac::of_rat(cfg->nvars(), 0), Frac::of_rat(cfg->nvars(), 1));
}

bool FieldValue::is_one() const {
    return cfg_ && v_.is_zero() && u_.is_constant() && u_.constant_value() == 1 && !u_.is_zero();
}

bool FieldValue::is_rational() const {
    return is_zero() || (v_.is_zero() && u_.is_constant());
}

Rat FieldValue::rational_value() const {
    if (is_zero()) return Rat(0);
    return u_.constant_value();
}

void FieldValue::check_same(const FieldValue& o) const {
    if (!cfg_ || !o.cfg_) return; // canonical zero matches anything
    if (cfg_ == o.cfg_) return;
    if (!cfg_->same_structure(*o.cfg_))
        throw parameter_mismatch("operands come from different field configurations");
}

FieldValue FieldValue::operator+(const FieldValue& o) const {
    check_same(o);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    Frac u = u_ + o.u_, v = v_ + o.v_;
    if (u.is_zero() && v.is_zero()) return {};
    return FieldValue(cfg_, std::move(u), std::move(v));
}

FieldValue FieldValue::operator-(const FieldValue& o) const { return *this + (-o); }

FieldValue FieldValue::operator-() const {
    if (is_zero()) return {};
    return FieldValue(cfg_, -u_, -v_);
}

FieldValue FieldValue::operator*(const FieldValue& o) const {
    check_same(o);
    if (is_zero() || o.is_zero()) return {};
    // (u1 + v1 a)(u2 + v2 a) with a^2 = m1 a + m0
    Frac u = u_ * o.u_;
    Frac v = u_ * o.v_ + v_ * o.u_;
    Frac vv = v_ * o.v_;
    if (!vv.is_zero()) {
        const auto& alg = *cfg_->algebraic;
        u = u + vv * alg.m0;
        v = v + vv * alg.m1;
    }
    if (u.is_zero() && v.is_zero()) return {};
    return FieldValue(cfg_, std::move(u), std::move(v));
}

FieldValue FieldValue::inv() const {
    if (is_zero()) throw division_by_zero("inverse of zero");
    if (v_.is_zero()) {
        return FieldValue(cfg_, Frac::of_rat(cfg_->nvars(), 1) / u_);
    }
    // norm (u + v a)(u + v m1 - v a) = u^2 + m1 u v - m0 v^2
    const auto& alg = *cfg_->algebraic;
    Frac n = u_ * u_ + alg.m1 * u_ * v_ - alg.m0 * v_ * v_;
    if (n.is_zero())
        throw division_by_zero("norm vanishes; minimal polynomial is reducible over the base");
    return FieldValue(cfg_, (u_ + v_ * alg.m1) / n, -(v_ / n));
}

FieldValue FieldValue::operator/(const FieldValue& o) const { return *this * o.inv(); }

FieldValue FieldValue::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    FieldValue acc, base = *this;
    bool started = false;
    // plain square-and-multiply
    while (e > 0) {
        if (e & 1) {
            acc = started ? acc * base : base;
            started = true;
        }
        e >>= 1;
        if (e) base = base * base;
    }
    if (!started) {
        if (!cfg_) throw division_by_zero("0^0 of the canonical zero");
        return one(cfg_);
    }
    return acc;
}

bool FieldValue::operator==(const FieldValue& o) const {
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    check_same(o);
    return u_ == o.u_ && v_ == o.v_;
}

std::string FieldValue::to_string() const {
    if (is_zero()) return "0";
    std::vector<std::string> names = cfg_->params;
    // single fraction over a common denominator; alpha appended as an
    // extra variable so terms render uniformly
    int nv = cfg_->nvars();
    auto widen = [&](const Poly& p) {
        std::vector<Poly::Term> ts;
        for (auto t : p.terms()) {
            t.first.resize(nv + 1, 0);
            ts.push_back(t);
        }
        return Poly::from_terms(nv + 1, std::move(ts));
    };
    Poly g = poly_gcd(u_.den, v_.den);
    Poly d = u_.den * v_.den.div_exact(g);
    Poly nu = u_.num * d.div_exact(u_.den);
    Poly nv_poly = v_.num * d.div_exact(v_.den);
    Poly top = widen(nu);
    if (!nv_poly.is_zero()) {
        Poly alpha = Poly::variable(nv + 1, nv);
        top = top + widen(nv_poly) * alpha;
        names.push_back(cfg_->algebraic->name);
    } else {
        names.push_back("");
    }
    std::string ns = top.to_string(names);
    if (d.is_constant() && d.constant_value() == 1) return ns;
    std::ostringstream out;
    if (top.terms().size() > 1)
        out << "(" << ns << ")";
    else
        out << ns;
    out << "/";
    std::string ds = d.to_string(cfg_->params);
    if (d.terms().size() > 1 || (d.terms().size() == 1 && exps_total_degree(d.terms()[0].first) > 0 &&
                                 d.terms()[0].second != 1))
        out << "(" << ds << ")";
    else
        out << ds;
    return out.str();
}

FieldValue quad_reduce(const FieldConfigPtr& cfg, const Frac& u0, const Frac& u1, const Frac& u2) {
    if (!cfg->algebraic) throw no_algebraic_element("quad_reduce without an algebraic element");
    const auto& alg = *cfg->algebraic;
    Frac u = u0 + u2 * alg.m0;
    Frac v = u1 + u2 * alg.m1;
    if (u.is_zero() && v.is_zero()) return {};
    return FieldValue(cfg, std::move(u), std::move(v));
}

FieldConfigPtr instance_config(const FieldConfigPtr& cfg) {
    if (cfg->numeric_bindings.empty())
        throw unbound_parameter("configuration has no numeric bindings");
    std::vector<Rat> point(cfg->params.size());
    for (const auto& p : cfg->params) {
        bool found = false;
        for (const auto& [n, v] : cfg->numeric_bindings)
            if (n == p) {
                point[cfg->param_index(p)] = v;
                found = true;
            }
        if (!found) throw unbound_parameter("parameter '" + p + "' has no binding");
    }
    auto inst = std::make_shared<FieldConfig>();
    if (cfg->algebraic) {
        auto eval_frac = [&](const Frac& f) {
            Rat dv = f.den.evaluate(point);
            if (dv == 0) throw denominator_vanishes("denominator vanishes at the bound point");
            return Frac::of_rat(0, f.num.evaluate(point) / dv);
        };
        inst->algebraic = FieldConfig::Algebraic{cfg->algebraic->name,
                                                 eval_frac(cfg->algebraic->m1),
                                                 eval_frac(cfg->algebraic->m0)};
    }
    return inst;
}

FieldValue evaluate_instance(const FieldConfigPtr& cfg, const FieldValue& value) {
    auto inst = instance_config(cfg);
    if (value.is_zero()) return {};
    if (value.config() && !value.config()->same_structure(*cfg))
        throw parameter_mismatch("value does not belong to the given configuration");
    std::vector<Rat> point(cfg->params.size());
    for (const auto& [n, v] : cfg->numeric_bindings) point[cfg->param_index(n)] = v;
    auto eval_frac = [&](const Frac& f) {
        Rat dv = f.den.evaluate(point);
        if (dv == 0) throw denominator_vanishes("denominator vanishes at the bound point");
        return Frac::of_rat(0, f.num.evaluate(point) / dv);
    };
    Frac u = eval_frac(value.u()), v = eval_frac(value.v());
    if (u.is_zero() && v.is_zero()) return {};
    return FieldValue(inst, std::move(u), std::move(v));
}

} // namespace oretower
