#include "oretower/polynomial.hpp"

#include "oretower/errors.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace oretower {

int exps_total_degree(const Exps& e) {
    int d = 0;
    for (unsigned x : e) d += static_cast<int>(x);
    return d;
}

int exps_deglex_cmp(const Exps& a, const Exps& b) {
    int da = exps_total_degree(a), db = exps_total_degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

Poly Poly::constant(int nvars, const Rat& c) {
    Poly p(nvars);
    if (c != 0) p.terms_.push_back({Exps(nvars, 0), c});
    return p;
}

Poly Poly::variable(int nvars, int index) {
    Poly p(nvars);
    Exps e(nvars, 0);
    e.at(index) = 1;
    p.terms_.push_back({std::move(e), Rat(1)});
    return p;
}

Poly Poly::from_terms(int nvars, std::vector<Term> terms) {
    Poly p(nvars);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        return exps_deglex_cmp(a.first, b.first) > 0;
    });
    std::vector<Term> out;
    for (auto& t : terms_) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
        if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    terms_ = std::move(out);
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && exps_total_degree(terms_[0].first) == 0);
}

Rat Poly::constant_value() const {
    assert(is_constant());
    return terms_.empty() ? Rat(0) : terms_[0].second;
}

int Poly::total_degree() const {
    if (terms_.empty()) return -1;
    return exps_total_degree(terms_.front().first);
}

const Poly::Term& Poly::leading_term() const {
    assert(!terms_.empty());
    return terms_.front();
}

Poly Poly::operator-() const {
    Poly p(nvars_);
    p.terms_ = terms_;
    for (auto& t : p.terms_) t.second = -t.second;
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    // merge of two sorted term lists
    Poly p(std::max(nvars_, o.nvars_));
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() ||
            (i < terms_.size() && exps_deglex_cmp(terms_[i].first, o.terms_[j].first) > 0)) {
            p.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || exps_deglex_cmp(terms_[i].first, o.terms_[j].first) < 0) {
            p.terms_.push_back(o.terms_[j++]);
        } else {
            Rat c = terms_[i].second + o.terms_[j].second;
            if (c != 0) p.terms_.push_back({terms_[i].first, c});
            ++i, ++j;
        }
    }
    return p;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(std::max(nvars_, o.nvars_));
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            Exps e(a.first);
            for (size_t k = 0; k < e.size() && k < b.first.size(); ++k) e[k] += b.first[k];
            prod.push_back({std::move(e), a.second * b.second});
        }
    return from_terms(std::max(nvars_, o.nvars_), std::move(prod));
}

Poly Poly::scaled(const Rat& c) const {
    if (c == 0) return Poly(nvars_);
    Poly p(nvars_);
    p.terms_ = terms_;
    for (auto& t : p.terms_) t.second *= c;
    return p;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].first != o.terms_[i].first || terms_[i].second != o.terms_[i].second)
            return false;
    return true;
}

Poly Poly::div_exact(const Poly& d) const {
    assert(!d.is_zero());
    Poly rem = *this;
    std::vector<Term> quot;
    while (!rem.is_zero()) {
        const Term& lr = rem.leading_term();
        const Term& ld = d.leading_term();
        Exps q(lr.first);
        bool divisible = true;
        for (size_t k = 0; k < q.size(); ++k) {
            unsigned de = k < ld.first.size() ? ld.first[k] : 0;
            if (q[k] < de) { divisible = false; break; }
            q[k] -= de;
        }
        if (!divisible)
            throw OreError("InternalError", "div_exact: not divisible");
        Rat c = lr.second / ld.second;
        Poly mono(nvars_);
        mono.terms_.push_back({q, c});
        quot.push_back({std::move(q), c});
        rem = rem - mono * d;
    }
    return from_terms(nvars_, std::move(quot));
}

Rat Poly::evaluate(const std::vector<Rat>& point) const {
    Rat acc(0);
    for (const auto& t : terms_) {
        Rat m = t.second;
        for (size_t k = 0; k < t.first.size(); ++k)
            for (unsigned i = 0; i < t.first[k]; ++i) m *= point.at(k);
        acc += m;
    }
    return acc;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.second;
        bool neg = c < 0;
        if (first) {
            if (neg) out << "-";
        } else {
            out << (neg ? " - " : " + ");
        }
        first = false;
        Rat ac = abs(c);
        std::string mon;
        for (size_t k = 0; k < t.first.size(); ++k) {
            if (t.first[k] == 0) continue;
            if (!mon.empty()) mon += "*";
            mon += names.at(k);
            if (t.first[k] > 1) mon += "^" + std::to_string(t.first[k]);
        }
        if (mon.empty()) {
            out << ac.get_str();
        } else {
            if (ac != 1) out << ac.get_str() << "*";
            out << mon;
        }
    }
    return out.str();
}

namespace {

// Univariate view in variable v with Poly coefficients in the others.
std::map<unsigned, Poly> as_univariate(const Poly& p, int v) {
    std::map<unsigned, Poly> coeffs;
    for (const auto& t : p.terms()) {
        unsigned dv = static_cast<size_t>(v) < t.first.size() ? t.first[v] : 0;
        Exps rest = t.first;
        if (static_cast<size_t>(v) < rest.size()) rest[v] = 0;
        auto it = coeffs.find(dv);
        Poly mono = Poly::from_terms(p.nvars(), {{rest, t.second}});
        if (it == coeffs.end())
            coeffs.emplace(dv, mono);
        else
            it->second = it->second + mono;
    }
    return coeffs;
}

Poly from_univariate(int nvars, int v, const std::map<unsigned, Poly>& coeffs) {
    std::vector<Poly::Term> terms;
    for (const auto& [dv, c] : coeffs)
        for (const auto& t : c.terms()) {
            Exps e = t.first;
            if (e.size() < static_cast<size_t>(nvars)) e.resize(nvars, 0);
            e[v] += dv;
            terms.push_back({e, t.second});
        }
    return Poly::from_terms(nvars, std::move(terms));
}

int degree_in(const Poly& p, int v) {
    int d = -1;
    for (const auto& t : p.terms()) {
        int dv = static_cast<size_t>(v) < t.first.size() ? static_cast<int>(t.first[v]) : 0;
        d = std::max(d, dv);
    }
    return d;
}

int main_variable(const Poly& a, const Poly& b) {
    int nv = std::max(a.nvars(), b.nvars());
    for (int v = nv - 1; v >= 0; --v)
        if (degree_in(a, v) > 0 || degree_in(b, v) > 0) return v;
    return -1;
}

// Normalizes sign/content so gcd output is deterministic: primitive part
// with respect to rational content, leading coefficient made positive.
Poly make_primitive(const Poly& p) {
    if (p.is_zero()) return p;
    // rational content: gcd of numerators / lcm of denominators
    mpz_class num_gcd(0), den_lcm(1);
    for (const auto& t : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.second.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.second.get_den().get_mpz_t());
    }
    Rat content(num_gcd, den_lcm);
    content.canonicalize();
    if (p.leading_term().second < 0) content = -content;
    return p.scaled(Rat(1) / content);
}

Poly pseudo_rem(const Poly& f, const Poly& g, int v) {
    // prem(f, g) in variable v
    auto fc = as_univariate(f, v);
    auto gc = as_univariate(g, v);
    int dg = gc.rbegin()->first;
    Poly lg = gc.rbegin()->second;
    Poly rem = f;
    int nv = std::max(f.nvars(), g.nvars());
    while (true) {
        auto rc = as_univariate(rem, v);
        if (rem.is_zero()) break;
        int dr = static_cast<int>(rc.rbegin()->first);
        if (dr < dg) break;
        Poly lr = rc.rbegin()->second;
        // rem = lg*rem - lr * x^(dr-dg) * g
        Poly shift_g(nv);
        {
            std::map<unsigned, Poly> sh;
            for (const auto& [d, c] : gc) sh[d + (dr - dg)] = c;
            shift_g = from_univariate(nv, v, sh);
        }
        rem = lg * rem - lr * shift_g;
    }
    return rem;
}

} // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return make_primitive(b);
    if (b.is_zero()) return make_primitive(a);
    int v = main_variable(a, b);
    if (v < 0) return Poly::constant(std::max(a.nvars(), b.nvars()), 1);

    if (degree_in(a, v) == 0 || degree_in(b, v) == 0) {
        // one side is free of the main variable: gcd divides its content
        const Poly& flat = degree_in(a, v) == 0 ? a : b;
        const Poly& other = degree_in(a, v) == 0 ? b : a;
        Poly g = make_primitive(flat);
        for (const auto& [d, c] : as_univariate(other, v)) {
            (void)d;
            g = poly_gcd(g, c);
            if (g.is_constant()) return Poly::constant(std::max(a.nvars(), b.nvars()), 1);
        }
        return g;
    }

    // contents with respect to v
    auto content_of = [&](const Poly& p) {
        Poly c(p.nvars());
        for (const auto& [d, coef] : as_univariate(p, v)) {
            (void)d;
            c = poly_gcd(c, coef);
        }
        return c;
    };
    Poly ca = content_of(a), cb = content_of(b);
    Poly pa = a.div_exact(ca), pb = b.div_exact(cb);
    // primitive PRS
    Poly r0 = pa, r1 = pb;
    if (degree_in(r0, v) < degree_in(r1, v)) std::swap(r0, r1);
    while (!r1.is_zero()) {
        Poly r2 = pseudo_rem(r0, r1, v);
        r0 = r1;
        if (r2.is_zero()) {
            r1 = r2;
        } else {
            // strip content to keep the sequence primitive
            Poly c2(r2.nvars());
            for (const auto& [d, coef] : as_univariate(r2, v)) {
                (void)d;
                c2 = poly_gcd(c2, coef);
            }
            r1 = r2.div_exact(c2);
        }
    }
    Poly g = make_primitive(r0);
    return make_primitive(poly_gcd(ca, cb) * g);
}

} // namespace oretower
