#include "oretower/element.hpp"

#include <algorithm>
#include <sstream>

namespace oretower {

Mono Mono::gen(int index, unsigned power) {
    Mono m;
    if (power == 0) return m;
    m.e.assign(index + 1, 0);
    m.e[index] = power;
    return m;
}

Mono Mono::exp_mul(const Mono& o) const {
    Mono m;
    m.e.resize(std::max(e.size(), o.e.size()), 0);
    for (size_t i = 0; i < m.e.size(); ++i) m.e[i] = exp(i) + o.exp(i);
    m.trim();
    return m;
}

Mono Mono::without_top() const {
    Mono m = *this;
    if (!m.e.empty()) {
        m.e.pop_back();
        m.trim();
    }
    return m;
}

std::string Mono::to_string(const std::vector<std::string>& names) const {
    if (is_unit()) return "1";
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names.at(i);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s;
}

bool operator==(const Mono& a, const Mono& b) { return a.e == b.e; }

bool operator<(const Mono& a, const Mono& b) {
    size_t n = std::max(a.e.size(), b.e.size());
    for (size_t i = 0; i < n; ++i) {
        unsigned x = a.exp(static_cast<int>(i)), y = b.exp(static_cast<int>(i));
        if (x != y) return x < y;
    }
    return false;
}

TowerElement TowerElement::scalar(const FieldValue& c) {
    TowerElement t;
    if (!c.is_zero()) t.terms_.emplace(Mono::unit(), c);
    return t;
}

TowerElement TowerElement::monomial(Mono m, const FieldValue& c) {
    TowerElement t;
    if (!c.is_zero()) t.terms_.emplace(std::move(m), c);
    return t;
}

int TowerElement::level() const {
    int lv = 0;
    for (const auto& [m, c] : terms_) lv = std::max(lv, m.top_level());
    return lv;
}

void TowerElement::add_term(const Mono& m, const FieldValue& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void TowerElement::add_scaled(const TowerElement& o, const FieldValue& c) {
    if (c.is_zero()) return;
    for (const auto& [m, k] : o.terms_) add_term(m, k * c);
}

TowerElement TowerElement::operator+(const TowerElement& o) const {
    TowerElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

TowerElement TowerElement::operator-(const TowerElement& o) const {
    TowerElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

TowerElement TowerElement::operator-() const {
    TowerElement r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

TowerElement TowerElement::scaled(const FieldValue& c) const {
    TowerElement r;
    if (c.is_zero()) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

bool TowerElement::operator==(const TowerElement& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin(), jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (!(it->first == jt->first) || it->second != jt->second) return false;
    return true;
}

FieldValue TowerElement::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? FieldValue() : it->second;
}

std::optional<FieldValue> TowerElement::as_scalar() const {
    if (terms_.empty()) return FieldValue();
    if (terms_.size() == 1 && terms_.begin()->first.is_unit()) return terms_.begin()->second;
    return std::nullopt;
}

FreeExpr FreeExpr::make_scalar(FieldValue v) {
    FreeExpr e;
    e.kind = Kind::Scalar;
    e.scalar = std::move(v);
    return e;
}

FreeExpr FreeExpr::make_gen(std::string name) {
    FreeExpr e;
    e.kind = Kind::Gen;
    e.gen = std::move(name);
    return e;
}

FreeExpr FreeExpr::add(std::vector<FreeExpr> kids) {
    FreeExpr e;
    e.kind = Kind::Add;
    e.kids = std::move(kids);
    return e;
}

FreeExpr FreeExpr::mul(std::vector<FreeExpr> kids) {
    FreeExpr e;
    e.kind = Kind::Mul;
    e.kids = std::move(kids);
    return e;
}

FreeExpr FreeExpr::neg(FreeExpr k) {
    FreeExpr e;
    e.kind = Kind::Neg;
    e.kids.push_back(std::move(k));
    return e;
}

FreeExpr FreeExpr::pow(FreeExpr base, long ex) {
    FreeExpr e;
    e.kind = Kind::Pow;
    e.kids.push_back(std::move(base));
    e.exponent = ex;
    return e;
}

} // namespace oretower
