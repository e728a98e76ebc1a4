#include "oretower/tower.hpp"

#include "oretower/errors.hpp"

#include <algorithm>
#include <sstream>

namespace oretower {

bool GenMap::is_identity() const {
    for (size_t i = 0; i < images.size(); ++i) {
        const auto& img = images[i];
        if (img.term_count() != 1) return false;
        const auto& [m, c] = *img.terms().begin();
        if (!(m == Mono::gen(static_cast<int>(i))) || !c.is_one()) return false;
    }
    return true;
}

OreTower::OreTower(FieldConfigPtr field, std::vector<OreLevel> levels, bool graded)
    : field_(std::move(field)), levels_(std::move(levels)), graded_(graded) {
    for (size_t i = 0; i < levels_.size(); ++i) {
        const auto& lv = levels_[i];
        if (lv.degree <= 0) throw index_out_of_range("generator degree must be positive");
        auto want = i; // one image per strictly lower generator
        if (lv.sigma.images.size() != want || lv.sigma_inv.images.size() != want ||
            lv.delta.images.size() != want)
            throw index_out_of_range("level " + lv.name + " has wrong map arity");
        for (size_t g = 0; g < want; ++g) {
            if (lv.sigma.images[g].level() > static_cast<int>(i) ||
                lv.sigma_inv.images[g].level() > static_cast<int>(i) ||
                lv.delta.images[g].level() > static_cast<int>(i))
                throw element_above_base("image of " + levels_[g].name + " at level " + lv.name +
                                         " leaves the lower subalgebra");
        }
        for (size_t j = 0; j < i; ++j)
            if (levels_[j].name == lv.name)
                throw unknown_generator("duplicate generator name '" + lv.name + "'");
    }
}

int OreTower::gen_index(const std::string& name) const {
    for (size_t i = 0; i < levels_.size(); ++i)
        if (levels_[i].name == name) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> OreTower::gen_names() const {
    std::vector<std::string> names;
    for (const auto& lv : levels_) names.push_back(lv.name);
    return names;
}

void OreTower::check_element(const TowerElement& a) const {
    if (a.level() > size()) throw tower_mismatch("element uses generators beyond this tower");
    for (const auto& [m, c] : a.terms()) {
        if (c.config() && !c.config()->same_structure(*field_))
            throw tower_mismatch("element coefficients come from a different field configuration");
        break; // one check suffices; all coefficients share a config in practice
    }
}

const GenMap& OreTower::level_map(int level, LevelMap which) const {
    const auto& lv = levels_.at(level);
    switch (which) {
        case LevelMap::Sigma: return lv.sigma;
        case LevelMap::SigmaInv: return lv.sigma_inv;
        default: return lv.delta;
    }
}

TowerElement OreTower::multiply(const TowerElement& a, const TowerElement& b) const {
    check_element(a);
    check_element(b);
    TowerElement out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms())
            out.add_scaled(mono_product(ma, mb), ca * cb);
    return out;
}

TowerElement OreTower::multiply(std::initializer_list<TowerElement> factors) const {
    TowerElement acc = one();
    for (const auto& f : factors) acc = multiply(acc, f);
    return acc;
}

TowerElement OreTower::power(const TowerElement& a, unsigned n) const {
    TowerElement acc = one();
    for (unsigned i = 0; i < n; ++i) acc = multiply(acc, a);
    return acc;
}

TowerElement OreTower::mono_product(const Mono& a, const Mono& b) const {
    if (a.is_unit()) return TowerElement::monomial(b, one_scalar());
    if (b.is_unit()) return TowerElement::monomial(a, one_scalar());
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = mono_prod_cache_.find({a, b});
        if (it != mono_prod_cache_.end()) return it->second;
    }
    int j = std::max(a.top_level(), b.top_level()) - 1; // 0-based top level in play
    unsigned e = a.exp(j), f = b.exp(j);
    Mono a_low = a, b_low = b;
    if (a.top_level() - 1 == j) a_low = a.without_top();
    if (b.top_level() - 1 == j) b_low = b.without_top();

    TowerElement result;
    Mono top_f = Mono::gen(j, f);
    if (e == 0) {
        // a entirely below j: multiply below and append x_j^f
        TowerElement low = mono_product(a_low, b_low);
        for (const auto& [m, c] : low.terms()) result.add_term(m.exp_mul(top_f), c);
    } else {
        // a = a_low * x_j^e ; push x_j^e through b_low, then recurse on the left
        TowerElement shifted = pow_times(j, e, TowerElement::monomial(b_low, one_scalar()));
        for (const auto& [m, c] : shifted.terms()) {
            unsigned k = m.exp(j);
            Mono m_low = m;
            if (m.top_level() - 1 == j) m_low = m.without_top();
            TowerElement left = mono_product(a_low, m_low);
            Mono top = Mono::gen(j, k + f);
            for (const auto& [lm, lc] : left.terms()) result.add_term(lm.exp_mul(top), lc * c);
        }
    }
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        mono_prod_cache_.emplace(std::make_pair(a, b), result);
    }
    return result;
}

TowerElement OreTower::pow_times(int level, unsigned e, const TowerElement& a) const {
    // x_level^e * a with a in the subalgebra below `level`
    TowerElement cur = a;
    for (unsigned step = 0; step < e; ++step) {
        TowerElement next;
        for (const auto& [m, c] : cur.terms()) {
            unsigned k = m.exp(level);
            Mono low = m;
            if (m.top_level() - 1 == level) low = low.without_top();
            TowerElement sg = apply_level_mono(level, LevelMap::Sigma, low);
            TowerElement dg = apply_level_mono(level, LevelMap::Delta, low);
            Mono up = Mono::gen(level, k + 1);
            Mono same = Mono::gen(level, k);
            for (const auto& [sm, sc] : sg.terms()) next.add_term(sm.exp_mul(up), sc * c);
            for (const auto& [dm, dc] : dg.terms()) next.add_term(dm.exp_mul(same), dc * c);
        }
        cur = std::move(next);
    }
    return cur;
}

TowerElement OreTower::apply_level_mono(int level, LevelMap which, const Mono& m) const {
    if (which == LevelMap::Delta) {
        if (m.is_unit()) return TowerElement::zero(); // Leibniz forces delta(1) = 0
    } else if (m.is_unit()) {
        return one();
    }
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = level_map_cache_.find({level, static_cast<int>(which), m});
        if (it != level_map_cache_.end()) return it->second;
    }
    const GenMap& map = level_map(level, which);
    TowerElement result;
    if (which == LevelMap::Delta) {
        // delta(g^e * rest) = delta(g^e) rest + sigma(g^e) delta(rest)
        int g = 0;
        while (m.exp(g) == 0) ++g;
        unsigned e = m.exp(g);
        Mono rest = m;
        rest.e[g] = 0;
        rest.trim();
        if (static_cast<size_t>(g) >= map.images.size())
            throw unknown_generator("delta image for generator index " + std::to_string(g) +
                                    " is not defined at this level");
        const TowerElement& dg = map.images[g];
        const TowerElement& sg = level_map(level, LevelMap::Sigma).images[g];
        TowerElement gen_elt = gen(g);
        // delta(g^e) = sum_i sigma(g)^i delta(g) g^(e-1-i)
        TowerElement dpow = TowerElement::zero();
        TowerElement sg_pow = one();
        for (unsigned i = 0; i < e; ++i) {
            TowerElement tail = power(gen_elt, e - 1 - i);
            dpow = dpow + multiply(multiply(sg_pow, dg), tail);
            if (i + 1 < e) sg_pow = multiply(sg_pow, sg);
        }
        TowerElement rest_elt = TowerElement::monomial(rest, one_scalar());
        result = multiply(dpow, rest_elt);
        if (!rest.is_unit()) {
            TowerElement sge = apply_level_mono(level, LevelMap::Sigma, Mono::gen(g, e));
            result = result + multiply(sge, apply_level_mono(level, LevelMap::Delta, rest));
        }
    } else {
        result = one();
        for (int g = 0; g < m.top_level(); ++g) {
            unsigned e = m.exp(g);
            if (e == 0) continue;
            if (static_cast<size_t>(g) >= map.images.size())
                throw unknown_generator("map image for generator index " + std::to_string(g) +
                                        " is not defined at this level");
            result = multiply(result, power(map.images[g], e));
        }
    }
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        level_map_cache_.emplace(std::make_tuple(level, static_cast<int>(which), m), result);
    }
    return result;
}

TowerElement OreTower::apply_level(int level, LevelMap which, const TowerElement& a) const {
    if (level < 0 || level >= size()) throw index_out_of_range("level out of range");
    if (a.level() > level) throw element_above_base("element does not lie in the level's base");
    TowerElement out;
    for (const auto& [m, c] : a.terms()) out.add_scaled(apply_level_mono(level, which, m), c);
    return out;
}

TowerElement OreTower::apply_delta(int level, const TowerElement& a) const {
    return apply_level(level, LevelMap::Delta, a);
}

TowerElement OreTower::apply_endo(const GenMap& m, const TowerElement& a) const {
    check_element(a);
    TowerElement out;
    for (const auto& [mono, c] : a.terms()) {
        TowerElement prod = one();
        for (int g = 0; g < mono.top_level(); ++g) {
            unsigned e = mono.exp(g);
            if (e == 0) continue;
            if (static_cast<size_t>(g) >= m.images.size())
                throw unknown_generator("no image for generator '" + levels_[g].name + "'");
            prod = multiply(prod, power(m.images[g], e));
        }
        out.add_scaled(prod, c);
    }
    return out;
}

TowerElement OreTower::p_op(int level, int n, int i, const TowerElement& a) const {
    if (n < 0 || i < 0 || i > n) throw index_out_of_range("p_op requires 0 <= i <= n");
    if (a.level() > level) throw element_above_base("p_op argument must lie below the level");
    // p^n_i = sigma o p^(n-1)_(i-1) + delta o p^(n-1)_i, p^0_0 = id
    std::vector<TowerElement> row{a};
    for (int step = 1; step <= n; ++step) {
        std::vector<TowerElement> next(step + 1);
        for (int k = 0; k <= step; ++k) {
            TowerElement val;
            if (k > 0) val = val + apply_level(level, LevelMap::Sigma, row[k - 1]);
            if (k < step) val = val + apply_delta(level, row[k]);
            next[k] = std::move(val);
        }
        row = std::move(next);
    }
    return row[i];
}

TowerElement OreTower::q_op(int level, int n, int i, const TowerElement& a) const {
    if (n < 0 || i < 0 || i > n) throw index_out_of_range("q_op requires 0 <= i <= n");
    if (a.level() > level) throw element_above_base("q_op argument must lie below the level");
    // q^n_i = sigma^{-1} o q^(n-1)_(i-1) - (delta o sigma^{-1}) o q^(n-1)_i
    std::vector<TowerElement> row{a};
    for (int step = 1; step <= n; ++step) {
        std::vector<TowerElement> next(step + 1);
        for (int k = 0; k <= step; ++k) {
            TowerElement val;
            if (k > 0) val = val + apply_level(level, LevelMap::SigmaInv, row[k - 1]);
            if (k < step)
                val = val - apply_delta(level, apply_level(level, LevelMap::SigmaInv, row[k]));
            next[k] = std::move(val);
        }
        row = std::move(next);
    }
    return row[i];
}

std::map<int, TowerElement> OreTower::right_normal_form(int top_level, const TowerElement& a) const {
    check_element(a);
    if (a.level() > top_level + 1) throw tower_mismatch("element lies above the requested level");
    // group left normal form by the top power, then convert each piece
    std::map<int, TowerElement> left_grouped;
    for (const auto& [m, c] : a.terms()) {
        int k = static_cast<int>(m.exp(top_level));
        Mono low = m;
        if (m.top_level() - 1 == top_level) low = low.without_top();
        left_grouped[k].add_term(low, c);
    }
    std::map<int, TowerElement> out;
    for (const auto& [e, le] : left_grouped) {
        for (int i = 0; i <= e; ++i) {
            TowerElement qi = q_op(top_level, e, i, le);
            if (!qi.is_zero()) {
                out[i] = out[i] + qi;
                if (out[i].is_zero()) out.erase(i);
            }
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

long OreTower::mono_degree(const Mono& m) const {
    long d = 0;
    for (int i = 0; i < m.top_level(); ++i) d += static_cast<long>(m.exp(i)) * levels_[i].degree;
    return d;
}

std::optional<long> OreTower::weighted_degree(const TowerElement& a) const {
    if (a.is_zero()) return std::nullopt;
    long d = 0;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        long md = mono_degree(m);
        d = first ? md : std::max(d, md);
        first = false;
    }
    return d;
}

bool OreTower::is_homogeneous(const TowerElement& a) const {
    if (a.is_zero()) return true;
    std::optional<long> d;
    for (const auto& [m, c] : a.terms()) {
        long md = mono_degree(m);
        if (d && *d != md) return false;
        d = md;
    }
    return true;
}

VerificationReport OreTower::verify_level(int i) const {
    VerificationReport rep;
    const auto& lv = levels_.at(i);
    auto id = [&](int g) { return gen(g); };

    // (c) sigma and sigma_inv invert each other on generators
    for (int g = 0; g < i; ++g) {
        TowerElement si = apply_level(i, LevelMap::SigmaInv, lv.sigma.images[g]);
        TowerElement is = apply_level(i, LevelMap::Sigma, lv.sigma_inv.images[g]);
        bool ok = si == id(g) && is == id(g);
        rep.add("level " + lv.name + ": sigma*sigma_inv = id on " + levels_[g].name, ok,
                ok ? "" : "witness: " + levels_[g].name);
        if (!ok) return rep;
    }

    // (a), (b), (d): the maps respect every lower rewrite relation
    for (int gj = 1; gj < i; ++gj) {
        for (int gl = 0; gl < gj; ++gl) {
            TowerElement rel = multiply(id(gj), id(gl)); // normal form of x_j g_l
            {
                TowerElement lhs = apply_level(i, LevelMap::Sigma, rel);
                TowerElement rhs = multiply(lv.sigma.images[gj], lv.sigma.images[gl]);
                bool ok = lhs == rhs;
                rep.add("level " + lv.name + ": sigma respects " + levels_[gj].name + "*" +
                            levels_[gl].name, ok,
                        ok ? "" : "witness pair (" + levels_[gj].name + "," + levels_[gl].name + ")");
                if (!ok) return rep;
            }
            {
                TowerElement lhs = apply_level(i, LevelMap::SigmaInv, rel);
                TowerElement rhs = multiply(lv.sigma_inv.images[gj], lv.sigma_inv.images[gl]);
                bool ok = lhs == rhs;
                rep.add("level " + lv.name + ": sigma_inv respects " + levels_[gj].name + "*" +
                            levels_[gl].name, ok,
                        ok ? "" : "witness pair (" + levels_[gj].name + "," + levels_[gl].name + ")");
                if (!ok) return rep;
            }
            {
                TowerElement lhs = apply_delta(i, rel);
                TowerElement rhs = multiply(lv.delta.images[gj], id(gl)) +
                                   multiply(lv.sigma.images[gj], lv.delta.images[gl]);
                bool ok = lhs == rhs;
                rep.add("level " + lv.name + ": delta Leibniz on " + levels_[gj].name + "*" +
                            levels_[gl].name, ok,
                        ok ? "" : "witness pair (" + levels_[gj].name + "," + levels_[gl].name + ")");
                if (!ok) return rep;
            }
        }
    }

    // (e) grading: sigma degree-preserving, delta of degree deg(x_i)
    if (graded_) {
        for (int g = 0; g < i; ++g) {
            const auto& s = lv.sigma.images[g];
            const auto& si = lv.sigma_inv.images[g];
            const auto& d = lv.delta.images[g];
            bool ok = is_homogeneous(s) && weighted_degree(s) == std::optional<long>(levels_[g].degree) &&
                      is_homogeneous(si) && weighted_degree(si) == std::optional<long>(levels_[g].degree) &&
                      is_homogeneous(d) &&
                      (d.is_zero() ||
                       weighted_degree(d) == std::optional<long>(levels_[g].degree + lv.degree));
            rep.add("level " + lv.name + ": graded homogeneity on " + levels_[g].name, ok,
                    ok ? "" : "witness: " + levels_[g].name);
            if (!ok) return rep;
        }
    }
    if (rep.checks.empty()) rep.add("level " + lv.name + ": trivial base, nothing to check", true);
    return rep;
}

VerificationReport OreTower::verify_all() const {
    VerificationReport rep;
    for (int i = 0; i < size(); ++i) rep.merge(verify_level(i));
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        verified_cache_ = rep.ok();
    }
    return rep;
}

bool OreTower::verified() const {
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        if (verified_cache_) return *verified_cache_;
    }
    return verify_all().ok();
}

TowerElement OreTower::eval_free_expr(const FreeExpr& e) const {
    switch (e.kind) {
        case FreeExpr::Kind::Scalar: return TowerElement::scalar(e.scalar);
        case FreeExpr::Kind::Gen: {
            int i = gen_index(e.gen);
            if (i < 0) throw unknown_generator("unknown generator '" + e.gen + "'");
            return gen(i);
        }
        case FreeExpr::Kind::Add: {
            TowerElement acc;
            for (const auto& k : e.kids) acc = acc + eval_free_expr(k);
            return acc;
        }
        case FreeExpr::Kind::Mul: {
            TowerElement acc = one();
            for (const auto& k : e.kids) acc = multiply(acc, eval_free_expr(k));
            return acc;
        }
        case FreeExpr::Kind::Neg: return -eval_free_expr(e.kids[0]);
        case FreeExpr::Kind::Pow: {
            TowerElement base = eval_free_expr(e.kids[0]);
            if (e.exponent >= 0) return power(base, static_cast<unsigned>(e.exponent));
            auto s = base.as_scalar();
            if (!s) throw division_by_zero("negative power of a non-scalar element");
            return TowerElement::scalar(s->pow(e.exponent));
        }
    }
    return {};
}

std::string OreTower::render(const TowerElement& a) const {
    if (a.is_zero()) return "0";
    auto names = gen_names();
    // deglex-descending iteration for stable, readable reports
    std::vector<std::pair<Mono, FieldValue>> terms(a.terms().begin(), a.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& x, const auto& y) {
        long dx = mono_degree(x.first), dy = mono_degree(y.first);
        if (dx != dy) return dx > dy;
        return y.first < x.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms) {
        std::string cs = c.to_string();
        bool neg = cs.size() > 1 && cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos &&
                   cs.find('(') == std::string::npos;
        if (neg) cs = cs.substr(1);
        bool compound = cs.find_first_of("+-") != std::string::npos && cs.find('(') != 0;
        if (first) {
            if (neg) out << "-";
        } else {
            out << (neg ? " - " : " + ");
        }
        first = false;
        if (m.is_unit()) {
            out << (compound ? "(" + cs + ")" : cs);
        } else if (cs == "1") {
            out << m.to_string(names);
        } else {
            out << (compound ? "(" + cs + ")" : cs) << "*" << m.to_string(names);
        }
    }
    return out.str();
}

} // namespace oretower
