#pragma once

#include "oretower/element.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace oretower {

/// Images of strictly lower generators under one of a level's structure maps.
struct GenMap {
    std::vector<TowerElement> images; // images[i] = image of generator i

    bool is_identity() const;
};

struct OreLevel {
    std::string name;
    int degree = 1;
    GenMap sigma, sigma_inv, delta; // level 1 carries empty maps
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // witness on failure, verified range on success
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    void add(std::string name, bool passed, std::string detail = "") {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }
    void merge(const VerificationReport& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }
};

/// The iterated Ore extension. Immutable after construction; the product
/// and the structure-map extensions are pure (internal caches are guarded).
class OreTower {
public:
    OreTower(FieldConfigPtr field, std::vector<OreLevel> levels, bool graded);

    const FieldConfigPtr& field() const { return field_; }
    const std::vector<OreLevel>& levels() const { return levels_; }
    int size() const { return static_cast<int>(levels_.size()); }
    bool graded() const { return graded_; }
    int gen_index(const std::string& name) const; // -1 if absent
    const std::string& gen_name(int i) const { return levels_[i].name; }
    std::vector<std::string> gen_names() const;
    int gen_degree(int i) const { return levels_[i].degree; }

    FieldValue one_scalar() const { return FieldValue::one(field_); }
    TowerElement one() const { return TowerElement::scalar(one_scalar()); }
    TowerElement gen(int i) const { return TowerElement::monomial(Mono::gen(i), one_scalar()); }

    /// left normal form of a*b via the rewrite rule x a = sigma(a) x + delta(a)
    TowerElement multiply(const TowerElement& a, const TowerElement& b) const;
    TowerElement multiply(std::initializer_list<TowerElement> factors) const;
    TowerElement power(const TowerElement& a, unsigned n) const;

    /// ring-homomorphic extension of a generator map
    TowerElement apply_endo(const GenMap& m, const TowerElement& a) const;
    /// sigma/sigma_inv/delta of a level applied to an element of its base
    enum class LevelMap { Sigma, SigmaInv, Delta };
    TowerElement apply_level(int level, LevelMap which, const TowerElement& a) const;
    TowerElement apply_delta(int level, const TowerElement& a) const;

    /// coefficient operators of x^n a = sum_i p^n_i(a) x^i and
    /// a x^n = sum_i x^i q^n_i(a)
    TowerElement p_op(int level, int n, int i, const TowerElement& a) const;
    TowerElement q_op(int level, int n, int i, const TowerElement& a) const;

    /// a = sum_j x_top^j * c_j with right coefficients below top_level
    std::map<int, TowerElement> right_normal_form(int top_level, const TowerElement& a) const;

    std::optional<long> weighted_degree(const TowerElement& a) const;
    bool is_homogeneous(const TowerElement& a) const;
    long mono_degree(const Mono& m) const;

    VerificationReport verify_level(int i) const;
    VerificationReport verify_all() const;
    bool verified() const; // runs verify_all once and caches the outcome

    TowerElement eval_free_expr(const FreeExpr& e) const;

    std::string render(const TowerElement& a) const;

private:
    FieldConfigPtr field_;
    std::vector<OreLevel> levels_;
    bool graded_;

    mutable std::mutex cache_mu_;
    mutable std::map<std::pair<Mono, Mono>, TowerElement> mono_prod_cache_;
    mutable std::map<std::tuple<int, int, Mono>, TowerElement> level_map_cache_;
    mutable std::optional<bool> verified_cache_;

    void check_element(const TowerElement& a) const;
    TowerElement mono_product(const Mono& a, const Mono& b) const;
    TowerElement apply_level_mono(int level, LevelMap which, const Mono& m) const;
    /// x_level^e * a for a strictly below level; returns the expanded element
    TowerElement pow_times(int level, unsigned e, const TowerElement& a) const;
    const GenMap& level_map(int level, LevelMap which) const;
};

using OreTowerPtr = std::shared_ptr<const OreTower>;

} // namespace oretower
