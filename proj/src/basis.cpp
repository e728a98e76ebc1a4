#include "oretower/basis.hpp"

namespace oretower {

namespace {

void enumerate(const OreTower& t, int top_level, int d, int next, std::vector<unsigned>& cur,
               std::vector<Mono>& out) {
    if (d == 0) {
        Mono m;
        m.e = cur;
        m.trim();
        out.push_back(std::move(m));
        return;
    }
    if (next >= top_level) return;
    int deg = t.gen_degree(next);
    // remaining generators must be able to absorb d exactly; just recurse
    for (int e = 0; e * deg <= d; ++e) {
        cur[next] = static_cast<unsigned>(e);
        enumerate(t, top_level, d - e * deg, next + 1, cur, out);
    }
    cur[next] = 0;
}

} // namespace

const std::vector<Mono>& GradedBasis::of_degree(int top_level, int d) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(top_level, d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Mono> out;
    if (d >= 0) {
        std::vector<unsigned> cur(top_level, 0);
        enumerate(*tower_, top_level, d, 0, cur, out);
        std::sort(out.begin(), out.end());
    }
    return cache_.emplace(key, std::move(out)).first->second;
}

std::vector<Mono> GradedBasis::up_to_degree(int top_level, int d) const {
    std::vector<Mono> out;
    for (int k = 0; k <= d; ++k) {
        const auto& part = of_degree(top_level, k);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

int GradedBasis::dim(int top_level, int d) const {
    return static_cast<int>(of_degree(top_level, d).size());
}

int GradedBasis::index_of(int top_level, const Mono& m) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_cache_.find({top_level, m});
        if (it != index_cache_.end()) return it->second;
    }
    int d = static_cast<int>(tower_->mono_degree(m));
    const auto& basis = of_degree(top_level, d);
    int idx = -1;
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == m) {
            idx = static_cast<int>(i);
            break;
        }
    std::lock_guard<std::mutex> lock(mu_);
    index_cache_.emplace(std::make_pair(top_level, m), idx);
    return idx;
}

} // namespace oretower
