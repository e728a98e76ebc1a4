#pragma once

#include "oretower/tower.hpp"

#include <map>
#include <vector>

namespace oretower {

/// Per-degree monomial bases of a tower (and of its lower subalgebras),
/// enumerated deterministically: within one weighted degree, monomials come
/// in lexicographic exponent order. Doubles as the Hilbert-series ledger.
class GradedBasis {
public:
    explicit GradedBasis(OreTowerPtr tower) : tower_(std::move(tower)) {}

    const OreTowerPtr& tower() const { return tower_; }

    /// monomials of exact weighted degree d using only generators < top_level
    const std::vector<Mono>& of_degree(int top_level, int d) const;
    /// filtration layer: all monomials of weighted degree <= d
    std::vector<Mono> up_to_degree(int top_level, int d) const;
    int dim(int top_level, int d) const;

    /// index of a monomial inside of_degree(top_level, deg(m)); -1 if absent
    int index_of(int top_level, const Mono& m) const;

private:
    OreTowerPtr tower_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::vector<Mono>> cache_;
    mutable std::map<std::pair<int, Mono>, int> index_cache_;
};

} // namespace oretower
