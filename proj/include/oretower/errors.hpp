#pragma once

#include <stdexcept>
#include <string>

namespace oretower {

// Error kinds are stable strings used by the CLI to map failures to exit
// codes and report entries.
class OreError : public std::runtime_error {
public:
    OreError(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

inline OreError division_by_zero(const std::string& msg) { return {"DivisionByZero", msg}; }
inline OreError parameter_mismatch(const std::string& msg) { return {"ParameterMismatch", msg}; }
inline OreError no_algebraic_element(const std::string& msg) { return {"NoAlgebraicElement", msg}; }
inline OreError denominator_vanishes(const std::string& msg) { return {"DenominatorVanishes", msg}; }
inline OreError unbound_parameter(const std::string& msg) { return {"UnboundParameter", msg}; }
inline OreError tower_mismatch(const std::string& msg) { return {"TowerMismatch", msg}; }
inline OreError unknown_generator(const std::string& msg) { return {"UnknownGenerator", msg}; }
inline OreError element_above_base(const std::string& msg) { return {"ElementAboveBase", msg}; }
inline OreError index_out_of_range(const std::string& msg) { return {"IndexOutOfRange", msg}; }
inline OreError arity_mismatch(const std::string& msg) { return {"ArityMismatch", msg}; }
inline OreError unverified_tower(const std::string& msg) { return {"UnverifiedTower", msg}; }
inline OreError inconsistent_realizations(const std::string& msg) { return {"InconsistentRealizations", msg}; }
inline OreError no_solution(const std::string& msg) { return {"NoSolution", msg}; }
inline OreError undetermined(const std::string& msg) { return {"Undetermined", msg}; }
inline OreError lifting_failed(const std::string& msg) { return {"LiftingFailed", msg}; }
inline OreError not_rank_one(const std::string& msg) { return {"NotRankOne", msg}; }
inline OreError vanishing_fails(const std::string& msg) { return {"VanishingFails", msg}; }
inline OreError cap_too_small(const std::string& msg) { return {"CapTooSmall", msg}; }

} // namespace oretower
