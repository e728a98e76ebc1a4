#pragma once

#include "oretower/field.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace oretower {

/// Sparse vector with entries sorted by index.
struct SVec {
    std::vector<std::pair<int, FieldValue>> ents;

    bool is_zero() const { return ents.empty(); }
    void push(int i, FieldValue c) {
        if (!c.is_zero()) ents.emplace_back(i, std::move(c));
    }
    void sort_merge();
};

/// Incremental row-span tracker over the exact coefficient field with
/// canonical residuals (fully reduced echelon). Elimination runs over a
/// specialized scalar when the field is plain Q or a numeric quadratic
/// extension, and over FieldValue otherwise.
class ImageReducer {
public:
    ImageReducer(FieldConfigPtr cfg, int dim);
    ~ImageReducer();
    ImageReducer(ImageReducer&&) noexcept;
    ImageReducer& operator=(ImageReducer&&) noexcept;

    void add(const SVec& v);
    int rank() const;
    int dim() const;
    /// canonical representative of v modulo the tracked span
    SVec reduce(const SVec& v) const;
    bool contains(const SVec& v) const { return reduce(v).is_zero(); }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

int matrix_rank(const FieldConfigPtr& cfg, int dim, const std::vector<SVec>& cols);

/// Solves sum_j x_j * cols[j] = rhs; returns the particular solution with
/// free coordinates zero, chosen by first-pivot elimination in column order.
std::optional<std::vector<FieldValue>> solve_columns(const FieldConfigPtr& cfg, int dim,
                                                     const std::vector<SVec>& cols, const SVec& rhs);

/// Small dense affine systems in named unknowns (used by the Nakayama
/// constraint and merge solvers).
struct AffineEquation {
    std::map<int, FieldValue> coeffs; // unknown id -> coefficient
    FieldValue rhs;
};

struct AffineSolution {
    enum class Status { Unique, Underdetermined, Inconsistent };
    Status status = Status::Unique;
    std::map<int, FieldValue> assignment; // valid when Unique
    int solution_dim = 0;                 // affine dimension when Underdetermined
};

AffineSolution solve_affine(const FieldConfigPtr& cfg, const std::vector<AffineEquation>& eqs,
                            const std::vector<int>& unknown_ids);

} // namespace oretower
