#include "oretower/linalg.hpp"

#include "oretower/errors.hpp"

#include <algorithm>
#include <cassert>
#include <variant>

namespace oretower {

void SVec::sort_merge() {
    std::sort(ents.begin(), ents.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, FieldValue>> out;
    for (auto& e : ents) {
        if (!out.empty() && out.back().first == e.first)
            out.back().second = out.back().second + e.second;
        else
            out.push_back(std::move(e));
        if (!out.empty() && out.back().second.is_zero()) out.pop_back();
    }
    ents = std::move(out);
}

namespace {

// ---- scalar flavors ------------------------------------------------------

struct RatField {
    using S = Rat;
    FieldConfigPtr cfg;

    S from(const FieldValue& v) const { return v.is_zero() ? Rat(0) : v.rational_value(); }
    FieldValue to(const S& s) const { return FieldValue::of_rat(cfg, s); }
    static bool is_zero(const S& s) { return s == 0; }
    static S add(const S& a, const S& b) { return a + b; }
    static S sub(const S& a, const S& b) { return a - b; }
    static S mul(const S& a, const S& b) { return a * b; }
    static S div(const S& a, const S& b) { return a / b; }
    static S neg(const S& a) { return -a; }
};

struct QuadField {
    using S = std::pair<Rat, Rat>; // u + v*alpha
    FieldConfigPtr cfg;
    Rat m1, m0;

    S from(const FieldValue& x) const {
        if (x.is_zero()) return {Rat(0), Rat(0)};
        return {x.u().is_zero() ? Rat(0) : x.u().constant_value(),
                x.v().is_zero() ? Rat(0) : x.v().constant_value()};
    }
    FieldValue to(const S& s) const {
        if (s.first == 0 && s.second == 0) return {};
        return FieldValue(cfg, Frac::of_rat(0, s.first), Frac::of_rat(0, s.second));
    }
    static bool is_zero(const S& s) { return s.first == 0 && s.second == 0; }
    static S add(const S& a, const S& b) { return {a.first + b.first, a.second + b.second}; }
    static S sub(const S& a, const S& b) { return {a.first - b.first, a.second - b.second}; }
    S mul(const S& a, const S& b) const {
        Rat vv = a.second * b.second;
        return {a.first * b.first + vv * m0, a.first * b.second + a.second * b.first + vv * m1};
    }
    S inv(const S& a) const {
        Rat n = a.first * a.first + m1 * a.first * a.second - m0 * a.second * a.second;
        if (n == 0) throw division_by_zero("quadratic norm vanishes");
        return {(a.first + a.second * m1) / n, -a.second / n};
    }
    S div(const S& a, const S& b) const { return mul(a, inv(b)); }
    static S neg(const S& a) { return {-a.first, -a.second}; }
};

struct GenField {
    using S = FieldValue;
    FieldConfigPtr cfg;

    S from(const FieldValue& v) const { return v; }
    FieldValue to(const S& s) const { return s; }
    static bool is_zero(const S& s) { return s.is_zero(); }
    static S add(const S& a, const S& b) { return a + b; }
    static S sub(const S& a, const S& b) { return a - b; }
    S mul(const S& a, const S& b) const { return a * b; }
    S div(const S& a, const S& b) const { return a / b; }
    static S neg(const S& a) { return -a; }
};

template <class F>
struct Row {
    int pivot = -1;
    std::vector<std::pair<int, typename F::S>> ents; // sorted by index; ents[0] is the pivot with value 1
};

// Fully reduced (Gauss-Jordan) echelon with deterministic first-nonzero
// pivoting; canonical residuals come for free.
template <class F>
class EchelonT {
public:
    explicit EchelonT(F field, int dim) : field_(std::move(field)), dim_(dim) {}

    using S = typename F::S;
    using Sparse = std::vector<std::pair<int, S>>;

    Sparse convert(const SVec& v) const {
        Sparse out;
        out.reserve(v.ents.size());
        for (const auto& [i, c] : v.ents) {
            S s = field_.from(c);
            if (!F::is_zero(s)) out.emplace_back(i, s);
        }
        return out;
    }

    SVec convert_back(const Sparse& v) const {
        SVec out;
        for (const auto& [i, s] : v) out.push(i, field_.to(s));
        return out;
    }

    // r -= c * row (row sorted, entries >= row.pivot)
    static Sparse axpy(const Sparse& r, const S& c, const Sparse& row, const F& f) {
        Sparse out;
        out.reserve(r.size() + row.size());
        size_t i = 0, j = 0;
        while (i < r.size() || j < row.size()) {
            if (j == row.size() || (i < r.size() && r[i].first < row[j].first)) {
                out.push_back(r[i++]);
            } else if (i == r.size() || r[i].first > row[j].first) {
                S val = F::neg(f.mul(c, row[j].second));
                if (!F::is_zero(val)) out.emplace_back(row[j].first, std::move(val));
                ++j;
            } else {
                S val = F::sub(r[i].second, f.mul(c, row[j].second));
                if (!F::is_zero(val)) out.emplace_back(r[i].first, std::move(val));
                ++i, ++j;
            }
        }
        return out;
    }

    Sparse reduce_sparse(Sparse v) const {
        size_t k = 0;
        while (k < v.size()) {
            auto it = by_pivot_.find(v[k].first);
            if (it == by_pivot_.end()) {
                ++k;
                continue;
            }
            v = axpy(v, v[k].second, rows_[it->second].ents, field_);
            // re-scan from the same sparse position: indices below v[k] are unchanged
        }
        return v;
    }

    void add(const SVec& sv) {
        Sparse v = reduce_sparse(convert(sv));
        if (v.empty()) return;
        int piv = v[0].first;
        S lead = v[0].second;
        for (auto& [i, s] : v) s = field_.div(s, lead);
        // eliminate the new pivot from existing rows
        for (auto& row : rows_) {
            auto pos = std::lower_bound(row.ents.begin(), row.ents.end(), piv,
                                        [](const auto& a, int b) { return a.first < b; });
            if (pos != row.ents.end() && pos->first == piv)
                row.ents = axpy(row.ents, pos->second, v, field_);
        }
        Row<F> r;
        r.pivot = piv;
        r.ents = std::move(v);
        by_pivot_.emplace(piv, static_cast<int>(rows_.size()));
        rows_.push_back(std::move(r));
    }

    SVec reduce(const SVec& sv) const { return convert_back(reduce_sparse(convert(sv))); }

    int rank() const { return static_cast<int>(rows_.size()); }
    int dim() const { return dim_; }

private:
    F field_;
    int dim_;
    std::vector<Row<F>> rows_;
    std::map<int, int> by_pivot_;
};

enum class Flavor { Rational, Quadratic, Generic };

Flavor flavor_of(const FieldConfigPtr& cfg) {
    if (!cfg) return Flavor::Rational;
    if (!cfg->params.empty()) return Flavor::Generic;
    if (!cfg->algebraic) return Flavor::Rational;
    if (cfg->algebraic->m1.is_constant() && cfg->algebraic->m0.is_constant())
        return Flavor::Quadratic;
    return Flavor::Generic;
}

} // namespace

struct ImageReducer::Impl {
    std::variant<EchelonT<RatField>, EchelonT<QuadField>, EchelonT<GenField>> ech;

    Impl(FieldConfigPtr cfg, int dim)
        : ech(make(std::move(cfg), dim)) {}

    static std::variant<EchelonT<RatField>, EchelonT<QuadField>, EchelonT<GenField>> make(
        FieldConfigPtr cfg, int dim) {
        switch (flavor_of(cfg)) {
            case Flavor::Rational: return EchelonT<RatField>(RatField{cfg}, dim);
            case Flavor::Quadratic:
                return EchelonT<QuadField>(
                    QuadField{cfg, cfg->algebraic->m1.constant_value(),
                              cfg->algebraic->m0.constant_value()},
                    dim);
            default: return EchelonT<GenField>(GenField{cfg}, dim);
        }
    }
};

ImageReducer::ImageReducer(FieldConfigPtr cfg, int dim)
    : impl_(std::make_unique<Impl>(std::move(cfg), dim)) {}
ImageReducer::~ImageReducer() = default;
ImageReducer::ImageReducer(ImageReducer&&) noexcept = default;
ImageReducer& ImageReducer::operator=(ImageReducer&&) noexcept = default;

void ImageReducer::add(const SVec& v) {
    std::visit([&](auto& e) { e.add(v); }, impl_->ech);
}

int ImageReducer::rank() const {
    return std::visit([&](auto& e) { return e.rank(); }, impl_->ech);
}

int ImageReducer::dim() const {
    return std::visit([&](auto& e) { return e.dim(); }, impl_->ech);
}

SVec ImageReducer::reduce(const SVec& v) const {
    return std::visit([&](auto& e) { return e.reduce(v); }, impl_->ech);
}

int matrix_rank(const FieldConfigPtr& cfg, int dim, const std::vector<SVec>& cols) {
    ImageReducer red(cfg, dim);
    for (const auto& c : cols) red.add(c);
    return red.rank();
}

std::optional<std::vector<FieldValue>> solve_columns(const FieldConfigPtr& cfg, int dim,
                                                     const std::vector<SVec>& cols,
                                                     const SVec& rhs) {
    // Augment each column with a tracking tail so the reduction of rhs
    // exposes the combination: coordinates dim..dim+n-1 carry -x_j.
    int n = static_cast<int>(cols.size());
    ImageReducer red(cfg, dim + n);
    for (int j = 0; j < n; ++j) {
        SVec aug = cols[j];
        aug.push(dim + j, FieldValue::one(cfg));
        aug.sort_merge();
        red.add(aug);
    }
    SVec res = red.reduce(rhs);
    std::vector<FieldValue> sol(n);
    for (const auto& [i, c] : res.ents) {
        if (i < dim) return std::nullopt; // rhs not in the column span
        sol[i - dim] = -c;
    }
    return sol;
}

AffineSolution solve_affine(const FieldConfigPtr& cfg, const std::vector<AffineEquation>& eqs,
                            const std::vector<int>& unknown_ids) {
    // dense elimination over FieldValue; systems here are tiny
    int n = static_cast<int>(unknown_ids.size());
    std::map<int, int> col_of;
    for (int j = 0; j < n; ++j) col_of[unknown_ids[j]] = j;
    std::vector<std::vector<FieldValue>> rows;
    for (const auto& eq : eqs) {
        std::vector<FieldValue> row(n + 1);
        for (const auto& [id, c] : eq.coeffs) {
            auto it = col_of.find(id);
            if (it == col_of.end()) {
                if (!c.is_zero()) throw index_out_of_range("equation mentions an unlisted unknown");
                continue;
            }
            row[it->second] = c;
        }
        row[n] = eq.rhs;
        rows.push_back(std::move(row));
    }
    std::vector<int> pivot_of_col(n, -1);
    int r = 0;
    for (int c = 0; c < n && r < static_cast<int>(rows.size()); ++c) {
        int p = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (!rows[i][c].is_zero()) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(rows[p], rows[r]);
        FieldValue inv = rows[r][c].inv();
        for (int k = c; k <= n; ++k) rows[r][k] = rows[r][k] * inv;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            FieldValue f = rows[i][c];
            for (int k = c; k <= n; ++k) rows[i][k] = rows[i][k] - f * rows[r][k];
        }
        pivot_of_col[c] = r;
        ++r;
    }
    AffineSolution out;
    for (int i = r; i < static_cast<int>(rows.size()); ++i)
        if (!rows[i][n].is_zero()) {
            out.status = AffineSolution::Status::Inconsistent;
            return out;
        }
    if (r < n) {
        out.status = AffineSolution::Status::Underdetermined;
        out.solution_dim = n - r;
        return out;
    }
    out.status = AffineSolution::Status::Unique;
    for (int c = 0; c < n; ++c) out.assignment[unknown_ids[c]] = rows[pivot_of_col[c]][n];
    return out;
}

} // namespace oretower
