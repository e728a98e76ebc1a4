#pragma once

#include "oretower/basis.hpp"
#include "oretower/linalg.hpp"
#include "oretower/tower.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace oretower {

/// Element of E (x) E (or A (x) A): sparse sum of monomial pairs. Which
/// bimodule it lives in is contextual; twisted variants differ only in the
/// module actions applied to it.
struct EE {
    std::map<std::pair<Mono, Mono>, FieldValue> terms;

    bool is_zero() const { return terms.empty(); }
    void add_term(const Mono& a, const Mono& b, const FieldValue& c);
    void add_scaled(const EE& o, const FieldValue& c);
    EE operator+(const EE& o) const;
    EE operator-(const EE& o) const;
    EE operator-() const;
    bool operator==(const EE& o) const;

    static EE unit(const FieldConfigPtr& cfg); // 1 (x) 1
    static EE of(const TowerElement& a, const TowerElement& b);
};

/// outer actions: e.(m (x) m') = em (x) m',  (m (x) m').e = m (x) m'e
EE ee_left(const OreTower& t, const TowerElement& e, const EE& v);
EE ee_right(const OreTower& t, const EE& v, const TowerElement& e);
/// apply a differential entry a (x) a' by the outer structure
EE ee_outer(const OreTower& t, const EE& entry, const EE& v);
/// entry of a composite differential: (a (x) a') after (b (x) b') = ba (x) a'b'
EE ee_compose(const OreTower& t, const EE& outer, const EE& inner);
/// inner actions: e |> (m (x) m') = m (x) em,  (m (x) m') <| e = me (x) m'
EE ee_inner_left(const OreTower& t, const TowerElement& e, const EE& v);
EE ee_inner_right(const OreTower& t, const EE& v, const TowerElement& e);

/// Sum e_j (x) x^j in E (x)_A E or E (x)_A ^(sigma^-1)E over the top Ore
/// variable, with right-factor base coefficients pushed left canonically.
struct BalancedTensor {
    bool twisted = false;
    std::map<int, TowerElement> parts; // j -> e_j

    void add(int j, const TowerElement& e);
    bool is_zero() const { return parts.empty(); }
    bool operator==(const BalancedTensor& o) const;
};

/// A term sum of E (x) A^(x)n (x) E (the bar-type spots).
struct BarKey {
    Mono left;
    std::vector<Mono> mids;
    Mono right;
};
bool operator<(const BarKey& a, const BarKey& b);
bool operator==(const BarKey& a, const BarKey& b);

struct BarTensor {
    int arity = 0;
    bool twisted = false;
    std::map<BarKey, FieldValue> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const BarTensor& o) const;
};

/// Finitely supported n-cochain: basis tuples of the base algebra to values
/// in A (x) A or E (x) E (twist is a labelling; it selects the module
/// actions used on the values).
enum class CochainTarget { AA, AATw, EE_, EETw };

struct Cochain {
    int arity = 0;
    CochainTarget target = CochainTarget::AA;
    std::map<std::vector<Mono>, EE> values;
};

/// Formal sum of f (x) x^l (x) x^k spots, the carrier of the eta map and the
/// four module actions.
struct CochainFan {
    CochainTarget target = CochainTarget::AA;
    int arity = 0;
    std::map<std::pair<int, int>, Cochain> parts; // (l,k) -> cochain
};

struct ExtResult {
    GenMap twist;
    int verified_lo = 0, verified_hi = 0; // internal degree window actually checked
    std::vector<std::string> notes;
};

/// The homological engine of one tower: Lemma-2.1 sequence, bar pieces and
/// the Guccione-Guccione lifting, the theta/eta cochain maps, the iterated
/// mapping-cone resolution and the top-Ext twist reader.
class Homology {
public:
    explicit Homology(OreTowerPtr t);

    const OreTowerPtr& tower() const { return t_; }
    GradedBasis& basis() { return basis_; }

    // ---- Lemma 2.1 ----
    BalancedTensor balanced(const TowerElement& e, const TowerElement& ep, bool twisted) const;
    BalancedTensor rho(const BalancedTensor& u, bool corrupt_sign = false) const;
    TowerElement mu(const BalancedTensor& u) const;
    VerificationReport verify_ses(int degree_cap, bool corrupt_rho_sign = false) const;

    // ---- bar pieces ----
    BarTensor bar_single(const TowerElement& l, const std::vector<TowerElement>& mids,
                         const TowerElement& r, bool twisted) const;
    BarTensor bar_diff(int variant, const BarTensor& u) const;
    BarTensor psi_prime(const BarTensor& u) const;
    VerificationReport verify_lifting(int n_max, int degree_cap) const;

    // ---- cochain maps ----
    EE eval_cochain(const Cochain& f, const std::vector<TowerElement>& args) const;
    EE hoch_diff_eval(int variant, const Cochain& f, const std::vector<TowerElement>& args) const;
    Cochain hoch_diff(int variant, const Cochain& f, int degree_cap) const;
    EE theta_eval(const Cochain& f, const std::vector<TowerElement>& args) const;
    Cochain theta(const Cochain& f, int degree_cap) const;
    /// eta part i in {1,2,3} of an AA-valued cochain, evaluated exactly
    EE eta_part_eval(const Cochain& f, int which, const std::vector<TowerElement>& args,
                     bool drop_f3_sum = false) const;
    Cochain eta_part(const Cochain& f, int which, int degree_cap, bool drop_f3_sum = false) const;
    CochainFan eta_fan(const Cochain& f, int l, int k, int degree_cap,
                       bool drop_f3_sum = false) const;
    VerificationReport verify_eta_theta(int arity_max, int degree_cap,
                                        bool drop_f3_sum = false) const;
    VerificationReport verify_cocycle_transfer(int arity_max, int degree_cap) const;

    // ---- module actions on f (x) x^l (x) x^k ----
    CochainFan fan_of(const Cochain& f, int l, int k) const;
    CochainFan fan_left_x(const CochainFan& u) const;
    CochainFan fan_right_x(const CochainFan& u) const;
    CochainFan fan_left_a(const TowerElement& a, const CochainFan& u) const;
    CochainFan fan_right_a(const CochainFan& u, const TowerElement& a) const;
    /// [f, x^l (x) x^k] embedding into C^n(A, E (x) E)
    EE embed_eval(const CochainFan& u, const std::vector<TowerElement>& args) const;

    // ---- resolution and Ext ----
    struct Complex {
        std::vector<std::vector<int>> gen_degs;        // spot -> generator degrees
        std::vector<std::vector<std::vector<EE>>> diff; // diff[k][i][j], k >= 1
        int length() const { return static_cast<int>(gen_degs.size()) - 1; }
    };

    Complex build_resolution(bool alt_pivot = false) const;
    VerificationReport verify_resolution(const Complex& c, int degree_cap) const;
    ExtResult ext_top(const Complex& c, int degree_cap) const;

    // exposed for tests: degree of a monomial pair
    long pair_degree(const Mono& a, const Mono& b) const;

private:
    OreTowerPtr t_;
    mutable GradedBasis basis_;

    int top() const { return t_->size() - 1; } // index of the top Ore variable
    TowerElement top_gen() const { return t_->gen(top()); }
    TowerElement sig_inv(const TowerElement& a) const;
    TowerElement sig(const TowerElement& a) const;
    TowerElement del(const TowerElement& a) const;

    struct SpotBasis {
        std::vector<std::tuple<int, Mono, Mono>> items;
        std::map<std::tuple<int, Mono, Mono>, int> index;
        int size() const { return static_cast<int>(items.size()); }
    };
    /// basis of (+)_i E.g_i.E in internal degree d (graded) or filtration
    /// <= d (ungraded), for generators of the given degrees
    SpotBasis spot_basis(int top_level, const std::vector<int>& gen_degs, long d) const;
    std::vector<std::pair<Mono, Mono>> pair_basis(int top_level, long d) const;

    std::vector<SVec> diff_matrix_columns(const Complex& c, int k, const SpotBasis& src,
                                          const SpotBasis& dst) const;
    std::vector<SVec> dual_matrix_columns(const Complex& c, int k, const SpotBasis& src,
                                          const SpotBasis& dst) const;
};

} // namespace oretower
