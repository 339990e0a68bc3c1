#ifndef VOAWB_LIE_HPP
#define VOAWB_LIE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "voawb/linalg.hpp"
#include "voawb/numberfield.hpp"
#include "voawb/scalar.hpp"

namespace voawb {

/// Finite dimensional simple Lie algebra presented by structure constants in
/// an orthonormal basis of the normalized invariant form. The shipped
/// instance is sl2; everything downstream is keyed only on (dim, C, h_dual).
struct LieAlgebra {
    int dim = 0;
    Rat h_dual;                        // dual Coxeter number
    std::vector<NF> C;                 // C[i][j][k] flattened, [tau_i,tau_j]=C_{ijk} tau_k

    const NF& c(int i, int j, int k) const { return C[(size_t)(i * dim + j) * dim + k]; }
    NF& c(int i, int j, int k) { return C[(size_t)(i * dim + j) * dim + k]; }

    static LieAlgebra sl2();

    bool check_antisymmetry() const;
    bool check_jacobi() const;
    /// C_{ipq} C_{jqp} summed over p,q; equals 2 h_dual delta_{ij}.
    NF contraction(int i, int j) const;
};

/// Irreducible sl2 module in the weight basis, or its dual. Action matrices
/// for {e,h,f} are integral; the orthonormal frame matrices pick up i and
/// sqrt2 and are built on demand.
class Irrep {
public:
    Irrep() = default;
    static Irrep highest_weight(int n);
    static Irrep dual_of(int n);

    int weight() const { return n_; }
    bool is_dual() const { return dual_; }
    int dim() const { return n_ + 1; }
    /// h-eigenvalue of basis vector j.
    int wt(int j) const { return dual_ ? -(n_ - 2 * j) : (n_ - 2 * j); }

    const Mat<NF>& act_e() const { return e_; }
    const Mat<NF>& act_f() const { return f_; }
    const Mat<NF>& act_h() const { return h_; }
    /// Orthonormal-frame action matrix, i = 0,1,2 for sl2.
    const Mat<NF>& act_tau(int i) const { return tau_[i]; }
    /// Sum_i tau_i tau_i; acts as (lambda, lambda+2rho) Id.
    Mat<NF> casimir() const;

private:
    int n_ = 0;
    bool dual_ = false;
    Mat<NF> e_, f_, h_;
    std::vector<Mat<NF>> tau_;
};

/// Equivariant map V_lambda (x) V_mu -> V_nu (all three dual when dual=true).
/// Stored as a dim(nu) x (dim(lambda)*dim(mu)) matrix; column index a*dim(mu)+b.
struct HomTensor {
    int lam = 0, mu = 0, nu = 0;
    bool dual = false;
    Mat<NF> m;
};

/// Equivariant map V_a (x) V_b (x) V_c -> V_gamma, column index (a*db+b)*dc+c.
struct HomTensor3 {
    int l1 = 0, l2 = 0, l3 = 0, gam = 0;
    bool dual = false;
    Mat<NF> m;
};

/// (lambda, lambda + 2 rho) under the normalized form; (n^2+2n)/2 for sl2.
Rat casimir_eigenvalue(int n);

/// Conformal weight Delta(lambda) = (lambda, lambda+2rho) / (2(k + h_dual)).
template <class F>
F conformal_weight(int n, const F& level) {
    F kappa = level + F::from_rat(Rat(2));
    if (kappa.is_zero()) throw CriticalLevel("conformal weight at kappa = 0");
    return F::from_rat(casimir_eigenvalue(n)) / (kappa * F::from_rat(Rat(2)));
}

/// sl2 tensor decomposition: weights |a-b|, |a-b|+2, ..., a+b.
std::vector<int> fusion_channels(int a, int b);

/// Shared, immutable representation data: irreps, invariant Hom spaces and
/// their dual bases. Populate before any parallel phase; reads are const.
class LieCtx {
public:
    LieCtx() : g_(LieAlgebra::sl2()) {}

    const LieAlgebra& algebra() const { return g_; }
    const Irrep& irrep(int n, bool dual = false);

    /// Echelon-normalized basis of Hom(V_l (x) V_m, V_n) (dual: all starred).
    const std::vector<HomTensor>& hom_basis(int l, int m, int n, bool dual = false);
    const std::vector<HomTensor3>& hom_basis3(int l1, int l2, int l3, int gam, bool dual = false);

    /// Dual pair ({f_i}, {g_i}) with (f_i, g_j) = delta_{ij}; throws EmptyChannel.
    const std::pair<std::vector<HomTensor>, std::vector<HomTensor>>& dual_basis(int l, int m, int n);

    static NF pairing(const HomTensor& f, const HomTensor& g);
    static NF pairing3(const HomTensor3& f, const HomTensor3& g);

private:
    LieAlgebra g_;
    // caches fill lazily; entries are immutable once created
    std::recursive_mutex mu_;
    std::map<std::pair<int, int>, Irrep> irreps_;
    std::map<std::tuple<int, int, int, int>, std::vector<HomTensor>> homs_;
    std::map<std::tuple<int, int, int, int, int>, std::vector<HomTensor3>> homs3_;
    std::map<std::tuple<int, int, int>, std::pair<std::vector<HomTensor>, std::vector<HomTensor>>> duals_;
};

/// Applies an orthonormal-frame basis element to coordinates over any field
/// containing Q(i,sqrt2).
template <class F>
std::vector<F> irrep_action(const Irrep& V, int tau_index, const std::vector<F>& v) {
    if ((int)v.size() != V.dim()) throw DimensionMismatch("irrep_action vector length");
    const Mat<NF>& X = V.act_tau(tau_index);
    std::vector<F> out(v.size(), F::zero());
    for (int p = 0; p < X.rows(); ++p)
        for (int q = 0; q < X.cols(); ++q) {
            if (X(p, q).is_zero() || v[q].is_zero()) continue;
            out[p] += F::from_nf(X(p, q)) * v[q];
        }
    return out;
}

} // namespace voawb

#endif
