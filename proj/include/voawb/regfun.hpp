#ifndef VOAWB_REGFUN_HPP
#define VOAWB_REGFUN_HPP

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "voawb/combinat.hpp"
#include "voawb/lie.hpp"

namespace voawb {

/// Polynomial in the coordinates x11, x12, x21, x22 of the defining matrix,
/// reduced modulo the determinant relation x11*x22 - x12*x21 = 1. Normal
/// form: no monomial contains both x11 and x22. Serves as an independent
/// oracle for the Peter-Weyl block arithmetic.
template <class F>
class MirrorPoly {
public:
    using Expo = std::array<int, 4>; // e11, e12, e21, e22 with e11*e22 = 0
    std::map<Expo, F> terms;

    static MirrorPoly zero() { return {}; }
    static MirrorPoly constant(const F& c) {
        MirrorPoly p;
        if (!c.is_zero()) p.terms[{0, 0, 0, 0}] = c;
        return p;
    }
    static MirrorPoly coordinate(int a, int b) { // x_{ab}, 0-based
        MirrorPoly p;
        Expo e{0, 0, 0, 0};
        e[a * 2 + b] = 1;
        p.terms[e] = F::one();
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        return d;
    }

    void add_term(const Expo& e, const F& c) {
        if (c.is_zero()) return;
        auto it = terms.find(e);
        if (it == terms.end()) {
            terms[e] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    /// Accumulates c * monomial(e), rewriting x11^a x22^b via the
    /// determinant relation until the normal form is reached.
    void add_reduced(Expo e, const F& c) {
        int m = std::min(e[0], e[3]);
        if (m == 0) {
            add_term(e, c);
            return;
        }
        // x11^a x22^b = sum_t binom(m,t) x12^t x21^t x11^{a-m} x22^{b-m}
        for (int t = 0; t <= m; ++t) {
            Expo r{e[0] - m, e[1] + t, e[2] + t, e[3] - m};
            add_term(r, c * F::from_rat(binom_rat(m, t)));
        }
    }

    MirrorPoly operator+(const MirrorPoly& o) const {
        MirrorPoly r = *this;
        for (const auto& [e, c] : o.terms) r.add_term(e, c);
        return r;
    }
    MirrorPoly operator-(const MirrorPoly& o) const {
        MirrorPoly r = *this;
        for (const auto& [e, c] : o.terms) r.add_term(e, F::zero() - c);
        return r;
    }
    MirrorPoly operator*(const MirrorPoly& o) const {
        MirrorPoly r;
        for (const auto& [e1, c1] : terms)
            for (const auto& [e2, c2] : o.terms)
                r.add_reduced({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]}, c1 * c2);
        return r;
    }
    MirrorPoly operator*(const F& s) const {
        MirrorPoly r;
        for (const auto& [e, c] : terms) r.add_term(e, c * s);
        return r;
    }

    bool operator==(const MirrorPoly& o) const { return terms == o.terms; }
};

/// The coordinate ring of SL2 in Peter-Weyl blocks. A block of weight lam is
/// a (lam+1)x(lam+1) matrix: entry (r,s) is the coefficient of the matrix
/// coefficient attached to basis vector v_r of V_lam and dual vector v^s.
template <class F>
struct RegFun {
    std::map<int, Mat<F>> blocks; // zero blocks are absent

    bool is_zero() const { return blocks.empty(); }
    int max_weight() const { return blocks.empty() ? -1 : blocks.rbegin()->first; }

    void add_block_entry(int lam, int r, int s, const F& c) {
        if (c.is_zero()) return;
        auto it = blocks.find(lam);
        if (it == blocks.end()) it = blocks.emplace(lam, Mat<F>(lam + 1, lam + 1)).first;
        it->second(r, s) += c;
    }

    void prune() {
        for (auto it = blocks.begin(); it != blocks.end();) {
            if (it->second.is_zero()) it = blocks.erase(it);
            else ++it;
        }
    }

    RegFun operator+(const RegFun& o) const {
        RegFun r = *this;
        for (const auto& [lam, m] : o.blocks) {
            auto it = r.blocks.find(lam);
            if (it == r.blocks.end()) r.blocks[lam] = m;
            else it->second = it->second + m;
        }
        r.prune();
        return r;
    }
    RegFun operator-(const RegFun& o) const {
        RegFun r = *this;
        for (const auto& [lam, m] : o.blocks) {
            auto it = r.blocks.find(lam);
            if (it == r.blocks.end()) r.blocks[lam] = m * (F::zero() - F::one());
            else it->second = it->second - m;
        }
        r.prune();
        return r;
    }
    RegFun operator*(const F& s) const {
        if (s.is_zero()) return {};
        RegFun r;
        for (const auto& [lam, m] : blocks) r.blocks[lam] = m * s;
        r.prune();
        return r;
    }
    bool operator==(const RegFun& o) const { return blocks == o.blocks; }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [lam, m] : blocks)
            for (int r = 0; r < m.rows(); ++r)
                for (int s = 0; s < m.cols(); ++s) {
                    if (m(r, s).is_zero()) continue;
                    if (!first) os << " + ";
                    first = false;
                    os << "(" << lam << "," << r << "," << s << ";" << m(r, s).to_string() << ")";
                }
        if (first) os << "0";
        return os.str();
    }
};

/// Shared machinery for function arithmetic: Clebsch-Gordan product tables,
/// the polynomial mirror basis, invariant field actions and the transition
/// matrix a^{ij}. Immutable from the caller's point of view; lazy caches are
/// guarded by a mutex.
template <class F>
class FunRing {
public:
    FunRing(std::shared_ptr<LieCtx> lie, int max_weight)
        : lie_(std::move(lie)), max_weight_(max_weight) {
        if (max_weight_ < 3) throw ConfigInvalid("function ring weight cap must be at least 3");
        build_transition();
    }

    int max_weight() const { return max_weight_; }
    LieCtx& lie() const { return *lie_; }

    RegFun<F> zero() const { return {}; }
    RegFun<F> one() const {
        RegFun<F> r;
        r.add_block_entry(0, 0, 0, F::one());
        return r;
    }
    RegFun<F> basis(int lam, int r, int s) const {
        RegFun<F> f;
        f.add_block_entry(lam, r, s, F::one());
        return f;
    }
    /// Defining matrix coefficient x_{ab} (1-based indices in the rendering
    /// x11, x12, ...): the weight-1 block with u = v_a, phi = v^b.
    RegFun<F> x(int a, int b) const { return basis(1, a, b); }

    /// Exact product via the invariant-pair structure tensors. The weight
    /// cap is enforced on the result: nonzero content above the cap throws,
    /// never a silent truncation.
    RegFun<F> multiply(const RegFun<F>& a, const RegFun<F>& b) const {
        RegFun<F> out;
        for (const auto& [lam, ma] : a.blocks)
            for (const auto& [mu, mb] : b.blocks) {
                const PairTable& tab = pair_table(lam, mu);
                for (const auto& chan : tab.channels) {
                    int dmu = mu + 1;
                    for (int va = 0; va <= lam; ++va)
                        for (int vb = 0; vb <= mu; ++vb) {
                            auto fit = chan.f_cols.find(va * dmu + vb);
                            if (fit == chan.f_cols.end()) continue;
                            for (int wa = 0; wa <= lam; ++wa) {
                                if (ma(va, wa).is_zero()) continue;
                                for (int wb = 0; wb <= mu; ++wb) {
                                    if (mb(vb, wb).is_zero()) continue;
                                    auto git = chan.g_cols.find(wa * dmu + wb);
                                    if (git == chan.g_cols.end()) continue;
                                    F weight = ma(va, wa) * mb(vb, wb);
                                    for (const auto& [r, cf] : fit->second)
                                        for (const auto& [s, cg] : git->second)
                                            out.add_block_entry(chan.nu, r, s,
                                                                weight * F::from_nf(cf * cg));
                                }
                            }
                        }
                }
            }
        out.prune();
        if (out.max_weight() > max_weight_)
            throw CutoffExceeded("function product weight " + std::to_string(out.max_weight()) +
                                 " exceeds cap " + std::to_string(max_weight_));
        return out;
    }

    /// Left invariant action: (tau_i f)(g) = d/dt f(g exp(t tau_i)).
    RegFun<F> tau(int i, const RegFun<F>& f) const {
        RegFun<F> out;
        for (const auto& [lam, m] : f.blocks) {
            if (lam == 0) continue;
            const Mat<NF>& X = lie_->irrep(lam).act_tau(i);
            Mat<F> xm(lam + 1, lam + 1);
            for (int p = 0; p <= lam; ++p)
                for (int q = 0; q <= lam; ++q) {
                    F acc = F::zero();
                    for (int t = 0; t <= lam; ++t)
                        if (!X(p, t).is_zero() && !m(t, q).is_zero())
                            acc += F::from_nf(X(p, t)) * m(t, q);
                    xm(p, q) = acc;
                }
            if (!xm.is_zero()) out.blocks[lam] = std::move(xm);
        }
        return out;
    }

    /// Right invariant action: (tau_i^R f)(g) = d/dt f(exp(-t tau_i) g).
    RegFun<F> tauR(int i, const RegFun<F>& f) const {
        RegFun<F> out;
        for (const auto& [lam, m] : f.blocks) {
            if (lam == 0) continue;
            const Mat<NF>& X = lie_->irrep(lam).act_tau(i);
            Mat<F> mx(lam + 1, lam + 1);
            for (int p = 0; p <= lam; ++p)
                for (int q = 0; q <= lam; ++q) {
                    F acc = F::zero();
                    for (int t = 0; t <= lam; ++t)
                        if (!m(p, t).is_zero() && !X(t, q).is_zero())
                            acc += m(p, t) * F::from_nf(X(t, q));
                    mx(p, q) = F::zero() - acc;
                }
            if (!mx.is_zero()) out.blocks[lam] = std::move(mx);
        }
        return out;
    }

    /// Value at the group identity.
    F eval1(const RegFun<F>& f) const {
        F acc = F::zero();
        for (const auto& [lam, m] : f.blocks)
            for (int r = 0; r <= lam; ++r) acc += m(r, r);
        return acc;
    }

    /// Symmetric invariant form: the coefficient of the constant block in a*b.
    F form(const RegFun<F>& a, const RegFun<F>& b) const {
        RegFun<F> p = multiply(a, b);
        auto it = p.blocks.find(0);
        return it == p.blocks.end() ? F::zero() : it->second(0, 0);
    }

    /// Entry a^{ij} of the frame transition tau_i^R = a^{ij} tau_j.
    const RegFun<F>& aij(int i, int j) const { return aij_[i][j]; }

    // ---- polynomial mirror ----

    /// Mirror of a matrix-coefficient basis function (lam, r, s).
    const MirrorPoly<NF>& basis_mirror(int lam, int r, int s) const {
        std::lock_guard<std::mutex> lock(mu_);
        return basis_mirror_locked(lam, r, s);
    }

    MirrorPoly<F> to_mirror(const RegFun<F>& f) const {
        MirrorPoly<F> out;
        for (const auto& [lam, m] : f.blocks)
            for (int r = 0; r <= lam; ++r)
                for (int s = 0; s <= lam; ++s) {
                    if (m(r, s).is_zero()) continue;
                    const MirrorPoly<NF>& bm = basis_mirror(lam, r, s);
                    for (const auto& [e, c] : bm.terms) out.add_term(e, m(r, s) * F::from_nf(c));
                }
        return out;
    }

    /// Peter-Weyl decomposition of a reduced mirror polynomial.
    RegFun<F> decompose(const MirrorPoly<F>& p) const {
        if (p.is_zero()) return {};
        int D = p.degree();
        const DecompTable& tab = decomp_table(D);
        std::vector<F> coords(tab.monomials.size(), F::zero());
        for (const auto& [e, c] : p.terms) {
            auto it = tab.mono_index.find(e);
            if (it == tab.mono_index.end()) throw SolveFailed("monomial missing from mirror basis");
            coords[it->second] = c;
        }
        std::vector<F> sol(tab.block_index.size(), F::zero());
        for (size_t r = 0; r < tab.block_index.size(); ++r) {
            F acc = F::zero();
            for (size_t c = 0; c < coords.size(); ++c) {
                if (coords[c].is_zero()) continue;
                const NF& w = tab.inv(int(r), int(c));
                if (w.is_zero()) continue;
                acc += F::from_nf(w) * coords[c];
            }
            sol[r] = acc;
        }
        RegFun<F> out;
        for (size_t r = 0; r < sol.size(); ++r) {
            if (sol[r].is_zero()) continue;
            auto [lam, vr, vs] = tab.block_index[r];
            out.add_block_entry(lam, vr, vs, sol[r]);
        }
        return out;
    }

    /// Mirror derivations for the invariant fields, used as oracles.
    MirrorPoly<F> tau_mirror(int i, const MirrorPoly<F>& p) const { return mirror_derive(p, i, false); }
    MirrorPoly<F> tauR_mirror(int i, const MirrorPoly<F>& p) const { return mirror_derive(p, i, true); }

private:
    struct Channel {
        int nu;
        // column-indexed sparse entries of one dual pair (f_i, g_i)
        std::map<int, std::vector<std::pair<int, NF>>> f_cols, g_cols;
    };
    struct PairTable {
        std::vector<Channel> channels;
    };
    struct DecompTable {
        std::vector<std::array<int, 4>> monomials;
        std::map<std::array<int, 4>, int> mono_index;
        std::vector<std::tuple<int, int, int>> block_index;
        Mat<NF> inv; // block coordinate = inv * monomial coordinate
    };

    std::shared_ptr<LieCtx> lie_;
    int max_weight_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, PairTable> pair_tables_;
    mutable std::map<int, DecompTable> decomp_tables_;
    mutable std::map<std::tuple<int, int, int>, MirrorPoly<NF>> basis_mirrors_;
    std::array<std::array<RegFun<F>, 3>, 3> aij_;
    std::array<Mat<NF>, 3> tau2_; // defining 2x2 frame matrices

    const PairTable& pair_table(int lam, int mu) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(lam, mu);
        auto it = pair_tables_.find(key);
        if (it != pair_tables_.end()) return it->second;
        PairTable tab;
        for (int nu : fusion_channels(lam, mu)) {
            const auto& [fs, gs] = lie_->dual_basis(lam, mu, nu);
            for (size_t idx = 0; idx < fs.size(); ++idx) {
                Channel ch;
                ch.nu = nu;
                for (int r = 0; r <= nu; ++r)
                    for (int c = 0; c < fs[idx].m.cols(); ++c) {
                        if (!fs[idx].m(r, c).is_zero()) ch.f_cols[c].emplace_back(r, fs[idx].m(r, c));
                        if (!gs[idx].m(r, c).is_zero()) ch.g_cols[c].emplace_back(r, gs[idx].m(r, c));
                    }
                tab.channels.push_back(std::move(ch));
            }
        }
        return pair_tables_.emplace(key, std::move(tab)).first->second;
    }

    const MirrorPoly<NF>& basis_mirror_locked(int lam, int r, int s) const {
        auto key = std::make_tuple(lam, r, s);
        auto it = basis_mirrors_.find(key);
        if (it != basis_mirrors_.end()) return it->second;
        // rho^lam_{sr} from the symmetric-power realization: basis function
        // c_{v_r, v^s}(g) = v^s(g v_r) expands over column r of the
        // symbolic representing matrix.
        // beta_j = lam (lam-1) ... (lam-j+1) rescales monomial vectors.
        auto beta = [&](int j) {
            Rat b(1);
            for (int t = 0; t < j; ++t) b *= Rat(lam - t);
            return b;
        };
        MirrorPoly<NF> p;
        // g v_r = beta_r (x11 v0 + x21 v1)^{lam-r} (x12 v0 + x22 v1)^r; the
        // v_s coefficient collects a+b = s with a from the first factor.
        for (int a = 0; a <= lam - r; ++a) {
            int b = s - a;
            if (b < 0 || b > r) continue;
            Rat coef = binom_rat(lam - r, a) * binom_rat(r, b) * beta(r) / beta(s);
            coef.canonicalize();
            p.add_reduced({lam - r - a, r - b, a, b}, NF(coef));
        }
        return basis_mirrors_.emplace(key, std::move(p)).first->second;
    }

    const DecompTable& decomp_table(int D) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = decomp_tables_.find(D);
        if (it != decomp_tables_.end()) return it->second;
        DecompTable tab;
        for (int d = 0; d <= D; ++d)
            for (int e11 = 0; e11 <= d; ++e11)
                for (int e12 = 0; e12 + e11 <= d; ++e12)
                    for (int e21 = 0; e21 + e12 + e11 <= d; ++e21) {
                        int e22 = d - e11 - e12 - e21;
                        if (e11 > 0 && e22 > 0) continue;
                        std::array<int, 4> e{e11, e12, e21, e22};
                        tab.mono_index[e] = (int)tab.monomials.size();
                        tab.monomials.push_back(e);
                    }
        for (int lam = 0; lam <= D; ++lam)
            for (int r = 0; r <= lam; ++r)
                for (int s = 0; s <= lam; ++s) tab.block_index.emplace_back(lam, r, s);
        if (tab.monomials.size() != tab.block_index.size())
            throw SolveFailed("mirror basis size mismatch");
        int n = (int)tab.monomials.size();
        Mat<NF> M(n, n);
        for (int col = 0; col < n; ++col) {
            auto [lam, r, s] = tab.block_index[col];
            const MirrorPoly<NF>& bm = basis_mirror_locked(lam, r, s);
            for (const auto& [e, c] : bm.terms) M(tab.mono_index.at(e), col) = c;
        }
        tab.inv = M.inverse();
        return decomp_tables_.emplace(D, std::move(tab)).first->second;
    }

    MirrorPoly<F> mirror_derive(const MirrorPoly<F>& p, int i, bool right) const {
        // left: d x_{ab} = (X tau_i)_{ab}; right: d x_{ab} = -(tau_i X)_{ab}
        MirrorPoly<F> out;
        const Mat<NF>& T = tau2_[i];
        for (const auto& [e, c] : p.terms) {
            for (int pos = 0; pos < 4; ++pos) {
                if (e[pos] == 0) continue;
                int a = pos / 2, b = pos % 2;
                F fac = c * F::from_rat(Rat(e[pos]));
                // replace one factor x_{ab} by its derivative, a linear
                // combination of coordinates
                for (int t = 0; t < 2; ++t) {
                    NF w = right ? -T(a, t) : T(t, b);
                    if (w.is_zero()) continue;
                    std::array<int, 4> r = e;
                    r[pos] -= 1;
                    int npos = right ? t * 2 + b : a * 2 + t;
                    r[npos] += 1;
                    out.add_reduced(r, fac * F::from_nf(w));
                }
            }
        }
        return out;
    }

    void build_transition() {
        // 2x2 frame matrices
        NF half_s2(Rat(0), Rat(0), Rat(1, 2), Rat(0));
        NF half_is2(Rat(0), Rat(0), Rat(0), Rat(1, 2));
        Mat<NF> e(2, 2), f(2, 2), h(2, 2);
        e(0, 1) = NF::one();
        f(1, 0) = NF::one();
        h(0, 0) = NF::one();
        h(1, 1) = NF(-1);
        tau2_[0] = (e + f) * half_s2;
        tau2_[1] = (e - f) * half_is2;
        tau2_[2] = h * half_s2;

        // a^{ij}(g) = -(Ad(g^{-1}) tau_i, tau_j) = -tr(X^{-1} tau_i X tau_j),
        // with X^{-1} the adjugate since det X = 1. Expand symbolically.
        MirrorPoly<NF> x[2][2] = {
            {MirrorPoly<NF>::coordinate(0, 0), MirrorPoly<NF>::coordinate(0, 1)},
            {MirrorPoly<NF>::coordinate(1, 0), MirrorPoly<NF>::coordinate(1, 1)}};
        MirrorPoly<NF> xinv[2][2] = {{x[1][1], x[0][1] * NF(-1)}, {x[1][0] * NF(-1), x[0][0]}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                MirrorPoly<NF> acc;
                for (int p = 0; p < 2; ++p)
                    for (int q = 0; q < 2; ++q)
                        for (int u = 0; u < 2; ++u)
                            for (int v = 0; v < 2; ++v) {
                                NF w = tau2_[i](q, u) * tau2_[j](v, p);
                                if (w.is_zero()) continue;
                                acc = acc + (xinv[p][q] * x[u][v]) * (-w);
                            }
                set_aij_from_mirror(acc, i, j);
            }
        verify_transition();
    }

    void set_aij_from_mirror(const MirrorPoly<NF>& acc, int i, int j) {
        MirrorPoly<F> lifted;
        for (const auto& [e, c] : acc.terms) lifted.add_term(e, F::from_nf(c));
        aij_[i][j] = decompose(lifted);
    }

    void verify_transition() {
        // a^{ij}(1) = -delta_{ij}
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                F v = eval1(aij_[i][j]);
                F expect = (i == j) ? F::zero() - F::one() : F::zero();
                if (!(v == expect)) throw FrameSolveFailed("a^{ij}(1) != -delta");
            }
        // frame relation tau_i^R f = a^{ij} tau_j f on the defining block
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    RegFun<F> lhs = tauR(i, x(a, b));
                    RegFun<F> rhs;
                    for (int j = 0; j < 3; ++j)
                        rhs = rhs + multiply(aij_[i][j], tau(j, x(a, b)));
                    if (!(lhs == rhs))
                        throw FrameSolveFailed("right frame does not solve in the left frame");
                }
    }
};

} // namespace voawb

#endif
