#ifndef VOAWB_WEYL_HPP
#define VOAWB_WEYL_HPP

#include <algorithm>

#include "voawb/combinat.hpp"
#include "voawb/lie.hpp"

namespace voawb {

/// PBW monomial acting on a top-level vector: word of strictly negative
/// modes (mode, frame index), deeper modes first and frame indices ascending
/// among equal modes, then a top-level basis index.
struct WKey {
    std::vector<std::pair<int, int>> word;
    int top = 0;
    auto operator<=>(const WKey&) const = default;

    int degree() const {
        int d = 0;
        for (auto& [m, i] : word) d -= m;
        return d;
    }
};

/// Truncated Weyl module: the induced module with the top irrep acting at
/// degree 0 and everything capped at a hard degree bound. All arithmetic is
/// exact over F; operations that would leave the truncation throw.
template <class F>
class WeylModule {
public:
    using Elem = std::map<WKey, F>;

    WeylModule(std::shared_ptr<LieCtx> lie, int lam, bool dual_rep, F level, int max_degree)
        : lie_(std::move(lie)),
          lam_(lam),
          dual_(dual_rep),
          level_(std::move(level)),
          max_degree_(max_degree),
          top_(lie_->irrep(lam, dual_rep)) {}

    int weight() const { return lam_; }
    bool dual_rep() const { return dual_; }
    int max_degree() const { return max_degree_; }
    const F& level() const { return level_; }
    const Irrep& top() const { return top_; }
    F kappa() const { return level_ + F::from_rat(Rat(2)); }

    int dim_at(int n) const {
        return (int)colored_partitions(n, 3) * top_.dim();
    }

    const std::vector<WKey>& basis(int n) const {
        if (n < 0 || n > max_degree_) throw CutoffExceeded("basis degree outside truncation");
        auto it = basis_.find(n);
        if (it != basis_.end()) return it->second;
        std::vector<WKey> keys;
        for (const auto& part : colored_partition_list(n, 3)) {
            WKey k;
            for (auto& [p, c] : part) k.word.emplace_back(-p, c);
            for (int r = 0; r < top_.dim(); ++r) {
                k.top = r;
                keys.push_back(k);
            }
        }
        auto& slot = basis_[n];
        slot = std::move(keys);
        index_[n].clear();
        for (size_t j = 0; j < slot.size(); ++j) index_[n][slot[j]] = (int)j;
        return slot;
    }

    int basis_index(int n, const WKey& k) const {
        basis(n);
        auto it = index_.at(n).find(k);
        if (it == index_.at(n).end()) throw DimensionMismatch("monomial missing from basis");
        return it->second;
    }

    Elem zero() const { return {}; }

    Elem basis_elem(int n, int idx) const {
        Elem e;
        e[basis(n)[idx]] = F::one();
        return e;
    }

    /// Highest weight vector (top index 0) at degree 0.
    Elem highest() const { return basis_elem(0, 0); }

    static void add_term(Elem& e, const WKey& k, const F& c) {
        if (c.is_zero()) return;
        auto it = e.find(k);
        if (it == e.end()) e.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) e.erase(it);
        }
    }

    static Elem add(const Elem& a, const Elem& b) {
        Elem r = a;
        for (auto& [k, c] : b) add_term(r, k, c);
        return r;
    }

    static Elem sub(const Elem& a, const Elem& b) {
        Elem r = a;
        for (auto& [k, c] : b) add_term(r, k, F::zero() - c);
        return r;
    }

    static Elem scale(const Elem& a, const F& s) {
        Elem r;
        if (s.is_zero()) return r;
        for (auto& [k, c] : a) r[k] = c * s;
        return r;
    }

    /// tau_i(m) applied to an element, straightened to the PBW basis.
    Elem apply(int i, int m, const Elem& v) const {
        Elem out;
        for (const auto& [k, c] : v) {
            Elem part = apply_mono(i, m, k);
            for (auto& [k2, c2] : part) add_term(out, k2, c2 * c);
        }
        return out;
    }

    /// Degree of a homogeneous element; throws if mixed.
    static int degree_of(const Elem& v) {
        int d = -1;
        for (auto& [k, c] : v) {
            int dk = k.degree();
            if (d < 0) d = dk;
            else if (d != dk) throw GradeMismatch("element is not homogeneous");
        }
        return d < 0 ? 0 : d;
    }

    /// Sugawara operator L_n from the normally ordered double sum.
    Elem sugawara(int n, const Elem& v) const {
        F kap = kappa();
        if (kap.is_zero()) throw CriticalLevel("sugawara operator at kappa = 0");
        Elem out;
        for (const auto& [k, c] : v) {
            int d = k.degree();
            if (d - n > max_degree_) throw CutoffExceeded("sugawara result beyond truncation");
            Elem mono;
            mono[k] = c;
            for (int i = 0; i < 3; ++i) {
                for (int j = -d; j <= d - n; ++j) {
                    int p = -j, q = j + n;
                    int first = (p < q) ? q : p;   // normal ordering: larger mode acts first
                    int second = (p < q) ? p : q;
                    Elem t = apply(i, first, mono);
                    if (t.empty()) continue;
                    t = apply(i, second, t);
                    for (auto& [k2, c2] : t) add_term(out, k2, c2);
                }
            }
        }
        F norm = (F::from_rat(Rat(2)) * kap).inv();
        return scale(out, norm);
    }

    /// Matrix of tau_i(m) from degree n to degree n-m in basis coordinates.
    Mat<F> mode_matrix(int i, int m, int n) const {
        const auto& src = basis(n);
        const auto& dst = basis(n - m);
        Mat<F> out((int)dst.size(), (int)src.size());
        for (int c = 0; c < (int)src.size(); ++c) {
            Elem img = apply_mono(i, m, src[c]);
            for (auto& [k, v] : img) out(basis_index(n - m, k), c) += v;
        }
        return out;
    }

    std::vector<F> coords(int n, const Elem& v) const {
        std::vector<F> out(basis(n).size(), F::zero());
        for (auto& [k, c] : v) out[basis_index(n, k)] = c;
        return out;
    }

    Elem from_coords(int n, const std::vector<F>& x) const {
        const auto& b = basis(n);
        Elem out;
        for (size_t j = 0; j < b.size(); ++j)
            if (!x[j].is_zero()) out[b[j]] = x[j];
        return out;
    }

    /// Pairing of this module's element against an element of the module
    /// built on the dual top irrep at the same level: moving a creation mode
    /// across the pairing flips it to minus the annihilation mode.
    F pair_with_dual(const WeylModule& dual_mod, const Elem& w, const Elem& v) const {
        F acc = F::zero();
        for (const auto& [kw, cw] : w) {
            for (const auto& [kv, cv] : v) {
                if (kw.degree() != kv.degree()) continue;
                // sigma(P) v with sigma(x(m)) = -x(-m): the leftmost mode of P
                // becomes the outermost annihilator, so apply in word order
                Elem cur;
                cur[kv] = F::one();
                for (auto it = kw.word.begin(); it != kw.word.end() && !cur.empty(); ++it)
                    cur = apply(it->second, -it->first, cur);
                auto it0 = cur.find(WKey{{}, kw.top});
                if (it0 == cur.end()) continue;
                F sign = (kw.word.size() % 2 == 0) ? F::one() : F::zero() - F::one();
                acc += cw * cv * sign * it0->second;
            }
        }
        (void)dual_mod;
        return acc;
    }

private:
    Elem apply_mono(int i, int m, const WKey& k) const {
        Elem out;
        if (m < 0) {
            if (k.degree() - m > max_degree_)
                throw CutoffExceeded("mode action pushes past the degree cap");
            if (k.word.empty() ||
                std::make_pair(m, i) <= k.word.front()) {
                WKey nk = k;
                nk.word.insert(nk.word.begin(), {m, i});
                out[nk] = F::one();
                return out;
            }
        }
        if (k.word.empty()) {
            // action on the top level
            if (m > 0) return out; // annihilates
            if (m == 0) {
                const Mat<NF>& X = top_.act_tau(i);
                for (int p = 0; p < X.rows(); ++p) {
                    if (X(p, k.top).is_zero()) continue;
                    WKey nk = k;
                    nk.top = p;
                    add_term(out, nk, F::from_nf(X(p, k.top)));
                }
                return out;
            }
        }
        // commute past the head
        auto [m0, i0] = k.word.front();
        WKey rest = k;
        rest.word.erase(rest.word.begin());
        Elem inner = apply_mono(i, m, rest);
        // reattach head
        for (auto& [k2, c2] : inner) {
            Elem re = apply_mono(i0, m0, k2);
            for (auto& [k3, c3] : re) add_term(out, k3, c3 * c2);
        }
        // commutator [tau_i(m), tau_i0(m0)]
        const LieAlgebra& g = lie_->algebra();
        for (int s = 0; s < 3; ++s) {
            const NF& cc = g.c(i, i0, s);
            if (cc.is_zero()) continue;
            Elem t = apply_mono(s, m + m0, rest);
            for (auto& [k2, c2] : t) add_term(out, k2, c2 * F::from_nf(cc));
        }
        if (m + m0 == 0 && i == i0) {
            F central = F::from_rat(Rat(m)) * level_;
            WKey copy = rest;
            add_term(out, copy, central);
        }
        return out;
    }

    std::shared_ptr<LieCtx> lie_;
    int lam_;
    bool dual_;
    F level_;
    int max_degree_;
    const Irrep& top_;
    mutable std::map<int, std::vector<WKey>> basis_;
    mutable std::map<int, std::map<WKey, int>> index_;
};

/// Basis of the joint kernel of all positive modes in degrees 1..max_degree.
/// Vectors are echelon-normalized per degree; the list concatenates degrees.
template <class F>
std::vector<typename WeylModule<F>::Elem> find_singular(const WeylModule<F>& M, int max_degree) {
    std::vector<typename WeylModule<F>::Elem> out;
    for (int d = 1; d <= max_degree; ++d) {
        int dim = (int)M.basis(d).size();
        std::vector<Mat<F>> ops;
        int rows = 0;
        for (int m = 1; m <= d; ++m)
            for (int i = 0; i < 3; ++i) {
                ops.push_back(M.mode_matrix(i, m, d));
                rows += ops.back().rows();
            }
        Mat<F> stack(rows, dim);
        int r0 = 0;
        for (const auto& op : ops) {
            for (int r = 0; r < op.rows(); ++r)
                for (int c = 0; c < dim; ++c) stack(r0 + r, c) = op(r, c);
            r0 += op.rows();
        }
        for (auto& vec : stack.kernel()) out.push_back(M.from_coords(d, vec));
    }
    return out;
}

} // namespace voawb

#endif
