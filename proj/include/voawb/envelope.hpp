#ifndef VOAWB_ENVELOPE_HPP
#define VOAWB_ENVELOPE_HPP

#include "voawb/regfun.hpp"
#include "voawb/weyl.hpp"

namespace voawb {

/// Monomial of U(g_-)(x)B: a PBW word of negative modes, a jet multiset of
/// (depth p, form index) factors representing the p-th divided-power
/// derivative of a frame 1-form, and one function-block coordinate.
struct EKey {
    std::vector<std::pair<int, int>> word; // (mode m < 0, frame i), canonical order
    std::vector<std::pair<int, int>> jet;  // (depth p >= 0, form i), sorted
    int lam = 0, r = 0, s = 0;
    auto operator<=>(const EKey&) const = default;

    int word_degree() const {
        int d = 0;
        for (auto& [m, i] : word) d -= m;
        return d;
    }
    int jet_degree() const {
        int d = 0;
        for (auto& [p, i] : jet) d += p + 1;
        return d;
    }
    int degree() const { return word_degree() + jet_degree(); }
};

/// Same shape with the word carrying dual-level modes.
struct BKey {
    std::vector<std::pair<int, int>> word;
    std::vector<std::pair<int, int>> jet;
    int lam = 0, r = 0, s = 0;
    auto operator<=>(const BKey&) const = default;
    int degree() const {
        int d = 0;
        for (auto& [m, i] : word) d -= m;
        for (auto& [p, i] : jet) d += p + 1;
        return d;
    }
};

/// Word in the full level-k enveloping algebra with modes of both signs and
/// zero modes, ordered by (mode, index). Used by the bilinear form.
struct UWord {
    std::vector<std::pair<int, int>> w;
    auto operator<=>(const UWord&) const = default;
};

/// The enveloping vertex algebra in its explicit model: exact mode actions,
/// the dual-level action, vertex operator coefficients, the invariant
/// bilinear form, and the bar-decomposition machinery.
template <class F>
class Envelope {
public:
    using Elem = std::map<EKey, F>;
    using BarElem = std::map<BKey, F>;
    using UElem = std::map<UWord, F>;

    Envelope(std::shared_ptr<FunRing<F>> ring, F level, int max_degree)
        : ring_(std::move(ring)),
          level_(std::move(level)),
          max_degree_(max_degree),
          lie_(&ring_->lie()) {
        kbar_ = F::zero() - level_ - F::from_rat(Rat(4));
    }

    const FunRing<F>& ring() const { return *ring_; }
    const F& level() const { return level_; }
    const F& level_bar() const { return kbar_; }
    F kappa() const { return level_ + F::from_rat(Rat(2)); }
    int max_degree() const { return max_degree_; }
    int max_weight() const { return ring_->max_weight(); }

    // ---- element helpers ----

    static void add_term(Elem& e, const EKey& k, const F& c) {
        if (c.is_zero()) return;
        auto it = e.find(k);
        if (it == e.end()) e.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) e.erase(it);
        }
    }
    static void add_term_bar(BarElem& e, const BKey& k, const F& c) {
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
    static BarElem bar_scale(const BarElem& a, const F& s) {
        BarElem r;
        if (s.is_zero()) return r;
        for (auto& [k, c] : a) r[k] = c * s;
        return r;
    }

    Elem vacuum() const {
        Elem e;
        e[EKey{}] = F::one();
        return e;
    }

    /// Function a embedded at degree 0.
    Elem from_fun(const RegFun<F>& a) const {
        Elem e;
        for (const auto& [lam, m] : a.blocks)
            for (int r = 0; r <= lam; ++r)
                for (int sx = 0; sx <= lam; ++sx)
                    if (!m(r, sx).is_zero()) e[EKey{{}, {}, lam, r, sx}] = m(r, sx);
        return e;
    }

    /// The frame 1-form omega_i at degree 1.
    Elem omega(int i) const {
        Elem e;
        e[EKey{{}, {{0, i}}, 0, 0, 0}] = F::one();
        return e;
    }

    /// tau_i as the state tau_i(-1)|vac>.
    Elem tau_state(int i) const {
        Elem e;
        e[EKey{{{-1, i}}, {}, 0, 0, 0}] = F::one();
        return e;
    }

    static int degree_of(const Elem& v) {
        int d = -1;
        for (auto& [k, c] : v) {
            int dk = k.degree();
            if (d < 0) d = dk;
            else if (d != dk) throw GradeMismatch("element is not homogeneous");
        }
        return d < 0 ? 0 : d;
    }

    /// Extracts the function part of a degree-0 element.
    RegFun<F> to_fun(const Elem& v) const {
        RegFun<F> out;
        for (auto& [k, c] : v) {
            if (!k.word.empty() || !k.jet.empty())
                throw GradeMismatch("element has positive-degree terms");
            out.add_block_entry(k.lam, k.r, k.s, c);
        }
        return out;
    }

    // ---- primitive mode actions ----

    /// tau_i(m) straightened into the canonical form.
    Elem apply_tau(int i, int m, const Elem& v) const {
        Elem out;
        for (auto& [k, c] : v) {
            Elem part = tau_mono(i, m, k);
            for (auto& [k2, c2] : part) add_term(out, k2, c2 * c);
        }
        return out;
    }

    /// a_(n) for a regular function a.
    Elem apply_fun(const RegFun<F>& a, int n, const Elem& v) const {
        Elem out;
        for (auto& [k, c] : v) {
            Elem part = fun_mono(a, n, k);
            for (auto& [k2, c2] : part) add_term(out, k2, c2 * c);
        }
        return out;
    }

    /// omega_{i(n)}.
    Elem apply_omega(int i, int n, const Elem& v) const {
        Elem out;
        for (auto& [k, c] : v) {
            Elem part = omega_mono(i, n, k);
            for (auto& [k2, c2] : part) add_term(out, k2, c2 * c);
        }
        return out;
    }

    /// Dual-level action: the expansion of the right-frame current modes.
    Elem apply_bar(int i, int m, const Elem& v) const {
        Elem out;
        int d = max_degree_ + 2; // safe summation bound
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l <= d - m; ++l) {
                Elem t = apply_fun(ring_->aij(i, j), m + l, v);
                if (!t.empty()) out = add(out, apply_tau(j, -1 - l, t));
            }
            for (int l = 0; l <= d; ++l) {
                Elem t = apply_tau(j, l, v);
                if (!t.empty()) out = add(out, apply_fun(ring_->aij(i, j), m - 1 - l, t));
            }
        }
        out = add(out, scale(apply_omega_tilde(i, m, v), kbar_));
        return out;
    }

    /// Modes of the right-frame 1-form: omega~_i = a^{ij} omega_j.
    Elem apply_omega_tilde(int i, int m, const Elem& v) const {
        Elem out;
        int d = max_degree_ + 2;
        for (int j = 0; j < 3; ++j) {
            for (int l = 0; l <= d - m; ++l) {
                Elem t = apply_omega(j, m + l, v);
                if (!t.empty()) out = add(out, apply_fun(ring_->aij(i, j), -1 - l, t));
            }
            for (int l = 0; l <= d; ++l) {
                Elem t = apply_fun(ring_->aij(i, j), l, v);
                if (!t.empty()) out = add(out, apply_omega(j, m - 1 - l, t));
            }
        }
        return out;
    }

    // ---- general vertex operator modes ----

    /// u_(n) v computed by peeling creation generators off u through the
    /// iterate formula for the (-1) product.
    Elem mode(const Elem& u, int n, const Elem& v) const {
        Elem out;
        for (auto& [ku, cu] : u) {
            Elem part = mode_mono(ku, n, v);
            for (auto& [k2, c2] : part) add_term(out, k2, c2 * cu);
        }
        return out;
    }

    /// The Virasoro state: tau_j(-1)omega_j + (kbar/2) omega_s^2.
    Elem virasoro_state() const {
        Elem e;
        for (int j = 0; j < 3; ++j) e[EKey{{{-1, j}}, {{0, j}}, 0, 0, 0}] = F::one();
        F half_kbar = kbar_ / F::from_rat(Rat(2));
        for (int s = 0; s < 3; ++s) add_term(e, EKey{{}, {{0, s}, {0, s}}, 0, 0, 0}, half_kbar);
        return e;
    }

    /// L_n = (virasoro state)_(n+1).
    Elem virasoro(int n, const Elem& v) const { return mode(virasoro_state(), n + 1, v); }

    /// Translation operator: the (-2) mode of the vacuum is not available, so
    /// derive from L_{-1}.
    Elem translate(const Elem& v) const { return virasoro(-1, v); }

    // ---- basis enumeration ----

    /// Basis keys of (U(g_-) (x) B_lam) at total degree n.
    std::vector<EKey> basis_keys(int lam, int n) const {
        std::vector<EKey> out;
        for (int wdeg = 0; wdeg <= n; ++wdeg) {
            auto words = colored_partition_list(wdeg, 3);
            auto jets = jet_monomials(n - wdeg);
            for (const auto& wp : words) {
                EKey base;
                for (auto& [p, c] : wp) base.word.emplace_back(-p, c);
                for (const auto& jm : jets) {
                    base.jet = jm;
                    base.lam = lam;
                    for (int r = 0; r <= lam; ++r)
                        for (int s = 0; s <= lam; ++s) {
                            base.r = r;
                            base.s = s;
                            out.push_back(base);
                        }
                }
            }
        }
        return out;
    }

    /// Jet monomials of a given degree: sorted multisets of (p, i) with
    /// sum (p+1) = deg. Matches the colored-partition order with part = p+1.
    static std::vector<std::vector<std::pair<int, int>>> jet_monomials(int deg) {
        std::vector<std::vector<std::pair<int, int>>> out;
        for (auto& part : colored_partition_list(deg, 3)) {
            std::vector<std::pair<int, int>> jm;
            for (auto& [p, c] : part) jm.emplace_back(p - 1, c);
            std::sort(jm.begin(), jm.end());
            out.push_back(std::move(jm));
        }
        return out;
    }

    // ---- bar decomposition ----

    /// Rewrites an element in the dual-level PBW times B form.
    BarElem to_bar(const Elem& v) const {
        BarElem out;
        for (auto& [k, c] : v) {
            BarElem part = to_bar_mono(k);
            for (auto& [k2, c2] : part) add_term_bar(out, k2, c2 * c);
        }
        return out;
    }

    /// Applies the stored bar word to the B part, landing back in the
    /// canonical unbarred form.
    Elem from_bar(const BarElem& v) const {
        Elem out;
        for (auto& [k, c] : v) {
            Elem cur;
            cur[EKey{{}, k.jet, k.lam, k.r, k.s}] = c;
            for (auto it = k.word.rbegin(); it != k.word.rend(); ++it)
                cur = apply_bar(it->second, it->first, cur);
            out = add(out, cur);
        }
        return out;
    }

    /// B component of the bar decomposition (reduction modulo the bar
    /// augmentation ideal), restricted to pure B input shapes on request.
    Elem rho(int i, int m, const Elem& b) const {
        BarElem dec = to_bar(apply_tau(i, m, b));
        Elem out;
        for (auto& [k, c] : dec)
            if (k.word.empty()) add_term(out, EKey{{}, k.jet, k.lam, k.r, k.s}, c);
        return out;
    }

    /// The pairing-compatible transport U(g_-)(x)A -> U(gbar_-)(x)A.
    BarElem t_map(const Elem& v) const {
        BarElem out;
        for (auto& [k, c] : v) {
            if (!k.jet.empty()) throw DimensionMismatch("t map expects a jet-free element");
            // product of transition entries against the block function
            BarElem acc;
            acc[BKey{{}, {}, k.lam, k.r, k.s}] = c;
            for (auto it = k.word.rbegin(); it != k.word.rend(); ++it) {
                auto [m, i] = *it;
                BarElem next;
                for (int j = 0; j < 3; ++j) {
                    BarElem mul = bar_multiply_fun(ring_->aij(j, i), acc);
                    for (auto& [k2, c2] : mul) {
                        BarElem ins = bar_insert(j, m, k2);
                        for (auto& [k3, c3] : ins) add_term_bar(next, k3, c3 * c2);
                    }
                }
                acc = std::move(next);
            }
            for (auto& [k2, c2] : acc) add_term_bar(out, k2, c2);
        }
        return out;
    }

    // ---- bilinear form ----

    /// Invariant symmetric form from the PBW splitting construction.
    F form(const Elem& u, const Elem& v) const {
        F acc = F::zero();
        for (auto& [ku, cu] : u)
            for (auto& [kv, cv] : v) {
                if (ku.degree() != kv.degree()) continue;
                acc += cu * cv * form_mono(ku, kv);
            }
        return acc;
    }

private:
    std::shared_ptr<FunRing<F>> ring_;
    F level_, kbar_;
    int max_degree_;
    LieCtx* lie_;
    mutable std::map<std::tuple<int, int, int>, Elem> aij_jets_; // d^{(p)} a^{ij}
    mutable std::map<int, Mat<F>> form_tables_;                  // block pairing per weight
    mutable std::mutex mu_;

    // -- straightening of level-k modes --

    Elem tau_mono(int i, int m, const EKey& k) const {
        Elem out;
        if (m < 0) {
            if (k.degree() - m > max_degree_)
                throw CutoffExceeded("mode action pushes past the degree cap");
            if (k.word.empty() || std::make_pair(m, i) <= k.word.front()) {
                EKey nk = k;
                nk.word.insert(nk.word.begin(), {m, i});
                out[nk] = F::one();
                return out;
            }
        }
        if (k.word.empty()) return tau_on_B(i, m, k);
        auto [m0, i0] = k.word.front();
        EKey rest = k;
        rest.word.erase(rest.word.begin());
        Elem inner = tau_mono(i, m, rest);
        for (auto& [k2, c2] : inner) {
            Elem re = tau_mono(i0, m0, k2);
            for (auto& [k3, c3] : re) add_term(out, k3, c3 * c2);
        }
        const LieAlgebra& g = lie_->algebra();
        for (int s = 0; s < 3; ++s) {
            const NF& cc = g.c(i, i0, s);
            if (cc.is_zero()) continue;
            Elem t = tau_mono(s, m + m0, rest);
            for (auto& [k2, c2] : t) add_term(out, k2, c2 * F::from_nf(cc));
        }
        if (m + m0 == 0 && i == i0) add_term(out, rest, F::from_rat(Rat(m)) * level_);
        return out;
    }

    /// tau_i(m), m >= 0, acting on a pure B monomial.
    Elem tau_on_B(int i, int m, const EKey& k) const {
        Elem out;
        if (m == 0) {
            // derivation: block part first
            if (k.lam > 0) {
                const Mat<NF>& X = lie_->irrep(k.lam).act_tau(i);
                for (int p = 0; p <= k.lam; ++p) {
                    if (X(p, k.r).is_zero()) continue;
                    EKey nk = k;
                    nk.r = p;
                    add_term(out, nk, F::from_nf(X(p, k.r)));
                }
            }
            const LieAlgebra& g = lie_->algebra();
            for (size_t t = 0; t < k.jet.size(); ++t) {
                auto [p, j] = k.jet[t];
                for (int l = 0; l < 3; ++l) {
                    const NF& cc = g.c(i, j, l);
                    if (cc.is_zero()) continue;
                    EKey nk = k;
                    nk.jet.erase(nk.jet.begin() + t);
                    auto pos = std::lower_bound(nk.jet.begin(), nk.jet.end(), std::make_pair(p, l));
                    nk.jet.insert(pos, {p, l});
                    add_term(out, nk, F::from_nf(cc));
                }
            }
            return out;
        }
        // m >= 1: contractions with jet factors only
        const LieAlgebra& g = lie_->algebra();
        for (size_t t = 0; t < k.jet.size(); ++t) {
            auto [p, j] = k.jet[t];
            // [tau_i(m), omega_j(-1-p)] = C_{ijl} omega_l(m-1-p) + m delta_{m,p+1} delta_{ij}
            if (m == p + 1 && i == j) {
                EKey nk = k;
                nk.jet.erase(nk.jet.begin() + t);
                add_term(out, nk, F::from_rat(Rat(m)));
            }
            if (m - 1 - p <= -1) {
                int np = p - m;
                for (int l = 0; l < 3; ++l) {
                    const NF& cc = g.c(i, j, l);
                    if (cc.is_zero()) continue;
                    EKey nk = k;
                    nk.jet.erase(nk.jet.begin() + t);
                    auto pos = std::lower_bound(nk.jet.begin(), nk.jet.end(), std::make_pair(np, l));
                    nk.jet.insert(pos, {np, l});
                    add_term(out, nk, F::from_nf(cc));
                }
            }
        }
        return out;
    }

    Elem fun_mono(const RegFun<F>& a, int n, const EKey& k) const {
        Elem out;
        if (!k.word.empty()) {
            auto [m0, i0] = k.word.front();
            EKey rest = k;
            rest.word.erase(rest.word.begin());
            Elem inner = fun_mono(a, n, rest);
            for (auto& [k2, c2] : inner) {
                Elem re = tau_mono(i0, m0, k2);
                for (auto& [k3, c3] : re) add_term(out, k3, c3 * c2);
            }
            RegFun<F> ta = ring_->tau(i0, a);
            if (!ta.is_zero()) {
                Elem t = fun_mono(ta, n + m0, rest);
                for (auto& [k2, c2] : t) add_term(out, k2, F::zero() - c2);
            }
            return out;
        }
        if (n >= 0) return out; // functions annihilate B in nonnegative modes
        const Elem jets = fun_jet(a, -1 - n);
        return mult_into_B(jets, k);
    }

    Elem omega_mono(int i, int n, const EKey& k) const {
        Elem out;
        if (!k.word.empty()) {
            auto [m0, i0] = k.word.front();
            EKey rest = k;
            rest.word.erase(rest.word.begin());
            Elem inner = omega_mono(i, n, rest);
            for (auto& [k2, c2] : inner) {
                Elem re = tau_mono(i0, m0, k2);
                for (auto& [k3, c3] : re) add_term(out, k3, c3 * c2);
            }
            // [omega_i(n), tau_{i0}(m0)] = -(C_{i0 i l} omega_l(m0+n) + m0 d_{m0+n,0} d_{i0 i})
            const LieAlgebra& g = lie_->algebra();
            for (int l = 0; l < 3; ++l) {
                const NF& cc = g.c(i0, i, l);
                if (cc.is_zero()) continue;
                Elem t = omega_mono(l, m0 + n, rest);
                for (auto& [k2, c2] : t) add_term(out, k2, F::zero() - c2 * F::from_nf(cc));
            }
            if (m0 + n == 0 && i0 == i) add_term(out, rest, F::from_rat(Rat(-m0)));
            return out;
        }
        if (n >= 0) return out;
        if (k.degree() - n > max_degree_)
            throw CutoffExceeded("form mode pushes past the degree cap");
        EKey nk = k;
        auto pos = std::lower_bound(nk.jet.begin(), nk.jet.end(), std::make_pair(-1 - n, i));
        nk.jet.insert(pos, {-1 - n, i});
        out[nk] = F::one();
        return out;
    }

    /// Divided-power translate of a function as a B element.
    Elem fun_jet(const RegFun<F>& a, int p) const {
        Elem cur = from_fun(a);
        for (int t = 1; t <= p; ++t) {
            cur = b_derive(cur);
            cur = scale(cur, F::from_rat(Rat(1, t)));
        }
        return cur;
    }

    /// Derivation of a pure B element: jets advance, functions pick up
    /// their differential in the frame forms.
    Elem b_derive(const Elem& v) const {
        Elem out;
        for (auto& [k, c] : v) {
            if (!k.word.empty()) throw DimensionMismatch("derivative expects a B element");
            for (size_t t = 0; t < k.jet.size(); ++t) {
                auto [p, i] = k.jet[t];
                EKey nk = k;
                nk.jet.erase(nk.jet.begin() + t);
                auto pos = std::lower_bound(nk.jet.begin(), nk.jet.end(), std::make_pair(p + 1, i));
                nk.jet.insert(pos, {p + 1, i});
                add_term(out, nk, c * F::from_rat(Rat(p + 1)));
            }
            // d a = tau_l(a) omega_l
            RegFun<F> a = ring_->basis(k.lam, k.r, k.s);
            for (int l = 0; l < 3; ++l) {
                RegFun<F> ta = ring_->tau(l, a);
                for (const auto& [lam2, m2] : ta.blocks)
                    for (int r2 = 0; r2 <= lam2; ++r2)
                        for (int s2 = 0; s2 <= lam2; ++s2) {
                            if (m2(r2, s2).is_zero()) continue;
                            EKey nk;
                            nk.jet = k.jet;
                            auto pos = std::lower_bound(nk.jet.begin(), nk.jet.end(),
                                                        std::make_pair(0, l));
                            nk.jet.insert(pos, {0, l});
                            nk.lam = lam2;
                            nk.r = r2;
                            nk.s = s2;
                            add_term(out, nk, c * m2(r2, s2));
                        }
            }
        }
        return out;
    }

    /// Multiplies a B element into the B part of a monomial.
    Elem mult_into_B(const Elem& b, const EKey& k) const {
        Elem out;
        RegFun<F> kf = ring_->basis(k.lam, k.r, k.s);
        for (auto& [kb, cb] : b) {
            int total = kb.degree() + k.degree();
            if (total > max_degree_) throw CutoffExceeded("function mode pushes past the degree cap");
            RegFun<F> prod = ring_->multiply(ring_->basis(kb.lam, kb.r, kb.s), kf);
            std::vector<std::pair<int, int>> jets = k.jet;
            for (auto& f : kb.jet) {
                auto pos = std::lower_bound(jets.begin(), jets.end(), f);
                jets.insert(pos, f);
            }
            for (const auto& [lam2, m2] : prod.blocks)
                for (int r2 = 0; r2 <= lam2; ++r2)
                    for (int s2 = 0; s2 <= lam2; ++s2) {
                        if (m2(r2, s2).is_zero()) continue;
                        EKey nk;
                        nk.jet = jets;
                        nk.lam = lam2;
                        nk.r = r2;
                        nk.s = s2;
                        add_term(out, nk, cb * m2(r2, s2));
                    }
        }
        return out;
    }

    // -- general modes --

    Elem mode_mono(const EKey& ku, int n, const Elem& v) const {
        // peel the leading creation generator
        if (!ku.word.empty()) {
            auto [m, i] = ku.word.front();
            EKey rest = ku;
            rest.word.erase(rest.word.begin());
            int shift = -m - 1; // u = d^{(shift)} tau_i applied at (-1)
            return iterate_mode(
                [&](int q, const Elem& w) {
                    Rat c = binom_rat(q, shift);
                    if (shift % 2) c = -c;
                    if (c == 0) return Elem{};
                    return scale(apply_tau(i, q - shift, w), F::from_rat(c));
                },
                shift + 1, rest, n, v);
        }
        if (ku.lam != 0 || ku.r != 0 || ku.s != 0) {
            EKey rest = ku;
            RegFun<F> a = ring_->basis(ku.lam, ku.r, ku.s);
            rest.lam = rest.r = rest.s = 0;
            return iterate_mode(
                [&](int q, const Elem& w) { return apply_fun(a, q, w); }, 0, rest, n, v);
        }
        if (!ku.jet.empty()) {
            auto [p, i] = ku.jet.front();
            EKey rest = ku;
            rest.jet.erase(rest.jet.begin());
            return iterate_mode(
                [&](int q, const Elem& w) {
                    Rat c = binom_rat(q, p);
                    if (p % 2) c = -c;
                    if (c == 0) return Elem{};
                    return scale(apply_omega(i, q - p, w), F::from_rat(c));
                },
                p + 1, rest, n, v);
        }
        // vacuum
        if (n == -1) return v;
        return {};
    }

    /// (x_(-1) u')_(n) v = sum_{t>=0} x_(-1-t) u'_(n+t) v + u'_(n-1-t) x_(t) v.
    template <class XMode>
    Elem iterate_mode(XMode&& xmode, int xdeg, const EKey& rest, int n, const Elem& v) const {
        Elem out;
        int dv = v.empty() ? 0 : degree_of(v);
        int drest = rest.degree();
        for (int t = 0; t <= drest + dv - 1 - n; ++t) {
            Elem inner = mode_mono(rest, n + t, v);
            if (inner.empty()) continue;
            out = add(out, xmode(-1 - t, inner));
        }
        for (int t = 0; t <= xdeg + dv - 1; ++t) {
            Elem inner = xmode(t, v);
            if (inner.empty()) continue;
            Elem part;
            for (auto& [k2, c2] : inner) {
                Elem single;
                single[k2] = c2;
                Elem res = mode_mono(rest, n - 1 - t, single);
                for (auto& [k3, c3] : res) add_term(part, k3, c3);
            }
            out = add(out, part);
        }
        return out;
    }

    // -- bar machinery --

    const Elem& aij_jet(int i, int j, int p) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(i, j, p);
        auto it = aij_jets_.find(key);
        if (it != aij_jets_.end()) return it->second;
        Elem v = fun_jet(ring_->aij(i, j), p);
        return aij_jets_.emplace(key, std::move(v)).first->second;
    }

    /// tau_bar_i(l), l >= 0, on a pure B monomial: stays in B. Expansion
    /// tau_bar_i(l) b = sum_{t >= l} d^{(t-l)}a^{ij} (tau_j(t) b).
    Elem bar_tau_on_B(int i, int l, const EKey& k) const {
        Elem out;
        int d = k.degree();
        for (int j = 0; j < 3; ++j)
            for (int t = l; t <= d; ++t) {
                Elem inner = tau_on_B(j, t, k);
                if (inner.empty()) continue;
                for (auto& [k2, c2] : inner) {
                    Elem mul = mult_into_B(aij_jet(i, j, t - l), k2);
                    for (auto& [k3, c3] : mul) add_term(out, k3, c3 * c2);
                }
            }
        return out;
    }

    /// Decomposition of one unbarred monomial: peel the outermost creation
    /// mode, decompose the inner part, then move the mode across the bar
    /// word (the two actions commute).
    BarElem to_bar_mono(const EKey& k) const {
        if (k.word.empty()) {
            BarElem out;
            out[BKey{{}, k.jet, k.lam, k.r, k.s}] = F::one();
            return out;
        }
        EKey rest = k;
        auto [m, i] = rest.word.front();
        rest.word.erase(rest.word.begin());
        BarElem tail = to_bar_mono(rest);
        BarElem out;
        for (auto& [bk, bc] : tail) {
            BarElem moved = bar_move_tau(i, m, bk);
            for (auto& [k2, c2] : moved) add_term_bar(out, k2, c2 * bc);
        }
        return out;
    }

    /// tau_i(-m') applied to (bar word)(x)B: commutes with the bar word and
    /// expands on the B part into bar creations plus the rho remainder.
    BarElem bar_move_tau(int i, int m, const BKey& bk) const {
        if (m >= 0) throw DimensionMismatch("bar transport expects creation modes");
        int mp = -m;
        EKey b{{}, bk.jet, bk.lam, bk.r, bk.s};
        BarElem out;
        // bar creation ladder; the new letters multiply B directly, so they
        // join the stored word at the innermost position
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l <= mp - 1; ++l) {
                Elem mul = mult_into_B(aij_jet(j, i, mp - l - 1), b);
                for (auto& [k2, c2] : mul) {
                    BKey nb{bk.word, k2.jet, k2.lam, k2.r, k2.s};
                    BarElem ins = bar_append(j, -1 - l, nb);
                    for (auto& [k3, c3] : ins) add_term_bar(out, k3, c3 * c2);
                }
            }
        // remainder inside B
        Elem rem;
        for (int j = 0; j < 3; ++j) {
            int d = b.degree();
            for (int l = 0; l <= d; ++l) {
                Elem t = bar_tau_on_B(j, l, b);
                if (t.empty()) continue;
                for (auto& [k2, c2] : t) {
                    Elem mul = mult_into_B(aij_jet(j, i, mp + l), k2);
                    for (auto& [k3, c3] : mul) add_term(rem, k3, c3 * c2);
                }
            }
        }
        {
            // + k d^{(m'-1)} omega_i * b
            Elem om;
            EKey ok{{}, {{mp - 1, i}}, 0, 0, 0};
            om[ok] = level_;
            for (auto& [ko, co] : om) {
                Elem mul = mult_into_B(Elem{{ko, co}}, b);
                for (auto& [k3, c3] : mul) add_term(rem, k3, c3);
            }
        }
        for (auto& [k2, c2] : rem) add_term_bar(out, BKey{bk.word, k2.jet, k2.lam, k2.r, k2.s}, c2);
        return out;
    }

    /// Inserts a bar creation mode into the bar word with straightening at
    /// the dual level.
    BarElem bar_insert(int j, int m, const BKey& bk) const {
        BarElem out;
        if (bk.degree() - m > max_degree_)
            throw CutoffExceeded("bar mode pushes past the degree cap");
        if (bk.word.empty() || std::make_pair(m, j) <= bk.word.front()) {
            BKey nk = bk;
            nk.word.insert(nk.word.begin(), {m, j});
            out[nk] = F::one();
            return out;
        }
        auto [m0, j0] = bk.word.front();
        BKey rest = bk;
        rest.word.erase(rest.word.begin());
        BarElem inner = bar_insert(j, m, rest);
        for (auto& [k2, c2] : inner) {
            BarElem re = bar_insert(j0, m0, k2);
            for (auto& [k3, c3] : re) add_term_bar(out, k3, c3 * c2);
        }
        const LieAlgebra& g = lie_->algebra();
        for (int s = 0; s < 3; ++s) {
            const NF& cc = g.c(j, j0, s);
            if (cc.is_zero()) continue;
            BarElem t = bar_insert(s, m + m0, rest);
            for (auto& [k2, c2] : t) add_term_bar(out, k2, c2 * F::from_nf(cc));
        }
        if (m + m0 == 0 && j == j0) add_term_bar(out, rest, F::from_rat(Rat(m)) * kbar_);
        return out;
    }

    /// Appends a bar creation mode at the innermost position of the word.
    BarElem bar_append(int j, int m, const BKey& bk) const {
        BarElem out;
        if (bk.degree() - m > max_degree_)
            throw CutoffExceeded("bar mode pushes past the degree cap");
        if (bk.word.empty() || bk.word.back() <= std::make_pair(m, j)) {
            BKey nk = bk;
            nk.word.emplace_back(m, j);
            out[nk] = F::one();
            return out;
        }
        auto [m0, j0] = bk.word.back();
        BKey rest = bk;
        rest.word.pop_back();
        // rest * x * last  +  rest * [last, x]
        BarElem inner = bar_append(j, m, rest);
        for (auto& [k2, c2] : inner) {
            BarElem re = bar_append(j0, m0, k2);
            for (auto& [k3, c3] : re) add_term_bar(out, k3, c3 * c2);
        }
        const LieAlgebra& g = lie_->algebra();
        for (int s = 0; s < 3; ++s) {
            const NF& cc = g.c(j0, j, s);
            if (cc.is_zero()) continue;
            BarElem t = bar_append(s, m + m0, rest);
            for (auto& [k2, c2] : t) add_term_bar(out, k2, c2 * F::from_nf(cc));
        }
        if (m + m0 == 0 && j == j0) add_term_bar(out, rest, F::from_rat(Rat(m0)) * kbar_);
        return out;
    }

    /// Multiplies a function into the stored B part of a barred monomial.
    /// This is the formal product used by the t map; the bar word wraps the
    /// multiplied function afterwards.
    BarElem bar_multiply_fun(const RegFun<F>& a, const BarElem& v) const {
        BarElem out;
        for (auto& [k, c] : v) {
            Elem mul = mult_into_B(from_fun(a), EKey{{}, k.jet, k.lam, k.r, k.s});
            for (auto& [k2, c2] : mul)
                add_term_bar(out, BKey{k.word, k2.jet, k2.lam, k2.r, k2.s}, c2 * c);
        }
        return out;
    }

    // -- the bilinear form --

    static void add_uterm(UElem& e, const UWord& k, const F& c) {
        if (c.is_zero()) return;
        auto it = e.find(k);
        if (it == e.end()) e.emplace(k, c);
        else {
            it->second += c;
            if (it->second.is_zero()) e.erase(it);
        }
    }

    /// Straightened product x * w in the level-k enveloping algebra.
    UElem u_insert(int i, int m, const UWord& w) const {
        UElem out;
        if (w.w.empty() || std::make_pair(m, i) <= w.w.front()) {
            UWord nw = w;
            nw.w.insert(nw.w.begin(), {m, i});
            out[nw] = F::one();
            return out;
        }
        auto [m0, i0] = w.w.front();
        UWord rest = w;
        rest.w.erase(rest.w.begin());
        UElem inner = u_insert(i, m, rest);
        for (auto& [k2, c2] : inner) {
            UElem re = u_insert(i0, m0, k2);
            for (auto& [k3, c3] : re) add_uterm(out, k3, c3 * c2);
        }
        const LieAlgebra& g = lie_->algebra();
        for (int s = 0; s < 3; ++s) {
            const NF& cc = g.c(i, i0, s);
            if (cc.is_zero()) continue;
            UElem t = u_insert(s, m + m0, rest);
            for (auto& [k2, c2] : t) add_uterm(out, k2, c2 * F::from_nf(cc));
        }
        if (m + m0 == 0 && i == i0) add_uterm(out, rest, F::from_rat(Rat(m)) * level_);
        return out;
    }

    /// Pairing on B: zero unless both degrees vanish, then the invariant
    /// form of the function parts.
    F form_B(const Elem& b1, const Elem& b2) const {
        F acc = F::zero();
        for (auto& [k1, c1] : b1) {
            if (!k1.jet.empty() || !k1.word.empty()) continue;
            for (auto& [k2, c2] : b2) {
                if (!k2.jet.empty() || !k2.word.empty()) continue;
                acc += c1 * c2 * block_pair(k1.lam, k1.r, k1.s, k2.lam, k2.r, k2.s);
            }
        }
        return acc;
    }

    F block_pair(int l1, int r1, int s1, int l2, int r2, int s2) const {
        if (l1 != l2) return F::zero();
        std::lock_guard<std::mutex> lock(mu_);
        auto it = form_tables_.find(l1);
        if (it == form_tables_.end()) {
            int d = (l1 + 1) * (l1 + 1);
            Mat<F> tab(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    tab(a, b) = ring_->form(ring_->basis(l1, a / (l1 + 1), a % (l1 + 1)),
                                            ring_->basis(l1, b / (l1 + 1), b % (l1 + 1)));
            it = form_tables_.emplace(l1, std::move(tab)).first;
        }
        return it->second(r1 * (l1 + 1) + s1, r2 * (l1 + 1) + s2);
    }

    F form_mono(const EKey& ku, const EKey& kv) const {
        // sigma(P) Q expanded in the PBW order of the full algebra
        UElem expanded;
        expanded[UWord{}] = F::one();
        auto mul_mode = [&](int i, int m) {
            UElem next;
            for (auto& [w, c] : expanded) {
                UElem ins = u_insert(i, m, w);
                for (auto& [k2, c2] : ins) add_uterm(next, k2, c2 * c);
            }
            expanded = std::move(next);
        };
        // Build sigma(P) Q with left multiplications: feed Q right to left,
        // then P in order with negated modes (= sigma(P) fed right to left).
        for (auto it = kv.word.rbegin(); it != kv.word.rend(); ++it) mul_mode(it->second, it->first);
        for (auto it = ku.word.begin(); it != ku.word.end(); ++it) mul_mode(it->second, -it->first);
        F sign = (ku.word.size() % 2 == 0) ? F::one() : F::zero() - F::one();

        Elem bu;
        bu[EKey{{}, ku.jet, ku.lam, ku.r, ku.s}] = F::one();
        Elem bv;
        bv[EKey{{}, kv.jet, kv.lam, kv.r, kv.s}] = F::one();

        F acc = F::zero();
        for (auto& [w, c] : expanded) {
            // split the ordered word into negative / rest
            size_t cut = 0;
            while (cut < w.w.size() && w.w[cut].first < 0) ++cut;
            // sigma(R^-) applied to the left B part: the leftmost creation
            // becomes the outermost annihilator, so apply in word order
            Elem left = bu;
            for (size_t t = 0; t < cut && !left.empty(); ++t)
                left = apply_tau(w.w[t].second, -w.w[t].first, left);
            if (cut % 2) left = scale(left, F::zero() - F::one());
            if (left.empty()) continue;
            // R^0 R^+ applied to the right B part, rightmost first
            Elem right = bv;
            for (size_t t = w.w.size(); t-- > cut && !right.empty();)
                right = apply_tau(w.w[t].second, w.w[t].first, right);
            if (right.empty()) continue;
            acc += c * sign * form_B(left, right);
        }
        return acc;
    }
};

} // namespace voawb

#endif
