#include "voawb/lie.hpp"

namespace voawb {

namespace {

// 2x2 defining representation, used once to derive the structure constants.
Mat<NF> mat2(NF a, NF b, NF c, NF d) {
    Mat<NF> m(2, 2);
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
    return m;
}

NF trace_form(const Mat<NF>& x, const Mat<NF>& y) {
    Mat<NF> p = x * y;
    NF t;
    for (int j = 0; j < p.rows(); ++j) t += p(j, j);
    return t;
}

} // namespace

LieAlgebra LieAlgebra::sl2() {
    // Orthonormal frame for the normalized form (trace form in the defining
    // representation): tau1 = (e+f)/s2, tau2 = i(e-f)/s2, tau3 = h/s2.
    NF half_s2(Rat(0), Rat(0), Rat(1, 2), Rat(0));   // sqrt2/2 = 1/sqrt2
    NF half_is2(Rat(0), Rat(0), Rat(0), Rat(1, 2));  // i*sqrt2/2
    Mat<NF> e = mat2(NF(0), NF(1), NF(0), NF(0));
    Mat<NF> f = mat2(NF(0), NF(0), NF(1), NF(0));
    Mat<NF> h = mat2(NF(1), NF(0), NF(0), NF(-1));
    std::vector<Mat<NF>> tau = {
        (e + f) * half_s2,
        (e - f) * half_is2,
        h * half_s2,
    };
    LieAlgebra g;
    g.dim = 3;
    g.h_dual = Rat(2);
    g.C.assign(27, NF::zero());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Mat<NF> br = tau[i] * tau[j] - tau[j] * tau[i];
            for (int k = 0; k < 3; ++k) g.c(i, j, k) = trace_form(br, tau[k]);
        }
    return g;
}

bool LieAlgebra::check_antisymmetry() const {
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                if (c(i, j, k) != -c(j, i, k)) return false;
                if (c(i, j, k) != c(j, k, i)) return false; // cyclic
            }
    return true;
}

bool LieAlgebra::check_jacobi() const {
    // [[ti,tj],tk] + [[tj,tk],ti] + [[tk,ti],tj] = 0 componentwise.
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    NF s;
                    for (int p = 0; p < dim; ++p) {
                        s += c(i, j, p) * c(p, k, l);
                        s += c(j, k, p) * c(p, i, l);
                        s += c(k, i, p) * c(p, j, l);
                    }
                    if (!s.is_zero()) return false;
                }
    return true;
}

NF LieAlgebra::contraction(int i, int j) const {
    NF s;
    for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) s += c(i, p, q) * c(j, q, p);
    return s;
}

Irrep Irrep::highest_weight(int n) {
    Irrep V;
    V.n_ = n;
    V.dual_ = false;
    int d = n + 1;
    V.e_ = Mat<NF>(d, d);
    V.f_ = Mat<NF>(d, d);
    V.h_ = Mat<NF>(d, d);
    for (int j = 0; j < d; ++j) {
        V.h_(j, j) = NF(Rat(n - 2 * j));
        if (j + 1 < d) V.f_(j + 1, j) = NF::one();
        if (j > 0) V.e_(j - 1, j) = NF(Rat(j) * Rat(n - j + 1));
    }
    NF half_s2(Rat(0), Rat(0), Rat(1, 2), Rat(0));
    NF half_is2(Rat(0), Rat(0), Rat(0), Rat(1, 2));
    V.tau_ = {
        (V.e_ + V.f_) * half_s2,
        (V.e_ - V.f_) * half_is2,
        V.h_ * half_s2,
    };
    return V;
}

Irrep Irrep::dual_of(int n) {
    Irrep V = highest_weight(n);
    Irrep D;
    D.n_ = n;
    D.dual_ = true;
    D.e_ = V.e_.transpose() * NF(-1);
    D.f_ = V.f_.transpose() * NF(-1);
    D.h_ = V.h_.transpose() * NF(-1);
    D.tau_.clear();
    for (int i = 0; i < 3; ++i) D.tau_.push_back(V.tau_[i].transpose() * NF(-1));
    return D;
}

Mat<NF> Irrep::casimir() const {
    Mat<NF> c(dim(), dim());
    for (int i = 0; i < 3; ++i) c = c + tau_[i] * tau_[i];
    return c;
}

Rat casimir_eigenvalue(int n) {
    Rat r(n * n + 2 * n, 2);
    r.canonicalize();
    return r;
}

std::vector<int> fusion_channels(int a, int b) {
    std::vector<int> out;
    for (int n = std::abs(a - b); n <= a + b; n += 2) out.push_back(n);
    return out;
}

const Irrep& LieCtx::irrep(int n, bool dual) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_pair(n, dual ? 1 : 0);
    auto it = irreps_.find(key);
    if (it != irreps_.end()) return it->second;
    Irrep V = dual ? Irrep::dual_of(n) : Irrep::highest_weight(n);
    return irreps_.emplace(key, std::move(V)).first->second;
}

namespace {

// Kernel of the equivariance system M X_source = X_target M for x in {e,f,h}.
std::vector<Mat<NF>> solve_equivariant(const std::vector<Mat<NF>>& source,
                                       const std::vector<Mat<NF>>& target) {
    int D = source[0].rows();
    int dT = target[0].rows();
    int unknowns = dT * D;
    Mat<NF> sys((int)source.size() * dT * D, unknowns);
    int row = 0;
    for (size_t x = 0; x < source.size(); ++x) {
        for (int r = 0; r < dT; ++r)
            for (int c = 0; c < D; ++c) {
                for (int cp = 0; cp < D; ++cp)
                    if (!source[x](cp, c).is_zero()) sys(row, r * D + cp) += source[x](cp, c);
                for (int rp = 0; rp < dT; ++rp)
                    if (!target[x](r, rp).is_zero()) sys(row, rp * D + c) -= target[x](r, rp);
                ++row;
            }
    }
    std::vector<std::vector<NF>> ker = sys.kernel();
    std::vector<Mat<NF>> out;
    for (auto& v : ker) {
        Mat<NF> m(dT, D);
        for (int r = 0; r < dT; ++r)
            for (int c = 0; c < D; ++c) m(r, c) = v[(size_t)r * D + c];
        out.push_back(std::move(m));
    }
    return out;
}

Mat<NF> kron_sum(const Mat<NF>& a, int db, const Mat<NF>& b) {
    // a (x) I + I (x) b on the tensor product, index (p,q) -> p*db+q.
    int da = a.rows();
    Mat<NF> out(da * db, da * db);
    for (int p = 0; p < da; ++p)
        for (int q = 0; q < db; ++q) {
            for (int pp = 0; pp < da; ++pp)
                if (!a(pp, p).is_zero()) out(pp * db + q, p * db + q) += a(pp, p);
            for (int qq = 0; qq < db; ++qq)
                if (!b(qq, q).is_zero()) out(p * db + qq, p * db + q) += b(qq, q);
        }
    return out;
}

} // namespace

const std::vector<HomTensor>& LieCtx::hom_basis(int l, int m, int n, bool dual) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_tuple(l, m, n, dual ? 1 : 0);
    auto it = homs_.find(key);
    if (it != homs_.end()) return it->second;
    const Irrep& Vl = irrep(l, dual);
    const Irrep& Vm = irrep(m, dual);
    const Irrep& Vn = irrep(n, dual);
    std::vector<Mat<NF>> src, tgt;
    const Mat<NF>* gens_l[3] = {&Vl.act_e(), &Vl.act_f(), &Vl.act_h()};
    const Mat<NF>* gens_m[3] = {&Vm.act_e(), &Vm.act_f(), &Vm.act_h()};
    const Mat<NF>* gens_n[3] = {&Vn.act_e(), &Vn.act_f(), &Vn.act_h()};
    for (int x = 0; x < 3; ++x) {
        src.push_back(kron_sum(*gens_l[x], Vm.dim(), *gens_m[x]));
        tgt.push_back(*gens_n[x]);
    }
    std::vector<HomTensor> out;
    for (auto& mat : solve_equivariant(src, tgt)) {
        HomTensor h;
        h.lam = l; h.mu = m; h.nu = n; h.dual = dual;
        h.m = std::move(mat);
        out.push_back(std::move(h));
    }
    return homs_.emplace(key, std::move(out)).first->second;
}

const std::vector<HomTensor3>& LieCtx::hom_basis3(int l1, int l2, int l3, int gam, bool dual) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_tuple(l1, l2, l3, gam, dual ? 1 : 0);
    auto it = homs3_.find(key);
    if (it != homs3_.end()) return it->second;
    const Irrep& V1 = irrep(l1, dual);
    const Irrep& V2 = irrep(l2, dual);
    const Irrep& V3 = irrep(l3, dual);
    const Irrep& Vg = irrep(gam, dual);
    const Mat<NF>* g1[3] = {&V1.act_e(), &V1.act_f(), &V1.act_h()};
    const Mat<NF>* g2[3] = {&V2.act_e(), &V2.act_f(), &V2.act_h()};
    const Mat<NF>* g3[3] = {&V3.act_e(), &V3.act_f(), &V3.act_h()};
    const Mat<NF>* gg[3] = {&Vg.act_e(), &Vg.act_f(), &Vg.act_h()};
    std::vector<Mat<NF>> src, tgt;
    for (int x = 0; x < 3; ++x) {
        Mat<NF> both = kron_sum(*g1[x], V2.dim(), *g2[x]);
        src.push_back(kron_sum(both, V3.dim(), *g3[x]));
        tgt.push_back(*gg[x]);
    }
    std::vector<HomTensor3> out;
    for (auto& mat : solve_equivariant(src, tgt)) {
        HomTensor3 h;
        h.l1 = l1; h.l2 = l2; h.l3 = l3; h.gam = gam; h.dual = dual;
        h.m = std::move(mat);
        out.push_back(std::move(h));
    }
    return homs3_.emplace(key, std::move(out)).first->second;
}

NF LieCtx::pairing(const HomTensor& f, const HomTensor& g) {
    if (f.lam != g.lam || f.mu != g.mu || f.nu != g.nu || f.dual == g.dual)
        throw WeightMismatch("hom pairing requires matching weights on dual sides");
    NF s;
    for (int r = 0; r < f.m.rows(); ++r)
        for (int c = 0; c < f.m.cols(); ++c) s += f.m(r, c) * g.m(r, c);
    return s / NF(Rat(f.nu + 1));
}

NF LieCtx::pairing3(const HomTensor3& f, const HomTensor3& g) {
    if (f.l1 != g.l1 || f.l2 != g.l2 || f.l3 != g.l3 || f.gam != g.gam || f.dual == g.dual)
        throw WeightMismatch("triple hom pairing requires matching weights on dual sides");
    NF s;
    for (int r = 0; r < f.m.rows(); ++r)
        for (int c = 0; c < f.m.cols(); ++c) s += f.m(r, c) * g.m(r, c);
    return s / NF(Rat(f.gam + 1));
}

const std::pair<std::vector<HomTensor>, std::vector<HomTensor>>&
LieCtx::dual_basis(int l, int m, int n) {
    std::lock_guard<std::recursive_mutex> lock(mu_);
    auto key = std::make_tuple(l, m, n);
    auto it = duals_.find(key);
    if (it != duals_.end()) return it->second;
    const auto& fs = hom_basis(l, m, n, false);
    const auto& gs_raw = hom_basis(l, m, n, true);
    if (fs.empty()) throw EmptyChannel("no invariant maps for this weight triple");
    if (fs.size() != gs_raw.size()) throw WeightMismatch("hom spaces on dual sides differ in dimension");
    int d = (int)fs.size();
    Mat<NF> P(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) P(i, j) = pairing(fs[i], gs_raw[j]);
    Mat<NF> Pinv = P.inverse();
    std::vector<HomTensor> gs;
    for (int i = 0; i < d; ++i) {
        HomTensor g = gs_raw[0];
        g.m = Mat<NF>(gs_raw[0].m.rows(), gs_raw[0].m.cols());
        for (int j = 0; j < d; ++j) {
            if (Pinv(j, i).is_zero()) continue;
            g.m = g.m + gs_raw[j].m * Pinv(j, i);
        }
        gs.push_back(std::move(g));
    }
    auto value = std::make_pair(fs, std::move(gs));
    return duals_.emplace(key, std::move(value)).first->second;
}

} // namespace voawb
