#include <doctest.h>

#include "voawb/envelope.hpp"

using namespace voawb;

namespace {

struct Fix {
    std::shared_ptr<LieCtx> lie = std::make_shared<LieCtx>();
    std::shared_ptr<FunRing<Scalar>> ring = std::make_shared<FunRing<Scalar>>(lie, 12);
    Envelope<Scalar> env{ring, Scalar::k(), 4};
    using E = Envelope<Scalar>::Elem;

    E omega_tilde(int i) const {
        E out;
        for (int j = 0; j < 3; ++j)
            out = Envelope<Scalar>::add(out, env.apply_fun(ring->aij(i, j), -1, env.omega(j)));
        return out;
    }
    E omega_sq() const {
        E out;
        for (int s = 0; s < 3; ++s) out = Envelope<Scalar>::add(out, env.mode(env.omega(s), -1, env.omega(s)));
        return out;
    }
    E d_fun(const RegFun<Scalar>& a) const {
        // da = tau_l(a) omega_l
        E out;
        for (int l = 0; l < 3; ++l)
            out = Envelope<Scalar>::add(out, env.apply_fun(ring->tau(l, a), -1, env.omega(l)));
        return out;
    }
};

using E = Envelope<Scalar>::Elem;

} // namespace

TEST_CASE("frame relations between the two currents") {
    Fix fx;
    auto& env = fx.env;
    Scalar kbar = env.level_bar();

    // tau_bar_i(-1)|0> = tau_j(-1)a^{ij} + kbar omega~_i
    for (int i = 0; i < 3; ++i) {
        E lhs = env.apply_bar(i, -1, env.vacuum());
        E rhs;
        for (int j = 0; j < 3; ++j)
            rhs = Envelope<Scalar>::add(rhs, env.apply_tau(j, -1, env.from_fun(fx.ring->aij(i, j))));
        rhs = Envelope<Scalar>::add(rhs, Envelope<Scalar>::scale(fx.omega_tilde(i), kbar));
        CHECK(lhs == rhs);
    }

    // tau_j(-1)|0> = tau_bar_i(-1)a^{ij} + k omega_j
    for (int j = 0; j < 3; ++j) {
        E rhs;
        for (int i = 0; i < 3; ++i)
            rhs = Envelope<Scalar>::add(rhs, env.apply_bar(i, -1, env.from_fun(fx.ring->aij(i, j))));
        rhs = Envelope<Scalar>::add(rhs, Envelope<Scalar>::scale(env.omega(j), env.level()));
        CHECK(env.tau_state(j) == rhs);
    }
}

TEST_CASE("mode commutators on sample vectors") {
    Fix fx;
    auto& env = fx.env;
    const LieAlgebra& g = fx.lie->algebra();

    std::vector<E> samples;
    samples.push_back(env.vacuum());
    samples.push_back(env.omega(1));
    samples.push_back(env.apply_tau(0, -1, env.from_fun(fx.ring->x(0, 1))));
    samples.push_back(env.apply_omega(2, -2, env.from_fun(fx.ring->x(1, 0))));
    samples.push_back(env.apply_tau(1, -1, env.omega(0)));

    RegFun<Scalar> a = fx.ring->x(0, 0);
    RegFun<Scalar> b = fx.ring->x(1, 1);

    for (const E& v : samples) {
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                if (Envelope<Scalar>::degree_of(v) + std::max({0, -m, -n, -m - n}) + 2 > 4) continue;
                // [a_m, b_n] = 0
                E ab = env.apply_fun(a, m, env.apply_fun(b, n, v));
                E ba = env.apply_fun(b, n, env.apply_fun(a, m, v));
                CHECK(ab == ba);
                // [a_m, omega_{j n}] = 0
                for (int j = 0; j < 3; ++j) {
                    E x1 = env.apply_fun(a, m, env.apply_omega(j, n, v));
                    E x2 = env.apply_omega(j, n, env.apply_fun(a, m, v));
                    CHECK(x1 == x2);
                }
                for (int i = 0; i < 3; ++i) {
                    // [tau_i(m), a_n] = (tau_i a)_{m+n}
                    E lhs = Envelope<Scalar>::sub(env.apply_tau(i, m, env.apply_fun(a, n, v)),
                                                  env.apply_fun(a, n, env.apply_tau(i, m, v)));
                    CHECK(lhs == env.apply_fun(fx.ring->tau(i, a), m + n, v));
                    // [tau_bar_i(m), a_n] = (tauR_i a)_{m+n}
                    E lhsb = Envelope<Scalar>::sub(env.apply_bar(i, m, env.apply_fun(a, n, v)),
                                                   env.apply_fun(a, n, env.apply_bar(i, m, v)));
                    CHECK(lhsb == env.apply_fun(fx.ring->tauR(i, a), m + n, v));
                    for (int j = 0; j < 3; ++j) {
                        // [tau_i(m), omega_{j(n)}] = C_{ijs} omega_{s(m+n)} + m d d
                        E l2 = Envelope<Scalar>::sub(env.apply_tau(i, m, env.apply_omega(j, n, v)),
                                                     env.apply_omega(j, n, env.apply_tau(i, m, v)));
                        E r2;
                        for (int s = 0; s < 3; ++s)
                            if (!g.c(i, j, s).is_zero())
                                r2 = Envelope<Scalar>::add(
                                    r2, Envelope<Scalar>::scale(env.apply_omega(s, m + n, v),
                                                                Scalar::from_nf(g.c(i, j, s))));
                        if (m + n == 0 && i == j)
                            r2 = Envelope<Scalar>::add(r2, Envelope<Scalar>::scale(v, Scalar(m)));
                        CHECK(l2 == r2);
                        // the two current actions commute
                        E c1 = env.apply_tau(i, m, env.apply_bar(j, n, v));
                        E c2 = env.apply_bar(j, n, env.apply_tau(i, m, v));
                        CHECK(c1 == c2);
                    }
                }
            }
    }
}

TEST_CASE("bar current at the dual level") {
    Fix fx;
    auto& env = fx.env;
    // [tau_bar_i(1), tau_bar_j(-1)] |0> = kbar delta_{ij} |0>
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            E lhs = env.apply_bar(i, 1, env.apply_bar(j, -1, env.vacuum()));
            E expect = (i == j) ? Envelope<Scalar>::scale(env.vacuum(), env.level_bar()) : E{};
            CHECK(lhs == expect);
        }
    // [tau_bar_i(m), omega~_{j(n)}] = C_{ijs} omega~_{s(m+n)} + m dd on samples
    const LieAlgebra& g = fx.lie->algebra();
    std::vector<E> samples = {env.vacuum(), fx.omega_tilde(2),
                              env.apply_tau(2, -1, env.from_fun(fx.ring->x(0, 0)))};
    for (const E& v : samples)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (auto [m, n] : std::vector<std::pair<int, int>>{{1, -1}, {0, -1}, {-1, -1}, {2, -2}}) {
                    E lhs = Envelope<Scalar>::sub(
                        env.apply_bar(i, m, env.apply_omega_tilde(j, n, v)),
                        env.apply_omega_tilde(j, n, env.apply_bar(i, m, v)));
                    E rhs;
                    for (int s = 0; s < 3; ++s)
                        if (!g.c(i, j, s).is_zero())
                            rhs = Envelope<Scalar>::add(
                                rhs, Envelope<Scalar>::scale(env.apply_omega_tilde(s, m + n, v),
                                                             Scalar::from_nf(g.c(i, j, s))));
                    if (m + n == 0 && i == j)
                        rhs = Envelope<Scalar>::add(rhs, Envelope<Scalar>::scale(v, Scalar(m)));
                    CHECK(lhs == rhs);
                }
    // mixed commutators: [tau_i(m), omega~_{j(n)}] = m a^{ji}_{(m+n-1)}
    for (const E& v : samples)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (auto [m, n] : std::vector<std::pair<int, int>>{{1, -1}, {1, 0}, {2, -2}, {-1, -1}}) {
                    E lhs = Envelope<Scalar>::sub(
                        env.apply_tau(i, m, env.apply_omega_tilde(j, n, v)),
                        env.apply_omega_tilde(j, n, env.apply_tau(i, m, v)));
                    E rhs = Envelope<Scalar>::scale(
                        env.apply_fun(fx.ring->aij(j, i), m + n - 1, v), Scalar(m));
                    CHECK(lhs == rhs);
                }
}

TEST_CASE("form reconstruction and jet identities") {
    Fix fx;
    auto& env = fx.env;
    // omega_r = (1/4) C_{rlj} a^{ij}_{(-2)} a^{il}
    for (int r = 0; r < 3; ++r) {
        E acc;
        for (int i = 0; i < 3; ++i)
            for (int l = 0; l < 3; ++l)
                for (int j = 0; j < 3; ++j) {
                    const NF& c = fx.lie->algebra().c(r, l, j);
                    if (c.is_zero()) continue;
                    E t = env.apply_fun(fx.ring->aij(i, j), -2, env.from_fun(fx.ring->aij(i, l)));
                    acc = Envelope<Scalar>::add(acc, Envelope<Scalar>::scale(t, Scalar::from_nf(c)));
                }
        acc = Envelope<Scalar>::scale(acc, Scalar(Rat(1, 4)));
        CHECK(acc == env.omega(r));
    }
    // a^{ij}_{(-3)} a^{ij} = 2 omega_s^2 and omega_s^2 = omega~_t^2
    E lhs;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            lhs = Envelope<Scalar>::add(
                lhs, env.apply_fun(fx.ring->aij(i, j), -3, env.from_fun(fx.ring->aij(i, j))));
    CHECK(lhs == Envelope<Scalar>::scale(fx.omega_sq(), Scalar(2)));

    E wt2;
    for (int t = 0; t < 3; ++t)
        wt2 = Envelope<Scalar>::add(wt2, env.mode(fx.omega_tilde(t), -1, fx.omega_tilde(t)));
    CHECK(wt2 == fx.omega_sq());
}

TEST_CASE("the three expressions of the Virasoro state agree") {
    Fix fx;
    auto& env = fx.env;
    E v1 = env.virasoro_state();

    E v2;
    for (int i = 0; i < 3; ++i) v2 = Envelope<Scalar>::add(v2, env.apply_bar(i, -1, fx.omega_tilde(i)));
    v2 = Envelope<Scalar>::add(
        v2, Envelope<Scalar>::scale(fx.omega_sq(), env.level() / Scalar(2)));
    CHECK(v1 == v2);

    E v3;
    for (int i = 0; i < 3; ++i) {
        v3 = Envelope<Scalar>::add(v3, env.apply_tau(i, -1, env.apply_tau(i, -1, env.vacuum())));
        v3 = Envelope<Scalar>::sub(v3, env.apply_bar(i, -1, env.apply_bar(i, -1, env.vacuum())));
    }
    v3 = Envelope<Scalar>::scale(v3, (Scalar(2) * env.kappa()).inv());
    CHECK(v1 == v3);
}

TEST_CASE("Virasoro state products and small commutators") {
    Fix fx;
    auto& env = fx.env;
    E w = env.virasoro_state();
    CHECK(env.mode(w, 3, w) == Envelope<Scalar>::scale(env.vacuum(), Scalar(3)));
    CHECK(env.mode(w, 2, w).empty());
    CHECK(env.mode(w, 1, w) == Envelope<Scalar>::scale(w, Scalar(2)));
    CHECK(env.mode(w, 0, w) == env.translate(w));

    // a_(0) w = -da; a_(n) w = 0 for n >= 1
    RegFun<Scalar> a = fx.ring->x(0, 1);
    E da = fx.d_fun(a);
    CHECK(env.apply_fun(a, 0, w) == Envelope<Scalar>::scale(da, Scalar(-1)));
    CHECK(env.apply_fun(a, 1, w).empty());
    CHECK(env.apply_fun(a, 2, w).empty());
    // tau_i(1) w = tau_i(-1)|0>, tau_i(n >= 2) w = 0, tau_i(0) w = 0
    for (int i = 0; i < 3; ++i) {
        CHECK(env.apply_tau(i, 0, w).empty());
        CHECK(env.apply_tau(i, 1, w) == env.tau_state(i));
        CHECK(env.apply_tau(i, 2, w).empty());
        CHECK(env.apply_bar(i, 0, w).empty());
        CHECK(env.apply_bar(i, 1, w) == env.apply_bar(i, -1, env.vacuum()));
        CHECK(env.apply_bar(i, 2, w).empty());
        CHECK(env.apply_omega(i, 0, w).empty());
        CHECK(env.apply_omega(i, 1, w) == env.omega(i));
        CHECK(env.apply_omega(i, 2, w).empty());
    }

    // translation against gradation: L_0 v = deg(v) v on samples
    std::vector<E> samples = {env.omega(0), env.tau_state(2),
                              env.apply_tau(1, -2, env.from_fun(fx.ring->x(1, 1)))};
    for (const E& v : samples) {
        int d = Envelope<Scalar>::degree_of(v);
        CHECK(env.virasoro(0, v) == Envelope<Scalar>::scale(v, Scalar(d)));
    }
}

TEST_CASE("Virasoro operator commutators and rank") {
    Fix fx;
    auto& env = fx.env;
    std::vector<E> samples = {env.vacuum(), env.omega(1),
                              env.apply_tau(0, -1, env.from_fun(fx.ring->x(0, 0)))};
    for (const E& v : samples) {
        int d = Envelope<Scalar>::degree_of(v);
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                if (d + std::max({0, -m, -n, -m - n}) + 2 > 4) continue;
                E lhs = Envelope<Scalar>::sub(env.virasoro(m, env.virasoro(n, v)),
                                              env.virasoro(n, env.virasoro(m, v)));
                E rhs = Envelope<Scalar>::scale(env.virasoro(m + n, v), Scalar(m - n));
                if (m + n == 0) {
                    Rat cc(m * m * m - m, 12);
                    cc.canonicalize();
                    rhs = Envelope<Scalar>::add(rhs,
                                                Envelope<Scalar>::scale(v, Scalar(cc) * Scalar(6)));
                }
                CHECK(lhs == rhs);
                // [L_m, x_(n)] = -n x_(m+n) and the same for bars and forms
                for (int i = 0; i < 3; ++i) {
                    E l1 = Envelope<Scalar>::sub(env.virasoro(m, env.apply_tau(i, n, v)),
                                                 env.apply_tau(i, n, env.virasoro(m, v)));
                    CHECK(l1 == Envelope<Scalar>::scale(env.apply_tau(i, m + n, v), Scalar(-n)));
                    E l2 = Envelope<Scalar>::sub(env.virasoro(m, env.apply_omega(i, n, v)),
                                                 env.apply_omega(i, n, env.virasoro(m, v)));
                    CHECK(l2 == Envelope<Scalar>::scale(env.apply_omega(i, m + n, v), Scalar(-n)));
                    E l3 = Envelope<Scalar>::sub(env.virasoro(m, env.apply_bar(i, n, v)),
                                                 env.apply_bar(i, n, env.virasoro(m, v)));
                    CHECK(l3 == Envelope<Scalar>::scale(env.apply_bar(i, m + n, v), Scalar(-n)));
                }
                // [L_m, a_(n)] = -(m+n+1) a_(m+n)
                RegFun<Scalar> a = fx.ring->x(0, 0);
                E l4 = Envelope<Scalar>::sub(env.virasoro(m, env.apply_fun(a, n, v)),
                                             env.apply_fun(a, n, env.virasoro(m, v)));
                CHECK(l4 == Envelope<Scalar>::scale(env.apply_fun(a, m + n, v), Scalar(-(m + n + 1))));
            }
    }
}

TEST_CASE("vertex operator modes: vacuum, currents, functions") {
    Fix fx;
    auto& env = fx.env;
    E v = env.apply_tau(1, -1, env.from_fun(fx.ring->x(0, 1)));
    // Y(|0>, z) = Id
    for (int n = -3; n <= 2; ++n) {
        E got = env.mode(env.vacuum(), n, v);
        if (n == -1) CHECK(got == v);
        else CHECK(got.empty());
    }
    // modes of tau_i(-1)|0> reproduce the current action
    for (int i = 0; i < 3; ++i)
        for (int n = -2; n <= 2; ++n)
            CHECK(env.mode(env.tau_state(i), n, v) == env.apply_tau(i, n, v));
    // modes of omega_i reproduce the form action
    for (int i = 0; i < 3; ++i)
        for (int n = -2; n <= 1; ++n)
            CHECK(env.mode(env.omega(i), n, v) == env.apply_omega(i, n, v));
    // (a_(-1) b) for functions is the product
    RegFun<Scalar> a = fx.ring->x(0, 0), b = fx.ring->x(1, 1);
    CHECK(env.mode(env.from_fun(a), -1, env.from_fun(b)) == env.from_fun(fx.ring->multiply(a, b)));
    // the quadratic relations of the presentation vanish identically:
    // a_(-1)b_(-1)|0> - (ab)_(-1)|0> and a_(-2)|0> - (tau_i a)_(-1) omega_i(-1)|0>
    E q1 = Envelope<Scalar>::sub(env.apply_fun(a, -1, env.from_fun(b)),
                                 env.from_fun(fx.ring->multiply(a, b)));
    CHECK(q1.empty());
    E q2 = env.apply_fun(a, -2, env.vacuum());
    for (int i = 0; i < 3; ++i)
        q2 = Envelope<Scalar>::sub(q2, env.apply_fun(fx.ring->tau(i, a), -1, env.omega(i)));
    CHECK(q2.empty());
}

TEST_CASE("bar decomposition round trip and rho") {
    Fix fx;
    auto& env = fx.env;
    std::vector<E> samples = {
        env.vacuum(),
        env.omega(2),
        env.tau_state(0),
        env.apply_tau(1, -1, env.from_fun(fx.ring->x(0, 0))),
        env.apply_tau(2, -2, env.vacuum()),
        env.apply_tau(0, -1, env.apply_tau(1, -1, env.from_fun(fx.ring->x(1, 0)))),
        env.apply_tau(0, -1, env.omega(1)),
    };
    for (const E& v : samples) {
        auto bar = env.to_bar(v);
        CHECK(env.from_bar(bar) == v);
    }
    // rho(tau_i(-1)) |0> = k omega_i
    for (int i = 0; i < 3; ++i)
        CHECK(env.rho(i, -1, env.vacuum()) ==
              Envelope<Scalar>::scale(env.omega(i), env.level()));
    // nonnegative modes keep B inside B
    E b = env.mode(env.omega(0), -1, env.from_fun(fx.ring->x(0, 0)));
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m <= 2; ++m) {
            E img = env.apply_tau(i, m, b);
            for (auto& [k, c] : img) CHECK(k.word.empty());
            CHECK(env.rho(i, m, b) == img);
        }
}

TEST_CASE("t map and pairing transport") {
    Fix fx;
    auto& env = fx.env;
    // t fixes functions
    E a = env.from_fun(fx.ring->x(0, 1));
    auto ta = env.t_map(a);
    REQUIRE(ta.size() == 1);
    CHECK(ta.begin()->first.word.empty());
    CHECK(env.from_bar(ta) == a);

    // t(tau_i(-1)a) = sum_j tau_bar_j(-1)(a^{ji} a)
    RegFun<Scalar> f = fx.ring->x(0, 0);
    for (int i = 0; i < 3; ++i) {
        auto lhs = env.from_bar(env.t_map(env.apply_tau(i, -1, env.from_fun(f))));
        E rhs;
        for (int j = 0; j < 3; ++j)
            rhs = Envelope<Scalar>::add(
                rhs, env.apply_bar(j, -1, env.from_fun(fx.ring->multiply(fx.ring->aij(j, i), f))));
        CHECK(lhs == rhs);
    }

    // (w, b) = (t(w), b) for sampled w in U(g_-)(x)A and b in B
    std::vector<E> ws = {env.apply_tau(0, -1, env.from_fun(fx.ring->x(1, 1))),
                         env.apply_tau(2, -2, env.vacuum()),
                         env.apply_tau(1, -1, env.apply_tau(1, -1, env.vacuum()))};
    std::vector<E> bs = {env.omega(0), env.mode(env.omega(1), -1, env.from_fun(fx.ring->x(0, 0))),
                         env.apply_omega(2, -2, env.vacuum()),
                         env.mode(env.omega(0), -1, env.omega(0))};
    for (const E& w : ws)
        for (const E& b : bs) {
            Scalar lhs = env.form(w, b);
            Scalar rhs = env.form(env.from_bar(env.t_map(w)), b);
            CHECK(lhs == rhs);
        }
}

TEST_CASE("bilinear form: normalization, symmetry, adjoints") {
    Fix fx;
    auto& env = fx.env;
    CHECK(env.form(env.vacuum(), env.vacuum()) == Scalar::one());

    // (tau_i(-1)|0>, b omega_j) = -delta_{ij} (1, b)
    RegFun<Scalar> b = fx.ring->x(0, 0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Scalar got = env.form(env.tau_state(i), env.apply_fun(b, -1, env.omega(j)));
            Scalar expect = (i == j) ? -fx.ring->form(fx.ring->one(), b) : Scalar::zero();
            CHECK(got == expect);
        }

    std::vector<E> us = {env.vacuum(), env.omega(0), env.tau_state(1),
                         env.apply_tau(0, -1, env.from_fun(fx.ring->x(0, 0))),
                         env.apply_bar(2, -1, env.vacuum()),
                         env.mode(env.omega(1), -1, env.omega(1))};
    // symmetry and graded orthogonality
    for (const E& u : us)
        for (const E& v : us) CHECK(env.form(u, v) == env.form(v, u));

    RegFun<Scalar> a = fx.ring->x(1, 0);
    for (const E& u : us)
        for (const E& v : us) {
            for (int n = -2; n <= 2; ++n) {
                int du = Envelope<Scalar>::degree_of(u), dv = Envelope<Scalar>::degree_of(v);
                if (du + std::max(0, -n) > 3 || dv + std::max(0, n) + 2 > 3) continue;
                // a_(n)* = a_(-n-2)
                CHECK(env.form(env.apply_fun(a, n, u), v) == env.form(u, env.apply_fun(a, -n - 2, v)));
                for (int i = 0; i < 3; ++i) {
                    // omega_(n)* = -omega_(-n); x(n)* = -x(-n); ybar(n)* = -ybar(-n)
                    CHECK(env.form(env.apply_omega(i, n, u), v) ==
                          -env.form(u, env.apply_omega(i, -n, v)));
                    CHECK(env.form(env.apply_tau(i, n, u), v) == -env.form(u, env.apply_tau(i, -n, v)));
                    CHECK(env.form(env.apply_bar(i, n, u), v) == -env.form(u, env.apply_bar(i, -n, v)));
                }
            }
        }
}

TEST_CASE("graded character of the model") {
    Fix fx;
    auto& env = fx.env;
    for (int lam = 0; lam <= 2; ++lam)
        for (int n = 0; n <= 3; ++n) {
            int64_t expect = 0;
            for (int i = 0; i <= n; ++i)
                expect += colored_partitions(i, 3) * colored_partitions(n - i, 3);
            expect *= (int64_t)(lam + 1) * (lam + 1);
            CHECK((int64_t)env.basis_keys(lam, n).size() == expect);
        }
    // 27 at the vacuum block in degree 2
    CHECK(env.basis_keys(0, 2).size() == 27);
    CHECK(env.basis_keys(0, 1).size() == 6);
}
