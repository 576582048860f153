#include <doctest.h>

#include "order2_check.hpp"
#include "pcurv.hpp"
#include "test_util.hpp"

using namespace charp;
using namespace charp::testutil;

namespace {

DiffOp dop(const FpCtx& F, std::vector<FpPoly> cs) {
    (void)F;
    return scalar_op(OpBasis::Derivation, std::move(cs));
}

// Lambda applied to a rational column/matrix N/l^e: numerator of the next level
PolyMat lambda_step_value(const FpCtx& F, const PolyMat& B1, const FpPoly& l, const PolyMat& N, u64 e) {
    // (N/l^e)' + (B1/l)(N/l^e) = [N' l - e N l' + B1 N] / l^{e+1}
    PolyMat t1 = poly_mat_scale(F, poly_mat_derivative(F, N), l);
    PolyMat t2 = poly_mat_scale(F, N, poly_scale(F, poly_derivative(F, l), (u32)(e % F.p)));
    return poly_mat_add(F, poly_mat_sub(F, t1, t2), poly_mat_mul(F, B1, N));
}

}  // namespace

TEST_CASE("katz_recurrence hand cases") {
    FpCtx F5(5);
    // L = D - x at p = 5: A_5 = [x^5]
    DiffOp L = dop(F5, {poly_neg(F5, poly_x()), poly_one()});
    RatMat A5 = katz_recurrence(F5, L, 5);
    std::vector<u32> x5(6, 0);
    x5[5] = 1;
    CHECK(A5.num.at(0, 0) == FpPoly(std::move(x5)));
    CHECK(A5.den == poly_one());
    CHECK(A5.exp == 5);

    FpCtx F3(3);
    // L = D^2 at p = 3: zero
    DiffOp D2 = dop(F3, {FpPoly(), FpPoly(), poly_one()});
    CHECK(katz_recurrence(F3, D2, 3).num.is_zero());
    // L = D^2 - x at p = 3: [[1, x^2], [x, 2]]
    DiffOp airy = dop(F3, {poly_neg(F3, poly_x()), FpPoly(), poly_one()});
    RatMat A3 = katz_recurrence(F3, airy, 3);
    CHECK(A3.num.at(0, 0) == poly_one());
    CHECK(A3.num.at(0, 1) == poly_from_ints(F3, {0, 0, 1}));
    CHECK(A3.num.at(1, 0) == poly_x());
    CHECK(A3.num.at(1, 1) == constant_poly(2));
}

TEST_CASE("katz_vector agrees with katz_recurrence") {
    FpCtx F5(5);
    DiffOp L1 = dop(F5, {poly_neg(F5, poly_x()), poly_one()});
    CHECK(katz_vector(F5, L1).same_value(F5, katz_recurrence(F5, L1, 5)));
    // L = D: zero curvature
    DiffOp D = dop(F5, {FpPoly(), poly_one()});
    CHECK(katz_vector(F5, D).num.is_zero());
    // L = x D - 1 at p = 5: zero (u = 1/x)
    DiffOp xd = dop(F5, {poly_from_ints(F5, {-1}), poly_x()});
    CHECK(katz_vector(F5, xd).num.is_zero());
    CHECK(katz_recurrence(F5, xd, 5).num.is_zero());
    for (u32 p : {3u, 7u, 13u}) {
        FpCtx F(p);
        for (int t = 0; t < 10; ++t) {
            DiffOp L = random_operator(F, 1 + rng()() % 3, (i64)(rng()() % 4), false);
            CHECK(katz_vector(F, L).same_value(F, katz_recurrence(F, L, p)));
        }
    }
}

TEST_CASE("pcurvature_order1") {
    FpCtx F3(3);
    // D - x^2 at p = 3: curvature 2 + x^6
    DiffOp L = dop(F3, {poly_from_ints(F3, {0, 0, -1}), poly_one()});
    Curvature c = pcurvature_order1(F3, L);
    CHECK(c.Ap.num.at(0, 0) == poly_from_ints(F3, {2, 0, 0, 0, 0, 0, 1}));
    REQUIRE(c.pth_root.has_value());
    CHECK(*c.pth_root == poly_from_ints(F3, {2, 0, 1}));
    CHECK(c.Ap.same_value(F3, katz_recurrence(F3, L, 3)));

    // D - 1: curvature 1
    FpCtx F7(7);
    DiffOp L2 = dop(F7, {poly_from_ints(F7, {-1}), poly_one()});
    Curvature c2 = pcurvature_order1(F7, L2);
    CHECK(c2.Ap.num.at(0, 0) == poly_one());

    // x D - 1 at p = 7 -> 0, via regularization and shift-back
    DiffOp xd = dop(F7, {poly_from_ints(F7, {-1}), poly_x()});
    Regularized R = regularize(F7, xd);
    Curvature c3 = pcurvature_order1(F7, R.op);
    CHECK(c3.Ap.num.is_zero());

    // random agreement with katz_vector
    FpCtx F(101);
    for (int t = 0; t < 25; ++t) {
        DiffOp L3 = random_operator(F, 1, 1 + (i64)(rng()() % 4), true);
        Curvature got = pcurvature_order1(F, L3);
        CHECK(got.Ap.same_value(F, katz_vector(F, L3)));
        // numerator lies in F_p[x^p]
        for (size_t i = 0; i < got.Ap.num.at(0, 0).c.size(); ++i)
            if (i % F.p) CHECK(got.Ap.num.at(0, 0).c[i] == 0);
    }
}

TEST_CASE("trace_pcurvature") {
    FpCtx F3(3);
    DiffOp airy = dop(F3, {poly_neg(F3, poly_x()), FpPoly(), poly_one()});
    CHECK(trace_pcurvature(F3, airy).num.at(0, 0).is_zero());
    FpCtx F5(5);
    // D^2 + D: u = -1, trace = u^(p-1) + u^p = (-1)^p = -1
    DiffOp L = dop(F5, {FpPoly(), poly_one(), poly_one()});
    RatMat tr = trace_pcurvature(F5, L);
    CHECK(tr.num.at(0, 0) == poly_from_ints(F5, {-1}));
    {
        RatMat oracle = katz_recurrence(F5, L, 5);
        CHECK(tr.num.at(0, 0) == poly_add(F5, oracle.num.at(0, 0), oracle.num.at(1, 1)));
    }
    for (int t = 0; t < 20; ++t) {
        DiffOp L2 = random_operator(F5, 2, (i64)(rng()() % 4), true);
        RatMat tr2 = trace_pcurvature(F5, L2);
        RatMat oracle = katz_recurrence(F5, L2, 5);
        FpPoly otr = poly_add(F5, oracle.num.at(0, 0), oracle.num.at(1, 1));
        CHECK(tr2.num.at(0, 0) == otr);
    }
}

TEST_CASE("nilpotence_test") {
    FpCtx F5(5);
    DiffOp D2 = dop(F5, {FpPoly(), FpPoly(), poly_one()});
    CHECK(nilpotence_test(F5, D2));
    FpCtx F3(3);
    DiffOp airy = dop(F3, {poly_neg(F3, poly_x()), FpPoly(), poly_one()});
    CHECK_FALSE(nilpotence_test(F3, airy));
    for (u32 p : {3u, 5u, 7u}) {
        FpCtx F(p);
        for (int t = 0; t < 15; ++t) {
            DiffOp L = random_operator(F, 2, (i64)(rng()() % 3), true);
            RatMat Ap = katz_recurrence(F, L, p);
            bool oracle = poly_mat_mul(F, Ap.num, Ap.num).is_zero();
            CHECK(nilpotence_test(F, L) == oracle);
        }
    }
}

TEST_CASE("eigenring_system") {
    FpCtx F(5);
    u32 inv2 = F.inv(2);
    // L = D^2: A = B = 0, R = 1/2, S = 0, T = 0
    DiffOp D2 = dop(F, {FpPoly(), FpPoly(), poly_one()});
    EigenringSystem E = eigenring_system(F, D2);
    CHECK(E.A.is_zero());
    CHECK(E.B.is_zero());
    CHECK(E.R == constant_poly(inv2));
    CHECK(E.S.is_zero());
    CHECK(E.T.is_zero());
    // L = D^2 + u: A = 4u, B = 2u'
    FpPoly u = random_poly_exact(F, 3);
    DiffOp L = dop(F, {u, FpPoly(), poly_one()});
    EigenringSystem E2 = eigenring_system(F, L);
    CHECK(E2.A == poly_scale(F, u, 4));
    CHECK(E2.B == poly_scale(F, poly_derivative(F, u), 2));

    // oracle entries satisfy the system: v^3 b21''' + A b21' + B b21 = 0 and
    // the coupling equations, in cleared form
    for (int t = 0; t < 12; ++t) {
        DiffOp L2 = random_operator(F, 2, 2, true);
        FpPoly v = L2.coeffs[2].at(0, 0);
        FpPoly w = L2.coeffs[1].at(0, 0);
        EigenringSystem es = eigenring_system(F, L2);
        RatMat Ap = katz_recurrence(F, L2, 5);
        // b21 = N/v^p with N = num(1,0); derivatives: N_t / v^{p+t}
        FpPoly N = Ap.num.at(1, 0);
        FpPoly dv = poly_derivative(F, v);
        auto dstep = [&](const FpPoly& T, u64 e) {
            return poly_sub(F, poly_mul(F, poly_derivative(F, T), v),
                            poly_scale(F, poly_mul(F, T, dv), (u32)(e % F.p)));
        };
        FpPoly N1 = dstep(N, F.p);
        FpPoly N2 = dstep(N1, F.p + 1);
        FpPoly N3 = dstep(N2, F.p + 2);
        // v^3 N3 + A N1 v^2 + B N v^3 = 0 over v^{p+3}
        FpPoly v2 = poly_mul(F, v, v);
        FpPoly v3 = poly_mul(F, v2, v);
        FpPoly lhs = poly_add(F, poly_mul(F, v3, N3),
                              poly_add(F, poly_mul(F, es.A, poly_mul(F, N1, v2)),
                                       poly_mul(F, es.B, poly_mul(F, N, v3))));
        CHECK(lhs.is_zero());
        // eq (5): v(b11 - b22) + v b21' - w b21 = 0
        FpPoly b11_22 = poly_sub(F, Ap.num.at(0, 0), Ap.num.at(1, 1));
        FpPoly lhs5 = poly_add(F, poly_mul(F, v, poly_mul(F, b11_22, v)),
                               poly_sub(F, poly_mul(F, v, N1), poly_mul(F, poly_mul(F, w, N), v)));
        CHECK(lhs5.is_zero());
    }
}

TEST_CASE("eigenring membership of the p-curvature") {
    for (u32 p : {3u, 5u, 7u}) {
        FpCtx F(p);
        for (int t = 0; t < 10; ++t) {
            DiffOp L = random_operator(F, 2, (i64)(rng()() % 3), true);
            RatMat Ap = katz_recurrence(F, L, p);
            RatMat A = companion(F, L);
            const FpPoly& l = A.den;
            // (Bp/l^p)' = Bp' l - p l' Bp over l^{p+1} = [Bp' l] / l^{p+1}
            PolyMat lhs = poly_mat_scale(F, poly_mat_derivative(F, Ap.num), l);
            PolyMat rhs = poly_mat_sub(F, poly_mat_mul(F, Ap.num, A.num),
                                       poly_mat_mul(F, A.num, Ap.num));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("pcurvature_order2 hand cases") {
    FpCtx F5(5);
    DiffOp D2 = dop(F5, {FpPoly(), FpPoly(), poly_one()});
    Order2Report rep = pcurvature_order2(F5, D2);
    CHECK(rep.gamma == 4);
    CHECK(rep.kind == Order2Kind::Exact);
    CHECK(rep.exact.num.is_zero());
    CHECK(order2_consistent(F5, rep, katz_recurrence(F5, D2, 5)));

    FpCtx F3(3);
    DiffOp airy = dop(F3, {poly_neg(F3, poly_x()), FpPoly(), poly_one()});
    Order2Report rep3 = pcurvature_order2(F3, airy);
    CHECK(rep3.trace.num.at(0, 0).is_zero());
    CHECK(order2_consistent(F3, rep3, katz_recurrence(F3, airy, 3)));
}

TEST_CASE("pcurvature_order2 random consistency") {
    for (u32 p : {3u, 5u, 7u}) {
        FpCtx F(p);
        for (int t = 0; t < 12; ++t) {
            DiffOp L = random_operator(F, 2, 2, true);
            Order2Report rep = pcurvature_order2(F, L);
            RatMat oracle = katz_recurrence(F, L, p);
            CHECK(order2_consistent(F, rep, oracle));
            // trace matches the oracle
            FpPoly otr = poly_add(F, oracle.num.at(0, 0), oracle.num.at(1, 1));
            CHECK(rep.trace.num.at(0, 0) == otr);
        }
    }
}

TEST_CASE("pcurvature_order2 planted-solution branch") {
    FpCtx F(7);
    int two_cand = 0;
    for (int t = 0; t < 40 && two_cand < 5; ++t) {
        // order-2 operator with a planted solution: M1 * (u0 D - u0')
        FpPoly u0 = random_poly_exact(F, 1 + (i64)(rng()() % 2));
        while (u0.c[0] == 0) u0.c[0] = random_elem(F);
        DiffOp inner = dop(F, {poly_neg(F, poly_derivative(F, u0)), u0});
        DiffOp M1 = random_operator(F, 1, 1, true);
        DiffOp L = op_mul_naive(F, M1, inner);
        if (L.order() != 2) continue;
        if (L.coeffs[2].at(0, 0).c.empty() || L.coeffs[2].at(0, 0).c[0] == 0) continue;
        Order2Report rep = pcurvature_order2(F, L);
        RatMat oracle = katz_recurrence(F, L, F.p);
        CHECK(order2_consistent(F, rep, oracle));
        if (rep.kind == Order2Kind::TwoCandidates) ++two_cand;
    }
    CHECK(two_cand > 0);
}

TEST_CASE("lambda_power") {
    FpCtx F(101);
    // k = 1: D + companion
    DiffOp L = dop(F, {poly_neg(F, poly_x()), poly_one()});
    LambdaPower l1 = lambda_power(F, L, 1);
    CHECK(l1.op.h == 1);
    CHECK(l1.op.g[1].at(0, 0) == poly_one());
    CHECK(l1.op.g[0].at(0, 0) == poly_x());
    // k = 2 on D - x: Lambda^2 = D^2 + 2x D + x^2 + 1
    LambdaPower l2 = lambda_power(F, L, 2);
    CHECK(l2.op.g[2].at(0, 0) == poly_one());
    CHECK(l2.op.g[1].at(0, 0) == poly_from_ints(F, {0, 2}));
    CHECK(l2.op.g[0].at(0, 0) == poly_from_ints(F, {1, 0, 1}));

    // random k <= 6 against iterated single Lambda-steps on monomial values
    for (int t = 0; t < 20; ++t) {
        size_t r = 1 + rng()() % 3;
        DiffOp L2 = random_operator(F, r, 1 + (i64)(rng()() % 3), true);
        u64 k = 1 + rng()() % 6;
        LambdaPower lk = lambda_power(F, L2, k);
        RatMat A = companion(F, L2);
        const FpPoly& l = A.den;
        for (size_t m = 0; m < 3; ++m) {
            // probe column: e_0 * x^m
            PolyMat probe(r, 1);
            std::vector<u32> mono(m + 1, 0);
            mono[m] = 1;
            probe.at(0, 0) = FpPoly(std::move(mono));
            // oracle: k Lambda-steps on N/l^e starting e = 0
            PolyMat N = probe;
            for (u64 e = 0; e < k; ++e) N = lambda_step_value(F, A.num, l, N, e);
            // claimed: sum_j g_j l^j probe^{(j)} over l^k
            PolyMat acc(r, 1);
            PolyMat dmat = probe;
            FpPoly lpow = poly_one();
            for (size_t j = 0; j <= lk.op.h; ++j) {
                acc = poly_mat_add(F, acc, poly_mat_scale(F, poly_mat_mul(F, lk.op.g[j], dmat), lpow));
                dmat = poly_mat_derivative(F, dmat);
                lpow = poly_mul(F, lpow, l);
            }
            CHECK(acc == N);
        }
    }
    CHECK_THROWS_AS(lambda_power(F, L, 101), precondition_error);
}

TEST_CASE("pcurvature_general equals the oracles") {
    // small p: single-step path
    for (u32 p : {3u, 5u, 13u}) {
        FpCtx F(p);
        for (int t = 0; t < 12; ++t) {
            DiffOp L = random_operator(F, 1 + rng()() % 3, (i64)(rng()() % 4), true);
            Curvature c = pcurvature_general(F, L);
            CHECK(c.Ap.same_value(F, katz_recurrence(F, L, p)));
            CHECK(c.Ap.den == L.coeffs[L.order()].at(0, 0));
            CHECK(c.Ap.exp == p);
        }
    }
    // moderate p: giant-step path engaged
    for (u32 p : {101u, 127u, 251u}) {
        FpCtx F(p);
        for (int t = 0; t < 4; ++t) {
            size_t r = 1 + rng()() % 2;
            DiffOp L = random_operator(F, r, 1 + (i64)(rng()() % 2), true);
            Curvature c = pcurvature_general(F, L);
            RatMat oracle = katz_vector(F, L);
            CHECK(c.Ap.same_value(F, oracle));
            CHECK(c.Ap.num == oracle.num);
        }
    }
    // order-2 trace identity through the general path
    FpCtx F(127);
    for (int t = 0; t < 4; ++t) {
        DiffOp L = random_operator(F, 2, 2, true);
        Curvature c = pcurvature_general(F, L);
        RatMat tr = trace_pcurvature(F, L);
        CHECK(poly_add(F, c.Ap.num.at(0, 0), c.Ap.num.at(1, 1)) == tr.num.at(0, 0));
    }
}
