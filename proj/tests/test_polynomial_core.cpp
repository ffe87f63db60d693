#include <gtest/gtest.h>

#include "support.hpp"

using namespace shearkit;
using namespace testing_support;

namespace {

// Oracle for jet inversion: g o j minus the identity has no terms up to the order.
bool inverts_through(const PolyMap& g, const PolyMap& j, int order) {
    PolyMap r = compose_truncated(g, j, order);
    return r == PolyMap::identity(j.dim(), j.backend()).truncated(order);
}

}  // namespace

TEST(Scalar, ExactArithmeticHasNoRounding) {
    Scalar third = Q(1, 3);
    EXPECT_EQ(third + third + third, Q(1));
    EXPECT_EQ(Scalar::exact(1, 1) * Scalar::exact(1, -1), Q(2));
    EXPECT_EQ(Q(1) / Scalar::exact(0, 1), Scalar::exact(0, -1));
}

TEST(Scalar, MixedBackendsAreRejected) {
    try {
        (void)(Q(1) + C(1.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BackendMismatch);
    }
    EXPECT_THROW((void)C(1.0).to_backend(Backend::exact), Error);
}

TEST(Scalar, ExpOnlyExactAtZero) {
    EXPECT_EQ(exp(Q(0)), Q(1));
    EXPECT_THROW((void)exp(Q(1)), Error);
    EXPECT_NEAR(exp(C(1.0)).to_complex().real(), std::exp(1.0), 1e-15);
}

TEST(Poly, DifferenceOfSquares) {
    Poly z1 = Z(2, 0), z2 = Z(2, 1);
    EXPECT_EQ((z1 + z2) * (z1 - z2), P(2, {{{2, 0}, 1}, {{0, 2}, -1}}));
}

TEST(Poly, ComposeBinomial) {
    Poly p = P(2, {{{2, 0}, 1}});
    Poly r = p.compose({Z(2, 0) + Poly::constant(2, Q(1)), Z(2, 1)});
    EXPECT_EQ(r, P(2, {{{2, 0}, 1}, {{1, 0}, 2}, {{0, 0}, 1}}));
}

TEST(Poly, AdditiveInverseIsEmpty) {
    Poly p = P(3, {{{1, 2, 0}, 3}, {{0, 0, 1}, -2, 7}});
    Poly s = p + (-p);
    EXPECT_TRUE(s.is_zero());
    EXPECT_EQ(s.size(), 0u);
    EXPECT_EQ(s.degree(), -1);
}

TEST(Poly, GradedLexIterationOrder) {
    Poly p = P(2, {{{0, 2}, 1}, {{1, 1}, 1}, {{2, 0}, 1}, {{0, 0}, 1}, {{0, 1}, 1}});
    std::vector<std::array<int, 2>> seen;
    for (const auto& [m, c] : p.terms()) seen.push_back({m[0], m[1]});
    // degree ascending; within a degree, larger exponent of z1 first
    ASSERT_EQ(seen.size(), 5u);
    EXPECT_EQ(seen[0], (std::array<int, 2>{0, 0}));
    EXPECT_EQ(seen[2], (std::array<int, 2>{2, 0}));
    EXPECT_EQ(seen[3], (std::array<int, 2>{1, 1}));
    EXPECT_EQ(seen[4], (std::array<int, 2>{0, 2}));
}

TEST(Poly, ArityAndBackendMismatch) {
    EXPECT_THROW((void)(Z(2, 0) + Z(3, 0)), Error);
    EXPECT_THROW((void)(Z(2, 0) + Z(2, 0, Backend::approx)), Error);
}

TEST(Poly, ApproximateMatchesExact) {
    std::mt19937 rng(7);
    Poly p = random_poly(rng, 2, 4, 6), q = random_poly(rng, 2, 4, 6);
    Poly exact = p * q;
    Poly approx = p.to_backend(Backend::approx) * q.to_backend(Backend::approx);
    EXPECT_TRUE(near_equal(exact.to_backend(Backend::approx), approx, 1e-12));
}

TEST(Poly, TruncatedCompositionMatchesFullThenTruncate) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Poly p = random_poly(rng, 2, 4, 5);
        std::vector<Poly> subs{random_poly(rng, 2, 3, 4), random_poly(rng, 2, 3, 4)};
        EXPECT_EQ(p.compose_truncated(subs, 4, 2), p.compose(subs).truncated(4));
    }
}

TEST(PolyProperty, MultiplicationIsAssociative) {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + trial % 3;
        Poly p = random_poly(rng, n, 5, 4), q = random_poly(rng, n, 5, 4), r = random_poly(rng, n, 5, 4);
        EXPECT_EQ((p * q) * r, p * (q * r));
        EXPECT_EQ(p * (q + r), p * q + p * r);
    }
}

TEST(PolyProperty, CompositionIsAssociative) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 1 + trial % 3;
        Poly p = random_poly(rng, n, 3, 4);
        std::vector<Poly> m1, m2;
        for (std::size_t i = 0; i < n; ++i) {
            m1.push_back(random_poly(rng, n, 2, 3));
            m2.push_back(random_poly(rng, n, 2, 3));
        }
        PolyMap M1(m1), M2(m2);
        // p(m1(m2(z))): substitute m1 first, then m2; or substitute the composite.
        EXPECT_EQ(M2.pull_back(M1.pull_back(p)), compose(M1, M2).pull_back(p));
    }
}

TEST(Jacobian, Examples) {
    PolyMap tri({Z(2, 0) + Z(2, 1) * Z(2, 1), Z(2, 1)});
    EXPECT_EQ(jacobian_det(tri), Poly::constant(2, Q(1)));
    PolyMap swap({Z(2, 1), Z(2, 0)});
    EXPECT_EQ(jacobian_det(swap), Poly::constant(2, Q(-1)));
    PolyMap sq({Z(2, 0) * Z(2, 0), Z(2, 1)});
    // d/dz1 z1^2 = 2 z1, times 1
    EXPECT_EQ(jacobian_det(sq), P(2, {{{1, 0}, 2}}));
}

TEST(Jacobian, ThreeByThreeAgainstHandExpansion) {
    // (z1 + z2 z3, z2 + z3^2, 2 z3): upper triangular with diagonal 1, 1, 2
    PolyMap m({Z(3, 0) + Z(3, 1) * Z(3, 2), Z(3, 1) + Z(3, 2) * Z(3, 2), Z(3, 2) * Q(2)});
    EXPECT_EQ(jacobian_det(m), Poly::constant(3, Q(2)));
    Point z{{0.3, 0.1}, {-0.2, 0.4}, {0.5, 0.0}};
    auto J = jacobian_at(m, z);
    EXPECT_NEAR(std::abs(J[1] - z[2]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(J[5] - 2.0 * z[2]), 0.0, 1e-15);
}

TEST(Divergence, Examples) {
    VectorField a({Z(2, 1) * Z(2, 1), Poly(2, Backend::exact)});
    EXPECT_TRUE(divergence(a).is_zero());
    VectorField b({Z(2, 0), Poly(2, Backend::exact)});
    EXPECT_EQ(divergence(b), Poly::constant(2, Q(1)));
    VectorField c({Z(2, 0) * Z(2, 0), Z(2, 0) * Z(2, 1) * Q(-2)});
    EXPECT_TRUE(divergence(c).is_zero());
}

TEST(DivergenceProperty, Linear) {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        VectorField v({random_poly(rng, 2, 4, 5), random_poly(rng, 2, 4, 5)});
        VectorField w({random_poly(rng, 2, 4, 5), random_poly(rng, 2, 4, 5)});
        Scalar a = Q(trial - 7, 3), b = Scalar::exact(2, trial);
        EXPECT_EQ(divergence(v.scaled(a) + w.scaled(b)), divergence(v) * a + divergence(w) * b);
    }
}

TEST(JetInvert, TriangularShear) {
    PolyMap j({Z(2, 0) + Z(2, 1) * Z(2, 1), Z(2, 1)});
    Jet g = jet_invert(Jet::of(j, 3));
    EXPECT_EQ(g.map, PolyMap({Z(2, 0) - Z(2, 1) * Z(2, 1), Z(2, 1)}));
    EXPECT_TRUE(inverts_through(g.map, j, 3));
}

TEST(JetInvert, Identity) {
    PolyMap id = PolyMap::identity(3, Backend::exact);
    EXPECT_EQ(jet_invert(Jet::of(id, 5)).map, id);
}

TEST(JetInvert, NonIdentityLinearPart) {
    PolyMap j({Z(2, 0) * Q(2), Z(2, 1) + Z(2, 0) * Z(2, 0)});
    Jet g = jet_invert(Jet::of(j, 2));
    EXPECT_EQ(g.map, PolyMap({Z(2, 0) * Q(1, 2), Z(2, 1) - Z(2, 0) * Z(2, 0) * Q(1, 4)}));
    EXPECT_TRUE(inverts_through(g.map, j, 2));
}

TEST(JetInvert, Errors) {
    PolyMap singular({Z(2, 0) + Z(2, 1), Z(2, 0) + Z(2, 1)});
    try {
        jet_invert(Jet::of(singular, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
    }
    PolyMap shifted({Z(2, 0) + Poly::constant(2, Q(1)), Z(2, 1)});
    EXPECT_THROW(jet_invert(Jet::of(shifted, 3)), Error);
}

TEST(JetInvertProperty, RoundTripOnRandomJets) {
    std::mt19937 rng(4);
    int done = 0;
    while (done < 100) {
        std::size_t n = 2 + done % 2;
        const int order = 2 + done % 4;
        std::vector<Poly> comps;
        for (std::size_t i = 0; i < n; ++i) comps.push_back(random_poly(rng, n, order, 5, 4, 1));
        PolyMap j(comps);
        if (j.linear_part().determinant().is_zero()) continue;
        Jet g = jet_invert(Jet::of(j, order));
        EXPECT_TRUE(inverts_through(j.truncated(order), g.map, order)) << j.to_string();
        EXPECT_TRUE(inverts_through(g.map, j, order));
        ++done;
    }
}

TEST(JetCompose, MixedOrdersFlagTruncation) {
    PolyMap f({Z(2, 0) + Z(2, 1) * Z(2, 1) * Z(2, 1), Z(2, 1)});
    Jet a = Jet::of(f, 4), b = Jet::of(f, 2);
    Jet c = compose(a, b);
    EXPECT_EQ(c.order, 2);
    EXPECT_TRUE(c.truncated);
    EXPECT_FALSE(compose(a, a).truncated);
}

TEST(InvertPolymap, HenonAndShifted) {
    PolyMap h({Z(2, 1), Z(2, 1) * Z(2, 1) - Z(2, 0) + Poly::constant(2, Q(3))});
    PolyMap g = invert_polymap(h);
    EXPECT_TRUE(compose(h, g).is_identity());
    EXPECT_THROW(invert_polymap(PolyMap({Z(2, 0) * Z(2, 0), Z(2, 1)})), Error);
}

TEST(ParamMaps, ParametersPassThroughComposition) {
    // variables (z1, z2, x): the map (z1 + x z2^2, z2) composed with itself gives z1 + 2x z2^2
    Poly x = Z(3, 2);
    PolyMap f({Z(3, 0) + x * Z(3, 1) * Z(3, 1), Z(3, 1)});
    PolyMap ff = compose(f, f);
    EXPECT_EQ(ff[0], Z(3, 0) + x * Z(3, 1) * Z(3, 1) * Q(2));
    EXPECT_EQ(ff.num_params(), 1u);
    EXPECT_EQ(ff.degree(), 2);
    Jet inv = jet_invert(Jet::of(f, 4));
    EXPECT_EQ(inv.map[0], Z(3, 0) - x * Z(3, 1) * Z(3, 1));
}
