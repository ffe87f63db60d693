#include <gtest/gtest.h>

#include "shearkit/interpolate.hpp"
#include "shearkit/planar.hpp"
#include "support.hpp"

using namespace shearkit;
using namespace testing_support;

namespace {

Poly x2() { return Z(2, 0); }
Poly y2() { return Z(2, 1); }
Poly K2(const Scalar& c) { return Poly::constant(2, c); }

Scalar rand_q(std::mt19937& rng, bool nonzero = false) {
    std::uniform_int_distribution<int> num(-8, 8), den(1, 8);
    for (;;) {
        int p = num(rng);
        if (!nonzero || p != 0) return Q(p, den(rng));
    }
}

PlanarFactor random_affine(std::mt19937& rng) {
    for (;;) {
        Matrix A = Matrix::from_rows({{rand_q(rng), rand_q(rng)}, {rand_q(rng), rand_q(rng)}});
        if (!A.determinant().is_zero()) return PlanarAffine{A, {rand_q(rng), rand_q(rng)}};
    }
}

PlanarFactor random_elementary(std::mt19937& rng) {
    const int d = std::uniform_int_distribution<int>(2, 3)(rng);
    Poly p(1, Backend::exact);
    for (int k = 0; k < d; ++k) p.add_term(Monomial::unit(0, k), rand_q(rng));
    p.add_term(Monomial::unit(0, d), rand_q(rng, true));
    return Elementary{rand_q(rng, true), rand_q(rng, true), rand_q(rng), p};
}

std::vector<PlanarFactor> random_word(std::mt19937& rng, int max_len) {
    const int len = std::uniform_int_distribution<int>(1, max_len)(rng);
    bool affine = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    std::vector<PlanarFactor> w;
    for (int i = 0; i < len; ++i, affine = !affine) w.push_back(affine ? random_affine(rng) : random_elementary(rng));
    return w;
}

PolyMap word_map(const std::vector<PlanarFactor>& w) {
    PolyMap r = PolyMap::identity(2, Backend::exact);
    for (const auto& f : w) r = compose(to_polymap(f), r);
    return r;
}

// (y, y^2 + c - delta x)
PolyMap henon(const Scalar& c, const Scalar& delta) {
    return PolyMap({y2(), y2() * y2() + K2(c) - x2() * delta});
}

long product(const Polydegree& pd) {
    long p = 1;
    for (int d : pd) p *= d;
    return p;
}

bool same_factor(const PlanarFactor& a, const PlanarFactor& b) {
    return a.index() == b.index() && to_polymap(a) == to_polymap(b);
}

}  // namespace

TEST(Jvdk, SwapOfElementary) {
    PolyMap g({y2(), x2() + y2() * y2()});
    Factorization f = jvdk_factor(g);
    ASSERT_EQ(f.factors.size(), 2u);
    EXPECT_EQ(to_polymap(f.factors[0]), PolyMap({x2() + y2() * y2(), y2()}));
    EXPECT_EQ(to_polymap(f.factors[1]), PolyMap({y2(), x2()}));
    EXPECT_EQ(f.recompose(), g);
    EXPECT_EQ(polydegree(f), Polydegree{2});
    EXPECT_TRUE(f.certified);
}

TEST(Jvdk, AffineIsOneFactor) {
    PolyMap g({x2() * Q(2) + y2() + K2(Q(1)), x2() - y2()});
    Factorization f = jvdk_factor(g);
    ASSERT_EQ(f.factors.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<PlanarAffine>(f.factors[0]));
    EXPECT_EQ(f.recompose(), g);
    EXPECT_TRUE(polydegree(f).empty());
    EXPECT_TRUE(polydegree(jvdk_factor(PolyMap::identity(2, Backend::exact))).empty());
}

TEST(Jvdk, MixedCoordinateComposite) {
    Poly u = x2() + y2() * y2();
    PolyMap g({u, y2() + u.pow(3)});
    Factorization f = jvdk_factor(g);
    EXPECT_EQ(f.recompose(), g);
    EXPECT_EQ(polydegree(f), (Polydegree{2, 3}));
    EXPECT_EQ(degree_of(g), 6);
}

TEST(Jvdk, HenonMaps) {
    PolyMap h1 = henon(Q(1, 3), Q(2)), h2 = henon(Q(-1), Q(1, 2));
    Factorization f1 = jvdk_factor(h1);
    EXPECT_EQ(polydegree(f1), Polydegree{2});
    EXPECT_EQ(f1.recompose(), h1);
    PolyMap g = compose(h2, h1);
    Factorization f = jvdk_factor(g);
    EXPECT_EQ(polydegree(f), (Polydegree{2, 2}));
    EXPECT_EQ(degree_of(g), 4);
    EXPECT_EQ(f.recompose(), g);
}

TEST(Jvdk, RejectsNonAutomorphisms) {
    try {
        jvdk_factor(PolyMap({x2() * x2(), y2()}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonConstantJacobian);
    }
    // (x, x y) collapses the line x = 0.
    EXPECT_THROW(jvdk_factor(PolyMap({x2(), x2() * y2()})), Error);
    EXPECT_THROW(jvdk_factor(PolyMap({x2(), K2(Q(1))})), Error);
    EXPECT_THROW(jvdk_factor(PolyMap::identity(3, Backend::exact)), Error);
}

TEST(Jvdk, StratumDimensions) {
    EXPECT_EQ(stratum_dim({2}), 8);
    EXPECT_EQ(stratum_dim({2, 2}), 10);
    EXPECT_EQ(stratum_dim({3}), 9);
    EXPECT_EQ(stratum_dim({}), 6);
}

TEST(Jvdk, RandomWordsRoundTripAndDegreeIsMultiplicative) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const PolyMap g = word_map(random_word(rng, 6));
        Factorization f = jvdk_factor(g);
        ASSERT_EQ(f.recompose(), g) << "trial " << trial;
        EXPECT_EQ(degree_of(g), product(polydegree(f))) << "trial " << trial;
    }
}

TEST(Jvdk, CanonicalFormIgnoresSMoves) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<PlanarFactor> w = random_word(rng, 5);
        Factorization ref = jvdk_factor(word_map(w));
        // Replace g_i by g_i o s and g_{i-1} by s^{-1} o g_{i-1}.
        for (std::size_t i = 1; i < w.size(); ++i) {
            PlanarAffine s{Matrix::from_rows({{rand_q(rng, true), rand_q(rng)}, {Q(0), rand_q(rng, true)}}),
                           {rand_q(rng), rand_q(rng)}};
            std::vector<PlanarFactor> moved(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i - 1));
            moved.push_back(w[i - 1]);
            moved.push_back(inverse(s));
            moved.push_back(s);
            moved.insert(moved.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
            auto c = canonicalize(moved, Backend::exact);
            ASSERT_EQ(c.size(), ref.factors.size());
            for (std::size_t k = 0; k < c.size(); ++k) EXPECT_TRUE(same_factor(c[k], ref.factors[k]));
        }
        // Canonical words alternate and their elementary factors are normalized.
        for (std::size_t k = 0; k < ref.factors.size(); ++k) {
            if (k > 0) EXPECT_NE(ref.factors[k].index(), ref.factors[k - 1].index());
            if (auto* e = std::get_if<Elementary>(&ref.factors[k])) {
                EXPECT_TRUE(e->a.is_one() && e->b.is_one() && e->c.is_zero());
                EXPECT_TRUE(e->p.truncated(1).is_zero());
            }
        }
    }
}

TEST(Jvdk, ApproximateBackendIsUncertified) {
    PolyMap g = henon(Q(1, 3), Q(2)).to_backend(Backend::approx);
    Factorization f = jvdk_factor(g);
    EXPECT_FALSE(f.certified);
    EXPECT_EQ(polydegree(f), Polydegree{2});
    EXPECT_TRUE(near_equal(f.recompose(), g, 1e-12));
}

TEST(InvertPlanar, RoundTrips) {
    Factorization id = jvdk_factor(PolyMap::identity(2, Backend::exact));
    EXPECT_TRUE(invert_planar(id).recompose().is_identity());

    PolyMap g({y2(), x2() + y2() * y2()});
    Factorization inv = invert_planar(jvdk_factor(g));
    EXPECT_TRUE(compose(g, inv.recompose()).is_identity());
    EXPECT_TRUE(compose(inv.recompose(), g).is_identity());

    std::mt19937 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<PlanarFactor> w;
        for (int k = 0; k < 4; ++k) w.push_back(k % 2 ? random_elementary(rng) : random_affine(rng));
        const PolyMap h = word_map(w);
        Factorization f = jvdk_factor(h);
        EXPECT_TRUE(compose(h, invert_planar(f).recompose()).is_identity());
    }
}

TEST(PlanarInterp, SingleNodeIsConstant) {
    PolyMap g = henon(Q(1, 3), Q(2));
    ParamAutCurve c = interp_planar_bounded({Q(2)}, {g});
    EXPECT_EQ(curve_polymap(c, Q(2)), g);
    EXPECT_EQ(curve_polymap(c, Q(-7, 3)), g);
}

TEST(PlanarInterp, TwoClassesCancelExactly) {
    // Both targets have Jacobian determinant 1, so the linear corrections
    // stay polynomial.
    PolyMap g1({-y2(), x2() + y2() * y2()});
    PolyMap g2({x2() + y2() * Q(3) + K2(Q(1)), y2() + K2(Q(-2))});
    std::vector<Scalar> nodes{Q(0), Q(1)};
    PlanarInterpolation r = planar_interpolation(nodes, {g1, g2});
    ASSERT_EQ(r.classes.size(), 2u);
    EXPECT_EQ(r.curve.backend(), Backend::exact);
    EXPECT_EQ(curve_polymap(r.curve, Q(0)), g1);
    EXPECT_EQ(curve_polymap(r.curve, Q(1)), g2);
    // Off the nodes the value is still an automorphism with constant Jacobian.
    PolyMap mid = curve_polymap(r.curve, Q(1, 2));
    EXPECT_EQ(jacobian_det(mid).degree(), 0);
    EXPECT_NO_THROW(jvdk_factor(mid));
}

TEST(PlanarInterp, ExactVaryingUnitsAreTranscendental) {
    try {
        interp_planar_bounded({Q(0), Q(1)}, {henon(Q(0), Q(1)), henon(Q(0), Q(2))});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Transcendental);
    }
}

TEST(PlanarInterp, FourNodesThreeClasses) {
    std::vector<PolyMap> targets{
        henon(Q(1, 2), Q(2)),
        compose(henon(Q(-1), Q(1, 2)), henon(Q(1, 3), Q(-1))),
        PolyMap({x2() * Q(2) - y2() + K2(Q(1)), x2() + y2() * Q(3)}),
        henon(Q(-1, 4), Q(3)),
    };
    std::vector<Scalar> nodes{Q(0), Q(1), Q(-1), Scalar::exact(1, 1)};
    PlanarInterpolation r = planar_interpolation(nodes, targets, Backend::approx);
    ASSERT_EQ(r.classes.size(), 3u);
    EXPECT_EQ(r.class_of, (std::vector<std::size_t>{0, 1, 2, 0}));

    std::mt19937 rng(4);
    std::vector<Point> samples;
    for (int k = 0; k < 20; ++k) samples.push_back(random_point(rng, 2));
    std::vector<AutTarget> ts(targets.begin(), targets.end());
    for (double e : node_errors(r.curve, NodeData{nodes, ts}, samples)) EXPECT_LE(e, 1e-8);

    std::vector<Complex> xs;
    for (int k = 0; k < 10; ++k) xs.push_back(random_point(rng, 1, 1.5)[0]);
    auto why = certify_curve(r.curve, xs, samples);
    EXPECT_FALSE(why.has_value()) << *why;

    for (std::size_t j = 0; j < r.classes.size(); ++j)
        for (Complex x : xs) {
            Factorization f = jvdk_factor(curve_polymap(*r.families[j], Scalar::approx(x)));
            EXPECT_EQ(polydegree(f), r.classes[j]);
        }
}
