#include <gtest/gtest.h>

#include "shearkit/shear.hpp"
#include "support.hpp"

using namespace shearkit;
using namespace testing_support;

namespace {

Matrix I2(Backend b = Backend::exact) { return Matrix::identity(2, b); }
Matrix swap2(Backend b = Backend::exact) {
    return Matrix::from_rows({{Scalar::zero(b), Scalar::one(b)}, {Scalar::one(b), Scalar::zero(b)}});
}
// w -> w^2 as a profile in one variable
Poly square1(Backend b = Backend::exact) { return Poly::variable(1, 0, b) * Poly::variable(1, 0, b); }

ShearWord random_word(std::mt19937& rng, int len, Backend b) {
    std::uniform_int_distribution<int> kind(0, 2), c(-3, 3);
    ShearWord w(2, b);
    for (int i = 0; i < len; ++i) {
        // well-conditioned conjugators: product of two unit triangular matrices
        Matrix L = Matrix::from_rows({{Q(1), Q(c(rng), 4)}, {Q(0), Q(1)}}) *
                   Matrix::from_rows({{Q(1), Q(0)}, {Q(c(rng), 4), Q(1)}});
        Poly f = P(1, {{{1}, c(rng), 4}, {{2}, c(rng), 6}, {{3}, c(rng), 14}});
        switch (kind(rng)) {
            case 0: w.push_back(ShearGen::additive(L.to_backend(b), f.to_backend(b), Q(c(rng), 4).to_backend(b))); break;
            case 1:
                if (b == Backend::approx) {
                    w.push_back(ShearGen::multiplicative(L.to_backend(b), f.to_backend(b), Q(c(rng), 4).to_backend(b)));
                    break;
                }
                [[fallthrough]];
            default: w.push_back(ShearGen::affine(L.to_backend(b), {Q(c(rng), 4).to_backend(b), Q(c(rng), 6).to_backend(b)}));
        }
    }
    return w;
}

}  // namespace

TEST(EvalWord, SingleAdditiveShear) {
    // (z1 + z2^2, z2): the normal-form shear conjugated by the coordinate swap
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::additive(swap2(), square1(), Q(1)));
    ScalarVec r = eval_word(w, ScalarVec{Q(1), Q(2)});
    EXPECT_EQ(r, (ScalarVec{Q(5), Q(2)}));
}

TEST(EvalWord, NormalFormActsOnLastCoordinate) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::additive(I2(), square1(), Q(1)));
    EXPECT_EQ(eval_word(w, ScalarVec{Q(2), Q(1)}), (ScalarVec{Q(2), Q(5)}));
}

TEST(EvalWord, EmptyWordIsIdentity) {
    ShearWord w(3, Backend::approx);
    Point z{{1, 2}, {3, 4}, {5, 6}};
    EXPECT_EQ(eval_word(w, z), z);
}

TEST(EvalWord, ApplicationOrder) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::affine(swap2(), zeros(2, Backend::exact)));
    w.push_back(ShearGen::additive(swap2(), square1(), Q(1)));
    EXPECT_EQ(eval_word(w, ScalarVec{Q(1), Q(2)}), (ScalarVec{Q(3), Q(1)}));
}

TEST(EvalWord, ExactMultiplicativeIsTranscendental) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::multiplicative(I2(), Poly::variable(1, 0, Backend::exact), Q(1)));
    try {
        eval_word(w, ScalarVec{Q(1), Q(1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Transcendental);
    }
    // at z1 = 0 the exponent vanishes and the value is exact
    EXPECT_EQ(eval_word(w, ScalarVec{Q(0), Q(3)}), (ScalarVec{Q(0), Q(3)}));
}

TEST(EvalWord, MultiplicativeMatchesClosedForm) {
    ShearWord w(2, Backend::approx);
    w.push_back(ShearGen::multiplicative(I2(Backend::approx), Poly::variable(1, 0, Backend::approx), C(0.5)));
    Point z{{0.3, 0.2}, {1.0, -0.5}};
    Point r = eval_word(w, z);
    EXPECT_NEAR(std::abs(r[1] - std::exp(0.5 * z[0]) * z[1]), 0.0, 1e-15);
}

TEST(InvertWord, NegatesTimesAndReverses) {
    ShearGen a = ShearGen::additive(I2(), square1(), Q(2));
    ShearGen b = ShearGen::affine(swap2(), {Q(1), Q(0)});
    EXPECT_EQ(a.inverse().time(), Q(-2));
    ShearWord w(2, Backend::exact, GroupTag::aut, {a, b});
    ShearWord inv = invert_word(w);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv.generators()[0].kind(), ShearKind::affine);
    EXPECT_EQ(inv.generators()[1].time(), Q(-2));
    ScalarVec z{Q(3, 2), Q(-7)};
    EXPECT_EQ(eval_word(inv, eval_word(w, z)), z);
}

TEST(InvertWord, RandomRoundTrip) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        ShearWord w = random_word(rng, 4, Backend::approx);
        ShearWord inv = invert_word(w);
        for (int k = 0; k < 10; ++k) {
            Point z = random_point(rng, 2, 0.5);
            EXPECT_LE(dist(eval_word(inv, eval_word(w, z)), z), 1e-12);
        }
    }
}

TEST(WordJet, SingleAdditiveEqualsPolymap) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::additive(swap2(), square1(), Q(1)));
    EXPECT_EQ(word_jet(w, 4).map, PolyMap({Z(2, 0) + Z(2, 1) * Z(2, 1), Z(2, 1)}));
}

TEST(WordJet, MultiplicativeExponentialSeries) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::multiplicative(I2(), Poly::variable(1, 0, Backend::exact), Q(1)));
    EXPECT_EQ(word_jet(w, 2).map, PolyMap({Z(2, 0), Z(2, 1) + Z(2, 0) * Z(2, 1)}));
    // order 4: z2 (1 + z1 + z1^2/2 + z1^3/6)
    Poly z1 = Z(2, 0), z2 = Z(2, 1);
    EXPECT_EQ(word_jet(w, 4).map[1], z2 + z1 * z2 + z1 * z1 * z2 * Q(1, 2) + z1 * z1 * z1 * z2 * Q(1, 6));
}

TEST(WordJet, TwoAdditiveShearsMatchSymbolicComposition) {
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::additive(swap2(), square1(), Q(1)));  // (z1 + z2^2, z2)
    w.push_back(ShearGen::additive(I2(), square1(), Q(1)));     // (z1, z2 + z1^2)
    PolyMap first({Z(2, 0) + Z(2, 1) * Z(2, 1), Z(2, 1)});
    PolyMap second({Z(2, 0), Z(2, 1) + Z(2, 0) * Z(2, 0)});
    EXPECT_EQ(word_jet(w, 6).map, compose(second, first).truncated(6));
    EXPECT_EQ(word_polymap(w), compose(second, first));
}

TEST(WordJet, AffineCenterHandledExactly) {
    // a translation before a shear moves the expansion point; the jet must still be exact
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::affine(I2(), {Q(0), Q(1)}));
    w.push_back(ShearGen::additive(swap2(), P(1, {{{3}, 1}}), Q(1)));
    EXPECT_EQ(word_jet(w, 3).map, word_polymap(w).truncated(3));
}

TEST(SchwarzNormalize, Examples) {
    Poly z1 = Z(2, 0), z2 = Z(2, 1), one = Poly::constant(2, Q(1));
    // not an automorphism (Jacobian 1 + 2(z1 + z2)); the splitting itself is still defined
    PolyMap F({z1 + one + (z1 + z2) * (z1 + z2), z2});
    EXPECT_THROW(schwarz_normalize(F), Error);
    auto d = schwarz_split(F);
    EXPECT_EQ(d.center, (ScalarVec{Q(1), Q(0)}));
    EXPECT_TRUE(d.linear.is_identity());
    EXPECT_EQ(std::get<PolyMap>(d.tail), PolyMap({z1 + (z1 + z2) * (z1 + z2), z2}));

    auto id = schwarz_normalize(PolyMap::identity(2, Backend::exact));
    EXPECT_EQ(id.center, zeros(2, Backend::exact));
    EXPECT_TRUE(std::get<PolyMap>(id.tail).is_identity());

    auto g = schwarz_normalize(PolyMap({z1 * Q(2), z2 + one * Q(3)}));
    EXPECT_EQ(g.center, (ScalarVec{Q(0), Q(3)}));
    EXPECT_EQ(g.linear, Matrix::from_rows({{Q(2), Q(0)}, {Q(0), Q(1)}}));
    EXPECT_TRUE(std::get<PolyMap>(g.tail).is_identity());
}

TEST(SchwarzNormalize, RejectsBadJacobianAndTag) {
    try {
        schwarz_normalize(PolyMap({Z(2, 0) * Z(2, 0), Z(2, 1)}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonConstantJacobian);
        EXPECT_FALSE(e.certificate().empty());
    }
    EXPECT_THROW(schwarz_normalize(PolyMap({Z(2, 0) * Q(2), Z(2, 1)}), GroupTag::aut1), Error);
}

TEST(SchwarzNormalizeProperty, ReassemblyOnRandomWords) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        ShearWord w = random_word(rng, 4, Backend::exact);
        auto d = schwarz_normalize(w);
        const auto& H = std::get<ShearWord>(d.tail);
        Jet hj = word_jet(H, 2);
        EXPECT_TRUE(hj.map.homogeneous_part(1).is_identity());
        for (const auto& c : hj.map.components()) EXPECT_TRUE(c.constant_term().is_zero());
        for (int k = 0; k < 50; ++k) {
            Point z = random_point(rng, 2);
            Point h = eval_word(H, z);
            Point re = d.linear.apply(h);
            for (std::size_t i = 0; i < 2; ++i) re[i] += d.center[i].to_complex();
            EXPECT_LE(dist(re, eval_word(w, z)), 1e-10);
        }
    }
}

TEST(ScalingCurve, Examples) {
    Poly z1 = Z(2, 0), z2 = Z(2, 1);
    PolyMap phi({z1 + z2 * z2, z2});
    // t as a parameter variable: ring (z1, z2, t)
    Poly t = Z(3, 2);
    PolyMap curve = scaling_curve(phi, t);
    EXPECT_EQ(curve, PolyMap({Z(3, 0) + t * Z(3, 1) * Z(3, 1), Z(3, 1)}));
    EXPECT_EQ(scaling_curve(phi, Q(1)), phi);
    EXPECT_EQ(scaling_curve(phi, Q(0)), PolyMap({z1, z2}));
}

TEST(ScalingCurve, ConstantTermScalesLinearly) {
    Poly z1 = Z(2, 0), z2 = Z(2, 1);
    PolyMap phi({z1 + Poly::constant(2, Q(4)) + z2 * z2 * z2, z2 * Q(3)});
    EXPECT_EQ(scaling_curve(phi, Q(1, 2)),
              PolyMap({z1 + Poly::constant(2, Q(2)) + z2 * z2 * z2 * Q(1, 4), z2 * Q(3)}));
}

TEST(ScalingCurve, WordEvaluationAgreesWithPolymap) {
    std::mt19937 rng(8);
    ShearWord w(2, Backend::exact);
    w.push_back(ShearGen::affine(I2(), {Q(1), Q(-1)}));
    w.push_back(ShearGen::additive(swap2(), P(1, {{{2}, 1}, {{3}, 1, 2}}), Q(1)));
    w.push_back(ShearGen::additive(I2(), square1(), Q(-1, 3)));
    PolyMap phi = word_polymap(w);
    for (Complex s : {Complex(1.0), Complex(0.3, 0.2), Complex(0.0), Complex(1e-8), Complex(-2.0)}) {
        PolyMap ps = scaling_curve(phi.to_backend(Backend::approx), Scalar::approx(s));
        for (int k = 0; k < 5; ++k) {
            Point z = random_point(rng, 2);
            const double tol = std::abs(s) > 1e-6 || s == 0.0 ? 1e-9 : 1e-7;
            EXPECT_LE(dist(eval_scaled_word(w, s, z), ps.evaluate(z)), tol) << s;
            std::vector<Complex> J{1, 0, 0, 1};
            eval_scaled_word(w, s, z, J);
            auto Jp = jacobian_at(ps, z);
            for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(J[i] - Jp[i]), 0.0, tol);
        }
    }
}

TEST(DilationConjugate, MatchesScaledPolymapOracle) {
    std::mt19937 rng(18);
    for (int trial = 0; trial < 5; ++trial) {
        ShearWord w = random_word(rng, 4, Backend::exact);
        PolyMap phi = word_polymap(w);
        for (Scalar s : {Q(1), Q(2), Q(-1, 3), Scalar::exact(mpq_class(1, 2), mpq_class(1))}) {
            // oracle: phi(s z) / s by direct substitution
            std::vector<Poly> sz{Z(2, 0) * s, Z(2, 1) * s};
            std::vector<Poly> want;
            for (const auto& c : phi.components()) want.push_back(c.compose(sz) * (Q(1) / s));
            EXPECT_EQ(word_polymap(dilation_conjugate(w, s)), PolyMap(want)) << s.to_string();
        }
    }
    EXPECT_THROW(dilation_conjugate(ShearWord(2, Backend::exact), Q(0)), Error);
}

TEST(DilationConjugate, MultiplicativeNumeric) {
    std::mt19937 rng(19);
    ShearWord w = random_word(rng, 5, Backend::approx);
    const Complex s(0.4, -0.3);
    ShearWord ws = dilation_conjugate(w, Scalar::approx(s));
    for (int k = 0; k < 5; ++k) {
        Point z = random_point(rng, 2);
        Point sz{s * z[0], s * z[1]};
        Point v = eval_word(w, sz);
        Point want{v[0] / s, v[1] / s};
        EXPECT_LE(dist(eval_word(ws, z), want), 1e-10);
    }
}

TEST(ShearProperty, WordEvaluationIsAGroupAction) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        ShearWord a = random_word(rng, 3, Backend::approx), b = random_word(rng, 3, Backend::approx);
        for (int k = 0; k < 10; ++k) {
            Point z = random_point(rng, 2);
            EXPECT_LE(dist(eval_word(concat(a, b), z), eval_word(b, eval_word(a, z))), 1e-12);
        }
    }
}

TEST(ShearProperty, AdditiveShearsHaveUnitJacobian) {
    std::mt19937 rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        ShearWord w = random_word(rng, 1, Backend::exact);
        const auto& g = w.generators()[0];
        if (g.kind() != ShearKind::additive) continue;
        EXPECT_EQ(jacobian_det(g.as_polymap()), Poly::constant(2, Q(1)));
    }
}

TEST(GroupTags, CertifierRejectsViolations) {
    Matrix D = Matrix::from_rows({{Q(2), Q(0)}, {Q(0), Q(1)}});
    ShearWord w(2, Backend::exact, GroupTag::aut1);
    EXPECT_THROW(w.push_back(ShearGen::affine(D, zeros(2, Backend::exact))), Error);
    EXPECT_THROW(w.push_back(ShearGen::additive(swap2(), square1(), Q(1))), Error);  // det L = -1
    EXPECT_THROW(w.push_back(ShearGen::multiplicative(I2(), Poly::variable(1, 0, Backend::exact), Q(1))), Error);
    EXPECT_NO_THROW(w.push_back(ShearGen::additive(I2(), square1(), Q(1))));

    ShearWord alg(2, Backend::approx, GroupTag::aut_alg);
    EXPECT_THROW(alg.push_back(ShearGen::multiplicative(I2(Backend::approx), Poly::variable(1, 0, Backend::approx), C(1))),
                 Error);
    EXPECT_NO_THROW(alg.push_back(ShearGen::multiplicative(I2(Backend::approx), Poly::constant(1, C(2)), C(1))));
}

TEST(GroupTags, SymplecticShears) {
    // (z1, z2 + z1^2) preserves dz1 ^ dz2; so does every det-1 linear map in dimension 2
    ShearWord w(2, Backend::exact, GroupTag::aut_sp);
    EXPECT_NO_THROW(w.push_back(ShearGen::additive(I2(), square1(), Q(1))));
    // in C^4 a shear of z2 by z3^2 breaks the form
    Matrix P4(4, 4, Backend::exact);
    for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {1, 3}, {2, 2}, {3, 1}}) P4.set(i, j, Q(1));
    // normal coordinate w4 = z2, profile w3^2 with w3 = z3
    ShearWord w4(4, Backend::exact, GroupTag::aut_sp);
    EXPECT_THROW(w4.push_back(ShearGen::additive(P4, P(3, {{{0, 0, 2}, 1}}), Q(1))), Error);
    // profile w1^2 (= z1^2) moving z2 is the Hamiltonian flow of -z1^3/3 and is allowed
    EXPECT_NO_THROW(w4.push_back(ShearGen::additive(P4, P(3, {{{2, 0, 0}, 1}}), Q(1))));
}

TEST(GroupTags, Aut1WordsHaveUnitJacobianAtSamples) {
    std::mt19937 rng(12);
    ShearWord w(2, Backend::approx, GroupTag::aut1);
    Matrix L = Matrix::from_rows({{Q(1), Q(2)}, {Q(1, 2), Q(2)}}).to_backend(Backend::approx);
    w.push_back(ShearGen::additive(L, P(1, {{{3}, 1}}, Backend::approx), C(0.1)));
    w.push_back(ShearGen::affine(Matrix::from_rows({{C(2), C(0)}, {C(0), C(0.5)}}), {C(1), C(0)}));
    w.push_back(ShearGen::additive(I2(Backend::approx), square1(Backend::approx), C(-1)));
    for (int k = 0; k < 20; ++k) {
        std::vector<Complex> J{1, 0, 0, 1};
        eval_word(w, random_point(rng, 2), J);
        EXPECT_NEAR(std::abs(J[0] * J[3] - J[1] * J[2] - 1.0), 0.0, 1e-10);
    }
}
