// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "shearkit/al_engine.hpp"
#include "shearkit/interpolate.hpp"
#include "shearkit/planar.hpp"
#include "support.hpp"

using namespace shearkit;
using namespace testing_support;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---- planar words ----

Scalar rand_q(std::mt19937& rng, int height, bool nonzero = false) {
    std::uniform_int_distribution<int> num(-height, height), den(1, height);
    for (;;) {
        const int p = num(rng);
        if (!nonzero || p != 0) return Q(p, den(rng));
    }
}

PlanarFactor random_affine(std::mt19937& rng) {
    for (;;) {
        Matrix A = Matrix::from_rows({{rand_q(rng, 8), rand_q(rng, 8)}, {rand_q(rng, 8), rand_q(rng, 8)}});
        if (!A.determinant().is_zero()) return PlanarAffine{A, {rand_q(rng, 8), rand_q(rng, 8)}};
    }
}

PlanarFactor random_elementary(std::mt19937& rng) {
    const int d = std::uniform_int_distribution<int>(2, 3)(rng);
    Poly p(1, Backend::exact);
    for (int k = 0; k < d; ++k) p.add_term(Monomial::unit(0, k), rand_q(rng, 8));
    p.add_term(Monomial::unit(0, d), rand_q(rng, 8, true));
    return Elementary{rand_q(rng, 8, true), rand_q(rng, 8, true), rand_q(rng, 8), p};
}

PolyMap random_planar_map(std::mt19937& rng, int max_len) {
    const int len = std::uniform_int_distribution<int>(1, max_len)(rng);
    bool affine = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
    PolyMap r = PolyMap::identity(2, Backend::exact);
    for (int i = 0; i < len; ++i, affine = !affine)
        r = compose(to_polymap(affine ? random_affine(rng) : random_elementary(rng)), r);
    return r;
}

PolyMap henon(const Scalar& c, const Scalar& delta) {
    const Poly x = Z(2, 0), y = Z(2, 1);
    return PolyMap({y, y * y + Poly::constant(2, c) - x * delta});
}

// ---- criteria ----

Verdict jvdk_round_trip() {
    std::mt19937 rng(101);
    const auto t0 = Clock::now();
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const PolyMap g = random_planar_map(rng, 6);
        const Factorization f = jvdk_factor(g);
        long prod = 1;
        for (int d : polydegree(f)) prod *= d;
        if (f.recompose() != g || !f.certified || prod != degree_of(g)) ++bad;
    }
    const double secs = since(t0);
    return {bad == 0 && secs < 60, fmt("200 words, %d mismatches, %.2f s (limit 60 s)", bad, secs)};
}

Verdict stratum_dimensions() {
    const int a = stratum_dim({2}), b = stratum_dim({2, 2}), c = stratum_dim({3});
    // Henon maps realize (2) and (2,2).
    const Polydegree h1 = polydegree(jvdk_factor(henon(Q(1), Q(2))));
    const Polydegree h2 = polydegree(jvdk_factor(compose(henon(Q(1), Q(2)), henon(Q(-1), Q(3)))));
    const bool ok = a == 8 && b == 10 && c == 9 && h1 == Polydegree{2} && h2 == Polydegree{2, 2};
    return {ok, fmt("(2)->%d (2,2)->%d (3)->%d", a, b, c)};
}

Verdict monomial_decompositions() {
    int fields = 0, bad = 0;
    for (std::size_t n : {2u, 3u}) {
        std::vector<std::vector<int>> exps{{}};
        for (std::size_t v = 0; v < n; ++v) {
            std::vector<std::vector<int>> next;
            for (const auto& e : exps)
                for (int k = 0; k <= 4; ++k) {
                    auto f = e;
                    f.push_back(k);
                    next.push_back(f);
                }
            exps = next;
        }
        for (const auto& e : exps) {
            int total = 0;
            for (int k : e) total += k;
            if (total > 4) continue;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Poly> c(n, Poly(n, Backend::exact));
                c[i] = P(n, {{e, 1}});
                const VectorField W(c);
                const Decomposition d = decompose_field(W, FieldTag::general);
                ++fields;
                bool ok = d.residual.is_zero() && recompose(d.summands, n, Backend::exact) == W;
                for (const auto& s : d.summands) {
                    const Poly div = divergence(s.field());
                    if (s.kind == ShearFieldKind::additive) ok = ok && div.is_zero();
                    else ok = ok && div == linear_form(s.lambda).pow(static_cast<unsigned>(s.d)) * s.c;
                }
                if (!ok) ++bad;
            }
        }
    }
    return {bad == 0, fmt("%d monomial fields, %d failures", fields, bad)};
}

VectorField hamiltonian_field(const Poly& h) { return VectorField({h.derivative(1), -h.derivative(0)}); }

Verdict divfree_closure() {
    std::mt19937 rng(104);
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
        // Every divergence-free planar field of degree <= 5 has this form.
        const VectorField W = hamiltonian_field(random_poly(rng, 2, 6, 8, 5, 1));
        const Decomposition d = decompose_divfree(W);
        bool ok = d.residual.is_zero() && recompose(d.summands, 2, Backend::exact) == W;
        for (const auto& s : d.summands) ok = ok && s.kind == ShearFieldKind::additive;
        if (!ok) ++bad;
    }
    return {bad == 0, fmt("50 fields, %d failures", bad)};
}

Verdict hamiltonian_closure() {
    std::mt19937 rng(105);
    int bad = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const VectorField W = hamiltonian_field(random_poly(rng, 2, 5, 8, 5, 1));
        const Decomposition d = decompose_hamiltonian(W);
        bool ok = d.residual.is_zero() && recompose(d.summands, 2, Backend::exact) == W;
        for (const auto& s : d.summands) {
            // iota_s omega = d(c (lambda.z)^e) needs a single-term profile w^(e-1).
            if (s.kind != ShearFieldKind::additive || s.profile.terms().size() != 1) {
                ok = false;
                continue;
            }
            const int e = s.profile.degree() + 1;
            const Scalar lead = s.profile.terms().begin()->second;
            const Poly potential = linear_form(s.lambda).pow(static_cast<unsigned>(e)) * (s.c * lead / Q(e));
            const auto alpha = contract_symplectic(s.field());
            ok = ok && alpha[0] == potential.derivative(0) && alpha[1] == potential.derivative(1);
        }
        if (!ok) ++bad;
    }
    return {bad == 0, fmt("30 Hamiltonians, %d failures", bad)};
}

PipelineConfig config(int N, int k) {
    PipelineConfig c;
    c.steps = N;
    c.order = k;
    return c;
}

Verdict single_shear() {
    const Poly z1 = Z(2, 0), z2 = Z(2, 1);
    double worst = 0;
    // Quadratic profiles: the isotopy field of the shear is then autonomous.
    const Poly w = z1 * Q(2) - z2;
    for (const PolyMap& F : {PolyMap({z1 + z2 * z2, z2}), PolyMap({z1 + w * w * Q(3, 4), z2 + w * w * Q(3, 2)})})
        for (int k : {2, 4, 8}) worst = std::max(worst, approximate(F, GroupTag::aut, config(1, k)).report.sup_error);
    return {worst <= 1e-9, fmt("N=1 sup error %.3g (limit 1e-9)", worst)};
}

Verdict splitting_convergence() {
    const Poly z1 = Z(2, 0), z2 = Z(2, 1);
    const PolyMap F = compose(PolyMap({z1, z2 + z1 * z1}), PolyMap({z1 + z2 * z2, z2}));
    const auto t0 = Clock::now();
    const auto rows = convergence_study(F, GroupTag::aut, {8, 16, 32}, config(1, 8));
    const double secs = since(t0);
    const double r1 = rows[0].sup_error / rows[1].sup_error, r2 = rows[1].sup_error / rows[2].sup_error;
    const bool ok = r1 >= 1.6 && r1 <= 2.4 && r2 >= 1.6 && r2 <= 2.4 && secs < 120;
    return {ok, fmt("unit polydisc errors %.3g %.3g %.3g, ratios %.3f %.3f (band [1.6, 2.4]), %.2f s",
                    rows[0].sup_error, rows[1].sup_error, rows[2].sup_error, r1, r2, secs)};
}

Verdict identity_nodes() {
    const Poly z1 = Z(3, 0), z2 = Z(3, 1), x = Z(3, 2);
    const PolyMap F({z1 + x * (x - Poly::constant(3, Q(1))) * z2 * z2, z2});
    const InterpolatingApproximation r = approximate_interpolating(F, {Q(0), Q(1)}, 1.0, GroupTag::aut, config(2, 8));
    std::mt19937 rng(108);
    double worst = 0;
    for (Complex node : {Complex(0.0), Complex(1.0)}) {
        CurveEvaluator ev(r.curve, node);
        for (int k = 0; k < 20; ++k) {
            const Point z = random_point(rng, 2);
            worst = std::max(worst, dist(ev(z), z));
        }
    }
    return {worst <= 1e-12, fmt("max |Phi(node)(z) - z| = %.3g (limit 1e-12)", worst)};
}

PolyMap triangular3(std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-3, 3);
    const Poly z1 = Z(3, 0), z2 = Z(3, 1), z3 = Z(3, 2);
    return PolyMap({z1 + z2 * z2 * Q(c(rng), 2) + z2 * z3 * Q(c(rng), 3) + z3 * z3 * z3 * Q(c(rng), 4),
                    z2 + z3 * z3 * Q(c(rng), 5), z3});
}

Verdict schwarz_chain() {
    std::mt19937 rng(109);
    int bad = 0;
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<Scalar> nodes{Q(0), Q(1), Q(-1, 2)};
        std::vector<AutTarget> targets{triangular3(rng), triangular3(rng), triangular3(rng)};
        const ParamAutCurve c3 = interp_schwarz_chain(nodes, targets);
        for (std::size_t k = 0; k < 3; ++k)
            if (curve_polymap(c3, nodes[k]) != std::get<PolyMap>(targets[k])) ++bad;
        nodes.push_back(Q(2));
        targets.push_back(triangular3(rng));
        const ParamAutCurve c4 = interp_schwarz_chain(nodes, targets);
        for (std::size_t k = 0; k < 3; ++k)
            if (curve_polymap(c4, nodes[k]) != curve_polymap(c3, nodes[k])) ++bad;
        if (curve_polymap(c4, nodes[3]) != std::get<PolyMap>(targets[3])) ++bad;
    }
    return {bad == 0, fmt("3 problems, %d exact mismatches", bad)};
}

Matrix conj(std::mt19937& rng) {
    std::uniform_int_distribution<int> c(-3, 3);
    const Matrix u = Matrix::from_rows({{Q(1), Q(c(rng), 4)}, {Q(0), Q(1)}});
    const Matrix l = Matrix::from_rows({{Q(1), Q(0)}, {Q(c(rng), 4), Q(1)}});
    return (u * l).to_backend(Backend::approx);
}

ShearWord random_shear_word(std::mt19937& rng, GroupTag tag) {
    const Backend b = Backend::approx;
    std::uniform_int_distribution<int> kind(0, 2), c(-3, 3);
    ShearWord w(2, b, tag);
    for (int i = 0; i < 3; ++i) {
        const Poly f = P(1, {{{1}, c(rng), 8}, {{2}, c(rng), 12}, {{3}, c(rng), 24}}).to_backend(b);
        const int k = kind(rng);
        if (k == 0 || (k == 1 && is_volume_tag(tag))) {
            w.push_back(ShearGen::additive(conj(rng), f, Q(c(rng), 4).to_backend(b)));
        } else if (k == 1) {
            w.push_back(ShearGen::multiplicative(conj(rng), f.truncated(1), Q(c(rng), 4).to_backend(b)));
        } else {
            Matrix A = conj(rng);
            if (!is_volume_tag(tag)) A = A * Matrix::from_rows({{Q(3, 2), Q(0)}, {Q(0), Q(1)}}).to_backend(b);
            w.push_back(ShearGen::affine(A, {Q(c(rng), 4).to_backend(b), Q(c(rng), 5).to_backend(b)}));
        }
    }
    return w;
}

std::vector<Point> polydisc_points(std::mt19937& rng, int count) {
    std::uniform_real_distribution<double> r(0, 1), a(0, 2 * std::numbers::pi);
    std::vector<Point> pts;
    for (int k = 0; k < count; ++k) pts.push_back({std::polar(r(rng), a(rng)), std::polar(r(rng), a(rng))});
    return pts;
}

std::vector<Complex> disc_points(std::mt19937& rng, int count, double radius) {
    std::uniform_real_distribution<double> r(0, radius), a(0, 2 * std::numbers::pi);
    std::vector<Complex> xs;
    for (int k = 0; k < count; ++k) xs.push_back(std::polar(r(rng), a(rng)));
    return xs;
}

Verdict full_interpolation() {
    std::mt19937 rng(110);
    double worst = 0;
    std::string failure;
    for (GroupTag tag : {GroupTag::aut, GroupTag::aut1}) {
        NodeData data{{C(-2), C(0), C(2, 0.5)}, {}};
        for (int k = 0; k < 3; ++k) data.targets.emplace_back(random_shear_word(rng, tag));
        const ParamAutCurve c = interpolate_full(data, tag);
        for (double e : node_errors(c, data, polydisc_points(rng, 20))) worst = std::max(worst, e);
        if (auto why = certify_curve(c, disc_points(rng, 20, 3.0), polydisc_points(rng, 5)); why && failure.empty())
            failure = std::string(to_string(tag)) + ": " + *why;
    }
    return {worst <= 1e-8 && failure.empty(),
            fmt("node error %.3g (limit 1e-8), certifier %s", worst, failure.empty() ? "passed at 40 x" : failure.c_str())};
}

Verdict planar_interpolation_run() {
    const Poly x = Z(2, 0), y = Z(2, 1);
    const std::vector<PolyMap> targets{
        henon(Q(1, 2), Q(2)),
        compose(henon(Q(-1), Q(1, 2)), henon(Q(1, 3), Q(-1))),
        PolyMap({x * Q(2) - y + Poly::constant(2, Q(1)), x + y * Q(3)}),
        henon(Q(-1, 4), Q(3)),
    };
    const std::vector<Scalar> nodes{Q(0), Q(1), Q(-1), Scalar::exact(1, 1)};
    const PlanarInterpolation r = planar_interpolation(nodes, targets, Backend::approx);
    std::mt19937 rng(111);
    const auto samples = polydisc_points(rng, 20);
    double worst = 0;
    std::vector<AutTarget> ts(targets.begin(), targets.end());
    for (double e : node_errors(r.curve, NodeData{nodes, ts}, samples)) worst = std::max(worst, e);
    const auto xs = disc_points(rng, 10, 1.5);
    const auto why = certify_curve(r.curve, xs, samples);
    int off_stratum = 0;
    for (std::size_t j = 0; j < r.classes.size(); ++j)
        for (Complex xv : xs)
            if (polydegree(jvdk_factor(curve_polymap(*r.families[j], Scalar::approx(xv)))) != r.classes[j]) ++off_stratum;
    const bool ok = r.classes.size() == 3 && worst <= 1e-8 && !why && off_stratum == 0;
    return {ok, fmt("%zu classes, node error %.3g (limit 1e-8), certifier %s, %d family values off their stratum",
                    r.classes.size(), worst, why ? why->c_str() : "passed", off_stratum)};
}

PolyMap linear_part_oracle(const PolyMap& phi) {
    const std::size_t n = phi.dim();
    std::vector<Poly> comps;
    for (const auto& c : phi.components()) {
        Poly l(n, Backend::exact);
        for (std::size_t j = 0; j < n; ++j) l += Z(n, j) * c.derivative(j).constant_term();
        comps.push_back(l);
    }
    return PolyMap(comps);
}

Verdict scaling_endpoints() {
    std::mt19937 rng(112);
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const PolyMap phi = random_planar_map(rng, 4);
        if (scaling_curve(phi, Q(1)) != phi || scaling_curve(phi, Q(0)) != linear_part_oracle(phi)) ++bad;
    }
    return {bad == 0, fmt("20 maps, %d endpoint mismatches", bad)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"planar factorization round trip", jvdk_round_trip},
        {"stratum dimensions", stratum_dimensions},
        {"monomial field decompositions", monomial_decompositions},
        {"divergence-free closure", divfree_closure},
        {"Hamiltonian closure", hamiltonian_closure},
        {"single shear at one step", single_shear},
        {"splitting convergence rate", splitting_convergence},
        {"identity at nodes", identity_nodes},
        {"Schwarz chain", schwarz_chain},
        {"full interpolation", full_interpolation},
        {"planar interpolation", planar_interpolation_run},
        {"scaling curve endpoints", scaling_endpoints},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
