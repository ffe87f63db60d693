#include "shearkit/al_engine.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace shearkit {

void PipelineConfig::validate() const {
    if (steps < 1) throw Error(ErrorKind::InvalidInput, "steps must be >= 1");
    if (order < 2) throw Error(ErrorKind::InvalidInput, "truncation order must be >= 2");
    if (angles < 1 || radius_fractions.empty()) throw Error(ErrorKind::InvalidInput, "sample grid is empty");
    for (double r : radii)
        if (!(r > 0)) throw Error(ErrorKind::InvalidInput, "polydisc radii must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> radii_for(std::size_t n, const PipelineConfig& cfg) {
    if (cfg.radii.empty()) return std::vector<double>(n, 1.0);
    if (cfg.radii.size() == 1) return std::vector<double>(n, cfg.radii[0]);
    if (cfg.radii.size() != n) throw Error(ErrorKind::ArityMismatch, "polydisc radii do not match the dimension");
    return cfg.radii;
}

std::vector<Complex> circle_values(double r, const PipelineConfig& cfg) {
    std::vector<Complex> v;
    for (double rho : cfg.radius_fractions)
        for (int k = 0; k < cfg.angles; ++k)
            v.push_back(std::polar(r * rho, 2 * std::numbers::pi * k / cfg.angles));
    return v;
}

double distance(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

double max_coefficient(const VectorField& v) {
    double m = 0;
    for (const auto& c : v.coefficients()) m = std::max(m, max_abs_coefficient(c));
    return m;
}

void require_schwarz(const PolyMap& H) {
    const std::size_t n = H.dim();
    for (std::size_t i = 0; i < n; ++i) {
        const Poly c0 = H[i].homogeneous_part_prefix(0, n);
        const Poly c1 = H[i].homogeneous_part_prefix(1, n) - Poly::variable(H.num_vars(), i, H.backend());
        if (!near_equal(c0, Poly(H.num_vars(), H.backend())) || !near_equal(c1, Poly(H.num_vars(), H.backend())))
            throw Error(ErrorKind::Precondition, "isotopy field needs H(0) = 0 and identity linear part", H.to_string());
    }
}

// V(t) through degree K, without the Schwarz check.
VectorField isotopy_raw(const PolyMap& H, const Scalar& t, int K) {
    const std::size_t n = H.dim();
    const std::size_t nv = H.num_vars();
    std::vector<Poly> Ht, Dt;
    for (const auto& comp : H.components()) {
        Poly h(nv, comp.backend()), d(nv, comp.backend());
        for (const auto& [m, c] : comp.terms()) {
            const int deg = m.degree_prefix(n);
            if (deg == 0 || deg > K) continue;
            h.add_term(m, c * t.pow(static_cast<unsigned>(deg - 1)));
            if (deg >= 2) d.add_term(m, c * Scalar::from_int(deg - 1, t.backend()) * t.pow(static_cast<unsigned>(deg - 2)));
        }
        Ht.push_back(std::move(h));
        Dt.push_back(std::move(d));
    }
    Jet inv = jet_invert(Jet{PolyMap(std::move(Ht)), K, false});
    return VectorField(compose_truncated(PolyMap(std::move(Dt)), inv.map, K).components());
}

double polydisc_bound(const Poly& p, std::size_t n, int lo, int hi, const std::vector<double>& radii) {
    double s = 0;
    for (const auto& [m, c] : p.terms()) {
        const int d = m.degree_prefix(n);
        if (d < lo || d > hi) continue;
        double w = c.abs();
        for (std::size_t i = 0; i < p.num_vars(); ++i)
            if (m[i]) w *= std::pow(i < radii.size() ? radii[i] : 1.0, m[i]);
        s += w;
    }
    return s;
}

std::vector<Point> tensor_grid(const std::vector<std::vector<Complex>>& axes) {
    std::vector<Point> pts{Point{}};
    for (const auto& ax : axes) {
        std::vector<Point> next;
        next.reserve(pts.size() * ax.size());
        for (const auto& p : pts)
            for (const auto& v : ax) {
                Point q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

// Steps shared by the map and word front ends: H is the Schwarz tail (exact
// through degree 2k at least), (a, A) the affine part.
Approximation run_pipeline(const PolyMap& H, const Matrix& A, const ScalarVec& a, GroupTag tag,
                           const PipelineConfig& cfg, const std::function<Point(const Point&)>& target,
                           Clock::time_point t0) {
    const std::size_t n = H.dim();
    const Backend b = cfg.backend;
    const int k = cfg.order, N = cfg.steps;
    const std::vector<double> radii = radii_for(n, cfg);
    // Exact targets get exact isotopy fields; floating-point jet inversion
    // leaves noise in the high-degree coefficients.
    const PolyMap Hk = H.truncated(k);
    const PolyMap Ha = H.to_backend(Backend::approx).truncated(2 * k);
    const FieldTag ftag = field_tag_for(tag);
    const Scalar dt = Scalar::ratio(1, N, b);

    ShearWord word(n, b, tag);
    ErrorReport rep;
    for (int j = 0; j < N; ++j) {
        const Scalar t = Scalar::ratio(j, N, b);
        VectorField V = isotopy_field(Hk, Scalar::ratio(j, N, Hk.backend()), k).to_backend(b);
        Decomposition dec = decompose_field(V, ftag);
        const double dres = max_coefficient(dec.residual);
        if ((b == Backend::exact && !dec.residual.is_zero()) || dres > 1e-8)
            throw Error(ErrorKind::Internal, "decomposition residual is nonzero", dec.residual.to_string());
        const double tres = truncation_residual(Ha, t.to_backend(Backend::approx), k, radii);
        for (const auto& s : dec.summands) {
            ShearGen g = exact_flow(s, dt);
            if (!g.is_identity()) word.push_back(std::move(g));
        }
        rep.steps.push_back({static_cast<double>(j) / N, tres, dres, dec.summands.size()});
        rep.truncation_residual = std::max(rep.truncation_residual, tres);
        rep.decomposition_residual = std::max(rep.decomposition_residual, dres);
    }
    ShearGen aff = ShearGen::affine(A.to_backend(b), to_backend(a, b));
    if (!aff.is_identity()) word.push_back(std::move(aff));

    for (const auto& z : polydisc_grid(n, cfg)) rep.sup_error = std::max(rep.sup_error, distance(eval_word(word, z), target(z)));
    rep.seconds = seconds_since(t0);
    return {std::move(word), std::move(rep)};
}

Poly embed_parameter(const Poly& univ, std::size_t n) {
    return univ.compose({Poly::variable(n + 1, n, univ.backend())});
}

}  // namespace

std::vector<Point> polydisc_grid(std::size_t n, const PipelineConfig& cfg) {
    std::vector<std::vector<Complex>> axes;
    for (double r : radii_for(n, cfg)) axes.push_back(circle_values(r, cfg));
    return tensor_grid(axes);
}

VectorField isotopy_field(const PolyMap& H, const Scalar& t, int k) {
    if (k < 2) throw Error(ErrorKind::InvalidInput, "truncation order must be >= 2");
    require_schwarz(H);
    return isotopy_raw(H, t.to_backend(H.backend()), k);
}

double truncation_residual(const PolyMap& H, const Scalar& t, int k, const std::vector<double>& radii) {
    VectorField V = isotopy_raw(H, t, 2 * k);
    double s = 0;
    for (const auto& c : V.coefficients()) s += std::pow(polydisc_bound(c, H.dim(), k + 1, 2 * k, radii), 2);
    return std::sqrt(s);
}

Approximation approximate(const PolyMap& target, GroupTag tag, const PipelineConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (target.num_params() != 0) throw Error(ErrorKind::InvalidInput, "target must not carry parameters");
    if (cfg.backend == Backend::exact && target.backend() != Backend::exact)
        throw Error(ErrorKind::BackendMismatch, "exact pipeline needs an exact target");
    if (is_symplectic_tag(tag) && !preserves_symplectic_form(target, 1e-9))
        throw Error(ErrorKind::Precondition, std::string("target does not preserve the symplectic form for ") + to_string(tag));
    SchwarzDecomposition sd = schwarz_normalize(target, tag);
    const PolyMap& H = std::get<PolyMap>(sd.tail);
    const PolyMap Ta = target.to_backend(Backend::approx);
    return run_pipeline(H, sd.linear, sd.center, tag, cfg, [&](const Point& z) { return Ta.evaluate(z); }, t0);
}

Approximation approximate(const ShearWord& target, GroupTag tag, const PipelineConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.validate();
    if (cfg.backend == Backend::exact && target.backend() != Backend::exact)
        throw Error(ErrorKind::BackendMismatch, "exact pipeline needs an exact target");
    ShearWord w = target.with_tag(tag);
    SchwarzDecomposition sd = schwarz_normalize(w);
    PolyMap H = word_jet(std::get<ShearWord>(sd.tail), 2 * cfg.order).map;
    return run_pipeline(H, sd.linear, sd.center, tag, cfg, [&](const Point& z) { return eval_word(w, z); }, t0);
}

InterpolatingApproximation approximate_interpolating(const PolyMap& target, const std::vector<Scalar>& nodes0,
                                                     double R, GroupTag tag, const PipelineConfig& cfg) {
    const auto t0 = Clock::now();
    cfg.validate();
    const std::size_t n = target.dim();
    const Backend b = cfg.backend;
    if (target.num_params() != 1) throw Error(ErrorKind::InvalidInput, "target must carry exactly one parameter");
    if (!(R > 0)) throw Error(ErrorKind::InvalidInput, "parameter disc radius must be positive");
    if (b == Backend::exact && target.backend() != Backend::exact)
        throw Error(ErrorKind::InvalidInput, "exact backend requires an exact target");
    // Split and isotopy field in the target's own arithmetic, so exact input stays exact.
    const Backend wb = target.backend();
    const PolyMap F = target;
    const PolyMap Fb = target.to_backend(b);
    std::vector<Scalar> nodes;
    for (const auto& x : nodes0) nodes.push_back(x.to_backend(b));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].abs() > R * (1 + 1e-12))
            throw Error(ErrorKind::Precondition, "node outside the parameter disc", nodes[i].to_string());
        for (std::size_t j = 0; j < i; ++j)
            if (nodes[i] == nodes[j]) throw Error(ErrorKind::InvalidInput, "nodes must be distinct", nodes[i].to_string());
    }
    // target(x_k) = identity.
    for (const auto& x : nodes) {
        std::vector<Poly> subs;
        for (std::size_t i = 0; i < n; ++i) subs.push_back(Poly::variable(n, i, b));
        subs.push_back(Poly::constant(n, x));
        std::vector<Poly> comps;
        for (const auto& c : Fb.components()) comps.push_back(c.compose(subs));
        if (!near_equal(PolyMap(comps), PolyMap::identity(n, b), 1e-12))
            throw Error(ErrorKind::Precondition, "target is not the identity at node " + x.to_string(),
                        PolyMap(comps).to_string());
    }

    // F = a(x) + A(x) H(x).
    std::vector<Poly> a(n, Poly(1, wb));
    std::vector<std::vector<Poly>> A(n, std::vector<Poly>(n, Poly(1, wb)));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [m, c] : F[i].terms()) {
            const int d = m.degree_prefix(n);
            const Monomial xm = Monomial::unit(0, m[n]);
            if (d == 0) a[i].add_term(xm, c);
            if (d == 1)
                for (std::size_t j = 0; j < n; ++j)
                    if (m[j]) A[i][j].add_term(xm, c);
        }
    const Poly det = determinant(A).chopped();
    if (det.degree() != 0)
        throw Error(ErrorKind::Precondition, "linear part must have parameter-independent nonzero determinant",
                    det.to_string());
    const Scalar inv_det = Scalar::one(wb) / det.constant_term();
    std::vector<std::vector<Poly>> Ainv(n, std::vector<Poly>(n, Poly(1, wb)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            // inverse(i, j) = cofactor(j, i) / det
            std::vector<std::vector<Poly>> minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                minor.emplace_back();
                for (std::size_t c = 0; c < n; ++c)
                    if (c != i) minor.back().push_back(A[r][c]);
            }
            Poly cof = n == 1 ? Poly::constant(1, Scalar::one(wb)) : determinant(minor);
            Ainv[i][j] = cof * ((i + j) % 2 ? -inv_det : inv_det);
        }
    std::vector<Poly> Hc;
    for (std::size_t i = 0; i < n; ++i) {
        Poly h(n + 1, wb);
        for (std::size_t j = 0; j < n; ++j)
            h += embed_parameter(Ainv[i][j], n) * (F[j] - embed_parameter(a[j], n));
        Hc.push_back(h.chopped(wb == Backend::exact ? 0 : 1e-14));
    }
    const PolyMap H(std::move(Hc));

    const int k = cfg.order, N = cfg.steps;
    std::vector<double> radii = radii_for(n, cfg);
    radii.push_back(R);
    const PolyMap Ha = H.to_backend(Backend::approx).truncated(2 * k);
    const PolyMap Hk = H.truncated(k);
    for (auto& ai : a) ai = ai.to_backend(b);
    for (auto& row : A)
        for (auto& e : row) e = e.to_backend(b);
    const FieldTag ftag = field_tag_for(tag);
    const Scalar dt = Scalar::ratio(1, N, b);

    auto vanishing = [&](const Poly& p, const Scalar& offset) {
        Poly rem(1, b);
        Poly q = divide_by_roots(p, nodes, &rem);
        if ((b == Backend::exact && !rem.is_zero()) || max_abs_coefficient(rem) > 1e-8)
            throw Error(ErrorKind::Internal, "coefficient does not vanish at the nodes", rem.to_string());
        return ParamFn::vanishing(q, nodes, offset);
    };

    ParamAutCurve curve(n, b, tag);
    ErrorReport rep;
    for (int j = 0; j < N; ++j) {
        const Scalar t = Scalar::ratio(j, N, b);
        VectorField V = isotopy_field(Hk, Scalar::ratio(j, N, wb), k).to_backend(b);
        std::vector<ParamSummand> ps = decompose_field_parametric(V, ftag);
        VectorField rest = V;
        for (const auto& s : ps) {
            const Poly coef = embed_parameter(s.coefficient, n);
            std::vector<Poly> comps;
            const VectorField f = s.field.field();
            for (const auto& c : f.coefficients()) comps.push_back(c.extended(n + 1) * coef);
            rest = rest - VectorField(comps);
            curve.push_back(ParamShearFactor{exact_flow(s.field, Scalar::one(b)), vanishing(s.coefficient * dt, Scalar::zero(b))});
        }
        const double dres = max_coefficient(rest);
        if ((b == Backend::exact && !rest.is_zero()) || dres > 1e-8)
            throw Error(ErrorKind::Internal, "decomposition residual is nonzero", rest.to_string());
        const double tres = truncation_residual(Ha, t.to_backend(Backend::approx), k, radii);
        rep.steps.push_back({static_cast<double>(j) / N, tres, dres, ps.size()});
        rep.truncation_residual = std::max(rep.truncation_residual, tres);
        rep.decomposition_residual = std::max(rep.decomposition_residual, dres);
    }
    bool affine_identity = true;
    AffineFactor aff;
    for (std::size_t i = 0; i < n; ++i) {
        aff.A.emplace_back();
        for (std::size_t j = 0; j < n; ++j) {
            const Scalar delta = Scalar::from_int(i == j ? 1 : 0, b);
            const Poly dev = (A[i][j] - Poly::constant(1, delta)).chopped(b == Backend::exact ? 0 : 1e-14);
            affine_identity = affine_identity && dev.is_zero();
            aff.A.back().push_back(vanishing(dev, delta));
        }
        const Poly ai = a[i].chopped(b == Backend::exact ? 0 : 1e-14);
        affine_identity = affine_identity && ai.is_zero();
        aff.b.push_back(vanishing(ai, Scalar::zero(b)));
    }
    if (!affine_identity) curve.push_back(std::move(aff));

    const PolyMap Fa = F.to_backend(Backend::approx);
    const std::vector<Point> grid = polydisc_grid(n, cfg);
    std::vector<Complex> xs{0.0};
    for (const auto& x : circle_values(R, cfg)) xs.push_back(x);
    for (const auto& x : xs) {
        CurveEvaluator ev(curve, x);
        for (const auto& z : grid) {
            Point zx = z;
            zx.push_back(x);
            rep.sup_error = std::max(rep.sup_error, distance(ev(z), Fa.evaluate(zx)));
        }
    }
    InterpolatingApproximation out{std::move(curve), std::move(rep), 0.0};
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 20);
    for (const auto& x : nodes) {
        CurveEvaluator ev(out.curve, x.to_complex());
        for (std::size_t i = 0; i < grid.size(); i += stride)
            out.node_error = std::max(out.node_error, distance(ev(grid[i]), grid[i]));
    }
    out.report.seconds = seconds_since(t0);
    return out;
}

namespace {

template <class Target>
std::vector<ConvergenceRow> study(const Target& target, GroupTag tag, const std::vector<int>& Ns,
                                  const PipelineConfig& cfg) {
    std::vector<ConvergenceRow> rows;
    for (int N : Ns) {
        PipelineConfig c = cfg;
        c.steps = N;
        Approximation r = approximate(target, tag, c);
        rows.push_back({N, r.report.sup_error, r.report.truncation_residual, r.report.seconds});
    }
    return rows;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const PolyMap& target, GroupTag tag, const std::vector<int>& Ns,
                                              const PipelineConfig& cfg) {
    return study(target, tag, Ns, cfg);
}

std::vector<ConvergenceRow> convergence_study(const ShearWord& target, GroupTag tag, const std::vector<int>& Ns,
                                              const PipelineConfig& cfg) {
    return study(target, tag, Ns, cfg);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, bool timing) {
    std::ostringstream os;
    os.precision(17);
    os << "N,sup_error,truncation_residual,seconds\n";
    for (const auto& r : rows)
        os << r.N << ',' << r.sup_error << ',' << r.truncation_residual << ',' << (timing ? r.seconds : 0.0) << '\n';
    return os.str();
}

}  // namespace shearkit
