#include "shearkit/curve.hpp"

#include <cmath>
#include <optional>

namespace shearkit {

std::vector<Scalar> univariate_coefficients(const Poly& p) {
    if (p.num_vars() != 1) throw Error(ErrorKind::ArityMismatch, "expected a univariate polynomial");
    std::vector<Scalar> c(static_cast<std::size_t>(std::max(p.degree(), 0)) + 1, Scalar::zero(p.backend()));
    for (const auto& [m, v] : p.terms()) c[m[0]] = v;
    return c;
}

Poly root_product(const std::vector<Scalar>& roots, Backend b) {
    Poly r = Poly::constant(1, Scalar::one(b));
    const Poly x = Poly::variable(1, 0, b);
    for (const auto& root : roots) r = r * (x - Poly::constant(1, root));
    return r;
}

Poly divide_by_roots(const Poly& p, const std::vector<Scalar>& roots, Poly* remainder) {
    std::vector<Scalar> a = univariate_coefficients(p);
    for (const auto& r : roots) {
        if (a.size() <= 1) {
            a.assign(1, Scalar::zero(p.backend()));
            break;
        }
        // Synthetic division by (x - r); the constant remainder is dropped here.
        std::vector<Scalar> q(a.size() - 1, Scalar::zero(p.backend()));
        q.back() = a.back();
        for (std::size_t k = q.size() - 1; k > 0; --k) q[k - 1] = a[k] + r * q[k];
        a = std::move(q);
    }
    Poly q = univariate(a);
    if (remainder) *remainder = p - root_product(roots, p.backend()) * q;
    return q;
}

ParamFn ParamFn::constant(const Scalar& c) {
    return ParamFn(Kind::polynomial, Poly::constant(1, c), {}, Scalar::zero(c.backend()));
}

ParamFn ParamFn::polynomial(Poly q) {
    if (q.num_vars() != 1) throw Error(ErrorKind::ArityMismatch, "parameter functions are univariate");
    const Backend b = q.backend();
    return ParamFn(Kind::polynomial, std::move(q), {}, Scalar::zero(b));
}

ParamFn ParamFn::vanishing(Poly q, std::vector<Scalar> roots, Scalar offset) {
    if (q.num_vars() != 1) throw Error(ErrorKind::ArityMismatch, "parameter functions are univariate");
    for (const auto& r : roots)
        if (r.backend() != q.backend()) throw Error(ErrorKind::BackendMismatch, "roots and polynomial differ in backend");
    if (offset.backend() != q.backend()) throw Error(ErrorKind::BackendMismatch, "offset and polynomial differ in backend");
    return ParamFn(Kind::polynomial, std::move(q), std::move(roots), std::move(offset));
}

ParamFn ParamFn::exponential(Poly L) {
    if (L.num_vars() != 1) throw Error(ErrorKind::ArityMismatch, "parameter functions are univariate");
    const Backend b = L.backend();
    return ParamFn(Kind::exponential, std::move(L), {}, Scalar::zero(b));
}

Complex ParamFn::eval(Complex x) const {
    const Complex qx = q_.evaluate(std::span<const Complex>(&x, 1));
    if (kind_ == Kind::exponential) return std::exp(qx);
    Complex prod = 1.0;
    for (const auto& r : roots_) prod *= x - r.to_complex();
    return offset_.to_complex() + prod * qx;
}

Scalar ParamFn::eval(const Scalar& x) const {
    const Scalar qx = q_.evaluate(std::span<const Scalar>(&x, 1));
    if (kind_ == Kind::exponential) return exp(qx);
    Scalar prod = Scalar::one(backend());
    for (const auto& r : roots_) prod *= x - r;
    return offset_ + prod * qx;
}

Poly ParamFn::expanded() const {
    if (kind_ == Kind::exponential) throw Error(ErrorKind::Transcendental, "exponential parameter function");
    return Poly::constant(1, offset_) + root_product(roots_, backend()) * q_;
}

bool ParamFn::is_nonvanishing() const {
    if (kind_ == Kind::exponential) return true;
    Poly e = expanded().chopped();
    return e.degree() == 0;
}

namespace {

using Cmat = std::vector<Complex>;

Cmat cmat_mul(const Cmat& A, const Cmat& B, std::size_t n) {
    Cmat C(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = A[i * n + k];
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) C[i * n + j] += a * B[k * n + j];
        }
    return C;
}

Cmat cidentity(std::size_t n) {
    Cmat I(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) I[i * n + i] = 1.0;
    return I;
}

Complex cdet(Cmat A, std::size_t n) {
    Complex d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        if (A[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[c * n + j], A[piv * n + j]);
            d = -d;
        }
        d *= A[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = A[r * n + c] / A[c * n + c];
            for (std::size_t j = c; j < n; ++j) A[r * n + j] -= f * A[c * n + j];
        }
    }
    return d;
}

void require_backend(const ParamFn& f, Backend b) {
    if (f.backend() != b) throw Error(ErrorKind::BackendMismatch, "curve factor backend differs from the curve");
}

void check_schwarz(const PolyMap& m) {
    if (m.num_params() != 0) throw Error(ErrorKind::InvalidInput, "scaled map must be parameter free");
    for (const auto& c : m.center())
        if (!c.near_zero()) throw Error(ErrorKind::Precondition, "scaled map must fix the origin");
    if (!near_equal(m.linear_part(), Matrix::identity(m.dim(), m.backend())))
        throw Error(ErrorKind::Precondition, "scaled map must have identity linear part");
}

std::string tag_name(GroupTag t) { return to_string(t); }

}  // namespace

ParamAutCurve::ParamAutCurve(std::size_t n, Backend b, GroupTag tag) : n_(n), backend_(b), tag_(tag) {
    if (n == 0) throw Error(ErrorKind::InvalidInput, "curve dimension must be positive");
}

void ParamAutCurve::push_back(CurveFactor f) {
    const std::size_t n = n_;
    const Backend b = backend_;
    const bool volume = is_volume_tag(tag_) || is_symplectic_tag(tag_);
    std::visit(
        [&](auto& fac) {
            using T = std::decay_t<decltype(fac)>;
            if constexpr (std::is_same_v<T, AffineFactor>) {
                if (fac.A.size() != n || fac.b.size() != n)
                    throw Error(ErrorKind::ArityMismatch, "affine factor has wrong size");
                std::vector<std::vector<Poly>> M;
                for (const auto& row : fac.A) {
                    if (row.size() != n) throw Error(ErrorKind::ArityMismatch, "affine factor has wrong size");
                    M.emplace_back();
                    for (const auto& e : row) {
                        require_backend(e, b);
                        M.back().push_back(e.expanded());
                    }
                }
                for (const auto& e : fac.b) require_backend(e, b);
                Poly d = determinant(M).chopped();
                if (d.degree() != 0)
                    throw Error(ErrorKind::Precondition, "affine factor determinant must be a nonzero constant",
                                d.to_string());
                if (volume && !near_equal(d.constant_term(), Scalar::one(b), 1e-9))
                    throw Error(ErrorKind::Precondition,
                                "affine factor determinant must be 1 for " + tag_name(tag_), d.to_string());
            } else if constexpr (std::is_same_v<T, TransvectionFactor>) {
                if (fac.i >= n || fac.j >= n || fac.i == fac.j)
                    throw Error(ErrorKind::InvalidInput, "transvection indices invalid");
                require_backend(fac.c, b);
                if (is_symplectic_tag(tag_) && n != 2)
                    throw Error(ErrorKind::Unsupported, "transvection factors in symplectic curves need n = 2");
            } else if constexpr (std::is_same_v<T, DiagonalFactor>) {
                if (fac.i >= n) throw Error(ErrorKind::InvalidInput, "diagonal index invalid");
                require_backend(fac.u, b);
                if (!fac.u.is_nonvanishing())
                    throw Error(ErrorKind::Precondition, "diagonal factor may vanish");
                if (volume) throw Error(ErrorKind::Precondition, "diagonal factor not allowed in " + tag_name(tag_));
            } else if constexpr (std::is_same_v<T, ScaledFactor>) {
                require_backend(fac.h, b);
                if (auto* w = std::get_if<ShearWord>(&fac.target)) {
                    if (w->dim() != n || w->backend() != b)
                        throw Error(ErrorKind::ArityMismatch, "scaled word does not match the curve");
                    check_schwarz(word_jet(*w, 1).map);
                } else if (auto* m = std::get_if<PolyMap>(&fac.target)) {
                    if (m->dim() != n || m->backend() != b)
                        throw Error(ErrorKind::ArityMismatch, "scaled map does not match the curve");
                    check_schwarz(*m);
                } else {
                    const auto& c = std::get<std::shared_ptr<const ParamAutCurve>>(fac.target);
                    if (!c || c->dim() != n || c->backend() != b)
                        throw Error(ErrorKind::ArityMismatch, "scaled curve does not match the curve");
                }
            } else if constexpr (std::is_same_v<T, ParamShearFactor>) {
                if (fac.gen.kind() == ShearKind::affine)
                    throw Error(ErrorKind::InvalidInput, "parameter shear factor needs a shear generator");
                if (fac.gen.dim() != n || fac.gen.backend() != b)
                    throw Error(ErrorKind::ArityMismatch, "shear factor does not match the curve");
                require_backend(fac.time, b);
                const Scalar one = Scalar::one(b);
                ShearGen probe = fac.gen.kind() == ShearKind::additive
                                     ? ShearGen::additive(fac.gen.matrix(), fac.gen.profile(), one)
                                     : ShearGen::multiplicative(fac.gen.matrix(), fac.gen.profile(), one);
                if (auto why = generator_violation(probe, tag_)) throw Error(ErrorKind::Precondition, *why);
            } else {
                if (n != 2) throw Error(ErrorKind::InvalidInput, "elementary factors are planar");
                for (const ParamFn* e : {&fac.a, &fac.b, &fac.c}) require_backend(*e, b);
                for (const auto& e : fac.p) require_backend(e, b);
                if (!fac.a.is_nonvanishing() || !fac.b.is_nonvanishing())
                    throw Error(ErrorKind::Precondition, "elementary factor units may vanish");
                if (volume) throw Error(ErrorKind::Precondition, "elementary factor not allowed in " + tag_name(tag_));
            }
        },
        f);
    factors_.push_back(std::move(f));
}

void ParamAutCurve::append(const ParamAutCurve& c) {
    if (c.dim() != n_ || c.backend() != backend_) throw Error(ErrorKind::ArityMismatch, "curves do not match");
    for (const auto& f : c.factors()) push_back(f);
}

struct CurveEvaluator::Step {
    virtual ~Step() = default;
    virtual Point apply(const Point& z, Cmat* J) const = 0;
    /// log det of this step's Jacobian at its input z (any branch).
    virtual Complex log_det(const Point& z) const = 0;
};

namespace {

struct AffineStep : CurveEvaluator::Step {
    Cmat A;
    Point b;
    Point apply(const Point& z, Cmat* J) const override {
        const std::size_t n = z.size();
        Point r(b);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r[i] += A[i * n + j] * z[j];
        if (J) *J = cmat_mul(A, *J, n);
        return r;
    }
    Complex log_det(const Point& z) const override { return std::log(cdet(A, z.size())); }
};

struct TransvectionStep : CurveEvaluator::Step {
    std::size_t i, j;
    Complex c;
    Point apply(const Point& z, Cmat* J) const override {
        const std::size_t n = z.size();
        Point r(z);
        r[i] += c * z[j];
        if (J)
            for (std::size_t k = 0; k < n; ++k) (*J)[i * n + k] += c * (*J)[j * n + k];
        return r;
    }
    Complex log_det(const Point&) const override { return 0.0; }
};

struct DiagonalStep : CurveEvaluator::Step {
    std::size_t i;
    Complex u;
    Point apply(const Point& z, Cmat* J) const override {
        const std::size_t n = z.size();
        Point r(z);
        r[i] *= u;
        if (J)
            for (std::size_t k = 0; k < n; ++k) (*J)[i * n + k] *= u;
        return r;
    }
    Complex log_det(const Point&) const override { return std::log(u); }
};

struct PolyStep : CurveEvaluator::Step {
    PolyMap m;
    explicit PolyStep(PolyMap mm) : m(std::move(mm)) {}
    Point apply(const Point& z, Cmat* J) const override {
        if (J) *J = cmat_mul(jacobian_at(m, z), *J, z.size());
        return m.evaluate(z);
    }
    Complex log_det(const Point& z) const override { return std::log(cdet(jacobian_at(m, z), z.size())); }
};

// Scaling curve of a curve's value phi: the polynomial form gives the
// values, and log det D(phi_s)(z) = log det D(phi)(s z) comes from the inner
// factors, which stays accurate when the polynomial's coefficients are large.
struct ScaledCurveStep : PolyStep {
    CurveEvaluator inner;
    Complex s;
    ScaledCurveStep(PolyMap mm, const ParamAutCurve& c, Complex x, Complex ss)
        : PolyStep(std::move(mm)), inner(c, x), s(ss) {}
    Complex log_det(const Point& z) const override {
        Point w(z);
        for (auto& v : w) v *= s;
        Complex ld;
        inner.eval_with_log_det(w, ld);
        return ld;
    }
};

struct ScaledWordStep : CurveEvaluator::Step {
    ShearWord w;
    Complex s;
    std::optional<ShearWord> conjugated;  // w(s z) / s, away from s = 0
    ScaledWordStep(ShearWord ww, Complex ss) : w(std::move(ww)), s(ss) {
        if (std::abs(s) >= 1e-6) conjugated = dilation_conjugate(w.to_backend(Backend::approx), Scalar::approx(s));
    }
    Point apply(const Point& z, Cmat* J) const override {
        if (conjugated) return J ? eval_word(*conjugated, z, *J) : eval_word(*conjugated, z);
        return J ? eval_scaled_word(w, s, z, *J) : eval_scaled_word(w, s, z);
    }
    Complex log_det(const Point& z) const override {
        if (!conjugated) {
            Cmat J = cidentity(z.size());
            eval_scaled_word(w, s, z, J);
            return std::log(cdet(J, z.size()));
        }
        Complex d = 0.0;
        Point p = z;
        for (const auto& g : conjugated->generators()) {
            d += g.jacobian_log_det_at(p);
            p = g.apply(p);
        }
        return d;
    }
};

struct ShearStep : CurveEvaluator::Step {
    ShearGen g;
    Complex t;
    ShearStep(ShearGen gg, Complex tt) : g(std::move(gg)), t(tt) {}
    Point apply(const Point& z, Cmat* J) const override { return g.apply_with_time(z, t, J); }
    Complex log_det(const Point& z) const override { return g.jacobian_log_det_at(z, t); }
};

struct ElementaryStep : CurveEvaluator::Step {
    Complex a, b, c;
    std::vector<Complex> p;
    Point apply(const Point& z, Cmat* J) const override {
        Complex py = 0.0, dpy = 0.0;
        for (std::size_t k = p.size(); k-- > 0;) {
            dpy = dpy * z[1] + py;
            py = py * z[1] + p[k];
        }
        if (J) {
            Cmat D{a, dpy, 0.0, b};
            *J = cmat_mul(D, *J, 2);
        }
        return {a * z[0] + py, b * z[1] + c};
    }
    Complex log_det(const Point&) const override { return std::log(a) + std::log(b); }
};

}  // namespace

CurveEvaluator::CurveEvaluator(const ParamAutCurve& curve, Complex x) : n_(curve.dim()) {
    const std::size_t n = n_;
    for (const auto& f : curve.factors()) {
        std::visit(
            [&](const auto& fac) {
                using T = std::decay_t<decltype(fac)>;
                if constexpr (std::is_same_v<T, AffineFactor>) {
                    auto s = std::make_unique<AffineStep>();
                    s->A.resize(n * n);
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t j = 0; j < n; ++j) s->A[i * n + j] = fac.A[i][j].eval(x);
                        s->b.push_back(fac.b[i].eval(x));
                    }
                    steps_.push_back(std::move(s));
                } else if constexpr (std::is_same_v<T, TransvectionFactor>) {
                    auto s = std::make_unique<TransvectionStep>();
                    s->i = fac.i;
                    s->j = fac.j;
                    s->c = fac.c.eval(x);
                    steps_.push_back(std::move(s));
                } else if constexpr (std::is_same_v<T, DiagonalFactor>) {
                    auto s = std::make_unique<DiagonalStep>();
                    s->i = fac.i;
                    s->u = fac.u.eval(x);
                    steps_.push_back(std::move(s));
                } else if constexpr (std::is_same_v<T, ScaledFactor>) {
                    const Complex h = fac.h.eval(x);
                    if (h == 0.0 && !std::holds_alternative<std::shared_ptr<const ParamAutCurve>>(fac.target)) return;
                    if (auto* w = std::get_if<ShearWord>(&fac.target)) {
                        steps_.push_back(std::make_unique<ScaledWordStep>(*w, h));
                    } else if (auto* m = std::get_if<PolyMap>(&fac.target)) {
                        steps_.push_back(std::make_unique<PolyStep>(
                            scaling_curve(m->to_backend(Backend::approx), Scalar::approx(h))));
                    } else {
                        const auto& inner = *std::get<std::shared_ptr<const ParamAutCurve>>(fac.target);
                        PolyMap v = curve_polymap(inner, Scalar::approx(x)).to_backend(Backend::approx);
                        steps_.push_back(std::make_unique<ScaledCurveStep>(scaling_curve(v, Scalar::approx(h)), inner, x, h));
                    }
                } else if constexpr (std::is_same_v<T, ParamShearFactor>) {
                    steps_.push_back(std::make_unique<ShearStep>(fac.gen, fac.time.eval(x)));
                } else {
                    auto s = std::make_unique<ElementaryStep>();
                    s->a = fac.a.eval(x);
                    s->b = fac.b.eval(x);
                    s->c = fac.c.eval(x);
                    for (const auto& e : fac.p) s->p.push_back(e.eval(x));
                    steps_.push_back(std::move(s));
                }
            },
            f);
    }
}

CurveEvaluator::~CurveEvaluator() = default;
CurveEvaluator::CurveEvaluator(CurveEvaluator&&) noexcept = default;

Point CurveEvaluator::operator()(const Point& z) const {
    if (z.size() != n_) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
    Point r = z;
    for (const auto& s : steps_) r = s->apply(r, nullptr);
    return r;
}

Point CurveEvaluator::operator()(const Point& z, std::vector<Complex>& J) const {
    if (z.size() != n_) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
    Point r = z;
    for (const auto& s : steps_) r = s->apply(r, &J);
    return r;
}

Point CurveEvaluator::eval_with_log_det(const Point& z, Complex& log_det) const {
    if (z.size() != n_) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
    Point r = z;
    log_det = 0.0;
    for (const auto& s : steps_) {
        log_det += s->log_det(r);
        r = s->apply(r, nullptr);
    }
    return r;
}

Point eval_curve(const ParamAutCurve& c, Complex x, const Point& z) { return CurveEvaluator(c, x)(z); }

PolyMap curve_polymap(const ParamAutCurve& curve, const Scalar& x0) {
    const std::size_t n = curve.dim();
    const Backend b = curve.backend();
    const Scalar x = x0.to_backend(b);
    PolyMap R = PolyMap::identity(n, b);
    auto then = [&](const PolyMap& m) { R = compose(m, R); };
    for (const auto& f : curve.factors()) {
        std::visit(
            [&](const auto& fac) {
                using T = std::decay_t<decltype(fac)>;
                if constexpr (std::is_same_v<T, AffineFactor>) {
                    Matrix A(n, n, b);
                    ScalarVec t;
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t j = 0; j < n; ++j) A.set(i, j, fac.A[i][j].eval(x));
                        t.push_back(fac.b[i].eval(x));
                    }
                    then(PolyMap::linear(A, t));
                } else if constexpr (std::is_same_v<T, TransvectionFactor>) {
                    Matrix A = Matrix::identity(n, b);
                    A.set(fac.i, fac.j, fac.c.eval(x));
                    then(PolyMap::linear(A, zeros(n, b)));
                } else if constexpr (std::is_same_v<T, DiagonalFactor>) {
                    Matrix A = Matrix::identity(n, b);
                    A.set(fac.i, fac.i, fac.u.eval(x));
                    then(PolyMap::linear(A, zeros(n, b)));
                } else if constexpr (std::is_same_v<T, ScaledFactor>) {
                    const Scalar h = fac.h.eval(x);
                    // Schwarz-form targets scale to the identity at 0.
                    if (h.is_zero() && !std::holds_alternative<std::shared_ptr<const ParamAutCurve>>(fac.target)) return;
                    PolyMap m = std::holds_alternative<PolyMap>(fac.target) ? std::get<PolyMap>(fac.target)
                                : std::holds_alternative<ShearWord>(fac.target)
                                    ? word_polymap(std::get<ShearWord>(fac.target))
                                    : curve_polymap(*std::get<std::shared_ptr<const ParamAutCurve>>(fac.target), x);
                    then(scaling_curve(m, h));
                } else if constexpr (std::is_same_v<T, ParamShearFactor>) {
                    const Scalar t = fac.time.eval(x);
                    if (t.is_zero()) return;
                    ShearGen g = fac.gen.kind() == ShearKind::additive
                                     ? ShearGen::additive(fac.gen.matrix(), fac.gen.profile(), t)
                                     : ShearGen::multiplicative(fac.gen.matrix(), fac.gen.profile(), t);
                    then(g.as_polymap());
                } else {
                    Poly z1 = Poly::variable(2, 0, b), z2 = Poly::variable(2, 1, b);
                    Poly c0 = z1 * fac.a.eval(x);
                    Poly pw = Poly::constant(2, Scalar::one(b));
                    for (const auto& e : fac.p) {
                        c0 += pw * e.eval(x);
                        pw = pw * z2;
                    }
                    Poly c1 = z2 * fac.b.eval(x) + Poly::constant(2, fac.c.eval(x));
                    then(PolyMap({c0, c1}));
                }
            },
            f);
    }
    return R;
}

Complex curve_jacobian_det(const ParamAutCurve& c, Complex x, const Point& z) {
    Complex ld;
    CurveEvaluator(c, x).eval_with_log_det(z, ld);
    return std::exp(ld);
}

std::optional<std::string> certify_curve_at(const ParamAutCurve& c, Complex x, const std::vector<Point>& samples,
                                            double tol) {
    const std::size_t n = c.dim();
    CurveEvaluator ev(c, x);
    for (const auto& z : samples) {
        Complex ld;
        const Point v = ev.eval_with_log_det(z, ld);
        for (const auto& e : v)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return "non-finite value";
        if (std::isnan(ld.real()) || std::isnan(ld.imag()) || ld.real() == HUGE_VAL) return "non-finite Jacobian";
        if (ld.real() == -HUGE_VAL) return "Jacobian determinant vanishes";
        const Complex d = std::exp(ld);
        if ((is_volume_tag(c.tag()) || is_symplectic_tag(c.tag())) && std::abs(d - 1.0) > tol * std::max(1.0, std::abs(d)))
            return "Jacobian determinant differs from 1";
        if (is_symplectic_tag(c.tag())) {
            Cmat J = cidentity(n);
            ev(z, J);
            // J^T Omega J = Omega.
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Complex s = 0.0;
                    for (std::size_t k = 0; k + 1 < n; k += 2)
                        s += J[k * n + i] * J[(k + 1) * n + j] - J[(k + 1) * n + i] * J[k * n + j];
                    const double want = (i % 2 == 0 && j == i + 1) ? 1.0 : (j % 2 == 0 && i == j + 1) ? -1.0 : 0.0;
                    if (std::abs(s - want) > tol * std::max(1.0, std::abs(s))) return "symplectic form not preserved";
                }
        }
    }
    return std::nullopt;
}

}  // namespace shearkit
