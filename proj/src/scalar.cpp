#include "shearkit/scalar.hpp"

#include <sstream>

namespace shearkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BackendMismatch: return "BackendMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonConstantJacobian: return "NonConstantJacobian";
    case ErrorKind::NotAnAutomorphism: return "NotAnAutomorphism";
    case ErrorKind::Precondition: return "PreconditionViolated";
    case ErrorKind::Transcendental: return "Transcendental";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

const char* to_string(Backend b) { return b == Backend::exact ? "exact" : "approx"; }

Scalar Scalar::exact(const mpq_class& re, const mpq_class& im) {
    GaussianRational g{re, im};
    g.re.canonicalize();
    g.im.canonicalize();
    return Scalar(std::move(g));
}

Scalar Scalar::exact_int(long re, long im) { return Scalar(GaussianRational{mpq_class(re), mpq_class(im)}); }

Scalar Scalar::from_int(long k, Backend b) {
    if (b == Backend::exact) return exact_int(k);
    return Scalar(Complex(static_cast<double>(k), 0.0));
}

Scalar Scalar::ratio(long p, long q, Backend b) {
    if (q == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
    if (b == Backend::exact) return exact(mpq_class(p, q));
    return Scalar(Complex(static_cast<double>(p) / static_cast<double>(q), 0.0));
}

Scalar Scalar::parse_exact(const std::string& re, const std::string& im) {
    try {
        mpq_class r(re, 10), i(im, 10);
        if (r.get_den() == 0 || i.get_den() == 0) throw std::invalid_argument("zero denominator");
        return exact(r, i);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::InvalidInput, "malformed rational: \"" + re + "\", \"" + im + "\"");
    }
}

bool Scalar::is_zero() const {
    if (auto g = std::get_if<GaussianRational>(&value_)) return sgn(g->re) == 0 && sgn(g->im) == 0;
    auto z = std::get<Complex>(value_);
    return z.real() == 0.0 && z.imag() == 0.0;
}

bool Scalar::is_one() const {
    if (auto g = std::get_if<GaussianRational>(&value_)) return g->re == 1 && sgn(g->im) == 0;
    auto z = std::get<Complex>(value_);
    return z.real() == 1.0 && z.imag() == 0.0;
}

bool Scalar::near_zero(double tol) const {
    if (is_exact()) return is_zero();
    return std::abs(std::get<Complex>(value_)) <= tol;
}

const GaussianRational& Scalar::gaussian() const {
    if (auto g = std::get_if<GaussianRational>(&value_)) return *g;
    throw Error(ErrorKind::BackendMismatch, "exact value requested from an approximate scalar");
}

Complex Scalar::to_complex() const {
    if (auto g = std::get_if<GaussianRational>(&value_)) return {g->re.get_d(), g->im.get_d()};
    return std::get<Complex>(value_);
}

Scalar Scalar::to_backend(Backend b) const {
    if (b == backend()) return *this;
    if (b == Backend::approx) return Scalar(to_complex());
    throw Error(ErrorKind::BackendMismatch, "cannot convert an approximate scalar to the exact backend");
}

void Scalar::require_same(const Scalar& o) const {
    if (value_.index() != o.value_.index())
        throw Error(ErrorKind::BackendMismatch, "mixed exact/approximate scalar arithmetic");
}

Scalar Scalar::operator-() const {
    if (auto g = std::get_if<GaussianRational>(&value_)) return Scalar(GaussianRational{-g->re, -g->im});
    return Scalar(-std::get<Complex>(value_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
    require_same(o);
    if (auto g = std::get_if<GaussianRational>(&value_)) {
        const auto& h = std::get<GaussianRational>(o.value_);
        g->re += h.re;
        g->im += h.im;
    } else {
        std::get<Complex>(value_) += std::get<Complex>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    require_same(o);
    if (auto g = std::get_if<GaussianRational>(&value_)) {
        const auto& h = std::get<GaussianRational>(o.value_);
        g->re -= h.re;
        g->im -= h.im;
    } else {
        std::get<Complex>(value_) -= std::get<Complex>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    require_same(o);
    if (auto g = std::get_if<GaussianRational>(&value_)) {
        const auto& h = std::get<GaussianRational>(o.value_);
        if (sgn(g->im) == 0 && sgn(h.im) == 0) {
            g->re *= h.re;
        } else {
            mpq_class re = g->re * h.re - g->im * h.im;
            mpq_class im = g->re * h.im + g->im * h.re;
            g->re = std::move(re);
            g->im = std::move(im);
        }
    } else {
        std::get<Complex>(value_) *= std::get<Complex>(o.value_);
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    require_same(o);
    if (o.is_zero()) throw Error(ErrorKind::SingularMatrix, "division by zero scalar");
    if (auto g = std::get_if<GaussianRational>(&value_)) {
        const auto& h = std::get<GaussianRational>(o.value_);
        if (sgn(h.im) == 0) {
            g->re /= h.re;
            g->im /= h.re;
        } else {
            mpq_class norm = h.re * h.re + h.im * h.im;
            mpq_class re = (g->re * h.re + g->im * h.im) / norm;
            mpq_class im = (g->im * h.re - g->re * h.im) / norm;
            g->re = std::move(re);
            g->im = std::move(im);
        }
    } else {
        std::get<Complex>(value_) /= std::get<Complex>(o.value_);
    }
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.value_.index() != b.value_.index()) return false;
    if (auto g = std::get_if<GaussianRational>(&a.value_)) {
        const auto& h = std::get<GaussianRational>(b.value_);
        return g->re == h.re && g->im == h.im;
    }
    return std::get<Complex>(a.value_) == std::get<Complex>(b.value_);
}

Scalar Scalar::pow(unsigned k) const {
    Scalar result = one(backend());
    Scalar base = *this;
    while (k) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base *= base;
    }
    return result;
}

std::string Scalar::to_string() const {
    std::ostringstream os;
    if (auto g = std::get_if<GaussianRational>(&value_)) {
        os << g->re.get_str();
        if (sgn(g->im) != 0) os << (sgn(g->im) > 0 ? "+" : "") << g->im.get_str() << "i";
    } else {
        os.precision(17);
        auto z = std::get<Complex>(value_);
        os << z.real();
        if (z.imag() != 0.0) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
    }
    return os.str();
}

bool near_equal(const Scalar& a, const Scalar& b, double tol) {
    if (a.backend() != b.backend())
        throw Error(ErrorKind::BackendMismatch, "mixed exact/approximate comparison");
    if (a.is_exact()) return a == b;
    return std::abs(a.to_complex() - b.to_complex()) <= tol;
}

Scalar exp(const Scalar& z) {
    if (z.is_exact()) {
        if (z.is_zero()) return Scalar::exact_int(1);
        throw Error(ErrorKind::Transcendental, "exponential of a nonzero exact scalar is not exact");
    }
    return Scalar::approx(std::exp(z.to_complex()));
}

}  // namespace shearkit
