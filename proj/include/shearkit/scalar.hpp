#pragma once

#include <complex>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "shearkit/errors.hpp"

namespace shearkit {

enum class Backend { exact, approx };

const char* to_string(Backend b);

/// Absolute coefficient tolerance used by approximate-backend comparisons.
inline constexpr double kDefaultTolerance = 1e-10;

using Complex = std::complex<double>;

/// Gaussian rational re + i*im with arbitrary-precision parts.
struct GaussianRational {
    mpq_class re;
    mpq_class im;
};

/// A complex number tagged with its arithmetic backend.
///
/// Exact scalars are Gaussian rationals; approximate scalars are IEEE double
/// complex numbers. Binary operations on scalars of different backends throw
/// ErrorKind::BackendMismatch rather than coercing.
class Scalar {
public:
    Scalar() : value_(GaussianRational{}) {}

    static Scalar exact(const mpq_class& re, const mpq_class& im = 0);
    static Scalar exact_int(long re, long im = 0);
    static Scalar approx(Complex z) { return Scalar(z); }
    static Scalar from_int(long k, Backend b);
    /// p/q in the requested backend.
    static Scalar ratio(long p, long q, Backend b);
    static Scalar zero(Backend b) { return from_int(0, b); }
    static Scalar one(Backend b) { return from_int(1, b); }
    /// Parses "num/den" (or an integer) for each component.
    static Scalar parse_exact(const std::string& re, const std::string& im);

    Backend backend() const { return value_.index() == 0 ? Backend::exact : Backend::approx; }
    bool is_exact() const { return backend() == Backend::exact; }

    /// Exact zero test (no tolerance, also for the approximate backend).
    bool is_zero() const;
    bool is_one() const;
    /// |z| <= tol for approximate scalars, exact test otherwise.
    bool near_zero(double tol = kDefaultTolerance) const;

    const GaussianRational& gaussian() const;
    Complex to_complex() const;
    double abs() const { return std::abs(to_complex()); }

    /// Exact -> approximate conversion is allowed; the reverse throws.
    Scalar to_backend(Backend b) const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    /// Structural equality: same backend and identical value.
    friend bool operator==(const Scalar& a, const Scalar& b);

    Scalar pow(unsigned k) const;
    std::string to_string() const;

private:
    explicit Scalar(GaussianRational g) : value_(std::move(g)) {}
    explicit Scalar(Complex z) : value_(z) {}

    void require_same(const Scalar& o) const;

    std::variant<GaussianRational, Complex> value_;
};

/// Equality up to `tol` for approximate scalars, exact equality otherwise.
bool near_equal(const Scalar& a, const Scalar& b, double tol = kDefaultTolerance);

/// e^z in the approximate backend. Exact input is accepted only when z == 0
/// (result 1); anything else is transcendental and throws.
Scalar exp(const Scalar& z);

}  // namespace shearkit
