#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "shearkit/shear.hpp"

namespace shearkit {

/// Coefficients of a univariate polynomial, lowest degree first.
std::vector<Scalar> univariate_coefficients(const Poly& p);
/// p / prod (x - r); the remainder is returned through `remainder` if given.
Poly divide_by_roots(const Poly& p, const std::vector<Scalar>& roots, Poly* remainder = nullptr);
/// prod (x - r) as a univariate polynomial.
Poly root_product(const std::vector<Scalar>& roots, Backend b);

/// Scalar function of the curve parameter x.
///
/// Polynomial kind: offset + prod_k (x - r_k) * q(x). The root product is
/// evaluated first, so the value equals `offset` exactly at every root.
/// Exponential kind: exp(q(x)), never zero.
class ParamFn {
public:
    enum class Kind { polynomial, exponential };

    static ParamFn constant(const Scalar& c);
    static ParamFn polynomial(Poly q);
    /// offset + prod (x - roots) * q.
    static ParamFn vanishing(Poly q, std::vector<Scalar> roots, Scalar offset);
    static ParamFn exponential(Poly L);

    Kind kind() const { return kind_; }
    Backend backend() const { return q_.backend(); }
    const Poly& q() const { return q_; }
    const std::vector<Scalar>& roots() const { return roots_; }
    const Scalar& offset() const { return offset_; }

    Complex eval(Complex x) const;
    /// Exact value; exponential kind is exact only where q(x) = 0.
    Scalar eval(const Scalar& x) const;
    /// Expanded polynomial (polynomial kind only).
    Poly expanded() const;
    bool is_nonvanishing() const;

private:
    ParamFn(Kind k, Poly q, std::vector<Scalar> roots, Scalar offset)
        : kind_(k), q_(std::move(q)), roots_(std::move(roots)), offset_(std::move(offset)) {}

    Kind kind_;
    Poly q_;
    std::vector<Scalar> roots_;
    Scalar offset_;
};

class ParamAutCurve;

/// z -> A(x) z + b(x); det A(x) must be a nonzero constant.
struct AffineFactor {
    std::vector<std::vector<ParamFn>> A;
    std::vector<ParamFn> b;
};
/// z_i += c(x) z_j  (i != j).
struct TransvectionFactor {
    std::size_t i, j;
    ParamFn c;
};
/// z_i *= u(x) with u nowhere zero.
struct DiagonalFactor {
    std::size_t i;
    ParamFn u;
};
/// theta_{h(x)}, the scaling curve of a Schwarz-form map at s = h(x).
struct ScaledFactor {
    std::variant<ShearWord, PolyMap, std::shared_ptr<const ParamAutCurve>> target;
    ParamFn h;
};
/// Shear generator with parameter-dependent time (the generator's own time is ignored).
struct ParamShearFactor {
    ShearGen gen;
    ParamFn time;
};
/// Planar elementary map (z1, z2) -> (a z1 + sum_k p_k z2^k, b z2 + c).
struct ElementaryFactor {
    ParamFn a, b, c;
    std::vector<ParamFn> p;
};

using CurveFactor =
    std::variant<AffineFactor, TransvectionFactor, DiagonalFactor, ScaledFactor, ParamShearFactor, ElementaryFactor>;

/// x -> automorphism of C^n, a word of parameter-dependent factors in
/// application order. Every factor is invertible for every x.
class ParamAutCurve {
public:
    ParamAutCurve(std::size_t n, Backend b, GroupTag tag = GroupTag::aut);

    std::size_t dim() const { return n_; }
    Backend backend() const { return backend_; }
    GroupTag tag() const { return tag_; }
    const std::vector<CurveFactor>& factors() const { return factors_; }

    /// Validates structural invertibility; throws Precondition otherwise.
    void push_back(CurveFactor f);
    void append(const ParamAutCurve& c);

private:
    std::size_t n_;
    Backend backend_;
    GroupTag tag_;
    std::vector<CurveFactor> factors_;
};

/// Numeric evaluation of a curve at a fixed parameter value. Construction
/// evaluates the parameter functions once; calls then map points.
class CurveEvaluator {
public:
    CurveEvaluator(const ParamAutCurve& curve, Complex x);
    ~CurveEvaluator();
    CurveEvaluator(CurveEvaluator&&) noexcept;

    Point operator()(const Point& z) const;
    /// Also left-multiplies the row-major Jacobian J.
    Point operator()(const Point& z, std::vector<Complex>& J) const;
    /// Value and log of the Jacobian determinant, summed over the factors
    /// along the way (no overflow for large exponential factors).
    Point eval_with_log_det(const Point& z, Complex& log_det) const;

    struct Step;

private:
    std::size_t n_;
    std::vector<std::unique_ptr<Step>> steps_;
};

Point eval_curve(const ParamAutCurve& c, Complex x, const Point& z);

/// Symbolic value at a parameter value; exact for exact curves and
/// parameters. Throws Transcendental when a factor has no polynomial form.
PolyMap curve_polymap(const ParamAutCurve& c, const Scalar& x);

/// Determinant of the numeric Jacobian of the curve at (x, z).
Complex curve_jacobian_det(const ParamAutCurve& c, Complex x, const Point& z);

/// Certifies that the value at x lies in the curve's group: finite values,
/// Jacobian determinant nonzero (and within tol of 1 for volume tags) at the
/// sample points. Returns a reason on failure.
std::optional<std::string> certify_curve_at(const ParamAutCurve& c, Complex x, const std::vector<Point>& samples,
                                            double tol = 1e-8);

}  // namespace shearkit
