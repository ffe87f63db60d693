#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shearkit/curve.hpp"

namespace shearkit {

using AutTarget = std::variant<ShearWord, PolyMap>;

Backend backend_of(const AutTarget& t);
std::size_t dim_of(const AutTarget& t);
/// Numeric value of the target at z.
Point eval_target(const AutTarget& t, const Point& z);

/// Interpolation data: distinct nodes and one automorphism per node.
struct NodeData {
    std::vector<Scalar> nodes;
    std::vector<AutTarget> targets;

    /// Throws InvalidInput for repeated nodes or size mismatch, and
    /// ArityMismatch / BackendMismatch for inconsistent targets.
    void validate() const;
    std::size_t dim() const;
    Backend backend() const;
};

/// Unique polynomial of degree < r through (nodes[k], values[k]).
Poly lagrange(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values);

/// k-th Lagrange basis function in product form: exactly zero at the other
/// nodes, 1 at nodes[k] (up to rounding in the approximate backend).
ParamFn lagrange_basis(const std::vector<Scalar>& nodes, std::size_t k, const Scalar& scale);

/// exp(L(x)) with L the Lagrange interpolant of the principal logarithms.
/// In the exact backend only constant data is representable; otherwise
/// Transcendental is thrown.
ParamFn nonvanishing_interpolant(const std::vector<Scalar>& nodes, const std::vector<Scalar>& values);

struct Transvection {
    std::size_t i, j;
    Scalar c;  // z_i += c z_j
};

/// Transvections in application order whose composite is S (det S = 1).
std::vector<Transvection> transvection_factorization(const Matrix& S);

/// Curve of matrices with value A_k at nodes[k] for every k.
ParamAutCurve interp_linear(const std::vector<Scalar>& nodes, const std::vector<Matrix>& targets,
                            GroupTag tag = GroupTag::aut);

/// Chain H_m = theta_m^{h_{m-1}} o H_{m-1} through Schwarz-form targets.
/// Polynomial targets give scaled PolyMap factors; word targets give
/// scaled word factors.
ParamAutCurve interp_schwarz_chain(const std::vector<Scalar>& nodes, const std::vector<AutTarget>& targets,
                                   GroupTag tag = GroupTag::aut);

/// F(x) = a(x) + A(x) H(x) with F(x_k) = target k.
ParamAutCurve interpolate_full(const NodeData& data, GroupTag tag = GroupTag::aut);

/// max |curve(x_k)(z) - target_k(z)| over the samples, one entry per node.
std::vector<double> node_errors(const ParamAutCurve& curve, const NodeData& data, const std::vector<Point>& samples);

/// certify_curve_at at every x; the first failure is returned.
std::optional<std::string> certify_curve(const ParamAutCurve& curve, const std::vector<Complex>& xs,
                                         const std::vector<Point>& samples, double tol = 1e-8);

}  // namespace shearkit
