#pragma once

#include <vector>

#include "shearkit/linalg.hpp"
#include "shearkit/poly.hpp"

namespace shearkit {

/// An n-tuple of polynomials; component i is the i-th coordinate of the map.
///
/// Composition convention: compose(g, h) is g after h, i.e. (g o h)(z) = g(h(z)).
/// Components may carry trailing parameter variables (num_vars() > dim());
/// parameters pass through compositions unchanged.
class PolyMap {
public:
    PolyMap(std::vector<Poly> components);
    static PolyMap identity(std::size_t n, Backend b, std::size_t params = 0);
    static PolyMap linear(const Matrix& A, const ScalarVec& b);

    std::size_t dim() const { return comps_.size(); }
    std::size_t num_vars() const { return comps_.front().num_vars(); }
    std::size_t num_params() const { return num_vars() - dim(); }
    Backend backend() const { return comps_.front().backend(); }
    const std::vector<Poly>& components() const { return comps_; }
    const Poly& operator[](std::size_t i) const { return comps_[i]; }

    /// Max total degree over components (in the space variables).
    int degree() const;

    ScalarVec evaluate(const ScalarVec& z) const;
    Point evaluate(const Point& z) const;

    /// Value at z = 0 and derivative at z = 0 (parameter-free maps only).
    ScalarVec center() const;
    Matrix linear_part() const;

    PolyMap truncated(int order) const;
    PolyMap homogeneous_part(int d) const;
    PolyMap to_backend(Backend b) const;
    bool is_identity() const;

    friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.comps_ == b.comps_; }
    PolyMap operator+(const PolyMap& o) const;
    PolyMap operator-(const PolyMap& o) const;
    PolyMap scaled(const Scalar& c) const;

    /// Substitutes this map into p (space variables only); parameters of p
    /// are mapped to the parameters of this map.
    Poly pull_back(const Poly& p) const;
    Poly pull_back_truncated(const Poly& p, int order) const;

    std::string to_string() const;

private:
    std::vector<Poly> comps_;
};

bool near_equal(const PolyMap& a, const PolyMap& b, double tol = kDefaultTolerance);

/// (g o h)(z) = g(h(z)).
PolyMap compose(const PolyMap& g, const PolyMap& h);
/// Composition keeping terms of degree <= order in the space variables.
PolyMap compose_truncated(const PolyMap& g, const PolyMap& h, int order);

/// Matrix of partial derivatives D_j m_i in the space variables.
std::vector<std::vector<Poly>> jacobian_matrix(const PolyMap& m);
/// Determinant of a square matrix of polynomials (Laplace expansion).
Poly determinant(const std::vector<std::vector<Poly>>& M);
/// Determinant of the Jacobian matrix, expanded.
Poly jacobian_det(const PolyMap& m);
/// Numeric derivative matrix at a point, row-major n x n.
std::vector<Complex> jacobian_at(const PolyMap& m, const Point& z);

/// Polynomial vector field sum_i c_i d/dz_i.
class VectorField {
public:
    VectorField(std::vector<Poly> coefficients);
    static VectorField zero(std::size_t n, Backend b, std::size_t params = 0);

    std::size_t dim() const { return coeffs_.size(); }
    std::size_t num_vars() const { return coeffs_.front().num_vars(); }
    Backend backend() const { return coeffs_.front().backend(); }
    const std::vector<Poly>& coefficients() const { return coeffs_; }
    const Poly& operator[](std::size_t i) const { return coeffs_[i]; }

    bool is_zero() const;
    int degree() const;
    VectorField homogeneous_part(int d) const;
    VectorField truncated(int order) const;
    VectorField chopped(double tol = kDefaultTolerance) const;
    VectorField to_backend(Backend b) const;
    Point evaluate(const Point& z) const;

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;
    VectorField scaled(const Scalar& c) const;
    friend bool operator==(const VectorField& a, const VectorField& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string() const;

private:
    std::vector<Poly> coeffs_;
};

bool near_equal(const VectorField& a, const VectorField& b, double tol = kDefaultTolerance);

/// sum_i d c_i / d z_i.
Poly divergence(const VectorField& w);

/// A polynomial map recorded through total degree `order` (in the space
/// variables). `truncated` is set when an operation had to lower the order
/// of one of its operands.
struct Jet {
    PolyMap map;
    int order;
    bool truncated = false;

    static Jet of(const PolyMap& m, int order) { return Jet{m.truncated(order), order, false}; }
};

/// Jet composition g o h; the result order is min of the operand orders and
/// is flagged truncated when they differ.
Jet compose(const Jet& g, const Jet& h);

/// Order-by-order inverse of a jet with j(0) = 0 and invertible linear part:
/// returns g with g o j = identity through degree j.order.
/// Throws SingularMatrix for a singular linear part and Precondition for
/// j(0) != 0. Parameter variables are allowed when the linear part is the
/// identity (Schwarz-form families).
Jet jet_invert(const Jet& j);

/// Inverse of a polynomial automorphism, computed as a jet of order
/// deg^(n-1) and verified by composition. Throws NotAnAutomorphism if the
/// verification fails.
PolyMap invert_polymap(const PolyMap& f);

}  // namespace shearkit
