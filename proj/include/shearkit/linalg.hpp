#pragma once

#include <optional>
#include <vector>

#include "shearkit/scalar.hpp"

namespace shearkit {

using ScalarVec = std::vector<Scalar>;
using Point = std::vector<Complex>;

/// Dense matrix of backend-tagged scalars, row-major.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, Backend backend);
    static Matrix identity(std::size_t n, Backend backend);
    static Matrix from_rows(const std::vector<ScalarVec>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Backend backend() const { return backend_; }

    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Scalar v);

    Matrix operator*(const Matrix& o) const;
    ScalarVec apply(const ScalarVec& v) const;
    Point apply(const Point& v) const;
    Matrix transpose() const;

    Scalar determinant() const;
    /// Throws ErrorKind::SingularMatrix when not invertible.
    Matrix inverse() const;
    bool is_identity() const;

    Matrix to_backend(Backend b) const;
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_, cols_;
    Backend backend_;
    std::vector<Scalar> a_;
};

bool near_equal(const Matrix& a, const Matrix& b, double tol = kDefaultTolerance);

ScalarVec zeros(std::size_t n, Backend b);
ScalarVec unit_vector(std::size_t n, std::size_t i, Backend b);
ScalarVec to_backend(const ScalarVec& v, Backend b);
Point to_point(const ScalarVec& v);
Backend backend_of(const ScalarVec& v);

/// Incrementally maintained echelon basis; used to select linearly
/// independent candidates greedily in a fixed order (exact backend).
class IncrementalEchelon {
public:
    explicit IncrementalEchelon(std::size_t dim) : dim_(dim) {}
    /// Returns true (and records the vector) iff v is independent of the
    /// vectors accepted so far.
    bool try_add(const ScalarVec& v);
    std::size_t rank() const { return rows_.size(); }

private:
    std::size_t dim_;
    std::vector<ScalarVec> rows_;
    std::vector<std::size_t> pivots_;
};

/// Coordinates with respect to a fixed set of independent columns.
///
/// Built once per basis (exactly); solve() returns the coefficient vector c
/// with M c = w whenever w lies in the column span, together with the
/// residual w - M c (zero for exact inputs in the span).
class SpanSolver {
public:
    /// columns: r independent vectors of length m.
    explicit SpanSolver(std::vector<ScalarVec> columns);

    std::size_t rank() const { return columns_.size(); }
    std::size_t dim() const { return dim_; }

    struct Result {
        ScalarVec coefficients;
        ScalarVec residual;
    };
    Result solve(const ScalarVec& w) const;

private:
    std::size_t dim_;
    std::vector<ScalarVec> columns_;
    std::vector<std::size_t> pivot_rows_;
    std::optional<Matrix> left_inverse_;        // exact, r x r on pivot rows
    std::optional<Matrix> left_inverse_approx_;
};

}  // namespace shearkit
