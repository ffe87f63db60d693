#include "shearkit/linalg.hpp"

namespace shearkit {

Matrix::Matrix(std::size_t rows, std::size_t cols, Backend backend)
    : rows_(rows), cols_(cols), backend_(backend), a_(rows * cols, Scalar::zero(backend)) {}

Matrix Matrix::identity(std::size_t n, Backend backend) {
    Matrix m(n, n, backend);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = Scalar::one(backend);
    return m;
}

Matrix Matrix::from_rows(const std::vector<ScalarVec>& rows) {
    if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    Matrix m(rows.size(), rows.front().size(), rows.front().front().backend());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw Error(ErrorKind::InvalidInput, "ragged matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

void Matrix::set(std::size_t i, std::size_t j, Scalar v) {
    if (v.backend() != backend_) throw Error(ErrorKind::BackendMismatch, "matrix entry backend mismatch");
    a_[i * cols_ + j] = std::move(v);
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw Error(ErrorKind::ArityMismatch, "matrix product shape mismatch");
    if (backend_ != o.backend_) throw Error(ErrorKind::BackendMismatch, "matrix product backend mismatch");
    Matrix r(rows_, o.cols_, backend_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& aik = (*this)(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r.a_[i * o.cols_ + j] += aik * o(k, j);
        }
    return r;
}

ScalarVec Matrix::apply(const ScalarVec& v) const {
    if (v.size() != cols_) throw Error(ErrorKind::ArityMismatch, "matrix-vector shape mismatch");
    ScalarVec r(rows_, Scalar::zero(backend_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

Point Matrix::apply(const Point& v) const {
    if (v.size() != cols_) throw Error(ErrorKind::ArityMismatch, "matrix-vector shape mismatch");
    Point r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j).to_complex() * v[j];
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_, backend_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.a_[j * rows_ + i] = (*this)(i, j);
    return r;
}

namespace {

// Pivot choice: first nonzero for exact, largest magnitude for approximate.
std::optional<std::size_t> choose_pivot(const std::vector<Scalar>& a, std::size_t n, std::size_t col,
                                        std::size_t from, Backend b) {
    std::optional<std::size_t> best;
    double best_abs = 0.0;
    for (std::size_t r = from; r < n; ++r) {
        const Scalar& x = a[r * n + col];
        if (x.is_zero()) continue;
        if (b == Backend::exact) return r;
        if (x.abs() > best_abs) {
            best_abs = x.abs();
            best = r;
        }
    }
    return best;
}

}  // namespace

Scalar Matrix::determinant() const {
    if (rows_ != cols_) throw Error(ErrorKind::ArityMismatch, "determinant of a non-square matrix");
    const std::size_t n = rows_;
    std::vector<Scalar> a = a_;
    Scalar det = Scalar::one(backend_);
    for (std::size_t c = 0; c < n; ++c) {
        auto p = choose_pivot(a, n, c, c, backend_);
        if (!p) return Scalar::zero(backend_);
        if (*p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[*p * n + j]);
            det = -det;
        }
        const Scalar piv = a[c * n + c];
        det *= piv;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r * n + c].is_zero()) continue;
            Scalar f = a[r * n + c] / piv;
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return det;
}

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw Error(ErrorKind::ArityMismatch, "inverse of a non-square matrix");
    const std::size_t n = rows_;
    std::vector<Scalar> a = a_;
    Matrix inv = identity(n, backend_);
    for (std::size_t c = 0; c < n; ++c) {
        auto p = choose_pivot(a, n, c, c, backend_);
        if (!p) throw Error(ErrorKind::SingularMatrix, "matrix is singular");
        if (*p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[c * n + j], a[*p * n + j]);
                std::swap(inv.a_[c * n + j], inv.a_[*p * n + j]);
            }
        const Scalar piv = a[c * n + c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c * n + j] /= piv;
            inv.a_[c * n + j] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r * n + c].is_zero()) continue;
            Scalar f = a[r * n + c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r * n + j] -= f * a[c * n + j];
                inv.a_[r * n + j] -= f * inv.a_[c * n + j];
            }
        }
    }
    return inv;
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const Scalar& x = (*this)(i, j);
            if (i == j ? !x.is_one() : !x.is_zero()) return false;
        }
    return true;
}

Matrix Matrix::to_backend(Backend b) const {
    if (b == backend_) return *this;
    Matrix r(rows_, cols_, b);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k].to_backend(b);
    return r;
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.backend_ == b.backend_ && a.a_ == b.a_;
}

bool near_equal(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j).to_complex() - b(i, j).to_complex()) > tol) return false;
    if (a.backend() == Backend::exact && b.backend() == Backend::exact) return a == b;
    return true;
}

ScalarVec zeros(std::size_t n, Backend b) { return ScalarVec(n, Scalar::zero(b)); }

ScalarVec unit_vector(std::size_t n, std::size_t i, Backend b) {
    ScalarVec v = zeros(n, b);
    v[i] = Scalar::one(b);
    return v;
}

ScalarVec to_backend(const ScalarVec& v, Backend b) {
    ScalarVec r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(x.to_backend(b));
    return r;
}

Point to_point(const ScalarVec& v) {
    Point p;
    p.reserve(v.size());
    for (const auto& x : v) p.push_back(x.to_complex());
    return p;
}

Backend backend_of(const ScalarVec& v) {
    if (v.empty()) throw Error(ErrorKind::InvalidInput, "empty vector has no backend");
    Backend b = v.front().backend();
    for (const auto& x : v)
        if (x.backend() != b) throw Error(ErrorKind::BackendMismatch, "vector mixes backends");
    return b;
}

bool IncrementalEchelon::try_add(const ScalarVec& v) {
    if (v.size() != dim_) throw Error(ErrorKind::ArityMismatch, "echelon: wrong vector length");
    ScalarVec r = v;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const std::size_t p = pivots_[k];
        if (r[p].is_zero()) continue;
        Scalar f = r[p];  // rows are normalized to pivot 1
        for (std::size_t j = p; j < dim_; ++j)
            if (!rows_[k][j].is_zero()) r[j] -= f * rows_[k][j];
    }
    std::size_t p = 0;
    while (p < dim_ && r[p].is_zero()) ++p;
    if (p == dim_) return false;
    Scalar piv = r[p];
    for (std::size_t j = p; j < dim_; ++j) r[j] /= piv;
    // Keep earlier rows reduced in the new pivot column so reduction order stays valid.
    for (auto& row : rows_) {
        if (row[p].is_zero()) continue;
        Scalar f = row[p];
        for (std::size_t j = p; j < dim_; ++j) row[j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
}

SpanSolver::SpanSolver(std::vector<ScalarVec> columns) : dim_(0), columns_(std::move(columns)) {
    if (columns_.empty()) return;
    dim_ = columns_.front().size();
    const std::size_t r = columns_.size();
    const Backend b = columns_.front().front().backend();
    // Independent rows of M = independent columns of M^T: scan rows in order.
    IncrementalEchelon rows_echelon(r);
    for (std::size_t i = 0; i < dim_ && pivot_rows_.size() < r; ++i) {
        ScalarVec row(r, Scalar::zero(b));
        for (std::size_t j = 0; j < r; ++j) row[j] = columns_[j][i];
        if (rows_echelon.try_add(row)) pivot_rows_.push_back(i);
    }
    if (pivot_rows_.size() != r) throw Error(ErrorKind::Internal, "SpanSolver: columns are dependent");
    Matrix sub(r, r, b);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t j = 0; j < r; ++j) sub.set(a, j, columns_[j][pivot_rows_[a]]);
    left_inverse_ = sub.inverse();
    left_inverse_approx_ = left_inverse_->to_backend(Backend::approx);
}

SpanSolver::Result SpanSolver::solve(const ScalarVec& w) const {
    if (w.size() != dim_) throw Error(ErrorKind::ArityMismatch, "SpanSolver: wrong vector length");
    const Backend b = backend_of(w);
    const std::size_t r = columns_.size();
    Result res{zeros(r, b), w};
    if (r == 0) return res;
    const Matrix& inv = (b == Backend::exact) ? *left_inverse_ : *left_inverse_approx_;
    for (std::size_t a = 0; a < r; ++a) {
        Scalar s = Scalar::zero(b);
        for (std::size_t k = 0; k < r; ++k) {
            const Scalar& wk = w[pivot_rows_[k]];
            if (!wk.is_zero()) s += inv(a, k) * wk;
        }
        res.coefficients[a] = s;
    }
    for (std::size_t j = 0; j < r; ++j) {
        const Scalar& c = res.coefficients[j];
        if (c.is_zero()) continue;
        Scalar cj = c;
        for (std::size_t i = 0; i < dim_; ++i) {
            const Scalar& mij = columns_[j][i];
            if (mij.is_zero()) continue;
            res.residual[i] -= (b == Backend::exact ? mij : mij.to_backend(b)) * cj;
        }
    }
    return res;
}

}  // namespace shearkit
