#include "shearkit/polymap.hpp"

#include <sstream>

namespace shearkit {

PolyMap::PolyMap(std::vector<Poly> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw Error(ErrorKind::InvalidInput, "PolyMap needs at least one component");
    for (const auto& c : comps_) {
        if (c.num_vars() != comps_.front().num_vars())
            throw Error(ErrorKind::ArityMismatch, "PolyMap components have different num_vars");
        if (c.backend() != comps_.front().backend())
            throw Error(ErrorKind::BackendMismatch, "PolyMap components have different backends");
    }
    if (comps_.front().num_vars() < comps_.size())
        throw Error(ErrorKind::ArityMismatch, "PolyMap: fewer variables than components");
}

PolyMap PolyMap::identity(std::size_t n, Backend b, std::size_t params) {
    std::vector<Poly> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(Poly::variable(n + params, i, b));
    return PolyMap(std::move(c));
}

PolyMap PolyMap::linear(const Matrix& A, const ScalarVec& b) {
    const std::size_t n = A.rows();
    if (A.cols() != n || b.size() != n) throw Error(ErrorKind::ArityMismatch, "affine map shape mismatch");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < n; ++i) {
        Poly p = Poly::constant(n, b[i]);
        for (std::size_t j = 0; j < n; ++j) p.add_term(Monomial::unit(j), A(i, j));
        c.push_back(std::move(p));
    }
    return PolyMap(std::move(c));
}

int PolyMap::degree() const {
    int d = -1;
    for (const auto& c : comps_) d = std::max(d, c.degree_prefix(dim()));
    return d;
}

ScalarVec PolyMap::evaluate(const ScalarVec& z) const {
    ScalarVec r;
    for (const auto& c : comps_) r.push_back(c.evaluate(z));
    return r;
}

Point PolyMap::evaluate(const Point& z) const {
    Point r;
    for (const auto& c : comps_) r.push_back(c.evaluate(z));
    return r;
}

ScalarVec PolyMap::center() const {
    if (num_params() != 0) throw Error(ErrorKind::Precondition, "center of a parameterized map");
    ScalarVec r;
    for (const auto& c : comps_) r.push_back(c.constant_term());
    return r;
}

Matrix PolyMap::linear_part() const {
    if (num_params() != 0) throw Error(ErrorKind::Precondition, "linear part of a parameterized map");
    const std::size_t n = dim();
    Matrix A(n, n, backend());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A.set(i, j, comps_[i].coefficient(Monomial::unit(j)));
    return A;
}

PolyMap PolyMap::truncated(int order) const {
    std::vector<Poly> c;
    for (const auto& p : comps_) c.push_back(p.truncated_prefix(order, dim()));
    return PolyMap(std::move(c));
}

PolyMap PolyMap::homogeneous_part(int d) const {
    std::vector<Poly> c;
    for (const auto& p : comps_) c.push_back(p.homogeneous_part_prefix(d, dim()));
    return PolyMap(std::move(c));
}

PolyMap PolyMap::to_backend(Backend b) const {
    std::vector<Poly> c;
    for (const auto& p : comps_) c.push_back(p.to_backend(b));
    return PolyMap(std::move(c));
}

bool PolyMap::is_identity() const {
    return *this == identity(dim(), backend(), num_params());
}

PolyMap PolyMap::operator+(const PolyMap& o) const {
    if (dim() != o.dim()) throw Error(ErrorKind::ArityMismatch, "PolyMap sum dimension mismatch");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < dim(); ++i) c.push_back(comps_[i] + o.comps_[i]);
    return PolyMap(std::move(c));
}

PolyMap PolyMap::operator-(const PolyMap& o) const {
    if (dim() != o.dim()) throw Error(ErrorKind::ArityMismatch, "PolyMap difference dimension mismatch");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < dim(); ++i) c.push_back(comps_[i] - o.comps_[i]);
    return PolyMap(std::move(c));
}

PolyMap PolyMap::scaled(const Scalar& s) const {
    std::vector<Poly> c;
    for (const auto& p : comps_) c.push_back(p * s);
    return PolyMap(std::move(c));
}

namespace {

std::vector<Poly> substitution(const PolyMap& h, std::size_t target_vars) {
    std::vector<Poly> subs = h.components();
    const std::size_t params = target_vars - h.dim();
    if (params != h.num_params())
        throw Error(ErrorKind::ArityMismatch, "composition: parameter counts differ");
    for (std::size_t k = 0; k < params; ++k) subs.push_back(Poly::variable(h.num_vars(), h.dim() + k, h.backend()));
    return subs;
}

}  // namespace

Poly PolyMap::pull_back(const Poly& p) const { return p.compose(substitution(*this, p.num_vars())); }

Poly PolyMap::pull_back_truncated(const Poly& p, int order) const {
    return p.compose_truncated(substitution(*this, p.num_vars()), order, dim());
}

std::string PolyMap::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < comps_.size(); ++i) os << (i ? ", " : "") << comps_[i].to_string();
    os << ")";
    return os.str();
}

bool near_equal(const PolyMap& a, const PolyMap& b, double tol) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!near_equal(a[i], b[i], tol)) return false;
    return true;
}

PolyMap compose(const PolyMap& g, const PolyMap& h) {
    if (g.dim() != h.dim()) throw Error(ErrorKind::ArityMismatch, "compose: dimension mismatch");
    std::vector<Poly> c;
    for (const auto& p : g.components()) c.push_back(h.pull_back(p));
    return PolyMap(std::move(c));
}

PolyMap compose_truncated(const PolyMap& g, const PolyMap& h, int order) {
    if (g.dim() != h.dim()) throw Error(ErrorKind::ArityMismatch, "compose: dimension mismatch");
    std::vector<Poly> c;
    for (const auto& p : g.components()) c.push_back(h.pull_back_truncated(p, order));
    return PolyMap(std::move(c));
}

std::vector<std::vector<Poly>> jacobian_matrix(const PolyMap& m) {
    std::vector<std::vector<Poly>> J;
    for (const auto& c : m.components()) {
        std::vector<Poly> row;
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(c.derivative(j));
        J.push_back(std::move(row));
    }
    return J;
}

namespace {

Poly det_expand(const std::vector<std::vector<Poly>>& M, std::vector<std::size_t>& cols, std::size_t row) {
    if (row == M.size()) return Poly::constant(M[0][0].num_vars(), Scalar::one(M[0][0].backend()));
    Poly sum(M[0][0].num_vars(), M[0][0].backend());
    bool negative = false;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const std::size_t c = cols[k];
        if (!M[row][c].is_zero()) {
            cols.erase(cols.begin() + static_cast<long>(k));
            Poly minor = det_expand(M, cols, row + 1);
            cols.insert(cols.begin() + static_cast<long>(k), c);
            Poly term = M[row][c] * minor;
            if (negative) sum -= term;
            else sum += term;
        }
        negative = !negative;
    }
    return sum;
}

}  // namespace

Poly determinant(const std::vector<std::vector<Poly>>& M) {
    if (M.empty() || M.size() != M[0].size()) throw Error(ErrorKind::ArityMismatch, "determinant of a non-square matrix");
    std::vector<std::size_t> cols(M.size());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    return det_expand(M, cols, 0);
}

Poly jacobian_det(const PolyMap& m) { return determinant(jacobian_matrix(m)); }

std::vector<Complex> jacobian_at(const PolyMap& m, const Point& z) {
    const std::size_t n = m.dim();
    std::vector<Complex> J(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) J[i * n + j] = m[i].derivative(j).evaluate(z);
    return J;
}

VectorField::VectorField(std::vector<Poly> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "VectorField needs at least one coefficient");
    for (const auto& c : coeffs_) {
        if (c.num_vars() != coeffs_.front().num_vars())
            throw Error(ErrorKind::ArityMismatch, "VectorField coefficients have different num_vars");
        if (c.backend() != coeffs_.front().backend())
            throw Error(ErrorKind::BackendMismatch, "VectorField coefficients have different backends");
    }
    if (coeffs_.front().num_vars() < coeffs_.size())
        throw Error(ErrorKind::ArityMismatch, "VectorField: coefficient count exceeds num_vars");
}

VectorField VectorField::zero(std::size_t n, Backend b, std::size_t params) {
    return VectorField(std::vector<Poly>(n, Poly(n + params, b)));
}

bool VectorField::is_zero() const {
    for (const auto& c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

int VectorField::degree() const {
    int d = -1;
    for (const auto& c : coeffs_) d = std::max(d, c.degree_prefix(dim()));
    return d;
}

VectorField VectorField::homogeneous_part(int d) const {
    std::vector<Poly> c;
    for (const auto& p : coeffs_) c.push_back(p.homogeneous_part_prefix(d, dim()));
    return VectorField(std::move(c));
}

VectorField VectorField::truncated(int order) const {
    std::vector<Poly> c;
    for (const auto& p : coeffs_) c.push_back(p.truncated_prefix(order, dim()));
    return VectorField(std::move(c));
}

VectorField VectorField::chopped(double tol) const {
    std::vector<Poly> c;
    for (const auto& p : coeffs_) c.push_back(p.chopped(tol));
    return VectorField(std::move(c));
}

VectorField VectorField::to_backend(Backend b) const {
    std::vector<Poly> c;
    for (const auto& p : coeffs_) c.push_back(p.to_backend(b));
    return VectorField(std::move(c));
}

Point VectorField::evaluate(const Point& z) const {
    Point r;
    for (const auto& c : coeffs_) r.push_back(c.evaluate(z));
    return r;
}

VectorField VectorField::operator+(const VectorField& o) const {
    if (dim() != o.dim()) throw Error(ErrorKind::ArityMismatch, "VectorField sum dimension mismatch");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < dim(); ++i) c.push_back(coeffs_[i] + o.coeffs_[i]);
    return VectorField(std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const {
    if (dim() != o.dim()) throw Error(ErrorKind::ArityMismatch, "VectorField difference dimension mismatch");
    std::vector<Poly> c;
    for (std::size_t i = 0; i < dim(); ++i) c.push_back(coeffs_[i] - o.coeffs_[i]);
    return VectorField(std::move(c));
}

VectorField VectorField::scaled(const Scalar& s) const {
    std::vector<Poly> c;
    for (const auto& p : coeffs_) c.push_back(p * s);
    return VectorField(std::move(c));
}

std::string VectorField::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        os << (first ? "" : " + ") << "[" << coeffs_[i].to_string() << "] d/dz" << (i + 1);
        first = false;
    }
    return first ? "0" : os.str();
}

bool near_equal(const VectorField& a, const VectorField& b, double tol) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!near_equal(a[i], b[i], tol)) return false;
    return true;
}

Poly divergence(const VectorField& w) {
    Poly d(w.num_vars(), w.backend());
    for (std::size_t i = 0; i < w.dim(); ++i) d += w[i].derivative(i);
    return d;
}

Jet compose(const Jet& g, const Jet& h) {
    const int order = std::min(g.order, h.order);
    Jet r{compose_truncated(g.map, h.map, order), order, g.truncated || h.truncated || g.order != h.order};
    return r;
}

Jet jet_invert(const Jet& j) {
    const PolyMap& f = j.map;
    const std::size_t n = f.dim();
    const Backend b = f.backend();
    for (const auto& c : f.components())
        if (!c.homogeneous_part_prefix(0, n).is_zero())
            throw Error(ErrorKind::Precondition, "jet_invert: jet does not fix the origin");

    // g starts as the inverse of the linear part.
    PolyMap lin = f.homogeneous_part(1);
    PolyMap inv_lin = PolyMap::identity(n, b, f.num_params());
    if (!(lin == inv_lin)) {
        if (f.num_params() != 0)
            throw Error(ErrorKind::Precondition, "jet_invert: parameterized jets need identity linear part");
        Matrix Ainv = f.linear_part().inverse();
        inv_lin = PolyMap::linear(Ainv, zeros(n, b));
    }
    PolyMap g = inv_lin;
    for (int d = 2; d <= j.order; ++d) {
        PolyMap r = compose_truncated(g, f, d);
        PolyMap err = r.homogeneous_part(d);
        bool clean = true;
        for (const auto& c : err.components()) clean = clean && c.is_zero();
        if (clean) continue;
        // (g + delta) o f gains delta(A z) in degree d; choose delta = -err o A^{-1}.
        g = g - compose(err, inv_lin);
    }
    return Jet{g, j.order, j.truncated};
}

PolyMap invert_polymap(const PolyMap& f) {
    if (f.num_params() != 0) throw Error(ErrorKind::Precondition, "invert_polymap: parameterized map");
    const std::size_t n = f.dim();
    const Backend b = f.backend();
    const int d = std::max(1, f.degree());
    long order = 1;
    for (std::size_t k = 1; k < n; ++k) order *= d;
    if (order > 4096) throw Error(ErrorKind::Unsupported, "invert_polymap: inverse degree bound too large");

    ScalarVec a = f.center();
    ScalarVec minus_a;
    for (const auto& x : a) minus_a.push_back(-x);
    PolyMap shift_back = PolyMap::linear(Matrix::identity(n, b), minus_a);
    PolyMap f0 = f - PolyMap::linear(Matrix(n, n, b), a);
    PolyMap g0 = jet_invert(Jet{f0, static_cast<int>(order), false}).map;
    PolyMap g = compose(g0, shift_back);

    const PolyMap id = PolyMap::identity(n, b);
    const bool ok = b == Backend::exact ? (compose(f, g) == id && compose(g, f) == id)
                                        : (near_equal(compose(f, g), id, 1e-8) && near_equal(compose(g, f), id, 1e-8));
    if (!ok) throw Error(ErrorKind::NotAnAutomorphism, "map has no polynomial inverse of the expected degree");
    return g;
}

}  // namespace shearkit
