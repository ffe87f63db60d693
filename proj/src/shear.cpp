#include "shearkit/shear.hpp"

#include <sstream>

namespace shearkit {

const char* to_string(ShearKind k) {
    switch (k) {
        case ShearKind::additive: return "additive";
        case ShearKind::multiplicative: return "multiplicative";
        case ShearKind::affine: return "affine";
    }
    return "?";
}

namespace {

std::vector<Complex> to_complex(const Matrix& M) {
    std::vector<Complex> r;
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(M(i, j).to_complex());
    return r;
}

Point mat_vec(const std::vector<Complex>& M, const Point& v) {
    const std::size_t n = v.size();
    Point r(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i] += M[i * n + j] * v[j];
    return r;
}

std::vector<Complex> mat_mul(const std::vector<Complex>& A, const std::vector<Complex>& B, std::size_t n) {
    std::vector<Complex> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = A[i * n + k];
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) r[i * n + j] += a * B[k * n + j];
        }
    return r;
}

std::vector<Complex> identity_c(std::size_t n) {
    std::vector<Complex> r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) r[i * n + i] = 1.0;
    return r;
}

// Rows of M applied to the polynomial vector R.
std::vector<Poly> lin_combo(const Matrix& M, const std::vector<Poly>& R) {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Poly p(R.front().num_vars(), R.front().backend());
        for (std::size_t j = 0; j < M.cols(); ++j)
            if (!M(i, j).is_zero()) p += R[j] * M(i, j);
        out.push_back(std::move(p));
    }
    return out;
}

unsigned long factorial(int m) {
    unsigned long r = 1;
    for (int i = 2; i <= m; ++i) r *= static_cast<unsigned long>(i);
    return r;
}

}  // namespace

ShearGen::ShearGen(ShearKind k, Matrix M, Poly f, Scalar t, ScalarVec b)
    : kind_(k), M_(std::move(M)), Minv_(M_), f_(std::move(f)), t_(std::move(t)), b_(std::move(b)) {
    const std::size_t n = M_.rows();
    if (M_.cols() != n) throw Error(ErrorKind::ArityMismatch, "generator matrix must be square");
    if (f_.backend() != M_.backend() || t_.backend() != M_.backend() || backend_of(b_) != M_.backend())
        throw Error(ErrorKind::BackendMismatch, "generator data mixes backends");
    if (b_.size() != n) throw Error(ErrorKind::ArityMismatch, "generator translation has wrong length");
    if (k != ShearKind::affine) {
        if (n < 2) throw Error(ErrorKind::Precondition, "shears need n >= 2");
        if (f_.num_vars() != n - 1) throw Error(ErrorKind::ArityMismatch, "shear profile must have n-1 variables");
    }
    Minv_ = M_.inverse();
    Mc_ = shearkit::to_complex(M_);
    Minvc_ = shearkit::to_complex(Minv_);
    bc_ = to_point(b_);
    tc_ = t_.to_complex();
    detc_ = k == ShearKind::affine ? M_.determinant().to_complex() : Complex(1.0);
    if (k != ShearKind::affine)
        for (std::size_t j = 0; j + 1 < n; ++j) df_.push_back(f_.derivative(j));
}

ShearGen ShearGen::additive(Matrix L, Poly f, Scalar t) {
    const std::size_t n = L.rows();
    const Backend b = L.backend();
    return ShearGen(ShearKind::additive, std::move(L), std::move(f), std::move(t), zeros(n, b));
}

ShearGen ShearGen::multiplicative(Matrix L, Poly f, Scalar t) {
    const std::size_t n = L.rows();
    const Backend b = L.backend();
    return ShearGen(ShearKind::multiplicative, std::move(L), std::move(f), std::move(t), zeros(n, b));
}

ShearGen ShearGen::affine(Matrix A, ScalarVec b) {
    const Backend bk = A.backend();
    const std::size_t n = A.rows();
    return ShearGen(ShearKind::affine, std::move(A), Poly(n, bk), Scalar::zero(bk), std::move(b));
}

ShearGen ShearGen::inverse() const {
    if (kind_ == ShearKind::affine) {
        ScalarVec nb = Minv_.apply(b_);
        for (auto& x : nb) x = -x;
        return affine(Minv_, nb);
    }
    return ShearGen(kind_, M_, f_, -t_, b_);
}

bool ShearGen::is_identity() const {
    if (kind_ == ShearKind::affine) {
        for (const auto& x : b_)
            if (!x.is_zero()) return false;
        return M_.is_identity();
    }
    return t_.is_zero() || f_.is_zero();
}

bool ShearGen::is_linear() const {
    return kind_ == ShearKind::affine || t_.is_zero() || f_.degree() <= 0;
}

Point ShearGen::apply(const Point& z) const { return apply_with_time(z, tc_, nullptr); }

Point ShearGen::apply(const Point& z, std::vector<Complex>& J) const { return apply_with_time(z, tc_, &J); }

Point ShearGen::apply_with_time(const Point& z, Complex t, std::vector<Complex>* J) const {
    const std::size_t n = dim();
    if (z.size() != n) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
    if (kind_ == ShearKind::affine) {
        if (J) *J = mat_mul(Mc_, *J, n);
        Point r = mat_vec(Mc_, z);
        for (std::size_t i = 0; i < n; ++i) r[i] += bc_[i];
        return r;
    }
    Point w = mat_vec(Minvc_, z);
    std::span<const Complex> wp(w.data(), n - 1);
    const Complex fw = f_.evaluate(wp);
    if (!J) {
        if (kind_ == ShearKind::additive) w[n - 1] += t * fw;
        else w[n - 1] *= std::exp(t * fw);
        return mat_vec(Mc_, w);
    }
    std::vector<Complex> D = identity_c(n);
    if (kind_ == ShearKind::additive) {
        for (std::size_t j = 0; j + 1 < n; ++j) D[(n - 1) * n + j] = t * df_[j].evaluate(wp);
        w[n - 1] += t * fw;
    } else {
        const Complex e = std::exp(t * fw);
        for (std::size_t j = 0; j + 1 < n; ++j) D[(n - 1) * n + j] = w[n - 1] * e * t * df_[j].evaluate(wp);
        D[(n - 1) * n + (n - 1)] = e;
        w[n - 1] *= e;
    }
    *J = mat_mul(Mc_, mat_mul(D, mat_mul(Minvc_, *J, n), n), n);
    return mat_vec(Mc_, w);
}

Complex ShearGen::jacobian_log_det_at(const Point& z, Complex t) const {
    if (kind_ == ShearKind::additive) return 0.0;
    if (kind_ == ShearKind::affine) return std::log(detc_);
    const Point w = mat_vec(Minvc_, z);
    return t * f_.evaluate(std::span<const Complex>(w.data(), dim() - 1));
}

ScalarVec ShearGen::apply(const ScalarVec& z) const {
    const std::size_t n = dim();
    if (z.size() != n) throw Error(ErrorKind::ArityMismatch, "point has wrong dimension");
    if (kind_ == ShearKind::affine) {
        ScalarVec r = M_.apply(z);
        for (std::size_t i = 0; i < n; ++i) r[i] += b_[i];
        return r;
    }
    ScalarVec w = Minv_.apply(z);
    Scalar fw = f_.evaluate(std::span<const Scalar>(w.data(), n - 1));
    if (kind_ == ShearKind::additive) w[n - 1] += t_ * fw;
    else w[n - 1] *= exp(t_ * fw);
    return M_.apply(w);
}

PolyMap ShearGen::apply_jet(const PolyMap& R, int k) const {
    const std::size_t n = dim();
    if (R.dim() != n) throw Error(ErrorKind::ArityMismatch, "jet has wrong dimension");
    auto trunc = [&](const Poly& p) { return k >= 0 ? p.truncated_prefix(k, n) : p; };
    if (kind_ == ShearKind::affine) {
        std::vector<Poly> c = lin_combo(M_, R.components());
        for (std::size_t i = 0; i < n; ++i) c[i] = trunc(c[i] + Poly::constant(R.num_vars(), b_[i]));
        return PolyMap(std::move(c));
    }
    std::vector<Poly> w = lin_combo(Minv_, R.components());
    std::vector<Poly> wp(w.begin(), w.end() - 1);
    Poly s = (k >= 0 ? f_.compose_truncated(wp, k, n) : f_.compose(wp)) * t_;
    if (kind_ == ShearKind::additive) {
        w[n - 1] += s;
    } else {
        Poly s0 = s.homogeneous_part_prefix(0, n);
        if (!s0.is_constant()) throw Error(ErrorKind::Unsupported, "multiplicative shear with parameter-dependent exponent");
        const Scalar e0 = exp(s0.constant_term());
        Poly ds = s - s0;
        if (k < 0 && !ds.is_zero())
            throw Error(ErrorKind::Transcendental, "multiplicative shear has no polynomial form");
        Poly E = Poly::constant(R.num_vars(), Scalar::one(R.backend()));
        Poly term = E;
        for (int m = 1; m <= k && !ds.is_zero(); ++m) {
            term = Poly::mul_truncated(term, ds, k, n);
            if (term.is_zero()) break;
            E += term * Scalar::ratio(1, static_cast<long>(factorial(m)), R.backend());
        }
        w[n - 1] = (k >= 0 ? Poly::mul_truncated(E, w[n - 1], k, n) : E * w[n - 1]) * e0;
    }
    std::vector<Poly> c = lin_combo(M_, w);
    for (auto& p : c) p = trunc(p);
    return PolyMap(std::move(c));
}

PolyMap ShearGen::as_polymap() const {
    return apply_jet(PolyMap::identity(dim(), backend()), -1);
}

const char* to_string(GroupTag g) {
    switch (g) {
        case GroupTag::aut: return "Aut";
        case GroupTag::aut1: return "Aut1";
        case GroupTag::aut_sp: return "AutSp";
        case GroupTag::aut_alg: return "AutAlg";
        case GroupTag::aut_alg1: return "AutAlg1";
        case GroupTag::aut_alg_sp: return "AutAlgSp";
    }
    return "?";
}

GroupTag parse_group_tag(const std::string& s) {
    for (GroupTag g : {GroupTag::aut, GroupTag::aut1, GroupTag::aut_sp, GroupTag::aut_alg, GroupTag::aut_alg1,
                       GroupTag::aut_alg_sp})
        if (s == to_string(g)) return g;
    throw Error(ErrorKind::InvalidInput, "unknown group tag '" + s + "'");
}

bool is_volume_tag(GroupTag g) { return g == GroupTag::aut1 || g == GroupTag::aut_alg1; }
bool is_symplectic_tag(GroupTag g) { return g == GroupTag::aut_sp || g == GroupTag::aut_alg_sp; }
bool is_algebraic_tag(GroupTag g) {
    return g == GroupTag::aut_alg || g == GroupTag::aut_alg1 || g == GroupTag::aut_alg_sp;
}

Matrix symplectic_form(std::size_t n, Backend b) {
    if (n % 2 != 0) throw Error(ErrorKind::Precondition, "symplectic form needs even dimension");
    Matrix J(n, n, b);
    for (std::size_t j = 0; j < n; j += 2) {
        J.set(j, j + 1, Scalar::one(b));
        J.set(j + 1, j, -Scalar::one(b));
    }
    return J;
}

bool linear_in_group(const Matrix& A, GroupTag tag, double tol) {
    if (is_volume_tag(tag)) return near_equal(A.determinant(), Scalar::one(A.backend()), tol);
    if (is_symplectic_tag(tag)) {
        if (A.rows() % 2 != 0) return false;
        Matrix J = symplectic_form(A.rows(), A.backend());
        return near_equal(A.transpose() * J * A, J, tol);
    }
    return !A.determinant().is_zero();
}

bool preserves_symplectic_form(const PolyMap& m, double tol) {
    const std::size_t n = m.dim();
    if (n % 2 != 0) return false;
    auto D = jacobian_matrix(m);
    Matrix J = symplectic_form(n, m.backend());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) {
            Poly s(m.num_vars(), m.backend());
            for (std::size_t j = 0; j < n; j += 2) s += D[j][a] * D[j + 1][c] - D[j + 1][a] * D[j][c];
            s -= Poly::constant(m.num_vars(), J(a, c));
            if (!near_equal(s, Poly(m.num_vars(), m.backend()), tol)) return false;
        }
    return true;
}

std::optional<std::string> generator_violation(const ShearGen& g, GroupTag tag) {
    if (g.is_identity()) return std::nullopt;
    const double tol = 1e-9;
    if (g.kind() == ShearKind::multiplicative) {
        if (is_volume_tag(tag) || is_symplectic_tag(tag))
            return std::string("multiplicative shear in a ") + to_string(tag) + " word";
        if (is_algebraic_tag(tag) && !g.is_linear())
            return std::string("multiplicative shear with non-constant profile in an algebraic word");
        return std::nullopt;
    }
    if (g.kind() == ShearKind::affine) {
        if (!linear_in_group(g.matrix(), tag, tol))
            return std::string("affine part outside the linear subgroup of ") + to_string(tag);
        return std::nullopt;
    }
    if (is_volume_tag(tag) && !near_equal(g.matrix().determinant(), Scalar::one(g.backend()), tol))
        return std::string("additive shear conjugator without unit determinant");
    if (is_symplectic_tag(tag) && !preserves_symplectic_form(g.as_polymap(), tol))
        return std::string("additive shear does not preserve the symplectic form");
    return std::nullopt;
}

ShearWord::ShearWord(std::size_t n, Backend b, GroupTag tag) : n_(n), backend_(b), tag_(tag) {}

ShearWord::ShearWord(std::size_t n, Backend b, GroupTag tag, std::vector<ShearGen> gens)
    : n_(n), backend_(b), tag_(tag) {
    for (auto& g : gens) push_back(std::move(g));
}

void ShearWord::check(const ShearGen& g) const {
    if (g.dim() != n_) throw Error(ErrorKind::ArityMismatch, "generator dimension differs from word");
    if (g.backend() != backend_) throw Error(ErrorKind::BackendMismatch, "generator backend differs from word");
    if (auto why = generator_violation(g, tag_)) throw Error(ErrorKind::Precondition, *why, to_string(g));
}

void ShearWord::push_back(ShearGen g) {
    check(g);
    gens_.push_back(std::move(g));
}

void ShearWord::append(const ShearWord& w) {
    for (const auto& g : w.generators()) push_back(g);
}

ShearWord ShearWord::to_backend(Backend b) const {
    if (b == backend_) return *this;
    ShearWord r(n_, b, tag_);
    for (const auto& g : gens_) {
        if (g.kind() == ShearKind::affine)
            r.push_back(ShearGen::affine(g.matrix().to_backend(b), shearkit::to_backend(g.translation(), b)));
        else if (g.kind() == ShearKind::additive)
            r.push_back(ShearGen::additive(g.matrix().to_backend(b), g.profile().to_backend(b), g.time().to_backend(b)));
        else
            r.push_back(ShearGen::multiplicative(g.matrix().to_backend(b), g.profile().to_backend(b), g.time().to_backend(b)));
    }
    return r;
}

ShearWord ShearWord::with_tag(GroupTag tag) const { return ShearWord(n_, backend_, tag, gens_); }

ShearWord concat(const ShearWord& w1, const ShearWord& w2) {
    ShearWord r = w1;
    r.append(w2);
    return r;
}

Point eval_word(const ShearWord& w, const Point& z) {
    Point r = z;
    for (const auto& g : w.generators()) r = g.apply(r);
    return r;
}

Point eval_word(const ShearWord& w, const Point& z, std::vector<Complex>& J) {
    Point r = z;
    for (const auto& g : w.generators()) r = g.apply(r, J);
    return r;
}

ScalarVec eval_word(const ShearWord& w, const ScalarVec& z) {
    ScalarVec r = z;
    for (const auto& g : w.generators()) r = g.apply(r);
    return r;
}

ShearWord invert_word(const ShearWord& w) {
    ShearWord r(w.dim(), w.backend(), w.tag());
    for (auto it = w.generators().rbegin(); it != w.generators().rend(); ++it) r.push_back(it->inverse());
    return r;
}

Jet word_jet(const ShearWord& w, int k) {
    PolyMap R = PolyMap::identity(w.dim(), w.backend()).truncated(k);
    for (const auto& g : w.generators()) R = g.apply_jet(R, k);
    return Jet{R, k, false};
}

PolyMap word_polymap(const ShearWord& w) {
    PolyMap R = PolyMap::identity(w.dim(), w.backend());
    for (const auto& g : w.generators()) R = g.apply_jet(R, -1);
    return R;
}

Scalar require_constant_jacobian(const PolyMap& F) {
    Poly d = jacobian_det(F).chopped();
    if (d.degree() > 0) throw Error(ErrorKind::NonConstantJacobian, "Jacobian determinant is not constant", d.to_string());
    if (d.is_zero()) throw Error(ErrorKind::NotAnAutomorphism, "Jacobian determinant vanishes identically", "0");
    return d.constant_term();
}

SchwarzDecomposition schwarz_normalize(const PolyMap& F, GroupTag tag) {
    require_constant_jacobian(F);
    if (!linear_in_group(F.linear_part(), tag, 1e-9))
        throw Error(ErrorKind::Precondition, std::string("linear part outside the linear subgroup of ") + to_string(tag));
    return schwarz_split(F);
}

SchwarzDecomposition schwarz_split(const PolyMap& F) {
    ScalarVec a = F.center();
    Matrix A = F.linear_part();
    const std::size_t n = F.dim();
    std::vector<Poly> shifted;
    for (std::size_t i = 0; i < n; ++i) shifted.push_back(F[i] - Poly::constant(F.num_vars(), a[i]));
    PolyMap H(lin_combo(A.inverse(), shifted));
    return {a, A, H};
}

SchwarzDecomposition schwarz_normalize(const ShearWord& w) {
    Jet j = word_jet(w, 1);
    ScalarVec a;
    for (const auto& c : j.map.components()) a.push_back(c.constant_term());
    Matrix A(w.dim(), w.dim(), w.backend());
    for (std::size_t i = 0; i < w.dim(); ++i)
        for (std::size_t k = 0; k < w.dim(); ++k) A.set(i, k, j.map[i].coefficient(Monomial::unit(k)));
    Matrix Ainv = A.inverse();
    ScalarVec nb = Ainv.apply(a);
    for (auto& x : nb) x = -x;
    ShearWord H = w;
    H.push_back(ShearGen::affine(Ainv, nb));
    return {a, A, H};
}

PolyMap scaling_curve(const PolyMap& phi, const Scalar& s) {
    const std::size_t n = phi.dim();
    std::vector<Poly> out;
    for (const auto& c : phi.components()) {
        Poly p(c.num_vars(), c.backend());
        for (const auto& [m, coef] : c.terms()) {
            const int d = m.degree_prefix(n);
            p.add_term(m, d == 0 ? coef * s : coef * s.pow(static_cast<unsigned>(d - 1)));
        }
        out.push_back(std::move(p));
    }
    return PolyMap(std::move(out));
}

PolyMap scaling_curve(const PolyMap& phi, const Poly& s) {
    const std::size_t n = phi.dim();
    const std::size_t nv = s.num_vars();
    if (nv < phi.num_vars()) throw Error(ErrorKind::ArityMismatch, "scaling parameter ring too small");
    if (s.degree_prefix(n) > 0) throw Error(ErrorKind::InvalidInput, "scaling parameter depends on space variables");
    std::vector<Poly> powers{Poly::constant(nv, Scalar::one(s.backend()))};
    std::vector<Poly> out;
    for (const auto& c : phi.components()) {
        Poly p(nv, c.backend());
        for (const auto& [m, coef] : c.terms()) {
            const int d = m.degree_prefix(n);
            const std::size_t e = d == 0 ? 1 : static_cast<std::size_t>(d - 1);
            while (powers.size() <= e) powers.push_back(powers.back() * s);
            p += Poly::monomial(nv, m, coef) * powers[e];
        }
        out.push_back(std::move(p));
    }
    return PolyMap(std::move(out));
}

ShearWord dilation_conjugate(const ShearWord& w, const Scalar& s0) {
    const Scalar s = s0.to_backend(w.backend());
    if (s.is_zero()) throw Error(ErrorKind::InvalidInput, "dilation factor must be nonzero");
    const Scalar sinv = Scalar::one(w.backend()) / s;
    auto stretch = [&](const Poly& f, const Scalar& c) {
        Poly r(f.num_vars(), f.backend());
        for (const auto& [m, v] : f.terms()) r.add_term(m, v * c * s.pow(static_cast<unsigned>(m.degree())));
        return r;
    };
    ShearWord out(w.dim(), w.backend(), w.tag());
    for (const auto& g : w.generators()) {
        switch (g.kind()) {
            case ShearKind::additive:
                out.push_back(ShearGen::additive(g.matrix(), stretch(g.profile(), sinv), g.time()));
                break;
            case ShearKind::multiplicative:
                out.push_back(ShearGen::multiplicative(g.matrix(), stretch(g.profile(), Scalar::one(w.backend())), g.time()));
                break;
            case ShearKind::affine: {
                ScalarVec b = g.translation();
                for (auto& x : b) x *= sinv;
                out.push_back(ShearGen::affine(g.matrix(), b));
                break;
            }
        }
    }
    return out;
}

namespace {

Point eval_scaled_impl(const ShearWord& w, Complex s, const Point& z, std::vector<Complex>* J) {
    const std::size_t n = w.dim();
    if (s == 0.0 || std::abs(s) < 1e-6) {
        // phi_s(z) ~ s phi(0) + A z + s Q(z); at s = 0 only the linear part.
        PolyMap j2 = word_jet(w, 2).map;
        PolyMap lin = j2.homogeneous_part(1), quad = j2.homogeneous_part(2);
        Point r = lin.evaluate(z);
        std::vector<Complex> D = jacobian_at(lin, z);
        if (s != 0.0) {
            Point q = quad.evaluate(z);
            auto Dq = jacobian_at(quad, z);
            for (std::size_t i = 0; i < n; ++i) r[i] += s * (j2[i].constant_term().to_complex() + q[i]);
            for (std::size_t k = 0; k < n * n; ++k) D[k] += s * Dq[k];
        }
        if (J) *J = mat_mul(D, *J, n);
        return r;
    }
    Point zero(n, 0.0), sz(n);
    for (std::size_t i = 0; i < n; ++i) sz[i] = s * z[i];
    Point p0 = eval_word(w, zero);
    Point p;
    if (J) {
        std::vector<Complex> D = identity_c(n);
        p = eval_word(w, sz, D);
        *J = mat_mul(D, *J, n);
    } else {
        p = eval_word(w, sz);
    }
    Point r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = s * p0[i] + (p[i] - p0[i]) / s;
    return r;
}

}  // namespace

Point eval_scaled_word(const ShearWord& w, Complex s, const Point& z) { return eval_scaled_impl(w, s, z, nullptr); }

Point eval_scaled_word(const ShearWord& w, Complex s, const Point& z, std::vector<Complex>& J) {
    return eval_scaled_impl(w, s, z, &J);
}

std::string to_string(const ShearGen& g) {
    std::ostringstream os;
    os << to_string(g.kind());
    if (g.kind() == ShearKind::affine) {
        os << " A=[";
        for (std::size_t i = 0; i < g.dim(); ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < g.dim(); ++j) os << (j ? " " : "") << g.matrix()(i, j).to_string();
        }
        os << "] b=(";
        for (std::size_t i = 0; i < g.dim(); ++i) os << (i ? ", " : "") << g.translation()[i].to_string();
        os << ")";
    } else {
        os << " f=" << g.profile().to_string() << " t=" << g.time().to_string();
    }
    return os.str();
}

}  // namespace shearkit
