#include "shearkit/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

namespace shearkit {

ShearField ShearField::additive(Scalar c, ScalarVec lambda, ScalarVec b, Poly g) {
    ShearField s{ShearFieldKind::additive, std::move(c), std::move(lambda), std::move(b), {}, std::move(g), 0};
    s.d = s.profile.degree();
    return s;
}

ShearField ShearField::multiplicative(Scalar c, ScalarVec lambda, ScalarVec mu, ScalarVec v, int d) {
    const Backend b = c.backend();
    return ShearField{ShearFieldKind::multiplicative, std::move(c), std::move(lambda), std::move(v), std::move(mu),
                      Poly(1, b), d};
}

Poly linear_form(const ScalarVec& lambda) {
    const std::size_t n = lambda.size();
    Poly p(n, backend_of(lambda));
    for (std::size_t i = 0; i < n; ++i) p.add_term(Monomial::unit(i), lambda[i]);
    return p;
}

VectorField ShearField::field() const {
    const std::size_t n = dim();
    const Poly lz = linear_form(lambda);
    Poly scalar_part = kind == ShearFieldKind::additive
                           ? profile.compose({lz}) * c
                           : lz.pow(static_cast<unsigned>(d)) * linear_form(mu) * c;
    std::vector<Poly> comps;
    for (std::size_t i = 0; i < n; ++i) comps.push_back(scalar_part * direction[i]);
    return VectorField(std::move(comps));
}

ShearField ShearField::with_coefficient(Scalar c2) const {
    ShearField s = *this;
    s.c = std::move(c2);
    return s;
}

bool ShearField::same_shape(const ShearField& o) const {
    return kind == o.kind && lambda == o.lambda && direction == o.direction && mu == o.mu && profile == o.profile &&
           d == o.d;
}

namespace {

std::string vec_string(const ScalarVec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i].to_string();
    os << ")";
    return os.str();
}

}  // namespace

std::string to_string(const ShearField& s) {
    std::ostringstream os;
    if (s.kind == ShearFieldKind::additive)
        os << "additive c=" << s.c.to_string() << " g=" << s.profile.to_string() << " lambda=" << vec_string(s.lambda)
           << " b=" << vec_string(s.direction);
    else
        os << "multiplicative c=" << s.c.to_string() << " d=" << s.d << " lambda=" << vec_string(s.lambda)
           << " mu=" << vec_string(s.mu) << " v=" << vec_string(s.direction);
    return os.str();
}

VectorField recompose(const std::vector<ShearField>& summands, std::size_t n, Backend b) {
    VectorField sum = VectorField::zero(n, b);
    for (const auto& s : summands) sum = sum + s.field();
    return sum;
}

namespace {

// Monomials of degree d in n variables, graded-lex order.
std::vector<Monomial> monomials_of_degree(std::size_t n, int d) {
    std::vector<Monomial> out;
    std::vector<int> e(n, 0);
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == n) {
            e[i] = left;
            out.push_back(Monomial::from(e));
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, d);
    return out;
}

// Gaussian rationals on the unit circle with small denominators, at angles
// 2 pi f_k where f_k is the base-2 van der Corput sequence; every prefix is
// spread around the circle, which keeps the power bases well conditioned.
const std::vector<Scalar>& circle_points(std::size_t count) {
    static std::vector<Scalar> pts;
    static std::size_t next = 0;
    while (pts.size() < count) {
        std::size_t k = next++;
        double f = 0, w = 0.5;
        for (std::size_t m = k; m; m >>= 1, w /= 2)
            if (m & 1) f += w;
        Scalar u;
        if (f == 0) u = Scalar::exact_int(1);
        else if (f == 0.25) u = Scalar::exact_int(0, 1);
        else if (f == 0.5) u = Scalar::exact_int(-1);
        else if (f == 0.75) u = Scalar::exact_int(0, -1);
        else {
            // u = ((q^2 - p^2) + 2pq i) / (q^2 + p^2) has angle 2 atan(p/q).
            const double theta = 2 * std::numbers::pi * f, s = std::tan(theta / 2);
            long p = 0, q = 1;
            for (q = 1; q <= 64; ++q) {
                p = std::lround(s * static_cast<double>(q));
                double err = std::remainder(2 * std::atan2(static_cast<double>(p), static_cast<double>(q)) - theta, 2 * std::numbers::pi);
                if (std::abs(err) < std::numbers::pi / 64) break;
            }
            const mpq_class den = q * q + p * p;
            u = Scalar::exact(mpq_class(q * q - p * p) / den, mpq_class(2 * p * q) / den);
        }
        if (std::find(pts.begin(), pts.end(), u) == pts.end()) pts.push_back(u);
    }
    return pts;
}

// Candidate covectors in a fixed order: first nonzero entry 1, the others
// drawn from {0} and the first `level` circle points; level by level.
class CovectorCandidates {
public:
    explicit CovectorCandidates(std::size_t n) : n_(n) {}

    // Next batch (vectors that need circle point number level-1); empty past the cap.
    std::vector<ScalarVec> next_level() {
        if (level_ >= 256) return {};
        ++level_;
        std::lock_guard<std::mutex> lock(points_mutex());
        const auto& pts = circle_points(level_);
        std::vector<Scalar> entries{Scalar::exact_int(0)};
        for (std::size_t k = 0; k < level_; ++k) entries.push_back(pts[k]);
        std::vector<ScalarVec> out;
        std::vector<std::size_t> idx(n_, 0);
        auto rec = [&](auto&& self, std::size_t i, bool leading, bool uses_new) -> void {
            if (i == n_) {
                if (!leading && uses_new) {
                    ScalarVec v;
                    for (std::size_t j = 0; j < n_; ++j) v.push_back(entries[idx[j]]);
                    out.push_back(std::move(v));
                }
                return;
            }
            if (leading) {
                idx[i] = 0;
                self(self, i + 1, true, uses_new);
                idx[i] = 1;  // leading entry is 1 = u_0
                self(self, i + 1, false, uses_new || level_ == 1);
                return;
            }
            for (std::size_t e = 0; e <= level_; ++e) {
                idx[i] = e;
                self(self, i + 1, false, uses_new || e == level_);
            }
        };
        rec(rec, 0, true, false);
        return out;
    }

private:
    static std::mutex& points_mutex() {
        static std::mutex m;
        return m;
    }
    std::size_t n_;
    std::size_t level_ = 0;
};

struct MonomialIndex {
    std::vector<Monomial> monos;
    std::map<Monomial, std::size_t, GradedLex> index;

    MonomialIndex(std::size_t n, int d) : monos(monomials_of_degree(n, d)) {
        for (std::size_t k = 0; k < monos.size(); ++k) index[monos[k]] = k;
    }
};

struct WaringBasis {
    MonomialIndex mi;
    std::vector<ScalarVec> lambdas;
    std::unique_ptr<SpanSolver> solver;
};

struct DivFreeBasis {
    MonomialIndex mi;
    std::vector<std::pair<ScalarVec, ScalarVec>> shapes;  // (lambda, b)
    std::unique_ptr<SpanSolver> solver;
};

std::size_t binom(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

ScalarVec power_coefficients(const ScalarVec& lambda, int d, const MonomialIndex& mi) {
    Poly p = linear_form(lambda).pow(static_cast<unsigned>(d));
    ScalarVec col(mi.monos.size(), Scalar::zero(Backend::exact));
    for (const auto& [m, c] : p.terms()) col[mi.index.at(m)] = c;
    return col;
}

std::mutex cache_mutex;

const WaringBasis& waring_basis(std::size_t n, int d) {
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<WaringBasis>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[{n, d}];
    if (slot) return *slot;
    auto basis = std::make_unique<WaringBasis>(WaringBasis{MonomialIndex(n, d), {}, nullptr});
    const std::size_t target = basis->mi.monos.size();
    std::vector<ScalarVec> cols;
    IncrementalEchelon ech(target);
    CovectorCandidates cand(n);
    for (auto batch = cand.next_level(); !batch.empty() && cols.size() < target; batch = cand.next_level())
        for (const auto& lambda : batch) {
            ScalarVec col = power_coefficients(lambda, d, basis->mi);
            if (ech.try_add(col)) {
                basis->lambdas.push_back(lambda);
                cols.push_back(col);
                if (cols.size() == target) break;
            }
        }
    if (cols.size() != target) throw Error(ErrorKind::Internal, "waring: covector grid does not span the forms");
    basis->solver = std::make_unique<SpanSolver>(std::move(cols));
    slot = std::move(basis);
    return *slot;
}

// Kernel basis of a covector: lambda_p e_j - lambda_j e_p for j != p, p = first nonzero index.
std::vector<ScalarVec> kernel_basis(const ScalarVec& lambda) {
    const std::size_t n = lambda.size();
    const Backend b = backend_of(lambda);
    std::size_t p = 0;
    while (p < n && lambda[p].is_zero()) ++p;
    std::vector<ScalarVec> out;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == p) continue;
        ScalarVec v = zeros(n, b);
        v[j] = lambda[p];
        v[p] -= lambda[j];
        out.push_back(std::move(v));
    }
    return out;
}

const DivFreeBasis& divfree_basis(std::size_t n, int d) {
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<DivFreeBasis>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[{n, d}];
    if (slot) return *slot;
    auto basis = std::make_unique<DivFreeBasis>(DivFreeBasis{MonomialIndex(n, d), {}, nullptr});
    const std::size_t M = basis->mi.monos.size();
    const std::size_t target = n * M - (d >= 1 ? binom(n + d - 2, static_cast<std::size_t>(d - 1)) : 0);
    std::vector<ScalarVec> cols;
    IncrementalEchelon ech(n * M);
    CovectorCandidates cand(n);
    for (auto batch = cand.next_level(); !batch.empty() && cols.size() < target; batch = cand.next_level()) {
        for (const auto& lambda : batch) {
            ScalarVec pw = power_coefficients(lambda, d, basis->mi);
            for (const auto& b : kernel_basis(lambda)) {
                ScalarVec col(n * M, Scalar::zero(Backend::exact));
                for (std::size_t i = 0; i < n; ++i)
                    if (!b[i].is_zero())
                        for (std::size_t k = 0; k < M; ++k) col[i * M + k] = pw[k] * b[i];
                if (ech.try_add(col)) {
                    basis->shapes.emplace_back(lambda, b);
                    cols.push_back(std::move(col));
                }
            }
            if (cols.size() == target) break;
        }
    }
    if (cols.size() != target) throw Error(ErrorKind::Internal, "decompose: shear fields do not span divergence-free fields");
    basis->solver = std::make_unique<SpanSolver>(std::move(cols));
    slot = std::move(basis);
    return *slot;
}

int homogeneous_degree(const Poly& p) {
    int d = -1;
    for (const auto& [m, c] : p.terms()) {
        if (d >= 0 && m.degree() != d) throw Error(ErrorKind::Precondition, "waring: polynomial is not homogeneous");
        d = m.degree();
    }
    return d;
}

}  // namespace

std::vector<WaringTerm> waring(const Poly& p) {
    const std::size_t n = p.num_vars();
    const Backend b = p.backend();
    const int d = homogeneous_degree(p);
    std::vector<WaringTerm> out;
    if (d < 0) return out;
    if (d == 0) {
        // any covector works; the last coordinate keeps later kernel choices on e_1
        out.push_back({p.constant_term(), to_backend(unit_vector(n, n - 1, Backend::exact), b)});
        return out;
    }
    const WaringBasis& wb = waring_basis(n, d);
    ScalarVec w(wb.mi.monos.size(), Scalar::zero(b));
    for (const auto& [m, c] : p.terms()) w[wb.mi.index.at(m)] = c;
    auto res = wb.solver->solve(w);
    if (b == Backend::exact)
        for (const auto& r : res.residual)
            if (!r.is_zero()) throw Error(ErrorKind::Internal, "waring: nonzero residual");
    for (std::size_t k = 0; k < wb.lambdas.size(); ++k)
        if (!res.coefficients[k].is_zero()) out.push_back({res.coefficients[k], to_backend(wb.lambdas[k], b)});
    return out;
}

Decomposition decompose_divfree(const VectorField& W) {
    const std::size_t n = W.dim();
    const Backend b = W.backend();
    if (W.num_vars() != n) throw Error(ErrorKind::Precondition, "decompose: field has parameter variables");
    Poly div = divergence(W).chopped();
    if (!div.is_zero())
        throw Error(ErrorKind::Precondition, "field is not divergence free", div.to_string());
    Decomposition dec{{}, W};
    for (int d = 0; d <= W.degree(); ++d) {
        VectorField part = W.homogeneous_part(d);
        if (part.is_zero()) continue;
        const DivFreeBasis& basis = divfree_basis(n, d);
        const std::size_t M = basis.mi.monos.size();
        ScalarVec w(n * M, Scalar::zero(b));
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& [m, c] : part[i].terms()) w[i * M + basis.mi.index.at(m)] = c;
        auto res = basis.solver->solve(w);
        Poly g = Poly::monomial(1, Monomial::unit(0, static_cast<unsigned>(d)), Scalar::one(b));
        for (std::size_t k = 0; k < basis.shapes.size(); ++k) {
            if (res.coefficients[k].is_zero()) continue;
            const auto& [lambda, dir] = basis.shapes[k];
            dec.summands.push_back(
                ShearField::additive(res.coefficients[k], to_backend(lambda, b), to_backend(dir, b), g));
        }
    }
    dec.residual = W - recompose(dec.summands, n, b);
    if (b == Backend::exact && !dec.residual.is_zero())
        throw Error(ErrorKind::Internal, "decompose: nonzero residual", dec.residual.to_string());
    return dec;
}

DivergenceBalance balance_divergence(const VectorField& W) {
    const std::size_t n = W.dim();
    const Backend b = W.backend();
    if (n < 2) throw Error(ErrorKind::Precondition, "balance_divergence needs n >= 2");
    Poly div = divergence(W).chopped();
    DivergenceBalance out{{}, W};
    for (int d = 0; d <= div.degree(); ++d) {
        Poly part = div.homogeneous_part(d);
        if (part.is_zero()) continue;
        for (const auto& term : waring(part)) {
            const ScalarVec& lambda = term.lambda;
            std::size_t j = 0;
            while (j < n && !lambda[j].is_zero()) ++j;
            ScalarVec v = zeros(n, b), mu = zeros(n, b);
            if (j < n) {
                v[j] = Scalar::one(b);
            } else {
                // lambda has full support: v = e_j - (lambda_j / lambda_p) e_p, p = 0, j = 1
                j = 1;
                v[j] = Scalar::one(b);
                v[0] = -(lambda[j] / lambda[0]);
            }
            mu[j] = Scalar::one(b);
            out.multiplicative.push_back(ShearField::multiplicative(term.c, lambda, mu, v, d));
        }
    }
    out.remainder = W - recompose(out.multiplicative, n, b);
    return out;
}

const char* to_string(FieldTag t) {
    switch (t) {
        case FieldTag::general: return "general";
        case FieldTag::volume: return "volume";
        case FieldTag::symplectic: return "symplectic";
    }
    return "?";
}

FieldTag parse_field_tag(const std::string& s) {
    for (FieldTag t : {FieldTag::general, FieldTag::volume, FieldTag::symplectic})
        if (s == to_string(t)) return t;
    throw Error(ErrorKind::InvalidInput, "unknown field tag '" + s + "'");
}

FieldTag field_tag_for(GroupTag g) {
    if (is_symplectic_tag(g)) return FieldTag::symplectic;
    if (is_volume_tag(g) || is_algebraic_tag(g)) return FieldTag::volume;
    return FieldTag::general;
}

std::vector<Poly> contract_symplectic(const VectorField& W) {
    const std::size_t n = W.dim();
    if (n % 2 != 0) throw Error(ErrorKind::Precondition, "symplectic decomposition needs even dimension");
    std::vector<Poly> alpha(n, Poly(W.num_vars(), W.backend()));
    for (std::size_t j = 0; j < n; j += 2) {
        alpha[j + 1] = W[j];
        alpha[j] = -W[j + 1];
    }
    return alpha;
}

Decomposition decompose_hamiltonian(const VectorField& W) {
    const std::size_t n = W.dim();
    const Backend b = W.backend();
    std::vector<Poly> alpha = contract_symplectic(W);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            Poly curl = (alpha[i].derivative(k) - alpha[k].derivative(i)).chopped();
            if (!curl.is_zero()) {
                std::ostringstream os;
                os << "d(alpha)_" << i + 1 << k + 1 << " = " << curl.to_string();
                throw Error(ErrorKind::Precondition, "field is not Hamiltonian: iota_W omega is not closed", os.str());
            }
        }
    // Homogeneous closed forms integrate by the Euler formula.
    Poly h(n, b);
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d <= alpha[i].degree(); ++d) {
            Poly part = alpha[i].homogeneous_part(d);
            if (!part.is_zero()) h += part * Poly::variable(n, i, b) * Scalar::ratio(1, d + 1, b);
        }
    Decomposition dec{{}, W};
    for (int e = 1; e <= h.degree(); ++e) {
        Poly part = h.homogeneous_part(e);
        if (part.is_zero()) continue;
        Poly g = Poly::monomial(1, Monomial::unit(0, static_cast<unsigned>(e - 1)), Scalar::one(b));
        for (const auto& term : waring(part)) {
            ScalarVec v = zeros(n, b);
            for (std::size_t j = 0; j < n; j += 2) {
                v[j] = term.lambda[j + 1];
                v[j + 1] = -term.lambda[j];
            }
            dec.summands.push_back(ShearField::additive(term.c * Scalar::from_int(e, b), term.lambda, v, g));
        }
    }
    dec.residual = W - recompose(dec.summands, n, b);
    if (b == Backend::exact && !dec.residual.is_zero())
        throw Error(ErrorKind::Internal, "decompose_hamiltonian: nonzero residual", dec.residual.to_string());
    return dec;
}

namespace {

bool near_zero_poly(const Poly& p) { return p.is_zero() || (p.backend() == Backend::approx && max_abs_coefficient(p) <= 1e-12); }

// W = g(lambda.z) b with lambda(b) = 0, recognized directly so that a single
// shear field is not split into non-commuting pieces.
std::optional<ShearField> as_single_shear(const VectorField& W0, FieldTag tag) {
    const VectorField W = W0.chopped(1e-12);
    const std::size_t n = W.dim();
    const Backend bk = W.backend();
    if (W.num_vars() != n) return std::nullopt;
    std::size_t p = 0;
    while (p < n && near_zero_poly(W[p])) ++p;
    if (p == n) return std::nullopt;
    const Poly& q = W[p];
    const auto& [m0, c0] = *q.terms().rbegin();
    ScalarVec b;
    for (std::size_t i = 0; i < n; ++i) {
        Scalar bi = W[i].coefficient(m0) / c0;
        if (!near_zero_poly(W[i] - q * bi)) return std::nullopt;
        b.push_back(bi);
    }
    const int D = q.degree();
    if (D < 1) return std::nullopt;
    const Poly top = q.homogeneous_part(D);
    std::size_t r = 0;
    while (r < n && top.coefficient(Monomial::unit(r, static_cast<unsigned>(D))).near_zero(1e-12)) ++r;
    if (r == n) return std::nullopt;
    const Scalar c = top.coefficient(Monomial::unit(r, static_cast<unsigned>(D)));
    ScalarVec lambda;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == r) {
            lambda.push_back(Scalar::one(bk));
            continue;
        }
        Monomial m = Monomial::unit(r, static_cast<unsigned>(D - 1)) * Monomial::unit(i);
        lambda.push_back(top.coefficient(m) / (c * Scalar::from_int(D, bk)));
    }
    Scalar lb = Scalar::zero(bk);
    for (std::size_t i = 0; i < n; ++i) lb += lambda[i] * b[i];
    if (!lb.near_zero(1e-12)) return std::nullopt;
    const Poly lz = linear_form(lambda);
    std::vector<Scalar> g(static_cast<std::size_t>(D) + 1, Scalar::zero(bk));
    for (int e = 0; e <= D; ++e) {
        const Poly part = q.homogeneous_part(e);
        g[e] = part.coefficient(Monomial::unit(r, static_cast<unsigned>(e)));
        if (!near_zero_poly(part - lz.pow(static_cast<unsigned>(e)) * g[e])) return std::nullopt;
    }
    if (tag == FieldTag::symplectic) {
        // Hamiltonian iff b is proportional to (lambda_2, -lambda_1, ...).
        if (n % 2) return std::nullopt;
        ScalarVec v(n, Scalar::zero(bk));
        for (std::size_t j = 0; j < n; j += 2) {
            v[j] = lambda[j + 1];
            v[j + 1] = -lambda[j];
        }
        std::size_t k = 0;
        while (k < n && v[k].near_zero(1e-12)) ++k;
        if (k == n) return std::nullopt;
        const Scalar kappa = b[k] / v[k];
        for (std::size_t i = 0; i < n; ++i)
            if (!(b[i] - kappa * v[i]).near_zero(1e-12)) return std::nullopt;
        for (auto& x : g) x *= kappa;
        b = v;
    }
    ShearField s = ShearField::additive(Scalar::one(bk), lambda, b, univariate(g));
    if (bk == Backend::exact && !(W0 - s.field()).is_zero()) return std::nullopt;
    return s;
}

}  // namespace

Decomposition decompose_field(const VectorField& W, FieldTag tag) {
    if (auto s = as_single_shear(W, tag)) {
        Decomposition dec{{*s}, W};
        dec.residual = W - s->field();
        return dec;
    }
    switch (tag) {
        case FieldTag::volume: return decompose_divfree(W);
        case FieldTag::symplectic: return decompose_hamiltonian(W);
        case FieldTag::general: break;
    }
    DivergenceBalance bal = balance_divergence(W);
    Decomposition rest = decompose_divfree(bal.remainder);
    Decomposition dec{std::move(bal.multiplicative), W};
    for (auto& s : rest.summands) dec.summands.push_back(std::move(s));
    dec.residual = W - recompose(dec.summands, W.dim(), W.backend());
    return dec;
}

namespace {

// Invertible matrix with the given last column, det 1; the other columns are
// standard basis vectors (skipping the first index where `last` is nonzero),
// or, when `kernel_of` is given, a basis of its kernel.
Matrix conjugator(const ScalarVec& last, const ScalarVec* kernel_of) {
    const std::size_t n = last.size();
    const Backend b = backend_of(last);
    std::vector<ScalarVec> cols;
    if (kernel_of) {
        cols = kernel_basis(*kernel_of);
    } else {
        std::size_t q = 0;
        while (q < n && last[q].is_zero()) ++q;
        if (q == n) throw Error(ErrorKind::Precondition, "shear direction is zero");
        for (std::size_t j = 0; j < n; ++j)
            if (j != q) cols.push_back(unit_vector(n, j, b));
    }
    cols.push_back(last);
    Matrix L(n, n, b);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) L.set(i, j, cols[j][i]);
    const Scalar det = L.determinant();
    if (det.is_zero()) throw Error(ErrorKind::Internal, "shear conjugator is singular");
    for (std::size_t i = 0; i < n; ++i) L.set(i, 0, L(i, 0) / det);
    return L;
}

// lambda . (L w) restricted to w' as a linear polynomial in n-1 variables.
Poly pulled_form(const ScalarVec& lambda, const Matrix& L) {
    const std::size_t n = lambda.size();
    Poly p(n - 1, backend_of(lambda));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Scalar s = Scalar::zero(p.backend());
        for (std::size_t i = 0; i < n; ++i) s += lambda[i] * L(i, k);
        p.add_term(Monomial::unit(k), s);
    }
    return p;
}

}  // namespace

ShearGen exact_flow(const ShearField& s, const Scalar& t) {
    const std::size_t n = s.dim();
    const Backend b = s.backend();
    if (s.kind == ShearFieldKind::additive) {
        Matrix L = conjugator(s.direction, nullptr);
        Poly f = s.profile.compose({pulled_form(s.lambda, L)}) * s.c;
        return ShearGen::additive(std::move(L), std::move(f), t);
    }
    if (s.d == 0) {
        // linear flow z + (e^{tc} - 1)(mu.z) v
        const Scalar tc = t * s.c;
        if (b == Backend::approx || tc.is_zero()) {
            const Scalar g = exp(tc) - Scalar::one(b);
            Matrix A = Matrix::identity(n, b);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!s.direction[i].is_zero() && !s.mu[j].is_zero()) A.set(i, j, A(i, j) + g * s.direction[i] * s.mu[j]);
            return ShearGen::affine(std::move(A), zeros(n, b));
        }
    }
    Matrix L = conjugator(s.direction, &s.mu);
    Poly f = pulled_form(s.lambda, L).pow(static_cast<unsigned>(s.d)) * s.c;
    return ShearGen::multiplicative(std::move(L), std::move(f), t);
}

std::vector<ParamSummand> decompose_field_parametric(const VectorField& W, FieldTag tag) {
    const std::size_t n = W.dim();
    const std::size_t p = W.num_vars() - n;
    const Backend b = W.backend();
    if (p == 0) {
        std::vector<ParamSummand> out;
        for (auto& s : decompose_field(W, tag).summands) {
            Scalar c = s.c;
            out.push_back({s.with_coefficient(Scalar::one(b)), Poly::constant(1, c)});
        }
        return out;
    }
    // Slice by monomials in the parameters.
    std::map<Monomial, std::vector<Poly>, GradedLex> slices;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [m, c] : W[i].terms()) {
            Monomial zm{}, xm{};
            for (std::size_t k = 0; k < n; ++k) zm.e[k] = m.e[k];
            for (std::size_t k = 0; k < p; ++k) xm.e[k] = m.e[n + k];
            auto& comps = slices.try_emplace(xm, n, Poly(n, b)).first->second;
            comps[i].add_term(zm, c);
        }
    std::vector<ParamSummand> out;
    for (const auto& [xm, comps] : slices) {
        Decomposition dec = decompose_field(VectorField(comps), tag);
        for (const auto& s : dec.summands) {
            ShearField shape = s.with_coefficient(Scalar::one(b));
            Scalar c = s.c;
            // Slices of one shear must merge, so the profile is made monic.
            if (shape.kind == ShearFieldKind::additive && !shape.profile.is_zero()) {
                const Scalar lead = shape.profile.terms().rbegin()->second;
                shape.profile = shape.profile * (Scalar::one(b) / lead);
                c *= lead;
            }
            Poly term = Poly::monomial(p, xm, c);
            auto it = std::find_if(out.begin(), out.end(), [&](const ParamSummand& ps) { return ps.field.same_shape(shape); });
            if (it == out.end()) out.push_back({shape, term});
            else it->coefficient += term;
        }
    }
    std::erase_if(out, [](const ParamSummand& ps) { return ps.coefficient.is_zero(); });
    return out;
}

}  // namespace shearkit
