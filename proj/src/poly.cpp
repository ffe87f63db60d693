#include "shearkit/poly.hpp"

#include <algorithm>
#include <sstream>

namespace shearkit {

Monomial Monomial::from(std::span<const int> exps) {
    if (exps.size() > kMaxVars) throw Error(ErrorKind::InvalidInput, "too many variables");
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0 || exps[i] > 0xFFFF) throw Error(ErrorKind::InvalidInput, "exponent out of range");
        m.e[i] = static_cast<std::uint16_t>(exps[i]);
    }
    return m;
}

Monomial Monomial::unit(std::size_t i, unsigned power) {
    Monomial m;
    m.e[i] = static_cast<std::uint16_t>(power);
    return m;
}

int Monomial::degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

int Monomial::degree_prefix(std::size_t k) const {
    int d = 0;
    for (std::size_t i = 0; i < k && i < kMaxVars; ++i) d += e[i];
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(e[i]) + o.e[i];
        if (s > 0xFFFF) throw Error(ErrorKind::InvalidInput, "exponent overflow");
        r.e[i] = static_cast<std::uint16_t>(s);
    }
    return r;
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.e > b.e;
}

Poly::Poly(std::size_t num_vars, Backend backend) : n_(num_vars), backend_(backend) {
    if (num_vars > kMaxVars) throw Error(ErrorKind::InvalidInput, "too many variables");
}

Poly Poly::constant(std::size_t num_vars, const Scalar& c) {
    Poly p(num_vars, c.backend());
    p.add_term(Monomial{}, c);
    return p;
}

Poly Poly::variable(std::size_t num_vars, std::size_t i, Backend backend) {
    if (i >= num_vars) throw Error(ErrorKind::ArityMismatch, "variable index out of range");
    Poly p(num_vars, backend);
    p.add_term(Monomial::unit(i), Scalar::one(backend));
    return p;
}

Poly Poly::monomial(std::size_t num_vars, const Monomial& m, const Scalar& c) {
    Poly p(num_vars, c.backend());
    p.add_term(m, c);
    return p;
}

int Poly::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

int Poly::degree_prefix(std::size_t k) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree_prefix(k));
    return d;
}

Scalar Poly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar::zero(backend_) : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
    if (c.backend() != backend_) throw Error(ErrorKind::BackendMismatch, "term backend differs from polynomial");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::homogeneous_part(int d) const { return homogeneous_part_prefix(d, n_); }

Poly Poly::homogeneous_part_prefix(int d, std::size_t k) const {
    Poly r(n_, backend_);
    for (const auto& [m, c] : terms_)
        if (m.degree_prefix(k) == d) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

Poly Poly::truncated(int order) const { return truncated_prefix(order, n_); }

Poly Poly::truncated_prefix(int order, std::size_t k) const {
    Poly r(n_, backend_);
    for (const auto& [m, c] : terms_)
        if (m.degree_prefix(k) <= order) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

Poly Poly::derivative(std::size_t i) const {
    if (i >= n_) throw Error(ErrorKind::ArityMismatch, "derivative index out of range");
    Poly r(n_, backend_);
    for (const auto& [m, c] : terms_) {
        if (m.e[i] == 0) continue;
        Monomial dm = m;
        --dm.e[i];
        r.add_term(dm, c * Scalar::from_int(m.e[i], backend_));
    }
    return r;
}

Poly Poly::chopped(double tol) const {
    if (backend_ == Backend::exact) return *this;
    Poly r(n_, backend_);
    for (const auto& [m, c] : terms_)
        if (!c.near_zero(tol)) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
}

namespace {

template <class T>
std::vector<std::vector<T>> power_table(std::span<const T> point, const std::vector<int>& max_exp, const T& one) {
    std::vector<std::vector<T>> table(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
        table[i].reserve(max_exp[i] + 1);
        table[i].push_back(one);
        for (int k = 1; k <= max_exp[i]; ++k) table[i].push_back(table[i].back() * point[i]);
    }
    return table;
}

std::vector<int> max_exponents(const Poly::TermMap& terms, std::size_t n) {
    std::vector<int> mx(n, 0);
    for (const auto& [m, c] : terms)
        for (std::size_t i = 0; i < n; ++i) mx[i] = std::max<int>(mx[i], m.e[i]);
    return mx;
}

}  // namespace

Scalar Poly::evaluate(std::span<const Scalar> point) const {
    if (point.size() != n_) throw Error(ErrorKind::ArityMismatch, "evaluation point has wrong dimension");
    auto table = power_table<Scalar>(point, max_exponents(terms_, n_), Scalar::one(backend_));
    Scalar sum = Scalar::zero(backend_);
    for (const auto& [m, c] : terms_) {
        Scalar t = c;
        for (std::size_t i = 0; i < n_; ++i)
            if (m.e[i]) t *= table[i][m.e[i]];
        sum += t;
    }
    return sum;
}

Complex Poly::evaluate(std::span<const Complex> point) const {
    if (point.size() != n_) throw Error(ErrorKind::ArityMismatch, "evaluation point has wrong dimension");
    auto table = power_table<Complex>(point, max_exponents(terms_, n_), Complex(1.0));
    Complex sum = 0.0;
    for (const auto& [m, c] : terms_) {
        Complex t = c.to_complex();
        for (std::size_t i = 0; i < n_; ++i)
            if (m.e[i]) t *= table[i][m.e[i]];
        sum += t;
    }
    return sum;
}

Poly Poly::compose(const std::vector<Poly>& subs) const {
    return compose_truncated(subs, -1, 0);
}

Poly Poly::compose_truncated(const std::vector<Poly>& subs, int order, std::size_t space_vars) const {
    if (subs.size() != n_) throw Error(ErrorKind::ArityMismatch, "compose: substitution count differs from num_vars");
    if (subs.empty()) return *this;
    const std::size_t m = subs.front().num_vars();
    for (const auto& s : subs) {
        if (s.num_vars() != m) throw Error(ErrorKind::ArityMismatch, "compose: substitutes have different arity");
        if (s.backend() != backend_) throw Error(ErrorKind::BackendMismatch, "compose: backend mismatch");
    }
    const bool trunc = order >= 0;
    auto mul = [&](const Poly& a, const Poly& b) {
        return trunc ? mul_truncated(a, b, order, space_vars) : a * b;
    };
    auto mx = max_exponents(terms_, n_);
    std::vector<std::vector<Poly>> powers(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        powers[i].push_back(Poly::constant(m, Scalar::one(backend_)));
        for (int k = 1; k <= mx[i]; ++k) powers[i].push_back(mul(powers[i].back(), subs[i]));
    }
    Poly result(m, backend_);
    for (const auto& [mono, c] : terms_) {
        Poly t = Poly::constant(m, c);
        for (std::size_t i = 0; i < n_; ++i)
            if (mono.e[i]) t = mul(t, powers[i][mono.e[i]]);
        result += t;
    }
    return result;
}

Poly Poly::to_backend(Backend b) const {
    if (b == backend_) return *this;
    Poly r(n_, b);
    for (const auto& [m, c] : terms_) r.add_term(m, c.to_backend(b));
    return r;
}

Poly Poly::extended(std::size_t num_vars) const {
    if (num_vars < n_) throw Error(ErrorKind::ArityMismatch, "cannot shrink a polynomial ring");
    Poly r(num_vars, backend_);
    r.terms_ = terms_;
    return r;
}

void Poly::require_compatible(const Poly& o) const {
    if (n_ != o.n_) throw Error(ErrorKind::ArityMismatch, "polynomials have different num_vars");
    if (backend_ != o.backend_) throw Error(ErrorKind::BackendMismatch, "polynomials have different backends");
}

Poly Poly::operator-() const {
    Poly r(n_, backend_);
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Scalar& c) {
    if (c.backend() != backend_) throw Error(ErrorKind::BackendMismatch, "scale: backend mismatch");
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        if (it->second.is_zero()) it = terms_.erase(it);
        else ++it;
    }
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) { return Poly::mul_truncated(a, b, -1, 0); }

Poly Poly::mul_truncated(const Poly& a, const Poly& b, int order, std::size_t space_vars) {
    a.require_compatible(b);
    Poly r(a.n_, a.backend_);
    for (const auto& [ma, ca] : a.terms_) {
        const int da = order >= 0 ? ma.degree_prefix(space_vars) : 0;
        if (order >= 0 && da > order) continue;
        for (const auto& [mb, cb] : b.terms_) {
            if (order >= 0 && da + mb.degree_prefix(space_vars) > order) continue;
            r.add_term(ma * mb, ca * cb);
        }
    }
    return r;
}

bool operator==(const Poly& a, const Poly& b) {
    return a.n_ == b.n_ && a.backend_ == b.backend_ && a.terms_.size() == b.terms_.size() &&
           std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                      [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
}

Poly Poly::pow(unsigned k) const {
    Poly result = Poly::constant(n_, Scalar::one(backend_));
    Poly base = *this;
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (std::size_t i = 0; i < n_; ++i) {
            if (m.e[i] == 0) continue;
            os << "*z" << (i + 1);
            if (m.e[i] > 1) os << "^" << m.e[i];
        }
    }
    return os.str();
}

bool near_equal(const Poly& a, const Poly& b, double tol) {
    if (a.backend() == Backend::exact && b.backend() == Backend::exact) return a == b;
    Poly d = a - b;
    for (const auto& [m, c] : d.terms())
        if (!c.near_zero(tol)) return false;
    return true;
}

double max_abs_coefficient(const Poly& p) {
    double mx = 0.0;
    for (const auto& [m, c] : p.terms()) mx = std::max(mx, c.abs());
    return mx;
}

Poly univariate(std::span<const Scalar> coeffs) {
    if (coeffs.empty()) throw Error(ErrorKind::InvalidInput, "univariate: empty coefficient list");
    Poly p(1, coeffs.front().backend());
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term(Monomial::unit(0, unsigned(k)), coeffs[k]);
    return p;
}

}  // namespace shearkit
