#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shearkit/scalar.hpp"

namespace shearkit {

inline constexpr std::size_t kMaxVars = 8;

/// Exponent multi-index. Entries past the owning polynomial's num_vars are 0.
struct Monomial {
    std::array<std::uint16_t, kMaxVars> e{};

    static Monomial from(std::span<const int> exps);
    static Monomial unit(std::size_t i, unsigned power = 1);

    int degree() const;
    /// Total degree in the first `k` variables only.
    int degree_prefix(std::size_t k) const;

    Monomial operator*(const Monomial& o) const;
    std::uint16_t operator[](std::size_t i) const { return e[i]; }
    bool operator==(const Monomial& o) const = default;
};

/// Graded-lexicographic order: ascending total degree, then lexicographically
/// larger exponent first (z1^2 < z1 z2 < z2^2 in iteration order).
struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over C with a fixed backend.
///
/// Terms are kept in graded-lex order and zero coefficients are never
/// stored. The zero polynomial has degree -1.
class Poly {
public:
    using TermMap = std::map<Monomial, Scalar, GradedLex>;

    Poly(std::size_t num_vars, Backend backend);

    static Poly constant(std::size_t num_vars, const Scalar& c);
    static Poly variable(std::size_t num_vars, std::size_t i, Backend backend);
    static Poly monomial(std::size_t num_vars, const Monomial& m, const Scalar& c);

    std::size_t num_vars() const { return n_; }
    Backend backend() const { return backend_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    /// Degree counted in the first `k` variables (the rest are parameters).
    int degree_prefix(std::size_t k) const;
    bool is_constant() const { return degree() <= 0; }
    Scalar coefficient(const Monomial& m) const;
    Scalar constant_term() const { return coefficient(Monomial{}); }

    /// Adds c * z^m in place (dropping the term if it cancels).
    void add_term(const Monomial& m, const Scalar& c);

    Poly homogeneous_part(int d) const;
    /// Homogeneous part of degree d in the first k variables.
    Poly homogeneous_part_prefix(int d, std::size_t k) const;
    Poly truncated(int order) const;
    Poly truncated_prefix(int order, std::size_t k) const;
    Poly derivative(std::size_t i) const;
    /// Drops approximate coefficients with |c| <= tol. Exact polys are unchanged.
    Poly chopped(double tol = kDefaultTolerance) const;

    Scalar evaluate(std::span<const Scalar> point) const;
    Complex evaluate(std::span<const Complex> point) const;

    /// Substitutes subs[i] for variable i. All substitutes share one arity,
    /// which becomes the arity of the result.
    Poly compose(const std::vector<Poly>& subs) const;
    /// As compose, dropping every term of degree > order in the first
    /// `space_vars` variables of the result.
    Poly compose_truncated(const std::vector<Poly>& subs, int order, std::size_t space_vars) const;

    Poly to_backend(Backend b) const;
    /// Re-embeds into a ring with more (trailing) variables.
    Poly extended(std::size_t num_vars) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Scalar& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Scalar& c) { return a *= c; }
    friend Poly operator*(const Scalar& c, Poly a) { return a *= c; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);

    Poly pow(unsigned k) const;
    std::string to_string() const;

    /// Truncated product: terms of degree > order in the first `space_vars`
    /// variables are never formed.
    static Poly mul_truncated(const Poly& a, const Poly& b, int order, std::size_t space_vars);

private:
    void require_compatible(const Poly& o) const;

    std::size_t n_;
    Backend backend_;
    TermMap terms_;
};

/// Coefficientwise equality with tolerance for the approximate backend.
bool near_equal(const Poly& a, const Poly& b, double tol = kDefaultTolerance);

/// Largest coefficient magnitude (0 for the zero polynomial).
double max_abs_coefficient(const Poly& p);

/// Univariate helpers (num_vars == 1).
Poly univariate(std::span<const Scalar> coeffs_low_to_high);

}  // namespace shearkit
