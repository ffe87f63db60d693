#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shearkit/polymap.hpp"

namespace shearkit {

enum class ShearKind { additive, multiplicative, affine };

const char* to_string(ShearKind k);

/// One invertible generator of a shear word.
///
/// Shears act in the coordinates w = L^{-1} z, where w' = (w_1..w_{n-1}):
///   additive        w -> (w', w_n + t f(w'))
///   multiplicative  w -> (w', exp(t f(w')) w_n)
/// and the result is mapped back by L. Affine generators are z -> A z + b.
class ShearGen {
public:
    static ShearGen additive(Matrix L, Poly f, Scalar t);
    static ShearGen multiplicative(Matrix L, Poly f, Scalar t);
    static ShearGen affine(Matrix A, ScalarVec b);

    ShearKind kind() const { return kind_; }
    std::size_t dim() const { return M_.rows(); }
    Backend backend() const { return M_.backend(); }

    /// Conjugator L for shears, matrix A for affine generators.
    const Matrix& matrix() const { return M_; }
    const Matrix& matrix_inverse() const { return Minv_; }
    /// Profile (n-1 variables); zero polynomial for affine generators.
    const Poly& profile() const { return f_; }
    const Scalar& time() const { return t_; }
    const ScalarVec& translation() const { return b_; }

    ShearGen inverse() const;
    bool is_identity() const;

    Point apply(const Point& z) const;
    /// Applies the generator and left-multiplies the row-major Jacobian J by
    /// the generator's derivative at z.
    Point apply(const Point& z, std::vector<Complex>& J) const;
    /// Numeric action with the time replaced by t; J is updated when given.
    Point apply_with_time(const Point& z, Complex t, std::vector<Complex>* J) const;
    /// log det of the derivative at z, from the normal form: 0 for additive
    /// shears, t f(w') for multiplicative ones, log det A for affine maps.
    Complex jacobian_log_det_at(const Point& z, Complex t) const;
    Complex jacobian_log_det_at(const Point& z) const { return jacobian_log_det_at(z, tc_); }
    /// Exact evaluation; throws Transcendental for multiplicative generators
    /// whose exponential is not identically 1.
    ScalarVec apply(const ScalarVec& z) const;

    /// (g o R) through total degree k, exact through k when R is.
    PolyMap apply_jet(const PolyMap& R, int k) const;

    /// Polynomial form; additive and affine generators only.
    PolyMap as_polymap() const;
    /// Affine generators and shears whose profile is constant (or t = 0).
    bool is_linear() const;

private:
    ShearGen(ShearKind k, Matrix M, Poly f, Scalar t, ScalarVec b);

    ShearKind kind_;
    Matrix M_, Minv_;
    Poly f_;
    Scalar t_;
    ScalarVec b_;
    // Numeric caches for fast evaluation.
    std::vector<Complex> Mc_, Minvc_, bc_;
    std::vector<Poly> df_;
    Complex tc_, detc_;
};

enum class GroupTag { aut, aut1, aut_sp, aut_alg, aut_alg1, aut_alg_sp };

const char* to_string(GroupTag g);
GroupTag parse_group_tag(const std::string& s);
bool is_volume_tag(GroupTag g);
bool is_symplectic_tag(GroupTag g);
bool is_algebraic_tag(GroupTag g);

/// Standard symplectic matrix for omega = sum dz_{2j-1} ^ dz_{2j}.
Matrix symplectic_form(std::size_t n, Backend b);
/// Membership of a constant matrix in the linear part of the group.
bool linear_in_group(const Matrix& A, GroupTag tag, double tol = kDefaultTolerance);

/// D^T J D == J for the polynomial Jacobian D of m (coefficientwise within tol).
bool preserves_symplectic_form(const PolyMap& m, double tol = kDefaultTolerance);
/// Returns a reason string when g violates the tag, nothing otherwise.
std::optional<std::string> generator_violation(const ShearGen& g, GroupTag tag);

/// Finite composition of generators, stored in application order.
class ShearWord {
public:
    ShearWord(std::size_t n, Backend b, GroupTag tag = GroupTag::aut);
    /// Throws Precondition if a generator violates the tag.
    ShearWord(std::size_t n, Backend b, GroupTag tag, std::vector<ShearGen> gens);

    std::size_t dim() const { return n_; }
    Backend backend() const { return backend_; }
    GroupTag tag() const { return tag_; }
    const std::vector<ShearGen>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }

    /// Appends g (applied after the current word).
    void push_back(ShearGen g);
    void append(const ShearWord& w);
    /// Re-tags after checking every generator.
    ShearWord with_tag(GroupTag tag) const;
    /// Exact -> approximate conversion (the reverse throws).
    ShearWord to_backend(Backend b) const;

private:
    void check(const ShearGen& g) const;

    std::size_t n_;
    Backend backend_;
    GroupTag tag_;
    std::vector<ShearGen> gens_;
};

/// w1 then w2.
ShearWord concat(const ShearWord& w1, const ShearWord& w2);

Point eval_word(const ShearWord& w, const Point& z);
Point eval_word(const ShearWord& w, const Point& z, std::vector<Complex>& jacobian);
ScalarVec eval_word(const ShearWord& w, const ScalarVec& z);

ShearWord invert_word(const ShearWord& w);

/// Taylor expansion at 0 of the composite, exact through degree k.
Jet word_jet(const ShearWord& w, int k);

/// Expanded composite of a word of polynomial generators.
PolyMap word_polymap(const ShearWord& w);

/// F = a + A H with H(0) = 0 and D0 H = I.
struct SchwarzDecomposition {
    ScalarVec center;
    Matrix linear;
    std::variant<ShearWord, PolyMap> tail;
};

SchwarzDecomposition schwarz_normalize(const PolyMap& F, GroupTag tag = GroupTag::aut);
/// The same splitting without the Jacobian and group checks; needs only an
/// invertible D0 F.
SchwarzDecomposition schwarz_split(const PolyMap& F);
SchwarzDecomposition schwarz_normalize(const ShearWord& w);

/// Throws NonConstantJacobian / NotAnAutomorphism unless det DF is a nonzero constant.
Scalar require_constant_jacobian(const PolyMap& F);

/// phi_s(z) = s phi(0) + s^{-1}(phi(s z) - phi(0)); phi_0 is the linear part.
PolyMap scaling_curve(const PolyMap& phi, const Scalar& s);
/// Same with s a polynomial in trailing parameter variables; the result
/// lives in dim + params variables.
PolyMap scaling_curve(const PolyMap& phi, const Poly& s);

/// The word z -> w(s z) / s for s != 0, conjugated generator by generator.
/// Equals the scaling curve at s when w is in Schwarz form.
ShearWord dilation_conjugate(const ShearWord& w, const Scalar& s);

/// Evaluation of the scaling curve of a word at parameter s.
/// Exact linear part at s == 0; order-2 jet for 0 < |s| < 1e-6.
Point eval_scaled_word(const ShearWord& w, Complex s, const Point& z);
Point eval_scaled_word(const ShearWord& w, Complex s, const Point& z, std::vector<Complex>& jacobian);

std::string to_string(const ShearGen& g);

}  // namespace shearkit
