#pragma once

#include <vector>

#include "shearkit/shear.hpp"

namespace shearkit {

enum class ShearFieldKind { additive, multiplicative };

/// A complete shear vector field with closed-form flow.
///
///   additive:        c * g(lambda.z) * b             with lambda(b) = 0
///   multiplicative:  c * (lambda.z)^d * (mu.z) * v   with lambda(v) = 0, mu(v) = 1
struct ShearField {
    ShearFieldKind kind;
    Scalar c;
    ScalarVec lambda;
    ScalarVec direction;  // b or v
    ScalarVec mu;         // multiplicative only
    Poly profile;         // univariate g (additive only)
    int d = 0;            // power of lambda.z (multiplicative only)

    static ShearField additive(Scalar c, ScalarVec lambda, ScalarVec b, Poly g);
    static ShearField multiplicative(Scalar c, ScalarVec lambda, ScalarVec mu, ScalarVec v, int d);

    std::size_t dim() const { return lambda.size(); }
    Backend backend() const { return c.backend(); }
    VectorField field() const;
    /// Same field with coefficient c replaced.
    ShearField with_coefficient(Scalar c2) const;
    /// Equality ignoring c; used to merge summands.
    bool same_shape(const ShearField& o) const;
};

std::string to_string(const ShearField& s);

struct Decomposition {
    std::vector<ShearField> summands;
    VectorField residual;
};

VectorField recompose(const std::vector<ShearField>& summands, std::size_t n, Backend b);

/// lambda . z as a polynomial in n variables.
Poly linear_form(const ScalarVec& lambda);

struct WaringTerm {
    Scalar c;
    ScalarVec lambda;
};

/// p = sum c_k (lambda_k . z)^d for homogeneous p of degree d.
std::vector<WaringTerm> waring(const Poly& p);

/// Additive-only decomposition of a divergence-free field.
Decomposition decompose_divfree(const VectorField& W);

struct DivergenceBalance {
    std::vector<ShearField> multiplicative;
    VectorField remainder;  // divergence free
};
DivergenceBalance balance_divergence(const VectorField& W);

enum class FieldTag { general, volume, symplectic };
const char* to_string(FieldTag t);
FieldTag parse_field_tag(const std::string& s);
FieldTag field_tag_for(GroupTag g);

/// 1-form iota_W omega for omega = sum dz_{2j-1} ^ dz_{2j}, as coefficient list.
std::vector<Poly> contract_symplectic(const VectorField& W);

Decomposition decompose_hamiltonian(const VectorField& W);
Decomposition decompose_field(const VectorField& W, FieldTag tag);

/// Time-t map of the field as a single generator.
ShearGen exact_flow(const ShearField& s, const Scalar& t);

/// Decomposition of a field whose coefficients carry trailing parameter
/// variables x: the field is split by x-monomials, each slice decomposed,
/// and summands of equal shape merged. Coefficients are polynomials in x
/// alone (num_vars = number of parameters); fields carry c = 1.
struct ParamSummand {
    ShearField field;
    Poly coefficient;
};
std::vector<ParamSummand> decompose_field_parametric(const VectorField& W, FieldTag tag);

}  // namespace shearkit
