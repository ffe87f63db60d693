#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "shearkit/curve.hpp"

namespace shearkit {

/// z -> A z + b on C^2.
struct PlanarAffine {
    Matrix A;
    ScalarVec b;

    static PlanarAffine identity(Backend b);
    bool is_identity() const;
    /// Member of S = A n E: the second output does not depend on x.
    bool in_s() const;
};

/// (x, y) -> (a x + p(y), b y + c), p univariate.
struct Elementary {
    Scalar a, b, c;
    Poly p;

    /// max(1, deg p).
    int degree() const;
};

using PlanarFactor = std::variant<PlanarAffine, Elementary>;

PolyMap to_polymap(const PlanarFactor& f);
PlanarFactor inverse(const PlanarFactor& f);
int degree_of(const PlanarFactor& f);

/// g as a word of affine and elementary factors in application order.
///
/// Canonical form: every elementary factor is (x + p(y), y) with p free of
/// terms of degree < 2; every affine factor that is followed by an
/// elementary one is either absent or (y, x + l y). All remaining S-parts
/// are carried toward the last-applied factor, which is an arbitrary affine
/// map (omitted when it is the identity). An affine g is a single factor.
struct Factorization {
    std::vector<PlanarFactor> factors;
    PolyMap source;
    /// Only exact factorizations are certified; approximate ones pass the
    /// leading-form tests within a relative tolerance of 1e-8.
    bool certified = true;

    PolyMap recompose() const;
};

using Polydegree = std::vector<int>;

/// Throws NonConstantJacobian when det Dg is not a nonzero constant and
/// NotAnAutomorphism when the degree reduction stalls.
Factorization jvdk_factor(const PolyMap& g);

/// Folds neighbours of the same kind and brings the word to canonical form.
std::vector<PlanarFactor> canonicalize(std::vector<PlanarFactor> word, Backend b);

Polydegree polydegree(const Factorization& f);
/// Max total degree of the components.
int degree_of(const PolyMap& g);
int stratum_dim(const Polydegree& pd);
Factorization invert_planar(const Factorization& f);

struct PlanarInterpolation {
    ParamAutCurve curve;
    std::vector<Polydegree> classes;
    /// class_of[k] indexes `classes` for node k.
    std::vector<std::size_t> class_of;
    /// One family per class, through the targets of that class.
    std::vector<std::shared_ptr<const ParamAutCurve>> families;
};

/// Curve through finitely many planar automorphisms, built class by class
/// over polydegree strata. Factorization runs in the targets' backend; the
/// curve is built in `out` (default: the same backend). An exact curve
/// needs constant units per slot and equal Jacobian determinants where
/// classes cancel, otherwise Transcendental is thrown.
PlanarInterpolation planar_interpolation(const std::vector<Scalar>& nodes, const std::vector<PolyMap>& targets,
                                         std::optional<Backend> out = std::nullopt);

ParamAutCurve interp_planar_bounded(const std::vector<Scalar>& nodes, const std::vector<PolyMap>& targets,
                                    std::optional<Backend> out = std::nullopt);

}  // namespace shearkit
