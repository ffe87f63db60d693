#pragma once

#include <string>
#include <vector>

#include "shearkit/curve.hpp"
#include "shearkit/decompose.hpp"

namespace shearkit {

struct PipelineConfig {
    int steps = 1;       // N, time subdivision
    int order = 8;       // k, truncation order of the isotopy field
    std::vector<double> radii;  // polydisc radii per coordinate; empty means all 1
    int angles = 8;
    std::vector<double> radius_fractions{0.5, 1.0};
    Backend backend = Backend::approx;

    /// Throws InvalidInput unless N >= 1, k >= 2 and the grid is non-empty.
    void validate() const;
};

struct StepReport {
    double t;
    double truncation_residual;
    double decomposition_residual;
    std::size_t summands;
};

struct ErrorReport {
    double sup_error = 0;
    double truncation_residual = 0;     // max over steps
    double decomposition_residual = 0;  // max over steps
    std::vector<StepReport> steps;
    double seconds = 0;
};

/// Tensor grid of roots of unity at the configured radii.
std::vector<Point> polydisc_grid(std::size_t n, const PipelineConfig& cfg);

/// V(t) = (d/dt H_t) o H_t^{-1} through degree k, H_t(z) = H(t z) / t.
/// H must be in Schwarz form; trailing parameter variables are carried.
VectorField isotopy_field(const PolyMap& H, const Scalar& t, int k);

/// Coefficient bound on the polydisc for the degree k+1..2k part of V(t).
double truncation_residual(const PolyMap& H, const Scalar& t, int k, const std::vector<double>& radii);

struct Approximation {
    ShearWord word;
    ErrorReport report;
};

/// Word approximating target on the polydisc: the flows of the frozen
/// isotopy fields followed by the affine part z -> a + A z.
Approximation approximate(const PolyMap& target, GroupTag tag, const PipelineConfig& cfg);
Approximation approximate(const ShearWord& target, GroupTag tag, const PipelineConfig& cfg);

struct InterpolatingApproximation {
    ParamAutCurve curve;
    ErrorReport report;
    double node_error = 0;  // max |Phi(x_k)(z) - z| over nodes and polydisc samples
};

/// target is a PolyMap in (z, x) with one trailing parameter x and
/// target(x_k) = identity at every node. Flow times vanish structurally at
/// the nodes. The error is measured over a grid of the disc |x| <= R.
InterpolatingApproximation approximate_interpolating(const PolyMap& target, const std::vector<Scalar>& nodes,
                                                     double R, GroupTag tag, const PipelineConfig& cfg);

struct ConvergenceRow {
    int N;
    double sup_error;
    double truncation_residual;
    double seconds;
};

std::vector<ConvergenceRow> convergence_study(const PolyMap& target, GroupTag tag, const std::vector<int>& Ns,
                                              const PipelineConfig& cfg);
std::vector<ConvergenceRow> convergence_study(const ShearWord& target, GroupTag tag, const std::vector<int>& Ns,
                                              const PipelineConfig& cfg);

/// CSV with header N,sup_error,truncation_residual,seconds.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, bool timing = true);

}  // namespace shearkit
