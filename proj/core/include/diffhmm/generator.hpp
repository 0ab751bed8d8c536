#pragma once

#include <vector>

#include "diffhmm/grid.hpp"
#include "diffhmm/model.hpp"

namespace diffhmm {

/// First derivative along one axis: central in the interior, one-sided
/// second-order at the box faces.
Eigen::VectorXd axis_first_derivative(const Eigen::VectorXd& f, const GridSpace& grid,
                                      int axis);
/// Second derivative along one axis, same stencil policy.
Eigen::VectorXd axis_second_derivative(const Eigen::VectorXd& f, const GridSpace& grid,
                                       int axis);

/// Generator applied to a grid function:
///   D h = u . grad h + 1/2 trace(Sigma hess h),
/// by second-order finite differences.
FunctionVector generator_apply(const DiffusionModel& model, const FunctionVector& h,
                               const GridSpace& grid);

/// Nonlinear generator H(F) = exp(-F) D exp(F), evaluated in the expanded form
///   H(F) = u . grad F + 1/2 trace(Sigma hess F) + 1/2 grad F . Sigma grad F,
/// which never exponentiates F (exp(F) overflows on wide boxes).
FunctionVector nonlinear_generator(const DiffusionModel& model, const FunctionVector& F,
                                   const GridSpace& grid);

/// Certificate for the drift inequality H(V) <= -delta W + b 1_C.
struct LyapunovCertificate {
    FunctionVector V;
    FunctionVector W;
    double delta = 0.0;
    double b = 0.0;
    std::vector<int> C;
    double bPrime = 0.0;  // b * sup_C exp(V - min V)
    bool passed = false;
    double worstSlack = 0.0;
    int worstNode = -1;
    FunctionVector slack;  // H(V) + delta W - b 1_C per node
    double tol = 0.0;
};

/// Default slack tolerance: 10 h^2 scaled by the magnitude of H(V).
double default_dv3_tol(const FunctionVector& HV, const GridSpace& grid);

/// Evaluate the drift inequality node by node. W must be >= 1 everywhere and
/// C nonempty. A negative `tol` selects the default. `supCv`, when positive,
/// overrides the node maximum of exp(V - min V) over C in the b' computation
/// (used when C is given as a ball and the true supremum lies between nodes).
LyapunovCertificate certify_dv3(const DiffusionModel& model, const FunctionVector& V,
                                const FunctionVector& W, double delta, double b,
                                const std::vector<int>& C, const GridSpace& grid,
                                double tol = -1.0, double supCv = -1.0);

}  // namespace diffhmm
