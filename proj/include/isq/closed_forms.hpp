#pragma once

#include "isq/core.hpp"

#include <utility>

namespace isq {

struct SolitonParamsRD {
    double A = 1.0;
    double V = 0.0;
    double phase = 0.0;
    double x0 = 0.0;
};

struct SolitonParamsFD {
    double rho = 1.0;
    double theta = M_PI / 2;
    // Coupling of the unquenched defocusing flow that the kink solves.
    double c = 1.0;
    double nu() const;
    double velocity() const;
};

using ABPair = std::pair<cplx, cplx>;

cplx sech_complex(cplx w);
// sin(z)/z with the removable singularity filled in.
cplx sinc_complex(cplx z);

FieldProfile soliton_profile_rd(const SolitonParamsRD& params, const XGrid& grid,
                                double boundary_tol = kDefaultBoundaryTol);
ABPair ab_rapid(cplx k, cplx c, double A, double V);

struct RapidZeros {
    std::vector<DiscreteEigenvalue> zeros;
    // A zero sits exactly on the real axis and was left out.
    bool marginal = false;
};
RapidZeros zeros_rapid(double nu, double A = 1.0, double V = 0.0);

FieldProfile soliton_profile_fd_defocusing(const SolitonParamsFD& params, const XGrid& grid,
                                           double boundary_tol = kDefaultBoundaryTol);
// mu(k) for density rho at a complex coupling: the gap branch on the positive
// real axis, the principal root of k^2 + |c|^2 rho^2 on the imaginary axis.
cplx mu_continued(cplx k, cplx c, double rho);
ABPair ab_finite_defocusing(cplx k, cplx c, const SolitonParamsFD& params);
// Reflectionless value of a at integer coupling n from the finite product.
cplx a_finite_defocusing_product(cplx k, int n, const SolitonParamsFD& params);

double fd_focusing_amplitude(double Z);
FieldProfile profile_fd_focusing(double A, const XGrid& grid, double boundary_tol = kDefaultBoundaryTol);
ABPair ab_finite_focusing(cplx k, double g, double A);

}  // namespace isq
