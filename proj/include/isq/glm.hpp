#pragma once

#include "isq/core.hpp"

namespace isq {

struct RadiativeData {
    KGrid kgrid;
    std::vector<cplx> rho;
    Coupling coupling;
};

// Reflection coefficient b/a of zero-free data. Throws NotRadiative if zeros are listed.
RadiativeData radiative_data(const ScatteringData& sd);

struct ResolventConfig {
    // 0: the +i0 boundary value, with the density linear between samples and
    // the phase integrated exactly. eps > 0: kernel 1/(l - k + i eps) over
    // cells of constant density.
    double eps = 0.0;
    int neumann_terms = 12;
    double neumann_stop = 1e-12;
    double max_condition = 1e12;
};

// Trapezoid weights for the k samples.
std::vector<double> trapezoid_weights(const KGrid& kgrid);

// F(x) = int dk/2pi rho(k) exp(-i k x).
cplx f_kernel(const RadiativeData& rd, double x);

// Born term -(2/c) F(2x).
cplx born_term(const RadiativeData& rd, const Coupling& c0, double x);

cplx glm_neumann(const RadiativeData& rd, const Coupling& c0, double x, const ResolventConfig& cfg = {});
cplx rosales_resummed(const RadiativeData& rd, const Coupling& c0, double x, double t, const ResolventConfig& cfg = {});

FieldProfile reconstruct_field(const RadiativeData& rd, const Coupling& c0, const XGrid& grid, double t,
                               const ResolventConfig& cfg = {}, double boundary_tol = 1e-3);
// Same reconstruction through the truncated Neumann series.
FieldProfile reconstruct_field_neumann(const RadiativeData& rd, const Coupling& c0, const XGrid& grid,
                                       const ResolventConfig& cfg = {}, double boundary_tol = 1e-3);

}  // namespace isq
