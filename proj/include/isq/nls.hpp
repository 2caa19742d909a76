#pragma once

#include "isq/zs.hpp"

namespace isq {

// Split-step Fourier integrator for i q_t + q_xx - 2 c^2 |q|^2 q = 0 on the
// periodic box [-L, L). The profile's last node is the periodic image of the
// first, so a profile with n_modes + 1 nodes is expected.
struct StepperConfig {
    double dt = 1e-4;
    int n_modes = 2048;
    bool dealias = false;
    double blowup_guard = 1e6;
};

FieldProfile step(const FieldProfile& p, const Coupling& c, const StepperConfig& cfg);
FieldProfile evolve(const FieldProfile& p, const Coupling& c, double t, const StepperConfig& cfg);

// Profile on the periodic grid matching cfg: n_modes + 1 nodes over [-L, L].
XGrid periodic_grid(double L, int n_modes);

double mass(const FieldProfile& p);
// int |q_x|^2 + c^2 (|q|^2 - rho^2)^2 dx with a spectral derivative.
double hamiltonian(const FieldProfile& p, const Coupling& c);
// Fraction of the mass within 5% of the box edges.
double boundary_fraction(const FieldProfile& p);

struct EvolutionRecord {
    std::vector<double> times;
    std::vector<FieldProfile> snapshots;
    double mass_drift = 0.0;
    double hamiltonian_drift = 0.0;
    double max_boundary_fraction = 0.0;
};

// Snapshots at the requested (ascending, non-negative) times.
EvolutionRecord evolve_snapshots(const FieldProfile& p, const Coupling& c, const std::vector<double>& times,
                                 const StepperConfig& cfg);

struct IsospectralReport {
    double max_abs_a_drift = 0.0;
    // Against the implemented law b(t) = exp(-4 i k^2 t) b(0).
    double max_phase_residual = 0.0;
    // Against the opposite sign exp(+4 i k^2 t).
    double max_phase_residual_plus = 0.0;
    std::size_t phase_points = 0;
    double mass_drift = 0.0;
    double max_boundary_fraction = 0.0;
};

IsospectralReport isospectral_check(const FieldProfile& p, const Coupling& c, double t, const KGrid& kgrid,
                                    const StepperConfig& cfg, const IntegratorConfig& icfg = {},
                                    double b_floor = 1e-3);

}  // namespace isq
