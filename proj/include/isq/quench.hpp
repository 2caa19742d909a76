#pragma once

#include "isq/zs.hpp"

#include <string>

namespace isq {

struct QuenchReport {
    ScatteringData pre;
    ScatteringData post;
    std::vector<DiscreteEigenvalue> soliton_inventory;
    // Reflection coefficient b/a of the post-quench data on the shared grid.
    std::vector<cplx> radiative;
};

QuenchReport quench_map(const FieldProfile& p, const Coupling& c, const Coupling& c_new, const KGrid& kgrid,
                        const IntegratorConfig& cfg = {});

// b(k) -> exp(-4 i k^2 t) b(k); a and the discrete positions are unchanged.
ScatteringData evolve_data(const ScatteringData& sd, double t);
cplx evolution_phase(double k, double t);

struct Classification {
    std::string label;
    int predicted_N = 0;
    int found_N = 0;
    double nu_effective = 0.0;
    double max_b = 0.0;
    bool marginal = false;
};

Classification classify_post_quench(const QuenchReport& report, double nu_effective, double b_threshold = 1e-6);

struct ThetaSolution {
    std::vector<Mat2> plus, minus;
    cplx c, c_new;
    double k = 0.0;
};

ThetaSolution higher_level_theta(const FieldProfile& p, const Coupling& c, const Coupling& c_new, double k,
                                 const IntegratorConfig& cfg = {});

struct FactorizationReport {
    double max_residual = 0.0;
    // Largest over k of the standard deviation of the residual across x.
    double max_x_spread = 0.0;
    // |Theta_+(L) - 1| and |Theta_-(-L) - 1|.
    double boundary_normalization = 0.0;
    // Max over k of |S Theta_+(-L) - S'| and |Theta_-(L)^{-1} S - S'|.
    double boundary_limits = 0.0;
    // Max over k and x of |Theta^dagger Theta - 1| and |det Theta - 1| (focusing pairs only).
    double unitarity = 0.0;
    bool unitarity_checked = false;
    std::vector<double> x_samples;
};

// Default sample points: 9 grid nodes spread uniformly over [-L/2, L/2].
std::vector<std::size_t> default_x_nodes(const FieldProfile& p, int count = 9);

FactorizationReport verify_factorization(const FieldProfile& p, const Coupling& c, const Coupling& c_new,
                                         const KGrid& kgrid, const std::vector<std::size_t>& x_nodes,
                                         const IntegratorConfig& cfg = {});

}  // namespace isq
