#pragma once

#include "isq/core.hpp"

#include <functional>

namespace isq {

struct IntegratorConfig {
    // Minimum integration steps per profile interval; midpoint samples come
    // from interpolation of order interp_order.
    int substeps = 1;
    int interp_order = 6;
    int refinement_factor = 2;
    double det_tol = 1e-8;
    // Bound on max(|mu|, |c| max|q|) h_ode; extra substeps are taken beyond it.
    // Set to infinity for a strictly fixed step.
    double max_phase_step = 0.035;
    double step(const FieldProfile& p) const { return p.h() / substeps; }
};

// Branch of mu(k) with mu ~ k at infinity and the cut on the gap.
cplx mu_branch(const Coupling& c, const Asymptotics& asym, cplx k);

struct AsymptoticFrame {
    cplx mu;
    Mat2 lambda_plus, lambda_minus;
    Mat2 P_plus, P_minus;
    Mat2 W_plus, W_minus;
    // E_side(x) = P_side exp(-i Lambda_side x), side = +1 or -1.
    Mat2 E(int side, double x) const;
};

AsymptoticFrame asymptotic_frame(const Coupling& c, const Asymptotics& asym, cplx k);

struct JostSolution {
    int side = +1;
    std::vector<Mat2> samples;
};

// Interpolated field on the half-step lattice of the integrator.
struct FineField {
    double x0 = 0.0;
    double dx = 0.0;
    int substeps = 1;
    std::vector<cplx> q;
    std::size_t profile_size = 0;
    Asymptotics asym;
    double L = 0.0;
    // Fine index of profile node i.
    std::size_t node(std::size_t i) const { return 2 * static_cast<std::size_t>(substeps) * i; }
};

FineField resample(const FieldProfile& p, int substeps, int order = 6);

JostSolution jost_plus(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg = {});
JostSolution jost_minus(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg = {});

Mat2 scattering_matrix(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg = {});
Mat2 scattering_matrix(const FineField& f, const Coupling& c, double k);

struct Region {
    double re_min, re_max, im_min, im_max;
};

struct ZeroSearchConfig {
    int edge_samples = 24;
    double max_arg_step = 0.6;
    double min_box = 1e-3;
    double newton_tol = 1e-12;
    int newton_max_iter = 60;
    int max_retries = 4;
    double near_axis = 1e-4;
};

// Default search rectangle: the grid's k range by [im_floor, |c| max|q| + 1].
Region default_region(const FieldProfile& p, const Coupling& c, const KGrid& kgrid, double im_floor = 0.02);

ScatteringData scatter_grid(const FieldProfile& p, const Coupling& c, const KGrid& kgrid,
                            const IntegratorConfig& cfg = {});
// As scatter_grid with an explicit zero-search region; a region with
// im_max <= im_min skips the discrete search.
ScatteringData scatter_grid(const FieldProfile& p, const Coupling& c, const KGrid& kgrid,
                            const IntegratorConfig& cfg, const Region& region, const ZeroSearchConfig& zcfg = {});

cplx analytic_continue_a(const FieldProfile& p, const Coupling& c, cplx k, const IntegratorConfig& cfg = {});

// Bounded columns at complex k, gauge factored out: left = Psi^-_1 e^{i mu x},
// right = Psi^+_2 e^{-i mu x}, sampled on every profile node.
struct BoundedColumns {
    cplx k, mu;
    std::vector<Vec2> left, right;
};
BoundedColumns bounded_columns(const FieldProfile& p, const Coupling& c, cplx k, const IntegratorConfig& cfg = {});

// Ratio gamma with Psi^+_2 = gamma Psi^-_1 evaluated at x = 0.
cplx norming_constant(const FieldProfile& p, const Coupling& c, cplx k0, const IntegratorConfig& cfg = {});

std::vector<DiscreteEigenvalue> find_zeros(const FieldProfile& p, const Coupling& c, const Region& region,
                                           const IntegratorConfig& cfg = {}, const ZeroSearchConfig& zcfg = {});
// Zero search on an arbitrary analytic function.
std::vector<DiscreteEigenvalue> find_zeros(const std::function<cplx(cplx)>& f, const Region& region,
                                           const ZeroSearchConfig& zcfg = {});
// Argument-principle count of zeros inside the rectangle.
int winding_count(const std::function<cplx(cplx)>& f, const Region& region, const ZeroSearchConfig& zcfg = {});

cplx reflection(const ScatteringData& sd, double k);

}  // namespace isq
