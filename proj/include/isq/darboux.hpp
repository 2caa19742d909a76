#pragma once

#include "isq/glm.hpp"
#include "isq/zs.hpp"

#include <optional>
#include <utility>

namespace isq {

struct DarbouxStep {
    enum class Mode { Add, Remove };
    cplx k0;
    // Mixing coefficient of the two Jost columns. Unset: 1 for Add, the norming
    // constant plus 1 for Remove.
    std::optional<cplx> mu;
    Mode mode = Mode::Add;
};

const char* to_string(DarbouxStep::Mode m);

// Relative size of |a(k0)| below which k0 counts as a zero of a.
inline constexpr double kZeroTol = 1e-6;

Mat2 sigma_matrix(const FieldProfile& p, const Coupling& c, const DarbouxStep& step, double x,
                  const IntegratorConfig& cfg = {});

FieldProfile apply_bt(const FieldProfile& p, const Coupling& c, const DarbouxStep& step,
                      const IntegratorConfig& cfg = {});

ScatteringData bt_data_effect(const ScatteringData& sd, const DarbouxStep& step);

struct StripResult {
    FieldProfile profile;
    std::vector<DarbouxStep> steps;
};

// Removes every zero found in the region, largest Im k0 first.
StripResult strip_solitons(const FieldProfile& p, const Coupling& c, const IntegratorConfig& cfg = {},
                           std::optional<Region> region = std::nullopt);

struct DualQuenchConfig {
    KGrid kgrid;
    IntegratorConfig integrator;
    ResolventConfig resolvent;
    // Same-regime quenches with real c/c0 reduce to q -> (c/c0) q when allowed.
    bool allow_rescaling = true;
    std::optional<Region> region;
};

FieldProfile dual_quench(const FieldProfile& p, const Coupling& c, const Coupling& c0, const XGrid& grid,
                         const DualQuenchConfig& cfg);

}  // namespace isq
