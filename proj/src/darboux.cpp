#include "isq/darboux.hpp"

#include "isq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isq {

const char* to_string(DarbouxStep::Mode m) { return m == DarbouxStep::Mode::Add ? "add" : "remove"; }

namespace {

void require_schwartz(const FieldProfile& p)
{
    if (!p.asymptotics().is_schwartz())
        throw Error(ErrorKind::Unsupported, "Darboux steps are implemented for rapidly decreasing data");
}

std::string where(cplx z)
{
    std::ostringstream os;
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

// Solution vector (alpha, (c/c*) beta) at k0 on every node, each node rescaled
// by an arbitrary nonzero factor; only ratios enter the transformation.
std::vector<Vec2> dressing_vectors(const FieldProfile& p, const Coupling& c, const DarbouxStep& step,
                                   const IntegratorConfig& cfg)
{
    require_schwartz(p);
    const cplx k0 = step.k0;
    if (!(k0.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "k0 must lie in the upper half plane");
    if (c.regime() == Regime::Free) throw Error(ErrorKind::InvalidCoupling, "Darboux step needs c != 0");
    const BoundedColumns bc = bounded_columns(p, c, k0, cfg);
    const std::size_t i0 = (p.size() - 1) / 2;
    const Vec2 l0 = bc.left[i0], r0 = bc.right[i0];
    Mat2 m;
    m.col(0) = l0;
    m.col(1) = r0;
    const cplx a0 = m.determinant();
    const double scale = std::max(1e-300, l0.norm() * r0.norm());
    const bool is_zero = std::abs(a0) < kZeroTol * scale;
    const auto xs = p.xs();
    std::vector<Vec2> v(p.size());

    if (step.mode == DarbouxStep::Mode::Add) {
        if (is_zero) throw Error(ErrorKind::HigherOrderZero, "k0 " + where(k0) + " is already a zero of a");
        const cplx mu = step.mu.value_or(1.0);
        if (mu == cplx{}) throw Error(ErrorKind::InvalidArgument, "mixing coefficient must be nonzero");
        for (std::size_t i = 0; i < p.size(); ++i) {
            // R e^{-i k0 x} - mu L e^{i k0 x} divided by whichever exponential keeps it bounded.
            if (xs[i] <= 0.0)
                v[i] = std::exp(-2.0 * I * k0 * xs[i]) * bc.left[i] - mu * bc.right[i];
            else
                v[i] = bc.left[i] - mu * std::exp(2.0 * I * k0 * xs[i]) * bc.right[i];
        }
        return v;
    }

    if (!is_zero) throw Error(ErrorKind::RemoveNonexistentZero, "k0 " + where(k0) + " is not a zero of a");
    // Right column = gamma * left column at the zero.
    const cplx gamma = l0.dot(r0) / l0.squaredNorm();
    const cplx mu = step.mu.value_or(1.0 / gamma + 1.0);
    if (std::abs(1.0 - mu * gamma) < 1e-8)
        throw Error(ErrorKind::InvalidArgument, "mixing coefficient equals the norming constant");
    // Both columns are the bound state; each is used where it was integrated inward.
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = xs[i] <= 0.0 ? bc.left[i] : bc.right[i];
    return v;
}

struct Dressing {
    cplx k0;
    double s;
    Vec2 v;

    double denom() const { return std::norm(v(0)) - s * std::norm(v(1)); }
    void check(double x) const
    {
        const double d = denom();
        if (!(std::abs(d) > 1e-14 * v.squaredNorm())) {
            std::ostringstream os;
            os << "1 - (c/c*)|sigma|^2 vanishes at x = " << x;
            throw Error(ErrorKind::SingularH, os.str());
        }
    }
    Mat2 sigma() const
    {
        const double d = denom();
        const double n1 = std::norm(v(0)), n2 = std::norm(v(1));
        const cplx k0s = std::conj(k0);
        // alpha = v1, beta = s v2.
        const cplx ab = v(0) * std::conj(s * v(1));
        Mat2 S;
        S << (k0 * n1 - k0s * s * n2) / d, (k0s - k0) * ab / d, s * (k0 - k0s) * std::conj(ab) / d,
            (k0s * n1 - k0 * s * n2) / d;
        return S;
    }
    // sigma* / (1 - (c/c*)|sigma|^2) with sigma = beta / alpha.
    cplx shift_ratio() const { return s * v(0) * std::conj(v(1)) / denom(); }
};

}  // namespace

Mat2 sigma_matrix(const FieldProfile& p, const Coupling& c, const DarbouxStep& step, double x,
                  const IntegratorConfig& cfg)
{
    const double t = (x + p.L()) / p.h();
    const long j = std::lround(t);
    if (j < 0 || j >= static_cast<long>(p.size()) || std::abs(t - j) > 1e-6)
        throw Error(ErrorKind::InvalidArgument, "x must be a node of the profile grid");
    const auto v = dressing_vectors(p, c, step, cfg);
    const Dressing d{step.k0, c.conj_ratio(), v[static_cast<std::size_t>(j)]};
    d.check(x);
    return d.sigma();
}

FieldProfile apply_bt(const FieldProfile& p, const Coupling& c, const DarbouxStep& step, const IntegratorConfig& cfg)
{
    const auto v = dressing_vectors(p, c, step, cfg);
    const auto xs = p.xs();
    const double s = c.conj_ratio();
    const cplx k0 = step.k0;
    std::vector<cplx> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Dressing d{k0, s, v[i]};
        d.check(xs[i]);
        q[i] = p[i] - 2.0 * I * (std::conj(k0) - k0) * d.shift_ratio() / c.value();
    }
    return make_profile(std::move(q), p.L(), p.asymptotics(), p.boundary_tol());
}

ScatteringData bt_data_effect(const ScatteringData& sd, const DarbouxStep& step)
{
    const cplx k0 = step.k0;
    if (!(k0.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "k0 must lie in the upper half plane");
    ScatteringData out = sd;
    if (step.mode == DarbouxStep::Mode::Add) {
        for (const auto& z : sd.discrete)
            if (std::abs(z.position - k0) < kZeroTol * (1.0 + std::abs(k0)))
                throw Error(ErrorKind::HigherOrderZero, "k0 " + where(k0) + " is already a zero of a");
        for (std::size_t i = 0; i < out.size(); ++i) out.a[i] *= (out.kgrid[i] - k0) / (out.kgrid[i] - std::conj(k0));
        DiscreteEigenvalue z;
        z.position = k0;
        out.discrete.push_back(z);
    } else {
        auto it = std::find_if(out.discrete.begin(), out.discrete.end(), [&](const DiscreteEigenvalue& z) {
            return std::abs(z.position - k0) < kZeroTol * (1.0 + std::abs(k0));
        });
        if (it == out.discrete.end())
            throw Error(ErrorKind::RemoveNonexistentZero, "k0 " + where(k0) + " is not among the zeros");
        if (it->order != 1) throw Error(ErrorKind::HigherOrderZero, "only simple zeros can be removed");
        out.discrete.erase(it);
        for (std::size_t i = 0; i < out.size(); ++i) out.a[i] *= (out.kgrid[i] - std::conj(k0)) / (out.kgrid[i] - k0);
    }
    std::sort(out.discrete.begin(), out.discrete.end(), [](const DiscreteEigenvalue& a, const DiscreteEigenvalue& b) {
        return a.position.imag() < b.position.imag();
    });
    return out;
}

namespace {

Region strip_region(const FieldProfile& p, const Coupling& c, const std::optional<Region>& region)
{
    if (region) return *region;
    KGrid kg;
    kg.samples = {-5.0, 5.0};
    return default_region(p, c, kg);
}

}  // namespace

StripResult strip_solitons(const FieldProfile& p, const Coupling& c, const IntegratorConfig& cfg,
                           std::optional<Region> region)
{
    require_schwartz(p);
    const Region r = strip_region(p, c, region);
    StripResult out{p, {}};
    if (c.regime() == Regime::Free) return out;
    for (int guard = 0;; ++guard) {
        const auto zeros = find_zeros(out.profile, c, r, cfg);
        if (zeros.empty()) return out;
        if (guard > 64) throw Error(ErrorKind::NonConvergent, "zero removal did not terminate");
        // Largest bound state first.
        const auto top = std::max_element(zeros.begin(), zeros.end(), [](const auto& a, const auto& b) {
            return a.position.imag() < b.position.imag();
        });
        if (top->order != 1) throw Error(ErrorKind::HigherOrderZero, "zero at " + where(top->position) + " is not simple");
        DarbouxStep st;
        st.k0 = top->position;
        st.mode = DarbouxStep::Mode::Remove;
        out.profile = apply_bt(out.profile, c, st, cfg);
        out.steps.push_back(st);
    }
}

FieldProfile dual_quench(const FieldProfile& p, const Coupling& c, const Coupling& c0, const XGrid& grid,
                         const DualQuenchConfig& cfg)
{
    require_schwartz(p);
    if (c.regime() == Regime::Free || c0.regime() == Regime::Free)
        throw Error(ErrorKind::InvalidCoupling, "dual quench needs nonzero couplings");
    const cplx ratio = c.value() / c0.value();
    const bool same_grid = std::abs(grid.L - p.L()) < 1e-12 * p.L() && std::abs(grid.h - p.h()) < 1e-12 * p.h() &&
                           grid.count() == p.size();
    if (cfg.allow_rescaling && c.regime() == c0.regime() && std::abs(ratio.imag()) <= 1e-14 * std::abs(ratio) &&
        same_grid) {
        std::vector<cplx> q(p.values());
        for (auto& v : q) v *= ratio.real();
        return make_profile(std::move(q), p.L(), p.asymptotics(), p.boundary_tol());
    }
    if (cfg.kgrid.size() < 2) throw Error(ErrorKind::EmptyGrid, "dual quench needs a k grid");
    const StripResult stripped = strip_solitons(p, c, cfg.integrator, cfg.region);
    KGrid kg = cfg.kgrid;
    const ScatteringData sd = scatter_grid(stripped.profile, c, kg, cfg.integrator, Region{0, 0, 0, 0});
    const RadiativeData rd = radiative_data(sd);
    FieldProfile q = reconstruct_field(rd, c0, grid, 0.0, cfg.resolvent, std::max(p.boundary_tol(), 1e-3));
    for (auto it = stripped.steps.rbegin(); it != stripped.steps.rend(); ++it) {
        DarbouxStep add;
        add.k0 = it->k0;
        add.mode = DarbouxStep::Mode::Add;
        q = apply_bt(q, c0, add, cfg.integrator);
    }
    return q;
}

}  // namespace isq
