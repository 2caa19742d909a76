#include "isq/quench.hpp"

#include "isq/closed_forms.hpp"
#include "isq/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace isq {

QuenchReport quench_map(const FieldProfile& p, const Coupling& c, const Coupling& c_new, const KGrid& kgrid,
                        const IntegratorConfig& cfg)
{
    QuenchReport r;
    r.pre = scatter_grid(p, c, kgrid, cfg);
    r.post = scatter_grid(p, c_new, kgrid, cfg);
    r.soliton_inventory = r.post.discrete;
    r.radiative.resize(kgrid.size());
    for (std::size_t i = 0; i < kgrid.size(); ++i) {
        const cplx a = r.post.a[i];
        r.radiative[i] = std::abs(a) < 1e-14 ? cplx{NAN, NAN} : r.post.b[i] / a;
    }
    return r;
}

cplx evolution_phase(double k, double t) { return std::exp(cplx{0.0, -4.0 * k * k * t}); }

ScatteringData evolve_data(const ScatteringData& sd, double t)
{
    ScatteringData out = sd;
    for (std::size_t i = 0; i < out.size(); ++i) out.b[i] *= evolution_phase(out.kgrid[i], t);
    return out;
}

Classification classify_post_quench(const QuenchReport& report, double nu_effective, double b_threshold)
{
    Classification cl;
    cl.nu_effective = nu_effective;
    cl.found_N = static_cast<int>(report.soliton_inventory.size());
    for (const cplx& b : report.post.b) cl.max_b = std::max(cl.max_b, std::abs(b));
    if (report.post.coupling.regime() == Regime::Focusing && nu_effective > 0.0) {
        const RapidZeros rz = zeros_rapid(nu_effective);
        cl.predicted_N = static_cast<int>(rz.zeros.size());
        cl.marginal = rz.marginal;
    }
    if (cl.found_N == 0)
        cl.label = "pure-radiation";
    else if (cl.max_b < b_threshold)
        cl.label = "pure-multisoliton";
    else
        cl.label = "soliton+radiation";
    return cl;
}

namespace {

// Gauge-frame generator exp(i k s3 x) W exp(-i k s3 x) per unit coupling.
Mat2 unit_generator(cplx q, double k, double x)
{
    const cplx ph = std::exp(cplx{0.0, 2.0 * k * x});
    Mat2 u;
    u << 0.0, q * ph, std::conj(q) / ph, 0.0;
    return u;
}

struct State {
    Mat2 phi, theta;
};

State rhs(const State& s, const Mat2& u, cplx c, cplx dc)
{
    const Mat2 g = c * u;
    return {g * s.phi, s.phi.inverse() * (dc * u) * s.phi * s.theta};
}

State axpy(const State& s, double h, const State& d) { return {s.phi + h * d.phi, s.theta + h * d.theta}; }

bool finite_state(const State& s)
{
    for (int i = 0; i < 4; ++i)
        for (const cplx v : {s.phi(i), s.theta(i)})
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e150) return false;
    return true;
}

void run(const FineField& f, cplx c, cplx dc, double k, int side, std::vector<Mat2>& out)
{
    const std::size_t n = f.profile_size;
    const long per = 2L * f.substeps;
    const long last = static_cast<long>((n - 1) * per);
    const long dir = side > 0 ? -1 : 1;
    long j = side > 0 ? last : 0;
    const double h = 2.0 * f.dx * static_cast<double>(dir);
    State s{Mat2::Identity(), Mat2::Identity()};
    out[static_cast<std::size_t>(j / per)] = s.theta;
    for (long step = 0; step < static_cast<long>((n - 1) * f.substeps); ++step) {
        const double x0 = f.x0 + f.dx * static_cast<double>(j);
        const Mat2 u0 = unit_generator(f.q[j], k, x0);
        const Mat2 um = unit_generator(f.q[j + dir], k, x0 + 0.5 * h);
        const Mat2 u1 = unit_generator(f.q[j + 2 * dir], k, x0 + h);
        const State k1 = rhs(s, u0, c, dc);
        const State k2 = rhs(axpy(s, 0.5 * h, k1), um, c, dc);
        const State k3 = rhs(axpy(s, 0.5 * h, k2), um, c, dc);
        const State k4 = rhs(axpy(s, h, k3), u1, c, dc);
        s.phi += (h / 6.0) * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
        s.theta += (h / 6.0) * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
        j += 2 * dir;
        if (j % per == 0) {
            if (!finite_state(s))
                throw Error(ErrorKind::IntegratorDiverged, "Theta integration lost finiteness");
            out[static_cast<std::size_t>(j / per)] = s.theta;
        }
    }
}

int theta_substeps(const FieldProfile& p, const Coupling& c, const Coupling& c_new, double k,
                   const IntegratorConfig& cfg)
{
    double qmax = 0.0;
    for (const cplx& v : p.values()) qmax = std::max(qmax, std::abs(v));
    // The gauge frame oscillates at 2k and is stepped with plain RK4.
    const double scale =
        std::max({2.0 * std::abs(k), std::abs(c.value()) * qmax, std::abs(c_new.value()) * qmax});
    const double need = scale * p.h() / cfg.max_phase_step;
    if (!(need < 1e6)) return cfg.substeps;
    return std::max(cfg.substeps, static_cast<int>(std::ceil(need - 1e-9)));
}

ThetaSolution theta_on(const FineField& f, const Coupling& c, const Coupling& c_new, double k)
{
    ThetaSolution ts;
    ts.c = c.value();
    ts.c_new = c_new.value();
    ts.k = k;
    ts.plus.resize(f.profile_size);
    ts.minus.resize(f.profile_size);
    const cplx dc = c_new.value() - c.value();
    run(f, c.value(), dc, k, +1, ts.plus);
    run(f, c.value(), dc, k, -1, ts.minus);
    return ts;
}

void require_schwartz(const FieldProfile& p)
{
    if (!p.asymptotics().is_schwartz())
        throw Error(ErrorKind::Unsupported, "Theta factorization requires rapidly decreasing data");
}

bool unitary_coupling(const Coupling& c) { return c.regime() != Regime::Defocusing; }

}  // namespace

ThetaSolution higher_level_theta(const FieldProfile& p, const Coupling& c, const Coupling& c_new, double k,
                                 const IntegratorConfig& cfg)
{
    require_schwartz(p);
    const FineField f = resample(p, theta_substeps(p, c, c_new, k, cfg), cfg.interp_order);
    return theta_on(f, c, c_new, k);
}

std::vector<std::size_t> default_x_nodes(const FieldProfile& p, int count)
{
    if (count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one x sample");
    std::vector<std::size_t> nodes;
    const double L = p.L();
    for (int i = 0; i < count; ++i) {
        const double x = count == 1 ? 0.0 : -0.5 * L + L * i / (count - 1);
        const long j = std::lround((x + L) / p.h());
        nodes.push_back(static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(p.size()) - 1)));
    }
    return nodes;
}

FactorizationReport verify_factorization(const FieldProfile& p, const Coupling& c, const Coupling& c_new,
                                         const KGrid& kgrid, const std::vector<std::size_t>& x_nodes,
                                         const IntegratorConfig& cfg)
{
    require_schwartz(p);
    for (std::size_t j : x_nodes)
        if (j >= p.size()) throw Error(ErrorKind::InvalidArgument, "x sample outside the profile grid");
    const ScatteringData S0 = scatter_grid(p, c, kgrid, cfg, Region{0, 0, 0, 0});
    const ScatteringData S1 = scatter_grid(p, c_new, kgrid, cfg, Region{0, 0, 0, 0});
    const bool check_unitary = unitary_coupling(c) && unitary_coupling(c_new);
    const std::size_t nk = kgrid.size();
    const std::size_t last = p.size() - 1;
    struct PerK {
        double residual = 0.0, spread = 0.0, norm = 0.0, limits = 0.0, unit = 0.0;
    };
    std::vector<PerK> per(nk);
    parallel_for(nk, [&](std::size_t i) {
        const double k = kgrid[i];
        const FineField f = resample(p, theta_substeps(p, c, c_new, k, cfg), cfg.interp_order);
        const ThetaSolution ts = theta_on(f, c, c_new, k);
        const Mat2 S = S0.assembled(i), Sn = S1.assembled(i);
        PerK r;
        std::vector<double> res;
        for (std::size_t j : x_nodes) {
            const double e = (ts.minus[j].inverse() * S * ts.plus[j] - Sn).norm();
            res.push_back(e);
            r.residual = std::max(r.residual, e);
        }
        double mean = 0.0;
        for (double e : res) mean += e;
        mean /= static_cast<double>(res.size());
        double var = 0.0;
        for (double e : res) var += (e - mean) * (e - mean);
        r.spread = std::sqrt(var / static_cast<double>(res.size()));
        r.norm = std::max((ts.plus[last] - Mat2::Identity()).norm(), (ts.minus[0] - Mat2::Identity()).norm());
        r.limits = std::max((S * ts.plus[0] - Sn).norm(), (ts.minus[last].inverse() * S - Sn).norm());
        if (check_unitary) {
            for (const auto* v : {&ts.plus, &ts.minus})
                for (const Mat2& t : *v) {
                    r.unit = std::max(r.unit, (t.adjoint() * t - Mat2::Identity()).norm());
                    r.unit = std::max(r.unit, std::abs(t.determinant() - 1.0));
                }
        }
        per[i] = r;
    });
    FactorizationReport rep;
    rep.unitarity_checked = check_unitary;
    for (const PerK& r : per) {
        rep.max_residual = std::max(rep.max_residual, r.residual);
        rep.max_x_spread = std::max(rep.max_x_spread, r.spread);
        rep.boundary_normalization = std::max(rep.boundary_normalization, r.norm);
        rep.boundary_limits = std::max(rep.boundary_limits, r.limits);
        rep.unitarity = std::max(rep.unitarity, r.unit);
    }
    const auto xs = p.xs();
    for (std::size_t j : x_nodes) rep.x_samples.push_back(xs[j]);
    return rep;
}

}  // namespace isq
