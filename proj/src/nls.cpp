#include "isq/nls.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace isq {

namespace {

std::mutex planner_mutex;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_config(const StepperConfig& cfg)
{
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    if (cfg.n_modes < 256 || !power_of_two(cfg.n_modes))
        throw Error(ErrorKind::InvalidArgument, "n_modes must be a power of two >= 256");
}

double background(const FieldProfile& p)
{
    const Asymptotics& a = p.asymptotics();
    if (a.is_schwartz()) return 0.0;
    if (a.theta != 0.0)
        throw Error(ErrorKind::Unsupported, "periodic evolution needs equal boundary values (theta = 0)");
    return a.rho;
}

std::vector<double> wavenumbers(int n, double L)
{
    std::vector<double> k(n);
    for (int j = 0; j < n; ++j) k[j] = M_PI / L * (j < n / 2 ? j : j - n);
    return k;
}

class Propagator {
public:
    Propagator(const FieldProfile& p, const Coupling& c, const StepperConfig& cfg)
        : n_(cfg.n_modes), cfg_(cfg), rho2_(0.0), g_(2.0 * c.value() * c.value())
    {
        check_config(cfg);
        if (p.size() != static_cast<std::size_t>(n_) + 1) {
            std::ostringstream os;
            os << "profile has " << p.size() << " nodes, expected n_modes + 1 = " << n_ + 1;
            throw Error(ErrorKind::InvalidArgument, os.str());
        }
        const double rho = background(p);
        rho2_ = rho * rho;
        buf_ = fftw_alloc_complex(static_cast<std::size_t>(n_));
        {
            std::lock_guard<std::mutex> lock(planner_mutex);
            fwd_ = fftw_plan_dft_1d(n_, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_1d(n_, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        k_ = wavenumbers(n_, p.L());
        q_.assign(p.values().begin(), p.values().begin() + n_);
    }
    ~Propagator()
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Propagator(const Propagator&) = delete;
    Propagator& operator=(const Propagator&) = delete;

    void advance(double dt)
    {
        linear(0.5 * dt);
        for (auto& v : q_) v *= std::exp(cplx{0.0, -g_.real() * (std::norm(v) - rho2_) * dt});
        linear(0.5 * dt);
        guard();
    }

    FieldProfile profile(const FieldProfile& like) const
    {
        std::vector<cplx> v(q_);
        v.push_back(q_.front());
        return make_profile(std::move(v), like.L(), like.asymptotics(), like.boundary_tol());
    }

private:
    cplx* data() { return reinterpret_cast<cplx*>(buf_); }

    void linear(double tau)
    {
        std::copy(q_.begin(), q_.end(), data());
        fftw_execute(fwd_);
        const double norm = 1.0 / n_;
        const int cut = n_ / 3;
        for (int j = 0; j < n_; ++j) {
            const bool drop = cfg_.dealias && std::abs(j < n_ / 2 ? j : j - n_) > cut;
            data()[j] *= drop ? 0.0 : std::exp(cplx{0.0, -k_[j] * k_[j] * tau}) * norm;
        }
        fftw_execute(bwd_);
        std::copy(data(), data() + n_, q_.begin());
    }

    void guard() const
    {
        for (const cplx& v : q_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > cfg_.blowup_guard)
                throw Error(ErrorKind::BlowUp, "field amplitude exceeded the guard");
    }

    int n_;
    StepperConfig cfg_;
    double rho2_;
    // 2 c^2 is real on the admissible rays.
    cplx g_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
    std::vector<double> k_;
    std::vector<cplx> q_;
};

void run_to(Propagator& prop, double span, double dt)
{
    if (span <= 0.0) return;
    const long steps = static_cast<long>(std::floor(span / dt + 1e-9));
    for (long s = 0; s < steps; ++s) prop.advance(dt);
    const double rest = span - steps * dt;
    if (rest > 1e-12 * dt) prop.advance(rest);
}

double box_sum(const FieldProfile& p, const std::vector<double>& f)
{
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) acc += f[i];
    return acc * p.h();
}

}  // namespace

XGrid periodic_grid(double L, int n_modes)
{
    if (n_modes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two modes");
    return XGrid{L, 2.0 * L / n_modes};
}

FieldProfile step(const FieldProfile& p, const Coupling& c, const StepperConfig& cfg)
{
    Propagator prop(p, c, cfg);
    prop.advance(cfg.dt);
    return prop.profile(p);
}

FieldProfile evolve(const FieldProfile& p, const Coupling& c, double t, const StepperConfig& cfg)
{
    if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "evolution time must be non-negative");
    Propagator prop(p, c, cfg);
    run_to(prop, t, cfg.dt);
    return prop.profile(p);
}

double mass(const FieldProfile& p)
{
    std::vector<double> f(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) f[i] = std::norm(p[i]);
    return box_sum(p, f);
}

double hamiltonian(const FieldProfile& p, const Coupling& c)
{
    const int n = static_cast<int>(p.size()) - 1;
    if (!power_of_two(n)) throw Error(ErrorKind::InvalidArgument, "profile is not on a periodic power-of-two grid");
    const double rho = background(p);
    std::vector<cplx> d(n);
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    cplx* data = reinterpret_cast<cplx*>(buf);
    for (int i = 0; i < n; ++i) data[i] = p[i];
    fftw_execute(fwd);
    const auto k = wavenumbers(n, p.L());
    for (int j = 0; j < n; ++j) data[j] *= (j == n / 2 ? 0.0 : 1.0) * I * k[j] / static_cast<double>(n);
    fftw_execute(bwd);
    std::copy(data, data + n, d.begin());
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    const double c2 = (c.value() * c.value()).real();
    std::vector<double> f(p.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double u = std::norm(p[i]) - rho * rho;
        f[i] = std::norm(d[i]) + c2 * u * u;
    }
    return box_sum(p, f);
}

double boundary_fraction(const FieldProfile& p)
{
    const double total = mass(p);
    if (total == 0.0) return 0.0;
    const double edge = 0.95 * p.L();
    const auto xs = p.xs();
    std::vector<double> f(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (std::abs(xs[i]) >= edge) f[i] = std::norm(p[i]);
    return box_sum(p, f) / total;
}

EvolutionRecord evolve_snapshots(const FieldProfile& p, const Coupling& c, const std::vector<double>& times,
                                 const StepperConfig& cfg)
{
    EvolutionRecord rec;
    Propagator prop(p, c, cfg);
    const double m0 = mass(p);
    const bool periodic = power_of_two(static_cast<int>(p.size()) - 1);
    const double h0 = periodic ? hamiltonian(p, c) : 0.0;
    double now = 0.0;
    for (double t : times) {
        if (t < now) throw Error(ErrorKind::InvalidArgument, "snapshot times must be ascending and non-negative");
        run_to(prop, t - now, cfg.dt);
        now = t;
        FieldProfile snap = prop.profile(p);
        rec.mass_drift = std::max(rec.mass_drift, std::abs(mass(snap) - m0));
        if (periodic) rec.hamiltonian_drift = std::max(rec.hamiltonian_drift, std::abs(hamiltonian(snap, c) - h0));
        rec.max_boundary_fraction = std::max(rec.max_boundary_fraction, boundary_fraction(snap));
        rec.times.push_back(t);
        rec.snapshots.push_back(std::move(snap));
    }
    return rec;
}

IsospectralReport isospectral_check(const FieldProfile& p, const Coupling& c, double t, const KGrid& kgrid,
                                    const StepperConfig& cfg, const IntegratorConfig& icfg, double b_floor)
{
    if (!p.asymptotics().is_schwartz()) throw Error(ErrorKind::Unsupported, "isospectral check needs Schwartz data");
    const EvolutionRecord rec = evolve_snapshots(p, c, {t}, cfg);
    const FieldProfile& pt = rec.snapshots.back();
    const Region none{0, 0, 0, 0};
    const ScatteringData s0 = scatter_grid(p, c, kgrid, icfg, none);
    const ScatteringData s1 = scatter_grid(pt, c, kgrid, icfg, none);
    IsospectralReport r;
    r.mass_drift = rec.mass_drift;
    r.max_boundary_fraction = rec.max_boundary_fraction;
    auto wrap = [](double a) { return std::remainder(a, 2.0 * M_PI); };
    for (std::size_t i = 0; i < kgrid.size(); ++i) {
        r.max_abs_a_drift = std::max(r.max_abs_a_drift, std::abs(std::abs(s1.a[i]) - std::abs(s0.a[i])));
        if (std::abs(s0.b[i]) <= b_floor || std::abs(s1.b[i]) <= b_floor) continue;
        const double k = kgrid[i];
        const double phase = std::arg(s1.b[i] / s0.b[i]);
        r.max_phase_residual = std::max(r.max_phase_residual, std::abs(wrap(phase + 4.0 * k * k * t)));
        r.max_phase_residual_plus = std::max(r.max_phase_residual_plus, std::abs(wrap(phase - 4.0 * k * k * t)));
        ++r.phase_points;
    }
    return r;
}

}  // namespace isq
