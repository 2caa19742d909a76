#include "isq/zs.hpp"

#include "isq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace isq {

namespace {

Mat2 diag2(cplx a, cplx b)
{
    Mat2 m;
    m << a, 0.0, 0.0, b;
    return m;
}

Mat2 potential(cplx c, cplx q)
{
    Mat2 w;
    w << 0.0, c * q, c * std::conj(q), 0.0;
    return w;
}

[[noreturn]] void diverged(double x)
{
    std::ostringstream os;
    os << "solution lost finiteness near x = " << x;
    throw Error(ErrorKind::IntegratorDiverged, os.str());
}

// exp(A t) for A = P diag(l) P^{-1}.
struct Exponential {
    Mat2 P, Pinv;
    cplx l1, l2;
    Mat2 at(cplx t) const { return P * diag2(std::exp(l1 * t), std::exp(l2 * t)) * Pinv; }
};

// Lawson RK4 step data for y' = (A + B(x)) y with fixed signed step.
struct Stepper {
    Mat2 phi, phi2;
    Mat2 Wref;
    cplx c;
    double h;

    Stepper(const Exponential& e, const Mat2& wref, cplx coupling, double step)
        : phi(e.at(0.5 * step)), phi2(e.at(step)), Wref(wref), c(coupling), h(step)
    {
    }

    template <class Y>
    Y advance(const Y& y0, cplx q0, cplx qm, cplx q1) const
    {
        const Mat2 B0 = potential(c, q0) - Wref;
        const Mat2 Bm = potential(c, qm) - Wref;
        const Mat2 B1 = potential(c, q1) - Wref;
        const Y b0y = B0 * y0;
        const Y p2y = phi2 * y0;
        const Y Y2 = phi * (y0 + (0.5 * h) * b0y);
        const Y k2 = Bm * Y2;
        const Y Y3 = phi * y0 + (0.5 * h) * k2;
        const Y k3 = Bm * Y3;
        const Y Y4 = p2y + h * (phi * k3);
        return p2y + (h / 6.0) * (phi2 * b0y + 2.0 * (phi * (k2 + k3)) + B1 * Y4);
    }
};

template <class Y>
bool finite(const Y& y)
{
    for (int i = 0; i < y.size(); ++i) {
        const cplx v = y(i);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e150) return false;
    }
    return true;
}

// Integrates between profile nodes i_from and i_to (either direction), calling
// visit(i, y) at every profile node reached including the start.
template <class Y, class Visit>
Y propagate(const FineField& f, const Stepper& st, std::size_t i_from, std::size_t i_to, Y y, Visit&& visit)
{
    visit(i_from, y);
    if (i_from == i_to) return y;
    const int m = f.substeps;
    const long dir = i_to > i_from ? 1 : -1;
    long j = static_cast<long>(f.node(i_from));
    const long j_end = static_cast<long>(f.node(i_to));
    int sub = 0;
    while (j != j_end) {
        y = st.advance(y, f.q[j], f.q[j + dir], f.q[j + 2 * dir]);
        j += 2 * dir;
        if (++sub == m) {
            sub = 0;
            const std::size_t node = static_cast<std::size_t>(j / (2 * m));
            if (!finite(y)) diverged(f.x0 + f.dx * static_cast<double>(j));
            visit(node, y);
        }
    }
    return y;
}

struct Frames {
    AsymptoticFrame af;
    Exponential minus, plus;
};

Frames frames_for(const Coupling& c, const Asymptotics& asym, cplx k, cplx shift_minus, cplx shift_plus)
{
    Frames fr{asymptotic_frame(c, asym, k), {}, {}};
    const cplx mu = fr.af.mu;
    fr.minus = {fr.af.P_minus, fr.af.P_minus.inverse(), -I * mu + shift_minus, I * mu + shift_minus};
    fr.plus = {fr.af.P_plus, fr.af.P_plus.inverse(), -I * mu + shift_plus, I * mu + shift_plus};
    return fr;
}

std::size_t origin_node(std::size_t n) { return (n - 1) / 2; }

int substeps_for(const IntegratorConfig& cfg, double h, double scale)
{
    // Beyond the cap the exact exponential of the Lawson step carries the
    // fast phase and the coupling terms are O(1/|mu|).
    constexpr double cap = 256.0;
    const double need = std::min(cap, scale * h / cfg.max_phase_step);
    if (!(need >= 0.0)) return cfg.substeps;
    return std::max(cfg.substeps, static_cast<int>(std::ceil(need - 1e-9)));
}

double field_scale(const FieldProfile& p, const Coupling& c)
{
    double qmax = 0.0;
    for (const cplx& v : p.values()) qmax = std::max(qmax, std::abs(v));
    return std::abs(c.value()) * qmax;
}

// Resampled fields keyed by substep count, built on demand.
class FineCache {
public:
    FineCache(const FieldProfile& p, const Coupling& c, const IntegratorConfig& cfg)
        : p_(p), cfg_(cfg), scale_(field_scale(p, c))
    {
    }
    int substeps(cplx mu) const { return substeps_for(cfg_, p_.h(), std::max(std::abs(mu), scale_)); }
    const FineField& get(cplx mu) { return with(substeps(mu)); }
    const FineField& with(int m)
    {
        for (auto& [mm, f] : cache_)
            if (mm == m) return f;
        cache_.emplace_back(m, resample(p_, m, cfg_.interp_order));
        return cache_.back().second;
    }

private:
    const FieldProfile& p_;
    IntegratorConfig cfg_;
    double scale_;
    std::deque<std::pair<int, FineField>> cache_;
};

}  // namespace

cplx mu_branch(const Coupling& c, const Asymptotics& asym, cplx k)
{
    if (asym.is_schwartz() || c.regime() == Regime::Free) return k;
    const double g = std::abs(c.value()) * asym.rho;
    if (c.regime() == Regime::Focusing) return std::sqrt(k * k + g * g);
    if (std::abs(std::abs(k) - g) == 0.0 && k.imag() == 0.0)
        throw Error(ErrorKind::BranchPoint, "k sits on a branch point of mu");
    return std::sqrt(k - g) * std::sqrt(k + g);
}

Mat2 AsymptoticFrame::E(int side, double x) const
{
    const Mat2& P = side > 0 ? P_plus : P_minus;
    return P * diag2(std::exp(-I * mu * x), std::exp(I * mu * x));
}

AsymptoticFrame asymptotic_frame(const Coupling& c, const Asymptotics& asym, cplx k)
{
    AsymptoticFrame fr;
    const cplx cv = c.value();
    fr.W_minus = potential(cv, asym.left_value());
    fr.W_plus = potential(cv, asym.right_value());
    if (asym.is_schwartz() || c.regime() == Regime::Free) {
        fr.mu = k;
        fr.P_plus = fr.P_minus = Mat2::Identity();
    } else {
        const cplx mu = mu_branch(c, asym, k);
        if (std::abs(mu) < 1e-12 * std::max(1.0, std::abs(k)))
            throw Error(ErrorKind::BranchPoint, "mu vanishes at this k");
        const cplx g = cv * asym.rho;
        // (mu - k)/(c rho) in whichever algebraic form avoids cancellation.
        const cplx eps = std::abs(mu + k) >= std::abs(mu - k) ? -g / (mu + k) : (mu - k) / g;
        fr.mu = mu;
        fr.P_minus << 1.0, I * eps, -I * eps, 1.0;
        const cplx det = 1.0 - eps * eps;
        if (std::abs(det) < 1e-14) throw Error(ErrorKind::BranchPoint, "asymptotic frame is singular");
        const double half = 0.5 * asym.theta;
        fr.P_plus = diag2(std::exp(I * half), std::exp(-I * half)) * fr.P_minus;
    }
    fr.lambda_plus = fr.lambda_minus = diag2(fr.mu, -fr.mu);
    return fr;
}

FineField resample(const FieldProfile& p, int substeps, int order)
{
    if (substeps < 1) throw Error(ErrorKind::InvalidArgument, "substeps must be >= 1");
    const std::size_t n = p.size();
    order = std::clamp(order, 2, static_cast<int>(n));
    FineField f;
    f.substeps = substeps;
    f.profile_size = n;
    f.asym = p.asymptotics();
    f.L = p.L();
    const int per = 2 * substeps;
    f.dx = p.h() / per;
    f.x0 = -p.L();
    f.q.resize((n - 1) * per + 1);
    const auto& v = p.values();
    for (int r = 0; r < per; ++r) {
        const double frac = static_cast<double>(r) / per;
        for (std::size_t i = 0; i + 1 < n || (r == 0 && i < n); ++i) {
            const std::size_t j = i * per + r;
            if (r == 0) {
                f.q[j] = v[i];
                continue;
            }
            long s = static_cast<long>(i) - order / 2 + 1;
            s = std::clamp<long>(s, 0, static_cast<long>(n) - order);
            const double t = static_cast<double>(i) - s + frac;
            cplx acc = 0.0;
            for (int a = 0; a < order; ++a) {
                double wa = 1.0;
                for (int b = 0; b < order; ++b)
                    if (b != a) wa *= (t - b) / static_cast<double>(a - b);
                acc += wa * v[s + a];
            }
            f.q[j] = acc;
        }
    }
    return f;
}

namespace {

Mat2 scattering_from_fine(const FineField& f, const Coupling& c, double k, std::vector<Mat2>* store)
{
    const Frames fr = frames_for(c, f.asym, k, 0.0, 0.0);
    const double h = f.dx * 2.0;
    const std::size_t n = f.profile_size;
    const std::size_t i0 = origin_node(n);
    const Stepper up(fr.plus, fr.af.W_plus, c.value(), -h);
    const Stepper down(fr.minus, fr.af.W_minus, c.value(), -h);
    auto visit = [&](std::size_t i, const Mat2& y) {
        if (store) (*store)[i] = y;
    };
    Mat2 psi = fr.af.E(+1, f.L);
    psi = propagate(f, up, n - 1, i0, psi, visit);
    psi = propagate(f, down, i0, 0, psi, visit);
    const cplx mu = fr.af.mu;
    const Mat2 Einv = diag2(std::exp(-I * mu * f.L), std::exp(I * mu * f.L)) * fr.af.P_minus.inverse();
    return Einv * psi;
}

void check_det(const Mat2& S, double tol, double k)
{
    const double scale = std::max(1.0, S.squaredNorm());
    const double err = std::abs(S.determinant() - 1.0);
    if (!(err <= tol * scale)) {
        std::ostringstream os;
        os << "|det S - 1| = " << err << " at k = " << k;
        throw Error(ErrorKind::DeterminantDrift, os.str());
    }
}

}  // namespace

Mat2 scattering_matrix(const FineField& f, const Coupling& c, double k)
{
    return scattering_from_fine(f, c, k, nullptr);
}

Mat2 scattering_matrix(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg)
{
    FineCache cache(p, c, cfg);
    const Mat2 S = scattering_from_fine(cache.get(mu_branch(c, p.asymptotics(), k)), c, k, nullptr);
    check_det(S, cfg.det_tol, k);
    return S;
}

JostSolution jost_plus(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg)
{
    FineCache cache(p, c, cfg);
    const FineField& f = cache.get(mu_branch(c, p.asymptotics(), k));
    JostSolution js;
    js.side = +1;
    js.samples.resize(p.size());
    scattering_from_fine(f, c, k, &js.samples);
    return js;
}

JostSolution jost_minus(const FieldProfile& p, const Coupling& c, double k, const IntegratorConfig& cfg)
{
    FineCache cache(p, c, cfg);
    const FineField& f = cache.get(mu_branch(c, p.asymptotics(), k));
    const Frames fr = frames_for(c, f.asym, k, 0.0, 0.0);
    const double h = 2.0 * f.dx;
    const std::size_t n = p.size();
    const std::size_t i0 = origin_node(n);
    JostSolution js;
    js.side = -1;
    js.samples.resize(n);
    auto visit = [&](std::size_t i, const Mat2& y) { js.samples[i] = y; };
    Mat2 psi = fr.af.E(-1, -p.L());
    psi = propagate(f, Stepper(fr.minus, fr.af.W_minus, c.value(), h), 0, i0, psi, visit);
    propagate(f, Stepper(fr.plus, fr.af.W_plus, c.value(), h), i0, n - 1, psi, visit);
    return js;
}

namespace {

// Gauge-stripped bounded columns at complex k. When full is false only the
// values at the origin are produced.
struct ColumnRun {
    cplx mu;
    Vec2 left0, right0;
    cplx detP;
};

ColumnRun columns_impl(const FineField& f, const Coupling& c, cplx k, std::vector<Vec2>* left,
                       std::vector<Vec2>* right)
{
    const AsymptoticFrame af = asymptotic_frame(c, f.asym, k);
    const cplx mu = af.mu;
    const double h = f.dx * 2.0;
    const std::size_t n = f.profile_size;
    const std::size_t i0 = origin_node(n);
    const Exponential em{af.P_minus, af.P_minus.inverse(), -I * mu + I * mu, I * mu + I * mu};
    const Exponential ep{af.P_plus, af.P_plus.inverse(), -I * mu - I * mu, I * mu - I * mu};
    ColumnRun run;
    run.mu = mu;
    run.detP = af.P_minus.determinant();

    Vec2 m1 = af.P_minus.col(0);
    Vec2 m2 = af.P_plus.col(1);
    const Stepper fwd(em, af.W_minus, c.value(), h);
    const Stepper bwd(ep, af.W_plus, c.value(), -h);
    auto keep_left = [&](std::size_t i, const Vec2& y) {
        if (left) (*left)[i] = y;
        if (i == i0) run.left0 = y;
    };
    auto keep_right = [&](std::size_t i, const Vec2& y) {
        if (right) (*right)[i] = y;
        if (i == i0) run.right0 = y;
    };
    propagate(f, fwd, 0, left ? n - 1 : i0, m1, keep_left);
    propagate(f, bwd, n - 1, right ? 0 : i0, m2, keep_right);
    return run;
}

cplx a_from(const ColumnRun& r)
{
    Mat2 m;
    m.col(0) = r.left0;
    m.col(1) = r.right0;
    return m.determinant() / r.detP;
}

void require_upper(cplx k)
{
    if (!(k.imag() > 0.0)) throw Error(ErrorKind::InvalidArgument, "continuation requires Im k > 0");
}


}  // namespace

cplx analytic_continue_a(const FieldProfile& p, const Coupling& c, cplx k, const IntegratorConfig& cfg)
{
    require_upper(k);
    FineCache cache(p, c, cfg);
    const cplx mu = mu_branch(c, p.asymptotics(), k);
    return a_from(columns_impl(cache.get(mu), c, k, nullptr, nullptr));
}

BoundedColumns bounded_columns(const FieldProfile& p, const Coupling& c, cplx k, const IntegratorConfig& cfg)
{
    require_upper(k);
    FineCache cache(p, c, cfg);
    BoundedColumns out;
    out.k = k;
    out.left.resize(p.size());
    out.right.resize(p.size());
    const ColumnRun r = columns_impl(cache.get(mu_branch(c, p.asymptotics(), k)), c, k, &out.left, &out.right);
    out.mu = r.mu;
    return out;
}

cplx norming_constant(const FieldProfile& p, const Coupling& c, cplx k0, const IntegratorConfig& cfg)
{
    require_upper(k0);
    FineCache cache(p, c, cfg);
    const ColumnRun r = columns_impl(cache.get(mu_branch(c, p.asymptotics(), k0)), c, k0, nullptr, nullptr);
    // At x = 0 the gauge factors are 1, so the ratio of the stripped columns is the ratio of the Jost columns.
    return r.left0.dot(r.right0) / r.left0.squaredNorm();
}

Region default_region(const FieldProfile& p, const Coupling& c, const KGrid& kgrid, double im_floor)
{
    double qmax = 0.0;
    for (const cplx& v : p.values()) qmax = std::max(qmax, std::abs(v));
    const double re_lo = kgrid.size() ? kgrid.samples.front() : -5.0;
    const double re_hi = kgrid.size() ? kgrid.samples.back() : 5.0;
    return Region{re_lo, re_hi, im_floor, std::abs(c.value()) * qmax + 1.0};
}

ScatteringData scatter_grid(const FieldProfile& p, const Coupling& c, const KGrid& kgrid, const IntegratorConfig& cfg)
{
    Region r = default_region(p, c, kgrid);
    // Discrete spectrum off Schwartz asymptotics sits on branch cuts and is not searched.
    if (!p.asymptotics().is_schwartz() || c.regime() == Regime::Free) r.im_max = r.im_min;
    return scatter_grid(p, c, kgrid, cfg, r);
}

ScatteringData scatter_grid(const FieldProfile& p, const Coupling& c, const KGrid& kgrid,
                            const IntegratorConfig& cfg, const Region& region, const ZeroSearchConfig& zcfg)
{
    const double gap = spectral_gap(c, p.asymptotics());
    for (double k : kgrid.samples)
        if (gap > 0.0 && std::abs(k) <= gap) throw Error(ErrorKind::InvalidArgument, "k sample inside the spectral gap");
    FineCache cache(p, c, cfg);
    std::vector<const FineField*> fields(kgrid.size());
    for (std::size_t i = 0; i < kgrid.size(); ++i) fields[i] = &cache.get(mu_branch(c, p.asymptotics(), kgrid[i]));
    ScatteringData sd;
    sd.kgrid = kgrid;
    sd.coupling = c;
    sd.a.resize(kgrid.size());
    sd.b.resize(kgrid.size());
    parallel_for(kgrid.size(), [&](std::size_t i) {
        const Mat2 S = scattering_from_fine(*fields[i], c, kgrid[i], nullptr);
        check_det(S, cfg.det_tol, kgrid[i]);
        sd.a[i] = S(1, 1);
        sd.b[i] = S(0, 1);
    });
    if (region.im_max > region.im_min) sd.discrete = find_zeros(p, c, region, cfg, zcfg);
    return sd;
}

std::vector<DiscreteEigenvalue> find_zeros(const FieldProfile& p, const Coupling& c, const Region& region,
                                           const IntegratorConfig& cfg, const ZeroSearchConfig& zcfg)
{
    if (!(region.im_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "search region must lie in Im k > 0");
    if (c.regime() == Regime::Free) return {};
    FineCache cache(p, c, cfg);
    auto a = [&](cplx k) {
        const cplx mu = mu_branch(c, p.asymptotics(), k);
        return a_from(columns_impl(cache.get(mu), c, k, nullptr, nullptr));
    };
    auto zeros = find_zeros(std::function<cplx(cplx)>(a), region, zcfg);
    for (auto& z : zeros)
        if (z.order == 1) z.norming = norming_constant(p, c, z.position, cfg);
    return zeros;
}

cplx reflection(const ScatteringData& sd, double k)
{
    const auto& ks = sd.kgrid.samples;
    if (ks.empty() || k < ks.front() || k > ks.back())
        throw Error(ErrorKind::InvalidArgument, "k outside the sampled range");
    auto rho = [&](std::size_t i) {
        if (std::abs(sd.a[i]) < 1e-14) {
            std::ostringstream os;
            os << "a vanishes at k = " << ks[i];
            throw Error(ErrorKind::DivisionByZeroA, os.str());
        }
        return sd.b[i] / sd.a[i];
    };
    auto it = std::lower_bound(ks.begin(), ks.end(), k);
    std::size_t j = static_cast<std::size_t>(it - ks.begin());
    if (j < ks.size() && ks[j] == k) return rho(j);
    const double t = (k - ks[j - 1]) / (ks[j] - ks[j - 1]);
    return (1.0 - t) * rho(j - 1) + t * rho(j);
}

}  // namespace isq
