#include "isq/closed_forms.hpp"

#include "isq/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace isq {

namespace {

bool nonpositive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

// Gamma(n1)^2 / (Gamma(d1) Gamma(d2)) through log-gamma, zero when a denominator has a pole.
cplx gamma_ratio(cplx n1, cplx d1, cplx d2)
{
    if (nonpositive_integer(n1)) throw Error(ErrorKind::GammaPole, "numerator Gamma at a pole");
    if (nonpositive_integer(d1) || nonpositive_integer(d2)) return 0.0;
    return std::exp(2.0 * lgamma_complex(n1) - lgamma_complex(d1) - lgamma_complex(d2));
}

}  // namespace

double SolitonParamsFD::nu() const { return 2.0 * c * rho * std::sin(0.5 * theta); }
double SolitonParamsFD::velocity() const { return -2.0 * c * rho * std::cos(0.5 * theta); }

cplx sech_complex(cplx w)
{
    if (w.real() >= 0.0) {
        const cplx e = std::exp(-w);
        return 2.0 * e / (1.0 + e * e);
    }
    const cplx e = std::exp(w);
    return 2.0 * e / (1.0 + e * e);
}

cplx sinc_complex(cplx z)
{
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

FieldProfile soliton_profile_rd(const SolitonParamsRD& p, const XGrid& grid, double boundary_tol)
{
    if (!(p.A > 0.0)) throw Error(ErrorKind::InvalidArgument, "soliton amplitude must be positive");
    const auto xs = grid.points();
    std::vector<cplx> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        v[i] = p.A * std::exp(I * (p.V * x + p.phase)) * sech_complex(p.A * (x - p.x0)).real();
    }
    return make_profile(std::move(v), grid.L, Asymptotics::schwartz(), boundary_tol);
}

ABPair ab_rapid(cplx k, cplx c, double A, double V)
{
    const cplx kappa = (k + 0.5 * V) / A;
    const cplx base = 0.5 - I * kappa;
    const cplx a = gamma_ratio(base, base - I * c, base + I * c);
    const cplx b = -M_PI * sinc_complex(I * M_PI * c) * sech_complex(M_PI * kappa);
    return {a, b};
}

RapidZeros zeros_rapid(double nu, double A, double V)
{
    RapidZeros out;
    if (!(nu > 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be positive");
    for (int n = 0;; ++n) {
        const double height = nu - n - 0.5;
        if (std::abs(height) < 1e-12) {
            out.marginal = true;
            break;
        }
        if (height < 0.0) break;
        DiscreteEigenvalue z;
        z.position = {-0.5 * V, A * height};
        out.zeros.push_back(z);
    }
    std::reverse(out.zeros.begin(), out.zeros.end());
    return out;
}

FieldProfile soliton_profile_fd_defocusing(const SolitonParamsFD& p, const XGrid& grid, double boundary_tol)
{
    if (!(p.theta > 0.0 && p.theta < 2.0 * M_PI))
        throw Error(ErrorKind::DegeneratePhase, "theta must lie strictly inside (0, 2 pi)");
    if (!(p.rho > 0.0) || !(p.c > 0.0)) throw Error(ErrorKind::InvalidArgument, "rho and c must be positive");
    const double nu = p.nu();
    const cplx phase = std::exp(I * p.theta);
    const auto xs = grid.points();
    std::vector<cplx> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double s = nu * xs[i];
        if (s > 0.0) {
            const double e = std::exp(-s);
            v[i] = p.rho * (e + phase) / (e + 1.0);
        } else {
            const double e = std::exp(s);
            v[i] = p.rho * (1.0 + phase * e) / (1.0 + e);
        }
    }
    return make_profile(std::move(v), grid.L, Asymptotics::finite_density(p.rho, p.theta), boundary_tol);
}

cplx mu_continued(cplx k, cplx c, double rho)
{
    const cplx g = c * rho;
    if (std::abs(c.imag()) <= 1e-14 * std::abs(c)) return std::sqrt(k - g) * std::sqrt(k + g);
    return std::sqrt(k * k - g * g);
}

ABPair ab_finite_defocusing(cplx k, cplx c, const SolitonParamsFD& p)
{
    const cplx mu = mu_continued(k, c, p.rho);
    if (std::abs(mu) < 1e-14) throw Error(ErrorKind::BranchPoint, "mu vanishes");
    const double nu = p.nu();
    const double half = 0.5 * p.theta;
    const cplx beta_star = std::cos(half) - I * (k / mu) * std::sin(half);
    const cplx s = 2.0 * I * mu / nu;
    const cplx a = -(s - c) * (s + c) / (beta_star * s * s) * gamma_ratio(1.0 - s, 1.0 - s - c, 1.0 - s + c);
    // (sinh w / w)^{-1} with w = 2 pi mu / nu.
    const cplx w = 2.0 * M_PI * mu / nu;
    const cplx b = sinc_complex(M_PI * c) / sinc_complex(I * w);
    return {a, b};
}

cplx a_finite_defocusing_product(cplx k, int n, const SolitonParamsFD& p)
{
    const cplx mu = mu_continued(k, static_cast<double>(n), p.rho);
    const double nu = p.nu();
    const double half = 0.5 * p.theta;
    const cplx beta_star = std::cos(half) - I * (k / mu) * std::sin(half);
    cplx prod = 1.0;
    for (int m = 1; m <= n; ++m) prod *= (2.0 * mu - I * (m * nu)) / (2.0 * mu + I * ((m - 1) * nu));
    return prod / beta_star;
}

double fd_focusing_amplitude(double Z)
{
    if (!(Z > 1.0)) throw Error(ErrorKind::InvalidArgument, "Z must exceed 1");
    return Z - 1.0 / Z;
}

FieldProfile profile_fd_focusing(double A, const XGrid& grid, double boundary_tol)
{
    if (!(A > 0.0)) throw Error(ErrorKind::InvalidArgument, "amplitude must be positive");
    const auto xs = grid.points();
    std::vector<cplx> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = 1.0 - I * A * sech_complex(A * xs[i]).real();
    return make_profile(std::move(v), grid.L, Asymptotics::finite_density(1.0, 0.0), boundary_tol);
}

ABPair ab_finite_focusing(cplx k, double g, double A)
{
    const cplx mu = std::sqrt(k * k + g * g);
    const cplx base = 0.5 - I * mu / A;
    const cplx a = gamma_ratio(base, base - g, base + g);
    const cplx b = -M_PI * sinc_complex(M_PI * g) * sech_complex(M_PI * mu / A);
    return {a, b};
}

}  // namespace isq
