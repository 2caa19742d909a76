#include "isq/glm.hpp"

#include "isq/parallel.hpp"

#include <Eigen/LU>
#include <gsl/gsl_sf_expint.h>
#include <cmath>
#include <sstream>

namespace isq {

namespace {

using VecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXcd;

void require_coupling(const Coupling& c)
{
    if (c.regime() == Regime::Free) throw Error(ErrorKind::InvalidCoupling, "reconstruction needs c != 0");
}

void require_data(const RadiativeData& rd)
{
    if (rd.rho.size() != rd.kgrid.size() || rd.kgrid.size() < 2)
        throw Error(ErrorKind::InvalidArgument, "reflection samples do not match the k grid");
}

// Weighted, phased reflection r_j w_j exp(-2 i k_j x - 4 i k_j^2 t).
VecX measure(const RadiativeData& rd, const std::vector<double>& w, double x, double t)
{
    const std::size_t n = rd.kgrid.size();
    VecX m(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = rd.kgrid[j];
        m(j) = rd.rho[j] * w[j] * std::exp(cplx{0.0, -2.0 * k * x - 4.0 * k * k * t});
    }
    return m;
}

// Cauchy operator (A z)(k) = (1/2 pi i) int dl r(l) e^{-2 i l x} z(l) / (l - k + i0),
// r = rho e^{-4 i l^2 t}. The density r z is linear between samples and falls to
// zero one spacing beyond either end; the exponential and the kernel are
// integrated exactly against it.
struct CellIntegrals {
    double beta;
    // Antiderivative of e^{-i beta u} / u up to a constant; the value at u = 0
    // is arbitrary and cancels between neighbouring cells.
    cplx G(double u) const
    {
        if (u == 0.0) return 0.0;
        if (beta == 0.0) return std::log(std::abs(u));
        const double b = std::abs(beta);
        return gsl_sf_Ci(b * std::abs(u)) - I * (beta > 0 ? 1.0 : -1.0) * gsl_sf_Si(b * u);
    }
    // int_a^b e^{-i beta u} / (u + i0) du
    cplx E(double a, double b, cplx Ga, cplx Gb) const
    {
        cplx v = Gb - Ga;
        if (a < 0.0 && b > 0.0) v -= I * M_PI;
        if (a == 0.0 || b == 0.0) v -= 0.5 * I * M_PI;
        return v;
    }
    // int_a^b e^{-i beta l} dl
    cplx P(double a, double b) const
    {
        const double half = 0.5 * beta * (b - a);
        const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
        return std::exp(cplx{0.0, -0.5 * beta * (a + b)}) * (b - a) * sinc;
    }
};

MatX product_operator(const RadiativeData& rd, double x, double t)
{
    const std::size_t n = rd.kgrid.size();
    // nodes with a zero-density ghost at each end
    std::vector<double> k(n + 2);
    for (std::size_t j = 0; j < n; ++j) k[j + 1] = rd.kgrid[j];
    k[0] = k[1] - (k[2] - k[1]);
    k[n + 1] = k[n] + (k[n] - k[n - 1]);
    const CellIntegrals ci{2.0 * x};
    std::vector<cplx> P(n + 1);
    for (std::size_t c = 0; c <= n; ++c) P[c] = ci.P(k[c], k[c + 1]);
    MatX A = MatX::Zero(n, n);
    std::vector<cplx> G(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double ki = k[i + 1];
        const cplx phase = std::exp(cplx{0.0, -ci.beta * ki});
        for (std::size_t c = 0; c < n + 2; ++c) G[c] = ci.G(k[c] - ki);
        for (std::size_t c = 0; c <= n; ++c) {
            const double a = k[c] - ki, b = k[c + 1] - ki, h = k[c + 1] - k[c];
            const cplx e = phase * ci.E(a, b, G[c], G[c + 1]);
            // g(l) = g(k_i) + slope (l - k_i), written on the two end values
            const double frac = (ki - k[c]) / h;
            if (c >= 1) A(i, c - 1) += e * (1.0 - frac) - P[c] / h;
            if (c + 1 <= n) A(i, c) += e * frac + P[c] / h;
        }
    }
    const cplx pre = 1.0 / (2.0 * M_PI * I);
    for (std::size_t j = 0; j < n; ++j) {
        const double kj = rd.kgrid[j];
        A.col(j) *= pre * rd.rho[j] * std::exp(cplx{0.0, -4.0 * kj * kj * t});
    }
    return A;
}

// Density constant on each cell around a sample, the kernel 1/(l - k + i eps)
// integrated over the cell.
MatX cell_operator(const RadiativeData& rd, const VecX& m, const std::vector<double>& w, double eps)
{
    const std::size_t n = rd.kgrid.size();
    std::vector<double> edge(n + 1);
    edge[0] = rd.kgrid[0] - 0.5 * (rd.kgrid[1] - rd.kgrid[0]);
    edge[n] = rd.kgrid[n - 1] + 0.5 * (rd.kgrid[n - 1] - rd.kgrid[n - 2]);
    for (std::size_t j = 1; j < n; ++j) edge[j] = 0.5 * (rd.kgrid[j - 1] + rd.kgrid[j]);
    MatX A(n, n);
    const cplx pre = 1.0 / (2.0 * M_PI * I);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = rd.kgrid[i];
        cplx lo = std::log(cplx{edge[0] - k, eps});
        for (std::size_t j = 0; j < n; ++j) {
            const cplx hi = std::log(cplx{edge[j + 1] - k, eps});
            A(i, j) = pre * (m(j) / w[j]) * (hi - lo);
            lo = hi;
        }
    }
    return A;
}

// The unknown second component solves z = 1 + s A conj(A) z.
MatX iterated_operator(const RadiativeData& rd, const VecX& m, const std::vector<double>& w, double x, double t,
                       double eps, double s)
{
    const MatX A = eps > 0.0 ? cell_operator(rd, m, w, eps) : product_operator(rd, x, t);
    return s * (A * A.conjugate());
}

cplx field_from(const VecX& m, const VecX& z, const Coupling& c)
{
    return -(m.transpose() * z.conjugate())(0) / (M_PI * c.value());
}

double eps_of(const ResolventConfig& cfg)
{
    if (cfg.eps < 0.0) throw Error(ErrorKind::InvalidArgument, "eps must be non-negative");
    return cfg.eps;
}

}  // namespace

RadiativeData radiative_data(const ScatteringData& sd)
{
    if (!sd.discrete.empty())
        throw Error(ErrorKind::NotRadiative, "scattering data carries discrete eigenvalues");
    RadiativeData rd;
    rd.kgrid = sd.kgrid;
    rd.coupling = sd.coupling;
    rd.rho.resize(sd.size());
    for (std::size_t i = 0; i < sd.size(); ++i) {
        if (std::abs(sd.a[i]) < 1e-14) throw Error(ErrorKind::DivisionByZeroA, "a vanishes on the grid");
        rd.rho[i] = sd.b[i] / sd.a[i];
    }
    return rd;
}

std::vector<double> trapezoid_weights(const KGrid& kg)
{
    const std::size_t n = kg.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d = 0.5 * (kg[i + 1] - kg[i]);
        w[i] += d;
        w[i + 1] += d;
    }
    return w;
}

cplx f_kernel(const RadiativeData& rd, double x)
{
    require_data(rd);
    const auto w = trapezoid_weights(rd.kgrid);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < rd.kgrid.size(); ++j) acc += w[j] * rd.rho[j] * std::exp(cplx{0.0, -rd.kgrid[j] * x});
    return acc / (2.0 * M_PI);
}

cplx born_term(const RadiativeData& rd, const Coupling& c0, double x)
{
    require_coupling(c0);
    return -2.0 * f_kernel(rd, 2.0 * x) / c0.value();
}

cplx glm_neumann(const RadiativeData& rd, const Coupling& c0, double x, const ResolventConfig& cfg)
{
    require_data(rd);
    require_coupling(c0);
    const auto w = trapezoid_weights(rd.kgrid);
    const VecX m = measure(rd, w, x, 0.0);
    const std::size_t n = rd.kgrid.size();
    VecX term = VecX::Ones(n);
    VecX sum = term;
    if (cfg.neumann_terms > 0) {
        const MatX M = iterated_operator(rd, m, w, x, 0.0, eps_of(cfg), c0.conj_ratio());
        double prev = term.norm();
        for (int j = 1; j <= cfg.neumann_terms; ++j) {
            term = M * term;
            const double size = term.norm();
            if (size >= prev && size > 0.0) {
                std::ostringstream os;
                os << "Neumann term " << j << " grew by a factor " << size / prev << " at x = " << x;
                throw Error(ErrorKind::SeriesDiverging, os.str());
            }
            sum += term;
            if (size <= cfg.neumann_stop * sum.norm()) break;
            prev = size;
        }
    }
    return field_from(m, sum, c0);
}

cplx rosales_resummed(const RadiativeData& rd, const Coupling& c0, double x, double t, const ResolventConfig& cfg)
{
    require_data(rd);
    require_coupling(c0);
    const auto w = trapezoid_weights(rd.kgrid);
    const VecX m = measure(rd, w, x, t);
    const std::size_t n = rd.kgrid.size();
    const MatX M = iterated_operator(rd, m, w, x, t, eps_of(cfg), c0.conj_ratio());
    const MatX G = MatX::Identity(n, n) - M;
    Eigen::PartialPivLU<MatX> lu(G);
    const double rc = lu.rcond();
    if (!(rc * cfg.max_condition > 1.0)) {
        std::ostringstream os;
        os << "resolvent condition estimate " << 1.0 / rc << " at x = " << x;
        throw Error(ErrorKind::SingularResolvent, os.str());
    }
    const VecX z = lu.solve(VecX::Ones(n));
    return field_from(m, z, c0);
}

FieldProfile reconstruct_field(const RadiativeData& rd, const Coupling& c0, const XGrid& grid, double t,
                               const ResolventConfig& cfg, double boundary_tol)
{
    const auto xs = grid.points();
    std::vector<cplx> q(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { q[i] = rosales_resummed(rd, c0, xs[i], t, cfg); });
    return make_profile(std::move(q), grid.L, Asymptotics::schwartz(), boundary_tol);
}

FieldProfile reconstruct_field_neumann(const RadiativeData& rd, const Coupling& c0, const XGrid& grid,
                                       const ResolventConfig& cfg, double boundary_tol)
{
    const auto xs = grid.points();
    std::vector<cplx> q(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { q[i] = glm_neumann(rd, c0, xs[i], cfg); });
    return make_profile(std::move(q), grid.L, Asymptotics::schwartz(), boundary_tol);
}

}  // namespace isq
