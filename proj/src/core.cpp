#include "isq/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isq {

const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidCoupling: return "InvalidCoupling";
    case ErrorKind::NonUniformGrid: return "NonUniformGrid";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::PoleAtNonPositiveInteger: return "PoleAtNonPositiveInteger";
    case ErrorKind::ParameterPole: return "ParameterPole";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::BranchPoint: return "BranchPoint";
    case ErrorKind::IntegratorDiverged: return "IntegratorDiverged";
    case ErrorKind::DeterminantDrift: return "DeterminantDrift";
    case ErrorKind::ContourThroughZero: return "ContourThroughZero";
    case ErrorKind::NewtonStalled: return "NewtonStalled";
    case ErrorKind::DivisionByZeroA: return "DivisionByZeroA";
    case ErrorKind::GammaPole: return "GammaPole";
    case ErrorKind::DegeneratePhase: return "DegeneratePhase";
    case ErrorKind::SeriesDiverging: return "SeriesDiverging";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::SingularH: return "SingularH";
    case ErrorKind::RemoveNonexistentZero: return "RemoveNonexistentZero";
    case ErrorKind::HigherOrderZero: return "HigherOrderZero";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::NotRadiative: return "NotRadiative";
    case ErrorKind::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
{
}

const char* to_string(Regime r)
{
    switch (r) {
    case Regime::Focusing: return "focusing";
    case Regime::Defocusing: return "defocusing";
    case Regime::Free: return "free";
    }
    return "unknown";
}

Regime classify_regime(cplx c)
{
    if (c == cplx{}) return Regime::Free;
    const double mag = std::abs(c);
    if (!std::isfinite(mag)) throw Error(ErrorKind::InvalidCoupling, "non-finite coupling");
    const double slack = 1e-14 * mag;
    if (std::abs(c.real()) <= slack && c.imag() > 0.0) return Regime::Focusing;
    if (std::abs(c.imag()) <= slack && c.real() > 0.0) return Regime::Defocusing;
    std::ostringstream os;
    os << "c = (" << c.real() << ", " << c.imag() << ") is off the admissible rays";
    throw Error(ErrorKind::InvalidCoupling, os.str());
}

Coupling::Coupling(cplx value)
{
    switch (classify_regime(value)) {
    case Regime::Focusing: value_ = {0.0, value.imag()}; break;
    case Regime::Defocusing: value_ = {value.real(), 0.0}; break;
    case Regime::Free: value_ = {}; break;
    }
}

Regime Coupling::regime() const { return classify_regime(value_); }

double Coupling::conj_ratio() const { return regime() == Regime::Focusing ? -1.0 : 1.0; }

Regime classify_regime(const Coupling& c) { return c.regime(); }

Asymptotics Asymptotics::finite_density(double rho, double theta)
{
    if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "density must be positive");
    const double two_pi = 2.0 * M_PI;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    Asymptotics a;
    a.kind = Kind::FiniteDensity;
    a.rho = rho;
    a.theta = t;
    return a;
}

FieldProfile::FieldProfile(std::vector<cplx> values, double L, Asymptotics asym, double boundary_tol)
    : values_(std::move(values)), L_(L), asym_(asym), tol_(boundary_tol)
{
    if (values_.size() < 16) throw Error(ErrorKind::InvalidArgument, "profile needs at least 16 samples");
    if (!(L > 0.0)) throw Error(ErrorKind::InvalidArgument, "half-width L must be positive");
    if (!(boundary_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "boundary tolerance must be positive");
    h_ = 2.0 * L / static_cast<double>(values_.size() - 1);
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::InvalidArgument, "non-finite field sample");

    const double dl = std::abs(values_.front() - asym_.left_value());
    const double dr = std::abs(values_.back() - asym_.right_value());
    if (dl >= tol_ || dr >= tol_) {
        std::ostringstream os;
        os << "boundary deviation left " << dl << ", right " << dr << " exceeds " << tol_;
        throw Error(ErrorKind::BoundaryMismatch, os.str());
    }
}

std::vector<double> FieldProfile::xs() const
{
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = x(i);
    return out;
}

FieldProfile make_profile(std::vector<cplx> values, double L, const Asymptotics& asym, double boundary_tol)
{
    return FieldProfile(std::move(values), L, asym, boundary_tol);
}

FieldProfile make_profile(const std::vector<double>& xs, std::vector<cplx> values, const Asymptotics& asym,
                          double boundary_tol)
{
    if (xs.size() != values.size()) throw Error(ErrorKind::InvalidArgument, "abscissa/value length mismatch");
    if (xs.size() < 16) throw Error(ErrorKind::InvalidArgument, "profile needs at least 16 samples");
    const double L = xs.back();
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    const double eps = 1e-9 * std::max(1.0, L);
    if (!(h > 0.0) || std::abs(xs.front() + L) > eps)
        throw Error(ErrorKind::NonUniformGrid, "grid must be increasing and symmetric about 0");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::abs(xs[i] - (xs.front() + h * static_cast<double>(i))) > eps) {
            std::ostringstream os;
            os << "sample " << i << " at x = " << xs[i] << " breaks uniform spacing " << h;
            throw Error(ErrorKind::NonUniformGrid, os.str());
        }
    }
    return FieldProfile(std::move(values), L, asym, boundary_tol);
}

std::size_t XGrid::count() const
{
    if (!(L > 0.0) || !(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid needs L > 0 and h > 0");
    return static_cast<std::size_t>(std::llround(2.0 * L / h)) + 1;
}

std::vector<double> XGrid::points() const
{
    const std::size_t n = count();
    const double step = 2.0 * L / static_cast<double>(n - 1);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = -L + step * static_cast<double>(i);
    return out;
}

double spectral_gap(const Coupling& c, const Asymptotics& asym)
{
    if (asym.is_schwartz() || c.regime() != Regime::Defocusing) return 0.0;
    return std::abs(c.value()) * asym.rho;
}

KGrid make_kgrid(const Coupling& c, const Asymptotics& asym, double k_max, std::size_t n)
{
    if (!(k_max > 0.0) || n < 2) throw Error(ErrorKind::InvalidArgument, "k grid needs k_max > 0 and n >= 2");
    KGrid g;
    g.samples.resize(n);
    const double gap = spectral_gap(c, asym);
    if (gap == 0.0) {
        const double dk = 2.0 * k_max / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) g.samples[i] = -k_max + dk * static_cast<double>(i);
        return g;
    }
    if (k_max <= gap) throw Error(ErrorKind::EmptyGrid, "k_max lies inside the spectral gap");
    // Cell-centred samples on [-k_max, -gap] and [gap, k_max]; the gap edges are branch points.
    const std::size_t right = n / 2;
    const std::size_t left = n - right;
    const double seg = k_max - gap;
    const double dl = seg / static_cast<double>(left);
    for (std::size_t j = 0; j < left; ++j) g.samples[j] = -k_max + dl * (static_cast<double>(j) + 0.5);
    if (right > 0) {
        const double dr = seg / static_cast<double>(right);
        for (std::size_t j = 0; j < right; ++j) g.samples[left + j] = gap + dr * (static_cast<double>(j) + 0.5);
    }
    return g;
}

KGrid make_kgrid(std::vector<double> samples, const Coupling& c, const Asymptotics& asym)
{
    if (samples.empty()) throw Error(ErrorKind::EmptyGrid, "no k samples");
    if (!std::is_sorted(samples.begin(), samples.end()))
        throw Error(ErrorKind::InvalidArgument, "k samples must be sorted");
    const double gap = spectral_gap(c, asym);
    for (double k : samples)
        if (gap > 0.0 && std::abs(k) <= gap)
            throw Error(ErrorKind::InvalidArgument, "k sample inside the spectral gap");
    return KGrid{std::move(samples)};
}

Mat2 ScatteringData::assembled(std::size_t i) const
{
    Mat2 s;
    s << std::conj(a[i]), b[i], coupling.conj_ratio() * std::conj(b[i]), a[i];
    return s;
}

double ScatteringData::max_det_error() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) worst = std::max(worst, std::abs(assembled(i).determinant() - 1.0));
    return worst;
}

}  // namespace isq
