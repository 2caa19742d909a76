#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
    InvalidArgument,
    InvalidCoupling,
    NonUniformGrid,
    BoundaryMismatch,
    EmptyGrid,
    PoleAtNonPositiveInteger,
    ParameterPole,
    NonConvergent,
    BranchPoint,
    IntegratorDiverged,
    DeterminantDrift,
    ContourThroughZero,
    NewtonStalled,
    DivisionByZeroA,
    GammaPole,
    DegeneratePhase,
    SeriesDiverging,
    SingularResolvent,
    SingularH,
    RemoveNonexistentZero,
    HigherOrderZero,
    BlowUp,
    NotRadiative,
    Unsupported,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

enum class Regime { Focusing, Defocusing, Free };

const char* to_string(Regime r);

// NLSE coupling c restricted to i*R+, R+ or {0}.
class Coupling {
public:
    Coupling() = default;
    explicit Coupling(cplx value);

    cplx value() const { return value_; }
    Regime regime() const;
    // c / conj(c): -1 focusing, +1 defocusing; +1 by convention when free.
    double conj_ratio() const;

private:
    cplx value_{0.0, 0.0};
};

Regime classify_regime(const Coupling& c);
// Validates a raw value and classifies it without building a Coupling.
Regime classify_regime(cplx c);

struct Asymptotics {
    enum class Kind { Schwartz, FiniteDensity };
    Kind kind = Kind::Schwartz;
    double rho = 0.0;
    double theta = 0.0;

    static Asymptotics schwartz() { return {}; }
    static Asymptotics finite_density(double rho, double theta);

    bool is_schwartz() const { return kind == Kind::Schwartz; }
    cplx left_value() const { return is_schwartz() ? cplx{} : cplx{rho, 0.0}; }
    cplx right_value() const { return is_schwartz() ? cplx{} : rho * std::exp(I * theta); }
};

// Field samples on the closed grid x_i = -L + i h, i = 0..N-1, h = 2L/(N-1).
class FieldProfile {
public:
    FieldProfile() = default;
    FieldProfile(std::vector<cplx> values, double L, Asymptotics asym, double boundary_tol);

    std::size_t size() const { return values_.size(); }
    double L() const { return L_; }
    double h() const { return h_; }
    double x(std::size_t i) const { return -L_ + h_ * static_cast<double>(i); }
    const std::vector<cplx>& values() const { return values_; }
    cplx operator[](std::size_t i) const { return values_[i]; }
    const Asymptotics& asymptotics() const { return asym_; }
    double boundary_tol() const { return tol_; }
    std::vector<double> xs() const;

private:
    std::vector<cplx> values_;
    double L_ = 0.0;
    double h_ = 0.0;
    Asymptotics asym_;
    double tol_ = 1e-8;
};

constexpr double kDefaultBoundaryTol = 1e-8;

FieldProfile make_profile(std::vector<cplx> values, double L, const Asymptotics& asym,
                          double boundary_tol = kDefaultBoundaryTol);
// Accepts explicit abscissae; they must be uniform and symmetric about 0.
FieldProfile make_profile(const std::vector<double>& xs, std::vector<cplx> values,
                          const Asymptotics& asym, double boundary_tol = kDefaultBoundaryTol);

// Uniform grid description used by profile generators.
struct XGrid {
    double L = 40.0;
    double h = 0.02;
    std::size_t count() const;
    std::vector<double> points() const;
};

struct KGrid {
    std::vector<double> samples;
    std::size_t size() const { return samples.size(); }
    double operator[](std::size_t i) const { return samples[i]; }
};

KGrid make_kgrid(const Coupling& c, const Asymptotics& asym, double k_max, std::size_t n);
// Validates a caller-supplied sample set against the gap for c.
KGrid make_kgrid(std::vector<double> samples, const Coupling& c, const Asymptotics& asym);
// Half-width of the forbidden interval (0 unless finite-density defocusing).
double spectral_gap(const Coupling& c, const Asymptotics& asym);

struct DiscreteEigenvalue {
    cplx position;
    int order = 1;
    std::optional<cplx> norming;
    bool near_axis = false;
};

struct ScatteringData {
    KGrid kgrid;
    std::vector<cplx> a;
    std::vector<cplx> b;
    std::vector<DiscreteEigenvalue> discrete;
    Coupling coupling;

    std::size_t size() const { return kgrid.size(); }
    // S(k) rebuilt from (a, b); the 21 entry is (c*/c) conj(b).
    Mat2 assembled(std::size_t i) const;
    double max_det_error() const;
};

}  // namespace isq
