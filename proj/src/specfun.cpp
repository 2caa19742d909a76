#include "isq/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace isq {

namespace {

constexpr double kLanczosG = 671.0 / 128.0;
constexpr std::array<double, 14> kLanczosCoef = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,    -0.491913816097620199,
    .339946499848118887e-4,  .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};

bool is_nonpositive_integer(cplx z, double tol = 0.0)
{
    if (std::abs(z.imag()) > tol) return false;
    const double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

// Lanczos sum for Re z >= 1/2.
cplx lgamma_right(cplx z)
{
    cplx y = z;
    cplx ser = 0.999999999999997092;
    for (double c : kLanczosCoef) {
        y += 1.0;
        ser += c / y;
    }
    const cplx tmp = z + kLanczosG;
    return (z + 0.5) * std::log(tmp) - tmp + std::log(2.5066282746310005 * ser / z);
}

cplx log_sin_pi(cplx z)
{
    // log sin(pi z) without overflow for large |Im z|.
    const double y = z.imag();
    if (std::abs(y) < 20.0) return std::log(std::sin(M_PI * z));
    const cplx e = std::exp(2.0 * I * M_PI * z * (y > 0 ? 1.0 : -1.0));
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i
    if (y > 0) return -I * M_PI * z + std::log((1.0 - e) / (-2.0 * I));
    return I * M_PI * z + std::log((1.0 - e) / (2.0 * I));
}

cplx series_2f1(cplx a, cplx b, cplx c, cplx z, const SpecFunConfig& cfg)
{
    cplx sum = 1.0, term = 1.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        const double dn = n;
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        sum += term;
        if (term == cplx{}) return sum;
        if (std::abs(term) <= cfg.series_tol * std::abs(sum) && n > 2) return sum;
    }
    std::ostringstream os;
    os << "hypergeometric series did not converge within " << cfg.max_terms << " terms at |z| = " << std::abs(z);
    throw Error(ErrorKind::NonConvergent, os.str());
}

}  // namespace

cplx lgamma_complex(cplx z)
{
    if (is_nonpositive_integer(z)) throw Error(ErrorKind::PoleAtNonPositiveInteger, "Gamma pole");
    if (z.real() >= 0.5) return lgamma_right(z);
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(M_PI) - log_sin_pi(z) - lgamma_right(1.0 - z);
}

cplx gamma_complex(cplx z)
{
    if (is_nonpositive_integer(z)) {
        std::ostringstream os;
        os << "Gamma has a pole at z = " << z.real();
        throw Error(ErrorKind::PoleAtNonPositiveInteger, os.str());
    }
    if (z.imag() == 0.0 && z.real() == std::round(z.real()) && z.real() <= 171.0) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(z.real()); ++k) f *= k;
        return f;
    }
    if (z.real() >= 0.5) return std::exp(lgamma_right(z));
    return M_PI / (std::sin(M_PI * z) * std::exp(lgamma_right(1.0 - z)));
}

cplx rgamma_complex(cplx z)
{
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-lgamma_complex(z));
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const SpecFunConfig& cfg)
{
    if (is_nonpositive_integer(c)) throw Error(ErrorKind::ParameterPole, "c is a non-positive integer");
    if (z == cplx{}) return 1.0;

    // Terminating series: a or b a non-positive integer not preceded by a pole in c.
    for (cplx p : {a, b}) {
        if (is_nonpositive_integer(p)) {
            const int m = static_cast<int>(-std::round(p.real()));
            cplx sum = 1.0, term = 1.0;
            for (int n = 0; n < m; ++n) {
                const double dn = n;
                term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
                sum += term;
            }
            return sum;
        }
    }

    const double r = std::abs(z);
    if (r > 1.0 + 1e-14) throw Error(ErrorKind::NonConvergent, "|z| > 1 is outside the supported domain");
    if (r <= 0.5) return series_2f1(a, b, c, z, cfg);

    const cplx s = c - a - b;
    if (std::abs(z - 1.0) < 1e-15) {
        if (!(s.real() > 0.0)) throw Error(ErrorKind::NonConvergent, "z = 1 requires Re(c - a - b) > 0");
        return gamma_complex(c) * gamma_complex(s) * rgamma_complex(c - a) * rgamma_complex(c - b);
    }

    // Sum whichever of z, 1 - z and the Pfaff variable z/(z-1) is smallest.
    const cplx w = z / (z - 1.0);
    const bool integer_s = is_nonpositive_integer(s, 1e-12) || is_nonpositive_integer(-s, 1e-12);
    const double rz = r, r1 = std::abs(1.0 - z), rw = std::abs(w);
    const double best = std::min({rz, integer_s ? INFINITY : r1, rw});
    if (best > 0.9) {
        if (integer_s && r1 <= std::min(rz, rw))
            throw Error(ErrorKind::NonConvergent, "integer c - a - b needs the logarithmic connection");
        throw Error(ErrorKind::NonConvergent, "argument too close to exp(+-i pi/3) for the supported transforms");
    }
    if (best == rz) return series_2f1(a, b, c, z, cfg);
    if (best == rw) return std::pow(1.0 - z, -a) * series_2f1(a, c - b, c, w, cfg);

    auto lg = [](cplx v) { return lgamma_complex(v); };
    const cplx v = 1.0 - z;
    cplx f1{}, f2{};
    if (!is_nonpositive_integer(c - a) && !is_nonpositive_integer(c - b))
        f1 = std::exp(lg(c) + lg(s) - lg(c - a) - lg(c - b)) * series_2f1(a, b, 1.0 - s, v, cfg);
    if (!is_nonpositive_integer(a) && !is_nonpositive_integer(b))
        f2 = std::exp(lg(c) + lg(-s) - lg(a) - lg(b)) * std::pow(v, s) * series_2f1(c - a, c - b, 1.0 + s, v, cfg);
    return f1 + f2;
}

}  // namespace isq
