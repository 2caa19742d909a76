#include "doctest.h"
#include "isq/specfun.hpp"

#include <cmath>
#include <random>

using namespace isq;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Stirling series after shifting the argument up by the recurrence; an independent route to log Gamma.
cplx lgamma_stirling(cplx z)
{
    cplx shift = 0.0;
    while (std::abs(z) < 30.0 || z.real() < 20.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
    cplx s = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * M_PI);
    cplx zp = z;
    for (int k = 1; k <= 7; ++k) {
        s += B[k - 1] / (2.0 * k * (2.0 * k - 1.0) * zp);
        zp *= z * z;
    }
    return s - shift;
}

cplx plain_series(cplx a, cplx b, cplx c, cplx z, int terms)
{
    cplx sum = 1.0, t = 1.0;
    for (int n = 0; n < terms; ++n) {
        t *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * (n + 1.0)) * z;
        sum += t;
    }
    return sum;
}

}  // namespace

TEST_CASE("gamma exact values")
{
    CHECK(rel(gamma_complex(0.5), std::sqrt(M_PI)) < 1e-14);
    CHECK(rel(gamma_complex(5.0), 24.0) < 1e-15);
    CHECK(rel(gamma_complex(1.0), 1.0) < 1e-15);
    CHECK(rel(gamma_complex(-0.5), -2.0 * std::sqrt(M_PI)) < 1e-13);
}

TEST_CASE("gamma modulus on the critical line")
{
    for (double y : {0.7, 0.1, 2.5, 7.0}) {
        const cplx g = gamma_complex(cplx(0.5, y));
        CHECK(std::abs(std::norm(g) - M_PI / std::cosh(M_PI * y)) / (M_PI / std::cosh(M_PI * y)) < 1e-12);
    }
}

TEST_CASE("gamma poles rejected")
{
    for (double z : {0.0, -1.0, -7.0}) {
        try {
            gamma_complex(z);
            FAIL("expected pole");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::PoleAtNonPositiveInteger);
        }
    }
    CHECK(std::abs(rgamma_complex(-3.0)) == 0.0);
}

TEST_CASE("gamma recurrence on a random set")
{
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    int checked = 0;
    while (checked < 400) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) > 20.0 || std::abs(z) < 0.1) continue;
        CHECK(rel(gamma_complex(z + 1.0), z * gamma_complex(z)) < 1e-12);
        ++checked;
    }
}

TEST_CASE("log gamma matches an independent Stirling evaluation")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-40.0, 40.0);
    for (int i = 0; i < 300; ++i) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z) > 50.0 || std::abs(z.imag()) < 0.5) continue;
        const cplx g = gamma_complex(z);
        const cplx oracle = std::exp(lgamma_stirling(z));
        CHECK(rel(g, oracle) < 1e-12);
    }
}

TEST_CASE("hyp2f1 trivial cases")
{
    CHECK(hyp2f1(0.3, cplx(1, 2), 1.7, 0.0) == cplx(1.0));
    const cplx b(0.4, -1.3), c(2.2, 0.5);
    for (cplx z : {cplx(0.3, 0.1), cplx(0.9, 0.0), cplx(-0.8, 0.5)})
        CHECK(std::abs(hyp2f1(-1.0, b, c, z) - (1.0 - b / c * z)) < 1e-15);
}

TEST_CASE("hyp2f1 Gauss summation at z = 1")
{
    const cplx a(0.3, 0.4), b(-0.2, 0.1), c(3.1, 0.5);
    const cplx gauss = hyp2f1(a, b, c, 1.0);
    const cplx truncated = plain_series(a, b, c, 1.0, 200000);
    CHECK(std::abs(gauss - truncated) < 1e-10);
}

TEST_CASE("hyp2f1 agrees with the raw series across branch switches")
{
    const cplx a(0.5, -0.7), b(0.5, 0.3), c(1.0, -0.2);
    for (cplx z : {cplx(0.55, 0.0), cplx(0.6, 0.3), cplx(-0.6, 0.2), cplx(0.4, -0.4), cplx(-0.7, 0.0)}) {
        const cplx ref = plain_series(a, b, c, z, 4000);
        CHECK(std::abs(hyp2f1(a, b, c, z) - ref) < 1e-11);
    }
}

TEST_CASE("hyp2f1 satisfies the hypergeometric ODE")
{
    const cplx a(0.5, -1.1), b(0.5, 0.9), c(1.0, -0.6);
    const double h = 1e-3;
    for (cplx z : {cplx(0.3, 0.0), cplx(0.6, 0.2), cplx(-0.7, 0.1), cplx(0.8, -0.1), cplx(0.1, 0.45)}) {
        auto F = [&](cplx w) { return hyp2f1(a, b, c, w); };
        const cplx f0 = F(z), fp1 = F(z + h), fm1 = F(z - h), fp2 = F(z + 2 * h), fm2 = F(z - 2 * h);
        const cplx d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12 * h);
        const cplx d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12 * h * h);
        const cplx res = z * (1.0 - z) * d2 + (c - (a + b + 1.0) * z) * d1 - a * b * f0;
        CHECK(std::abs(res) < 1e-8);
    }
}

TEST_CASE("hyp2f1 domain errors")
{
    CHECK_THROWS_AS(hyp2f1(0.5, 0.5, -2.0, 0.3), Error);
    try {
        hyp2f1(0.5, 0.5, 1.5, cplx(1.5, 0.0));
        FAIL("expected NonConvergent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergent);
    }
}
