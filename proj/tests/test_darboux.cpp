#include "doctest.h"
#include "isq/closed_forms.hpp"
#include "isq/darboux.hpp"

#include <cmath>

using namespace isq;

namespace {

const cplx kAdd{0.3, 0.7};

FieldProfile gaussian(double amp, double L = 12.0, double h = 0.05)
{
    std::vector<cplx> v;
    for (double x : XGrid{L, h}.points()) v.push_back(amp * std::exp(-x * x));
    return make_profile(std::move(v), L, Asymptotics::schwartz(), 1e-3);
}

FieldProfile vacuum(double L = 20.0, double h = 0.05)
{
    return make_profile(std::vector<cplx>(XGrid{L, h}.count(), 0.0), L, Asymptotics::schwartz(), 1e-3);
}

IntegratorConfig fine()
{
    IntegratorConfig cfg;
    cfg.max_phase_step = 0.02;
    return cfg;
}

DarbouxStep add_at(cplx k0)
{
    DarbouxStep s;
    s.k0 = k0;
    return s;
}

DarbouxStep remove_at(cplx k0)
{
    DarbouxStep s;
    s.k0 = k0;
    s.mode = DarbouxStep::Mode::Remove;
    return s;
}

ScatteringData data(const FieldProfile& p, const Coupling& c, const KGrid& kg)
{
    return scatter_grid(p, c, kg, fine(), Region{0, 0, 0, 0});
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double field_diff(const FieldProfile& a, const FieldProfile& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

template <class F>
ErrorKind thrown(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Unsupported;
}

}  // namespace

TEST_CASE("sigma tends to diagonal limits at both ends")
{
    const FieldProfile p = vacuum();
    const Coupling c(I);
    const cplx k0 = 0.5 * I + 0.2;
    const Mat2 right = sigma_matrix(p, c, add_at(k0), p.L(), fine());
    const Mat2 left = sigma_matrix(p, c, add_at(k0), -p.L(), fine());
    Mat2 dr, dl;
    dr << k0, 0.0, 0.0, std::conj(k0);
    dl << std::conj(k0), 0.0, 0.0, k0;
    CHECK((right - dr).norm() < 1e-6);
    CHECK((left - dl).norm() < 1e-6);
    // eigenvalues k0 and k0*
    const Mat2 mid = sigma_matrix(p, c, add_at(k0), 0.0, fine());
    CHECK(std::abs(mid.trace() - 2.0 * k0.real()) < 1e-12);
    CHECK(std::abs(mid.determinant() - std::norm(k0)) < 1e-12);
    CHECK_THROWS_AS(sigma_matrix(p, c, add_at(k0), 0.013, fine()), Error);
}

TEST_CASE("adding a zero to the vacuum gives the one-soliton")
{
    const FieldProfile p = vacuum();
    const Coupling c(I);
    const FieldProfile q = apply_bt(p, c, add_at(0.5 * I), fine());
    double peak = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) peak = std::max(peak, std::abs(q[i]));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-6));

    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 4.0, 33);
    const ScatteringData sd = data(q, c, kg);
    for (std::size_t i = 0; i < kg.size(); ++i) {
        const double k = kg[i];
        CHECK(std::abs(sd.a[i] - (k - 0.5 * I) / (k + 0.5 * I)) < 1e-6);
        CHECK(std::abs(sd.b[i]) < 1e-6);
    }
}

TEST_CASE("add and remove are inverse on the field and the data")
{
    // the added tail decays like e^{-2 Im k0 |x|}; L = 12 truncates it at 4e-7
    const Coupling c(I);
    const FieldProfile p = gaussian(0.6, 16.0);
    const FieldProfile up = apply_bt(p, c, add_at(kAdd), fine());
    CHECK(field_diff(up, p) > 0.1);
    const FieldProfile back = apply_bt(up, c, remove_at(kAdd), fine());
    CHECK(field_diff(back, p) < 1e-8);

    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 4.0, 17);
    const ScatteringData d0 = data(p, c, kg);
    const ScatteringData d1 = bt_data_effect(bt_data_effect(d0, add_at(kAdd)), remove_at(kAdd));
    CHECK(max_diff(d1.a, d0.a) < 1e-8);
    CHECK(max_diff(d1.b, d0.b) < 1e-8);
    CHECK(d1.discrete.empty());
}

TEST_CASE("field-level step matches the data-level prediction")
{
    const Coupling c(I);
    const FieldProfile p = gaussian(0.6);
    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 4.0, 17);
    const ScatteringData predicted = bt_data_effect(data(p, c, kg), add_at(kAdd));
    const ScatteringData measured = data(apply_bt(p, c, add_at(kAdd), fine()), c, kg);
    CHECK(max_diff(measured.a, predicted.a) < 1e-6);
    CHECK(max_diff(measured.b, predicted.b) < 1e-6);

    const auto zeros = find_zeros(apply_bt(p, c, add_at(kAdd), fine()), c, Region{-2, 2, 0.05, 2}, fine());
    REQUIRE(zeros.size() == 1);
    CHECK(std::abs(zeros[0].position - kAdd) < 1e-6);
}

TEST_CASE("data effect on the trivial data")
{
    ScatteringData sd;
    sd.coupling = Coupling(I);
    sd.kgrid.samples = {-2.0, -0.5, 0.0, 1.0, 3.0};
    sd.a.assign(5, 1.0);
    sd.b.assign(5, 0.0);
    const ScatteringData one = bt_data_effect(sd, add_at(0.5 * I));
    for (std::size_t i = 0; i < 5; ++i) {
        const double k = sd.kgrid[i];
        CHECK(std::abs(one.a[i] - (k - 0.5 * I) / (k + 0.5 * I)) < 1e-15);
        CHECK(one.b[i] == cplx{});
    }
    REQUIRE(one.discrete.size() == 1);
    const ScatteringData none = bt_data_effect(one, remove_at(0.5 * I));
    for (const cplx& a : none.a) CHECK(std::abs(a - 1.0) < 1e-15);
    CHECK(thrown([&] { bt_data_effect(one, add_at(0.5 * I)); }) == ErrorKind::HigherOrderZero);
    CHECK(thrown([&] { bt_data_effect(sd, remove_at(0.5 * I)); }) == ErrorKind::RemoveNonexistentZero);
    CHECK(thrown([&] { bt_data_effect(sd, add_at(0.5)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("removing the bound state of the sech leaves nothing")
{
    const Coupling c(I);
    const FieldProfile p = soliton_profile_rd(SolitonParamsRD{}, XGrid{20.0, 0.05}, 1e-6);
    const FieldProfile q = apply_bt(p, c, remove_at(0.5 * I), fine());
    double peak = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) peak = std::max(peak, std::abs(q[i]));
    CHECK(peak < 1e-6);
    CHECK(find_zeros(q, c, Region{-2, 2, 0.05, 2}, fine()).empty());
}

TEST_CASE("field-level errors")
{
    const Coupling c(I);
    const FieldProfile sech = soliton_profile_rd(SolitonParamsRD{}, XGrid{20.0, 0.05}, 1e-6);
    CHECK(thrown([&] { apply_bt(sech, c, add_at(0.5 * I), fine()); }) == ErrorKind::HigherOrderZero);
    CHECK(thrown([&] { apply_bt(gaussian(0.3), c, remove_at(I), fine()); }) == ErrorKind::RemoveNonexistentZero);
    DarbouxStep zero_mu = add_at(I);
    zero_mu.mu = 0.0;
    CHECK(thrown([&] { apply_bt(gaussian(0.3), c, zero_mu, fine()); }) == ErrorKind::InvalidArgument);
    // Defocusing vacuum: |alpha| = |beta| exactly at x = 0.
    CHECK(thrown([&] { apply_bt(vacuum(), Coupling(cplx{1.0, 0.0}), add_at(0.5 * I), fine()); }) ==
          ErrorKind::SingularH);
    const FieldProfile fd = make_profile(std::vector<cplx>(101, 1.0), 5.0, Asymptotics::finite_density(1.0, 0.0));
    CHECK(thrown([&] { apply_bt(fd, c, add_at(I), fine()); }) == ErrorKind::Unsupported);
}

TEST_CASE("strip solitons")
{
    const Coupling c(I);
    const FieldProfile g = gaussian(0.3);
    const StripResult none = strip_solitons(g, c, fine());
    CHECK(none.steps.empty());
    CHECK(field_diff(none.profile, g) == 0.0);

    // sech seen at c = 2i carries zeros at i/2 and 3i/2.
    const FieldProfile p = soliton_profile_rd(SolitonParamsRD{}, XGrid{20.0, 0.05}, 1e-6);
    const Coupling c2(2.0 * I);
    const StripResult two = strip_solitons(p, c2, fine());
    REQUIRE(two.steps.size() == 2);
    CHECK(std::abs(two.steps[0].k0 - 1.5 * I) < 1e-6);
    CHECK(std::abs(two.steps[1].k0 - 0.5 * I) < 1e-6);
    const KGrid kg = make_kgrid(c2, Asymptotics::schwartz(), 3.0, 13);
    const ScatteringData sd = data(two.profile, c2, kg);
    for (std::size_t i = 0; i < kg.size(); ++i) {
        CHECK(std::abs(sd.a[i] - 1.0) < 1e-6);
        CHECK(std::abs(sd.b[i]) < 1e-6);
    }
}

TEST_CASE("dual quench by rescaling")
{
    const FieldProfile p = gaussian(0.6);
    DualQuenchConfig cfg;
    const FieldProfile q = dual_quench(p, Coupling(I), Coupling(2.0 * I), XGrid{p.L(), p.h()}, cfg);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(q[i] - 0.5 * p[i]) < 1e-15);
}

TEST_CASE("dual quench across regimes preserves the data")
{
    const FieldProfile p = gaussian(0.3);
    const Coupling c(0.5 * I), c0(cplx{0.5, 0.0});
    DualQuenchConfig cfg;
    cfg.kgrid = make_kgrid(c, Asymptotics::schwartz(), 5.0, 101);
    cfg.integrator = fine();
    const FieldProfile q = dual_quench(p, c, c0, XGrid{6.0, 0.05}, cfg);

    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 3.0, 31);
    const RadiativeData before = radiative_data(data(p, c, kg));
    const RadiativeData after = radiative_data(data(q, c0, kg));
    CHECK(max_diff(before.rho, after.rho) < 5e-3);
    double moved = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) moved = std::max(moved, std::abs(q[i] - p[i + 120]));
    CHECK(moved > 1e-3);
}

TEST_CASE("dual quench with equal couplings is the identity")
{
    const FieldProfile p = gaussian(0.3);
    const Coupling c(0.5 * I);
    DualQuenchConfig cfg;
    cfg.kgrid = make_kgrid(c, Asymptotics::schwartz(), 5.0, 101);
    cfg.allow_rescaling = false;
    const FieldProfile q = dual_quench(p, c, c, XGrid{6.0, 0.05}, cfg);
    double err = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) err = std::max(err, std::abs(q[i] - p[i + 120]));
    CHECK(err < 1e-3);
}
