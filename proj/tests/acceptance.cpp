// Acceptance suite: one PASS/FAIL line per criterion.
#include "isq/closed_forms.hpp"
#include "isq/darboux.hpp"
#include "isq/glm.hpp"
#include "isq/nls.hpp"
#include "isq/quench.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

using namespace isq;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const Region kNoSearch{0, 0, 0, 0};

FieldProfile sech(double L = 40.0, double h = 0.02, double tol = 1e-10)
{
    return soliton_profile_rd(SolitonParamsRD{}, XGrid{L, h}, tol);
}

FieldProfile gaussian(double amp, double L, double h)
{
    std::vector<cplx> v;
    for (double x : XGrid{L, h}.points()) v.push_back(amp * std::exp(-x * x));
    return make_profile(std::move(v), L, Asymptotics::schwartz(), 1e-6);
}

cplx trapezoid_c(const std::vector<cplx>& f, double h)
{
    cplx s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * h;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const std::vector<cplx>& a)
{
    double m = 0.0;
    for (const cplx& v : a) m = std::max(m, std::abs(v));
    return m;
}

double unitarity(const ScatteringData& sd)
{
    double m = 0.0;
    for (std::size_t i = 0; i < sd.size(); ++i) {
        const Mat2 S = sd.assembled(i);
        m = std::max(m, (S.adjoint() * S - Mat2::Identity()).norm());
    }
    return m;
}

double rel_l2(const FieldProfile& q, const std::function<cplx(double)>& exact)
{
    double e = 0.0, n = 0.0;
    const auto xs = q.xs();
    for (std::size_t i = 0; i < q.size(); ++i) {
        e += std::norm(q[i] - exact(xs[i]));
        n += std::norm(exact(xs[i]));
    }
    return std::sqrt(e / n);
}

Outcome soliton_regression()
{
    const Coupling c(I);
    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 5.0, 201);
    const ScatteringData sd = scatter_grid(sech(), c, kg, {}, kNoSearch);
    double ea = 0.0;
    for (std::size_t i = 0; i < kg.size(); ++i)
        ea = std::max(ea, std::abs(sd.a[i] - (kg[i] - 0.5 * I) / (kg[i] + 0.5 * I)));
    const double eb = max_abs(sd.b);
    return {ea < 1e-6 && eb < 1e-6, fmt("max|a - blaschke| = %.2e, max|b| = %.2e", ea, eb)};
}

Outcome determinant_unitarity()
{
    const FieldProfile s = sech();
    const FieldProfile g = gaussian(0.8, 12.0, 0.02);
    SolitonParamsFD fd;
    const FieldProfile kink = soliton_profile_fd_defocusing(fd, XGrid{30.0, 0.01});
    const FieldProfile fdf = profile_fd_focusing(fd_focusing_amplitude(2.0), XGrid{30.0, 0.01});
    struct Case {
        const FieldProfile* p;
        Coupling c;
        bool unitary;
    };
    const Case cases[] = {{&s, Coupling(I), true},          {&s, Coupling(2.0 * I), true},
                          {&s, Coupling(0.5 * I), true},    {&s, Coupling(cplx{0.5, 0.0}), false},
                          {&g, Coupling(I), true},          {&g, Coupling(cplx{0.7, 0.0}), false},
                          {&kink, Coupling(cplx{1.0, 0.0}), false}, {&fdf, Coupling(I), false}};
    double det = 0.0, uni = 0.0;
    for (const Case& cs : cases) {
        const KGrid kg = make_kgrid(cs.c, cs.p->asymptotics(), 5.0, 101);
        const ScatteringData sd = scatter_grid(*cs.p, cs.c, kg, {}, kNoSearch);
        det = std::max(det, sd.max_det_error());
        if (cs.unitary) uni = std::max(uni, unitarity(sd));
    }
    return {det < 1e-8 && uni < 2e-6, fmt("max|det S - 1| = %.2e, max|S^+S - 1| = %.2e over 8 cases", det, uni)};
}

Outcome free_limit()
{
    const XGrid g{40.0, 0.01};
    const auto xs = g.points();
    double quad = 0.0;
    for (const auto& [A, V] : {std::pair{1.0, 0.0}, std::pair{1.3, 0.6}}) {
        for (double k : {-2.0, -0.7, 0.0, 0.4, 1.5}) {
            std::vector<cplx> f;
            for (double x : xs) f.push_back(std::exp(2.0 * I * k * x) * A / std::cosh(A * x) * std::exp(I * V * x));
            const cplx closed = -M_PI / std::cosh(M_PI * (k + V / 2) / A);
            quad = std::max(quad, std::abs(-trapezoid_c(f, g.h) - closed));
        }
    }
    const FieldProfile p = sech();
    double dev[2];
    int j = 0;
    for (double nu : {0.02, 0.01}) {
        const Coupling c(nu * I);
        const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 3.0, 61);
        const ScatteringData sd = scatter_grid(p, c, kg, {}, kNoSearch);
        double d = 0.0;
        for (std::size_t i = 0; i < kg.size(); ++i)
            d = std::max(d, std::abs(sd.b[i] / c.value() + M_PI / std::cosh(M_PI * kg[i])));
        dev[j++] = d;
    }
    const double ratio = dev[0] / dev[1];
    return {quad < 1e-10 && dev[1] < 1e-3 && ratio >= 2.0,
            fmt("quadrature %.2e; |b/c - b_free| = %.2e (0.02i), %.2e (0.01i), ratio %.2f", quad, dev[0], dev[1],
                ratio)};
}

Outcome zero_census()
{
    const FieldProfile p = sech();
    const Region r{-3.0, 3.0, 0.02, 3.5};
    bool ok = true;
    std::string d;
    double worst = 0.0;
    for (const cplx cv : {2.0 * I, 1.5 * I, 0.5 * I, cplx{0.5, 0.0}}) {
        const Coupling c(cv);
        const auto found = find_zeros(p, c, r);
        std::vector<DiscreteEigenvalue> expected;
        if (c.regime() == Regime::Focusing) expected = zeros_rapid(cv.imag()).zeros;
        ok = ok && found.size() == expected.size();
        for (std::size_t i = 0; i < std::min(found.size(), expected.size()); ++i)
            worst = std::max(worst, std::abs(found[i].position - expected[i].position));
        d += fmt("%s%zu/%zu", d.empty() ? "" : " ", found.size(), expected.size());
    }
    ok = ok && worst < 1e-6;
    return {ok, "found/expected at c = 2i, 1.5i, 0.5i, 0.5: " + d + fmt(", worst position error %.2e", worst)};
}

Outcome fd_focusing()
{
    const double A = fd_focusing_amplitude(2.0);
    const FieldProfile p = profile_fd_focusing(A, XGrid{30.0, 0.01});
    const Coupling c(I);
    const KGrid kg = make_kgrid(c, p.asymptotics(), 5.0, 201);
    const ScatteringData sd = scatter_grid(p, c, kg, {}, kNoSearch);
    double ea = 0.0;
    for (std::size_t i = 0; i < kg.size(); ++i) {
        const double mu = std::sqrt(kg[i] * kg[i] + 1.0);
        ea = std::max(ea, std::abs(sd.a[i] - (mu - I * A / 2.0) / (mu + I * A / 2.0)));
    }
    const double eb = max_abs(sd.b);
    return {ea < 1e-5 && eb < 1e-5, fmt("A = %.2f: max|a - blaschke(mu)| = %.2e, max|b| = %.2e", A, ea, eb)};
}

Outcome fd_defocusing()
{
    SolitonParamsFD fd;
    const FieldProfile p = soliton_profile_fd_defocusing(fd, XGrid{30.0, 0.01});
    const Coupling c(cplx{1.0, 0.0});
    const KGrid kg = make_kgrid(c, p.asymptotics(), 5.0, 200);
    const ScatteringData sd = scatter_grid(p, c, kg, {}, kNoSearch);
    const double nu = fd.nu();
    double lit = 0.0, swapped = 0.0;
    for (std::size_t i = 0; i < kg.size(); ++i) {
        const double k = kg[i];
        lit = std::max(lit, std::abs(sd.a[i] - a_finite_defocusing_product(k, 1, fd)));
        const cplx mu = mu_continued(k, 1.0, 1.0);
        const cplx beta = std::cos(fd.theta / 2) + I * (k / mu) * std::sin(fd.theta / 2);
        swapped = std::max(swapped, std::abs(sd.a[i] - (2.0 * mu - I * nu) / (2.0 * mu) / beta));
    }
    const double eb = max_abs(sd.b);
    return {eb < 1e-5 && lit < 1e-5,
            fmt("max|b| = %.2e, max|a - product formula| = %.2e; with beta in place of beta* %.2e", eb, lit,
                swapped)};
}

Outcome factorization()
{
    const FieldProfile p = sech(20.0, 0.02, 1e-8);
    const KGrid kg = make_kgrid(Coupling(I), Asymptotics::schwartz(), 3.0, 25);
    const FactorizationReport r = verify_factorization(p, Coupling(I), Coupling(2.0 * I), kg, default_x_nodes(p));
    const bool ok = r.max_residual < 1e-5 && r.max_x_spread < 1e-6 && r.boundary_normalization < 1e-7 &&
                    r.x_samples.size() == 9;
    return {ok, fmt("residual %.2e, x spread %.2e, normalization %.2e, %zu x samples", r.max_residual,
                    r.max_x_spread, r.boundary_normalization, r.x_samples.size())};
}

Outcome darboux()
{
    const Coupling c(I);
    const cplx k0{0.3, 0.7};
    const FieldProfile p = gaussian(0.6, 16.0, 0.05);
    IntegratorConfig ic;
    ic.max_phase_step = 0.02;
    DarbouxStep add;
    add.k0 = k0;
    DarbouxStep rem = add;
    rem.mode = DarbouxStep::Mode::Remove;
    const FieldProfile up = apply_bt(p, c, add, ic);
    const FieldProfile back = apply_bt(up, c, rem, ic);
    double field = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) field = std::max(field, std::abs(back[i] - p[i]));

    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 4.0, 41);
    const ScatteringData before = scatter_grid(p, c, kg, ic, kNoSearch);
    const ScatteringData after = scatter_grid(up, c, kg, ic, kNoSearch);
    const ScatteringData predicted = bt_data_effect(before, add);
    const double data = std::max(max_diff(after.a, predicted.a), max_diff(after.b, predicted.b));
    const double b = max_diff(after.b, before.b);
    return {field < 1e-8 && data < 1e-6 && b < 1e-6,
            fmt("field restored to %.2e, data vs prediction %.2e, b drift %.2e", field, data, b)};
}

Outcome glm_round_trip()
{
    const Coupling c(cplx{0.5, 0.0});
    const FieldProfile p = gaussian(0.2, 12.0, 0.05);
    const XGrid xg{6.0, 0.1};
    const auto exact = [](double x) { return cplx{0.2 * std::exp(-x * x)}; };
    auto data = [&](std::size_t n) {
        return radiative_data(scatter_grid(p, c, make_kgrid(c, Asymptotics::schwartz(), 5.0, n), {}, kNoSearch));
    };
    const RadiativeData coarse = data(101), fine = data(201);
    ResolventConfig rc;
    rc.neumann_terms = 12;
    const FieldProfile q = reconstruct_field(coarse, c, xg, 0.0, rc);
    const FieldProfile qn = reconstruct_field_neumann(coarse, c, xg, rc);
    const double err = rel_l2(q, exact);
    double agree = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) agree = std::max(agree, std::abs(q[i] - qn[i]));
    const double err_fine = rel_l2(reconstruct_field(fine, c, xg, 0.0, rc), exact);

    ResolventConfig smeared = rc;
    smeared.eps = 0.1;
    const double e1 = rel_l2(reconstruct_field(coarse, c, xg, 0.0, smeared), exact);
    smeared.eps = 0.05;
    const double e2 = rel_l2(reconstruct_field(fine, c, xg, 0.0, smeared), exact);

    const double ratio = err / err_fine;
    return {err < 1e-2 && agree < 1e-6 && ratio >= 2.0,
            fmt("rel L2 %.2e -> %.2e on k doubling (ratio %.2f), Neumann vs resolvent %.2e; eps = dk kernel: %.2e -> "
                "%.2e (ratio %.2f)",
                err, err_fine, ratio, agree, e1, e2, e1 / e2)};
}

Outcome isospectrality()
{
    const Coupling c(1.5 * I);
    const double L = 40.0;
    std::vector<cplx> v;
    for (double x : periodic_grid(L, 2048).points()) v.push_back(1.0 / std::cosh(x));
    const FieldProfile p = make_profile(std::move(v), L, Asymptotics::schwartz(), 1e-10);
    StepperConfig sc;
    sc.dt = 1e-4;
    sc.n_modes = 2048;
    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 3.0, 31);
    const IsospectralReport r = isospectral_check(p, c, 0.5, kg, sc);
    return {r.max_abs_a_drift < 1e-4 && r.max_phase_residual < 1e-3 && r.phase_points > 0,
            fmt("| |a(t)| - |a(0)| | = %.2e, phase residual vs -4k^2t %.2e over %zu points (vs +4k^2t: %.2e)",
                r.max_abs_a_drift, r.max_phase_residual, r.phase_points, r.max_phase_residual_plus)};
}

Outcome dual_quench_check()
{
    const Coupling c(cplx{0.5, 0.0}), c0(cplx{0.25, 0.0});
    const FieldProfile p = gaussian(0.2, 12.0, 0.05);
    const XGrid xg{p.L(), p.h()};
    DualQuenchConfig cfg;
    cfg.kgrid = make_kgrid(c, Asymptotics::schwartz(), 5.0, 101);
    cfg.allow_rescaling = false;
    const FieldProfile general = dual_quench(p, c, c0, xg, cfg);
    cfg.allow_rescaling = true;
    const FieldProfile fast = dual_quench(p, c, c0, xg, cfg);

    const KGrid kg = make_kgrid(c, Asymptotics::schwartz(), 4.0, 41);
    const ScatteringData ref = scatter_grid(p, c, kg, {}, kNoSearch);
    const ScatteringData got = scatter_grid(general, c0, kg, {}, kNoSearch);
    const double data = std::max(max_diff(got.a, ref.a), max_diff(got.b, ref.b));
    double rescale = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) rescale = std::max(rescale, std::abs(fast[i] - 2.0 * p[i]));
    return {data < 5e-2 && rescale < 1e-8,
            fmt("data error of the general path %.2e; fast path vs (c/c0) q %.2e", data, rescale)};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion all[] = {{1, "soliton regression", soliton_regression},
                             {2, "determinant and unitarity", determinant_unitarity},
                             {3, "free limit", free_limit},
                             {4, "zero census", zero_census},
                             {5, "finite-density focusing", fd_focusing},
                             {6, "finite-density defocusing", fd_defocusing},
                             {7, "factorization", factorization},
                             {8, "Darboux involution", darboux},
                             {9, "GLM round trip", glm_round_trip},
                             {10, "isospectrality", isospectrality},
                             {11, "dual quench", dual_quench_check}};
    // Fails against the product formula as given; see README.
    const std::set<int> known = {6};
    int unexpected = 0;
    for (const Criterion& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool excused = !o.pass && known.count(c.id);
        if (!o.pass && !excused) ++unexpected;
        std::printf("%-4s %2d %-28s %s [%.1fs]%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    excused ? " (known discrepancy)" : "");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
