#include "isq/zs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace isq {

namespace {

class ContourFunction {
public:
    explicit ContourFunction(const std::function<cplx(cplx)>& f) : f_(f) {}

    cplx operator()(cplx z)
    {
        const std::pair<double, double> key{z.real(), z.imag()};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const cplx v = f_(z);
        memo_.emplace(key, v);
        return v;
    }

private:
    const std::function<cplx(cplx)>& f_;
    std::map<std::pair<double, double>, cplx> memo_;
};

[[noreturn]] void through_zero(cplx z)
{
    std::ostringstream os;
    os << "contour passes through a zero near (" << z.real() << ", " << z.imag() << ")";
    throw Error(ErrorKind::ContourThroughZero, os.str());
}

// Total change of arg f along the segment [z0, z1] with adaptive bisection.
double arg_change(ContourFunction& f, cplx z0, cplx f0, cplx z1, cplx f1, const ZeroSearchConfig& cfg, int depth)
{
    if (f1 == cplx{}) through_zero(z1);
    const double d = std::arg(f1 / f0);
    if (std::abs(d) <= cfg.max_arg_step) return d;
    if (depth > 24) through_zero(0.5 * (z0 + z1));
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = f(zm);
    if (fm == cplx{}) through_zero(zm);
    return arg_change(f, z0, f0, zm, fm, cfg, depth + 1) + arg_change(f, zm, fm, z1, f1, cfg, depth + 1);
}

int winding(ContourFunction& f, const Region& r, const ZeroSearchConfig& cfg)
{
    const cplx corners[5] = {{r.re_min, r.im_min}, {r.re_max, r.im_min}, {r.re_max, r.im_max},
                             {r.re_min, r.im_max}, {r.re_min, r.im_min}};
    double total = 0.0;
    double fmax = 0.0;
    double fmin = INFINITY;
    for (int e = 0; e < 4; ++e) {
        const cplx za = corners[e], zb = corners[e + 1];
        const int n = std::max(2, cfg.edge_samples);
        cplx zp = za, fp = f(za);
        if (fp == cplx{}) through_zero(za);
        for (int s = 1; s <= n; ++s) {
            const cplx z = s == n ? zb : za + (zb - za) * (static_cast<double>(s) / n);
            const cplx fz = f(z);
            fmax = std::max(fmax, std::abs(fz));
            fmin = std::min(fmin, std::abs(fz));
            total += arg_change(f, zp, fp, z, fz, cfg, 0);
            zp = z;
            fp = fz;
        }
    }
    if (fmin < 1e-10 * std::max(1.0, fmax)) through_zero(corners[0]);
    const double w = total / (2.0 * M_PI);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1) through_zero(corners[0]);
    return static_cast<int>(rounded);
}

cplx newton(const std::function<cplx(cplx)>& raw, cplx z, int mult, const ZeroSearchConfig& cfg, bool& ok)
{
    ok = false;
    double prev = INFINITY;
    for (int it = 0; it < cfg.newton_max_iter; ++it) {
        const cplx fz = raw(z);
        if (fz == cplx{}) {
            ok = true;
            return z;
        }
        const double hd = 1e-5 * (1.0 + std::abs(z));
        const cplx d = (raw(z + hd) - raw(z - hd)) / (2.0 * hd);
        if (d == cplx{} || !std::isfinite(std::abs(d))) return z;
        const cplx step = static_cast<double>(mult) * fz / d;
        cplx zn = z - step;
        if (zn.imag() <= 0.0) zn = {zn.real(), 0.5 * z.imag()};
        const double size = std::abs(zn - z);
        z = zn;
        if (size < cfg.newton_tol * (1.0 + std::abs(z))) {
            ok = true;
            return z;
        }
        // Evaluation noise floor: steps have stopped shrinking at a tiny scale.
        if (it > 4 && size < 1e-8 * (1.0 + std::abs(z)) && size > 0.5 * prev) {
            ok = true;
            return z;
        }
        prev = size;
    }
    return z;
}

bool inside(const Region& r, cplx z, double slack)
{
    return z.real() >= r.re_min - slack && z.real() <= r.re_max + slack && z.imag() >= r.im_min - slack &&
           z.imag() <= r.im_max + slack;
}

void search(ContourFunction& f, const std::function<cplx(cplx)>& raw, const Region& r, int count,
            const ZeroSearchConfig& cfg, std::vector<DiscreteEigenvalue>& out)
{
    if (count <= 0) return;
    const double w = r.re_max - r.re_min, h = r.im_max - r.im_min;
    const double size = std::max(w, h);
    const cplx centre{0.5 * (r.re_min + r.re_max), 0.5 * (r.im_min + r.im_max)};
    const bool small = size < cfg.min_box;

    if (count == 1 || small) {
        bool ok = false;
        const cplx z = newton(raw, centre, count, cfg, ok);
        if (ok && inside(r, z, small ? size : 1e-9 * (1.0 + size))) {
            DiscreteEigenvalue e;
            e.position = z;
            e.order = count;
            e.near_axis = z.imag() < cfg.near_axis;
            out.push_back(e);
            return;
        }
        if (small) {
            std::ostringstream os;
            os << "Newton iteration failed to settle near (" << centre.real() << ", " << centre.imag() << ")";
            throw Error(ErrorKind::NewtonStalled, os.str());
        }
    }

    // Off-centre splits keep symmetric zero pairs away from the cut lines.
    static const double fractions[] = {0.5371, 0.4613, 0.5877, 0.4129, 0.6343};
    for (double frac : fractions) {
        const double xs = r.re_min + frac * w;
        const double ys = r.im_min + (1.0 - frac) * h;
        const Region kids[4] = {{r.re_min, xs, r.im_min, ys},
                                {xs, r.re_max, r.im_min, ys},
                                {r.re_min, xs, ys, r.im_max},
                                {xs, r.re_max, ys, r.im_max}};
        int counts[4];
        try {
            int total = 0;
            for (int i = 0; i < 4; ++i) total += counts[i] = winding(f, kids[i], cfg);
            if (total != count) continue;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ContourThroughZero) throw;
            continue;
        }
        for (int i = 0; i < 4; ++i) search(f, raw, kids[i], counts[i], cfg, out);
        return;
    }
    through_zero(centre);
}

}  // namespace

int winding_count(const std::function<cplx(cplx)>& f, const Region& region, const ZeroSearchConfig& zcfg)
{
    ContourFunction cf(f);
    return winding(cf, region, zcfg);
}

std::vector<DiscreteEigenvalue> find_zeros(const std::function<cplx(cplx)>& f, const Region& region,
                                           const ZeroSearchConfig& zcfg)
{
    if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min))
        throw Error(ErrorKind::InvalidArgument, "degenerate search rectangle");
    ContourFunction cf(f);
    Region r = region;
    for (int attempt = 0;; ++attempt) {
        try {
            const int n = winding(cf, r, zcfg);
            std::vector<DiscreteEigenvalue> out;
            search(cf, f, r, n, zcfg, out);
            std::sort(out.begin(), out.end(), [](const DiscreteEigenvalue& a, const DiscreteEigenvalue& b) {
                return a.position.imag() != b.position.imag() ? a.position.imag() < b.position.imag()
                                                              : a.position.real() < b.position.real();
            });
            return out;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ContourThroughZero || attempt >= zcfg.max_retries) throw;
        }
        // Shrink the rectangle slightly so its edges move off the offending zero.
        const double s = 1e-3 * (attempt + 1);
        const double w = region.re_max - region.re_min, h = region.im_max - region.im_min;
        r = Region{region.re_min + s * w, region.re_max - 0.7 * s * w, region.im_min + 0.3 * s * h,
                   region.im_max - 0.9 * s * h};
    }
}

}  // namespace isq
