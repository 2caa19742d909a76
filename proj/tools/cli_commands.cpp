#include "cli_commands.hpp"

#include "isq/closed_forms.hpp"
#include "isq/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace isq::cli {

namespace fs = std::filesystem;

namespace {

// Raised while reading the configuration; maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rejects a verify run; maps to exit code 3.
struct VerifyFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double num(const json& j, const char* key, double fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

int integer(const json& j, const char* key, int fallback)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

const json& section(const json& cfg, const char* key)
{
    static const json empty = json::object();
    if (!cfg.contains(key)) return empty;
    if (!cfg[key].is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return cfg[key];
}

XGrid grid_from(const json& g, XGrid fallback)
{
    XGrid out = fallback;
    out.L = num(g, "L", fallback.L);
    if (g.is_object() && g.contains("n_modes")) {
        out = periodic_grid(out.L, integer(g, "n_modes", 2048));
    } else {
        out.h = num(g, "h", fallback.h);
    }
    if (!(out.L > 0.0) || !(out.h > 0.0)) throw ConfigError("grid needs positive L and h");
    return out;
}

IntegratorConfig integrator_from(const json& cfg)
{
    const json& j = section(cfg, "integrator");
    IntegratorConfig ic;
    ic.substeps = integer(j, "substeps", ic.substeps);
    ic.interp_order = integer(j, "interp_order", ic.interp_order);
    ic.det_tol = num(j, "det_tol", ic.det_tol);
    ic.max_phase_step = num(j, "max_phase_step", ic.max_phase_step);
    return ic;
}

ResolventConfig resolvent_from(const json& cfg)
{
    const json& j = section(cfg, "resolvent");
    ResolventConfig rc;
    rc.eps = num(j, "eps", rc.eps);
    rc.neumann_terms = integer(j, "neumann_terms", rc.neumann_terms);
    rc.neumann_stop = num(j, "neumann_stop", rc.neumann_stop);
    return rc;
}

StepperConfig stepper_from(const json& cfg, const FieldProfile& p)
{
    const json& j = section(cfg, "stepper");
    StepperConfig sc;
    sc.dt = num(j, "dt", sc.dt);
    sc.n_modes = integer(j, "n_modes", static_cast<int>(p.size()) - 1);
    sc.dealias = j.value("dealias", false);
    return sc;
}

ZeroSearchConfig zero_search_from(const json& cfg)
{
    const json& j = section(cfg, "zero_search");
    ZeroSearchConfig z;
    z.edge_samples = integer(j, "edge_samples", z.edge_samples);
    z.newton_tol = num(j, "newton_tol", z.newton_tol);
    return z;
}

std::optional<Region> region_from(const json& cfg)
{
    if (!cfg.contains("region")) return std::nullopt;
    const json& r = section(cfg, "region");
    return Region{num(r, "re_min", -5.0), num(r, "re_max", 5.0), num(r, "im_min", 0.02), num(r, "im_max", 2.0)};
}

Coupling coupling_key(const json& cfg, const char* key, std::optional<Coupling> fallback = std::nullopt)
{
    if (!cfg.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(std::string("missing '") + key + "'");
    }
    return coupling_from(cfg[key]);
}

// Parses "name", "name:key=value,key=value" or "name key=value key=value".
std::pair<std::string, std::map<std::string, double>> parse_builtin(const std::string& spec)
{
    std::map<std::string, double> params;
    const auto colon = spec.find_first_of(": ");
    const std::string name = spec.substr(0, colon);
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::replace(rest.begin(), rest.end(), ' ', ',');
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("builtin parameter '" + item + "' needs key=value");
            try {
                params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw ConfigError("builtin parameter '" + item + "' is not numeric");
            }
        }
    }
    return {name, params};
}

struct Csv {
    std::ostringstream os;
    explicit Csv(const std::vector<std::string>& header)
    {
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
    }
    void row(const std::vector<double>& v)
    {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << csv_number(v[i]);
        os << "\n";
    }
};

class Run {
public:
    Run(const Options& opt, json cfg) : opt_(opt), cfg_(std::move(cfg)) { fs::create_directories(opt.out_dir); }

    void write_json(const std::string& name, const json& j)
    {
        write_text_file((fs::path(opt_.out_dir) / name).string(), j.dump(2) + "\n");
        files_.push_back(name);
    }
    void write_csv(const std::string& name, const Csv& csv)
    {
        write_text_file((fs::path(opt_.out_dir) / name).string(), csv.os.str());
        files_.push_back(name);
    }
    void finish(int code, const std::string& message)
    {
        json m{{"command", opt_.command}, {"exit_code", code}, {"status", code == kOk ? "ok" : "failed"}};
        if (!message.empty()) m["message"] = message;
        json files = json::array();
        for (const auto& f : files_) files.push_back(f);
        m["files"] = files;
        write_text_file((fs::path(opt_.out_dir) / "manifest.json").string(), m.dump(2) + "\n");
    }
    const json& cfg() const { return cfg_; }

private:
    Options opt_;
    json cfg_;
    std::vector<std::string> files_;
};

Csv data_csv(const ScatteringData& sd)
{
    Csv csv({"k", "re_a", "im_a", "re_b", "im_b", "abs_rho"});
    for (std::size_t i = 0; i < sd.size(); ++i)
        csv.row({sd.kgrid[i], sd.a[i].real(), sd.a[i].imag(), sd.b[i].real(), sd.b[i].imag(),
                 std::abs(sd.a[i]) > 0.0 ? std::abs(sd.b[i] / sd.a[i]) : INFINITY});
    return csv;
}

Csv profile_csv(const FieldProfile& p)
{
    Csv csv({"x", "re_q", "im_q"});
    const auto xs = p.xs();
    for (std::size_t i = 0; i < p.size(); ++i) csv.row({xs[i], p[i].real(), p[i].imag()});
    return csv;
}

Csv zeros_csv(const std::vector<DiscreteEigenvalue>& zs)
{
    Csv csv({"re_k", "im_k", "order", "re_norming", "im_norming"});
    for (const auto& z : zs) {
        const cplx g = z.norming.value_or(cplx{NAN, NAN});
        csv.row({z.position.real(), z.position.imag(), static_cast<double>(z.order), g.real(), g.imag()});
    }
    return csv;
}

// Profile and coupling are read before any numerical work starts.
struct Setup {
    FieldProfile profile;
    Coupling c;
};

Setup setup(const json& cfg)
{
    return {profile_from_config(cfg), coupling_key(cfg, "coupling")};
}

void cmd_scatter(Run& run)
{
    const auto [p, c] = setup(run.cfg());
    const KGrid kg = kgrid_from_config(run.cfg(), c, p.asymptotics());
    const IntegratorConfig ic = integrator_from(run.cfg());
    const bool search = run.cfg().value("search_zeros", true);
    ScatteringData sd;
    if (search)
        sd = scatter_grid(p, c, kg, ic);
    else
        sd = scatter_grid(p, c, kg, ic, Region{0, 0, 0, 0});
    run.write_json("scatter.json", to_json(sd));
    run.write_csv("scatter.csv", data_csv(sd));
}

void cmd_zeros(Run& run)
{
    const auto [p, c] = setup(run.cfg());
    const KGrid kg = kgrid_from_config(run.cfg(), c, p.asymptotics());
    const Region r = region_from(run.cfg()).value_or(default_region(p, c, kg));
    const auto zeros = find_zeros(p, c, r, integrator_from(run.cfg()), zero_search_from(run.cfg()));
    json arr = json::array();
    for (const auto& z : zeros) arr.push_back(to_json(z));
    run.write_json("zeros.json", json{{"coupling", complex_json(c.value())},
                                      {"region", {r.re_min, r.re_max, r.im_min, r.im_max}},
                                      {"zeros", arr}});
    run.write_csv("zeros.csv", zeros_csv(zeros));
}

void cmd_quench(Run& run)
{
    const auto [p, c] = setup(run.cfg());
    const Coupling cn = coupling_key(run.cfg(), "coupling_new");
    const KGrid kg = kgrid_from_config(run.cfg(), c, p.asymptotics());
    const IntegratorConfig ic = integrator_from(run.cfg());
    const double nu = num(run.cfg(), "nu_effective", std::abs(cn.value()));
    const double thr = num(run.cfg(), "b_threshold", 1e-6);
    const QuenchReport rep = quench_map(p, c, cn, kg, ic);
    const Classification cl = classify_post_quench(rep, nu, thr);
    std::optional<FactorizationReport> fact;
    if (run.cfg().value("factorization", false))
        fact = verify_factorization(p, c, cn, kg, default_x_nodes(p), ic);
    run.write_json("quench.json", to_json(rep, cl, fact ? &*fact : nullptr));
    Csv csv({"k", "re_a_pre", "im_a_pre", "re_b_pre", "im_b_pre", "re_a_post", "im_a_post", "re_b_post", "im_b_post"});
    for (std::size_t i = 0; i < kg.size(); ++i)
        csv.row({kg[i], rep.pre.a[i].real(), rep.pre.a[i].imag(), rep.pre.b[i].real(), rep.pre.b[i].imag(),
                 rep.post.a[i].real(), rep.post.a[i].imag(), rep.post.b[i].real(), rep.post.b[i].imag()});
    run.write_csv("quench.csv", csv);
    run.write_csv("quench_zeros.csv", zeros_csv(rep.soliton_inventory));
}

std::vector<double> times_from(const json& cfg)
{
    std::vector<double> ts;
    if (cfg.contains("times")) {
        if (!cfg["times"].is_array()) throw ConfigError("'times' must be an array");
        for (const auto& v : cfg["times"]) {
            if (!v.is_number()) throw ConfigError("'times' entries must be numbers");
            ts.push_back(v.get<double>());
        }
    } else {
        ts = {0.0, num(cfg, "t", 1.0)};
    }
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] < 0.0 || (i && ts[i] < ts[i - 1])) throw ConfigError("'times' must be ascending and non-negative");
    return ts;
}

void cmd_evolve(Run& run)
{
    const auto [p, c] = setup(run.cfg());
    const std::vector<double> ts = times_from(run.cfg());
    const StepperConfig sc = stepper_from(run.cfg(), p);
    const EvolutionRecord rec = evolve_snapshots(p, c, ts, sc);
    json snaps = json::array();
    Csv csv({"t", "x", "re_q", "im_q"});
    for (std::size_t s = 0; s < rec.times.size(); ++s) {
        snaps.push_back(json{{"t", rec.times[s]}, {"profile", to_json(rec.snapshots[s])}});
        const auto xs = rec.snapshots[s].xs();
        for (std::size_t i = 0; i < xs.size(); ++i)
            csv.row({rec.times[s], xs[i], rec.snapshots[s][i].real(), rec.snapshots[s][i].imag()});
    }
    run.write_json("evolve.json", json{{"coupling", complex_json(c.value())},
                                       {"dt", sc.dt},
                                       {"mass_drift", rec.mass_drift},
                                       {"hamiltonian_drift", rec.hamiltonian_drift},
                                       {"max_boundary_fraction", rec.max_boundary_fraction},
                                       {"snapshots", snaps}});
    run.write_csv("evolve.csv", csv);
}

void cmd_reconstruct(Run& run)
{
    const json& cfg = run.cfg();
    ScatteringData sd;
    Coupling c0;
    if (cfg.contains("data")) {
        if (!cfg["data"].is_string()) throw ConfigError("'data' must be a file path");
        json dj;
        try {
            dj = json::parse(read_text_file(cfg["data"].get<std::string>()));
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        const Coupling c = dj.contains("coupling") ? coupling_from(dj["coupling"]) : coupling_key(cfg, "coupling");
        try {
            sd = data_from_json(dj, c);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        c0 = coupling_key(cfg, "coupling_new", c);
    } else {
        const auto [p, c] = setup(cfg);
        const KGrid kg = kgrid_from_config(cfg, c, p.asymptotics());
        c0 = coupling_key(cfg, "coupling_new", c);
        sd = scatter_grid(p, c, kg, integrator_from(cfg));
    }
    const XGrid xg = grid_from(section(cfg, "xgrid"), XGrid{10.0, 0.1});
    const double t = num(cfg, "t", 0.0);
    if (!sd.discrete.empty())
        throw Error(ErrorKind::NotRadiative, "refused: the data has " + std::to_string(sd.discrete.size()) +
                                                 " discrete eigenvalue(s); reconstruction handles radiative data only "
                                                 "(strip the zeros with the darboux command first)");
    const RadiativeData rd = radiative_data(sd);
    const FieldProfile q = reconstruct_field(rd, c0, xg, t, resolvent_from(cfg), num(cfg, "boundary_tol", 1e-3));
    run.write_json("reconstruct.json", json{{"coupling", complex_json(c0.value())}, {"t", t}, {"profile", to_json(q)}});
    run.write_csv("reconstruct.csv", profile_csv(q));
}

void cmd_darboux(Run& run)
{
    const json& cfg = run.cfg();
    const auto [p, c] = setup(cfg);
    const IntegratorConfig ic = integrator_from(cfg);
    std::vector<DarbouxStep> steps;
    if (cfg.contains("steps")) {
        if (!cfg["steps"].is_array()) throw ConfigError("'steps' must be an array");
        for (const auto& s : cfg["steps"]) {
            try {
                steps.push_back(step_from_json(s));
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
        }
    }
    const bool strip = cfg.value("strip", false);
    if (steps.empty() && !strip) throw ConfigError("darboux needs 'steps' or \"strip\": true");
    FieldProfile q = p;
    std::vector<DarbouxStep> applied;
    if (strip) {
        StripResult sr = strip_solitons(q, c, ic, region_from(cfg));
        q = sr.profile;
        applied = sr.steps;
    }
    for (const auto& st : steps) {
        q = apply_bt(q, c, st, ic);
        applied.push_back(st);
    }
    json arr = json::array();
    for (const auto& st : applied) arr.push_back(to_json(st));
    json out{{"coupling", complex_json(c.value())}, {"steps", arr}, {"profile", to_json(q)}};
    if (cfg.contains("kgrid")) {
        const KGrid kg = kgrid_from_config(cfg, c, p.asymptotics());
        out["data_before"] = to_json(scatter_grid(p, c, kg, ic));
        out["data_after"] = to_json(scatter_grid(q, c, kg, ic));
    }
    run.write_json("darboux.json", out);
    Csv csv({"x", "re_q_in", "im_q_in", "re_q_out", "im_q_out"});
    const auto xs = p.xs();
    for (std::size_t i = 0; i < p.size(); ++i) csv.row({xs[i], p[i].real(), p[i].imag(), q[i].real(), q[i].imag()});
    run.write_csv("darboux.csv", csv);
}

void cmd_verify(Run& run)
{
    const json& cfg = run.cfg();
    const auto [p, c] = setup(cfg);
    std::vector<std::string> suites = {"factorization", "isospectral"};
    if (cfg.contains("suites")) {
        suites.clear();
        for (const auto& s : cfg["suites"]) suites.push_back(s.get<std::string>());
    }
    const IntegratorConfig ic = integrator_from(cfg);
    const KGrid kg = kgrid_from_config(cfg, c, p.asymptotics());
    const json& th = section(cfg, "thresholds");
    json out = json::object();
    bool pass = true;
    for (const auto& s : suites) {
        if (s == "factorization") {
            const Coupling cn = coupling_key(cfg, "coupling_new", Coupling(2.0 * c.value()));
            const FactorizationReport r = verify_factorization(p, c, cn, kg, default_x_nodes(p), ic);
            const bool ok = r.max_residual < num(th, "factorization", 1e-5) &&
                            r.max_x_spread < num(th, "x_spread", 1e-6) &&
                            r.boundary_normalization < num(th, "normalization", 1e-7) &&
                            (!r.unitarity_checked || r.unitarity < num(th, "unitarity", 1e-7));
            json j = to_json(r);
            j["coupling_new"] = complex_json(cn.value());
            j["pass"] = ok;
            out["factorization"] = j;
            pass = pass && ok;
        } else if (s == "isospectral") {
            const StepperConfig sc = stepper_from(cfg, p);
            const double t = num(cfg, "t", 0.1);
            const IsospectralReport r = isospectral_check(p, c, t, kg, sc, ic);
            const bool ok =
                r.max_abs_a_drift < num(th, "a_drift", 1e-4) && r.max_phase_residual < num(th, "phase", 1e-3);
            json j = to_json(r);
            j["t"] = t;
            j["pass"] = ok;
            out["isospectral"] = j;
            pass = pass && ok;
        } else {
            throw ConfigError("unknown verify suite '" + s + "'");
        }
    }
    out["pass"] = pass;
    run.write_json("verify.json", out);
    if (!pass) throw VerifyFailure("a residual exceeded its threshold");
}

bool numerical_kind(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidCoupling:
    case ErrorKind::NonUniformGrid:
    case ErrorKind::BoundaryMismatch:
    case ErrorKind::EmptyGrid:
        return false;
    default:
        return true;
    }
}

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"scatter", "quench", "zeros", "evolve",
                                                   "reconstruct", "darboux", "verify"};
    return names;
}

}  // namespace

std::string csv_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double whole_number(const std::string& s)
{
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ConfigError("trailing characters in '" + s + "'");
    return v;
}

}  // namespace

Coupling coupling_from(const json& j)
{
    try {
        if (j.is_number()) return Coupling(j.get<double>());
        if (j.is_object()) return Coupling(cplx{j.value("re", 0.0), j.value("im", 0.0)});
        if (j.is_array() && j.size() == 2) return Coupling(cplx{j[0].get<double>(), j[1].get<double>()});
        if (j.is_string()) {
            std::string s = j.get<std::string>();
            if (!s.empty() && s.back() == 'i') {
                s.pop_back();
                const double v = s.empty() || s == "+" ? 1.0 : s == "-" ? -1.0 : whole_number(s);
                return Coupling(cplx{0.0, v});
            }
            return Coupling(whole_number(s));
        }
    } catch (const Error& e) {
        throw ConfigError(e.what());
    } catch (const std::exception&) {
        throw ConfigError("unreadable coupling " + j.dump());
    }
    throw ConfigError("unreadable coupling " + j.dump());
}

FieldProfile builtin_profile(const std::string& spec, const json& grid)
{
    const auto [name, prm] = parse_builtin(spec);
    auto get = [&](const char* k, double d) {
        auto it = prm.find(k);
        return it == prm.end() ? d : it->second;
    };
    for (const auto& [k, v] : prm)
        if (!std::isfinite(v)) throw ConfigError("builtin parameter " + k + " is not finite");
    const XGrid g = grid_from(grid, XGrid{40.0, 0.02});
    const double tol = num(grid, "boundary_tol", kDefaultBoundaryTol);
    if (name == "sech") {
        SolitonParamsRD sp;
        sp.A = get("A", 1.0);
        sp.V = get("V", 0.0);
        sp.phase = get("phase", 0.0);
        sp.x0 = get("x0", 0.0);
        return soliton_profile_rd(sp, g, tol);
    }
    if (name == "zero") return make_profile(std::vector<cplx>(g.count(), 0.0), g.L, Asymptotics::schwartz(), tol);
    if (name == "gaussian") {
        const double amp = get("amp", 0.2), w = get("width", 1.0);
        std::vector<cplx> v;
        for (double x : g.points()) v.push_back(amp * std::exp(-(x / w) * (x / w)));
        return make_profile(std::move(v), g.L, Asymptotics::schwartz(), tol);
    }
    if (name == "kink") {
        SolitonParamsFD fd;
        fd.rho = get("rho", 1.0);
        fd.theta = get("theta", M_PI / 2);
        fd.c = get("c", 1.0);
        return soliton_profile_fd_defocusing(fd, g, tol);
    }
    if (name == "fd-focusing") {
        const double A = prm.count("Z") ? fd_focusing_amplitude(get("Z", 2.0)) : get("A", 1.5);
        return profile_fd_focusing(A, g, tol);
    }
    throw ConfigError("unknown builtin profile '" + name + "' (sech, zero, gaussian, kink, fd-focusing)");
}

FieldProfile profile_from_config(const json& cfg)
{
    if (!cfg.contains("profile")) throw ConfigError("missing 'profile' (or --builtin)");
    const json& pj = cfg["profile"];
    const json& grid = section(cfg, "grid");
    try {
        if (pj.is_string()) return builtin_profile(pj.get<std::string>(), grid);
        if (!pj.is_object()) throw ConfigError("'profile' must be a string or an object");
        if (pj.contains("builtin")) {
            std::string spec = pj["builtin"].get<std::string>();
            std::string sep = ":";
            for (const auto& [k, v] : pj.items()) {
                if (k == "builtin") continue;
                if (!v.is_number()) throw ConfigError("builtin parameter '" + k + "' must be numeric");
                spec += sep + k + "=" + csv_number(v.get<double>());
                sep = ",";
            }
            return builtin_profile(spec, grid);
        }
        if (pj.contains("file")) {
            const json fj = json::parse(read_text_file(pj["file"].get<std::string>()));
            return profile_from_json(fj.contains("profile") ? fj["profile"] : fj);
        }
        return profile_from_json(pj);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

KGrid kgrid_from_config(const json& cfg, const Coupling& c, const Asymptotics& asym)
{
    const json& j = section(cfg, "kgrid");
    try {
        if (j.contains("samples")) return make_kgrid(j["samples"].get<std::vector<double>>(), c, asym);
        return make_kgrid(c, asym, num(j, "kmax", 5.0), static_cast<std::size_t>(integer(j, "n", 201)));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

json load_config(const Options& opt)
{
    json cfg = json::object();
    if (!opt.config_path.empty()) {
        try {
            cfg = json::parse(read_text_file(opt.config_path));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    if (!opt.builtin.empty()) cfg["profile"] = opt.builtin;
    if (!cfg.contains("coupling") && cfg.contains("profile") && cfg["profile"].is_string()) {
        // Builtins carry a natural coupling: c for the kink, i otherwise.
        const auto [name, prm] = parse_builtin(cfg["profile"].get<std::string>());
        if (name == "kink")
            cfg["coupling"] = prm.count("c") ? prm.at("c") : 1.0;
        else
            cfg["coupling"] = "i";
    }
    if (opt.command == "verify" && !cfg.contains("grid") && cfg.contains("profile") && cfg["profile"].is_string())
        cfg["grid"] = json{{"L", 40.0}, {"n_modes", 2048}};
    return cfg;
}

int execute(const Options& opt)
{
    set_thread_count(opt.threads);
    json cfg;
    try {
        cfg = load_config(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    std::unique_ptr<Run> run;
    try {
        run = std::make_unique<Run>(opt, cfg);
        run->write_json("config.json", json{{"command", opt.command}, {"config", cfg}});
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    int code = kOk;
    std::string message;
    try {
        if (opt.command == "scatter")
            cmd_scatter(*run);
        else if (opt.command == "zeros")
            cmd_zeros(*run);
        else if (opt.command == "quench")
            cmd_quench(*run);
        else if (opt.command == "evolve")
            cmd_evolve(*run);
        else if (opt.command == "reconstruct")
            cmd_reconstruct(*run);
        else if (opt.command == "darboux")
            cmd_darboux(*run);
        else if (opt.command == "verify")
            cmd_verify(*run);
        else
            throw ConfigError("unknown command '" + opt.command + "'");
    } catch (const ConfigError& e) {
        code = kConfigError;
        message = e.what();
    } catch (const VerifyFailure& e) {
        code = kVerifyFailed;
        message = e.what();
    } catch (const Error& e) {
        code = numerical_kind(e.kind()) ? kNumericalError : kConfigError;
        message = e.what();
    } catch (const json::exception& e) {
        code = kConfigError;
        message = e.what();
    } catch (const std::exception& e) {
        code = kNumericalError;
        message = e.what();
    }
    if (code != kOk) std::cerr << "error: " << message << "\n";
    try {
        run->finish(code, message);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (code == kOk) code = kNumericalError;
    }
    return code;
}

int run(int argc, const char* const* argv)
{
    CLI::App app{"Inverse scattering toolkit for NLS coupling quenches"};
    app.require_subcommand(1);
    Options opt;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " pipeline");
        sub->add_option("--config", opt.config_path, "JSON run configuration");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
        sub->add_option("--builtin", opt.builtin, "builtin profile, e.g. sech:A=1,V=0");
        sub->callback([&opt, name] { opt.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }
    return execute(opt);
}

}  // namespace isq::cli
