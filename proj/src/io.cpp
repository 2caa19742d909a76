#include "isq/io.hpp"

#include <fstream>
#include <sstream>

namespace isq {

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

json to_json(const FieldProfile& p)
{
    json asym;
    if (p.asymptotics().is_schwartz()) {
        asym = {{"kind", "schwartz"}};
    } else {
        asym = {{"kind", "finite_density"}, {"rho", p.asymptotics().rho}, {"theta", p.asymptotics().theta}};
    }
    json re = json::array(), im = json::array();
    for (const cplx& v : p.values()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return json{{"L", p.L()}, {"h", p.h()}, {"boundary_tol", p.boundary_tol()}, {"asymptotics", asym},
                {"re", re}, {"im", im}};
}

FieldProfile profile_from_json(const json& j)
{
    const auto& asym = j.at("asymptotics");
    const std::string kind = asym.at("kind").get<std::string>();
    Asymptotics a;
    if (kind == "schwartz") {
        a = Asymptotics::schwartz();
    } else if (kind == "finite_density") {
        a = Asymptotics::finite_density(asym.at("rho").get<double>(), asym.value("theta", 0.0));
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown asymptotics kind '" + kind + "'");
    }
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != im.size()) throw Error(ErrorKind::InvalidArgument, "re/im length mismatch");
    std::vector<cplx> values(re.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = {re[i].get<double>(), im[i].get<double>()};
    const double L = j.at("L").get<double>();
    if (j.contains("h") && values.size() > 1) {
        const double h = j.at("h").get<double>();
        const double expect = 2.0 * L / static_cast<double>(values.size() - 1);
        if (std::abs(h - expect) > 1e-9 * expect)
            throw Error(ErrorKind::NonUniformGrid, "declared h disagrees with L and sample count");
    }
    return make_profile(std::move(values), L, a, j.value("boundary_tol", kDefaultBoundaryTol));
}

json to_json(const DiscreteEigenvalue& z)
{
    json out{{"re", z.position.real()}, {"im", z.position.imag()}, {"order", z.order}};
    if (z.norming) out["norming"] = complex_json(*z.norming);
    if (z.near_axis) out["near_axis"] = true;
    return out;
}

json to_json(const ScatteringData& sd)
{
    json k = json::array(), are = json::array(), aim = json::array(), bre = json::array(), bim = json::array();
    for (std::size_t i = 0; i < sd.size(); ++i) {
        k.push_back(sd.kgrid[i]);
        are.push_back(sd.a[i].real());
        aim.push_back(sd.a[i].imag());
        bre.push_back(sd.b[i].real());
        bim.push_back(sd.b[i].imag());
    }
    json zeros = json::array();
    for (const auto& z : sd.discrete) zeros.push_back(to_json(z));
    return json{{"coupling", complex_json(sd.coupling.value())},
                {"k", k}, {"a_re", are}, {"a_im", aim}, {"b_re", bre}, {"b_im", bim}, {"zeros", zeros}};
}

ScatteringData data_from_json(const json& j, const Coupling& c)
{
    ScatteringData sd;
    sd.coupling = c;
    const auto& k = j.at("k");
    const std::size_t n = k.size();
    for (const char* key : {"a_re", "a_im", "b_re", "b_im"})
        if (j.at(key).size() != n) throw Error(ErrorKind::InvalidArgument, std::string("length mismatch in ") + key);
    sd.kgrid.samples.resize(n);
    sd.a.resize(n);
    sd.b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sd.kgrid.samples[i] = k[i].get<double>();
        sd.a[i] = {j["a_re"][i].get<double>(), j["a_im"][i].get<double>()};
        sd.b[i] = {j["b_re"][i].get<double>(), j["b_im"][i].get<double>()};
    }
    if (j.contains("zeros")) {
        for (const auto& z : j["zeros"]) {
            DiscreteEigenvalue e;
            e.position = {z.at("re").get<double>(), z.at("im").get<double>()};
            e.order = z.value("order", 1);
            if (z.contains("norming")) e.norming = complex_from_json(z["norming"]);
            e.near_axis = z.value("near_axis", false);
            sd.discrete.push_back(e);
        }
    }
    return sd;
}

json to_json(const DarbouxStep& st)
{
    json out{{"k0", complex_json(st.k0)}};
    if (st.mu) out["mu"] = complex_json(*st.mu);
    out["mode"] = to_string(st.mode);
    return out;
}

DarbouxStep step_from_json(const json& j)
{
    DarbouxStep st;
    st.k0 = complex_from_json(j.at("k0"));
    if (j.contains("mu") && !j["mu"].is_null()) st.mu = complex_from_json(j["mu"]);
    const std::string mode = j.value("mode", std::string("add"));
    if (mode == "add")
        st.mode = DarbouxStep::Mode::Add;
    else if (mode == "remove")
        st.mode = DarbouxStep::Mode::Remove;
    else
        throw Error(ErrorKind::InvalidArgument, "unknown Darboux mode '" + mode + "'");
    return st;
}

json to_json(const Classification& cl)
{
    return json{{"label", cl.label},       {"predicted_N", cl.predicted_N}, {"found_N", cl.found_N},
                {"nu_effective", cl.nu_effective}, {"max_b", cl.max_b}, {"marginal", cl.marginal}};
}

json to_json(const FactorizationReport& r)
{
    json out{{"max_residual", r.max_residual},
             {"max_x_spread", r.max_x_spread},
             {"boundary_normalization", r.boundary_normalization},
             {"boundary_limits", r.boundary_limits}};
    if (r.unitarity_checked) out["unitarity"] = r.unitarity;
    out["x_samples"] = r.x_samples;
    return out;
}

json to_json(const IsospectralReport& r)
{
    return json{{"max_abs_a_drift", r.max_abs_a_drift},
                {"max_phase_residual", r.max_phase_residual},
                {"max_phase_residual_plus", r.max_phase_residual_plus},
                {"phase_points", r.phase_points},
                {"mass_drift", r.mass_drift},
                {"max_boundary_fraction", r.max_boundary_fraction}};
}

json to_json(const QuenchReport& r, const Classification& cl, const FactorizationReport* fact)
{
    json out{{"pre", to_json(r.pre)}, {"post", to_json(r.post)}, {"classification", to_json(cl)}};
    if (fact) out["factorization_residual"] = to_json(*fact);
    return out;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << text;
}

}  // namespace isq
