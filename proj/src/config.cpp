#include "bsr/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bsr::harness {

using nlohmann::json;

Mode mode_from_string(const std::string& s) {
    if (s == "simulate") return Mode::simulate;
    if (s == "kinetic") return Mode::kinetic;
    if (s == "asymptotic") return Mode::asymptotic;
    if (s == "sweep") return Mode::sweep;
    if (s == "compare") return Mode::compare;
    if (s == "itest") return Mode::itest;
    throw ConfigError("config: unknown mode '" + s + "'");
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::simulate: return "simulate";
        case Mode::kinetic: return "kinetic";
        case Mode::asymptotic: return "asymptotic";
        case Mode::sweep: return "sweep";
        case Mode::compare: return "compare";
        case Mode::itest: return "itest";
    }
    return "?";
}

rheology::SpatialDensitySpec DensityConfig::build(const SuspensionParams& p) const {
    if (variant == "gaussian") {
        const double amplitude = M_PI * double(p.N) * p.N / p.L;
        return rheology::SpatialDensitySpec::gaussian(sigma_x, sigma_y, amplitude);
    }
    if (variant == "uniform_box") return rheology::SpatialDensitySpec::uniform_box(p.L);
    if (variant == "tabulated")
        return rheology::SpatialDensitySpec::tabulated_from_csv(table_path);
    throw ConfigError("config: unknown density.variant '" + variant + "'");
}

void ExperimentConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (sweep) {
        if (sweep->values.empty()) throw ConfigError("config: sweep.values is empty");
        if (sweep->axis != "B" && sweep->axis != "phi" && sweep->axis != "gamma")
            throw ConfigError("config: sweep.axis must be one of B, phi, gamma (got '" +
                              sweep->axis + "')");
    }
    if (mode == Mode::sweep && !sweep) throw ConfigError("config: mode sweep requires a sweep block");
    if (density.variant == "tabulated" && density.table_path.empty())
        throw ConfigError("config: density.table_path required for the tabulated variant");
    if (solver.l_max < 4) throw ConfigError("config: solver.l_max must be >= 4");
    if (ibm.dt <= 0) throw ConfigError("config: ibm.dt must be > 0");
    if (seeds.replicas < 1) throw ConfigError("config: seeds.replicas must be >= 1");
}

namespace {

void expect_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + where + it.key() + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config: bad value type for '") + key + "'");
        }
    }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    expect_keys(j, "", {"mode", "preset", "params", "density", "solver", "ibm", "seeds", "sweep",
                        "out", "workers"});
    ExperimentConfig c;
    if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());

    if (j.contains("params")) {
        const json& p = j.at("params");
        expect_keys(p, "params.",
                    {"N", "L", "V0", "U0", "B", "gamma", "eta0", "D0", "eps_lj", "sigma_lj",
                     "r_cut", "f_max", "body_semi_major", "body_semi_minor", "phi"});
        read(p, "N", c.params.N);
        read(p, "L", c.params.L);
        read(p, "V0", c.params.V0);
        read(p, "U0", c.params.U0);
        read(p, "B", c.params.B);
        read(p, "gamma", c.params.gamma);
        read(p, "eta0", c.params.eta0);
        read(p, "D0", c.params.D0);
        read(p, "eps_lj", c.params.eps_lj);
        read(p, "sigma_lj", c.params.sigma_lj);
        read(p, "r_cut", c.params.r_cut);
        read(p, "f_max", c.params.f_max);
        read(p, "body_semi_major", c.params.body_semi_major);
        read(p, "body_semi_minor", c.params.body_semi_minor);
        if (p.contains("phi")) {
            // volume fraction fixes L at the configured N
            const double phi = p.at("phi").get<double>();
            if (phi <= 0 || phi > 0.4) throw ConfigError("config: phi out of range (0, 0.4]");
            c.params.L =
                SuspensionParams::half_width_for_phi(c.params.N, phi, c.params.body_volume());
        }
    }
    if (j.contains("density")) {
        const json& d = j.at("density");
        expect_keys(d, "density.", {"variant", "sigma_x", "sigma_y", "table_path"});
        read(d, "variant", c.density.variant);
        read(d, "sigma_x", c.density.sigma_x);
        read(d, "sigma_y", c.density.sigma_y);
        read(d, "table_path", c.density.table_path);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        expect_keys(s, "solver.", {"l_max", "dt", "tol_steady", "t_max"});
        read(s, "l_max", c.solver.l_max);
        read(s, "dt", c.solver.dt);
        read(s, "tol_steady", c.solver.tol_steady);
        read(s, "t_max", c.solver.t_max);
    }
    if (j.contains("ibm")) {
        const json& s = j.at("ibm");
        expect_keys(s, "ibm.", {"dt", "t_burn", "t_total", "sample_every", "restart"});
        read(s, "dt", c.ibm.dt);
        read(s, "t_burn", c.ibm.t_burn);
        read(s, "t_total", c.ibm.t_total);
        read(s, "sample_every", c.ibm.sample_every);
        read(s, "restart", c.ibm.restart_path);
    }
    if (j.contains("seeds")) {
        const json& s = j.at("seeds");
        expect_keys(s, "seeds.", {"replicas", "master"});
        read(s, "replicas", c.seeds.replicas);
        read(s, "master", c.seeds.master);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        expect_keys(s, "sweep.", {"axis", "values", "run_ibm"});
        SweepAxis ax;
        if (!s.contains("axis") || !s.contains("values"))
            throw ConfigError("config: sweep needs 'axis' and 'values'");
        if (s.at("axis").is_array()) throw ConfigError("config: exactly one sweep axis allowed");
        ax.axis = s.at("axis").get<std::string>();
        ax.values = s.at("values").get<std::vector<double>>();
        read(s, "run_ibm", ax.run_ibm);
        c.sweep = ax;
    }
    read(j, "out", c.out_dir);
    read(j, "workers", c.workers);
    c.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.params = SuspensionParams{};  // desk-scale defaults: N = 200, pushers
    c.params.L = SuspensionParams::half_width_for_phi(c.params.N, 0.02, c.params.body_volume());
    c.params.gamma = 0.1;
    c.params.B = 0.2;
    if (name == "fig1") {
        c.mode = Mode::sweep;
        c.sweep = SweepAxis{"B", {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5}, true};
    } else if (name == "fig2") {
        c.mode = Mode::sweep;
        c.sweep = SweepAxis{"phi", {0.005, 0.01, 0.02, 0.03, 0.04}, true};
    } else if (name == "fig3") {
        c.mode = Mode::sweep;
        c.sweep = SweepAxis{"gamma", {0.05, 0.1, 0.2, 0.5, 1.0}, true};
    } else if (name == "compare") {
        c.mode = Mode::compare;
        c.params.gamma = 1.0;
        c.params.B = 0.1;
        c.params.D0 = 2.0;
        c.solver.l_max = 24;
    } else {
        throw ConfigError("config: unknown preset '" + name + "'");
    }
    return c;
}

std::string canonical_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = to_string(c.mode);
    j["params"] = {{"N", c.params.N},
                   {"L", c.params.L},
                   {"V0", c.params.V0},
                   {"U0", c.params.U0},
                   {"B", c.params.B},
                   {"gamma", c.params.gamma},
                   {"eta0", c.params.eta0},
                   {"D0", c.params.D0},
                   {"eps_lj", c.params.eps_lj},
                   {"sigma_lj", c.params.sigma_lj},
                   {"r_cut", c.params.r_cut},
                   {"f_max", c.params.f_max},
                   {"body_semi_major", c.params.body_semi_major},
                   {"body_semi_minor", c.params.body_semi_minor}};
    j["density"] = {{"variant", c.density.variant},
                    {"sigma_x", c.density.sigma_x},
                    {"sigma_y", c.density.sigma_y},
                    {"table_path", c.density.table_path}};
    j["solver"] = {{"l_max", c.solver.l_max},
                   {"dt", c.solver.dt},
                   {"tol_steady", c.solver.tol_steady},
                   {"t_max", c.solver.t_max}};
    j["ibm"] = {{"dt", c.ibm.dt},
                {"t_burn", c.ibm.t_burn},
                {"t_total", c.ibm.t_total},
                {"sample_every", c.ibm.sample_every},
                {"restart", c.ibm.restart_path}};
    j["seeds"] = {{"replicas", c.seeds.replicas}, {"master", c.seeds.master}};
    if (c.sweep)
        j["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values},
                      {"run_ibm", c.sweep->run_ibm}};
    j["out"] = c.out_dir;
    return j.dump();  // nlohmann objects keep keys sorted
}

std::uint64_t config_hash(const ExperimentConfig& c) {
    const std::string s = canonical_json(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica) {
    std::uint64_t z = master + (replica + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace bsr::harness
