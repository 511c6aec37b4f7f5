#include <CLI11.hpp>

#include <cstdio>
#include <random>

#include "bsr/config.hpp"
#include "bsr/csv.hpp"
#include "bsr/identity.hpp"
#include "bsr/sweep.hpp"

using namespace bsr;
using namespace bsr::harness;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    int replicas = 0;
    bool seed_set = false;
};

ExperimentConfig load(const CommonOpts& o, Mode mode) {
    ExperimentConfig c;
    if (!o.config_path.empty())
        c = parse_config(o.config_path);
    else if (!o.preset_name.empty())
        c = preset(o.preset_name);
    c.mode = mode;
    if (!o.out_dir.empty()) c.out_dir = o.out_dir;
    if (o.seed_set) c.seeds.master = o.seed;
    if (o.replicas > 0) c.seeds.replicas = o.replicas;
    c.validate();
    return c;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--preset", o.preset_name, "built-in preset: fig1 | fig2 | fig3 | compare");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--replicas", o.replicas, "independent replicas");
}

int run_simulate(const ExperimentConfig& c) {
    ensure_out_dir(c.out_dir);
    const std::string path = c.out_dir + "/trajectory.csv";
    CsvWriter csv(path);
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx", (unsigned long long)config_hash(c));
    csv.comment(std::string("config_fnv1a = ") + hash);
    csv.comment("config = " + canonical_json(c));
    csv.header({"t", "sigma_d_xy", "sigma_lj_xy", "sigma_d_xx", "sigma_d_yy", "sigma_d_zz"});

    std::mt19937_64 rng(replica_seed(c.seeds.master, 0));
    ibm::SwimmerState state;
    if (!c.ibm.restart_path.empty()) {
        state = ibm::read_checkpoint(c.ibm.restart_path);
        if (state.size() != c.params.N)
            throw ConfigError("restart checkpoint holds a different swimmer count");
    } else {
        state = ibm::random_state(c.params, rng);
    }
    const long nsteps = std::lround(c.ibm.t_total / c.ibm.dt);
    std::vector<ibm::StressSample> traj;
    for (long n = 0; n < nsteps; ++n) {
        ibm::step(state, c.params, c.ibm.dt, rng);
        if ((n + 1) % c.ibm.sample_every == 0) {
            const auto s = ibm::measure_stress(state, c.params);
            traj.push_back(s);
            csv.row({s.t, s.dipolar(0, 1), 0.5 * (s.collision(0, 1) + s.collision(1, 0)),
                     s.dipolar(0, 0), s.dipolar(1, 1), s.dipolar(2, 2)});
        }
    }
    ibm::write_checkpoint(c.out_dir + "/final_state.bswm", state);
    if (c.params.gamma > 0) {
        const auto est = ibm::effective_viscosity(traj, c.params, c.ibm.t_burn);
        std::printf("eta_int (dipolar)    = %s\n", CsvWriter::format(est.dipolar).c_str());
        std::printf("eta_int (dipolar+LJ) = %s\n", CsvWriter::format(est.total).c_str());
    }
    std::printf("trajectory: %s\n", path.c_str());
    return 0;
}

int run_kinetic(const ExperimentConfig& c) {
    ensure_out_dir(c.out_dir);
    const auto spec = c.density.build(c.params);
    kinetic::Solver solver(c.solver.l_max);
    kinetic::KernelSpec kernel = rheology::reduced_kernel(spec, c.params);
    kinetic::SolverSettings set;
    set.dt = c.solver.dt;
    set.tol_steady = c.solver.tol_steady;
    set.t_max = c.solver.t_max;
    const auto rep = solver.steady_state(kernel, c.params.diffusion(), solver.uniform(), set);
    std::printf("steady_reached=%d steps=%ld residual=%.3e min=%.3e mass_drift=%.3e\n",
                rep.steady_reached ? 1 : 0, rep.steps, rep.residual, rep.min_value,
                rep.mass_drift);

    // density snapshot over the (alpha, beta) grid
    const auto grid = solver.grid();
    const auto field = solver.transform().synthesize(rep.density.coeffs);
    CsvWriter csv(c.out_dir + "/density_grid.csv");
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx", (unsigned long long)config_hash(c));
    csv.comment(std::string("config_fnv1a = ") + hash);
    csv.comment("steady orientation density P_d on the quadrature grid");
    csv.header({"alpha", "beta", "P"});
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k)
            csv.row({grid->alpha(k), grid->beta(j), field.at(j, k)});

    CsvWriter ctab(c.out_dir + "/density_coeffs.csv");
    ctab.comment("spherical-harmonic coefficients of the steady density");
    ctab.header({"l", "m", "re", "im"});
    for (int l = 0; l <= rep.density.coeffs.l_max; ++l)
        for (int m = -l; m <= l; ++m) {
            const auto z = rep.density.coeffs.at(l, m);
            ctab.row({(double)l, (double)m, z.real(), z.imag()});
        }
    const double eta = eta_from_density(rep.density, solver, c.params);
    std::printf("eta_int (kinetic steady state) = %s\n", CsvWriter::format(eta).c_str());
    return rep.steady_reached ? 0 : 3;
}

int run_asymptotic(const ExperimentConfig& c) {
    ensure_out_dir(c.out_dir);
    const auto spec = c.density.build(c.params);
    const auto rep = rheology::make_report(c.params, spec);
    CsvWriter csv(c.out_dir + "/rheology.csv");
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx", (unsigned long long)config_hash(c));
    csv.comment(std::string("config_fnv1a = ") + hash);
    csv.comment("config = " + canonical_json(c));
    csv.header({"A", "C", "D", "A_hat", "eta_int", "N12", "N23", "D_hat", "richardson_rel_err"});
    csv.row({rep.A, rep.C, rep.D, rep.A_hat, rep.eta_int, rep.N12, rep.N23,
             rep.D_hat.value_or(std::nan("")), rep.richardson_rel_err});
    std::printf("A = %s  C = %s  D = %s  (Richardson rel err %.2e)\n",
                CsvWriter::format(rep.A).c_str(), CsvWriter::format(rep.C).c_str(),
                CsvWriter::format(rep.D).c_str(), rep.richardson_rel_err);
    std::printf("eta_int = %s\nN12 = %s\nN23 = %s\n", CsvWriter::format(rep.eta_int).c_str(),
                CsvWriter::format(rep.N12).c_str(), CsvWriter::format(rep.N23).c_str());
    if (rep.D_hat)
        std::printf("D_hat = %s\n", CsvWriter::format(*rep.D_hat).c_str());
    else
        std::printf("D_hat = (outside the pusher matching regime)\n");
    return 0;
}

int run_itest(const ExperimentConfig& c) {
    std::printf("Proposition 1 identity suite:\n");
    const auto prop = identity::proposition1_suite();
    identity::print_checks(prop);
    std::printf("Appendix integral-term suite (%s density):\n", c.density.variant.c_str());
    const auto app = identity::appendix_suite(c.density.build(c.params), c.params);
    identity::print_checks(app);
    return (identity::all_pass(prop) && identity::all_pass(app)) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the rheology of semidilute swimmer suspensions"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* simulate = app.add_subcommand("simulate", "run one IBM trajectory");
    auto* kin = app.add_subcommand("kinetic", "solve the orientation kinetic equation");
    auto* asym = app.add_subcommand("asymptotic", "evaluate the asymptotic rheology formulas");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with formula and IBM columns");
    auto* compare = app.add_subcommand("compare", "IBM vs kinetic vs asymptotic comparison");
    auto* itest = app.add_subcommand("itest", "Proposition 1 and integral-term identity suites");
    for (auto* cmd : {simulate, kin, asym, sweep, compare, itest}) add_common(cmd, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(load(o, Mode::simulate));
        if (kin->parsed()) return run_kinetic(load(o, Mode::kinetic));
        if (asym->parsed()) return run_asymptotic(load(o, Mode::asymptotic));
        if (sweep->parsed()) {
            auto c = load(o, Mode::sweep);
            const auto res = run_sweep(c);
            std::printf("sweep written to %s (%zu rows)\n", res.csv_path.c_str(),
                        res.rows.size());
            for (const auto& r : res.rows)
                if (!r.flag.empty())
                    std::printf("  flagged point %g: %s\n", r.value, r.flag.c_str());
            return 0;
        }
        if (compare->parsed()) {
            const auto rep = compare_layers(load(o, Mode::compare));
            std::printf("kinetic vs asymptotic: Linf %.3e  L2 %.3e (steady %s)\n",
                        rep.kinetic_vs_asymptotic_linf, rep.kinetic_vs_asymptotic_l2,
                        rep.kinetic_steady_reached ? "reached" : "NOT reached");
            std::printf("IBM vs kinetic L2 %.3e, IBM vs asymptotic L2 %.3e\n",
                        rep.ibm_vs_kinetic_l2, rep.ibm_vs_asymptotic_l2);
            std::printf("eta_int: formula %s, kinetic %s, IBM %s +- %s\n",
                        CsvWriter::format(rep.eta_formula).c_str(),
                        CsvWriter::format(rep.eta_kinetic).c_str(),
                        CsvWriter::format(rep.eta_ibm).c_str(),
                        CsvWriter::format(rep.eta_ibm_stderr).c_str());
            std::printf("report: %s\n", rep.csv_path.c_str());
            return 0;
        }
        if (itest->parsed()) return run_itest(load(o, Mode::itest));
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return 3;
    }
    return 0;
}
