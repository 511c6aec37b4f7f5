#include "bsr/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "bsr/csv.hpp"

namespace bsr::harness {

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

std::vector<ibm::StressSample> run_ibm_trajectory(const SuspensionParams& p, const IbmConfig& cfg,
                                                  std::uint64_t seed,
                                                  std::vector<Vec3>* orientation_samples) {
    std::mt19937_64 rng(seed);
    ibm::SwimmerState state = ibm::random_state(p, rng);
    std::vector<ibm::StressSample> traj;
    // deterministic step-size guard: swim speed + box-edge shear + a kick margin
    const double vmax_est = p.V0 + p.gamma * p.L + p.f_max * 0.5 + 2.0;
    const double dt = std::min(cfg.dt, 0.25 * p.sigma_lj / vmax_est);
    const int sample_every =
        std::max(1, (int)std::lround(cfg.sample_every * cfg.dt / dt));
    const long nsteps = std::lround(cfg.t_total / dt);
    traj.reserve(nsteps / sample_every + 2);
    for (long n = 0; n < nsteps; ++n) {
        ibm::step(state, p, dt, rng);
        if ((n + 1) % sample_every == 0) {
            traj.push_back(ibm::measure_stress(state, p));
            if (orientation_samples && state.t >= cfg.t_burn)
                orientation_samples->insert(orientation_samples->end(), state.d.begin(),
                                            state.d.end());
        }
    }
    return traj;
}

IbmEnsemble run_ibm_ensemble(const SuspensionParams& p, const IbmConfig& cfg,
                             const SeedConfig& seeds, int workers,
                             std::vector<Vec3>* orientation_samples) {
    const int R = seeds.replicas;
    std::vector<double> dip(R), tot(R);
    std::vector<std::vector<Vec3>> ori(R);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= R) return;
            std::vector<Vec3>* o = orientation_samples ? &ori[i] : nullptr;
            const auto traj = run_ibm_trajectory(p, cfg, replica_seed(seeds.master, i), o);
            const auto est = ibm::effective_viscosity(traj, p, cfg.t_burn);
            dip[i] = est.dipolar;
            tot[i] = est.total;
        }
    };
    int nw = workers > 0 ? workers : (int)std::thread::hardware_concurrency();
    nw = std::max(1, std::min(nw, R));
    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nw; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    IbmEnsemble e;
    e.replicas = R;
    for (int i = 0; i < R; ++i) {
        e.dipolar_mean += dip[i] / R;
        e.total_mean += tot[i] / R;
    }
    if (R > 1) {
        double vd = 0, vt = 0;
        for (int i = 0; i < R; ++i) {
            vd += (dip[i] - e.dipolar_mean) * (dip[i] - e.dipolar_mean);
            vt += (tot[i] - e.total_mean) * (tot[i] - e.total_mean);
        }
        e.dipolar_stderr = std::sqrt(vd / (R - 1) / R);
        e.total_stderr = std::sqrt(vt / (R - 1) / R);
    }
    if (orientation_samples)
        for (auto& o : ori)
            orientation_samples->insert(orientation_samples->end(), o.begin(), o.end());
    return e;
}

namespace {

SuspensionParams apply_axis(const SuspensionParams& base, const std::string& axis, double v) {
    SuspensionParams p = base;
    if (axis == "B")
        p.B = v;
    else if (axis == "gamma")
        p.gamma = v;
    else if (axis == "phi")
        p.L = SuspensionParams::half_width_for_phi(p.N, v, p.body_volume());
    else
        throw ConfigError("sweep: unknown axis '" + axis + "'");
    return p;
}

void write_config_echo(CsvWriter& csv, const ExperimentConfig& c) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  (unsigned long long)config_hash(c));
    csv.comment(std::string("config_fnv1a = ") + hash);
    csv.comment("config = " + canonical_json(c));
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config) {
    if (!config.sweep) throw ConfigError("run_sweep: no sweep axis configured");
    const SweepAxis& ax = *config.sweep;
    ensure_out_dir(config.out_dir);

    SweepResult result;
    for (double v : ax.values) {
        SweepRow row;
        row.value = v;
        const SuspensionParams p = apply_axis(config.params, ax.axis, v);
        const auto spec = config.density.build(p);
        const auto report = rheology::make_report(p, spec);
        row.eta_formula = report.eta_int;
        row.N12 = report.N12;
        row.N23 = report.N23;
        row.D_hat = report.D_hat.value_or(std::nan(""));
        if (ax.run_ibm) {
            try {
                const IbmEnsemble e =
                    run_ibm_ensemble(p, config.ibm, config.seeds, config.workers);
                row.eta_ibm_mean = e.dipolar_mean;
                row.eta_ibm_stderr = e.dipolar_stderr;
                row.eta_ibm_total_mean = e.total_mean;
                row.eta_ibm_total_stderr = e.total_stderr;
                row.ibm_ok = true;
            } catch (const std::exception& e) {
                row.flag = e.what();  // flagged, sweep continues
            }
        }
        result.rows.push_back(row);
    }

    result.csv_path = config.out_dir + "/sweep_" + ax.axis + ".csv";
    CsvWriter csv(result.csv_path);
    write_config_echo(csv, config);
    csv.comment("columns: swept value; eta^int formula [1]; IBM dipolar mean/stderr [1]; "
                "IBM dipolar+LJ mean/stderr [1]; N12, N23 [stress time^2]; D_hat [1/time]; ibm_ok");
    csv.header({ax.axis, "eta_int_formula", "eta_ibm_dipolar_mean", "eta_ibm_dipolar_stderr",
                "eta_ibm_total_mean", "eta_ibm_total_stderr", "N12", "N23", "D_hat", "ibm_ok"});
    for (const auto& r : result.rows)
        csv.row({r.value, r.eta_formula, r.eta_ibm_mean, r.eta_ibm_stderr, r.eta_ibm_total_mean,
                 r.eta_ibm_total_stderr, r.N12, r.N23, r.D_hat, r.ibm_ok ? 1.0 : 0.0});
    return result;
}

double eta_from_density(const kinetic::OrientationDensity& P, const kinetic::Solver& solver,
                        const SuspensionParams& p) {
    const auto grid = solver.grid();
    const auto field = solver.transform().synthesize(P.coeffs);
    double d1d2 = 0;
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const Vec3 d = grid->orientation(j, k).d();
            d1d2 += grid->node_weight(j, k) * d.x * d.y * field.at(j, k);
        }
    return p.rho() * p.U0 * d1d2 / p.gamma;
}

CompareReport compare_layers(const ExperimentConfig& config) {
    const SuspensionParams& p = config.params;
    if (p.B > 0.2)
        throw ConfigError("compare_layers: asymptotic comparison needs B <= 0.2");
    ensure_out_dir(config.out_dir);
    const auto spec = config.density.build(p);
    const auto acd = rheology::compute_ACD(spec);

    CompareReport rep;
    rep.B = p.B;
    rep.eta_formula = rheology::eta_int(p, acd);

    // kinetic steady state with the reduced kernel
    kinetic::Solver solver(config.solver.l_max);
    kinetic::KernelSpec kernel = rheology::reduced_kernel(spec, p);
    kinetic::SolverSettings set;
    set.dt = config.solver.dt;
    set.tol_steady = config.solver.tol_steady;
    set.t_max = config.solver.t_max;
    const auto steady = solver.steady_state(kernel, p.diffusion(), solver.uniform(), set);
    rep.kinetic_steady_reached = steady.steady_reached;
    rep.eta_kinetic = eta_from_density(steady.density, solver, p);

    // asymptotic density on the same grid
    const auto grid = solver.grid();
    const auto steady_field = solver.transform().synthesize(steady.density.coeffs);
    double linf = 0, l2 = 0;
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const double pa =
                rheology::pd_asymptotic(grid->alpha(k), grid->beta(j), p.B, p, acd);
            const double diff = steady_field.at(j, k) - pa;
            linf = std::max(linf, std::fabs(diff));
            l2 += grid->node_weight(j, k) * diff * diff;
        }
    rep.kinetic_vs_asymptotic_linf = linf;
    rep.kinetic_vs_asymptotic_l2 = std::sqrt(l2);

    // IBM orientation histogram smoothed onto the sphere (moments to l = 4)
    std::vector<Vec3> samples;
    const IbmEnsemble e =
        run_ibm_ensemble(p, config.ibm, config.seeds, config.workers, &samples);
    rep.eta_ibm = e.dipolar_mean;
    rep.eta_ibm_stderr = e.dipolar_stderr;
    const auto moments = ibm::orientation_moments(samples, 4);
    double l2ik = 0, l2ia = 0;
    {
        kinetic::Solver s4(4);
        const auto mfield = s4.transform().synthesize(moments);
        const auto kin4 = s4.transform().synthesize(steady.density.coeffs.truncated(4));
        const auto g4 = s4.grid();
        for (int j = 0; j < g4->n_beta(); ++j)
            for (int k = 0; k < g4->n_alpha(); ++k) {
                const double pa =
                    rheology::pd_asymptotic(g4->alpha(k), g4->beta(j), p.B, p, acd);
                const double w = g4->node_weight(j, k);
                l2ik += w * std::pow(mfield.at(j, k) - kin4.at(j, k), 2);
                l2ia += w * std::pow(mfield.at(j, k) - pa, 2);
            }
    }
    rep.ibm_vs_kinetic_l2 = std::sqrt(l2ik);
    rep.ibm_vs_asymptotic_l2 = std::sqrt(l2ia);

    rep.csv_path = config.out_dir + "/compare.csv";
    CsvWriter csv(rep.csv_path);
    write_config_echo(csv, config);
    csv.header({"B", "kin_vs_asym_linf", "kin_vs_asym_l2", "ibm_vs_kin_l2", "ibm_vs_asym_l2",
                "eta_formula", "eta_kinetic", "eta_ibm", "eta_ibm_stderr", "steady_reached"});
    csv.row({rep.B, rep.kinetic_vs_asymptotic_linf, rep.kinetic_vs_asymptotic_l2,
             rep.ibm_vs_kinetic_l2, rep.ibm_vs_asymptotic_l2, rep.eta_formula, rep.eta_kinetic,
             rep.eta_ibm, rep.eta_ibm_stderr, rep.kinetic_steady_reached ? 1.0 : 0.0});
    return rep;
}

}  // namespace bsr::harness
