// Acceptance suite: one function per criterion, one printed verdict line per
// criterion, nonzero exit if any selected criterion fails. Run a single
// criterion with `acceptance <n>` (n in 1..9, or r1 for the rheology
// consistency invariant), or everything with no arguments.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "bsr/config.hpp"
#include "bsr/identity.hpp"
#include "bsr/kinetic.hpp"
#include "bsr/rheology.hpp"
#include "bsr/sweep.hpp"

using namespace bsr;

namespace {

int g_fail = 0;

void verdict(const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("%s: %s%s%s\n", name.c_str(), pass ? "PASS" : "FAIL",
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_fail;
}

void note(const std::string& text) { std::printf("    %s\n", text.c_str()); }

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = x.size();
    for (size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::fabs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SuspensionParams desk_params() {
    SuspensionParams p;
    p.N = 200;
    p.U0 = -5.0;
    p.B = 0.2;
    p.gamma = 1.0;
    p.eta0 = 1.0;
    p.D0 = 2.0;
    p.L = SuspensionParams::half_width_for_phi(p.N, 0.02, p.body_volume());
    return p;
}

rheology::SpatialDensitySpec desk_density(const SuspensionParams& p) {
    return rheology::SpatialDensitySpec::gaussian(2.0, 2.0, M_PI * double(p.N) * p.N / p.L);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ---------------------------------------------------------------- criterion 1
void criterion1() {
    Timer timer;
    const auto checks = identity::proposition1_suite();
    identity::print_checks(checks);
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.1f s", timer.seconds());
    verdict("criterion 1 (analytic identity suite)", identity::all_pass(checks), buf);
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
    Timer timer;
    const auto p = desk_params();
    const auto checks = identity::appendix_suite(desk_density(p), p);
    identity::print_checks(checks);
    const bool pass = identity::all_pass(checks);
    if (!pass)
        note("the I1/I4 quadratures are self-consistent oracles; the published closed-form "
             "coefficients do not solve their own defining integrals (see decisions ledger)");
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.1f s", timer.seconds());
    verdict("criterion 2 (Appendix integral-term suite)", pass, buf);
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
    Timer timer;
    SuspensionParams p = desk_params();
    const auto spec = desk_density(p);
    const auto acd = rheology::compute_ACD(spec);
    const int l_max = 32;
    kinetic::Solver solver(l_max);

    const std::vector<double> Bs = {0.05, 0.1, 0.2};
    std::vector<double> linf_published, linf_derived;

    // oracle-derived second-order coefficients: background channel projection
    // plus the quadrature integral terms (no hand constants)
    rheology::PdCoefficients derived;
    {
        // background O(B^2) forcing projected onto sin 4a sin^4 b
        const auto g = solver.grid();
        double num = 0, den = 0;
        for (int j = 0; j < g->n_beta(); ++j)
            for (int k = 0; k < g->n_alpha(); ++k) {
                const double a = g->alpha(k), b = g->beta(j);
                const double sb = std::sin(b), cb = std::cos(b);
                const double P1 = rheology::pd_order1(a, b);
                const double dP1da = 3.0 / (4.0 * M_PI) * sb * sb * std::sin(2 * a);
                const double dP1db = -3.0 / (4.0 * M_PI) * std::cos(2 * a) * sb * cb;
                const double G = p.gamma / 2 * std::sin(2 * a) * sb * cb * dP1db -
                                 1.5 * p.gamma * std::sin(2 * a) * sb * sb * P1 +
                                 p.gamma / 2 * std::cos(2 * a) * dP1da;
                const double basis = std::sin(4 * a) * std::pow(sb, 4);
                const double w = g->node_weight(j, k);
                num += w * G * basis;
                den += w * basis * basis;
            }
        derived.C1 = (num / den) / (2.0 * p.gamma);

        const auto terms = rheology::i_terms(spec, p);
        double nc = 0, dc = 0, ns = 0, ds = 0;
        const auto gi = terms.I1.grid;
        for (int j = 0; j < gi->n_beta(); ++j)
            for (int k = 0; k < gi->n_alpha(); ++k) {
                const double a = gi->alpha(k), b = gi->beta(j);
                const double s2 = std::sin(b) * std::sin(b);
                const double wc = s2 * std::cos(2 * a), ws = s2 * std::sin(2 * a);
                const double w = gi->node_weight(j, k);
                const double val = terms.I1.at(j, k) + terms.I4.at(j, k);
                nc += w * val * wc;
                dc += w * wc * wc;
                ns += w * val * ws;
                ds += w * ws * ws;
            }
        derived.C3 = -(nc / dc) / p.gamma;
        derived.C2 = (ns / ds) / p.gamma;
    }
    {
        char buf[160];
        const auto printed = rheology::pd_coefficients(p, acd);
        std::snprintf(buf, sizeof buf,
                      "P2 coefficients, published vs oracle-derived: C1 %.6g vs %.6g, C2 %.3e vs "
                      "%.3e, C3 %.3e vs %.3e",
                      printed.C1, derived.C1, printed.C2, derived.C2, printed.C3, derived.C3);
        note(buf);

        // decisive, solver-free check: residual of the O(B^2) steady balance
        // 0 = bg(O(B^2)) + (gamma/2) dP2/da + I1 + I4 for each coefficient set
        const auto terms = rheology::i_terms(spec, p);
        const auto gi = terms.I1.grid;
        auto residual = [&](const rheology::PdCoefficients& c) {
            double r = 0;
            for (int j = 0; j < gi->n_beta(); ++j)
                for (int k = 0; k < gi->n_alpha(); ++k) {
                    const double a = gi->alpha(k), b = gi->beta(j);
                    const double sb = std::sin(b), cb = std::cos(b);
                    const double P1 = rheology::pd_order1(a, b);
                    const double dP1da = 3.0 / (4.0 * M_PI) * sb * sb * std::sin(2 * a);
                    const double dP1db = -3.0 / (4.0 * M_PI) * std::cos(2 * a) * sb * cb;
                    const double bg = p.gamma / 2 * std::sin(2 * a) * sb * cb * dP1db -
                                      1.5 * p.gamma * std::sin(2 * a) * sb * sb * P1 +
                                      p.gamma / 2 * std::cos(2 * a) * dP1da;
                    const double dP2da =
                        -4 * c.C1 * std::pow(sb, 4) * std::sin(4 * a) -
                        2 * c.C2 * sb * sb * std::sin(2 * a) + 2 * c.C3 * sb * sb * std::cos(2 * a);
                    r = std::max(r, std::fabs(bg + p.gamma / 2 * dP2da + terms.I1.at(j, k) +
                                              terms.I4.at(j, k)));
                }
            return r;
        };
        std::snprintf(buf, sizeof buf,
                      "O(B^2) balance residual: published coefficients %.3e, derived %.3e",
                      residual(printed), residual(derived));
        note(buf);
    }

    for (double B : Bs) {
        SuspensionParams q = p;
        q.B = B;
        auto kernel = rheology::reduced_kernel(spec, q);
        kinetic::SolverSettings set;
        set.t_max = 1500.0;
        const auto rep = solver.steady_state(kernel, q.diffusion(), solver.uniform(), set);
        if (!rep.steady_reached) {
            verdict("criterion 3 (asymptotic-order check)", false, "steady state not reached");
            return;
        }
        const auto field = solver.transform().synthesize(rep.density.coeffs);
        const auto g = solver.grid();
        double e_pub = 0, e_der = 0;
        for (int j = 0; j < g->n_beta(); ++j)
            for (int k = 0; k < g->n_alpha(); ++k) {
                const double a = g->alpha(k), b = g->beta(j);
                const double pub = rheology::pd_asymptotic(a, b, B, q, acd);
                const double der = 1.0 / (4 * M_PI) + B * rheology::pd_order1(a, b) +
                                   B * B * rheology::pd_order2(a, b, derived);
                e_pub = std::max(e_pub, std::fabs(field.at(j, k) - pub));
                e_der = std::max(e_der, std::fabs(field.at(j, k) - der));
            }
        linf_published.push_back(e_pub);
        linf_derived.push_back(e_der);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "B = %.3g: Linf error vs published formula %.3e, vs derived coefficients "
                      "%.3e (steps %ld)",
                      B, e_pub, e_der, rep.steps);
        note(buf);
    }
    const double slope_pub = fit_slope(Bs, linf_published);
    const double slope_der = fit_slope(Bs, linf_derived);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "fitted slope vs published P_d: %.2f (need >= 2.5); vs oracle-derived "
                  "coefficients: %.2f; runtime %.0f s",
                  slope_pub, slope_der, timer.seconds());
    if (slope_pub < 2.5)
        note("the solver converges at third order to the expansion built from the oracle-derived "
             "coefficients; the published C1/C2/C3 leave an O(B^2) floor (see decisions ledger)");
    verdict("criterion 3 (kinetic steady state vs asymptotic formula, B^3 scaling)",
            slope_pub >= 2.5, buf);
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
    Timer timer;
    bool all = true;

    {  // mass and positivity over 1e4 steps with the full kernel
        SuspensionParams p = desk_params();
        const auto spec = desk_density(p);
        kinetic::Solver s(16);
        auto kernel = rheology::reduced_kernel(spec, p);
        const auto rep = s.evolve(s.uniform(), kernel, p.diffusion(), 1e-3, 10.0);
        char buf[120];
        std::snprintf(buf, sizeof buf, "mass drift %.2e over %ld steps", rep.mass_drift,
                      rep.steps);
        const bool ok = rep.mass_drift <= 1e-10 && rep.steps == 10000;
        all = all && ok;
        verdict("  c4a mass conservation", ok, buf);
        std::snprintf(buf, sizeof buf, "min P = %.2e", rep.min_value);
        const bool pos = rep.min_value >= -1e-6;
        all = all && pos;
        verdict("  c4b positivity", pos, buf);
    }

    {  // pure-diffusion decay rates
        kinetic::Solver s(12);
        kinetic::OrientationDensity P0 = s.uniform();
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int l = 1; l <= 8; ++l)
            for (int m = 0; m <= l; ++m) {
                std::complex<double> z(u(rng), m == 0 ? 0.0 : u(rng));
                z *= 0.02;
                P0.coeffs.at(l, m) = z;
                P0.coeffs.at(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(z);
            }
        const double D = 0.3, T = 0.5;
        const auto rep = s.evolve(P0, kinetic::KernelSpec{}, D, 1e-3, T);
        double worst = 0;
        for (int l = 1; l <= 8; ++l)
            for (int m = -l; m <= l; ++m) {
                const double r0 = std::abs(P0.coeffs.at(l, m));
                if (r0 < 1e-9) continue;
                const double ratio = std::abs(rep.density.coeffs.at(l, m)) / r0;
                const double expect = std::exp(-D * l * (l + 1.0) * T);
                worst = std::max(worst, std::fabs(ratio / expect - 1.0));
            }
        char buf[96];
        std::snprintf(buf, sizeof buf, "max rate mismatch %.2e (tol 1e-2)", worst);
        const bool ok = worst <= 1e-2;
        all = all && ok;
        verdict("  c4c diffusion decay rates D l(l+1)", ok, buf);
    }

    {  // Lipschitz dependence on initial data, stable under delta halving
        kinetic::Solver s(10);
        auto shear = kinetic::KernelSpec::shear_only(1.0, 0.15);
        kinetic::OrientationDensity base = s.uniform();
        base.coeffs.at(2, 2) = base.coeffs.at(2, -2) = 0.01;
        std::vector<double> ratios;
        for (double delta : {2e-2, 1e-2, 5e-3}) {
            kinetic::OrientationDensity other = base;
            other.coeffs.at(2, 1) += delta / 2;
            other.coeffs.at(2, -1) -= delta / 2;
            const auto r1 = s.evolve(base, shear, 0.2, 2e-3, 1.0);
            const auto r2 = s.evolve(other, shear, 0.2, 2e-3, 1.0);
            double dist = 0;
            for (size_t i = 0; i < r1.density.coeffs.c.size(); ++i)
                dist += std::norm(r1.density.coeffs.c[i] - r2.density.coeffs.c[i]);
            ratios.push_back(std::sqrt(dist) / (delta / std::sqrt(2.0)));
        }
        const double spread = std::fabs(ratios[2] / ratios[1] - 1.0) +
                              std::fabs(ratios[1] / ratios[0] - 1.0);
        char buf[120];
        std::snprintf(buf, sizeof buf, "ratios %.4f %.4f %.4f (spread %.1e)", ratios[0],
                      ratios[1], ratios[2], spread);
        const bool ok = spread < 0.05;
        all = all && ok;
        verdict("  c4d Lipschitz in initial data", ok, buf);
    }

    {  // smoothing envelope (1 + t^-m), m = 1, 2
        kinetic::Solver s(24);
        kinetic::OrientationDensity P0 = s.uniform();
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int l = 1; l <= 24; ++l)
            for (int m = 0; m <= l; ++m) {
                std::complex<double> z(u(rng), m == 0 ? 0.0 : u(rng));
                z *= 0.05 / (l * l);
                P0.coeffs.at(l, m) = z;
                P0.coeffs.at(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(z);
            }
        std::vector<double> times;
        for (double t = 2e-3; t <= 0.25; t *= std::sqrt(10.0)) times.push_back(t);
        const auto probe = s.smoothing_probe(P0, kinetic::KernelSpec{}, 1.0, times, {1.0, 2.0});
        double worst = 0;
        for (int m = 0; m < 2; ++m) {
            const double order = m + 1.0;
            double maxq = 0, refq = 0;
            for (size_t i = 0; i < probe.times.size(); ++i) {
                const double t = probe.times[i];
                const double q = probe.norms[i][m] * probe.norms[i][m] /
                                 (1.0 + std::pow(t, -order));
                maxq = std::max(maxq, q);
                refq = q;  // last sample
            }
            worst = std::max(worst, maxq / refq);
        }
        const auto disabled = s.smoothing_probe(P0, kinetic::KernelSpec{}, 0.0, times, {1.0});
        char buf[120];
        std::snprintf(buf, sizeof buf,
                      "envelope ratio %.1f (bound 30), D=0 flag %s", worst,
                      disabled.diffusion_disabled ? "set" : "MISSING");
        const bool ok = worst < 30.0 && disabled.diffusion_disabled;
        all = all && ok;
        verdict("  c4e smoothing envelope m = 1, 2", ok, buf);
    }

    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.0f s", timer.seconds());
    verdict("criterion 4 (kinetic invariants)", all, buf);
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
    Timer timer;
    const auto base = desk_params();
    const auto acd_base = rheology::compute_ACD(desk_density(base));
    bool all = true;
    int zeros = 0, negatives = 0;
    for (double B : {0.0, 0.1, 0.3})
        for (double U0 : {0.0, -1.0, -5.0})
            for (double ascale : {0.0, 1.0, 2.0}) {
                SuspensionParams p = base;
                p.B = B;
                p.U0 = U0;
                rheology::InteractionCoefficients acd = acd_base;
                acd.A *= ascale;
                const double eta = rheology::eta_int(p, acd);
                const bool gated = (B == 0.0) || (U0 == 0.0) || (ascale == 0.0);
                if (gated) {
                    ++zeros;
                    if (eta != 0.0) all = false;
                } else {
                    ++negatives;
                    if (!(eta < 0.0)) all = false;
                }
            }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "3x3x3 grid: %d gated points exactly zero, %d interacting points strictly "
                  "negative; runtime %.1f s",
                  zeros, negatives, timer.seconds());
    verdict("criterion 5 (mechanism gates)", all, buf);
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
    Timer timer;
    const double rho = 0.0125;
    std::vector<double> Ls = {8, 16, 32, 64}, As, etas;
    for (double L : Ls) {
        SuspensionParams p = desk_params();
        p.L = L;
        p.N = (int)std::llround(rho * p.volume());
        p.gamma = 0.1;
        const auto acd = rheology::compute_ACD(rheology::SpatialDensitySpec::uniform_box(L));
        As.push_back(acd.A);
        etas.push_back(std::fabs(rheology::eta_int(p, acd)));
    }
    const double sA = fit_slope(Ls, As);
    const double sE = fit_slope(Ls, etas);
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "A ~ L^%.3f (need 2.5 +- 0.1), |eta_int| ~ L^%.3f (need -3.5 +- 0.15); "
                  "runtime %.1f s",
                  sA, sE, timer.seconds());
    verdict("criterion 6 (Appendix box scaling)",
            std::fabs(sA - 2.5) <= 0.1 && std::fabs(sE + 3.5) <= 0.15, buf);
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
    Timer timer;
    bool all = true;

    auto run_preset = [&](const char* name) {
        harness::ExperimentConfig c = harness::preset(name);
        c.out_dir = std::string("out/acceptance_") + name;
        return harness::run_sweep(c);
    };

    {  // fig1: eta^int negative and decreasing in B
        Timer t1;
        const auto res = run_preset("fig1");
        bool ok = true;
        for (size_t i = 0; i < res.rows.size(); ++i) {
            ok = ok && res.rows[i].eta_formula < 0.0 && res.rows[i].ibm_ok;
            if (i > 0) ok = ok && res.rows[i].eta_formula < res.rows[i - 1].eta_formula;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "formula eta in [%.3e, %.3e], decreasing in B; %zu IBM points, %.0f s",
                      res.rows.front().eta_formula, res.rows.back().eta_formula,
                      res.rows.size(), t1.seconds());
        all = all && ok;
        verdict("  c7a fig1 (B sweep)", ok, buf);
    }
    {  // fig2: decreasing in phi; IBM diverges via a positive collision stress
        Timer t2;
        const auto res = run_preset("fig2");
        bool ok = true;
        for (size_t i = 1; i < res.rows.size(); ++i)
            ok = ok && res.rows[i].eta_formula < res.rows[i - 1].eta_formula;
        const auto& lo = res.rows.front();
        const auto& hi = res.rows.back();
        const double gap_lo = lo.eta_ibm_total_mean - lo.eta_ibm_mean;
        const double gap_hi = hi.eta_ibm_total_mean - hi.eta_ibm_mean;
        ok = ok && lo.ibm_ok && hi.ibm_ok;
        ok = ok && gap_hi > 0.0 && gap_hi > gap_lo;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "formula decreasing in phi; LJ contribution to eta: %.3e at phi=%.3g -> "
                      "%.3e at phi=%.3g (positive, growing); %.0f s",
                      gap_lo, lo.value, gap_hi, hi.value, t2.seconds());
        all = all && ok;
        verdict("  c7b fig2 (phi sweep, IBM/formula divergence)", ok, buf);
    }
    {  // fig3: |eta| monotonically decreasing in gamma; IBM consistent with 0 at large gamma
        Timer t3;
        const auto res = run_preset("fig3");
        bool ok = true;
        for (size_t i = 1; i < res.rows.size(); ++i)
            ok = ok && std::fabs(res.rows[i].eta_formula) < std::fabs(res.rows[i - 1].eta_formula);
        const auto& last = res.rows.back();
        ok = ok && last.ibm_ok &&
             std::fabs(last.eta_ibm_mean) <= 3.0 * std::max(last.eta_ibm_stderr, 1e-12);
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "|formula| decreasing, %.3e -> %.3e; IBM dipolar at gamma=%.3g: %.2e +- "
                      "%.2e (consistent with 0); %.0f s",
                      std::fabs(res.rows.front().eta_formula),
                      std::fabs(res.rows.back().eta_formula), last.value, last.eta_ibm_mean,
                      last.eta_ibm_stderr, t3.seconds());
        all = all && ok;
        verdict("  c7c fig3 (gamma sweep)", ok, buf);
    }

    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.0f s", timer.seconds());
    verdict("criterion 7 (figure presets at desk scale)", all, buf);
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
    Timer timer;
    const auto p0 = desk_params();
    const auto acd = rheology::compute_ACD(desk_density(p0));
    bool all = true;

    {  // pusher preset value is positive
        SuspensionParams p = p0;
        p.gamma = 0.1;
        const double dh = rheology::effective_noise(p, acd);
        char buf[64];
        std::snprintf(buf, sizeof buf, "D_hat = %.4e", dh);
        const bool ok = dh > 0.0;
        all = all && ok;
        verdict("  c8a D_hat > 0 for the pusher preset", ok, buf);
    }
    {  // B halving drives D_hat to zero
        std::vector<double> Bs = {0.2, 0.1, 0.05, 0.025}, vals;
        bool ok = true;
        for (double B : Bs) {
            SuspensionParams p = p0;
            p.B = B;
            p.gamma = 0.1;
            vals.push_back(rheology::effective_noise(p, acd));
        }
        for (size_t i = 1; i < vals.size(); ++i) ok = ok && vals[i] < 0.6 * vals[i - 1];
        char buf[120];
        std::snprintf(buf, sizeof buf, "D_hat: %.3e -> %.3e -> %.3e -> %.3e", vals[0], vals[1],
                      vals[2], vals[3]);
        all = all && ok;
        verdict("  c8b D_hat -> 0 under B halving", ok, buf);
    }
    {  // gamma decadation
        std::vector<double> gs = {1.0, 10.0, 100.0}, vals;
        for (double g : gs) {
            SuspensionParams p = p0;
            p.gamma = g;
            vals.push_back(rheology::effective_noise(p, acd));
        }
        const bool monotone = vals[1] <= vals[0] && vals[2] <= vals[1];
        const bool to_zero = vals[2] < 0.5 * vals[0];
        char buf[160];
        std::snprintf(buf, sizeof buf, "D_hat: %.6e -> %.6e -> %.6e", vals[0], vals[1], vals[2]);
        if (!to_zero)
            note("the published formula approaches the constant -Ahat B rho U0 / (360 eta0) as "
                 "gamma grows; it decreases but does not vanish (see decisions ledger)");
        all = all && monotone && to_zero;
        verdict("  c8c D_hat -> 0 under gamma decadation", monotone && to_zero, buf);
    }
    {  // guards: regime errors, never numeric faults
        bool ok = false;
        try {
            SuspensionParams p = p0;
            p.U0 = -1e9;  // negative discriminant
            rheology::effective_noise(p, acd);
        } catch (const rheology::ParameterRegime&) {
            ok = true;
        } catch (...) {
        }
        bool ok2 = false;
        try {
            SuspensionParams p = p0;
            p.U0 = 1.0;  // puller
            rheology::effective_noise(p, acd);
        } catch (const rheology::ParameterRegime&) {
            ok2 = true;
        } catch (...) {
        }
        all = all && ok && ok2;
        verdict("  c8d discriminant and pusher guards raise regime errors", ok && ok2);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.1f s", timer.seconds());
    verdict("criterion 8 (effective-noise sanity)", all, buf);
}

// ---------------------------------------------------------------- criterion 9
void criterion9() {
    Timer timer;
    bool all = true;

    {  // free swimmer: straight line at V0, machine-precision exact
        SuspensionParams p;
        p.N = 1;
        p.L = 50;
        p.gamma = 0;
        p.D0 = 0;
        p.B = 0;
        ibm::SwimmerState s;
        s.x = {{0.5, -0.25, 1.0}};
        s.d = {Vec3{1.0, 2.0, 2.0}.normalized()};
        std::mt19937_64 rng(1);
        const Vec3 x0 = s.x[0], d0 = s.d[0];
        for (int n = 0; n < 64; ++n) ibm::step(s, p, 0.125, rng);
        const double err = (s.x[0] - (x0 + 8.0 * d0)).norm();
        char buf[64];
        std::snprintf(buf, sizeof buf, "|x - x_exact| = %.2e", err);
        const bool ok = err < 1e-13 && (s.d[0] - d0).norm() < 1e-14;
        all = all && ok;
        verdict("  c9a free swimmer exact", ok, buf);
    }
    {  // sphere in shear: rotation rate gamma/2 to O(dt)
        SuspensionParams p;
        p.N = 1;
        p.L = 50;
        p.gamma = 0.4;
        p.D0 = 0;
        p.B = 0;
        auto run = [&](double dt) {
            ibm::SwimmerState s;
            s.x = {{0, 0, 0}};
            s.d = {{1, 0, 0}};
            std::mt19937_64 rng(1);
            const double T = 5.0;
            for (int n = 0; n < (int)std::lround(T / dt); ++n) ibm::step(s, p, dt, rng);
            return std::fabs(std::atan2(s.d[0].y, s.d[0].x) - p.gamma / 2 * T);
        };
        const double e1 = run(2e-3), e2 = run(1e-3);
        char buf[96];
        std::snprintf(buf, sizeof buf, "angle error %.2e at dt=2e-3, %.2e at dt=1e-3", e1, e2);
        const bool ok = e1 < 5e-3 && e1 / e2 > std::pow(2.0, 0.9);
        all = all && ok;
        verdict("  c9b sphere-in-shear rotation rate gamma/2", ok, buf);
    }
    {  // rotational diffusion autocorrelation over 1e3 replicas
        SuspensionParams p;
        p.N = 1;
        p.L = 50;
        p.gamma = 0;
        p.D0 = 1.0;
        p.B = 0.5;  // D = 0.25
        const double D = p.diffusion(), T = 1.0, dt = 1e-3;
        double corr = 0;
        const int R = 1000;
        for (int r = 0; r < R; ++r) {
            std::mt19937_64 rng(harness::replica_seed(4242, r));
            ibm::SwimmerState s;
            s.x = {{0, 0, 0}};
            s.d = {{0, 0, 1}};
            for (int n = 0; n < (int)std::lround(T / dt); ++n) ibm::step(s, p, dt, rng);
            corr += s.d[0].z;
        }
        corr /= R;
        const double expect = std::exp(-2.0 * D * T);
        const double sigma = std::sqrt((1.0 - expect * expect) / R) + 2.0 * D * dt;
        char buf[120];
        std::snprintf(buf, sizeof buf, "<d(t).d(0)> = %.4f, exp(-2DT) = %.4f, 3 sigma = %.4f",
                      corr, expect, 3 * sigma);
        const bool ok = std::fabs(corr - expect) < 3.0 * sigma;
        all = all && ok;
        verdict("  c9c rotational diffusion autocorrelation", ok, buf);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.0f s", timer.seconds());
    verdict("criterion 9 (IBM micro-oracles)", all, buf);
}

// ------------------------------------------- rheology viscosity consistency
void invariant_r1() {
    Timer timer;
    // plugging the published P_d into the orientation average of the stress
    // definition, compared with the published eta_int formula
    SuspensionParams p = desk_params();
    p.gamma = 0.1;
    const auto spec = desk_density(p);
    const auto acd = rheology::compute_ACD(spec);
    const auto grid = sphere::Grid::for_bandlimit(8);
    std::vector<double> Bs = {0.05, 0.1, 0.2}, diffs;
    for (double B : Bs) {
        SuspensionParams q = p;
        q.B = B;
        double avg = 0;
        for (int j = 0; j < grid->n_beta(); ++j)
            for (int k = 0; k < grid->n_alpha(); ++k) {
                const Vec3 d = grid->orientation(j, k).d();
                avg += grid->node_weight(j, k) * d.x * d.y *
                       rheology::pd_asymptotic(grid->alpha(k), grid->beta(j), B, q, acd);
            }
        const double eta_quad = q.rho() * q.U0 * avg / q.gamma;
        const double eta_formula = rheology::eta_int(q, acd);
        diffs.push_back(std::fabs(eta_quad - eta_formula));
        char buf[140];
        std::snprintf(buf, sizeof buf, "B = %.3g: quadrature %.6e vs formula %.6e (ratio %.4f)",
                      B, eta_quad, eta_formula, eta_quad / eta_formula);
        note(buf);
    }
    const double slope = fit_slope(Bs, diffs);
    char buf[160];
    std::snprintf(buf, sizeof buf, "|quadrature - formula| slope %.2f in B (need >= 2.5); %.1f s",
                  slope, timer.seconds());
    if (slope < 2.5)
        note("both routes scale as B^2 but differ by the constant factor pi carried by the "
             "published eta_int (see decisions ledger)");
    verdict("invariant r1 (viscosity consistency of the published chain)", slope >= 2.5, buf);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> which;
    for (int i = 1; i < argc; ++i) which.push_back(argv[i]);
    if (which.empty()) which = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "r1"};

    for (const auto& w : which) {
        if (w == "1") criterion1();
        else if (w == "2") criterion2();
        else if (w == "3") criterion3();
        else if (w == "4") criterion4();
        else if (w == "5") criterion5();
        else if (w == "6") criterion6();
        else if (w == "7") criterion7();
        else if (w == "8") criterion8();
        else if (w == "9") criterion9();
        else if (w == "r1") invariant_r1();
        else {
            std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
            return 2;
        }
    }
    return g_fail == 0 ? 0 : 1;
}
