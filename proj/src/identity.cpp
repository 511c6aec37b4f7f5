#include "bsr/identity.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "bsr/harmonics.hpp"
#include "bsr/rheology.hpp"
#include "bsr/stokes.hpp"

namespace bsr::identity {

using sphere::Orientation;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0, 1);
    Vec3 v{n(rng), n(rng), n(rng)};
    while (v.norm2() < 1e-12) v = {n(rng), n(rng), n(rng)};
    return v.normalized();
}

CheckResult make(const std::string& name, double value, double bound, std::string detail = "") {
    return {name, value, bound, value <= bound, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> proposition1_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double eta0 = 0.8, U0 = -2.3;

    double kdotu = 0, stokes_res = 0, kindep = 0;
    for (int i = 0; i < 100; ++i) {
        const Vec3 khat = random_unit(rng);
        const double kmag = std::exp(u(rng) * 2.0);
        const Mat3 s = stokes::fourier_stress(random_unit(rng), U0);
        const auto uf = stokes::fourier_velocity(khat, kmag, s, eta0);
        const double unorm = std::abs(uf.x) + std::abs(uf.y) + std::abs(uf.z) + 1e-300;
        kdotu = std::max(kdotu,
                         std::abs(khat.x * uf.x + khat.y * uf.y + khat.z * uf.z) / unorm);

        const Vec3 k = khat * kmag;
        const double p = stokes::fourier_pressure(khat, s);
        const Vec3 sk = s * k;
        const std::complex<double> I(0, 1);
        const std::complex<double> res[3] = {
            -eta0 * kmag * kmag * uf.x - I * k.x * p + I * sk.x,
            -eta0 * kmag * kmag * uf.y - I * k.y * p + I * sk.y,
            -eta0 * kmag * kmag * uf.z - I * k.z * p + I * sk.z};
        const double scale = std::fabs(U0) * kmag;
        for (const auto& r : res) stokes_res = std::max(stokes_res, std::abs(r) / scale);

        const Mat3 base = stokes::fourier_sym_gradient(khat, s, eta0);
        for (double lam : {0.5, 2.0, 10.0}) {
            const Mat3 other = stokes::fourier_sym_gradient(khat * lam, s, eta0);
            kindep = std::max(kindep, (other - base).max_abs() / (base.max_abs() + 1e-300));
        }
    }

    // lemma versus spectral divergence on 100 random constant matrices
    const int L = 16;
    auto grid = sphere::Grid::for_bandlimit(L);
    sphere::Transform transform(grid, L);
    double lemma_err = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Mat3 A;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) A(r, c) = u(rng);
        sphere::TangentField f(grid);
        for (int j = 0; j < grid->n_beta(); ++j)
            for (int k = 0; k < grid->n_alpha(); ++k) {
                const Vec3 d = grid->orientation(j, k).d();
                f.set_vector(j, k, d.cross(d.cross(A * d)));
            }
        const sphere::ScalarField div = transform.divergence(f);
        for (int j = 0; j < grid->n_beta(); ++j)
            for (int k = 0; k < grid->n_alpha(); ++k)
                lemma_err = std::max(
                    lemma_err,
                    std::fabs(div.at(j, k) - sphere::lemma_divergence(A, grid->orientation(j, k))));
    }

    // int Sigma~ dS' = 0 by quadrature
    Mat3 acc = Mat3::zero();
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k)
            acc += grid->node_weight(j, k) *
                   stokes::fourier_stress(grid->orientation(j, k).d(), U0);
    const double sig_int = acc.max_abs();

    return {make("k . u~ = 0 (incompressibility)", kdotu, 1e-12),
            make("Fourier Stokes residual", stokes_res, 1e-12),
            make("|k|-independence of F[D_x u]", kindep, 1e-12),
            make("divergence lemma vs spectral divergence (100 cases)", lemma_err, 1e-8),
            make("int Sigma~ dS' = 0", sig_int, 1e-12)};
}

std::vector<CheckResult> appendix_suite(const rheology::SpatialDensitySpec& spec,
                                        const SuspensionParams& p) {
    const auto terms = rheology::i_terms(spec, p);
    char buf[160];
    std::snprintf(buf, sizeof buf, "best-fit multiple of the published closed form: %.4f",
                  terms.I1_fit_ratio);
    std::string i1d(buf);
    std::snprintf(buf, sizeof buf, "best-fit multiple of the published closed form: %.4f",
                  terms.I4_fit_ratio);
    std::string i4d(buf);
    std::vector<CheckResult> out = {
        make("I2 vanishes (relative)", terms.I2_rel, 1e-10),
        make("I3 vanishes (relative)", terms.I3_rel, 1e-10),
        make("I1 quadrature vs closed form (relative)", terms.I1_closed_rel_err, 1e-6, i1d),
    };
    if (terms.I4_scale > 1e-14 * terms.I1_scale)
        out.push_back(
            make("I4 quadrature vs closed form (relative)", terms.I4_closed_rel_err, 1e-6, i4d));
    else
        out.push_back(make("I4 vanishes for this spec (absolute over I1 scale)",
                           terms.I4.max_abs() / std::max(terms.I1_scale, 1e-300), 1e-6));
    return out;
}

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void print_checks(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        std::printf("  [%s] %-55s %.3e (tol %.1e)%s%s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.bound, c.detail.empty() ? "" : " -- ",
                    c.detail.c_str());
    }
}

}  // namespace bsr::identity
