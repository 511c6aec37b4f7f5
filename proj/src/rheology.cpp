#include "bsr/rheology.hpp"

#include <cmath>

#include "bsr/harmonics.hpp"
#include "bsr/stokes.hpp"

namespace bsr::rheology {

using sphere::Orientation;
using sphere::ScalarField;

namespace {

struct ThetaRule {
    std::vector<double> theta, w;  // w includes the radial weight
};

// periodic trapezoid in theta with the radial integral folded into the weight
ThetaRule theta_rule(const SpatialDensitySpec& spec, const AcdSettings& q, int n_theta, int n_k) {
    ThetaRule r;
    r.theta.resize(n_theta);
    r.w.resize(n_theta);
    const double h = 2.0 * M_PI / n_theta;
    for (int i = 0; i < n_theta; ++i) {
        r.theta[i] = h * i;
        r.w[i] = h * spec.radial_weight(r.theta[i], q.k_max, n_k);
    }
    return r;
}

InteractionCoefficients acd_at_resolution(const SpatialDensitySpec& spec, const AcdSettings& q,
                                          int n_theta, int n_k) {
    const ThetaRule r = theta_rule(spec, q, n_theta, n_k);
    InteractionCoefficients out;
    for (int i = 0; i < n_theta; ++i) {
        const double t = r.theta[i], w = r.w[i];
        const double s2 = std::sin(2.0 * t);
        out.A += 0.5 * s2 * s2 * w;
        out.C += -0.5 * std::sin(4.0 * t) * w;
        out.D += std::cos(t) * std::sin(t) * w;
    }
    return out;
}

}  // namespace

InteractionCoefficients compute_ACD(const SpatialDensitySpec& spec, const AcdSettings& q) {
    InteractionCoefficients lo = acd_at_resolution(spec, q, q.n_theta, q.n_k);
    InteractionCoefficients hi = acd_at_resolution(spec, q, 2 * q.n_theta, 2 * q.n_k);
    const double scale = std::max({std::fabs(hi.A), std::fabs(hi.C), std::fabs(hi.D), 1e-300});
    hi.richardson_rel_err =
        std::max({std::fabs(hi.A - lo.A), std::fabs(hi.C - lo.C), std::fabs(hi.D - lo.D)}) / scale;
    if (hi.richardson_rel_err > 1e-3)
        throw std::runtime_error("compute_ACD: quadrature did not converge; refine the grid");
    return hi;
}

double compute_A_mollified(const SpatialDensitySpec& spec, double Lz, const AcdSettings& q,
                           int n_k3) {
    // explicit k3 quadrature of (1/pi Lz)(sin(k3 Lz)/k3)^2 f(k3-free integrand);
    // the planar kernels do not depend on k3 here, so this checks only the
    // normalization of the delta(k3) collapse.
    double column = 0;
    const double k3max = 60.0 / Lz;
    const double h = 2.0 * k3max / n_k3;
    for (int i = 0; i < n_k3; ++i) {
        const double k3 = -k3max + (i + 0.5) * h;
        const double s = (std::fabs(k3) < 1e-12) ? Lz : std::sin(k3 * Lz) / k3;
        column += s * s * h;
    }
    column /= M_PI * Lz;  // -> 1 as Lz -> infinity
    return compute_ACD(spec, q).A * column;
}

std::array<std::array<double, 5>, 5> theta_moments(const SpatialDensitySpec& spec,
                                                   const AcdSettings& q) {
    const ThetaRule r = theta_rule(spec, q, q.n_theta, q.n_k);
    std::array<std::array<double, 5>, 5> m{};
    for (size_t i = 0; i < r.theta.size(); ++i) {
        const double c = std::cos(r.theta[i]), s = std::sin(r.theta[i]);
        for (int p = 0; p <= 4; ++p)
            for (int qd = 0; p + qd <= 4; ++qd)
                m[p][qd] += std::pow(c, p) * std::pow(s, qd) * r.w[i];
    }
    return m;
}

PdCoefficients pd_coefficients(const SuspensionParams& p, const InteractionCoefficients& acd) {
    PdCoefficients c;
    if (p.gamma <= 0) throw std::invalid_argument("pd_coefficients: gamma must be > 0");
    const double denom = 40.0 * p.gamma * M_PI * p.eta0 * p.N * p.volume();
    c.C1 = 3.0 / (16.0 * M_PI);
    c.C2 = -p.U0 * (acd.C + 12.0 * acd.D) / denom;
    c.C3 = -p.U0 * acd.A / denom;
    return c;
}

double pd_order1(double alpha, double beta) {
    const double sb = std::sin(beta);
    return -3.0 / (8.0 * M_PI) * sb * sb * std::cos(2.0 * alpha);
}

double pd_order2(double alpha, double beta, const PdCoefficients& c) {
    const double sb = std::sin(beta);
    const double s2 = sb * sb, s4 = s2 * s2;
    return c.C1 * s4 * std::cos(4.0 * alpha) + c.C2 * s2 * std::cos(2.0 * alpha) +
           c.C3 * s2 * std::sin(2.0 * alpha);
}

double pd_asymptotic(double alpha, double beta, double B, const SuspensionParams& p,
                     const InteractionCoefficients& acd) {
    const PdCoefficients c = pd_coefficients(p, acd);
    return 1.0 / (4.0 * M_PI) + B * pd_order1(alpha, beta) + B * B * pd_order2(alpha, beta, c);
}

double eta_int(const SuspensionParams& p, const InteractionCoefficients& acd) {
    if (p.gamma <= 0) throw std::invalid_argument("eta_int: gamma must be > 0");
    const double a_hat = acd.A / (double(p.N) * p.N);
    const double rho = p.rho();
    return -p.U0 * p.U0 * p.B * p.B * rho * rho * a_hat /
           (75.0 * p.gamma * p.gamma * M_PI * p.eta0);
}

NormalStresses normal_stresses(const SuspensionParams& p, const InteractionCoefficients& acd) {
    if (p.gamma <= 0) throw std::invalid_argument("normal_stresses: gamma must be > 0");
    const double rho = p.rho();
    const double cd = acd.C + 12.0 * acd.D;
    const double common = p.U0 * rho * cd * p.B * p.B / (75.0 * p.gamma * M_PI * p.eta0);
    NormalStresses n;
    n.N12 = p.U0 * rho / (p.gamma * p.gamma) * (-2.0 / 5.0 - 2.0 * common);
    n.N23 = p.U0 * rho / (p.gamma * p.gamma) * (1.0 / 5.0 + common);
    return n;
}

double effective_noise(const SuspensionParams& p, const InteractionCoefficients& acd) {
    if (p.U0 >= 0) throw ParameterRegime("effective_noise: defined for pushers (U0 < 0) only");
    const double a_hat = acd.A / (double(p.N) * p.N);
    const double g = p.gamma, rho = p.rho();
    const double disc = 225.0 * p.eta0 * p.eta0 * g * g * g * g -
                        a_hat * a_hat * p.B * p.B * g * g * rho * rho * p.U0 * p.U0;
    if (disc < 0)
        throw ParameterRegime("effective_noise: negative discriminant; outside the matching regime");
    // conjugate form of (-15 eta0 g^2 + sqrt(disc)) / (12 Ahat B rho U0):
    // avoids the large-gamma cancellation
    return -a_hat * p.B * g * g * rho * p.U0 /
           (12.0 * (15.0 * p.eta0 * g * g + std::sqrt(disc)));
}

kinetic::KernelSpec reduced_kernel(const SpatialDensitySpec& spec, const SuspensionParams& p,
                                   const AcdSettings& q) {
    kinetic::KernelSpec k;
    k.kind = kinetic::KernelSpec::Kind::dipole_reduced;
    k.scale = 1.0 / (double(p.N) * p.volume());
    k.U0 = p.U0;
    k.B = p.B;
    k.eta0 = p.eta0;
    k.gamma = p.gamma;
    k.theta_moments = theta_moments(spec, q);
    return k;
}

kinetic::KernelSpec reduced_kernel_tabulated(const SpatialDensitySpec& spec,
                                             const SuspensionParams& p, int l_max,
                                             const AcdSettings& q) {
    const kinetic::KernelSpec closed = reduced_kernel(spec, p, q);
    kinetic::KernelSpec k;
    k.kind = kinetic::KernelSpec::Kind::tabulated;
    k.scale = closed.scale;
    k.U0 = p.U0;
    k.B = p.B;
    k.eta0 = p.eta0;
    k.gamma = p.gamma;
    k.grid = sphere::Grid::for_bandlimit(l_max);
    const auto& g = *k.grid;
    const size_t G = g.size();
    k.tab_alpha.assign(G * G, 0.0);
    k.tab_beta.assign(G * G, 0.0);
    for (int j = 0; j < g.n_beta(); ++j)
        for (int kk = 0; kk < g.n_alpha(); ++kk) {
            const Orientation d = g.orientation(j, kk);
            const size_t id = g.index(j, kk);
            for (int jp = 0; jp < g.n_beta(); ++jp)
                for (int kp = 0; kp < g.n_alpha(); ++kp) {
                    const Orientation dp = g.orientation(jp, kp);
                    const Vec3 v = closed.pair(d, dp);
                    const size_t idp = g.index(jp, kp);
                    k.tab_alpha[id * G + idp] = v.dot(d.alpha_hat());
                    k.tab_beta[id * G + idp] = v.dot(d.beta_hat());
                }
        }
    return k;
}

ITerms i_terms(const SpatialDensitySpec& spec, const SuspensionParams& p, const AcdSettings& q,
               int l_max) {
    auto grid = sphere::Grid::for_bandlimit(l_max);
    sphere::Transform transform(grid, l_max);
    const auto moments = theta_moments(spec, q);
    const InteractionCoefficients acd = compute_ACD(spec, q);
    const double NV = double(p.N) * p.volume();

    // kernel reductions against the source stress moment F = int Sigma~ P1 dS'
    // (quadrature, not the closed -(U0/5) diag(1,-1,0), to keep this an oracle)
    Mat3 Fmat = Mat3::zero();
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const Orientation dp = grid->orientation(j, k);
            Fmat += grid->node_weight(j, k) * pd_order1(dp.alpha(), dp.beta()) *
                    stokes::fourier_stress(dp.d(), p.U0);
        }

    kinetic::KernelSpec kern;
    kern.kind = kinetic::KernelSpec::Kind::dipole_reduced;
    kern.scale = 1.0;
    kern.U0 = p.U0;
    kern.B = 1.0;  // component kernels used separately below
    kern.eta0 = p.eta0;
    kern.theta_moments = moments;

    ITerms out{ScalarField(grid), ScalarField(grid), ScalarField(grid), ScalarField(grid)};

    // W(d) = int <F[E]> P1 dS' = (I - dd*) [strain reduction of Fmat] d;
    // isolate the strain part by subtracting the B = 0 (omega-only) kernel
    kinetic::KernelSpec omega_kernel = kern;
    omega_kernel.B = 0.0;
    sphere::TangentField W(grid);
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const Orientation d = grid->orientation(j, k);
            W.set_vector(j, k, kern.mean_field(d.d(), Fmat) -
                                   omega_kernel.mean_field(d.d(), Fmat));
        }
    const ScalarField divW = transform.divergence(W);

    // stress moment against the uniform density (enters I2/I3; should vanish)
    Mat3 S_uniform = Mat3::zero();
    for (int jp = 0; jp < grid->n_beta(); ++jp)
        for (int kp = 0; kp < grid->n_alpha(); ++kp)
            S_uniform += grid->node_weight(jp, kp) *
                         stokes::fourier_stress(grid->orientation(jp, kp).d(), p.U0);

    // M(d) = int <F[omega]> P1 dS' ; I4 = grad P1 . M / (N V)
    const kinetic::KernelSpec& oonly = omega_kernel;
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const Orientation d = grid->orientation(j, k);
            const Vec3 M = oonly.mean_field(d.d(), Fmat);
            const double a = d.alpha(), b = d.beta();
            const Vec3 gradP1 = (3.0 / (4.0 * M_PI)) * std::sin(b) * std::sin(2.0 * a) *
                                    d.alpha_hat() -
                                (3.0 / (4.0 * M_PI)) * std::cos(2.0 * a) * std::sin(b) *
                                    std::cos(b) * d.beta_hat();
            out.I4.at(j, k) = gradP1.dot(M) / NV;
            out.I1.at(j, k) = divW.at(j, k) / (4.0 * M_PI * NV);

            out.I2_mag.at(j, k) = oonly.mean_field(d.d(), S_uniform).norm();
            const Vec3 efull = kern.mean_field(d.d(), S_uniform);
            out.I3_mag.at(j, k) = (efull - oonly.mean_field(d.d(), S_uniform)).norm();
        }

    // residuals against the published closed forms
    const double c1 = p.U0 / (40.0 * M_PI * p.eta0 * NV);
    const double c4 = 3.0 * p.U0 * acd.D / (10.0 * M_PI * p.eta0 * NV);
    double i1_err = 0, i4_err = 0, i1_num = 0, i1_den = 0, i4_num = 0, i4_den = 0;
    for (int j = 0; j < grid->n_beta(); ++j)
        for (int k = 0; k < grid->n_alpha(); ++k) {
            const double a = grid->alpha(k), b = grid->beta(j);
            const double s2 = std::sin(b) * std::sin(b);
            const double closed1 =
                c1 * (acd.A * s2 * std::cos(2 * a) + acd.C * s2 * std::sin(2 * a));
            const double closed4 = c4 * std::sin(2 * a) * s2;
            out.I1_scale = std::max(out.I1_scale, std::fabs(closed1));
            out.I4_scale = std::max(out.I4_scale, std::fabs(closed4));
            i1_err = std::max(i1_err, std::fabs(out.I1.at(j, k) - closed1));
            i4_err = std::max(i4_err, std::fabs(out.I4.at(j, k) - closed4));
            i1_num += out.I1.at(j, k) * closed1;
            i1_den += closed1 * closed1;
            i4_num += out.I4.at(j, k) * closed4;
            i4_den += closed4 * closed4;
        }
    out.I1_closed_rel_err = i1_err / std::max(out.I1_scale, 1e-300);
    out.I4_closed_rel_err = i4_err / std::max(out.I4_scale, 1e-300);
    out.I1_fit_ratio = (i1_den > 0) ? i1_num / i1_den : 0.0;
    out.I4_fit_ratio = (i4_den > 0) ? i4_num / i4_den : 0.0;

    const double kernel_scale =
        std::max(std::fabs(p.U0) * moments[2][0] / p.eta0, 1e-300);
    out.I2_rel = out.I2_mag.max_abs() / kernel_scale;
    out.I3_rel = out.I3_mag.max_abs() / kernel_scale;
    return out;
}

RheologyReport make_report(const SuspensionParams& p, const SpatialDensitySpec& spec,
                           const AcdSettings& q) {
    RheologyReport r;
    const InteractionCoefficients acd = compute_ACD(spec, q);
    r.A = acd.A;
    r.C = acd.C;
    r.D = acd.D;
    r.A_hat = acd.A / (double(p.N) * p.N);
    r.richardson_rel_err = acd.richardson_rel_err;
    r.eta_int = eta_int(p, acd);
    const NormalStresses n = normal_stresses(p, acd);
    r.N12 = n.N12;
    r.N23 = n.N23;
    try {
        r.D_hat = effective_noise(p, acd);
    } catch (const ParameterRegime&) {
        r.D_hat.reset();
    }
    return r;
}

}  // namespace bsr::rheology
