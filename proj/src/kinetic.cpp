#include "bsr/kinetic.hpp"

#include <cmath>
#include <functional>

namespace bsr::kinetic {

using sphere::HarmonicCoeffs;
using sphere::Orientation;
using sphere::ScalarField;
using sphere::TangentField;

namespace {

// int khat x (S khat) w(theta) dtheta for khat = (cos, sin, 0)
Vec3 omega_theta_integral(const Mat3& S, const std::array<std::array<double, 5>, 5>& m) {
    const double m20 = m[2][0], m11 = m[1][1], m02 = m[0][2];
    return {S(2, 0) * m11 + S(2, 1) * m02,
            -(S(2, 0) * m20 + S(2, 1) * m11),
            S(1, 0) * m20 + S(1, 1) * m11 - S(0, 0) * m11 - S(0, 1) * m02};
}

// int [S kk* + kk* S - 2 kk* S kk*] w(theta) dtheta
Mat3 strain_theta_integral(const Mat3& S, const std::array<std::array<double, 5>, 5>& m) {
    // T2 = int kk* w
    Mat3 T2 = Mat3::zero();
    T2(0, 0) = m[2][0];
    T2(0, 1) = T2(1, 0) = m[1][1];
    T2(1, 1) = m[0][2];
    Mat3 out = S * T2 + T2 * S;
    // Q(S)_{ij} = sum_{l,m in {0,1}} S_lm int k_i k_j k_l k_m w
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double q = 0;
            for (int l = 0; l < 2; ++l)
                for (int mm = 0; mm < 2; ++mm) {
                    const int p = (i == 0) + (j == 0) + (l == 0) + (mm == 0);
                    q += S(l, mm) * m[p][4 - p];
                }
            out(i, j) -= 2.0 * q;
        }
    return out;
}

}  // namespace

Vec3 KernelSpec::mean_field(const Vec3& d, const Mat3& S) const {
    switch (kind) {
        case Kind::zero:
            return {0, 0, 0};
        case Kind::dipole_reduced: {
            const Vec3 v = omega_theta_integral(S, theta_moments);
            Vec3 drift = (0.5 / eta0) * d.cross(v);
            if (B != 0.0) {
                const Mat3 G = strain_theta_integral(S, theta_moments) * (-0.5 / eta0);
                const Vec3 Gd = G * d;
                drift += B * (Gd - d * d.dot(Gd));
            }
            return drift * scale;
        }
        case Kind::tabulated:
            throw std::logic_error("KernelSpec::mean_field: tabulated kernels need quadrature");
    }
    return {0, 0, 0};
}

Vec3 KernelSpec::pair(const Orientation& d, const Orientation& dp) const {
    switch (kind) {
        case Kind::zero:
            return {0, 0, 0};
        case Kind::dipole_reduced:
            return mean_field(d.d(), stokes::fourier_stress(dp.d(), U0));
        case Kind::tabulated: {
            // nearest node lookup; tabulated kernels are an exchange format, not a hot path
            const auto& g = *grid;
            auto nearest = [&](const Orientation& o) {
                int bj = 0, bk = 0;
                double best = 1e300;
                for (int j = 0; j < g.n_beta(); ++j)
                    for (int k = 0; k < g.n_alpha(); ++k) {
                        const double dist = (g.orientation(j, k).d() - o.d()).norm2();
                        if (dist < best) {
                            best = dist;
                            bj = j;
                            bk = k;
                        }
                    }
                return g.index(bj, bk);
            };
            const size_t id = nearest(d), idp = nearest(dp);
            const size_t G = g.size();
            return tab_alpha[id * G + idp] * d.alpha_hat() + tab_beta[id * G + idp] * d.beta_hat();
        }
    }
    return {0, 0, 0};
}

Vec3 KernelSpec::background(const Orientation& d) const {
    if (gamma == 0.0) return {0, 0, 0};
    const Vec3 omega{0, 0, gamma};
    Mat3 E = Mat3::zero();
    E(0, 1) = E(1, 0) = gamma / 2.0;
    return stokes::jeffery_rhs(d.d(), omega, E, B);
}

KernelSpec KernelSpec::shear_only(double gamma, double B) {
    KernelSpec k;
    k.kind = Kind::zero;
    k.gamma = gamma;
    k.B = B;
    return k;
}

Solver::Solver(int l_max) : l_max_(l_max) {
    grid_ = sphere::Grid::for_bandlimit(l_max);
    transform_ = std::make_unique<sphere::Transform>(grid_, l_max);
    node_d_.resize(grid_->size());
    node_ahat_.resize(grid_->size());
    node_bhat_.resize(grid_->size());
    for (int j = 0; j < grid_->n_beta(); ++j)
        for (int k = 0; k < grid_->n_alpha(); ++k) {
            const Orientation o = grid_->orientation(j, k);
            const int i = grid_->index(j, k);
            node_d_[i] = o.d();
            node_ahat_[i] = o.alpha_hat();
            node_bhat_[i] = o.beta_hat();
        }
}

OrientationDensity Solver::uniform() const {
    OrientationDensity P;
    P.coeffs = HarmonicCoeffs(l_max_);
    P.coeffs.at(0, 0) = 1.0 / std::sqrt(4.0 * M_PI);
    return P;
}

OrientationDensity Solver::from_function(const std::function<double(double, double)>& f) const {
    ScalarField s(grid_);
    for (int j = 0; j < grid_->n_beta(); ++j)
        for (int k = 0; k < grid_->n_alpha(); ++k) s.at(j, k) = f(grid_->alpha(k), grid_->beta(j));
    OrientationDensity P;
    P.coeffs = transform_->analyze(s);
    return P;
}

Mat3 Solver::stress_moment_of(const ScalarField& p, double U0) const {
    Mat3 M = Mat3::zero();
    double mass = 0;
    for (int j = 0; j < grid_->n_beta(); ++j)
        for (int k = 0; k < grid_->n_alpha(); ++k) {
            const int i = grid_->index(j, k);
            const double w = grid_->node_weight(j, k) * p.v[i];
            M += w * Mat3::outer(node_d_[i], node_d_[i]);
            mass += w;
        }
    M(0, 0) -= mass / 3.0;
    M(1, 1) -= mass / 3.0;
    M(2, 2) -= mass / 3.0;
    return M * U0;
}

Mat3 Solver::stress_moment(const OrientationDensity& P, double U0) const {
    return stress_moment_of(transform_->synthesize(P.coeffs), U0);
}

sphere::TangentField Solver::background_field(const KernelSpec& kernel) const {
    sphere::TangentField bg(grid_);
    for (int j = 0; j < grid_->n_beta(); ++j)
        for (int k = 0; k < grid_->n_alpha(); ++k) {
            const int i = grid_->index(j, k);
            const Vec3 v = kernel.background(grid_->orientation(j, k));
            bg.comp_alpha[i] = v.dot(node_ahat_[i]);
            bg.comp_beta[i] = v.dot(node_bhat_[i]);
        }
    return bg;
}

TangentField Solver::assemble_flux(const OrientationDensity& P, const KernelSpec& kernel) const {
    TangentField V(grid_);
    if (kernel.kind == KernelSpec::Kind::tabulated) {
        // direct quadrature over d'
        const ScalarField p = transform_->synthesize(P.coeffs);
        const auto& g = *grid_;
        const size_t G = g.size();
        if (!kernel.grid || kernel.grid->size() != (int)G)
            throw std::invalid_argument("assemble_flux: tabulated kernel grid mismatch");
        for (int j = 0; j < g.n_beta(); ++j)
            for (int k = 0; k < g.n_alpha(); ++k) {
                const size_t id = g.index(j, k);
                double va = 0, vb = 0;
                for (int jp = 0; jp < g.n_beta(); ++jp)
                    for (int kp = 0; kp < g.n_alpha(); ++kp) {
                        const size_t idp = g.index(jp, kp);
                        const double w = g.node_weight(jp, kp) * p.v[idp];
                        va += w * kernel.tab_alpha[id * G + idp];
                        vb += w * kernel.tab_beta[id * G + idp];
                    }
                const Orientation o = g.orientation(j, k);
                const Vec3 v = va * o.alpha_hat() + vb * o.beta_hat() + kernel.background(o);
                V.set_vector(j, k, v);
            }
        return V;
    }
    const Mat3 S = (kernel.kind == KernelSpec::Kind::dipole_reduced)
                       ? stress_moment(P, kernel.U0)
                       : Mat3::zero();
    for (int j = 0; j < grid_->n_beta(); ++j)
        for (int k = 0; k < grid_->n_alpha(); ++k) {
            const Orientation o = grid_->orientation(j, k);
            Vec3 v = kernel.background(o);
            if (kernel.kind == KernelSpec::Kind::dipole_reduced) v += kernel.mean_field(o.d(), S);
            V.set_vector(j, k, v);
        }
    return V;
}

HarmonicCoeffs Solver::advection_tendency(const HarmonicCoeffs& c, const KernelSpec& kernel,
                                          const TangentField* bg_cache) const {
    const ScalarField p = transform_->synthesize(c);
    TangentField V(grid_);
    if (kernel.kind == KernelSpec::Kind::tabulated || bg_cache == nullptr) {
        OrientationDensity P{c, 0.0};
        V = assemble_flux(P, kernel);
    } else {
        V = *bg_cache;
        if (kernel.kind == KernelSpec::Kind::dipole_reduced) {
            const Mat3 S = stress_moment_of(p, kernel.U0);
            for (int i = 0; i < grid_->size(); ++i) {
                const Vec3 v = kernel.mean_field(node_d_[i], S);
                V.comp_alpha[i] += v.dot(node_ahat_[i]);
                V.comp_beta[i] += v.dot(node_bhat_[i]);
            }
        }
    }
    for (size_t i = 0; i < V.comp_alpha.size(); ++i) {
        V.comp_alpha[i] *= p.v[i];
        V.comp_beta[i] *= p.v[i];
    }
    HarmonicCoeffs div = transform_->divergence_weak(V);
    // The weak form's l = 0 row is identically zero; this assertion is the
    // mass-conservation contract of the discretization, not a clamp.
    if (std::abs(div.at(0, 0)) > 1e-10 * std::max(1.0, div.l2_norm()))
        throw std::logic_error("kinetic: advection produced a nonzero mass tendency");
    div.at(0, 0) = 0.0;
    for (auto& z : div.c) z = -z;
    return div;
}

double Solver::suggest_dt(const OrientationDensity& P0, const KernelSpec& kernel) const {
    const TangentField V = assemble_flux(P0, kernel);
    double vmax = 1e-12;
    for (size_t i = 0; i < V.comp_alpha.size(); ++i)
        vmax = std::max(vmax, std::hypot(V.comp_alpha[i], V.comp_beta[i]));
    const double dbeta = M_PI / grid_->n_beta();
    const double cfl = 0.4 * dbeta / vmax;
    const double by_gamma = (kernel.gamma > 0) ? 1e-2 / kernel.gamma : cfl;
    return std::min(cfl, by_gamma);
}

double Solver::rhs_norm(const OrientationDensity& P, const KernelSpec& kernel, double D) const {
    HarmonicCoeffs rhs = advection_tendency(P.coeffs, kernel, nullptr);
    for (int l = 0; l <= l_max_; ++l)
        for (int m = -l; m <= l; ++m) rhs.at(l, m) += -D * l * (l + 1.0) * P.coeffs.at(l, m);
    return rhs.l2_norm();
}

SolveReport Solver::evolve(const OrientationDensity& P0, const KernelSpec& kernel, double D,
                           double dt, double T, const SolverSettings& s) const {
    if (dt <= 0) dt = suggest_dt(P0, kernel);
    HarmonicCoeffs c = P0.coeffs.truncated(l_max_);
    const double norm0 = std::max(1.0, c.l2_norm());

    SolveReport rep;
    rep.min_value = transform_->synthesize(c).min_value();

    // integrating factor for the diffusion, Heun for the advection
    std::vector<double> decay(l_max_ + 1);
    for (int l = 0; l <= l_max_; ++l) decay[l] = std::exp(-D * l * (l + 1.0) * dt);
    auto apply_decay = [&](HarmonicCoeffs& h) {
        for (int l = 0; l <= l_max_; ++l)
            for (int m = -l; m <= l; ++m) h.at(l, m) *= decay[l];
    };

    const TangentField bg = background_field(kernel);
    const TangentField* bg_cache =
        (kernel.kind == KernelSpec::Kind::tabulated) ? nullptr : &bg;
    const long nsteps = std::lround(std::ceil(T / dt - 1e-12));
    double t = P0.t;
    for (long n = 0; n < nsteps; ++n) {
        const HarmonicCoeffs a1 = advection_tendency(c, kernel, bg_cache);
        HarmonicCoeffs u1 = c;
        for (size_t i = 0; i < u1.c.size(); ++i) u1.c[i] += dt * a1.c[i];
        apply_decay(u1);
        const HarmonicCoeffs a2 = advection_tendency(u1, kernel, bg_cache);
        HarmonicCoeffs cE = c;
        apply_decay(cE);
        HarmonicCoeffs a1E = a1;
        apply_decay(a1E);
        double rate = 0;
        for (size_t i = 0; i < c.c.size(); ++i) {
            const std::complex<double> next = cE.c[i] + 0.5 * dt * (a1E.c[i] + a2.c[i]);
            rate += std::norm(next - c.c[i]);
            c.c[i] = next;
        }
        rep.residual = std::sqrt(rate) / dt;  // discrete ||dP/dt|| of this step
        t += dt;

        if ((n + 1) % s.check_every == 0 || n + 1 == nsteps) {
            const double nrm = c.l2_norm();
            if (!std::isfinite(nrm) || nrm > s.blowup_factor * norm0)
                throw KineticInstability(
                    "kinetic solve diverged; reduce dt or increase l_max");
            rep.mass_drift = std::max(rep.mass_drift, std::fabs(c.mass() - P0.mass()));
            rep.min_value = std::min(rep.min_value, transform_->synthesize(c).min_value());
        }
    }
    rep.steps = nsteps;
    rep.positivity_violated = rep.min_value < -1e-6;
    rep.density = OrientationDensity{std::move(c), t};
    rep.rhs_residual = rhs_norm(rep.density, kernel, D);
    return rep;
}

SolveReport Solver::steady_state(const KernelSpec& kernel, double D, const OrientationDensity& P0,
                                 const SolverSettings& s) const {
    const double gamma_eff = std::max(kernel.gamma, 1e-3);
    const double t_max = (s.t_max > 0) ? s.t_max : 1e3 / gamma_eff;
    const double dt = (s.dt > 0) ? s.dt : suggest_dt(P0, kernel);
    const double chunk = std::max(dt * s.check_every, t_max / 400.0);

    SolveReport rep;
    rep.density = P0;
    rep.density.coeffs = P0.coeffs.truncated(l_max_);
    double t = 0;
    double min_seen = 1e300, mass_drift = 0;
    while (t < t_max) {
        SolveReport r = evolve(rep.density, kernel, D, dt, std::min(chunk, t_max - t), s);
        t += std::min(chunk, t_max - t);
        rep.steps += r.steps;
        min_seen = std::min(min_seen, r.min_value);
        mass_drift = std::max(mass_drift, r.mass_drift);
        rep.density = std::move(r.density);
        rep.residual = r.residual;
        rep.rhs_residual = r.rhs_residual;
        if (rep.residual <= s.tol_steady) {
            rep.steady_reached = true;
            break;
        }
    }
    rep.min_value = min_seen;
    rep.mass_drift = mass_drift;
    rep.positivity_violated = min_seen < -1e-6;
    return rep;
}

SmoothingProbe Solver::smoothing_probe(const OrientationDensity& P0, const KernelSpec& kernel,
                                       double D, const std::vector<double>& sample_times,
                                       const std::vector<double>& sobolev_orders) const {
    SmoothingProbe probe;
    if (D <= 0) {
        probe.diffusion_disabled = true;
        return probe;
    }
    OrientationDensity P = P0;
    P.coeffs = P0.coeffs.truncated(l_max_);
    double t = 0;
    for (double ts : sample_times) {
        if (ts > t) {
            const double dt = std::min(1e-3, (ts - t) / 8.0);
            SolveReport r = evolve(P, kernel, D, dt, ts - t);
            P = std::move(r.density);
            t = ts;
        }
        probe.times.push_back(ts);
        std::vector<double> row;
        for (double m : sobolev_orders) row.push_back(P.coeffs.sobolev_norm(m));
        probe.norms.push_back(std::move(row));
    }
    return probe;
}

}  // namespace bsr::kinetic
