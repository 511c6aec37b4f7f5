#pragma once

#include <complex>

#include "bsr/sphere.hpp"
#include "bsr/vec.hpp"

namespace bsr::stokes {

using sphere::Orientation;

// D_lm = U0 (d_l d_m - delta_lm / 3); symmetric trace-free, |D|_F = |U0| sqrt(2/3)
Mat3 dipole_tensor(const Vec3& d, double U0);

// Oseen tensor G_kl = (1/8 pi eta0)(delta_kl/|x| + x_k x_l/|x|^3), x != 0
Mat3 oseen(const Vec3& x, double eta0);

// Flow of a point dipole at the origin, sampled at x: velocity, velocity
// gradient (grad_u(r,c) = d u_r / d x_c), strain, vorticity. Closed forms,
// no differencing. Inside r_min the kernel is evaluated at the clamped
// radius and flagged.
struct FlowSample {
    Vec3 u;
    Mat3 grad_u;
    Mat3 strain;
    Vec3 vorticity;
    bool regularized = false;
};

FlowSample dipole_flow(const Vec3& x, const Vec3& d, double U0, double eta0,
                       double r_min = 0.0);

// Jeffery angular velocity: -1/2 d x omega - d x [B d x (E d)].
// omega is the raw vorticity vector, E the strain matrix. Result is tangent to d.
Vec3 jeffery_rhs(const Vec3& d, const Vec3& omega, const Mat3& E, double B);

// ---- Fourier-space kernels. All accept the unit wave vector; the symmetric
// gradient, E and omega kernels are homogeneous of degree zero in k. ----

// Sigma~(d') = U0 (d' d'* - I/3)
Mat3 fourier_stress(const Vec3& dprime, double U0);

// p~ = (Sigma~ : k k*) / |k|^2 (degree-0; takes the unit vector)
double fourier_pressure(const Vec3& khat, const Mat3& sigma);

// u~ = (i / eta0 |k|)(I - k^ k^*) Sigma~ k^; returned as the purely imaginary
// complex vector
struct CVec3 {
    std::complex<double> x, y, z;
};
CVec3 fourier_velocity(const Vec3& khat, double kmag, const Mat3& sigma, double eta0);

// F[D_x u] = -(1/2 eta0)[Sigma~ k^k^* + k^k^* Sigma~ - 2 k^k^* Sigma~ k^k^*];
// real and symmetric for symmetric Sigma~
Mat3 fourier_sym_gradient(const Vec3& khat, const Mat3& sigma, double eta0);

// F[E](k^, d; Sigma~) = (I - dd*) F[D_x u] d,  tangent to d
Vec3 fourier_E(const Vec3& khat, const Vec3& d, const Mat3& sigma, double eta0);

// F[omega](k^, d; Sigma~) = -1/2 d x F[curl u] = +(1/2 eta0) d x [k^ x (I - k^k^*) Sigma~ k^];
// tangent to d
Vec3 fourier_omega(const Vec3& khat, const Vec3& d, const Mat3& sigma, double eta0);

}  // namespace bsr::stokes
