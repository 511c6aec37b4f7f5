#include "bsr/stokes.hpp"

#include <stdexcept>

namespace bsr::stokes {

Mat3 dipole_tensor(const Vec3& d, double U0) {
    Mat3 D = Mat3::outer(d, d);
    D(0, 0) -= 1.0 / 3.0;
    D(1, 1) -= 1.0 / 3.0;
    D(2, 2) -= 1.0 / 3.0;
    return D * U0;
}

Mat3 oseen(const Vec3& x, double eta0) {
    const double r = x.norm();
    if (r == 0.0) throw std::invalid_argument("oseen: x = 0");
    const double c = 1.0 / (8.0 * M_PI * eta0);
    Mat3 G = Mat3::outer(x, x) * (c / (r * r * r));
    const double diag = c / r;
    G(0, 0) += diag;
    G(1, 1) += diag;
    G(2, 2) += diag;
    return G;
}

FlowSample dipole_flow(const Vec3& x, const Vec3& d, double U0, double eta0, double r_min) {
    FlowSample out;
    Vec3 r = x;
    double rn = r.norm();
    if (rn == 0.0) throw std::invalid_argument("dipole_flow: x = 0");
    if (rn < r_min) {
        r = r * (r_min / rn);
        rn = r_min;
        out.regularized = true;
    }
    // u_k = D_lm d/dx_m G_kl with the Oseen tensor; contraction collapses to the
    // purely radial stresslet field u = -3c x (x . D x) / r^5, c = 1/(8 pi eta0)
    const double c = 1.0 / (8.0 * M_PI * eta0);
    const Mat3 D = dipole_tensor(d, U0);
    const Vec3 Dr = D * r;
    const double S = r.dot(Dr);
    const double r2 = rn * rn;
    const double inv_r5 = 1.0 / (r2 * r2 * rn);
    out.u = r * (-3.0 * c * S * inv_r5);
    // grad u_kj = -3c [ delta_kj S + 2 x_k (Dx)_j - 5 x_k x_j S / r^2 ] / r^5
    const double rv[3] = {r.x, r.y, r.z}, Drv[3] = {Dr.x, Dr.y, Dr.z};
    for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j) {
            double t = 2.0 * rv[k] * Drv[j] - 5.0 * rv[k] * rv[j] * S / r2;
            if (k == j) t += S;
            out.grad_u(k, j) = -3.0 * c * t * inv_r5;
        }
    out.strain = out.grad_u.sym();
    out.vorticity = 6.0 * c * inv_r5 * r.cross(Dr);
    return out;
}

Vec3 jeffery_rhs(const Vec3& d, const Vec3& omega, const Mat3& E, double B) {
    const Vec3 Ed = E * d;
    return -0.5 * d.cross(omega) - B * d.cross(d.cross(Ed));
}

Mat3 fourier_stress(const Vec3& dprime, double U0) { return dipole_tensor(dprime, U0); }

double fourier_pressure(const Vec3& khat, const Mat3& sigma) {
    const double k2 = khat.norm2();
    if (k2 == 0.0) throw std::invalid_argument("fourier_pressure: k = 0");
    return quad_form(khat, sigma, khat) / k2;
}

CVec3 fourier_velocity(const Vec3& khat, double kmag, const Mat3& sigma, double eta0) {
    if (kmag <= 0.0 || khat.norm2() == 0.0)
        throw std::invalid_argument("fourier_velocity: k = 0");
    const Vec3 k = khat.normalized();
    const Vec3 sk = sigma * k;
    const Vec3 v = (sk - k * k.dot(sk)) * (1.0 / (eta0 * kmag));
    return {std::complex<double>(0, v.x), std::complex<double>(0, v.y),
            std::complex<double>(0, v.z)};
}

Mat3 fourier_sym_gradient(const Vec3& khat, const Mat3& sigma, double eta0) {
    if (khat.norm2() == 0.0) throw std::invalid_argument("fourier_sym_gradient: k = 0");
    const Vec3 k = khat.normalized();
    const Mat3 kk = Mat3::outer(k, k);
    const Mat3 skk = sigma * kk;
    const Mat3 kks = kk * sigma;
    const Mat3 kkskk = kk * skk;
    return (skk + kks - 2.0 * kkskk) * (-0.5 / eta0);
}

Vec3 fourier_E(const Vec3& khat, const Vec3& d, const Mat3& sigma, double eta0) {
    const Vec3 Gd = fourier_sym_gradient(khat, sigma, eta0) * d;
    return Gd - d * d.dot(Gd);
}

Vec3 fourier_omega(const Vec3& khat, const Vec3& d, const Mat3& sigma, double eta0) {
    if (khat.norm2() == 0.0) throw std::invalid_argument("fourier_omega: k = 0");
    const Vec3 k = khat.normalized();
    const Vec3 sk = sigma * k;
    const Vec3 proj = sk - k * k.dot(sk);
    // F[curl u] = i k x u~ = -(1/eta0) khat x (I - kk*) Sigma khat, so the
    // Jeffery kernel -1/2 d x F[curl u] carries a plus sign here (pinned by
    // the real/Fourier Parseval check against the real-space vorticity)
    return 0.5 / eta0 * d.cross(k.cross(proj));
}

}  // namespace bsr::stokes
