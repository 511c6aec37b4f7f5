#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bsr {

// Physical constants of the suspension model. Units are nondimensional:
// lengths in body lengths, times in (body length / V0). The diffusion
// coefficient is always D0 * B^2, recomputed on demand.
struct SuspensionParams {
    int N = 200;                 // swimmer count
    double L = 10.0;             // box half-width; box is [-L, L]^3
    double V0 = 1.0;             // swim speed
    double U0 = -5.0;            // dipole moment, < 0 for pushers
    double B = 0.2;              // Bretherton constant, in [0, 1)
    double gamma = 0.1;          // background shear rate
    double eta0 = 1.0;           // solvent viscosity
    double D0 = 0.25;            // diffusion prefactor, D = D0 B^2
    double eps_lj = 1.0;         // LJ energy
    double sigma_lj = 1.0;       // LJ diameter (one body length)
    double r_cut = std::pow(2.0, 1.0 / 6.0);  // WCA truncation
    double f_max = 6.0;          // stability cap on the LJ force magnitude
    double body_semi_major = 0.5;
    double body_semi_minor = 0.5;

    double diffusion() const { return D0 * B * B; }
    double volume() const { return 8.0 * L * L * L; }   // |V_L| = (2L)^3
    double rho() const { return double(N) / volume(); }
    double body_volume() const {
        return 4.0 / 3.0 * M_PI * body_semi_major * body_semi_minor * body_semi_minor;
    }
    double phi() const { return rho() * body_volume(); }
    double r_min() const { return 0.9 * sigma_lj; }     // kernel clamp radius

    void validate() const {
        if (N < 1) throw std::invalid_argument("params: N must be >= 1");
        if (L <= 0) throw std::invalid_argument("params: L must be > 0");
        if (eta0 <= 0) throw std::invalid_argument("params: eta0 must be > 0");
        if (gamma < 0) throw std::invalid_argument("params: gamma must be >= 0");
        if (B < 0 || B >= 1) throw std::invalid_argument("params: B must be in [0, 1)");
        if (D0 < 0) throw std::invalid_argument("params: D0 must be >= 0");
        if (sigma_lj <= 0) throw std::invalid_argument("params: sigma_lj must be > 0");
        if (r_cut > std::pow(2.0, 1.0 / 6.0) * sigma_lj + 1e-12)
            throw std::invalid_argument("params: r_cut must be <= 2^(1/6) sigma_lj");
    }

    // box half-width that realizes volume fraction phi at fixed N
    static double half_width_for_phi(int N, double phi, double v_body) {
        return 0.5 * std::cbrt(double(N) * v_body / phi);
    }
};

}  // namespace bsr
