#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bsr/harmonics.hpp"
#include "bsr/params.hpp"
#include "bsr/vec.hpp"

namespace bsr::ibm {

// Positions in [-L, L]^3 (periodic, minimum image) and unit orientations.
struct SwimmerState {
    std::vector<Vec3> x;
    std::vector<Vec3> d;
    double t = 0.0;

    int size() const { return (int)x.size(); }
};

SwimmerState random_state(const SuspensionParams& p, std::mt19937_64& rng);

struct Derivatives {
    std::vector<Vec3> xdot;
    std::vector<Vec3> ddot;  // deterministic drift, tangent to d
    bool any_clamped = false;
};

// WCA force on the swimmer at separation r from its neighbour, force-shifted to
// vanish at r_cut, capped at f_max below 0.3 sigma.
Vec3 lj_force(const Vec3& r, const SuspensionParams& p);

Derivatives rhs(const SwimmerState& s, const SuspensionParams& p);

class StepSizeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Euler-Maruyama step: deterministic drift plus sqrt(2 D dt) tangent-plane noise,
// renormalization of each d, periodic wrap of each x. Throws StepSizeError when
// the drift would move a swimmer more than sigma/2 in one step.
void step(SwimmerState& s, const SuspensionParams& p, double dt, std::mt19937_64& rng);

struct StressSample {
    Mat3 dipolar;    // symmetric trace-free
    Mat3 collision;  // symmetric
    double t = 0.0;
};

StressSample measure_stress(const SwimmerState& s, const SuspensionParams& p);

class UndefinedViscosity : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Per-trajectory time averages of Sigma_xy / gamma past the burn-in.
struct ViscosityEstimate {
    double dipolar = 0;        // (eta - eta0)/eta0 from Sigma^d only
    double total = 0;          // including the collision stress
    int samples = 0;
};
ViscosityEstimate effective_viscosity(const std::vector<StressSample>& traj,
                                      const SuspensionParams& p, double burn_in);

// Empirical spherical-harmonic moments of the orientation cloud (smoothed
// histogram for layer comparisons): c_lm = (1/M) sum_i conj(Y_lm)(d_i).
sphere::HarmonicCoeffs orientation_moments(const std::vector<Vec3>& samples, int l_max);

// Fixed-layout little-endian checkpoint (magic "BSWM", version, N, t, x[], d[]).
void write_checkpoint(const std::string& path, const SwimmerState& s);
SwimmerState read_checkpoint(const std::string& path);

}  // namespace bsr::ibm
