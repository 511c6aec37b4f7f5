#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "bsr/harmonics.hpp"
#include "bsr/sphere.hpp"
#include "bsr/stokes.hpp"

namespace bsr::kinetic {

// Tangent-vector interaction kernel K(d, d') plus background drift k(d) of
// the orientation Fokker-Planck equation
//   dP/dt = -div_d([ int K(d,d') P(d') dS' + k(d) ] P) + D lap_d P.
//
// The dipole-reduced form carries the planar k-space integration already done:
// theta_moments[p][q] = int cos^p sin^q w(theta) dtheta with
// w(theta) = int Hhat12^2 k dk, so kernel evaluations are closed-form in d, d'.
struct KernelSpec {
    enum class Kind { zero, dipole_reduced, tabulated };
    Kind kind = Kind::zero;

    // dipole_reduced payload
    double scale = 0.0;  // 1 / (N |V_L|)
    double U0 = 0.0, B = 0.0, eta0 = 1.0;
    std::array<std::array<double, 5>, 5> theta_moments{};

    // background planar shear drift
    double gamma = 0.0;

    // tabulated payload: kernel components at (d node, d' node) over `grid`
    sphere::GridPtr grid;
    std::vector<double> tab_alpha, tab_beta;  // [i_d * G + i_dp]

    Vec3 pair(const sphere::Orientation& d, const sphere::Orientation& dp) const;
    Vec3 background(const sphere::Orientation& d) const;

    // Drift at d produced by a density with stress moment S = U0 int (d'd' - I/3) P dS'.
    // Exact for the dipole-reduced kernel (it is linear in the source stress).
    Vec3 mean_field(const Vec3& d, const Mat3& S) const;

    bool low_rank() const { return kind != Kind::tabulated; }

    static KernelSpec shear_only(double gamma, double B);
};

struct OrientationDensity {
    sphere::HarmonicCoeffs coeffs;
    double t = 0.0;
    double mass() const { return coeffs.mass(); }
};

struct SolverSettings {
    double dt = 0.0;           // 0: min(1e-2/gamma, CFL bound)
    double tol_steady = 1e-9;  // on ||dP/dt||_L2
    double t_max = 0.0;        // 0: 1e3 / max(gamma, 1e-3)
    double blowup_factor = 1e3;
    int check_every = 25;
};

struct SolveReport {
    OrientationDensity density;
    long steps = 0;
    double residual = 0.0;        // ||dP/dt|| of the discrete dynamics at the end
    bool steady_reached = false;
    bool positivity_violated = false;
    double min_value = 0.0;
    double mass_drift = 0.0;      // max |mass - 1| observed
    double rhs_residual = 0.0;    // continuous-RHS L2 norm (O(dt^2) floor at the fixed point)
};

struct SmoothingProbe {
    bool diffusion_disabled = false;
    std::vector<double> times;
    std::vector<std::vector<double>> norms;  // norms[i][j] = H^{m_j} norm at times[i]
};

class KineticInstability : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Galerkin spectral solver at band limit l_max. Products are formed on a grid
// supporting 2 l_max; the advection divergence is assembled in weak form, whose
// l = 0 row vanishes identically, so mass is conserved by construction (and the
// tendency is asserted, not clamped).
class Solver {
  public:
    explicit Solver(int l_max);

    int l_max() const { return l_max_; }
    const sphere::GridPtr& grid() const { return grid_; }
    const sphere::Transform& transform() const { return *transform_; }

    OrientationDensity uniform() const;
    OrientationDensity from_function(const std::function<double(double, double)>& f) const;

    // V(d) = int K(d, d') P(d') dS' + k(d)
    sphere::TangentField assemble_flux(const OrientationDensity& P, const KernelSpec& kernel) const;

    SolveReport evolve(const OrientationDensity& P0, const KernelSpec& kernel, double D,
                       double dt, double T, const SolverSettings& s = {}) const;

    SolveReport steady_state(const KernelSpec& kernel, double D, const OrientationDensity& P0,
                             const SolverSettings& s = {}) const;

    SmoothingProbe smoothing_probe(const OrientationDensity& P0, const KernelSpec& kernel,
                                   double D, const std::vector<double>& sample_times,
                                   const std::vector<double>& sobolev_orders) const;

    // L2 norm of the full right-hand side at P
    double rhs_norm(const OrientationDensity& P, const KernelSpec& kernel, double D) const;

    // stress moment U0 int (dd - I/3) P dS'
    Mat3 stress_moment(const OrientationDensity& P, double U0) const;

  private:
    sphere::HarmonicCoeffs advection_tendency(const sphere::HarmonicCoeffs& c,
                                              const KernelSpec& kernel,
                                              const sphere::TangentField* bg_cache) const;
    sphere::TangentField background_field(const KernelSpec& kernel) const;
    Mat3 stress_moment_of(const sphere::ScalarField& p, double U0) const;
    double suggest_dt(const OrientationDensity& P0, const KernelSpec& kernel) const;

    int l_max_;
    sphere::GridPtr grid_;
    std::unique_ptr<sphere::Transform> transform_;
    std::vector<Vec3> node_d_, node_ahat_, node_bhat_;  // grid-node geometry
};

}  // namespace bsr::kinetic
