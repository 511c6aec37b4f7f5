#pragma once

#include <optional>
#include <string>

#include "bsr/kinetic.hpp"
#include "bsr/params.hpp"
#include "bsr/spatial_density.hpp"
#include "bsr/sphere.hpp"

namespace bsr::rheology {

struct AcdSettings {
    int n_theta = 256;  // periodic trapezoid nodes in theta
    int n_k = 210;      // radial Gauss points (smooth profiles)
    double k_max = 0;   // 0: variant default
};

// k-space integrals of Hhat12^2 over the planar measure k dk dtheta:
//   A = 1/2 int sin^2(2t) Hhat2 k dk dt,  C = -1/2 int sin(4t) ...,
//   D = int cos t sin t ...
// A >= 0 always; C = D = 0 for radially symmetric profiles.
struct InteractionCoefficients {
    double A = 0, C = 0, D = 0;
    double richardson_rel_err = 0;  // relative change under resolution doubling
};

InteractionCoefficients compute_ACD(const SpatialDensitySpec& spec, const AcdSettings& q = {});

// Cross-check of the delta(k3) reduction: same A but with the mollified
// (sin(k3 Lz)/k3)^2 column profile integrated in k3 explicitly.
double compute_A_mollified(const SpatialDensitySpec& spec, double Lz, const AcdSettings& q = {},
                           int n_k3 = 400);

// theta-moment table m[p][q] = int cos^p sin^q w(theta) dtheta, p + q <= 4,
// with w the radial weight of the spec
std::array<std::array<double, 5>, 5> theta_moments(const SpatialDensitySpec& spec,
                                                   const AcdSettings& q = {});

// ---- asymptotic orientation distribution (published closed form) ----
//   P_d = 1/4pi + P1 B + P2 B^2,  P1 = -(3/8pi) sin^2 b cos 2a,
//   P2 = C1 sin^4 b cos 4a + C2 sin^2 b cos 2a + C3 sin^2 b sin 2a,
//   C1 = 3/16pi, C2 = -U0 (C + 12 D) / (40 g pi eta0 N |V_L|),
//   C3 = -U0 A / (40 g pi eta0 N |V_L|).
struct PdCoefficients {
    double C1 = 0, C2 = 0, C3 = 0;
};
PdCoefficients pd_coefficients(const SuspensionParams& p, const InteractionCoefficients& acd);

double pd_order1(double alpha, double beta);
double pd_order2(double alpha, double beta, const PdCoefficients& c);
double pd_asymptotic(double alpha, double beta, double B, const SuspensionParams& p,
                     const InteractionCoefficients& acd);

// eta_int = -U0^2 B^2 rho^2 Ahat / (75 g^2 pi eta0), Ahat = A / N^2
double eta_int(const SuspensionParams& p, const InteractionCoefficients& acd);

// N12 = (U0 rho / g^2)[-2/5 - 2 U0 rho (C + 12D) B^2 / (75 g pi eta0)]
// N23 = (U0 rho / g^2)[ 1/5 +   U0 rho (C + 12D) B^2 / (75 g pi eta0)]
struct NormalStresses {
    double N12 = 0, N23 = 0;
};
NormalStresses normal_stresses(const SuspensionParams& p, const InteractionCoefficients& acd);

class ParameterRegime : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Dhat = [-15 eta0 g^2 + sqrt(225 eta0^2 g^4 - Ahat^2 B^2 g^2 rho^2 U0^2)] / (12 Ahat B rho U0),
// pushers only; throws ParameterRegime on U0 >= 0 or negative discriminant.
double effective_noise(const SuspensionParams& p, const InteractionCoefficients& acd);

// Reduced tangent kernel K(d, d') = <F[omega] + B F[E], (F[P_x])^2>_k / (N |V_L|)
// for the kinetic solver, planar (k3 = 0) quadrature baked into theta moments.
kinetic::KernelSpec reduced_kernel(const SpatialDensitySpec& spec, const SuspensionParams& p,
                                   const AcdSettings& q = {});

// Same kernel tabulated on a solver grid (the slow exchange form).
kinetic::KernelSpec reduced_kernel_tabulated(const SpatialDensitySpec& spec,
                                             const SuspensionParams& p, int l_max,
                                             const AcdSettings& q = {});

// ---- Appendix integral terms by direct quadrature ----
// I1 = (1/4pi N V) div_d int <F[E]> P1(d') dS'
// I4 = (1/ N V) grad_d P1 . int <F[omega]> P1(d') dS'
// I2/I3 magnitudes: |int <F[omega or E]>(d, d') dS'|, whose vanishing makes the
// corresponding terms zero for any density.
struct ITerms {
    sphere::ScalarField I1, I4, I2_mag, I3_mag;
    double I1_scale = 0, I4_scale = 0;
    double I2_rel = 0, I3_rel = 0;            // max-abs over scale
    double I1_closed_rel_err = 0;              // vs published closed form
    double I4_closed_rel_err = 0;
    // best-fit multiples of the published closed forms (diagnostics)
    double I1_fit_ratio = 0, I4_fit_ratio = 0;
};
ITerms i_terms(const SpatialDensitySpec& spec, const SuspensionParams& p,
               const AcdSettings& q = {}, int l_max = 16);

// Summary record for the CLI / sweep outputs.
struct RheologyReport {
    double A = 0, C = 0, D = 0, A_hat = 0;
    double eta_int = 0;
    double N12 = 0, N23 = 0;
    std::optional<double> D_hat;   // absent outside the pusher regime
    double richardson_rel_err = 0;
};
RheologyReport make_report(const SuspensionParams& p, const SpatialDensitySpec& spec,
                           const AcdSettings& q = {});

}  // namespace bsr::rheology
