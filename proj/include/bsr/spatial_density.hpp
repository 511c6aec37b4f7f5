#pragma once

#include <string>
#include <vector>

namespace bsr::rheology {

// Reduced planar Fourier profile Hhat12(k1, k2) of the spatial density:
// (F[P_x])^2 = delta(k3) Hhat12^2(k1, k2). Hhat12 is real (the density is
// even-symmetrized) and square-integrable against the planar measure
// k dk dtheta on the configured truncation.
class SpatialDensitySpec {
  public:
    enum class Variant { uniform_box, gaussian, tabulated };

    // Hhat12^2 = sqrt(L) (sin(k1 L)/k1)^2 (sin(k2 L)/k2)^2
    static SpatialDensitySpec uniform_box(double L);

    // Hhat12^2 = amplitude * exp(-(sigma_x^2 k1^2 + sigma_y^2 k2^2)).
    // A z-uniform column of N swimmers with a normalized planar Gaussian profile
    // gives amplitude = pi N^2 / L.
    static SpatialDensitySpec gaussian(double sigma_x, double sigma_y, double amplitude = 1.0);

    // Tabulated Hhat12 on a (k, theta) product grid; bilinear interpolation,
    // zero beyond the last k node. Loadable from CSV (rows: k, theta, H12).
    static SpatialDensitySpec tabulated(std::vector<double> k_nodes,
                                        std::vector<double> theta_nodes,
                                        std::vector<double> values);
    static SpatialDensitySpec tabulated_from_csv(const std::string& path);

    Variant variant() const { return variant_; }
    double box_half_width() const { return L_; }

    double hhat2(double k, double theta) const;  // Hhat12^2 at k1 = k cos, k2 = k sin

    // w(theta) = int_0^kmax Hhat12^2 k dk, with a variant-aware radial rule:
    // Gauss segments for smooth profiles, oscillation-resolving panels for the box.
    double radial_weight(double theta, double k_max, int n_k) const;
    double default_k_max() const;

  private:
    Variant variant_ = Variant::gaussian;
    double L_ = 0;                      // uniform_box
    double sx_ = 1, sy_ = 1, amp_ = 1;  // gaussian
    std::vector<double> tab_k_, tab_theta_, tab_v_;
};

}  // namespace bsr::rheology
