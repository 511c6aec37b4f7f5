#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "bsr/sphere.hpp"

namespace bsr::sphere {

// Complex spherical-harmonic coefficients c_{l,m}, 0 <= l <= l_max, |m| <= l,
// orthonormal basis Y_lm = Pbar_l^m(cos beta) e^{i m alpha} (Condon-Shortley).
// Real fields satisfy c_{l,-m} = (-1)^m conj(c_{l,m}).
struct HarmonicCoeffs {
    int l_max = 0;
    std::vector<std::complex<double>> c;

    HarmonicCoeffs() = default;
    explicit HarmonicCoeffs(int lmax) : l_max(lmax), c((lmax + 1) * (lmax + 1)) {}

    static int index(int l, int m) { return l * l + l + m; }
    std::complex<double>& at(int l, int m) { return c[index(l, m)]; }
    std::complex<double> at(int l, int m) const { return c[index(l, m)]; }

    double mass() const { return std::sqrt(4.0 * M_PI) * c[0].real(); }
    double l2_norm() const;                   // coefficient-vector L2 norm
    double sobolev_norm(double s) const;      // H^s norm, weights (1 + l(l+1))^s
    double conj_symmetry_error() const;       // max |c_{l,-m} - (-1)^m conj(c_{l,m})|
    void enforce_real();                      // symmetrize; throws if violation > 1e-10

    HarmonicCoeffs truncated(int new_lmax) const;
};

// Spectral transform on a Gauss-Legendre x uniform-alpha grid. Quadrature is
// exact for integrands band-limited at the grid's capacity, so analyze/synthesize
// round-trip at machine precision for l <= l_max.
//
// Construction fails if the grid cannot resolve l_max (n_alpha >= 2 l_max + 1,
// n_beta >= l_max + 1).
class Transform {
  public:
    Transform(GridPtr grid, int l_max);
    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    const GridPtr& grid() const { return grid_; }
    int l_max() const { return l_max_; }

    HarmonicCoeffs analyze(const ScalarField& f) const;
    ScalarField synthesize(const HarmonicCoeffs& c) const;

    // (1/sin b) d/d alpha and d/d beta of the represented field
    ScalarField synthesize_dalpha_over_sin(const HarmonicCoeffs& c) const;
    ScalarField synthesize_dbeta(const HarmonicCoeffs& c) const;

    // surface gradient: components ((1/sin b) dP/da, dP/db) along (alpha_hat, beta_hat)
    TangentField gradient(const HarmonicCoeffs& c) const;

    // strong-form spherical divergence (1/sin b)[d_a F_a + d_b(sin b F_b)],
    // evaluated through the Cartesian components of the tangent field
    ScalarField divergence(const TangentField& f) const;

    // weak-form divergence: coefficients of div F from <Y_lm, div F> = -<grad Y_lm, F>.
    // The l = 0 row is structurally zero, which pins total mass in the solver.
    HarmonicCoeffs divergence_weak(const TangentField& f) const;

    static HarmonicCoeffs laplacian(const HarmonicCoeffs& c);

    struct Impl;

  private:
    std::unique_ptr<Impl> impl_;
    GridPtr grid_;
    int l_max_;
};

}  // namespace bsr::sphere
