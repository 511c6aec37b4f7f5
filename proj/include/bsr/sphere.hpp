#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "bsr/vec.hpp"

namespace bsr::sphere {

// Unit basis vectors of spherical coordinates at (alpha, beta).
inline Vec3 alpha_hat(double alpha, double /*beta*/) {
    return {-std::sin(alpha), std::cos(alpha), 0.0};
}
inline Vec3 beta_hat(double alpha, double beta) {
    return {std::cos(alpha) * std::cos(beta), std::sin(alpha) * std::cos(beta), -std::sin(beta)};
}

// Orientation on S^2. Angles are canonicalized: alpha in [0, 2pi), beta in [0, pi],
// and alpha = 0 at the coordinate singularity beta in {0, pi}. Comparisons should
// use the unit vector, not the angles.
class Orientation {
  public:
    Orientation(double alpha, double beta);
    static Orientation from_vector(const Vec3& v);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const Vec3& d() const { return d_; }

    Vec3 alpha_hat() const { return sphere::alpha_hat(alpha_, beta_); }
    Vec3 beta_hat() const { return sphere::beta_hat(alpha_, beta_); }

  private:
    double alpha_, beta_;
    Vec3 d_;
};

// Gauss-Legendre nodes in cos(beta) crossed with a uniform alpha grid.
// The nodes never hit the poles, which keeps 1/sin(beta) factors finite.
class Grid {
  public:
    Grid(int n_beta, int n_alpha);

    // Smallest grid that integrates products of two fields band-limited at l_max
    // exactly (the dealiased working grid of the solver).
    static std::shared_ptr<const Grid> for_bandlimit(int l_max);

    int n_beta() const { return n_beta_; }
    int n_alpha() const { return n_alpha_; }
    int size() const { return n_beta_ * n_alpha_; }

    double x(int j) const { return x_[j]; }            // cos(beta_j)
    double weight(int j) const { return w_[j]; }       // Gauss-Legendre weight
    double beta(int j) const { return beta_[j]; }
    double sin_beta(int j) const { return sin_beta_[j]; }
    double alpha(int k) const { return alpha_[k]; }
    double alpha_weight() const { return alpha_w_; }   // 2*pi / n_alpha

    int index(int j, int k) const { return j * n_alpha_ + k; }
    Orientation orientation(int j, int k) const { return Orientation(alpha_[k], beta_[j]); }

    // quadrature weight of node (j,k) for integration over S^2
    double node_weight(int j, int /*k*/) const { return w_[j] * alpha_w_; }

  private:
    int n_beta_, n_alpha_;
    double alpha_w_;
    std::vector<double> x_, w_, beta_, sin_beta_, alpha_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Scalar samples on a Grid, row-major over (beta ring, alpha).
struct ScalarField {
    GridPtr grid;
    std::vector<double> v;

    explicit ScalarField(GridPtr g) : grid(std::move(g)), v(grid->size(), 0.0) {}
    double& at(int j, int k) { return v[grid->index(j, k)]; }
    double at(int j, int k) const { return v[grid->index(j, k)]; }

    double integrate() const;    // integral over S^2
    double min_value() const;
    double max_abs() const;
};

// Tangent vector field stored by its physical components along alpha_hat, beta_hat.
struct TangentField {
    GridPtr grid;
    std::vector<double> comp_alpha, comp_beta;

    explicit TangentField(GridPtr g)
        : grid(std::move(g)), comp_alpha(grid->size(), 0.0), comp_beta(grid->size(), 0.0) {}

    // Cartesian vector at node (j,k)
    Vec3 vector_at(int j, int k) const {
        const int i = grid->index(j, k);
        return comp_alpha[i] * alpha_hat(grid->alpha(k), grid->beta(j)) +
               comp_beta[i] * beta_hat(grid->alpha(k), grid->beta(j));
    }
    void set_vector(int j, int k, const Vec3& t) {
        const int i = grid->index(j, k);
        comp_alpha[i] = t.dot(alpha_hat(grid->alpha(k), grid->beta(j)));
        comp_beta[i] = t.dot(beta_hat(grid->alpha(k), grid->beta(j)));
    }
};

// Closed form of the spherical divergence of d x (d x A d) for a constant matrix A:
// 3 (d, A d) - Tr A.
double lemma_divergence(const Mat3& A, const Orientation& d);

}  // namespace bsr::sphere
