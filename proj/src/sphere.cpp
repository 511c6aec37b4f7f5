#include "bsr/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace bsr::sphere {

namespace {

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int l = 0; l < n; ++l) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * l + 1.0) * xi * p1 - l * p2) / (l + 1.0);
            }
            pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            double dx = p0 / pp;
            xi -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
    }
}

}  // namespace

Orientation::Orientation(double alpha, double beta) {
    beta_ = std::clamp(beta, 0.0, M_PI);
    alpha_ = (beta_ == 0.0 || beta_ == M_PI) ? 0.0 : wrap_2pi(alpha);
    const double sb = std::sin(beta_);
    d_ = {std::cos(alpha_) * sb, std::sin(alpha_) * sb, std::cos(beta_)};
    // |d| = 1 by construction up to rounding
}

Orientation Orientation::from_vector(const Vec3& v) {
    const Vec3 u = v.normalized();
    const double beta = std::acos(std::clamp(u.z, -1.0, 1.0));
    double alpha = 0.0;
    if (std::fabs(u.x) > 0 || std::fabs(u.y) > 0) alpha = std::atan2(u.y, u.x);
    return Orientation(alpha, beta);
}

Grid::Grid(int n_beta, int n_alpha) : n_beta_(n_beta), n_alpha_(n_alpha) {
    if (n_beta < 1 || n_alpha < 1) throw std::invalid_argument("Grid: empty resolution");
    gauss_legendre(n_beta, x_, w_);
    beta_.resize(n_beta);
    sin_beta_.resize(n_beta);
    for (int j = 0; j < n_beta; ++j) {
        beta_[j] = std::acos(x_[j]);
        sin_beta_[j] = std::sin(beta_[j]);
    }
    alpha_w_ = 2.0 * M_PI / n_alpha;
    alpha_.resize(n_alpha);
    for (int k = 0; k < n_alpha; ++k) alpha_[k] = alpha_w_ * k;
}

std::shared_ptr<const Grid> Grid::for_bandlimit(int l_max) {
    return std::make_shared<Grid>(2 * l_max + 2, 4 * l_max + 4);
}

double ScalarField::integrate() const {
    double s = 0;
    for (int j = 0; j < grid->n_beta(); ++j) {
        double ring = 0;
        for (int k = 0; k < grid->n_alpha(); ++k) ring += v[grid->index(j, k)];
        s += grid->weight(j) * ring;
    }
    return s * grid->alpha_weight();
}

double ScalarField::min_value() const {
    return *std::min_element(v.begin(), v.end());
}

double ScalarField::max_abs() const {
    double s = 0;
    for (double a : v) s = std::max(s, std::fabs(a));
    return s;
}

double lemma_divergence(const Mat3& A, const Orientation& d) {
    return 3.0 * quad_form(d.d(), A, d.d()) - A.trace();
}

}  // namespace bsr::sphere
