#include "bsr/harmonics.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace bsr::sphere {

using cplx = std::complex<double>;

double HarmonicCoeffs::l2_norm() const {
    double s = 0;
    for (const auto& z : c) s += std::norm(z);
    return std::sqrt(s);
}

double HarmonicCoeffs::sobolev_norm(double s) const {
    double acc = 0;
    for (int l = 0; l <= l_max; ++l) {
        const double w = std::pow(1.0 + l * (l + 1.0), s);
        for (int m = -l; m <= l; ++m) acc += w * std::norm(at(l, m));
    }
    return std::sqrt(acc);
}

double HarmonicCoeffs::conj_symmetry_error() const {
    double e = 0;
    for (int l = 0; l <= l_max; ++l)
        for (int m = 0; m <= l; ++m) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            e = std::max(e, std::abs(at(l, -m) - sgn * std::conj(at(l, m))));
        }
    return e;
}

void HarmonicCoeffs::enforce_real() {
    if (conj_symmetry_error() > 1e-10 * std::max(1.0, l2_norm()))
        throw std::runtime_error("HarmonicCoeffs: conjugate symmetry violated");
    for (int l = 0; l <= l_max; ++l) {
        at(l, 0) = cplx(at(l, 0).real(), 0.0);
        for (int m = 1; m <= l; ++m) {
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            const cplx avg = 0.5 * (at(l, m) + sgn * std::conj(at(l, -m)));
            at(l, m) = avg;
            at(l, -m) = sgn * std::conj(avg);
        }
    }
}

HarmonicCoeffs HarmonicCoeffs::truncated(int new_lmax) const {
    HarmonicCoeffs out(new_lmax);
    const int L = std::min(new_lmax, l_max);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m) out.at(l, m) = at(l, m);
    return out;
}

namespace {

inline int tri(int l, int m) { return l * (l + 1) / 2 + m; }  // m >= 0

}  // namespace

struct Transform::Impl {
    int nb, na, L, ntri;
    std::vector<double> plm;    // [j * ntri + tri(l,m)]
    std::vector<double> dplm;   // d/d beta of plm
    fftw_plan fwd = nullptr, bwd = nullptr;

    Impl(const Grid& g, int lmax) : nb(g.n_beta()), na(g.n_alpha()), L(lmax) {
        ntri = (L + 1) * (L + 2) / 2;
        plm.assign((size_t)nb * ntri, 0.0);
        dplm.assign((size_t)nb * ntri, 0.0);
        for (int j = 0; j < nb; ++j) {
            fill_plm(g.x(j), g.sin_beta(j), &plm[(size_t)j * ntri]);
            fill_dplm(&plm[(size_t)j * ntri], &dplm[(size_t)j * ntri]);
        }
        fftw_complex* buf = fftw_alloc_complex(na);
        fwd = fftw_plan_dft_1d(na, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(na, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(buf);
    }
    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    // normalized associated Legendre Pbar_l^m(x) (Condon-Shortley phase),
    // orthonormal with the e^{i m alpha} factor over S^2
    void fill_plm(double x, double sx, double* p) const {
        p[tri(0, 0)] = std::sqrt(1.0 / (4.0 * M_PI));
        for (int m = 1; m <= L; ++m)
            p[tri(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * p[tri(m - 1, m - 1)];
        for (int m = 0; m < L; ++m)
            p[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * p[tri(m, m)];
        for (int m = 0; m <= L; ++m)
            for (int l = m + 2; l <= L; ++l) {
                const double a = std::sqrt((4.0 * l * l - 1.0) / ((double)l * l - m * m));
                const double b =
                    std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                p[tri(l, m)] = a * (x * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
            }
    }

    // d Pbar_l^m / d beta via the ladder
    //   dPbar_lm = 0.5 [ sqrt((l-m)(l+m+1)) Pbar_{l,m+1} - sqrt((l+m)(l-m+1)) Pbar_{l,m-1} ]
    // with Pbar_{l,-1} = -Pbar_{l,1}.
    void fill_dplm(const double* p, double* dp) const {
        for (int l = 0; l <= L; ++l)
            for (int m = 0; m <= l; ++m) {
                double up = (m + 1 <= l) ? std::sqrt((double)(l - m) * (l + m + 1)) * p[tri(l, m + 1)] : 0.0;
                double down;
                if (m == 0)
                    down = (l >= 1) ? -p[tri(l, 1)] * std::sqrt((double)l * (l + 1)) : 0.0;
                else
                    down = std::sqrt((double)(l + m) * (l - m + 1)) * p[tri(l, m - 1)];
                dp[tri(l, m)] = 0.5 * (up - down);
            }
    }

    inline double plm_signed(int j, int l, int m) const {
        const int am = std::abs(m);
        const double v = plm[(size_t)j * ntri + tri(l, am)];
        return (m < 0 && (am % 2 == 1)) ? -v : v;
    }
    inline double dplm_signed(int j, int l, int m) const {
        const int am = std::abs(m);
        const double v = dplm[(size_t)j * ntri + tri(l, am)];
        return (m < 0 && (am % 2 == 1)) ? -v : v;
    }

    // alpha-direction analysis of one scalar field: fm[j][m] = (1/na) sum_k f e^{-im a_k}
    void alpha_analyze(const Grid& g, const std::vector<double>& v, std::vector<cplx>& fm) const {
        fftw_complex* buf = fftw_alloc_complex(na);
        fm.assign((size_t)nb * (2 * L + 1), cplx(0, 0));
        for (int j = 0; j < nb; ++j) {
            for (int k = 0; k < na; ++k) {
                buf[k][0] = v[(size_t)j * na + k];
                buf[k][1] = 0.0;
            }
            fftw_execute_dft(fwd, buf, buf);
            for (int m = -L; m <= L; ++m) {
                const int bin = (m >= 0) ? m : na + m;
                fm[(size_t)j * (2 * L + 1) + (m + L)] = cplx(buf[bin][0], buf[bin][1]) / (double)na;
            }
        }
        fftw_free(buf);
    }

    // synthesis given per-ring Fourier modes gm[j][m]
    void alpha_synthesize(std::vector<double>& out, const std::vector<cplx>& gm) const {
        fftw_complex* buf = fftw_alloc_complex(na);
        for (int j = 0; j < nb; ++j) {
            std::memset(buf, 0, sizeof(fftw_complex) * na);
            for (int m = -L; m <= L; ++m) {
                const int bin = (m >= 0) ? m : na + m;
                const cplx z = gm[(size_t)j * (2 * L + 1) + (m + L)];
                buf[bin][0] += z.real();
                buf[bin][1] += z.imag();
            }
            fftw_execute_dft(bwd, buf, buf);
            for (int k = 0; k < na; ++k) out[(size_t)j * na + k] = buf[k][0];
        }
        fftw_free(buf);
    }
};

Transform::Transform(GridPtr grid, int l_max) : grid_(std::move(grid)), l_max_(l_max) {
    if (grid_->n_alpha() < 2 * l_max + 1 || grid_->n_beta() < l_max + 1)
        throw std::invalid_argument("Transform: grid under-resolves the requested band limit");
    impl_ = std::make_unique<Impl>(*grid_, l_max);
}

Transform::~Transform() = default;

HarmonicCoeffs Transform::analyze(const ScalarField& f) const {
    if (f.grid.get() != grid_.get() && (f.grid->n_beta() != grid_->n_beta() || f.grid->n_alpha() != grid_->n_alpha()))
        throw std::invalid_argument("Transform::analyze: field lives on a different grid");
    const int L = l_max_;
    std::vector<cplx> fm;
    impl_->alpha_analyze(*grid_, f.v, fm);
    HarmonicCoeffs out(L);
    const double aw = 2.0 * M_PI;  // (2pi/na) absorbed by the 1/na in alpha_analyze
    for (int m = -L; m <= L; ++m) {
        for (int l = std::abs(m); l <= L; ++l) {
            cplx s(0, 0);
            for (int j = 0; j < grid_->n_beta(); ++j)
                s += grid_->weight(j) * impl_->plm_signed(j, l, m) * fm[(size_t)j * (2 * L + 1) + (m + L)];
            out.at(l, m) = aw * s;
        }
    }
    return out;
}

enum class SynthMode { value, dalpha_over_sin, dbeta };

static ScalarField synth_impl(const Transform::Impl* impl, const GridPtr& grid, int L,
                              const HarmonicCoeffs& c, SynthMode mode) {
    if (c.l_max > L) throw std::invalid_argument("Transform: coefficients exceed band limit");
    std::vector<cplx> gm((size_t)grid->n_beta() * (2 * L + 1), cplx(0, 0));
    for (int j = 0; j < grid->n_beta(); ++j) {
        const double inv_sin = 1.0 / grid->sin_beta(j);
        for (int m = -c.l_max; m <= c.l_max; ++m) {
            cplx s(0, 0);
            for (int l = std::abs(m); l <= c.l_max; ++l) {
                double basis;
                switch (mode) {
                    case SynthMode::value: basis = impl->plm_signed(j, l, m); break;
                    case SynthMode::dalpha_over_sin: basis = impl->plm_signed(j, l, m); break;
                    case SynthMode::dbeta: basis = impl->dplm_signed(j, l, m); break;
                }
                s += c.at(l, m) * basis;
            }
            if (mode == SynthMode::dalpha_over_sin) s *= cplx(0, m) * inv_sin;
            gm[(size_t)j * (2 * L + 1) + (m + L)] = s;
        }
    }
    ScalarField out(grid);
    impl->alpha_synthesize(out.v, gm);
    return out;
}

ScalarField Transform::synthesize(const HarmonicCoeffs& c) const {
    return synth_impl(impl_.get(), grid_, l_max_, c, SynthMode::value);
}
ScalarField Transform::synthesize_dalpha_over_sin(const HarmonicCoeffs& c) const {
    return synth_impl(impl_.get(), grid_, l_max_, c, SynthMode::dalpha_over_sin);
}
ScalarField Transform::synthesize_dbeta(const HarmonicCoeffs& c) const {
    return synth_impl(impl_.get(), grid_, l_max_, c, SynthMode::dbeta);
}

TangentField Transform::gradient(const HarmonicCoeffs& c) const {
    TangentField g(grid_);
    g.comp_alpha = synthesize_dalpha_over_sin(c).v;
    g.comp_beta = synthesize_dbeta(c).v;
    return g;
}

ScalarField Transform::divergence(const TangentField& f) const {
    // Strong form through Cartesian components: for a tangent field F on S^2,
    // div F = sum_i e_i . grad_s F_i, each F_i a smooth scalar.
    const auto& g = *grid_;
    ScalarField fx(grid_), fy(grid_), fz(grid_);
    for (int j = 0; j < g.n_beta(); ++j)
        for (int k = 0; k < g.n_alpha(); ++k) {
            const Vec3 v = f.vector_at(j, k);
            fx.at(j, k) = v.x;
            fy.at(j, k) = v.y;
            fz.at(j, k) = v.z;
        }
    ScalarField out(grid_);
    const ScalarField* comps[3] = {&fx, &fy, &fz};
    for (int i = 0; i < 3; ++i) {
        const HarmonicCoeffs ci = analyze(*comps[i]);
        const ScalarField da = synthesize_dalpha_over_sin(ci);
        const ScalarField db = synthesize_dbeta(ci);
        for (int j = 0; j < g.n_beta(); ++j)
            for (int k = 0; k < g.n_alpha(); ++k) {
                const Vec3 ah = alpha_hat(g.alpha(k), g.beta(j));
                const Vec3 bh = beta_hat(g.alpha(k), g.beta(j));
                const double ahi = (i == 0) ? ah.x : (i == 1) ? ah.y : ah.z;
                const double bhi = (i == 0) ? bh.x : (i == 1) ? bh.y : bh.z;
                out.at(j, k) += ahi * da.at(j, k) + bhi * db.at(j, k);
            }
    }
    return out;
}

HarmonicCoeffs Transform::divergence_weak(const TangentField& f) const {
    // <Y_lm, div F> = -<grad Y_lm, F>; the l = 0 row vanishes identically.
    const int L = l_max_;
    std::vector<cplx> fam, fbm;
    impl_->alpha_analyze(*grid_, f.comp_alpha, fam);
    impl_->alpha_analyze(*grid_, f.comp_beta, fbm);
    HarmonicCoeffs out(L);
    const double aw = 2.0 * M_PI;
    for (int m = -L; m <= L; ++m) {
        for (int l = std::abs(m); l <= L; ++l) {
            cplx s(0, 0);
            for (int j = 0; j < grid_->n_beta(); ++j) {
                const size_t idx = (size_t)j * (2 * L + 1) + (m + L);
                const cplx da_conj = cplx(0, -m) / grid_->sin_beta(j) * impl_->plm_signed(j, l, m);
                s -= grid_->weight(j) *
                     (da_conj * fam[idx] + impl_->dplm_signed(j, l, m) * fbm[idx]);
            }
            out.at(l, m) = aw * s;
        }
    }
    return out;
}

HarmonicCoeffs Transform::laplacian(const HarmonicCoeffs& c) {
    HarmonicCoeffs out(c.l_max);
    for (int l = 0; l <= c.l_max; ++l) {
        const double ev = -double(l) * (l + 1);
        for (int m = -l; m <= l; ++m) out.at(l, m) = ev * c.at(l, m);
    }
    return out;
}

}  // namespace bsr::sphere
