#include "bsr/ibm.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "bsr/stokes.hpp"

namespace bsr::ibm {

namespace {

inline double wrap(double v, double L) {
    if (v >= -L && v < L) return v;  // untouched when inside the box
    const double box = 2.0 * L;
    v = std::fmod(v + L, box);
    if (v < 0) v += box;
    return v - L;
}

inline Vec3 min_image(Vec3 r, double L) {
    const double box = 2.0 * L;
    r.x -= box * std::nearbyint(r.x / box);
    r.y -= box * std::nearbyint(r.y / box);
    r.z -= box * std::nearbyint(r.z / box);
    return r;
}

// branchless orthonormal tangent frame (Duff et al.)
inline void tangent_frame(const Vec3& n, Vec3& t1, Vec3& t2) {
    const double s = std::copysign(1.0, n.z);
    const double a = -1.0 / (s + n.z);
    const double b = n.x * n.y * a;
    t1 = {1.0 + s * n.x * n.x * a, s * b, -s * n.x};
    t2 = {b, s + n.y * n.y * a, -n.y};
}

}  // namespace

SwimmerState random_state(const SuspensionParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> upos(-p.L, p.L);
    std::normal_distribution<double> g(0.0, 1.0);
    SwimmerState s;
    s.x.resize(p.N);
    s.d.resize(p.N);
    const double min_sep2 = std::pow(0.95 * p.sigma_lj, 2);
    for (int i = 0; i < p.N; ++i) {
        // reject overlapping placements; give up after a while in packed boxes
        for (int attempt = 0; attempt < 200; ++attempt) {
            s.x[i] = {upos(rng), upos(rng), upos(rng)};
            bool clear = true;
            for (int j = 0; j < i && clear; ++j)
                clear = min_image(s.x[i] - s.x[j], p.L).norm2() >= min_sep2;
            if (clear) break;
        }
        Vec3 v{g(rng), g(rng), g(rng)};
        while (v.norm2() < 1e-12) v = {g(rng), g(rng), g(rng)};
        s.d[i] = v.normalized();
    }
    return s;
}

Vec3 lj_force(const Vec3& r, const SuspensionParams& p) {
    const double rn = r.norm();
    if (rn >= p.r_cut) return {0, 0, 0};
    if (rn == 0.0) throw std::invalid_argument("lj_force: zero separation");
    auto magnitude = [&](double rr) {
        const double s6 = std::pow(p.sigma_lj / rr, 6.0);
        return 24.0 * p.eps_lj * (2.0 * s6 * s6 - s6) / rr;
    };
    // evaluate at the clamped radius below 0.3 sigma, then cap the magnitude
    double f = magnitude(std::max(rn, 0.3 * p.sigma_lj)) - magnitude(p.r_cut);
    f = std::min(f, p.f_max);
    return r * (f / rn);
}

Derivatives rhs(const SwimmerState& s, const SuspensionParams& p) {
    const int N = s.size();
    Derivatives out;
    out.xdot.assign(N, Vec3{});
    out.ddot.assign(N, Vec3{});

    std::vector<Vec3> omega(N, Vec3{0, 0, p.gamma});  // background vorticity
    std::vector<Mat3> strain(N, Mat3::zero());
    Mat3 Ebg = Mat3::zero();
    Ebg(0, 1) = Ebg(1, 0) = p.gamma / 2.0;
    for (int i = 0; i < N; ++i) {
        strain[i] = Ebg;
        out.xdot[i] = p.V0 * s.d[i] + Vec3{0.0, p.gamma * s.x[i].x, 0.0};
    }

    // fused pair kernel: the dipole field is odd and its gradient even in the
    // separation, so both directions share every radial factor
    const double c = 1.0 / (8.0 * M_PI * p.eta0);
    const double r_min = p.r_min();
    const bool hydro = p.U0 != 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            Vec3 r = min_image(s.x[i] - s.x[j], p.L);  // j -> i separation
            const Vec3 flj = lj_force(r, p);
            out.xdot[i] += flj;
            out.xdot[j] -= flj;
            if (!hydro) continue;
            double rn2 = r.norm2();
            if (rn2 < r_min * r_min) {
                r *= r_min / std::sqrt(rn2);
                rn2 = r_min * r_min;
                out.any_clamped = true;
            }
            const double inv_r2 = 1.0 / rn2;
            const double inv_r5 = inv_r2 * inv_r2 / std::sqrt(rn2);
            const double m3c = -3.0 * c * inv_r5;
            // D d = U0 (d (d.r) - r/3)
            const Vec3 Dri = p.U0 * (s.d[i] * s.d[i].dot(r) - r * (1.0 / 3.0));
            const Vec3 Drj = p.U0 * (s.d[j] * s.d[j].dot(r) - r * (1.0 / 3.0));
            const double Si = r.dot(Dri), Sj = r.dot(Drj);
            out.xdot[i] += (m3c * Sj) * r;   // u(r, d_j) at i
            out.xdot[j] -= (m3c * Si) * r;   // u(-r, d_i) = -u(r, d_i) at j
            omega[i] += (6.0 * c * inv_r5) * r.cross(Drj);
            omega[j] += (6.0 * c * inv_r5) * r.cross(Dri);
            const double rv[3] = {r.x, r.y, r.z};
            const double dj5[3] = {Drj.x, Drj.y, Drj.z}, di5[3] = {Dri.x, Dri.y, Dri.z};
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b) {
                    const double rr = rv[a] * rv[b] * 5.0 * inv_r2;
                    double eij = m3c * (rv[a] * dj5[b] + rv[b] * dj5[a] - rr * Sj);
                    double eji = m3c * (rv[a] * di5[b] + rv[b] * di5[a] - rr * Si);
                    if (a == b) {
                        eij += m3c * Sj;
                        eji += m3c * Si;
                    }
                    strain[i](a, b) += eij;
                    strain[j](a, b) += eji;
                    if (a != b) {
                        strain[i](b, a) += eij;
                        strain[j](b, a) += eji;
                    }
                }
        }

    for (int i = 0; i < N; ++i)
        out.ddot[i] = stokes::jeffery_rhs(s.d[i], omega[i], strain[i], p.B);
    return out;
}

void step(SwimmerState& s, const SuspensionParams& p, double dt, std::mt19937_64& rng) {
    const Derivatives deriv = rhs(s, p);
    double vmax = 0;
    for (const Vec3& v : deriv.xdot) vmax = std::max(vmax, v.norm());
    if (vmax * dt > 0.5 * p.sigma_lj)
        throw StepSizeError("ibm::step: drift exceeds sigma/2 per step; reduce dt");

    const double noise = std::sqrt(2.0 * p.diffusion() * dt);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < s.size(); ++i) {
        s.x[i] += dt * deriv.xdot[i];
        s.x[i] = {wrap(s.x[i].x, p.L), wrap(s.x[i].y, p.L), wrap(s.x[i].z, p.L)};
        Vec3 d = s.d[i] + dt * deriv.ddot[i];
        if (noise > 0) {
            Vec3 t1, t2;
            tangent_frame(s.d[i], t1, t2);
            d += noise * (g(rng) * t1 + g(rng) * t2);
        }
        s.d[i] = d.normalized();
    }
    s.t += dt;
}

StressSample measure_stress(const SwimmerState& s, const SuspensionParams& p) {
    StressSample out;
    out.t = s.t;
    const double invV = 1.0 / p.volume();
    for (int i = 0; i < s.size(); ++i)
        out.dipolar += invV * stokes::dipole_tensor(s.d[i], p.U0);
    // ordered-pair sum: (i,j) and (j,i) contribute equally for a central force
    for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j) {
            const Vec3 rij = min_image(s.x[i] - s.x[j], p.L);
            if (rij.norm2() >= p.r_cut * p.r_cut) continue;
            const Vec3 f = lj_force(rij, p);
            out.collision += (2.0 * invV) * Mat3::outer(f, rij);
        }
    return out;
}

ViscosityEstimate effective_viscosity(const std::vector<StressSample>& traj,
                                      const SuspensionParams& p, double burn_in) {
    if (p.gamma <= 0)
        throw UndefinedViscosity("effective_viscosity: not defined at gamma = 0");
    ViscosityEstimate est;
    double sd = 0, st = 0;
    for (const auto& smp : traj) {
        if (smp.t < burn_in) continue;
        sd += smp.dipolar(0, 1);
        st += smp.dipolar(0, 1) + 0.5 * (smp.collision(0, 1) + smp.collision(1, 0));
        ++est.samples;
    }
    if (est.samples == 0)
        throw std::invalid_argument("effective_viscosity: no samples past the burn-in");
    est.dipolar = sd / est.samples / p.gamma;
    est.total = st / est.samples / p.gamma;
    return est;
}

sphere::HarmonicCoeffs orientation_moments(const std::vector<Vec3>& samples, int l_max) {
    // c_lm = (1/M) sum_i conj(Y_lm)(d_i); truncation at l_max is the smoothing
    sphere::HarmonicCoeffs c(l_max);
    if (samples.empty()) return c;
    // normalized associated Legendre via the same recurrences as the Transform
    const int L = l_max;
    std::vector<double> pb((L + 1) * (L + 2) / 2);
    auto tri = [](int l, int m) { return l * (l + 1) / 2 + m; };
    for (const Vec3& dv : samples) {
        const sphere::Orientation o = sphere::Orientation::from_vector(dv);
        const double x = std::cos(o.beta()), sx = std::sin(o.beta());
        pb[tri(0, 0)] = std::sqrt(1.0 / (4.0 * M_PI));
        for (int m = 1; m <= L; ++m)
            pb[tri(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sx * pb[tri(m - 1, m - 1)];
        for (int m = 0; m < L; ++m) pb[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pb[tri(m, m)];
        for (int m = 0; m <= L; ++m)
            for (int l = m + 2; l <= L; ++l) {
                const double a = std::sqrt((4.0 * l * l - 1.0) / ((double)l * l - m * m));
                const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) /
                                           (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                pb[tri(l, m)] = a * (x * pb[tri(l - 1, m)] - b * pb[tri(l - 2, m)]);
            }
        for (int l = 0; l <= L; ++l)
            for (int m = 0; m <= l; ++m) {
                const std::complex<double> y =
                    pb[tri(l, m)] * std::exp(std::complex<double>(0, -m * o.alpha()));
                c.at(l, m) += y;
                if (m > 0) c.at(l, -m) += (m % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
            }
    }
    for (auto& z : c.c) z /= (double)samples.size();
    return c;
}

namespace {
constexpr char kMagic[4] = {'B', 'S', 'W', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_checkpoint(const std::string& path, const SwimmerState& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_checkpoint: cannot open " + path);
    out.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    const std::uint64_t n = s.x.size();
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&s.t), 8);
    for (const Vec3& v : s.x) out.write(reinterpret_cast<const char*>(&v), 24);
    for (const Vec3& v : s.d) out.write(reinterpret_cast<const char*>(&v), 24);
    if (!out) throw std::runtime_error("write_checkpoint: write failed");
}

SwimmerState read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_checkpoint: cannot open " + path);
    char magic[4];
    std::uint32_t ver = 0;
    std::uint64_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0 || ver != kVersion)
        throw std::runtime_error("read_checkpoint: bad header in " + path);
    SwimmerState s;
    in.read(reinterpret_cast<char*>(&s.t), 8);
    s.x.resize(n);
    s.d.resize(n);
    for (Vec3& v : s.x) in.read(reinterpret_cast<char*>(&v), 24);
    for (Vec3& v : s.d) in.read(reinterpret_cast<char*>(&v), 24);
    if (!in) throw std::runtime_error("read_checkpoint: truncated file " + path);
    return s;
}

}  // namespace bsr::ibm
