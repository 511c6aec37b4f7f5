#include "bsr/spatial_density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bsr::rheology {

namespace {

double sinc(double x) { return std::fabs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// 7-point Gauss-Legendre on [a, b]
double gauss7(double a, double b, const auto& f) {
    static const double xs[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                                 0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
    static const double ws[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                 0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0;
    for (int i = 0; i < 7; ++i) s += ws[i] * f(c + h * xs[i]);
    return s * h;
}

}  // namespace

SpatialDensitySpec SpatialDensitySpec::uniform_box(double L) {
    if (L <= 0) throw std::invalid_argument("uniform_box: L must be > 0");
    SpatialDensitySpec s;
    s.variant_ = Variant::uniform_box;
    s.L_ = L;
    return s;
}

SpatialDensitySpec SpatialDensitySpec::gaussian(double sigma_x, double sigma_y, double amplitude) {
    if (sigma_x <= 0 || sigma_y <= 0 || amplitude <= 0)
        throw std::invalid_argument("gaussian: sigma and amplitude must be > 0");
    SpatialDensitySpec s;
    s.variant_ = Variant::gaussian;
    s.sx_ = sigma_x;
    s.sy_ = sigma_y;
    s.amp_ = amplitude;
    return s;
}

SpatialDensitySpec SpatialDensitySpec::tabulated(std::vector<double> k_nodes,
                                                 std::vector<double> theta_nodes,
                                                 std::vector<double> values) {
    if (k_nodes.size() < 2 || theta_nodes.size() < 2 ||
        values.size() != k_nodes.size() * theta_nodes.size())
        throw std::invalid_argument("tabulated: grid/value sizes are inconsistent");
    if (!std::is_sorted(k_nodes.begin(), k_nodes.end()) ||
        !std::is_sorted(theta_nodes.begin(), theta_nodes.end()))
        throw std::invalid_argument("tabulated: grid nodes must be sorted");
    SpatialDensitySpec s;
    s.variant_ = Variant::tabulated;
    s.tab_k_ = std::move(k_nodes);
    s.tab_theta_ = std::move(theta_nodes);
    s.tab_v_ = std::move(values);
    return s;
}

SpatialDensitySpec SpatialDensitySpec::tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tabulated_from_csv: cannot open " + path);
    std::vector<double> ks, ths, vs;
    std::string line;
    struct Row {
        double k, th, v;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Row r{};
        if (!(ss >> r.k >> r.th >> r.v))
            throw std::runtime_error("tabulated_from_csv: malformed row '" + line + "'");
        rows.push_back(r);
    }
    for (const auto& r : rows) {
        if (ks.empty() || r.k > ks.back()) ks.push_back(r.k);
        if (std::find(ths.begin(), ths.end(), r.th) == ths.end()) ths.push_back(r.th);
    }
    std::sort(ths.begin(), ths.end());
    if (rows.size() != ks.size() * ths.size())
        throw std::runtime_error("tabulated_from_csv: rows do not form a (k, theta) product grid");
    std::vector<double> vals(rows.size());
    auto kidx = [&](double k) {
        return std::lower_bound(ks.begin(), ks.end(), k) - ks.begin();
    };
    auto tidx = [&](double t) {
        return std::lower_bound(ths.begin(), ths.end(), t) - ths.begin();
    };
    for (const auto& r : rows) vals[kidx(r.k) * ths.size() + tidx(r.th)] = r.v;
    return tabulated(std::move(ks), std::move(ths), std::move(vals));
}

double SpatialDensitySpec::hhat2(double k, double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    switch (variant_) {
        case Variant::uniform_box: {
            const double a = sinc(k * L_ * c) * L_;
            const double b = sinc(k * L_ * s) * L_;
            return std::sqrt(L_) * a * a * b * b;
        }
        case Variant::gaussian: {
            const double q = sx_ * sx_ * k * k * c * c + sy_ * sy_ * k * k * s * s;
            return amp_ * std::exp(-q);
        }
        case Variant::tabulated: {
            // bilinear in (k, theta) with theta wrapped to the table's period
            if (k <= tab_k_.front() || k >= tab_k_.back()) {
                if (k > tab_k_.back()) return 0.0;
            }
            double th = std::fmod(theta, 2.0 * M_PI);
            if (th < 0) th += 2.0 * M_PI;
            th = std::clamp(th, tab_theta_.front(), tab_theta_.back());
            auto hi_k = std::upper_bound(tab_k_.begin(), tab_k_.end(), k);
            size_t ik = std::min<size_t>(std::max<long>(1, hi_k - tab_k_.begin()), tab_k_.size() - 1);
            auto hi_t = std::upper_bound(tab_theta_.begin(), tab_theta_.end(), th);
            size_t it = std::min<size_t>(std::max<long>(1, hi_t - tab_theta_.begin()),
                                         tab_theta_.size() - 1);
            const double tk = (k - tab_k_[ik - 1]) / (tab_k_[ik] - tab_k_[ik - 1]);
            const double tt = (th - tab_theta_[it - 1]) / (tab_theta_[it] - tab_theta_[it - 1]);
            const size_t nt = tab_theta_.size();
            auto v = [&](size_t a, size_t b) { return tab_v_[a * nt + b]; };
            const double h = (1 - tk) * ((1 - tt) * v(ik - 1, it - 1) + tt * v(ik - 1, it)) +
                             tk * ((1 - tt) * v(ik, it - 1) + tt * v(ik, it));
            return h * h;
        }
    }
    return 0.0;
}

double SpatialDensitySpec::default_k_max() const {
    switch (variant_) {
        case Variant::uniform_box: return 240.0 / L_;   // ~75 oscillation periods
        case Variant::gaussian: return 7.0 / std::min(sx_, sy_);
        case Variant::tabulated: return tab_k_.back();
    }
    return 1.0;
}

double SpatialDensitySpec::radial_weight(double theta, double k_max, int n_k) const {
    if (k_max <= 0) k_max = default_k_max();
    auto f = [&](double k) { return hhat2(k, theta) * k; };
    if (variant_ == Variant::uniform_box) {
        // resolve the sin^2(k L cos) sin^2(k L sin) oscillation, one panel per period
        const double c = std::fabs(std::cos(theta)), s = std::fabs(std::sin(theta));
        const double freq = L_ * (c + s) + 1e-12;
        const double panel = M_PI / freq;
        double acc = 0, a = 0;
        while (a < k_max) {
            const double b = std::min(a + panel, k_max);
            acc += gauss7(a, b, f);
            a = b;
        }
        return acc;
    }
    // smooth profiles: composite Gauss on n_k/7 segments
    const int segments = std::max(1, n_k / 7);
    const double h = k_max / segments;
    double acc = 0;
    for (int i = 0; i < segments; ++i) acc += gauss7(i * h, (i + 1) * h, f);
    return acc;
}

}  // namespace bsr::rheology
