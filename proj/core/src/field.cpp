#include "psys/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psys {

std::vector<double> StateField::x_grid() const {
    std::vector<double> x(n_x);
    for (int i = 0; i < n_x; ++i) x[i] = static_cast<double>(i) / n_x;
    return x;
}

StateField StateField::from_samples(SigmaModel model, int n_x, double winding_c,
                                    std::span<const double> times,
                                    const std::function<double(double, double)>& u_fn,
                                    const std::function<double(double, double)>& v_fn) {
    if (n_x < 8) throw Error("from_samples: n_x must be >= 8");
    if (times.empty()) throw Error("from_samples: need at least one time");
    StateField f;
    f.model = std::move(model);
    f.n_x = n_x;
    f.winding_c = winding_c;
    f.frames.reserve(times.size());
    double prev = -std::numeric_limits<double>::infinity();
    for (const double t : times) {
        if (!(t > prev)) throw Error("from_samples: times must be strictly increasing");
        prev = t;
        Frame fr;
        fr.t = t;
        fr.u.resize(n_x);
        fr.v.resize(n_x);
        for (int i = 0; i < n_x; ++i) {
            const double x = static_cast<double>(i) / n_x;
            fr.u[i] = u_fn(t, x);
            fr.v[i] = v_fn(t, x);
        }
        f.frames.push_back(std::move(fr));
    }
    return f;
}

bool RegionMask::uniform() const {
    return std::all_of(tags.begin(), tags.end(), [&](RegionTag t) { return t == tags[0]; });
}

bool RegionMask::all_hyperbolic_single_side() const {
    return uniform() && is_hyperbolic(tags[0]);
}

bool RegionMask::contains(RegionTag tag) const {
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

RegionMask classify_frame(const SigmaModel& model, std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    RegionMask m;
    m.tags.resize(n);
    m.component.resize(n);
    m.subgrid_crossing.assign(n, false);
    for (int i = 0; i < n; ++i) m.tags[i] = classify(model, u[i]);

    // Maximal runs of equal tag on the circle.
    int label = -1;
    for (int i = 0; i < n; ++i) {
        if (i == 0 || m.tags[i] != m.tags[i - 1]) ++label;
        m.component[i] = label;
    }
    if (n > 1 && m.tags[0] == m.tags[n - 1] && label > 0) {
        const int last = m.component[n - 1];
        for (int i = n - 1; i >= 0 && m.component[i] == last; --i) m.component[i] = 0;
        --label;
    }
    m.n_components = label + 1;

    for (int i = 0; i < n; ++i) {
        const RegionTag a = m.tags[i], b = m.tags[(i + 1) % n];
        if (a != b && a != RegionTag::Boundary && b != RegionTag::Boundary)
            m.subgrid_crossing[i] = true;
    }
    return m;
}

namespace {

inline int wrap_index(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

struct CrNodes {
    double g0, g1, g2, g3; // nodes j-1, j, j+1, j+2
    double s;              // local coordinate in [0,1)
};

CrNodes cr_locate(std::span<const double> grid, double x) {
    const int n = static_cast<int>(grid.size());
    double xx = x - std::floor(x);
    double p = xx * n;
    int j = static_cast<int>(std::floor(p));
    if (j >= n) j = n - 1; // guard against p == n from rounding
    return {grid[wrap_index(j - 1, n)], grid[j], grid[wrap_index(j + 1, n)],
            grid[wrap_index(j + 2, n)], p - j};
}

} // namespace

double catmull_rom_value(std::span<const double> grid, double x) {
    const auto [g0, g1, g2, g3, s] = cr_locate(grid, x);
    const double m1 = 0.5 * (g2 - g0);
    const double m2 = 0.5 * (g3 - g1);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * g1 + (s3 - 2 * s2 + s) * m1 +
           (-2 * s3 + 3 * s2) * g2 + (s3 - s2) * m2;
}

double catmull_rom_derivative(std::span<const double> grid, double x) {
    const auto [g0, g1, g2, g3, s] = cr_locate(grid, x);
    const double m1 = 0.5 * (g2 - g0);
    const double m2 = 0.5 * (g3 - g1);
    const double s2 = s * s;
    const double dds = (6 * s2 - 6 * s) * g1 + (3 * s2 - 4 * s + 1) * m1 +
                       (-6 * s2 + 6 * s) * g2 + (3 * s2 - 2 * s) * m2;
    return dds * grid.size();
}

FieldSampler::FieldSampler(const StateField& field) : field_(&field) {
    if (field.frames.empty()) throw Error("FieldSampler: field has no frames");
}

int FieldSampler::locate(double t) const {
    const auto& fr = field_->frames;
    const double slack = 1e-12 * (1.0 + std::abs(fr.back().t));
    if (t < fr.front().t - slack || t > fr.back().t + slack)
        throw Error("FieldSampler: t outside field time span");
    if (fr.size() == 1) return 0;
    auto it = std::upper_bound(fr.begin(), fr.end(), t,
                               [](double v, const Frame& f) { return v < f.t; });
    int i = static_cast<int>(it - fr.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(fr.size()) - 2);
}

FieldSampler::Point FieldSampler::sample(double t, double x) const {
    const auto& fr = field_->frames;
    const int i = locate(t);
    const Frame& a = fr[i];
    const Frame& b = fr[std::min<int>(i + 1, fr.size() - 1)];
    const double span = b.t - a.t;
    const double th = span > 0 ? std::clamp((t - a.t) / span, 0.0, 1.0) : 0.0;

    const auto blend = [th](double va, double vb) { return (1.0 - th) * va + th * vb; };
    Point p;
    p.u = blend(catmull_rom_value(a.u, x), catmull_rom_value(b.u, x));
    p.u_x = blend(catmull_rom_derivative(a.u, x), catmull_rom_derivative(b.u, x));
    const double vp = blend(catmull_rom_value(a.v, x), catmull_rom_value(b.v, x));
    const double vp_x = blend(catmull_rom_derivative(a.v, x), catmull_rom_derivative(b.v, x));
    p.v = vp + field_->winding_c * x;
    p.v_x = vp_x + field_->winding_c;
    return p;
}

double FieldSampler::u(double t, double x) const { return sample(t, x).u; }

double FieldSampler::riemann_gradient(double t, double x, int riemann_index) const {
    const Point p = sample(t, x);
    const Side side = side_of(field_->model, p.u);
    const double s = std::sqrt(std::max(-field_->model.dsigma(p.u), 0.0));
    const double q_prime = side == Side::AlphaSide ? -s : s;
    return riemann_index == 1 ? p.v_x - q_prime * p.u_x : p.v_x + q_prime * p.u_x;
}

std::vector<double> riemann_gradient_grid(const StateField& field, int frame_index,
                                          int riemann_index, const QTransform& qt) {
    const Frame& fr = field.frame(frame_index);
    const int n = field.n_x;
    const double h = field.dx();
    const double sgn = riemann_index == 1 ? -1.0 : 1.0; // r = v + sgn * q(u)

    const auto on_side = [&](double u) {
        const RegionTag tag = classify(field.model, u);
        return is_hyperbolic(tag) &&
               ((qt.side() == Side::AlphaSide) == (tag == RegionTag::HyperbolicAlpha));
    };

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
        // full v differences: the winding term contributes exactly winding_c
        const double dv = (fr.v[ip] - fr.v[im]) / (2.0 * h) + field.winding_c;
        if (on_side(fr.u[ip]) && on_side(fr.u[im])) {
            const double dq = (qt.q(fr.u[ip]) - qt.q(fr.u[im])) / (2.0 * h);
            out[i] = dv + sgn * dq;
        } else {
            // stencil leaves the component: chain rule with clamped speed
            const double du = (fr.u[ip] - fr.u[im]) / (2.0 * h);
            const double s = std::sqrt(std::max(-field.model.dsigma(fr.u[i]), 0.0));
            const double q_prime = qt.side() == Side::AlphaSide ? -s : s;
            out[i] = dv + sgn * q_prime * du;
        }
    }
    return out;
}

} // namespace psys
