#include "psys/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psys {

namespace {

TrajectorySample make_sample(const FieldSampler& sampler, double t, double x, double p) {
    const auto pt = sampler.sample(t, x);
    TrajectorySample s;
    s.t = t;
    s.x = x;
    s.p = p;
    s.H = 0.5 * p * p + pt.u;
    s.F = p * p * p / 3.0 + pt.u * p + pt.v;
    return s;
}

/// u_x with t wrapped into the field's period (for doubly periodic use).
struct PeriodicPotential {
    const FieldSampler& sampler;
    double t_base;
    double period;

    double wrap(double t) const {
        double tt = std::fmod(t - t_base, period);
        if (tt < 0) tt += period;
        return t_base + tt;
    }
    double u_x(double t, double x) const { return sampler.sample(wrap(t), x).u_x; }
    double u(double t, double x) const { return sampler.sample(wrap(t), x).u; }
};

} // namespace

Trajectory flow(const StateField& field, double t0, double x0, double p0,
                double t_end, const FlowOptions& opts) {
    FieldSampler sampler(field);
    Trajectory traj;
    double t = t0, x = x0, p = p0;
    traj.samples.push_back(make_sample(sampler, t, x, p));

    const double dir = t_end >= t0 ? 1.0 : -1.0;
    while (dir * (t_end - t) > 1e-14 * (1.0 + std::abs(t_end))) {
        const double h = dir * std::min(opts.dt, dir * (t_end - t));
        // RK4 on (x, p); dp/dt = -u_x
        const double k1x = p, k1p = -sampler.sample(t, x).u_x;
        const double k2x = p + 0.5 * h * k1p,
                     k2p = -sampler.sample(t + 0.5 * h, x + 0.5 * h * k1x).u_x;
        const double k3x = p + 0.5 * h * k2p,
                     k3p = -sampler.sample(t + 0.5 * h, x + 0.5 * h * k2x).u_x;
        const double k4x = p + h * k3p, k4p = -sampler.sample(t + h, x + h * k3x).u_x;
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        t += h;
        if (!std::isfinite(x) || !std::isfinite(p))
            throw StepFailureError("flow: non-finite trajectory state");
        traj.samples.push_back(make_sample(sampler, t, x, p));
    }
    return traj;
}

double f_drift(const Trajectory& traj) {
    if (traj.samples.empty()) return 0.0;
    const double f0 = traj.samples.front().F;
    double drift = 0.0;
    for (const auto& s : traj.samples) drift = std::max(drift, std::abs(s.F - f0));
    return drift;
}

MNOrbit find_mn_orbit(const StateField& field, int m, int n, const OrbitOptions& opts) {
    if (m <= 0) throw Error("find_mn_orbit: m must be positive");
    FieldSampler sampler(field);
    double period = opts.time_period;
    if (period <= 0.0) {
        period = field.t_end() - field.t_begin();
        if (period <= 0.0) period = 1.0;
    }
    const PeriodicPotential pot{sampler, field.t_begin(), period};

    const int K = opts.nodes_per_unit_time * m;
    const double dt = static_cast<double>(m) / K;

    // straight-line initialization
    std::vector<double> x(K), g(K), x_prev(K), g_prev(K);
    for (int i = 0; i < K; ++i) x[i] = static_cast<double>(n) * i / K;

    const auto node = [&](const std::vector<double>& xs, int i) {
        // closed loop with shift n: x_{i+K} = x_i + n
        if (i < 0) return xs[i + K] - n;
        if (i >= K) return xs[i - K] + n;
        return xs[i];
    };

    double residual = std::numeric_limits<double>::infinity();
    const auto gradient = [&](const std::vector<double>& xs, std::vector<double>& out) {
        double res = 0.0;
        for (int i = 0; i < K; ++i) {
            const double lap = (node(xs, i + 1) - 2.0 * xs[i] + node(xs, i - 1)) / (dt * dt);
            const double el = lap + pot.u_x(i * dt, xs[i]);
            out[i] = -dt * el;
            res = std::max(res, std::abs(el));
        }
        return res;
    };

    residual = gradient(x, g);
    long iter = 0;
    const double gamma0 = 0.25 * dt; // stable against the 4/dt stiffness of the kinetic term
    double gamma = gamma0;
    while (residual > opts.tol) {
        if (++iter > opts.max_iterations)
            throw NoConvergence("find_mn_orbit: residual " + std::to_string(residual) +
                                " after iteration budget");
        x_prev = x;
        g_prev = g;
        for (int i = 0; i < K; ++i) x[i] -= gamma * g[i];
        residual = gradient(x, g);

        // Barzilai-Borwein step (BB1), safeguarded
        double sy = 0.0, ss = 0.0;
        for (int i = 0; i < K; ++i) {
            const double si = x[i] - x_prev[i];
            const double yi = g[i] - g_prev[i];
            ss += si * si;
            sy += si * yi;
        }
        gamma = sy > 0.0 ? std::clamp(ss / sy, 1e-6 * gamma0, 1e4 * gamma0) : gamma0;
    }

    MNOrbit orbit;
    orbit.m = m;
    orbit.n = n;
    orbit.residual = residual;
    orbit.iterations = iter;
    orbit.trajectory.samples.reserve(K + 1);
    for (int i = 0; i <= K; ++i) {
        const double t = i * dt;
        const double xi = node(x, i);
        const double p = (node(x, i + 1) - xi) / dt;
        TrajectorySample s;
        s.t = t;
        s.x = xi;
        s.p = p;
        s.H = 0.5 * p * p + pot.u(t, xi);
        s.F = p * p * p / 3.0 + pot.u(t, xi) * p; // v not part of the orbit problem
        orbit.trajectory.samples.push_back(s);
    }
    return orbit;
}

double VDecomposition::tilde(double t, double x) const {
    if (!field) throw Error("VDecomposition: no field attached");
    const FieldSampler sampler(*field);
    return sampler.sample(t, x).v - A * t - B * x - c0;
}

VDecomposition fit_v_decomposition(const StateField& field) {
    // normal equations for v ~ c0 + A t + B x over the frame-by-grid rectangle
    double s1 = 0, st = 0, sx = 0, stt = 0, sxx = 0, stx = 0;
    double sv = 0, svt = 0, svx = 0;
    for (const Frame& fr : field.frames) {
        for (int i = 0; i < field.n_x; ++i) {
            const double x = static_cast<double>(i) / field.n_x;
            const double v = fr.v[i] + field.winding_c * x;
            s1 += 1.0;
            st += fr.t;
            sx += x;
            stt += fr.t * fr.t;
            sxx += x * x;
            stx += fr.t * x;
            sv += v;
            svt += v * fr.t;
            svx += v * x;
        }
    }
    // 3x3 solve by Cramer's rule: [s1 st sx; st stt stx; sx stx sxx] [c0 A B]'
    const double a = s1, b = st, c = sx, d = st, e = stt, f = stx, gg = sx, h = stx, k = sxx;
    const double det = a * (e * k - f * h) - b * (d * k - f * gg) + c * (d * h - e * gg);
    if (std::abs(det) < 1e-14 * std::max({1.0, a * e * k}))
        throw Error("fit_v_decomposition: degenerate sample rectangle");
    const auto solve = [&](double r1, double r2, double r3, int col) {
        double m[3][3] = {{a, b, c}, {d, e, f}, {gg, h, k}};
        m[0][col] = r1;
        m[1][col] = r2;
        m[2][col] = r3;
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
               det;
    };
    VDecomposition dec;
    dec.c0 = solve(sv, svt, svx, 0);
    dec.A = solve(sv, svt, svx, 1);
    dec.B = solve(sv, svt, svx, 2);
    dec.field = &field;
    return dec;
}

ReductionReport reduction_check(const StateField& field, std::span<const MNOrbit> orbits) {
    const VDecomposition dec = fit_v_decomposition(field);
    ReductionReport rep;
    rep.A = dec.A;
    rep.B = dec.B;
    for (const MNOrbit& orbit : orbits) {
        const double mism = dec.A * orbit.m + dec.B * orbit.n;
        rep.mismatches.push_back(mism);
        rep.max_mismatch = std::max(rep.max_mismatch, std::abs(mism));
    }
    return rep;
}

} // namespace psys
