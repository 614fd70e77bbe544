#include "psys/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psys {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::TimeLimit: return "time_limit";
        case StopReason::BlowUpSuspected: return "blowup_suspected";
        case StopReason::EllipticOnset: return "elliptic_onset";
    }
    return "?";
}

Evolver::Evolver(SigmaModel model, int n_x)
    : model_(std::move(model)), n_(n_x), spec_(n_x) {
    du_.resize(n_);
    dv_.resize(n_);
    sig_.resize(n_);
    for (auto& k : ku_) k.resize(n_);
    for (auto& k : kv_) k.resize(n_);
    tu_.resize(n_);
    tv_.resize(n_);
}

double Evolver::suggested_dt(std::span<const double> u, const StepOptions& opts) const {
    double s = 0.0;
    for (const double ui : u) s = std::max(s, std::sqrt(std::abs(model_.dsigma(ui))));
    return opts.cfl / (n_ * std::max(s, opts.lambda_floor));
}

void Evolver::rhs(std::span<const double> u, std::span<const double> v, double winding_c,
                  std::vector<double>& out_du, std::vector<double>& out_dv) {
    // u_t = -(v_p)_x - C,  (v_p)_t = (sigma(u))_x
    spec_.derivative(v, out_du);
    for (int i = 0; i < n_; ++i) out_du[i] = -out_du[i] - winding_c;
    for (int i = 0; i < n_; ++i) sig_[i] = model_.sigma(u[i]);
    spec_.derivative(sig_, out_dv);
}

void Evolver::advance(std::vector<double>& u, std::vector<double>& v, double winding_c,
                      double t, double dt, const StepOptions& opts) {
    const auto axpy = [this](const std::vector<double>& y, double a,
                             const std::vector<double>& k, std::vector<double>& out) {
        for (int i = 0; i < n_; ++i) out[i] = y[i] + a * k[i];
    };

    rhs(u, v, winding_c, ku_[0], kv_[0]);
    axpy(u, 0.5 * dt, ku_[0], tu_);
    axpy(v, 0.5 * dt, kv_[0], tv_);
    rhs(tu_, tv_, winding_c, ku_[1], kv_[1]);
    axpy(u, 0.5 * dt, ku_[1], tu_);
    axpy(v, 0.5 * dt, kv_[1], tv_);
    rhs(tu_, tv_, winding_c, ku_[2], kv_[2]);
    axpy(u, dt, ku_[2], tu_);
    axpy(v, dt, kv_[2], tv_);
    rhs(tu_, tv_, winding_c, ku_[3], kv_[3]);

    for (int i = 0; i < n_; ++i) {
        tu_[i] = u[i] + dt / 6.0 * (ku_[0][i] + 2 * ku_[1][i] + 2 * ku_[2][i] + ku_[3][i]);
        tv_[i] = v[i] + dt / 6.0 * (kv_[0][i] + 2 * kv_[1][i] + 2 * kv_[2][i] + kv_[3][i]);
    }
    if (opts.filter_on) {
        spec_.filter(tu_, opts.filter_cutoff, opts.filter_order);
        spec_.filter(tv_, opts.filter_cutoff, opts.filter_order);
    }

    for (int i = 0; i < n_; ++i)
        if (!std::isfinite(tu_[i]) || !std::isfinite(tv_[i]))
            throw StepRejected("advance: non-finite candidate state", t);
    const double g = max_grad(tu_);
    if (g > opts.grad_max)
        throw StepRejected("advance: max|u_x| = " + std::to_string(g) + " exceeds grad_max", t);
    const double tail = tail_fraction(tu_, tv_);
    if (tail > opts.tail_max)
        throw StepRejected("advance: spectral tail fraction " + std::to_string(tail) +
                           " exceeds tail_max", t);

    u.swap(tu_);
    v.swap(tv_);
}

double Evolver::max_grad(std::span<const double> u) {
    spec_.derivative(u, du_);
    double g = 0.0;
    for (const double d : du_) g = std::max(g, std::abs(d));
    return g;
}

double Evolver::tail_fraction(std::span<const double> u, std::span<const double> v) {
    const auto nu = spec_.tail_norms(u, 2.0 / 3.0);
    const auto nv = spec_.tail_norms(v, 2.0 / 3.0);
    const double scale = std::max(nu.total + nv.total, 1e-12);
    return std::max(nu.high, nv.high) / scale;
}

StateField step(const StateField& field, double dt, const StepOptions& opts) {
    if (field.frames.empty()) throw Error("step: field has no frames");
    StateField out = field;
    Evolver ev(field.model, field.n_x);
    const Frame& last = out.frames.back();
    if (ev.tail_fraction(last.u, last.v) > opts.tail_max)
        throw StepRejected("step: latest frame already violates the tail monitor", last.t);
    std::vector<double> u = last.u, v = last.v;
    ev.advance(u, v, field.winding_c, last.t, dt, opts);
    out.frames.push_back({last.t + dt, std::move(u), std::move(v)});
    return out;
}

std::pair<double, double> residual(const StateField& field, int frame_index) {
    const auto& fr = field.frames;
    if (frame_index <= 0 || frame_index + 1 >= static_cast<int>(fr.size()))
        throw InsufficientFrames("residual: frame needs a predecessor and a successor");
    const Frame& a = fr[frame_index - 1];
    const Frame& b = fr[frame_index];
    const Frame& c = fr[frame_index + 1];
    const double hm = b.t - a.t, hp = c.t - b.t;
    const double cm = -hp / (hm * (hm + hp));
    const double c0 = (hp - hm) / (hm * hp);
    const double cp = hm / (hp * (hm + hp));

    const int n = field.n_x;
    Spectral spec(n);
    std::vector<double> vx(n), sx(n), sig(n);
    spec.derivative(b.v, vx);
    for (int i = 0; i < n; ++i) sig[i] = field.model.sigma(b.u[i]);
    spec.derivative(sig, sx);

    double res_u = 0.0, res_v = 0.0;
    for (int i = 0; i < n; ++i) {
        const double ut = cm * a.u[i] + c0 * b.u[i] + cp * c.u[i];
        const double vt = cm * a.v[i] + c0 * b.v[i] + cp * c.v[i];
        res_u = std::max(res_u, std::abs(ut + vx[i] + field.winding_c));
        res_v = std::max(res_v, std::abs(vt - sx[i]));
    }
    return {res_u, res_v};
}

RunResult run(const SolverConfig& config) {
    if (static_cast<int>(config.u0.size()) != config.n_x ||
        static_cast<int>(config.v0.size()) != config.n_x)
        throw Error("run: u0/v0 size must equal n_x");

    RunResult out;
    out.field.model = config.model;
    out.field.n_x = config.n_x;
    out.field.winding_c = config.winding_c;

    RunReport& rep = out.report;
    Evolver ev(config.model, config.n_x);

    const RegionMask mask0 = classify_frame(config.model, config.u0);
    const bool pure_hyperbolic =
        !mask0.contains(RegionTag::Elliptic) && !mask0.contains(RegionTag::Boundary);
    rep.filter_enabled = config.filter == FilterMode::On ||
                         (config.filter == FilterMode::Auto && !pure_hyperbolic);
    StepOptions opts = config.step;
    opts.filter_on = rep.filter_enabled;

    const bool track_prime = mask0.all_hyperbolic_single_side();
    const RegionTag tag0 = mask0.tags.empty() ? RegionTag::Elliptic : mask0.tags[0];

    std::vector<double> u = config.u0, v = config.v0;
    double t = 0.0;
    const int stride = std::max(1, config.frame_stride);

    const auto record_monitors = [&](double at) {
        rep.grad_history.emplace_back(at, ev.max_grad(u));
        rep.tail_history.emplace_back(at, ev.tail_fraction(u, v));
    };
    const auto store_frame = [&](double at) {
        out.field.frames.push_back({at, u, v});
    };

    store_frame(0.0);
    record_monitors(0.0);
    rep.stop = StopReason::TimeLimit;

    if (ev.tail_fraction(u, v) > opts.tail_max) {
        rep.stop = StopReason::BlowUpSuspected;
        rep.blowup_time = 0.0;
        rep.blowup_monitor = "tail";
        rep.t_stop = 0.0;
        return out;
    }

    if (config.stop_on_mixed && !track_prime) {
        rep.t_prime = 0.0;
        rep.stop = StopReason::EllipticOnset;
        rep.t_stop = 0.0;
        return out;
    }

    long since_store = 0;
    while (t < config.t_max) {
        const double dt = std::min(ev.suggested_dt(u, opts), config.t_max - t);
        try {
            ev.advance(u, v, config.winding_c, t, dt, opts);
        } catch (const StepRejected& e) {
            rep.stop = StopReason::BlowUpSuspected;
            rep.blowup_time = e.last_valid_time;
            rep.blowup_monitor =
                std::string(e.what()).find("tail") != std::string::npos  ? "tail"
                : std::string(e.what()).find("finite") != std::string::npos ? "nonfinite"
                                                                            : "gradient";
            break;
        }
        t += dt;
        ++rep.steps;
        ++since_store;
        record_monitors(t);

        bool stored = false;
        if (since_store >= stride || t >= config.t_max) {
            store_frame(t);
            since_store = 0;
            stored = true;
        }

        if (track_prime && !rep.t_prime) {
            const RegionMask m = classify_frame(config.model, u);
            bool mixed = false;
            for (const RegionTag tg : m.tags)
                if (tg != tag0) { mixed = true; break; }
            if (mixed) {
                rep.t_prime = t;
                if (config.stop_on_mixed) {
                    if (!stored) store_frame(t);
                    rep.stop = StopReason::EllipticOnset;
                    break;
                }
            }
        }
    }

    if (out.field.frames.back().t < t) out.field.frames.push_back({t, u, v});
    rep.t_stop = t;

    // Residual scan over interior stored frames while the field is still
    // smooth; near blow-up the centered-in-time stencil error dominates and
    // the number stops meaning anything.
    const double g0 = std::max(rep.grad_history.front().second, 1e-3);
    const int nf = static_cast<int>(out.field.frames.size());
    const int scan_stride = std::max(1, nf / 64);
    for (int i = 1; i + 1 < nf; i += scan_stride) {
        if (ev.max_grad(out.field.frames[i].u) > 8.0 * g0) continue;
        const auto [ru, rv] = residual(out.field, i);
        rep.max_residual_smooth = std::max({rep.max_residual_smooth, ru, rv});
    }
    return out;
}

std::optional<double> first_nonhyperbolic(const StateField& field) {
    if (field.frames.empty()) throw Error("first_nonhyperbolic: empty field");
    const RegionMask m0 = classify_frame(field.model, field.frames.front().u);
    if (!m0.all_hyperbolic_single_side())
        throw InitialNotHyperbolic(
            "first_nonhyperbolic: initial frame not inside one hyperbolic component");
    const RegionTag tag0 = m0.tags[0];
    for (const Frame& fr : field.frames) {
        for (const double ui : fr.u)
            if (classify(field.model, ui) != tag0) return fr.t;
    }
    return std::nullopt;
}

std::vector<IntervalSigns> monotone_invariant_check(const StateField& field, int frame_index) {
    const Frame& fr = field.frame(frame_index);
    const int n = field.n_x;
    Spectral spec(n);
    std::vector<double> ux(n), vx(n);
    spec.derivative(fr.u, ux);
    spec.derivative(fr.v, vx);
    for (double& w : vx) w += field.winding_c;

    const RegionMask mask = classify_frame(field.model, fr.u);

    std::vector<IntervalSigns> out;
    std::vector<bool> seen(mask.n_components, false);
    for (int i = 0; i < n; ++i) {
        const int comp = mask.component[i];
        if (seen[comp] || !is_hyperbolic(mask.tags[i])) continue;
        seen[comp] = true;
        IntervalSigns rep;
        rep.begin = i;
        rep.tag = mask.tags[i];
        rep.min_r1x = rep.min_r2x = std::numeric_limits<double>::infinity();
        rep.max_r1x = rep.max_r2x = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (mask.component[j] != comp) continue;
            ++rep.length;
            const double s = std::sqrt(std::max(-field.model.dsigma(fr.u[j]), 0.0));
            const double qp = mask.tags[j] == RegionTag::HyperbolicAlpha ? -s : s;
            const double r1x = vx[j] - qp * ux[j];
            const double r2x = vx[j] + qp * ux[j];
            rep.min_r1x = std::min(rep.min_r1x, r1x);
            rep.max_r1x = std::max(rep.max_r1x, r1x);
            rep.min_r2x = std::min(rep.min_r2x, r2x);
            rep.max_r2x = std::max(rep.max_r2x, r2x);
        }
        out.push_back(rep);
    }
    return out;
}

} // namespace psys
