#include "psys/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace psys {

const char* to_string(Direction d) {
    return d == Direction::Forward ? "forward" : "backward";
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::BoundaryHit: return "boundary_hit";
        case Termination::FieldEdge: return "field_edge";
        case Termination::BlowUp: return "blowup";
        case Termination::StepFailure: return "step_failure";
    }
    return "?";
}

const char* to_string(CharClass c) {
    switch (c) {
        case CharClass::APlus: return "A+";
        case CharClass::AMinus: return "A-";
        case CharClass::BPlus: return "B+";
        case CharClass::BMinus: return "B-";
        case CharClass::Undetermined: return "undetermined";
    }
    return "?";
}

double riccati_coefficient(const SigmaModel& model, double u) {
    const RegionTag tag = classify(model, u);
    if (tag == RegionTag::Boundary)
        throw BoundaryDegeneracy("riccati_coefficient: u=" + std::to_string(u) +
                                 " inside boundary band");
    if (tag == RegionTag::Elliptic)
        throw WrongSide("riccati_coefficient: u=" + std::to_string(u) + " is elliptic");
    return -model.ddsigma(u) / (4.0 * std::pow(-model.dsigma(u), 1.25));
}

std::optional<double> riccati_exact(double z0, double k_int, double eps_den) {
    const double den = 1.0 + z0 * k_int;
    if (std::abs(den) <= eps_den) return std::nullopt;
    return z0 / den;
}

double z_variable(const QTransform& qt, double r_x, double u) {
    const RegionTag tag = classify(qt.model(), u);
    if (tag == RegionTag::Boundary)
        throw BoundaryDegeneracy("z_variable: u=" + std::to_string(u) + " inside boundary band");
    const bool on_side = (qt.side() == Side::AlphaSide && tag == RegionTag::HyperbolicAlpha) ||
                         (qt.side() == Side::BetaSide && tag == RegionTag::HyperbolicBeta);
    if (!on_side)
        throw WrongSide("z_variable: u=" + std::to_string(u) + " not on the transform's side");
    return r_x * std::pow(-qt.model().dsigma(u), 0.25);
}

namespace {

struct TraceContext {
    const StateField* field;
    FieldSampler sampler;
    Side side;
    RegionTag side_tag;
    double fam_sign;  // +1 First, -1 Second
    double band_tol;
    int r_index;

    explicit TraceContext(const StateField& f) : field(&f), sampler(f) {}

    bool strictly_on_side(double u) const {
        const double dp = field->model.dsigma(u);
        if (!(dp < -band_tol)) return false;
        return classify(field->model, u) == side_tag;
    }

    double lambda(double u) const {
        return fam_sign * std::sqrt(std::max(-field->model.dsigma(u), 0.0));
    }
};

double max_speed_estimate(const StateField& field) {
    const int nf = static_cast<int>(field.frames.size());
    const int stride = std::max(1, nf / 32);
    double s = 0.0;
    for (int i = 0; i < nf; i += stride)
        for (const double u : field.frames[i].u)
            s = std::max(s, std::sqrt(std::abs(field.model.dsigma(u))));
    for (const double u : field.frames.back().u)
        s = std::max(s, std::sqrt(std::abs(field.model.dsigma(u))));
    return s;
}

double min_frame_spacing(const StateField& field) {
    double h = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < field.frames.size(); ++i)
        h = std::min(h, field.frames[i].t - field.frames[i - 1].t);
    return h;
}

/// z0 by centered differences of the family's Riemann invariant on the grid
/// of the frame nearest t0, cubically interpolated to the seed.
double seed_z0(const TraceContext& ctx, double t0, double x0, double u_seed) {
    const StateField& f = *ctx.field;
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(f.frames.size()); ++i) {
        const double d = std::abs(f.frames[i].t - t0);
        if (d < best) { best = d; nearest = i; }
    }
    const QTransform qt(f.model, ctx.side);
    const std::vector<double> rx = riemann_gradient_grid(f, nearest, ctx.r_index, qt);
    const double rx0 = catmull_rom_value(rx, x0);
    return rx0 * std::pow(-f.model.dsigma(u_seed), 0.25);
}

} // namespace

CharacteristicPath trace(const StateField& field, double t0, double x0,
                         Family family, Direction direction, const TraceOptions& opts) {
    TraceContext ctx(field);
    ctx.band_tol = opts.band_tol;
    ctx.fam_sign = family == Family::First ? 1.0 : -1.0;

    const double u_seed = ctx.sampler.u(t0, x0);
    const RegionTag seed_tag = classify(field.model, u_seed);
    if (!is_hyperbolic(seed_tag)) {
        std::ostringstream os;
        os << "trace: seed (t=" << t0 << ", x=" << x0 << ") has u=" << u_seed
           << " classified " << to_string(seed_tag);
        throw StartNotHyperbolic(os.str());
    }
    ctx.side = seed_tag == RegionTag::HyperbolicAlpha ? Side::AlphaSide : Side::BetaSide;
    ctx.side_tag = seed_tag;
    ctx.r_index = riemann_index_for(ctx.side, family);

    CharacteristicPath path;
    path.family = family;
    path.direction = direction;
    path.side = ctx.side;
    path.riccati.t0 = t0;
    path.riccati.z0 = seed_z0(ctx, t0, x0, u_seed);

    const double dir = direction == Direction::Forward ? 1.0 : -1.0;
    const double t_edge = direction == Direction::Forward ? field.t_end() : field.t_begin();
    const double dt_base =
        opts.dt_override > 0.0
            ? opts.dt_override
            : std::min(min_frame_spacing(field),
                       0.25 * field.dx() / std::max(max_speed_estimate(field), 1e-12));

    double t = t0, x = x0, K = 0.0;

    const auto push_sample = [&](double at, double ax, double aK) {
        const double u = ctx.sampler.u(at, ax);
        PathSample s;
        s.t = at;
        s.x = ax;
        s.u = u;
        s.lambda = ctx.lambda(u);
        s.k = riccati_coefficient(field.model, u);
        s.z = ctx.sampler.riemann_gradient(at, ax, ctx.r_index) *
              std::pow(-field.model.dsigma(u), 0.25);
        path.samples.push_back(s);
        path.riccati.k_integral.emplace_back(at, aK);
    };

    const auto finish = [&](Termination term, double te, double xe) {
        path.termination = term;
        path.t_end = te;
        path.x_end = xe;
        return path;
    };

    push_sample(t0, x0, 0.0);

    long steps = 0;
    double den_prev = 1.0;
    while (true) {
        const double remaining = std::abs(t_edge - t);
        if (remaining <= 1e-12 * (1.0 + std::abs(t_edge)))
            return finish(Termination::FieldEdge, t, x);
        if (++steps > opts.max_steps)
            return finish(Termination::StepFailure, t, x);

        double dt_try = std::min(dt_base, remaining);
        bool accepted = false;
        double xn = x, Kn = K;
        while (!accepted) {
            // RK4 on (x, K); every stage must stay strictly on the component.
            const double h = dir * dt_try;
            bool ok = true;
            double kx[4], kk[4];
            double sx = x;
            for (int s = 0; s < 4 && ok; ++s) {
                static constexpr double c[4] = {0.0, 0.5, 0.5, 1.0};
                sx = s == 0 ? x : x + c[s] * h * kx[s - 1];
                const double st = t + c[s] * h;
                const double u = ctx.sampler.u(st, sx);
                if (!std::isfinite(u) || !ctx.strictly_on_side(u)) { ok = false; break; }
                kx[s] = ctx.lambda(u);
                kk[s] = riccati_coefficient(field.model, u);
            }
            if (ok) {
                xn = x + h / 6.0 * (kx[0] + 2 * kx[1] + 2 * kx[2] + kx[3]);
                Kn = K + h / 6.0 * (kk[0] + 2 * kk[1] + 2 * kk[2] + kk[3]);
                const double ue = ctx.sampler.u(t + h, xn);
                ok = std::isfinite(xn) && std::isfinite(Kn) && std::isfinite(ue) &&
                     ctx.strictly_on_side(ue);
            }
            if (ok) {
                accepted = true;
            } else {
                dt_try *= 0.5;
                if (dt_try < opts.dt_min)
                    return finish(Termination::BoundaryHit, t, x);
            }
        }

        t += dir * dt_try;
        x = xn;
        K = Kn;
        push_sample(t, x, K);

        if (opts.stop_on_blowup && path.riccati.z0 != 0.0) {
            const double den = 1.0 + path.riccati.z0 * K;
            if (std::abs(den) <= opts.eps_den || den * den_prev < 0.0) {
                // linear interpolation of the crossing inside the last step
                const double t_prev = t - dir * dt_try;
                const double frac = den_prev / (den_prev - den);
                const double ts = t_prev + frac * (t - t_prev);
                path.t_star = ts;
                path.riccati.predicted_blowup = ts;
                return finish(Termination::BlowUp, t, x);
            }
            den_prev = den;
        }
    }
}

BlowupPrediction predict_blowup_detailed(const StateField& field, double t0, double x0,
                                         Family family, const TraceOptions& opts) {
    TraceOptions o = opts;
    o.stop_on_blowup = true;
    BlowupPrediction pred;
    pred.path = trace(field, t0, x0, family, Direction::Forward, o);
    RiccatiRecord& rec = pred.path.riccati;

    if (pred.path.termination == Termination::BlowUp) {
        pred.t_star = pred.path.t_star;
        rec.predicted_blowup = pred.t_star;
        return pred;
    }
    if (rec.z0 == 0.0 || pred.path.samples.size() < 2) return pred;

    // No crossing inside the span. If the denominator is still shrinking at
    // the field edge, extrapolate the (locally linear) denominator with the
    // edge rate z0 * k.
    if (pred.path.termination == Termination::FieldEdge) {
        const auto& [t_last, K_last] = rec.k_integral.back();
        const double den = 1.0 + rec.z0 * K_last;
        const double rate = rec.z0 * pred.path.samples.back().k;
        if (den > 0.0 && rate < 0.0) {
            pred.t_star = t_last + den / (-rate);
            pred.extrapolated = true;
            rec.predicted_blowup = pred.t_star;
            rec.extrapolated = true;
        }
    }
    return pred;
}

std::optional<double> predict_blowup(const StateField& field, double t0, double x0,
                                     Family family, const TraceOptions& opts) {
    return predict_blowup_detailed(field, t0, x0, family, opts).t_star;
}

namespace {

double u_at_time(const CharacteristicPath& path, double t) {
    const auto& s = path.samples;
    if (s.size() < 2) return s.empty() ? 0.0 : s.front().u;
    const bool fwd = s.back().t >= s.front().t;
    // samples are monotone in t along the trace direction
    for (size_t i = 1; i < s.size(); ++i) {
        const bool past = fwd ? s[i].t >= t : s[i].t <= t;
        if (past || i + 1 == s.size()) {
            const double span = s[i].t - s[i - 1].t;
            const double th = span != 0.0 ? std::clamp((t - s[i - 1].t) / span, 0.0, 1.0) : 0.0;
            return (1.0 - th) * s[i - 1].u + th * s[i].u;
        }
    }
    return s.back().u;
}

} // namespace

CharClass classify_path(const CharacteristicPath& path, double horizon,
                        double growth_threshold, const ClassifyOptions& opts) {
    if (path.samples.size() < 2) return CharClass::Undetermined;
    const bool fwd = path.direction == Direction::Forward;

    if (path.termination == Termination::BoundaryHit)
        return fwd ? CharClass::APlus : CharClass::AMinus;
    if (path.termination != Termination::FieldEdge) return CharClass::Undetermined;

    const double t0 = path.riccati.t0;
    const double span = std::abs(path.t_end - t0);
    const double target = std::abs(horizon - t0);
    if (span + opts.horizon_tol * (1.0 + target) < target) return CharClass::Undetermined;

    const double w = opts.window_fraction * span;
    const double t_window = path.t_end - (fwd ? w : -w);
    const double growth = -path.samples.back().u + u_at_time(path, t_window);
    if (growth >= growth_threshold) return fwd ? CharClass::BPlus : CharClass::BMinus;
    return fwd ? CharClass::APlus : CharClass::AMinus;
}

namespace {

/// Piecewise-linear x(t) lookup on a path's samples.
double x_at_time(const CharacteristicPath& path, double t) {
    const auto& s = path.samples;
    for (size_t i = 1; i < s.size(); ++i) {
        if (s[i].t >= t || i + 1 == s.size()) {
            const double span = s[i].t - s[i - 1].t;
            const double th = span != 0.0 ? std::clamp((t - s[i - 1].t) / span, 0.0, 1.0) : 0.0;
            return (1.0 - th) * s[i - 1].x + th * s[i].x;
        }
    }
    return s.back().x;
}

} // namespace

Lemma2Report lemma2_monitor(const StateField& field, double horizon,
                            const Lemma2Options& opts) {
    Lemma2Report rep;
    const double t0 = field.t_begin();
    const double t1 = field.t_end();
    const double fwd_horizon = std::min(t0 + horizon, t1);
    const double bwd_horizon = std::max(t1 - horizon, t0);

    const CharacteristicPath* best[2] = {nullptr, nullptr}; // longest forward per family
    std::vector<CharacteristicPath> kept;
    kept.reserve(4 * opts.seeds_per_family);

    for (const Family fam : {Family::First, Family::Second}) {
        for (const Direction dir : {Direction::Forward, Direction::Backward}) {
            for (int s = 0; s < opts.seeds_per_family; ++s) {
                const double xs = (s + 0.5) / opts.seeds_per_family;
                const double ts = dir == Direction::Forward ? t0 : t1;
                CharacteristicPath p;
                try {
                    p = trace(field, ts, xs, fam, dir, opts.trace);
                } catch (const StartNotHyperbolic&) {
                    ++rep.skipped_seeds;
                    continue;
                }
                const double hz = dir == Direction::Forward ? fwd_horizon : bwd_horizon;
                const CharClass cls =
                    classify_path(p, hz, opts.growth_threshold, opts.classify);
                rep.paths.push_back({fam, dir, xs, p.termination, cls});
                ++rep.count[fam == Family::First ? 0 : 1][static_cast<int>(cls)];
                kept.push_back(std::move(p));
            }
        }
    }

    bool b_fwd[2] = {false, false}, b_bwd[2] = {false, false};
    for (const auto& v : rep.paths) {
        const int fi = v.family == Family::First ? 0 : 1;
        if (v.cls == CharClass::BPlus) b_fwd[fi] = true;
        if (v.cls == CharClass::BMinus) b_bwd[fi] = true;
    }
    rep.both_b_forward = b_fwd[0] && b_fwd[1];
    rep.both_b_backward = b_bwd[0] && b_bwd[1];

    // Intersection sequence: the longest forward path of each family.
    for (const auto& p : kept) {
        if (p.direction != Direction::Forward || p.samples.size() < 2) continue;
        const int fi = p.family == Family::First ? 0 : 1;
        if (!best[fi] || p.t_end > best[fi]->t_end) best[fi] = &p;
    }
    if (best[0] && best[1]) {
        const CharacteristicPath& g1 = *best[0];
        const CharacteristicPath& g2 = *best[1];
        const double lo = std::max(g1.samples.front().t, g2.samples.front().t);
        const double hi = std::min(g1.t_end, g2.t_end);
        if (hi > lo) {
            const auto diff = [&](double t) { return x_at_time(g1, t) - x_at_time(g2, t); };
            const double d_lo = diff(lo), d_hi = diff(hi);
            const int k_min = static_cast<int>(std::ceil(d_lo));
            const int k_max = static_cast<int>(std::floor(d_hi));
            FieldSampler sampler(field);
            QTransform qt(field.model, g1.side);
            int taken = 0;
            for (int k = k_min; k <= k_max && taken < opts.max_intersections; ++k, ++taken) {
                // diff is monotone increasing (x1' = +lambda > 0 > x2')
                double a = lo, b = hi;
                for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
                    const double m = 0.5 * (a + b);
                    (diff(m) - k < 0.0 ? a : b) = m;
                }
                const double tk = 0.5 * (a + b);
                const double xk = x_at_time(g1, tk);
                const double u = sampler.u(tk, xk);
                if (!is_hyperbolic(classify(field.model, u))) continue;
                rep.intersections.push_back({k, tk, xk, 2.0 * qt.q(u)});
            }
        }
    }
    return rep;
}

} // namespace psys
