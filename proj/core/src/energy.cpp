#include "psys/energy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "psys/spectral.hpp"

namespace psys {

WeightFunction default_weight(const SigmaModel& model) {
    if (model.alpha == model.beta)
        throw DegenerateInterval("default_weight: alpha == beta (no elliptic interval)");
    WeightFunction w;
    w.alpha = model.alpha;
    w.beta = model.beta;
    const double a = model.alpha, b = model.beta;
    w.f = [a, b](double u) { return (u - a) * (b - u); };
    w.fp = [a, b](double u) { return a + b - 2.0 * u; };
    w.fpp = [](double) { return -2.0; };
    return w;
}

namespace {

void check_band(const Frame& fr, const WeightFunction& w, double band_tol, const char* who) {
    std::vector<std::pair<int, double>> bad;
    for (int i = 0; i < static_cast<int>(fr.u.size()); ++i) {
        if (fr.u[i] < w.alpha - band_tol || fr.u[i] > w.beta + band_tol) {
            bad.emplace_back(i, fr.u[i]);
            if (bad.size() >= 8) break;
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << who << ": frame leaves [alpha, beta] at " << bad.size()
           << "+ points, first u=" << bad.front().second << " at index " << bad.front().first;
        throw OutsideEllipticBand(os.str(), std::move(bad));
    }
}

} // namespace

double energy(const StateField& field, int frame_index, const WeightFunction& w) {
    const Frame& fr = field.frame(frame_index);
    check_band(fr, w, 1e-8, "energy");
    double sum = 0.0;
    for (const double u : fr.u) sum += w.f(u);
    return sum / field.n_x;
}

double energy_ddot(const StateField& field, int frame_index, const WeightFunction& w) {
    const Frame& fr = field.frame(frame_index);
    check_band(fr, w, 1e-8, "energy_ddot");
    const int n = field.n_x;
    Spectral spec(n);
    std::vector<double> ux(n), vx(n);
    spec.derivative(fr.u, ux);
    spec.derivative(fr.v, vx);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double vxf = vx[i] + field.winding_c;
        sum += w.fpp(fr.u[i]) * (vxf * vxf + field.model.dsigma(fr.u[i]) * ux[i] * ux[i]);
    }
    return sum / n;
}

std::pair<EnergyTrace, ConcavityVerdict> concavity_monitor(const StateField& field,
                                                           const WeightFunction& w,
                                                           const ConcavityOptions& opts) {
    const int nf = static_cast<int>(field.frames.size());
    EnergyTrace trace;
    trace.times.resize(nf);
    trace.E.resize(nf);
    trace.E_ddot_integral.resize(nf);
    trace.E_ddot_fd.assign(nf, std::numeric_limits<double>::quiet_NaN());

    for (int i = 0; i < nf; ++i) {
        trace.times[i] = field.frames[i].t;
        trace.E[i] = energy(field, i, w);
        trace.E_ddot_integral[i] = energy_ddot(field, i, w);
    }
    for (int i = 1; i + 1 < nf; ++i) {
        const double hm = trace.times[i] - trace.times[i - 1];
        const double hp = trace.times[i + 1] - trace.times[i];
        trace.E_ddot_fd[i] = 2.0 *
                             ((trace.E[i + 1] - trace.E[i]) / hp -
                              (trace.E[i] - trace.E[i - 1]) / hm) /
                             (hm + hp);
    }

    ConcavityVerdict verdict;
    for (int i = 0; i < nf; ++i) {
        if (trace.E_ddot_integral[i] > opts.tol_conc) {
            verdict.pass = false;
            std::ostringstream os;
            os << "identity estimate " << trace.E_ddot_integral[i] << " > tol at t="
               << trace.times[i];
            verdict.detail = os.str();
            return {trace, verdict};
        }
    }
    for (int i = 1; i + 1 < nf; ++i) {
        const double fd = trace.E_ddot_fd[i];
        const double gap = std::abs(trace.E_ddot_integral[i] - fd);
        if (gap > std::max(opts.cross_abs, opts.cross_rel * std::abs(fd))) {
            verdict.pass = false;
            std::ostringstream os;
            os << "estimates disagree by " << gap << " at t=" << trace.times[i]
               << " (identity " << trace.E_ddot_integral[i] << ", fd " << fd << ")";
            verdict.detail = os.str();
            return {trace, verdict};
        }
    }
    verdict.detail = "E positive-concave on the monitored span";
    return {trace, verdict};
}

} // namespace psys
