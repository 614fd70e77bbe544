#pragma once

#include <functional>
#include <string>
#include <vector>

#include "psys/field.hpp"

namespace psys {

/// Elliptic-zone weight: f(alpha) = f(beta) = 0, f > 0 inside, f'' < 0 on
/// the closed interval.
struct WeightFunction {
    double alpha = 0.0;
    double beta = 0.0;
    std::function<double(double)> f;
    std::function<double(double)> fp;
    std::function<double(double)> fpp;
};

/// The quadratic weight f(u) = (u - alpha)(beta - u); f'' = -2 everywhere,
/// which keeps the tolerance analysis independent of f. Throws
/// DegenerateInterval when alpha == beta.
WeightFunction default_weight(const SigmaModel& model);

/// E = Int_{S^1} f(u) dx by trapezoid on the collocation grid (spectrally
/// accurate for smooth periodic integrands). Throws OutsideEllipticBand when
/// the frame leaves [alpha, beta] beyond the band tolerance.
double energy(const StateField& field, int frame_index, const WeightFunction& w);

/// The identity route for the second derivative:
/// E_ddot = Int f''(u) ((v_x)^2 + sigma'(u) (u_x)^2) dx, with v_x including
/// the winding constant. Nonpositive whenever u stays in [alpha, beta].
double energy_ddot(const StateField& field, int frame_index, const WeightFunction& w);

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> E_ddot_integral;
    std::vector<double> E_ddot_fd; ///< NaN at the two end frames
};

struct ConcavityOptions {
    double tol_conc = 1e-10;
    double cross_abs = 1e-4;
    double cross_rel = 1e-2;
    double band_tol = 1e-8;
};

struct ConcavityVerdict {
    bool pass = true;
    std::string detail;
};

/// Trace E(t) with both second-derivative estimates over all frames and
/// check concavity: FAIL if the identity estimate exceeds tol_conc anywhere
/// or the two estimates disagree beyond max(cross_abs, cross_rel |fd|) at an
/// interior frame.
std::pair<EnergyTrace, ConcavityVerdict> concavity_monitor(const StateField& field,
                                                           const WeightFunction& w,
                                                           const ConcavityOptions& opts = {});

} // namespace psys
