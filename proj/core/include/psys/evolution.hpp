#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psys/field.hpp"
#include "psys/spectral.hpp"

namespace psys {

enum class FilterMode { Auto, On, Off };

/// Per-step integrator options. The filter acts on modes above
/// cutoff * k_max; Auto enables it only when the initial frame is not purely
/// hyperbolic (elliptic zones are Hadamard-unstable and need the damping,
/// smooth hyperbolic runs are more accurate without it).
struct StepOptions {
    double cfl = 0.4;
    double lambda_floor = 0.1;
    bool filter_on = false;
    int filter_order = 16;
    double filter_cutoff = 2.0 / 3.0;
    double grad_max = 1e3;
    double tail_max = 1e-4;
};

/// Full scenario description for run().
struct SolverConfig {
    SigmaModel model;
    int n_x = 256;
    double t_max = 1.0;
    double winding_c = 0.0;
    std::vector<double> u0; ///< size n_x
    std::vector<double> v0; ///< periodic part, size n_x
    FilterMode filter = FilterMode::Auto;
    StepOptions step;
    bool stop_on_mixed = false;
    int frame_stride = 1;
    double res_max = 1e-3;
};

enum class StopReason { TimeLimit, BlowUpSuspected, EllipticOnset };

const char* to_string(StopReason r);

struct RunReport {
    StopReason stop = StopReason::TimeLimit;
    double t_stop = 0.0;
    std::optional<double> t_prime;     ///< first non-hyperbolic moment, if detected
    std::optional<double> blowup_time; ///< last valid time when BlowUpSuspected
    std::string blowup_monitor;        ///< "gradient", "tail" or "nonfinite"
    std::vector<std::pair<double, double>> grad_history; ///< (t, max|u_x|)
    std::vector<std::pair<double, double>> tail_history; ///< (t, tail fraction)
    double max_residual_smooth = 0.0; ///< residual scan over smooth stored frames
    long steps = 0;
    bool filter_enabled = false;
};

/// Method-of-lines integrator for u_t = -v_x, v_t = (sigma(u))_x on the unit
/// circle: trigonometric-collocation spatial derivatives, classical RK4 in
/// time, optional exponential high-mode filter. The periodic parts are
/// evolved; the winding constant enters v_x analytically, so the shift
/// condition holds exactly. A single Evolver advances one run (single
/// writer); completed frames are immutable.
class Evolver {
public:
    Evolver(SigmaModel model, int n_x);

    /// CFL time step from the current state: cfl * dx / max(s, floor) with
    /// s = max_j sqrt(|sigma'(u_j)|).
    double suggested_dt(std::span<const double> u, const StepOptions& opts) const;

    /// One RK4 step of the periodic parts. Throws StepRejected when the
    /// candidate violates the gradient/tail monitors or is non-finite.
    void advance(std::vector<double>& u, std::vector<double>& v, double winding_c,
                 double t, double dt, const StepOptions& opts);

    double max_grad(std::span<const double> u);
    /// max over components of ||top-third modes|| / (||u|| + ||v||).
    double tail_fraction(std::span<const double> u, std::span<const double> v);

    const SigmaModel& model() const { return model_; }
    int n_x() const { return n_; }

private:
    SigmaModel model_;
    int n_;
    Spectral spec_;
    std::vector<double> du_, dv_, sig_;
    std::vector<double> ku_[4], kv_[4], tu_, tv_;

    void rhs(std::span<const double> u, std::span<const double> v, double winding_c,
             std::vector<double>& out_du, std::vector<double>& out_dv);
};

/// Append one frame advanced by dt; value-returning form of Evolver::advance.
StateField step(const StateField& field, double dt, const StepOptions& opts = {});

/// Max-norm residuals of the two equations at a stored frame, time
/// derivatives by (possibly non-uniform) centered differences over the
/// neighbouring stored frames, space derivatives by collocation.
/// Throws InsufficientFrames if the frame has no predecessor or successor.
std::pair<double, double> residual(const StateField& field, int frame_index);

/// Evolve a scenario to t_max / blow-up / elliptic onset.
struct RunResult {
    StateField field;
    RunReport report;
};
RunResult run(const SolverConfig& config);

/// Earliest stored-frame time whose region mask contains a tag different
/// from the initial (single hyperbolic) tag; absent if none. Throws
/// InitialNotHyperbolic when frame 0 is not inside one hyperbolic component.
std::optional<double> first_nonhyperbolic(const StateField& field);

/// Per-hyperbolic-interval extrema of (r1)_x and (r2)_x on one frame.
struct IntervalSigns {
    int begin = 0;     ///< first grid index of the run
    int length = 0;    ///< number of points (wraps around the circle)
    RegionTag tag = RegionTag::Elliptic;
    double min_r1x = 0, max_r1x = 0;
    double min_r2x = 0, max_r2x = 0;
};
std::vector<IntervalSigns> monotone_invariant_check(const StateField& field, int frame_index);

} // namespace psys
