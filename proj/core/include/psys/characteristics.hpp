#pragma once

#include <optional>
#include <vector>

#include "psys/field.hpp"

namespace psys {

enum class Direction { Forward, Backward };

enum class Termination {
    BoundaryHit, ///< step halving bottomed out against the |sigma'| band
    FieldEdge,   ///< reached the field's stored time horizon
    BlowUp,      ///< Riccati denominator crossed zero (stop_on_blowup traces)
    StepFailure  ///< non-finite data or iteration guard
};

const char* to_string(Direction d);
const char* to_string(Termination t);

struct PathSample {
    double t;
    double x;      ///< universal-cover coordinate (unwrapped)
    double u;
    double lambda; ///< family's characteristic speed at the sample
    double z;      ///< field-sampled r_x (-sigma')^{1/4} for the family's invariant
    double k;      ///< Riccati coefficient at the sample
};

/// ODE-side record of the Riccati data accumulated along a path: the seed
/// value z0 (grid centered differences of the family's Riemann invariant at
/// the starting frame, weighted), and Int_{t0}^{t} k ds accumulated by the
/// same RK4 stepping as the tracer.
struct RiccatiRecord {
    double z0 = 0.0;
    double t0 = 0.0;
    std::vector<std::pair<double, double>> k_integral; ///< (t, integral)
    std::optional<double> predicted_blowup;            ///< zero of 1 + z0 * integral
    bool extrapolated = false; ///< root lay past the field edge, linearly extrapolated
};

struct CharacteristicPath {
    Family family = Family::First;
    Direction direction = Direction::Forward;
    Side side = Side::AlphaSide;
    std::vector<PathSample> samples;
    Termination termination = Termination::FieldEdge;
    double t_end = 0.0;
    double x_end = 0.0;
    std::optional<double> t_star; ///< set for BlowUp termination
    RiccatiRecord riccati;
};

struct TraceOptions {
    double dt_override = 0.0; ///< 0: min(frame spacing, 0.25 dx / max|lambda|)
    double band_tol = kEpsPar;
    double dt_min = 1e-8;
    bool stop_on_blowup = false;
    double eps_den = 1e-8;
    long max_steps = 2'000'000;
};

/// Integrate dx/dt = +/- sqrt(-sigma'(u(t,x))) from (t0, x0) through the
/// sampled field until the boundary band, the field edge, or failure.
/// A step is accepted only when every RK4 stage stays strictly inside the
/// seed's hyperbolic component; otherwise the step is halved down to dt_min
/// before declaring BoundaryHit. Throws StartNotHyperbolic for a bad seed.
/// Read-only over the field; any number of traces may run concurrently.
CharacteristicPath trace(const StateField& field, double t0, double x0,
                         Family family, Direction direction,
                         const TraceOptions& opts = {});

/// k = -sigma''(u) / (4 (-sigma'(u))^{5/4}). Throws BoundaryDegeneracy
/// inside the band, WrongSide at elliptic points.
double riccati_coefficient(const SigmaModel& model, double u);

/// Exact Riccati solution z0 / (1 + z0 * k_int); nullopt signals blow-up
/// (|denominator| <= eps_den). Blow-up is a value here, not an error.
std::optional<double> riccati_exact(double z0, double k_int, double eps_den = 1e-8);

/// z = r_x (-sigma'(u))^{1/4}. Throws BoundaryDegeneracy in the band,
/// WrongSide off the transform's component.
double z_variable(const QTransform& qt, double r_x, double u);

struct BlowupPrediction {
    std::optional<double> t_star;
    bool extrapolated = false;
    CharacteristicPath path;
};

/// First t* past t0 where 1 + z0 * Int k vanishes along the traced
/// characteristic. If the trace reaches the field edge with the denominator
/// still positive but shrinking, the root is linearly extrapolated with the
/// edge value of k and flagged.
BlowupPrediction predict_blowup_detailed(const StateField& field, double t0, double x0,
                                         Family family, const TraceOptions& opts = {});
std::optional<double> predict_blowup(const StateField& field, double t0, double x0,
                                     Family family, const TraceOptions& opts = {});

enum class CharClass { APlus, AMinus, BPlus, BMinus, Undetermined };

const char* to_string(CharClass c);

struct ClassifyOptions {
    double window_fraction = 0.5; ///< trailing window as a fraction of the span
    double horizon_tol = 1e-9;
};

/// B_+/- iff the path reached the horizon and -u grew by at least
/// growth_threshold over the trailing window; A_+/- on BoundaryHit or
/// bounded -u; Undetermined when the span is too short to tell. The paper's
/// classes are asymptotic, so the horizon verdict is inherently numerical.
CharClass classify_path(const CharacteristicPath& path, double horizon,
                        double growth_threshold, const ClassifyOptions& opts = {});

struct PathVerdict {
    Family family;
    Direction direction;
    double seed_x;
    Termination termination;
    CharClass cls;
};

struct Lemma2Intersection {
    int shift;  ///< integer x-shift applied to the second-family path
    double t_k; ///< time of the intersection P_k
    double x_k;
    double gap; ///< r2(P_k) - r1(P_k) = 2 q(u)
};

struct Lemma2Report {
    std::vector<PathVerdict> paths;
    int count[2][5] = {}; ///< [family][CharClass]
    bool both_b_forward = false;  ///< B_+ seen in both families
    bool both_b_backward = false; ///< B_- seen in both families
    std::vector<Lemma2Intersection> intersections;
    int skipped_seeds = 0;
};

struct Lemma2Options {
    int seeds_per_family = 16;
    double growth_threshold = 10.0;
    int max_intersections = 16;
    ClassifyOptions classify;
    TraceOptions trace;
};

/// Trace both families forward from the first frame (and backward from the
/// last), classify every path, flag the configuration Lemma-2 forbids (both
/// families of class B in the same direction), and report the intersection
/// sequence t_k with the invariant gap r2 - r1 at the intersections of the
/// first-family path with integer shifts of the second-family path.
Lemma2Report lemma2_monitor(const StateField& field, double horizon,
                            const Lemma2Options& opts = {});

} // namespace psys
