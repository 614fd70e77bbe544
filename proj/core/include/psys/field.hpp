#pragma once

#include <functional>
#include <span>
#include <vector>

#include "psys/constitutive.hpp"
#include "psys/riemann.hpp"

namespace psys {

/// One stored time level: u and the periodic part of v on the grid x_j = j/n.
struct Frame {
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> v; ///< periodic part; full v(t,x) = v + winding_c * x
};

/// A periodic-in-x sampled (u, v) field at a sequence of times.
///
/// u is exactly periodic by construction. v is stored as its periodic part;
/// the full v is reconstructed as periodic part + winding_c * x, so the shift
/// identity v(t, x+1) = v(t, x) + winding_c holds exactly. Frames are
/// immutable once appended and may be read concurrently.
struct StateField {
    SigmaModel model;
    int n_x = 0;
    double winding_c = 0.0;
    std::vector<Frame> frames;

    double dx() const { return 1.0 / n_x; }
    double t_begin() const { return frames.front().t; }
    double t_end() const { return frames.back().t; }
    std::vector<double> x_grid() const;

    const Frame& frame(int i) const { return frames.at(i); }

    /// Build a field by sampling callables u(t,x), v_periodic(t,x) at the
    /// given times. Times must be strictly increasing.
    static StateField from_samples(SigmaModel model, int n_x, double winding_c,
                                   std::span<const double> times,
                                   const std::function<double(double, double)>& u_fn,
                                   const std::function<double(double, double)>& v_fn);
};

/// Per-grid-point classification of one frame plus connected-component
/// labels. Labels partition the circle into maximal runs of equal tag;
/// an edge whose endpoints carry different non-Boundary tags is marked as a
/// sub-grid crossing (the boundary passes between the two samples).
struct RegionMask {
    std::vector<RegionTag> tags;
    std::vector<int> component;           ///< label per grid point
    std::vector<bool> subgrid_crossing;   ///< per edge (i, i+1 mod n)
    int n_components = 0;

    bool uniform() const;
    bool all_hyperbolic_single_side() const;
    bool contains(RegionTag tag) const;
};

RegionMask classify_frame(const SigmaModel& model, std::span<const double> u);

/// Periodic Catmull-Rom interpolation on a uniform grid over [0,1).
double catmull_rom_value(std::span<const double> grid, double x);
double catmull_rom_derivative(std::span<const double> grid, double x);

/// C^1-in-x (periodic cubic), linear-in-t view of a StateField, including
/// winding reconstruction. x arguments are universal-cover coordinates;
/// wrapping is internal.
class FieldSampler {
public:
    explicit FieldSampler(const StateField& field);

    struct Point {
        double u;
        double u_x;
        double v;   ///< full v at the unwrapped x
        double v_x; ///< periodic part derivative + winding_c
    };

    Point sample(double t, double x) const;
    double u(double t, double x) const;

    /// Spatial gradient of the Riemann invariant r_1 or r_2 at (t, x), via
    /// the chain rule r1_x = v_x - q'(u) u_x, r2_x = v_x + q'(u) u_x with the
    /// side-dependent q' = -/+ sqrt(-sigma'(u)). Requires a hyperbolic u.
    double riemann_gradient(double t, double x, int riemann_index) const;

    double t_begin() const { return field_->t_begin(); }
    double t_end() const { return field_->t_end(); }
    const StateField& field() const { return *field_; }

private:
    const StateField* field_;

    /// Index i with frames[i].t <= t <= frames[i+1].t (clamped ends).
    int locate(double t) const;
};

/// Centered-difference gradient of the Riemann invariant r_{index} on the
/// grid of one frame (differences of r itself, r = v_full -/+ q(u)). Grid
/// points whose stencil leaves the transform's side fall back to the chain
/// rule with sqrt(max(-sigma', 0)).
std::vector<double> riemann_gradient_grid(const StateField& field, int frame_index,
                                          int riemann_index, const QTransform& qt);

} // namespace psys
