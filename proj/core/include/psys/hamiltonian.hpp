#pragma once

#include <span>
#include <vector>

#include "psys/field.hpp"

namespace psys {

/// Flow sample of the Hamiltonian H = p^2/2 + u(t,x), with the cubic
/// integral F = p^3/3 + u p + v sampled alongside (v reconstructed with the
/// winding term at the unwrapped x).
struct TrajectorySample {
    double t;
    double x; ///< universal cover
    double p;
    double H;
    double F;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
};

struct FlowOptions {
    double dt = 1e-3;
};

/// Integrate dx/dt = p, dp/dt = -u_x(t, x) from (t0, x0, p0) to t_end (RK4,
/// fixed step; the Hamiltonian is time-dependent in general, so accuracy is
/// preferred over symplectic structure). The field supplies u and v for the
/// recorded H and F. Throws StepFailureError on non-finite states.
Trajectory flow(const StateField& field, double t0, double x0, double p0,
                double t_end, const FlowOptions& opts = {});

/// max_t |F(t) - F(t0)| over the trajectory's samples.
double f_drift(const Trajectory& traj);

/// An (m, n)-periodic orbit: x(t+m) = x(t) + n, p(t+m) = p(t).
struct MNOrbit {
    int m = 1;
    int n = 0;
    Trajectory trajectory; ///< K*m+1 nodes over [0, m]; p_i = (x_{i+1}-x_i)/dt
    double residual = 0.0; ///< max discrete Euler-Lagrange residual
    long iterations = 0;
};

struct OrbitOptions {
    int nodes_per_unit_time = 512;
    double tol = 1e-6; ///< on the Euler-Lagrange residual max-norm
    long max_iterations = 200000;
    double time_period = 0.0; ///< 0: field duration (or 1 for static fields)
};

/// Find an (m, n) orbit of the flow in a doubly periodic potential by
/// minimizing the discrete action sum [ (1/2)((x_{i+1}-x_i)/dt)^2
/// - u(t_i, x_i) ] dt over closed loops with shift n, gradient descent with
/// Barzilai-Borwein steps from the straight line x(t) = x0 + (n/m) t.
/// Throws NoConvergence when the iteration budget runs out.
MNOrbit find_mn_orbit(const StateField& field, int m, int n, const OrbitOptions& opts = {});

/// v(t,x) = A t + B x + c0 + v_tilde(t,x) with doubly periodic residual.
struct VDecomposition {
    double A = 0.0;
    double B = 0.0;
    double c0 = 0.0;
    const StateField* field = nullptr;

    /// Residual sampler: full v minus the fitted affine part.
    double tilde(double t, double x) const;
};

/// Least-squares fit of the full v (periodic part + winding) against
/// {1, t, x} over the field's frame-by-grid sample rectangle.
VDecomposition fit_v_decomposition(const StateField& field);

struct ReductionReport {
    double A = 0.0;
    double B = 0.0;
    std::vector<double> mismatches; ///< A m_j + B n_j per orbit
    double max_mismatch = 0.0;
};

/// The Am + Bn = 0 closure check: fit the decomposition and evaluate the
/// F-closure mismatch A m + B n for every orbit. True solutions with doubly
/// periodic u give A, B ~ 0.
ReductionReport reduction_check(const StateField& field, std::span<const MNOrbit> orbits);

} // namespace psys
