#pragma once

#include "psys/constitutive.hpp"
#include "psys/errors.hpp"

namespace psys {

/// Which hyperbolic component a transform lives on.
enum class Side { AlphaSide, BetaSide };

/// Characteristic family: First moves with +sqrt(-sigma'), Second with -sqrt(-sigma').
enum class Family { First, Second };

const char* to_string(Side s);
const char* to_string(Family f);

struct RiemannPair {
    double r1;
    double r2;
};

/// The q-integral and the (u, v) <-> (r1, r2) transforms on one hyperbolic
/// component.
///
/// On AlphaSide, q(u) = Int_u^alpha sqrt(-sigma'(s)) ds is positive and
/// strictly decreasing for u < alpha with q(alpha) = 0. On BetaSide,
/// q(u) = Int_beta^u sqrt(-sigma'(s)) ds, increasing, q(beta) = 0. With
/// r1 = v - q and r2 = v + q the gap r2 - r1 = 2 q(u) >= 0 on both sides.
///
/// The integrand has a sqrt-type kink at the anchor (sigma' vanishes there
/// linearly), removed by the substitution s = anchor -/+ w^2 before the
/// adaptive quadrature. Instances are immutable and safe for concurrent use.
class QTransform {
public:
    QTransform(SigmaModel model, Side side,
               double quad_tol = 1e-10, double inv_tol = 1e-12);

    const SigmaModel& model() const { return model_; }
    Side side() const { return side_; }
    double anchor() const { return anchor_; }
    double quad_tol() const { return quad_tol_; }

    /// q(u). Throws WrongSide if u is not on this transform's side of the
    /// anchor, QuadratureFailure if the tolerance cannot be met.
    double q(double u) const;

    /// q'(u) = -/+ sqrt(-sigma'(u)) (minus on AlphaSide).
    double q_prime(double u) const;

    /// q''(u) = +/- sigma''(u) / (2 sqrt(-sigma'(u))). Throws
    /// BoundaryDegeneracy inside the band.
    double q_second(double u) const;

    /// u with |q(u) - y| within tolerance. Throws OutOfRange for y < 0 or y
    /// beyond the attained range of q on a bounded bracket.
    double q_inverse(double y) const;

    /// r1 = v - q(u), r2 = v + q(u).
    RiemannPair to_riemann(double u, double v) const;

    /// v = (r1 + r2)/2, u = q_inverse((r2 - r1)/2). Requires r2 >= r1.
    std::pair<double, double> from_riemann(const RiemannPair& r) const;

private:
    SigmaModel model_;
    Side side_;
    double anchor_;
    double quad_tol_;
    double inv_tol_;

    double sqrt_neg_dsigma(double u) const;
};

/// (lambda_1)_{r1} = (lambda_2)_{r2} = sigma''(u) / (4 sigma'(u)), the
/// genuine-nonlinearity quantity. Throws BoundaryDegeneracy inside the band
/// and WrongSide at elliptic points.
double genuine_nonlinearity(const SigmaModel& model, double u);

/// Index (1 or 2) of the Riemann invariant transported along the given
/// family on the given side. On AlphaSide the First family carries r1; on
/// BetaSide the association flips and the First family carries r2.
int riemann_index_for(Side side, Family family);

/// The side of the component containing hyperbolic state u; throws
/// WrongSide if u is not strictly hyperbolic.
Side side_of(const SigmaModel& model, double u);

} // namespace psys
