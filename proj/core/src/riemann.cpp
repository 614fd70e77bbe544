#include "psys/riemann.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace psys {

const char* to_string(Side s) {
    return s == Side::AlphaSide ? "alpha" : "beta";
}

const char* to_string(Family f) {
    return f == Family::First ? "first" : "second";
}

QTransform::QTransform(SigmaModel model, Side side, double quad_tol, double inv_tol)
    : model_(std::move(model)),
      side_(side),
      anchor_(side == Side::AlphaSide ? model_.alpha : model_.beta),
      quad_tol_(quad_tol),
      inv_tol_(inv_tol) {
    if (side == Side::BetaSide) {
        // A TypeI law has sigma' > 0 right of beta = alpha; no beta component.
        const double probe = model_.dsigma(anchor_ + 1e-3);
        if (probe > 0.0)
            throw WrongSide("QTransform: model '" + model_.name +
                            "' has no hyperbolic component right of beta");
    }
}

double QTransform::sqrt_neg_dsigma(double u) const {
    return std::sqrt(std::max(-model_.dsigma(u), 0.0));
}

double QTransform::q(double u) const {
    const double off = side_ == Side::AlphaSide ? anchor_ - u : u - anchor_;
    if (off < 0.0) {
        std::ostringstream os;
        os << "q: u=" << u << " is on the wrong side of anchor " << anchor_
           << " (" << to_string(side_) << " side)";
        throw WrongSide(os.str());
    }
    if (off == 0.0) return 0.0;

    // s = anchor -/+ w^2 turns the sqrt kink at the anchor into a smooth
    // integrand 2 w sqrt(-sigma'(s(w))).
    const double w_max = std::sqrt(off);
    const auto integrand = [this](double w) {
        const double s = side_ == Side::AlphaSide ? anchor_ - w * w : anchor_ + w * w;
        return 2.0 * w * sqrt_neg_dsigma(s);
    };

    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, w_max, 15, 1e-12, &err);
    if (err > quad_tol_ && err > quad_tol_ * std::abs(value))
        throw QuadratureFailure("q: quadrature error estimate " + std::to_string(err) +
                                " exceeds tolerance");
    return value;
}

double QTransform::q_prime(double u) const {
    const double s = sqrt_neg_dsigma(u);
    return side_ == Side::AlphaSide ? -s : s;
}

double QTransform::q_second(double u) const {
    const double dp = model_.dsigma(u);
    if (std::abs(dp) <= kEpsPar)
        throw BoundaryDegeneracy("q_second: sigma'(u) inside boundary band at u=" +
                                 std::to_string(u));
    const double val = model_.ddsigma(u) / (2.0 * std::sqrt(-dp));
    return side_ == Side::AlphaSide ? val : -val;
}

double QTransform::q_inverse(double y) const {
    if (y < 0.0) throw OutOfRange("q_inverse: y must be >= 0, got " + std::to_string(y));
    if (y == 0.0) return anchor_;

    // Grow the bracket geometrically away from the anchor until q >= y.
    const double sgn = side_ == Side::AlphaSide ? -1.0 : 1.0;
    double step = 1e-3 * (1.0 + std::abs(anchor_));
    double near = anchor_;
    double far = anchor_ + sgn * step;
    double q_far = q(far);
    int grow = 0;
    while (q_far < y) {
        if (++grow > 80)
            throw OutOfRange("q_inverse: y=" + std::to_string(y) +
                             " beyond attained range of q on the search bracket");
        near = far;
        step *= 2.0;
        far = anchor_ + sgn * step;
        q_far = q(far);
    }

    const auto residual = [this, y](double u) { return q(u) - y; };
    double lo = std::min(near, far), hi = std::max(near, far);
    const auto stop = [this](double a, double b) {
        return std::abs(b - a) <= inv_tol_ * 0.5 * (1.0 + std::abs(a) + std::abs(b));
    };
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(residual, lo, hi, stop, iters);
    const double u = 0.5 * (bracket.first + bracket.second);
    if (std::abs(q(u) - y) > 1e-8 * (1.0 + std::abs(y)))
        throw NoConvergence("q_inverse: residual too large after root finding");
    return u;
}

RiemannPair QTransform::to_riemann(double u, double v) const {
    const double qu = q(u);
    return {v - qu, v + qu};
}

std::pair<double, double> QTransform::from_riemann(const RiemannPair& r) const {
    if (r.r2 < r.r1)
        throw OutOfRange("from_riemann: r2 < r1 (invariant gap must be nonnegative)");
    const double v = 0.5 * (r.r1 + r.r2);
    const double u = q_inverse(0.5 * (r.r2 - r.r1));
    return {u, v};
}

double genuine_nonlinearity(const SigmaModel& model, double u) {
    const RegionTag tag = classify(model, u);
    if (tag == RegionTag::Boundary)
        throw BoundaryDegeneracy("genuine_nonlinearity: u=" + std::to_string(u) +
                                 " inside boundary band");
    if (tag == RegionTag::Elliptic)
        throw WrongSide("genuine_nonlinearity: u=" + std::to_string(u) + " is elliptic");
    return model.ddsigma(u) / (4.0 * model.dsigma(u));
}

int riemann_index_for(Side side, Family family) {
    if (side == Side::AlphaSide) return family == Family::First ? 1 : 2;
    return family == Family::First ? 2 : 1;
}

Side side_of(const SigmaModel& model, double u) {
    switch (classify(model, u)) {
        case RegionTag::HyperbolicAlpha: return Side::AlphaSide;
        case RegionTag::HyperbolicBeta: return Side::BetaSide;
        default:
            throw WrongSide("side_of: u=" + std::to_string(u) + " is not strictly hyperbolic");
    }
}

} // namespace psys
