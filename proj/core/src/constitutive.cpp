#include "psys/constitutive.hpp"

#include <cmath>

namespace psys {

const char* to_string(RegionTag tag) {
    switch (tag) {
        case RegionTag::HyperbolicAlpha: return "hyperbolic_alpha";
        case RegionTag::HyperbolicBeta: return "hyperbolic_beta";
        case RegionTag::Elliptic: return "elliptic";
        case RegionTag::Boundary: return "boundary";
    }
    return "?";
}

SigmaModel make_quadratic() {
    SigmaModel m;
    m.kind = SigmaKind::TypeI;
    m.name = "quadratic";
    m.alpha = 0.0;
    m.beta = 0.0;
    m.sigma = [](double u) { return 0.5 * u * u; };
    m.dsigma = [](double u) { return u; };
    m.ddsigma = [](double) { return 1.0; };
    return m;
}

SigmaModel make_cubic() {
    SigmaModel m;
    m.kind = SigmaKind::TypeII;
    m.name = "cubic";
    m.alpha = -1.0;
    m.beta = 1.0;
    m.sigma = [](double u) { return u - u * u * u / 3.0; };
    m.dsigma = [](double u) { return 1.0 - u * u; };
    m.ddsigma = [](double u) { return -2.0 * u; };
    return m;
}

SigmaModel make_custom(std::string name, double alpha, double beta,
                       std::function<double(double)> sigma,
                       std::function<double(double)> dsigma,
                       std::function<double(double)> ddsigma,
                       int validation_samples) {
    if (!(alpha <= beta)) throw Error("make_custom: alpha must be <= beta");
    SigmaModel m;
    m.kind = alpha == beta ? SigmaKind::TypeI : SigmaKind::Custom;
    m.name = std::move(name);
    m.alpha = alpha;
    m.beta = beta;
    m.sigma = std::move(sigma);
    m.dsigma = std::move(dsigma);
    m.ddsigma = std::move(ddsigma);

    // Sampled sanity check of the sign pattern; a failure here means the
    // supplied callables cannot be one of the admissible law types.
    const double lo = alpha - 5.0, hi = beta + 5.0;
    for (int i = 0; i <= validation_samples; ++i) {
        const double u = lo + (hi - lo) * i / validation_samples;
        const double dp = m.dsigma(u);
        if (std::abs(dp) <= kEpsPar) continue;
        if ((u < alpha || u > beta) && dp > 0.0)
            throw Error("make_custom: sigma' > 0 outside [alpha, beta] at u=" + std::to_string(u));
        if (u > alpha && u < beta && dp < 0.0)
            throw Error("make_custom: sigma' < 0 inside (alpha, beta) at u=" + std::to_string(u));
    }
    return m;
}

Eigenvalues eigenvalues(const SigmaModel& model, double u) {
    const double dp = model.dsigma(u);
    if (dp > kEpsPar) return {};
    const double lam = std::sqrt(std::max(-dp, 0.0));
    return {lam, -lam};
}

RegionTag classify(const SigmaModel& model, double u) {
    const double dp = model.dsigma(u);
    if (std::abs(dp) <= kEpsPar) return RegionTag::Boundary;
    if (dp > 0.0) return RegionTag::Elliptic;
    // sigma' < 0: pick the component by position. A valid model has
    // sigma' < 0 only outside [alpha, beta]; the midpoint rule below is a
    // fallback for ill-behaved custom laws.
    if (u < model.alpha) return RegionTag::HyperbolicAlpha;
    if (u > model.beta) return RegionTag::HyperbolicBeta;
    return u <= 0.5 * (model.alpha + model.beta) ? RegionTag::HyperbolicAlpha
                                                 : RegionTag::HyperbolicBeta;
}

} // namespace psys
