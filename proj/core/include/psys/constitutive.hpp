#pragma once

#include <functional>
#include <optional>
#include <string>

#include "psys/errors.hpp"

namespace psys {

/// Boundary tolerance on sigma'(u): points with |sigma'| <= kEpsPar are
/// treated as lying on the hyperbolic/elliptic boundary.
inline constexpr double kEpsPar = 1e-10;

/// sigma(u) together with its first two derivatives.
struct SigmaTriple {
    double sigma;
    double dsigma;
    double ddsigma;
};

enum class SigmaKind { TypeI, TypeII, Custom };

/// A constitutive law sigma(u).
///
/// TypeI laws are strictly convex with a minimum at alpha (= beta); TypeII
/// laws are cubic-like with sigma' < 0 outside [alpha, beta], sigma' > 0
/// inside, sigma'' > 0 left of alpha and sigma'' < 0 right of beta.
/// TypeI instances are stored as the degenerate alpha == beta case so that
/// downstream code branches only on region tags. Models are immutable after
/// construction and safe to share across threads.
struct SigmaModel {
    SigmaKind kind = SigmaKind::Custom;
    std::string name = "custom";
    double alpha = 0.0;
    double beta = 0.0;

    std::function<double(double)> sigma;
    std::function<double(double)> dsigma;
    std::function<double(double)> ddsigma;

    SigmaTriple eval(double u) const { return {sigma(u), dsigma(u), ddsigma(u)}; }
};

enum class RegionTag {
    HyperbolicAlpha, ///< u < alpha, sigma' < 0
    HyperbolicBeta,  ///< u > beta,  sigma' < 0
    Elliptic,        ///< sigma' > 0
    Boundary         ///< |sigma'| <= kEpsPar
};

const char* to_string(RegionTag tag);

/// sigma(u) = u^2 / 2 (dispersionless Boussinesq case), alpha = beta = 0.
SigmaModel make_quadratic();

/// sigma(u) = u - u^3 / 3, the canonical cubic-like law with alpha = -1, beta = 1.
SigmaModel make_cubic();

/// Wrap user-supplied callables. Validity (sign pattern of Fig.-type
/// conditions) is checked by sampling around [alpha, beta], not proven.
SigmaModel make_custom(std::string name, double alpha, double beta,
                       std::function<double(double)> sigma,
                       std::function<double(double)> dsigma,
                       std::function<double(double)> ddsigma,
                       int validation_samples = 1000);

struct Eigenvalues {
    std::optional<double> lambda1; ///< +sqrt(-sigma'), absent in elliptic points
    std::optional<double> lambda2; ///< -sqrt(-sigma')
};

/// Characteristic speeds at u. Both absent when sigma'(u) > kEpsPar;
/// otherwise lambda1 = -lambda2 = sqrt(max(-sigma', 0)) (0 within the band).
Eigenvalues eigenvalues(const SigmaModel& model, double u);

/// Region classification of a single state value. The boundary band takes
/// precedence; the hyperbolic side is selected by the position of u relative
/// to alpha and beta.
RegionTag classify(const SigmaModel& model, double u);

inline bool is_hyperbolic(RegionTag tag) {
    return tag == RegionTag::HyperbolicAlpha || tag == RegionTag::HyperbolicBeta;
}

} // namespace psys
