#include "psys/spectral.hpp"

#include <fftw3.h>

#include <cassert>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace psys {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Spectral::Spectral(int n) : n_(n) {
    if (n < 8) throw std::invalid_argument("Spectral: n must be >= 8");
    real_ = fftw_alloc_real(n_);
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n_ / 2 + 1));
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_1d(n_, real_, reinterpret_cast<fftw_complex*>(spec_),
                                     FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r_1d(n_, reinterpret_cast<fftw_complex*>(spec_), real_,
                                     FFTW_ESTIMATE);
}

Spectral::~Spectral() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_);
    fftw_free(spec_);
}

void Spectral::forward(std::span<const double> in) {
    assert(static_cast<int>(in.size()) == n_);
    for (int i = 0; i < n_; ++i) real_[i] = in[i];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double scale = 1.0 / n_;
    for (int k = 0; k <= n_ / 2; ++k) spec_[k] *= scale;
}

void Spectral::backward(std::span<double> out) {
    assert(static_cast<int>(out.size()) == n_);
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    for (int i = 0; i < n_; ++i) out[i] = real_[i];
}

void Spectral::derivative(std::span<const double> in, std::span<double> out) {
    forward(in);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k <= n_ / 2; ++k) {
        const bool nyquist = (n_ % 2 == 0) && (k == n_ / 2);
        spec_[k] *= nyquist ? std::complex<double>(0.0, 0.0)
                            : std::complex<double>(0.0, two_pi * k);
    }
    backward(out);
}

void Spectral::filter(std::span<double> data, double cutoff_fraction, int order) {
    forward(data);
    const double k_max = n_ / 2.0;
    const double k_c = cutoff_fraction * k_max;
    // amplitude at k_max is exp(-a) ~ machine epsilon
    const double a = 36.0;
    for (int k = 0; k <= n_ / 2; ++k) {
        if (k <= k_c) continue;
        const double eta = (k - k_c) / (k_max - k_c);
        spec_[k] *= std::exp(-a * std::pow(eta, order));
    }
    backward(data);
}

Spectral::TailNorms Spectral::tail_norms(std::span<const double> in, double cutoff_fraction) {
    forward(in);
    const double k_c = cutoff_fraction * (n_ / 2.0);
    double high = 0.0, total = 0.0;
    for (int k = 0; k <= n_ / 2; ++k) {
        const double w = (k == 0 || (n_ % 2 == 0 && k == n_ / 2)) ? 1.0 : 2.0;
        const double e = w * std::norm(spec_[k]);
        total += e;
        if (k > k_c) high += e;
    }
    return {std::sqrt(high), std::sqrt(total)};
}

} // namespace psys
