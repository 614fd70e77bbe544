#pragma once

#include <complex>
#include <span>
#include <vector>

namespace psys {

/// Trigonometric-collocation operations on the unit circle, n uniform points
/// x_j = j/n. Wraps FFTW double-precision r2c/c2r transforms; plans are
/// created with FFTW_ESTIMATE so results are reproducible run to run.
/// One workspace per owner; execute() on distinct workspaces is thread-safe,
/// construction is internally serialized (the FFTW planner is not).
class Spectral {
public:
    explicit Spectral(int n);
    ~Spectral();

    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    int n() const { return n_; }

    /// d/dx by Fourier collocation (Nyquist mode of the derivative zeroed).
    void derivative(std::span<const double> in, std::span<double> out);

    /// Exponential high-mode filter of the given order acting on modes above
    /// cutoff_fraction * k_max; the retained band (including the mean) is
    /// untouched.
    void filter(std::span<double> data, double cutoff_fraction, int order);

    /// l2 norm of the modes above cutoff_fraction * k_max (normalized
    /// Fourier coefficients), and the l2 norm of all modes.
    struct TailNorms {
        double high;
        double total;
    };
    TailNorms tail_norms(std::span<const double> in, double cutoff_fraction);

private:
    int n_;
    double* real_;
    std::complex<double>* spec_;
    void* plan_fwd_;
    void* plan_bwd_;

    void forward(std::span<const double> in);
    void backward(std::span<double> out);
};

} // namespace psys
