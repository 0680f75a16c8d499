#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trigfit/core.hpp"
#include "trigfit/pronyaaa.hpp"
#include "trigfit/rpm.hpp"
#include "trigfit/transforms.hpp"

namespace trigfit
{

struct PipelineReport
{
    bool converged = false;
    std::size_t m = 0;
    double error = 0.0;                 ///< achieved error of the final stage
    std::vector<std::string> fallbacks; ///< stages that fell back
    std::vector<std::string> notes;
};

/// Fourier coefficients 0..floor((n-1)/2) of an equispaced grid of any length.
std::vector<cplx> sample_coeffs(const SampleGrid& g);

/// RPM on the sampled Fourier coefficients of the mean-removed data; the
/// sample mean becomes the constant term.
RpmResult fit_rpm_samples(const SampleGrid& g, const FitConfig& cfg);

struct DenoiseResult
{
    ExpSum sum;
    TrigRational model;
    RpmResult rpm;
    IftReport ift;
    std::int64_t sample_band = 0; ///< highest sampled frequency
    std::int64_t resolution = 0;  ///< N_eps of the fitted sum
    PipelineReport report;
};

/// Mean removal, sampled coefficients, RPM at `tol`, then ift (at
/// min(tol, 1e-9)) on a grid resolving the fitted sum up to N_eps, which may
/// lie past the sampled band.
/// Throws Error(Numerical) when the RPM finds no decaying terms.
DenoiseResult denoise_superresolve(const SampleGrid& g, double tol,
                                   const FitConfig& cfg = {});

struct UndersampledResult
{
    ExpSum sum;
    TrigRational model;
    FitReport fit;
    FtResult ft;
    PipelineReport report;
};

/// pronyAAA in time at `tol`, then ft at min(tol, 1e-9) so the conversion
/// keeps every pole of the fitted rational.
UndersampledResult undersampled_fit(const SampleGrid& g, double tol,
                                    const FitConfig& cfg = {});

/// Documented synthetic signals with exact references.
namespace synth
{

/// |sin(pi(x - 1/2))| - pi/2.
double kink(double x);

/// Centered cubic B-spline on the knots 1/6, ..., 5/6, scaled to unit peak and
/// shifted to mean zero.
double bspline(double x);
inline constexpr double bspline_knots[5] = {1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};

/// |sin(2 pi x)| / 4 + exp(sin(2 pi x)) / 4 minus its mean; kinks at 0 and 1/2.
double slow_decay(double x);
/// Exact Fourier coefficient k of slow_decay.
cplx slow_decay_coeff(std::int64_t k);

/// Twelve periodized Gaussian bumps mimicking two heartbeats (P, Q, R, S, T,
/// U waves each), mean zero, unit R-wave height.
double ecg(double x);
/// Centers, widths and heights of the bumps.
struct Bump
{
    double center;
    double width;
    double height;
};
const std::vector<Bump>& ecg_bumps();
/// ecg on n equispaced points plus i.i.d. N(0, sigma^2) noise.
SampleGrid ecg_noisy(std::size_t n, double sigma, std::uint64_t seed);

/// Sum of eight weighted kinks |sin(pi(x - a))| and a smooth periodic part,
/// mean zero.
double wild(double x);
const std::vector<double>& wild_kinks();
/// Exact Fourier coefficient k of wild.
cplx wild_coeff(std::int64_t k);

/// Normalized periodic Gaussian of width sigma minus one (mean zero).
double gaussian(double x, double sigma);
/// Exact Fourier coefficient exp(-2 pi^2 sigma^2 k^2), zero at k = 0.
double gaussian_coeff(std::int64_t k, double sigma);

/// Smooth signal for the gap-filling example: two Poisson bumps, a modulated
/// exponential and low-order trigonometric terms, mean zero.
double gappy(double x);
/// Indices of n equispaced points removed in three contiguous gaps of total
/// size about n / 5.
std::vector<std::size_t> gap_indices(std::size_t n);

} // namespace synth

} // namespace trigfit
