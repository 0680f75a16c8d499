#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trigfit/core.hpp"

namespace trigfit
{

struct FtResult
{
    ExpSum sum;
    bool converged = false;
    double validation_error = 0.0; ///< max over the validation indices
    double threshold = 0.0;        ///< 10 tol max_k |r_hat_k|
    std::size_t fit_rows = 0;      ///< M actually used
    std::int64_t resolution = 0;   ///< N_eps from the coefficient plateau
    std::size_t terms_dropped = 0;
    std::vector<std::string> notes;
};

/// Forward transform: exponents from the poles of r, weights by least squares
/// against sampled Fourier coefficients, validated on random indices.
FtResult ft(const TrigRational& r, const FitConfig& cfg);

/// Fourier coefficients 0..N of the mean-zero part of r (without the offset),
/// from 2N+1 equispaced samples.
std::vector<cplx> rational_coeffs(const TrigRational& r, std::size_t n);

struct IftReport
{
    bool converged = false;
    double error = 0.0; ///< max |R(x) - r(x)| over the construction grid
    double scale = 0.0;
    std::size_t grid_size = 0;
    std::size_t oversample_K = 0;
    bool k0_certified = false;
    bool regridded = false;
    bool fell_back = false;
    std::size_t spurious = 0;   ///< poles with Im <= 1e-10 in the output
    double pole_drift = 0.0;    ///< max distance from Step 2 poles to Step 3 poles
    std::vector<std::string> notes;
};

struct IftResult
{
    TrigRational model;
    IftReport report;
};

/// Inverse transform through column-pivoted QR node selection on the pole
/// matrix, with the K = 0 / K = 1 / K = 2 / regrid / pronyAAA ladder.
IftResult ift(const ExpSum& s, const FitConfig& cfg);

/// Samples of the rational of s on j/n, j < n. The offset is arranged so the
/// samples come from a type (m-1, m) function when sum Im w = 0.
SampleGrid expsum_samples(const ExpSum& s, std::size_t n, double& offset);

} // namespace trigfit
