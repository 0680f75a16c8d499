#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trigfit/core.hpp"

namespace trigfit
{

/// Near-square Hankel matrix of a coefficient vector v_0..v_N with
/// (ceil(N/2)+1) rows and (floor(N/2)+1) columns.
class HankelSystem
{
public:
    explicit HankelSystem(std::vector<cplx> coeffs);

    const std::vector<cplx>& coeffs() const noexcept { return m_v; }
    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }

    /// Nonincreasing singular values, computed on first use.
    const std::vector<double>& singular_values() const;

    /// Dense matrix, H(j, k) = v_{j+k}.
    Eigen::MatrixXcd dense() const;

private:
    std::vector<cplx> m_v;
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    mutable std::vector<double> m_sigma;
};

struct RpmResult
{
    ExpSum sum;
    bool success = false;
    double eps_abs = 0.0;      ///< absolute singular-value cut
    double min_residual = 0.0; ///< smallest singular value of the Hankel
    std::size_t rank = 0;      ///< singular values above eps_abs
    std::size_t roots_inside = 0;
    std::size_t terms_dropped = 0;
    std::vector<double> singular_values;
    std::vector<std::string> notes;
};

/// Regularized Prony fit of v_0..v_N (N >= 7). The tolerance is relative to
/// ||H||_2 unless cfg.auto_tol is set. v_0 becomes the constant term; the
/// exponential terms are fitted on indices 1..N.
RpmResult fit_rpm(std::span<const cplx> v, const FitConfig& cfg);

/// Same pipeline with an absolute singular-value cut.
RpmResult fit_rpm_abs(std::span<const cplx> v, double eps_abs);

/// Cut placed inside the first large gap found scanning from the smallest
/// singular value (ratio <= 1e-3, lower value <= 1e-2 sigma_1), else
/// 1e-12 sigma_1.
double auto_tol(std::span<const double> singular_values);

/// Roots of sum_l c_l z^l strictly inside the unit disk; roots with
/// 1 - 1e-10 <= |z| < 1 are pulled radially to 1 - 1e-10.
std::vector<cplx> prony_roots(std::span<const cplx> c);

struct VandermondeFit
{
    std::vector<cplx> roots;   ///< after merging near-coincident roots
    std::vector<cplx> weights;
    double residual = 0.0;     ///< ||V w - v||_2
    bool merged = false;
};

/// Least squares over rows j = first..first+v.size()-1 of V w = v with
/// V_{jk} = z_k^j, by column-pivoted Householder QR. Roots closer than 1e-12
/// are merged first.
VandermondeFit vandermonde_ls(std::span<const cplx> z, std::span<const cplx> v,
                              std::size_t first = 0);

} // namespace trigfit
