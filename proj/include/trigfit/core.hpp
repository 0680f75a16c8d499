#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trigfit/errors.hpp"

namespace trigfit
{

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

/// Signed circular offset x - t wrapped to [-1/2, 1/2).
double circular_offset(double x, double t);
/// |circular_offset(x, t)|
double circular_distance(double x, double t);
/// x mod 1, mapped into [0, 1).
double wrap_unit(double x);

//-----------------------------------------------------------------------------
// Sampled data
//-----------------------------------------------------------------------------

class SampleGrid
{
public:
    SampleGrid(std::vector<double> locations, std::vector<double> values);

    /// Locations j/n for j = 0..n-1.
    static SampleGrid equispaced(std::vector<double> values);

    template <typename F>
    static SampleGrid sample(F&& f, std::size_t n)
    {
        std::vector<double> v(n);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = f(static_cast<double>(j) / static_cast<double>(n));
        return equispaced(std::move(v));
    }

    /// Copy with the listed indices removed (indices need not be sorted).
    SampleGrid without(std::span<const std::size_t> drop) const;

    const std::vector<double>& locations() const noexcept { return m_x; }
    const std::vector<double>& values() const noexcept { return m_y; }
    std::size_t size() const noexcept { return m_x.size(); }
    bool is_equispaced() const noexcept { return m_equispaced; }

    double mean() const;
    /// max |y - mean|
    double scale() const;

private:
    std::vector<double> m_x;
    std::vector<double> m_y;
    bool m_equispaced = false;
};

//-----------------------------------------------------------------------------
// Poles
//-----------------------------------------------------------------------------

/// Upper half-plane poles eta (Re in [0,1), Im > 0) with residues of the
/// z-plane rational at z = exp(2 pi i eta). Lower partners are implied.
struct PoleSet
{
    std::vector<cplx> poles;
    std::vector<cplx> residues;

    std::size_t size() const noexcept { return poles.size(); }
};

//-----------------------------------------------------------------------------
// Barycentric trigonometric rational
//-----------------------------------------------------------------------------

class TrigRational
{
public:
    TrigRational(std::vector<double> nodes, std::vector<double> weights,
                 std::vector<double> node_values, double mean_offset = 0.0);

    const std::vector<double>& nodes() const noexcept { return m_t; }
    const std::vector<double>& weights() const noexcept { return m_w; }
    const std::vector<double>& node_values() const noexcept { return m_f; }
    double mean_offset() const noexcept { return m_c; }

    /// m, so that the model has type (m-1, m).
    std::size_t degree() const noexcept { return m_t.size() / 2; }

    bool has_poles() const noexcept { return m_poles.has_value(); }
    /// Throws Error(Numerical) if the eager pole computation failed.
    const PoleSet& poles() const;

    double operator()(double x) const;

    /// Mean-zero barycentric numerator and denominator at a complex point,
    /// sum g_j f_j cot(pi(x - t_j)) and sum g_j cot(pi(x - t_j)).
    void numer_denom(cplx x, cplx& n, cplx& d) const;

private:
    std::vector<double> m_t;
    std::vector<double> m_w;
    std::vector<double> m_f;
    double m_c = 0.0;
    std::optional<PoleSet> m_poles;
};

double eval_bary(const TrigRational& r, double x);

//-----------------------------------------------------------------------------
// Exponential sum of Fourier coefficients
//-----------------------------------------------------------------------------

class ExpSum
{
public:
    ExpSum() = default;
    explicit ExpSum(double constant_term);
    ExpSum(std::vector<cplx> weights, std::vector<cplx> exponents,
           double constant_term = 0.0);

    const std::vector<cplx>& weights() const noexcept { return m_w; }
    const std::vector<cplx>& exponents() const noexcept { return m_a; }
    double constant_term() const noexcept { return m_c; }
    std::size_t size() const noexcept { return m_w.size(); }
    bool empty() const noexcept { return m_w.empty(); }

    /// N_eps at eps = 1e-15 * (|c| + sum |w|), at least 1.
    std::int64_t resolution() const noexcept { return m_resolution; }

    cplx coeff(std::int64_t k) const;
    double operator()(double x) const;

    /// max over the terms of |exp(alpha)|.
    double max_modulus() const;

private:
    std::vector<cplx> m_w;
    std::vector<cplx> m_a;
    double m_c = 0.0;
    std::int64_t m_resolution = 1;
};

cplx eval_expsum(const ExpSum& s, std::int64_t k);
double eval_expsum_time(const ExpSum& s, double x);
/// Same formula without dropping the imaginary part.
cplx eval_expsum_time_complex(const ExpSum& s, double x);

/// f_hat_0 .. f_hat_N for an equispaced grid of 2N+1 points with
/// y_j = sum_k f_hat_k exp(2 pi i k x_j).
std::vector<cplx> fourier_coeffs(const SampleGrid& g);

/// Smallest N with 2 sum_j |w_j| exp(Re a_j (N+1)) / (1 - exp(Re a_j)) <= eps.
std::int64_t epsilon_resolution(const ExpSum& s, double eps);

//-----------------------------------------------------------------------------
// Configuration
//-----------------------------------------------------------------------------

struct FitConfig
{
    double tol = 1e-9;
    std::size_t max_degree = 150;
    std::size_t oversample_K = 1;
    std::size_t coeff_fit_M = 2;
    bool auto_tol = false;
    std::uint64_t seed = 20240611;

    void validate() const;
};

//-----------------------------------------------------------------------------
// Pencils
//-----------------------------------------------------------------------------

namespace detail
{

/// Upper half-plane poles of the barycentric quotient with residues, from the
/// arrowhead pencil. Returns exactly nodes.size()/2 poles.
PoleSet compute_poles(std::span<const double> nodes,
                      std::span<const double> weights,
                      std::span<const double> values);

/// Zeros eta (either half plane) of sum_j g_j (f_j + c) cot(pi(x - t_j)),
/// i.e. of the model plus the offset c, from the arrowhead pencil. Each zero
/// is polished by a few guarded Newton steps.
std::vector<cplx> compute_zeros(std::span<const double> nodes,
                                std::span<const double> weights,
                                std::span<const double> values, double c);

} // namespace detail

} // namespace trigfit
