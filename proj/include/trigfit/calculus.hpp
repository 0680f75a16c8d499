#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trigfit/core.hpp"
#include "trigfit/pronyaaa.hpp"
#include "trigfit/rpm.hpp"

namespace trigfit
{

/// max_j |f_j| of the barycentric node values, or 1 for a zero model.
double model_scale(const TrigRational& r);

//-----------------------------------------------------------------------------
// Differentiation
//-----------------------------------------------------------------------------

/// Taylor coefficients c_0..c_k of r(x + h) about x, offset included. Uses a
/// form of the quotient that is regular at the nearest node, so x may be a
/// node.
std::vector<double> taylor_coeffs(const TrigRational& r, double x, unsigned k);

/// k-th derivative of r at x. First derivatives away from the nodes use the
/// closed-form quotient; everything else goes through Taylor arithmetic.
double diff_bary(const TrigRational& r, double x, unsigned k = 1);

class DerivativeEvaluator
{
public:
    DerivativeEvaluator(TrigRational r, unsigned order);

    unsigned order() const noexcept { return m_order; }
    const TrigRational& model() const noexcept { return m_r; }
    double operator()(double x) const { return diff_bary(m_r, x, m_order); }

private:
    TrigRational m_r;
    unsigned m_order;
};

DerivativeEvaluator diff_bary_model(const TrigRational& r, unsigned order);

/// pronyAAA fit of the derivative sampled on n equispaced points.
AaaFit refit_derivative(const TrigRational& r, unsigned order, std::size_t n,
                        const FitConfig& cfg);

/// j -> (2 pi i j)^k R(j), with the time-domain derivative in closed form.
class ExpSumDerivative
{
public:
    ExpSumDerivative(ExpSum s, unsigned order);

    unsigned order() const noexcept { return m_order; }
    const ExpSum& sum() const noexcept { return m_s; }
    cplx coeff(std::int64_t j) const;
    double operator()(double x) const;

private:
    ExpSum m_s;
    unsigned m_order;
};

ExpSumDerivative diff_expsum(const ExpSum& s, unsigned order);

/// RPM on the derivative coefficients 0..n (n defaults from the resolution).
RpmResult refit_expsum_derivative(const ExpSum& s, unsigned order,
                                  const FitConfig& cfg, std::size_t n = 0);

//-----------------------------------------------------------------------------
// Integration
//-----------------------------------------------------------------------------

/// Antiderivative g(x) = int_0^x of a mean-zero sum, with g_hat_k = R(k)/(2 pi i k)
/// and g_hat_0 chosen so g(0) = 0.
class ExpSumAntiderivative
{
public:
    explicit ExpSumAntiderivative(ExpSum s);

    cplx coeff(std::int64_t k) const;
    double operator()(double x) const;

private:
    ExpSum m_s;
    double m_g0 = 0.0;
};

/// Throws Error(InvalidArgument) unless the constant term vanishes.
ExpSumAntiderivative cumsum(const ExpSum& s);

/// int_a^b r by adaptive composite Gauss-Legendre with panel breaks at the
/// nodes, to an absolute target of `tol` (default 1e-10 model_scale).
double integrate(const TrigRational& r, double a, double b, double tol = 0.0);

class Antiderivative
{
public:
    explicit Antiderivative(TrigRational r);

    const TrigRational& model() const noexcept { return m_r; }
    /// int_0^x r, for any real x.
    double operator()(double x) const;

private:
    TrigRational m_r;
    double m_period = 0.0;
};

Antiderivative cumsum(const TrigRational& r);

/// int_a^b for 0 <= a <= b <= 1; a > b throws Error(EmptyInterval).
double definite_sum(const TrigRational& r, double a, double b);
double definite_sum(const ExpSum& s, double a, double b);

//-----------------------------------------------------------------------------
// Roots, poles, extrema
//-----------------------------------------------------------------------------

/// Real zeros of r (offset included) in [0, 1), sorted.
std::vector<double> roots(const TrigRational& r);
/// All finite zeros zeta with Re in [0, 1), real and complex.
std::vector<cplx> roots_all(const TrigRational& r);

/// Upper half-plane poles with z-plane residues, from the pencil.
PoleSet poles_and_residues(const TrigRational& r);

enum class ExtremumKind
{
    Min,
    Max,
};

struct Extremum
{
    double x = 0.0;
    double value = 0.0;
    double curvature = 0.0;
};

struct ExtremaResult
{
    std::vector<Extremum> points; ///< requested kind, sorted by location
    std::vector<Extremum> flat;   ///< |r''| <= 1e-6 scale, not classified
    bool fallback = false;        ///< derivative refit failed; grid scan used
};

ExtremaResult extrema(const TrigRational& r, ExtremumKind kind,
                      const FitConfig& cfg = {});

} // namespace trigfit
