#include "trigfit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail.hpp"
#include "trigfit/numkernels.hpp"

namespace trigfit
{

double wrap_unit(double x)
{
    if (x >= 0.0 && x < 1.0)
        return x;
    double w = x - std::floor(x);
    if (w >= 1.0)
        w = 0.0;
    return w;
}

double circular_offset(double x, double t)
{
    double u = x - t;
    u -= std::floor(u + 0.5);
    return u;
}

double circular_distance(double x, double t)
{
    return std::abs(circular_offset(x, t));
}

//-----------------------------------------------------------------------------

SampleGrid::SampleGrid(std::vector<double> locations, std::vector<double> values)
    : m_x(std::move(locations)), m_y(std::move(values))
{
    if (m_x.size() != m_y.size())
        throw Error(ErrorKind::InvalidArgument,
                    "sample grid: locations and values differ in length");
    if (m_x.size() < 4)
        throw Error(ErrorKind::InvalidArgument,
                    "sample grid: at least 4 samples are required");
    for (std::size_t j = 0; j < m_x.size(); ++j)
    {
        if (!std::isfinite(m_x[j]) || !std::isfinite(m_y[j]))
            throw Error(ErrorKind::InvalidArgument,
                        "sample grid: non-finite entry at index " +
                            std::to_string(j));
        if (m_x[j] < 0.0 || m_x[j] >= 1.0)
            throw Error(ErrorKind::InvalidArgument,
                        "sample grid: location outside [0,1) at index " +
                            std::to_string(j));
        if (j > 0 && !(m_x[j] > m_x[j - 1]))
            throw Error(ErrorKind::InvalidArgument,
                        "sample grid: locations not strictly increasing at "
                        "index " +
                            std::to_string(j));
    }
    const double n = static_cast<double>(m_x.size());
    double dev = 0.0;
    for (std::size_t j = 0; j < m_x.size(); ++j)
        dev = std::max(dev, std::abs(m_x[j] - static_cast<double>(j) / n));
    m_equispaced = dev <= 1e-12 / n;
}

SampleGrid SampleGrid::equispaced(std::vector<double> values)
{
    const std::size_t n = values.size();
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = static_cast<double>(j) / static_cast<double>(n);
    return SampleGrid(std::move(x), std::move(values));
}

SampleGrid SampleGrid::without(std::span<const std::size_t> drop) const
{
    std::vector<bool> gone(size(), false);
    for (auto j : drop)
        if (j < size())
            gone[j] = true;
    std::vector<double> x, y;
    for (std::size_t j = 0; j < size(); ++j)
    {
        if (!gone[j])
        {
            x.push_back(m_x[j]);
            y.push_back(m_y[j]);
        }
    }
    return SampleGrid(std::move(x), std::move(y));
}

double SampleGrid::mean() const
{
    return std::accumulate(m_y.begin(), m_y.end(), 0.0) /
           static_cast<double>(m_y.size());
}

double SampleGrid::scale() const
{
    const double mu = mean();
    double s = 0.0;
    for (double v : m_y)
        s = std::max(s, std::abs(v - mu));
    return s;
}

//-----------------------------------------------------------------------------

TrigRational::TrigRational(std::vector<double> nodes, std::vector<double> weights,
                           std::vector<double> node_values, double mean_offset)
    : m_t(std::move(nodes)), m_w(std::move(weights)),
      m_f(std::move(node_values)), m_c(mean_offset)
{
    const std::size_t n = m_t.size();
    if (n < 2 || n % 2 != 0)
        throw Error(ErrorKind::InvalidModel,
                    "trig rational: node count must be even and positive");
    if (m_w.size() != n || m_f.size() != n)
        throw Error(ErrorKind::InvalidModel,
                    "trig rational: nodes, weights and values differ in length");
    if (!std::isfinite(m_c))
        throw Error(ErrorKind::InvalidModel, "trig rational: non-finite offset");

    bool any_weight = false;
    double sum = 0.0;
    double sum_abs = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (!std::isfinite(m_t[j]) || !std::isfinite(m_w[j]) ||
            !std::isfinite(m_f[j]))
            throw Error(ErrorKind::InvalidModel,
                        "trig rational: non-finite parameter");
        m_t[j] = wrap_unit(m_t[j]);
        any_weight = any_weight || m_w[j] != 0.0;
        sum += m_w[j] * m_f[j];
        sum_abs += std::abs(m_w[j] * m_f[j]);
    }
    if (!any_weight)
        throw Error(ErrorKind::InvalidModel, "trig rational: all weights zero");
    if (std::abs(sum) > 1e-10 * sum_abs)
        throw Error(ErrorKind::InvalidModel,
                    "trig rational: weighted node values do not sum to zero");

    std::vector<double> sorted = m_t;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < n; ++j)
    {
        const double next = j + 1 < n ? sorted[j + 1] : sorted[0] + 1.0;
        if (!(next - sorted[j] > 0.0))
            throw Error(ErrorKind::InvalidModel,
                        "trig rational: repeated node");
    }

    try
    {
        m_poles = detail::compute_poles(m_t, m_w, m_f);
    }
    catch (const Error&)
    {
        m_poles.reset();
    }
}

const PoleSet& TrigRational::poles() const
{
    if (!m_poles)
        throw Error(ErrorKind::Numerical,
                    "trig rational: pole computation failed");
    return *m_poles;
}

double TrigRational::operator()(double x) const
{
    x = wrap_unit(x);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < m_t.size(); ++j)
    {
        const double u = circular_offset(x, m_t[j]);
        if (std::abs(u) <= 1e-14)
            return m_f[j] + m_c;
        const double k = m_w[j] / std::tan(pi * u);
        num += k * m_f[j];
        den += k;
    }
    return num / den + m_c;
}

void TrigRational::numer_denom(cplx x, cplx& n, cplx& d) const
{
    n = 0.0;
    d = 0.0;
    for (std::size_t j = 0; j < m_t.size(); ++j)
    {
        const cplx k = m_w[j] * detail::ccot(pi * (x - m_t[j]));
        n += k * m_f[j];
        d += k;
    }
}

double eval_bary(const TrigRational& r, double x)
{
    return r(x);
}

//-----------------------------------------------------------------------------

ExpSum::ExpSum(double constant_term) : m_c(constant_term)
{
    if (!std::isfinite(m_c))
        throw Error(ErrorKind::InvalidModel, "exp sum: non-finite constant");
}

ExpSum::ExpSum(std::vector<cplx> weights, std::vector<cplx> exponents,
               double constant_term)
    : m_w(std::move(weights)), m_a(std::move(exponents)), m_c(constant_term)
{
    if (m_w.size() != m_a.size())
        throw Error(ErrorKind::InvalidModel,
                    "exp sum: weights and exponents differ in length");
    if (!std::isfinite(m_c))
        throw Error(ErrorKind::InvalidModel, "exp sum: non-finite constant");
    std::vector<cplx> bases(m_a.size());
    for (std::size_t j = 0; j < m_a.size(); ++j)
    {
        if (!std::isfinite(m_w[j].real()) || !std::isfinite(m_w[j].imag()) ||
            !std::isfinite(m_a[j].real()) || !std::isfinite(m_a[j].imag()))
            throw Error(ErrorKind::InvalidModel, "exp sum: non-finite term");
        if (m_w[j] == 0.0)
            throw Error(ErrorKind::InvalidModel, "exp sum: zero weight");
        if (!(m_a[j].real() < 0.0))
            throw Error(ErrorKind::InvalidModel,
                        "exp sum: exponent with nonnegative real part");
        double im = std::remainder(m_a[j].imag(), two_pi);
        if (im <= -pi)
            im += two_pi;
        m_a[j] = cplx(m_a[j].real(), im);
        bases[j] = std::exp(m_a[j]);
    }
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j)
            if (std::abs(bases[i] - bases[j]) < 1e-13)
                throw Error(ErrorKind::InvalidModel,
                            "exp sum: exponents not distinct");

    if (!m_w.empty())
    {
        double mass = std::abs(m_c);
        for (const auto& w : m_w)
            mass += std::abs(w);
        m_resolution = std::max<std::int64_t>(
            1, epsilon_resolution(*this, 1e-15 * mass));
    }
}

cplx ExpSum::coeff(std::int64_t k) const
{
    if (k == 0)
        return m_c;
    const std::int64_t kk = k < 0 ? -k : k;
    cplx acc = 0.0;
    const double kd = static_cast<double>(kk);
    for (std::size_t j = 0; j < m_w.size(); ++j)
        acc += m_w[j] * std::exp(m_a[j] * kd);
    return k < 0 ? std::conj(acc) : acc;
}

double ExpSum::operator()(double x) const
{
    return eval_expsum_time(*this, x);
}

double ExpSum::max_modulus() const
{
    double m = 0.0;
    for (const auto& a : m_a)
        m = std::max(m, std::exp(a.real()));
    return m;
}

cplx eval_expsum(const ExpSum& s, std::int64_t k)
{
    return s.coeff(k);
}

cplx eval_expsum_time_complex(const ExpSum& s, double x)
{
    x = wrap_unit(x);
    const cplx phase = std::exp(cplx(0.0, two_pi * x));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
    {
        const cplx z = std::exp(s.exponents()[j]) * phase;
        if (!(std::abs(z) < 1.0))
            throw Error(ErrorKind::InvalidModel,
                        "exp sum: term does not decay");
        acc += s.weights()[j] * z / (1.0 - z);
    }
    // The k < 0 half is the conjugate of the k > 0 half.
    return s.constant_term() + acc + std::conj(acc);
}

double eval_expsum_time(const ExpSum& s, double x)
{
    return eval_expsum_time_complex(s, x).real();
}

std::vector<cplx> fourier_coeffs(const SampleGrid& g)
{
    if (!g.is_equispaced())
        throw Error(ErrorKind::UnsupportedGrid,
                    "fourier_coeffs: grid is not equispaced");
    if (g.size() % 2 == 0)
        throw Error(ErrorKind::UnsupportedGrid,
                    "fourier_coeffs: sample count must be odd (2N+1)");
    const std::size_t n = g.size();
    const std::size_t half = (n - 1) / 2;
    std::vector<cplx> y(g.values().begin(), g.values().end());
    const auto spec = kernels::dft(y);
    std::vector<cplx> out(half + 1);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k <= half; ++k)
        out[k] = spec[k] * inv;
    out[0] = out[0].real();
    return out;
}

std::int64_t epsilon_resolution(const ExpSum& s, double eps)
{
    if (!(eps > 0.0))
        throw Error(ErrorKind::InvalidArgument,
                    "epsilon_resolution: eps must be positive");
    if (s.empty())
        return 0;
    auto tail = [&](std::int64_t n) {
        double t = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j)
        {
            const double rho = s.exponents()[j].real();
            t += std::abs(s.weights()[j]) *
                 std::exp(rho * static_cast<double>(n + 1)) / -std::expm1(rho);
        }
        return 2.0 * t;
    };
    if (tail(0) <= eps)
        return 0;
    std::int64_t lo = 0; // tail(lo) > eps
    std::int64_t hi = 1;
    const std::int64_t cap = std::int64_t(1) << 62;
    while (tail(hi) > eps)
    {
        lo = hi;
        if (hi >= cap / 2)
            return cap;
        hi *= 2;
    }
    while (hi - lo > 1)
    {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (tail(mid) <= eps)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

void FitConfig::validate() const
{
    if (!(tol > 0.0 && tol < 1.0))
        throw Error(ErrorKind::InvalidArgument, "config: tol must lie in (0,1)");
    if (max_degree < 1)
        throw Error(ErrorKind::InvalidArgument,
                    "config: max_degree must be at least 1");
    if (coeff_fit_M < 1)
        throw Error(ErrorKind::InvalidArgument,
                    "config: coeff_fit_M must be at least 1");
}

} // namespace trigfit
