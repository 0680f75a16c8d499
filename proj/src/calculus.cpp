#include "trigfit/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "detail.hpp"

namespace trigfit
{

double model_scale(const TrigRational& r)
{
    double s = 0.0;
    for (const auto f : r.node_values())
        s = std::max(s, std::abs(f));
    return s > 0.0 ? s : 1.0;
}

//-----------------------------------------------------------------------------
// Truncated power series
//-----------------------------------------------------------------------------

namespace
{

using Series = std::vector<double>;

// sin(a + pi h) and cos(a + pi h) in powers of h.
void sincos_series(double a, unsigned k, Series& s, Series& c)
{
    s.assign(k + 1, 0.0);
    c.assign(k + 1, 0.0);
    const double sa = std::sin(a), ca = std::cos(a);
    double f = 1.0;
    for (unsigned n = 0; n <= k; ++n)
    {
        if (n > 0)
            f *= pi / static_cast<double>(n);
        // derivatives of sin cycle through sin, cos, -sin, -cos
        switch (n % 4)
        {
        case 0: s[n] = f * sa; c[n] = f * ca; break;
        case 1: s[n] = f * ca; c[n] = -f * sa; break;
        case 2: s[n] = -f * sa; c[n] = -f * ca; break;
        default: s[n] = -f * ca; c[n] = f * sa; break;
        }
    }
}

Series series_div(const Series& p, const Series& q)
{
    Series r(p.size(), 0.0);
    for (std::size_t n = 0; n < p.size(); ++n)
    {
        double acc = p[n];
        for (std::size_t i = 1; i <= n; ++i)
            acc -= q[i] * r[n - i];
        r[n] = acc / q[0];
    }
    return r;
}

Series series_mul(const Series& p, const Series& q)
{
    Series r(p.size(), 0.0);
    for (std::size_t n = 0; n < p.size(); ++n)
        for (std::size_t i = 0; i <= n; ++i)
            r[n] += p[i] * q[n - i];
    return r;
}

std::size_t nearest_node(const TrigRational& r, double x, double& dist)
{
    std::size_t best = 0;
    dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < r.nodes().size(); ++j)
    {
        const double d = circular_distance(x, r.nodes()[j]);
        if (d < dist)
        {
            dist = d;
            best = j;
        }
    }
    return best;
}

} // namespace

std::vector<double> taylor_coeffs(const TrigRational& r, double x, unsigned k)
{
    x = wrap_unit(x);
    const auto& t = r.nodes();
    const auto& w = r.weights();
    const auto& f = r.node_values();
    double dist = 0.0;
    const std::size_t jn = nearest_node(r, x, dist);

    // Multiplying the numerator and denominator by tan(pi (x - t_jn)) removes
    // the pole of the nearest kernel.
    Series s, c;
    sincos_series(pi * circular_offset(x, t[jn]), k, s, c);
    const Series tau = series_div(s, c);

    Series num(k + 1, 0.0), den(k + 1, 0.0);
    for (std::size_t j = 0; j < t.size(); ++j)
    {
        if (j == jn)
            continue;
        sincos_series(pi * circular_offset(x, t[j]), k, s, c);
        const Series ct = series_div(c, s);
        for (unsigned n = 0; n <= k; ++n)
        {
            num[n] += w[j] * f[j] * ct[n];
            den[n] += w[j] * ct[n];
        }
    }
    num = series_mul(num, tau);
    den = series_mul(den, tau);
    num[0] += w[jn] * f[jn];
    den[0] += w[jn];
    Series out = series_div(num, den);
    out[0] += r.mean_offset();
    return out;
}

double diff_bary(const TrigRational& r, double x, unsigned k)
{
    if (k == 0)
        return r(x);
    x = wrap_unit(x);
    double dist = 0.0;
    nearest_node(r, x, dist);
    if (k == 1 && dist > 1e-6)
    {
        const double rx = r(x) - r.mean_offset();
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < r.nodes().size(); ++j)
        {
            const double u = pi * circular_offset(x, r.nodes()[j]);
            const double sn = std::sin(u);
            num += r.weights()[j] * (r.node_values()[j] - rx) / (sn * sn);
            den += r.weights()[j] * std::cos(u) / sn;
        }
        return -pi * num / den;
    }
    const auto c = taylor_coeffs(r, x, k);
    return std::tgamma(static_cast<double>(k) + 1.0) * c[k];
}

DerivativeEvaluator::DerivativeEvaluator(TrigRational r, unsigned order)
    : m_r(std::move(r)), m_order(order)
{
    if (order == 0)
        throw Error(ErrorKind::InvalidArgument, "diff: order must be at least 1");
}

DerivativeEvaluator diff_bary_model(const TrigRational& r, unsigned order)
{
    return DerivativeEvaluator(r, order);
}

AaaFit refit_derivative(const TrigRational& r, unsigned order, std::size_t n,
                        const FitConfig& cfg)
{
    const DerivativeEvaluator d(r, order);
    return fit_pronyaaa(SampleGrid::sample(d, n), cfg);
}

//-----------------------------------------------------------------------------
// Exponential-sum derivative and antiderivative
//-----------------------------------------------------------------------------

ExpSumDerivative::ExpSumDerivative(ExpSum s, unsigned order)
    : m_s(std::move(s)), m_order(order)
{
    if (order == 0)
        throw Error(ErrorKind::InvalidArgument, "diff: order must be at least 1");
}

cplx ExpSumDerivative::coeff(std::int64_t j) const
{
    if (j == 0)
        return 0.0;
    return std::pow(cplx(0.0, two_pi * static_cast<double>(j)),
                    static_cast<int>(m_order)) *
           m_s.coeff(j);
}

double ExpSumDerivative::operator()(double x) const
{
    // (z d/dz)^k z/(1-z) = P_k(z)/(1-z)^(k+1)
    std::vector<cplx> p{0.0, 1.0};
    for (unsigned j = 0; j < m_order; ++j)
    {
        std::vector<cplx> q(p.size() + 1, 0.0);
        for (std::size_t n = 1; n < p.size(); ++n)
        {
            const cplx d = static_cast<double>(n) * p[n]; // z P'(z) coefficient of z^n
            q[n] += d;
            q[n + 1] -= d;
        }
        for (std::size_t n = 0; n < p.size(); ++n)
            q[n + 1] += static_cast<double>(j + 1) * p[n];
        p = std::move(q);
    }
    const cplx phase = std::exp(cplx(0.0, two_pi * wrap_unit(x)));
    const cplx scale = std::pow(cplx(0.0, two_pi), static_cast<int>(m_order));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < m_s.size(); ++j)
    {
        const cplx z = std::exp(m_s.exponents()[j]) * phase;
        cplx poly = 0.0;
        for (std::size_t n = p.size(); n-- > 0;)
            poly = poly * z + p[n];
        acc += m_s.weights()[j] * poly / std::pow(1.0 - z, static_cast<int>(m_order + 1));
    }
    return 2.0 * (scale * acc).real();
}

ExpSumDerivative diff_expsum(const ExpSum& s, unsigned order)
{
    return ExpSumDerivative(s, order);
}

RpmResult refit_expsum_derivative(const ExpSum& s, unsigned order,
                                  const FitConfig& cfg, std::size_t n)
{
    const ExpSumDerivative d(s, order);
    if (n == 0)
        n = std::max<std::size_t>(2 * static_cast<std::size_t>(s.resolution()) + 16, 64);
    std::vector<cplx> v(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        v[j] = d.coeff(static_cast<std::int64_t>(j));
    return fit_rpm(v, cfg);
}

namespace
{

// sum_j w_j (-log(1 - z_j e^{2 pi i x})) / (2 pi i)
cplx log_sum(const ExpSum& s, double x)
{
    const cplx phase = std::exp(cplx(0.0, two_pi * x));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        acc -= s.weights()[j] * std::log(1.0 - std::exp(s.exponents()[j]) * phase);
    return acc / cplx(0.0, two_pi);
}

} // namespace

ExpSumAntiderivative::ExpSumAntiderivative(ExpSum s) : m_s(std::move(s))
{
    double mass = 0.0;
    for (const auto& w : m_s.weights())
        mass += std::abs(w);
    if (std::abs(m_s.constant_term()) > 1e-13 * std::max(mass, 1.0))
        throw Error(ErrorKind::InvalidArgument,
                    "cumsum: constant term " + std::to_string(m_s.constant_term()) +
                        " is nonzero; the antiderivative is not periodic");
    m_g0 = -2.0 * log_sum(m_s, 0.0).real();
}

cplx ExpSumAntiderivative::coeff(std::int64_t k) const
{
    if (k == 0)
        return m_g0;
    return m_s.coeff(k) / cplx(0.0, two_pi * static_cast<double>(k));
}

double ExpSumAntiderivative::operator()(double x) const
{
    return m_g0 + 2.0 * log_sum(m_s, wrap_unit(x)).real();
}

ExpSumAntiderivative cumsum(const ExpSum& s)
{
    return ExpSumAntiderivative(s);
}

//-----------------------------------------------------------------------------
// Quadrature
//-----------------------------------------------------------------------------

namespace
{

using Rule = boost::math::quadrature::gauss<double, 20>;

double adapt(const TrigRational& r, double a, double b, double whole, double tol,
             int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = Rule::integrate(r, a, mid);
    const double right = Rule::integrate(r, mid, b);
    const double split = left + right;
    if (std::abs(split - whole) <= tol || depth >= 60 || b - a < 1e-15)
        return split;
    return adapt(r, a, mid, left, 0.5 * tol, depth + 1) +
           adapt(r, mid, b, right, 0.5 * tol, depth + 1);
}

void check_interval(double a, double b)
{
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b > 1.0)
        throw Error(ErrorKind::InvalidArgument,
                    "integral: interval must lie in [0, 1]");
    if (a > b)
        throw Error(ErrorKind::EmptyInterval, "integral: a > b");
}

} // namespace

double integrate(const TrigRational& r, double a, double b, double tol)
{
    if (a == b)
        return 0.0;
    double sign = 1.0;
    if (a > b)
    {
        std::swap(a, b);
        sign = -1.0;
    }
    if (!(tol > 0.0))
        tol = 1e-10 * model_scale(r);

    // panel breaks at the nodes, shifted into [a, b]
    std::vector<double> brk{a, b};
    for (const auto t : r.nodes())
        for (double p = std::floor(a) + t; p < b; p += 1.0)
            if (p > a)
                brk.push_back(p);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    double total = 0.0;
    const double len = b - a;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i)
    {
        const double lo = brk[i], hi = brk[i + 1];
        if (hi <= lo)
            continue;
        const double share = tol * (hi - lo) / len;
        total += adapt(r, lo, hi, Rule::integrate(r, lo, hi), share, 0);
    }
    return sign * total;
}

Antiderivative::Antiderivative(TrigRational r) : m_r(std::move(r))
{
    m_period = integrate(m_r, 0.0, 1.0);
}

double Antiderivative::operator()(double x) const
{
    const double cycles = std::floor(x);
    const double frac = x - cycles;
    return cycles * m_period + integrate(m_r, 0.0, frac);
}

Antiderivative cumsum(const TrigRational& r)
{
    return Antiderivative(r);
}

double definite_sum(const TrigRational& r, double a, double b)
{
    check_interval(a, b);
    return integrate(r, a, b);
}

double definite_sum(const ExpSum& s, double a, double b)
{
    check_interval(a, b);
    const ExpSum zero_mean(s.weights(), s.exponents(), 0.0);
    const ExpSumAntiderivative g(zero_mean);
    const double gb = b == 1.0 ? g(0.0) : g(b);
    return gb - g(a) + s.constant_term() * (b - a);
}

//-----------------------------------------------------------------------------
// Roots and poles
//-----------------------------------------------------------------------------

std::vector<cplx> roots_all(const TrigRational& r)
{
    auto z = detail::compute_zeros(r.nodes(), r.weights(), r.node_values(),
                                   r.mean_offset());
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    return z;
}

std::vector<double> roots(const TrigRational& r)
{
    std::vector<double> out;
    for (const auto& z : roots_all(r))
    {
        if (std::abs(z.imag()) > 1e-10)
            continue;
        // a few Newton steps on the real line
        double x = z.real();
        for (int it = 0; it < 3; ++it)
        {
            const auto c = taylor_coeffs(r, x, 1);
            if (c[1] == 0.0 || !std::isfinite(c[1]))
                break;
            const double step = c[0] / c[1];
            if (std::abs(step) > 1e-6)
                break;
            x = wrap_unit(x - step);
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (const auto x : out)
        if (uniq.empty() || circular_distance(x, uniq.back()) > 1e-12)
            uniq.push_back(x);
    if (uniq.size() > 1 && circular_distance(uniq.front(), uniq.back()) <= 1e-12)
        uniq.pop_back();
    return uniq;
}

PoleSet poles_and_residues(const TrigRational& r)
{
    return detail::compute_poles(r.nodes(), r.weights(), r.node_values());
}

//-----------------------------------------------------------------------------
// Extrema
//-----------------------------------------------------------------------------

namespace
{

// Newton on r' with r'' from the Taylor coefficients, safeguarded by bisection
// when [lo, hi] brackets a sign change.
double refine_critical(const TrigRational& r, double x, double lo, double hi)
{
    auto d1 = [&](double y) { return taylor_coeffs(r, y, 1)[1]; };
    double flo = d1(lo);
    const bool bracket = (flo < 0.0) != (d1(hi) < 0.0);
    const double start = x;
    for (int it = 0; it < 30; ++it)
    {
        const auto c = taylor_coeffs(r, x, 2);
        const double d2 = 2.0 * c[2];
        if (d2 == 0.0 || !std::isfinite(d2))
            break;
        double next = x - c[1] / d2;
        if (bracket)
        {
            if (!(next > lo && next < hi))
                next = 0.5 * (lo + hi);
            const double fn = d1(next);
            if ((fn < 0.0) == (flo < 0.0))
            {
                lo = next;
                flo = fn;
            }
            else
                hi = next;
        }
        else if (std::abs(next - start) > hi - lo)
            return start;
        const bool done = std::abs(next - x) <= 4e-16;
        x = next;
        if (done)
            break;
    }
    return x;
}

std::vector<double> scan_critical(const TrigRational& r, std::size_t n)
{
    std::vector<double> d(n);
    for (std::size_t j = 0; j < n; ++j)
        d[j] = diff_bary(r, static_cast<double>(j) / static_cast<double>(n));
    std::vector<double> out;
    for (std::size_t j = 0; j < n; ++j)
    {
        const std::size_t k = (j + 1) % n;
        if (d[j] == 0.0)
        {
            out.push_back(static_cast<double>(j) / static_cast<double>(n));
            continue;
        }
        if ((d[j] < 0.0) != (d[k] < 0.0) && d[k] != 0.0)
        {
            double lo = static_cast<double>(j) / static_cast<double>(n);
            double hi = lo + 1.0 / static_cast<double>(n);
            const bool neg_lo = d[j] < 0.0;
            for (int it = 0; it < 60; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if ((diff_bary(r, mid) < 0.0) == neg_lo)
                    lo = mid;
                else
                    hi = mid;
            }
            out.push_back(wrap_unit(0.5 * (lo + hi)));
        }
    }
    return out;
}

} // namespace

ExtremaResult extrema(const TrigRational& r, ExtremumKind kind, const FitConfig& cfg)
{
    ExtremaResult out;
    const double scale = model_scale(r);
    const std::size_t n = std::max<std::size_t>(4096, 32 * r.nodes().size());

    std::vector<double> cand;
    try
    {
        FitConfig dc = cfg;
        dc.tol = 1e-8;
        const auto fit = refit_derivative(r, 1, n, dc);
        if (fit.report.converged)
        {
            const double h = 1.0 / static_cast<double>(n);
            const double dscale = std::max(fit.report.scale, 1e-300);
            for (const auto z : roots(fit.model))
            {
                const double x = refine_critical(r, z, z - h, z + h);
                if (std::abs(diff_bary(r, x)) <= 1e-6 * dscale)
                    cand.push_back(x);
            }
        }
        else
            out.fallback = true;
    }
    catch (const Error&)
    {
        out.fallback = true;
    }
    if (out.fallback)
        cand = scan_critical(r, std::size_t(1) << 14);

    for (auto& x : cand)
        x = wrap_unit(x);
    std::sort(cand.begin(), cand.end());
    std::vector<double> uniq;
    for (const auto x : cand)
        if (uniq.empty() || std::abs(x - uniq.back()) > 1e-9)
            uniq.push_back(x);
    if (uniq.size() > 1 && circular_distance(uniq.front(), uniq.back()) <= 1e-9)
        uniq.pop_back();

    for (const auto x : uniq)
    {
        const double dist_h = 1e-6;
        double d2 = 0.0;
        double dn = 0.0;
        nearest_node(r, x, dn);
        if (dn > dist_h)
            d2 = 2.0 * taylor_coeffs(r, x, 2)[2];
        else
            d2 = (diff_bary(r, x + dist_h) - diff_bary(r, x - dist_h)) / (2.0 * dist_h);
        const Extremum e{x, r(x), d2};
        if (std::abs(d2) <= 1e-6 * scale)
            out.flat.push_back(e);
        else if ((d2 > 0.0) == (kind == ExtremumKind::Min))
            out.points.push_back(e);
    }
    return out;
}

} // namespace trigfit
