#include "trigfit/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "trigfit/errors.hpp"
#include "trigfit/numkernels.hpp"

namespace trigfit
{

namespace
{

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

} // namespace

std::vector<cplx> sample_coeffs(const SampleGrid& g)
{
    if (!g.is_equispaced())
        throw Error(ErrorKind::UnsupportedGrid, "sample_coeffs: grid is not equispaced");
    const std::size_t n = g.size();
    if (n < 3)
        throw Error(ErrorKind::InvalidArgument, "sample_coeffs: need at least 3 samples");
    std::vector<cplx> y(g.values().begin(), g.values().end());
    const auto spec = kernels::dft(y);
    std::vector<cplx> out((n - 1) / 2 + 1);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = spec[k] * inv;
    out[0] = out[0].real();
    return out;
}

RpmResult fit_rpm_samples(const SampleGrid& g, const FitConfig& cfg)
{
    const double mean = g.mean();
    std::vector<double> y = g.values();
    for (double& v : y)
        v -= mean;
    auto coeffs = sample_coeffs(SampleGrid::equispaced(std::move(y)));
    coeffs[0] = 0.0;
    RpmResult res = fit_rpm(coeffs, cfg);
    res.sum = ExpSum(res.sum.weights(), res.sum.exponents(),
                     res.sum.constant_term() + mean);
    return res;
}

DenoiseResult denoise_superresolve(const SampleGrid& g, double tol,
                                   const FitConfig& cfg)
{
    if (!g.is_equispaced())
        throw Error(ErrorKind::UnsupportedGrid,
                    "denoise_superresolve: grid must be equispaced");
    FitConfig c = cfg;
    c.tol = tol;
    c.validate();

    DenoiseResult out{ExpSum(), TrigRational({0.0, 0.5}, {1.0, 1.0}, {0.0, 0.0}),
                      RpmResult{}, IftReport{}, 0, 0, PipelineReport{}};
    out.rpm = fit_rpm_samples(g, c);
    if (!out.rpm.success || out.rpm.sum.empty())
        throw Error(ErrorKind::Numerical,
                    "denoise_superresolve: RPM found no decaying terms at tol " +
                        fmt(tol) + "; raise tol");
    out.sum = out.rpm.sum;
    out.sample_band = static_cast<std::int64_t>((g.size() - 1) / 2);
    const double mass = std::abs(out.sum.constant_term()) + [&] {
        double s = 0.0;
        for (const auto& w : out.sum.weights())
            s += std::abs(w);
        return s;
    }();
    out.resolution = epsilon_resolution(out.sum, 1e-15 * std::max(mass, 1e-300));
    if (out.resolution > out.sample_band)
        out.report.notes.push_back("extrapolated coefficients " +
                                   std::to_string(out.sample_band + 1) + ".." +
                                   std::to_string(out.resolution));

    // The fitted sum is an exact rational, so convert it tightly.
    FitConfig ci = c;
    ci.tol = std::min(tol, 1e-9);
    auto inv = ift(out.sum, ci);
    out.model = std::move(inv.model);
    out.ift = inv.report;
    if (inv.report.fell_back)
        out.report.fallbacks.push_back("ift:pronyaaa");
    if (inv.report.regridded)
        out.report.fallbacks.push_back("ift:regrid");

    out.report.converged = inv.report.converged;
    out.report.m = out.sum.size();
    out.report.error = inv.report.error;
    return out;
}

UndersampledResult undersampled_fit(const SampleGrid& g, double tol,
                                    const FitConfig& cfg)
{
    FitConfig c = cfg;
    c.tol = tol;
    c.validate();
    auto fit = fit_pronyaaa(g, c);
    FitConfig cf = c;
    cf.tol = std::min(tol, 1e-9);
    auto f = ft(fit.model, cf);

    UndersampledResult out{f.sum, fit.model, fit.report, f, PipelineReport{}};
    out.report.converged = fit.report.converged && f.converged;
    out.report.m = f.sum.size();
    out.report.error = fit.report.error;
    if (!fit.report.converged)
        out.report.notes.push_back("pronyaaa did not converge");
    if (!f.converged)
        out.report.notes.push_back("ft validation error " + fmt(f.validation_error));
    return out;
}

namespace synth
{

double kink(double x)
{
    return std::abs(std::sin(pi * (x - 0.5))) - pi / 2.0;
}

double bspline(double x)
{
    // Uniform cubic B-spline on [1/6, 5/6], peak 2/3 at 1/2, integral 1/6.
    const double u = (wrap_unit(x) - 1.0 / 6.0) * 6.0;
    double b = 0.0;
    if (u >= 0.0 && u < 1.0)
        b = u * u * u / 6.0;
    else if (u >= 1.0 && u < 2.0)
        b = (-3 * u * u * u + 12 * u * u - 12 * u + 4) / 6.0;
    else if (u >= 2.0 && u < 3.0)
        b = (3 * u * u * u - 24 * u * u + 60 * u - 44) / 6.0;
    else if (u >= 3.0 && u < 4.0)
    {
        const double v = 4.0 - u;
        b = v * v * v / 6.0;
    }
    return 1.5 * (b - 1.0 / 6.0);
}

double slow_decay(double x)
{
    const double s = std::sin(2.0 * pi * x);
    const double i0 = std::cyl_bessel_i(0.0, 1.0);
    return std::abs(s) / 4.0 + std::exp(s) / 4.0 - (2.0 / pi + i0) / 4.0;
}

cplx slow_decay_coeff(std::int64_t k)
{
    if (k == 0)
        return 0.0;
    const std::int64_t a = k < 0 ? -k : k;
    // exp(sin t) = sum_n I_n(1) (-i)^n e^{int}
    static const cplx minus_i_pow[4] = {1.0, cplx(0, -1), -1.0, cplx(0, 1)};
    const cplx e = std::cyl_bessel_i(static_cast<double>(a), 1.0) *
                   (k > 0 ? minus_i_pow[a % 4] : std::conj(minus_i_pow[a % 4]));
    double kinkc = 0.0;
    if (a % 2 == 0)
    {
        const double h = static_cast<double>(a / 2);
        kinkc = -2.0 / (pi * (4.0 * h * h - 1.0));
    }
    return (kinkc + e) / 4.0;
}

const std::vector<Bump>& ecg_bumps()
{
    static const std::vector<Bump> bumps = {
        {0.080, 0.012, 0.20},  // P
        {0.170, 0.004, -0.15}, // Q
        {0.190, 0.003, 1.00},  // R
        {0.210, 0.004, -0.30}, // S
        {0.330, 0.020, 0.35},  // T
        {0.420, 0.008, 0.06},  // U
        {0.575, 0.013, 0.18},
        {0.668, 0.004, -0.12},
        {0.689, 0.003, 0.92},
        {0.710, 0.004, -0.27},
        {0.835, 0.021, 0.32},
        {0.925, 0.008, 0.05},
    };
    return bumps;
}

double ecg(double x)
{
    double v = 0.0;
    for (const auto& b : ecg_bumps())
        v += b.height * b.width * std::sqrt(2.0 * pi) * gaussian(x - b.center, b.width);
    return v;
}

SampleGrid ecg_noisy(std::size_t n, double sigma, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j)
        y[j] = ecg(static_cast<double>(j) / static_cast<double>(n)) + noise(rng);
    return SampleGrid::equispaced(std::move(y));
}

namespace
{
constexpr double wild_weights[8] = {1.0, -0.6, 0.8, 0.5, -0.9, 0.7, -0.4, 0.6};
}

const std::vector<double>& wild_kinks()
{
    static const std::vector<double> a = {0.07, 0.19, 0.31, 0.43, 0.52, 0.64, 0.77, 0.90};
    return a;
}

double wild(double x)
{
    double v = 0.0;
    double mean = 0.0;
    for (std::size_t j = 0; j < wild_kinks().size(); ++j)
    {
        v += wild_weights[j] * std::abs(std::sin(pi * (x - wild_kinks()[j])));
        mean += wild_weights[j] * 2.0 / pi;
    }
    const double t = 2.0 * pi * x;
    v += 0.3 * std::sin(3.0 * t) + 0.2 * std::cos(7.0 * t) +
         0.25 * (std::exp(std::cos(t)) - std::cyl_bessel_i(0.0, 1.0));
    return v - mean;
}

cplx wild_coeff(std::int64_t k)
{
    if (k == 0)
        return 0.0;
    if (k < 0)
        return std::conj(wild_coeff(-k));
    const double kd = static_cast<double>(k);
    cplx v = 0.0;
    for (std::size_t j = 0; j < wild_kinks().size(); ++j)
        v += wild_weights[j] * (-2.0 / (pi * (4.0 * kd * kd - 1.0))) *
             std::exp(cplx(0.0, -2.0 * pi * kd * wild_kinks()[j]));
    if (k == 3)
        v += cplx(0.0, -0.15);
    if (k == 7)
        v += 0.1;
    v += 0.25 * std::cyl_bessel_i(kd, 1.0);
    return v;
}

double gaussian(double x, double sigma)
{
    double v = 0.0;
    const double d = x - std::floor(x);
    for (int n = -3; n <= 3; ++n)
    {
        const double u = (d - static_cast<double>(n)) / sigma;
        v += std::exp(-0.5 * u * u);
    }
    return v / (std::sqrt(2.0 * pi) * sigma) - 1.0;
}

double gaussian_coeff(std::int64_t k, double sigma)
{
    if (k == 0)
        return 0.0;
    const double s = pi * sigma * static_cast<double>(k);
    return std::exp(-2.0 * s * s);
}

double gappy(double x)
{
    const double t = 2.0 * pi * x;
    auto poisson = [t](double rho, double c) {
        return (1.0 - rho * rho) /
               (1.0 - 2.0 * rho * std::cos(t - 2.0 * pi * c) + rho * rho) - 1.0;
    };
    return 0.1 * poisson(0.85, 0.3) + 0.02 * poisson(0.97, 0.62) +
           0.4 * std::sin(2.0 * t) * std::exp(std::cos(t)) +
           0.2 * std::cos(5.0 * t) + 0.05 * std::sin(7.0 * t + 0.3);
}

std::vector<std::size_t> gap_indices(std::size_t n)
{
    // Gaps centred at 0.15, 0.5 and 0.78 with widths 0.07, 0.08, 0.053.
    const double spans[3][2] = {{0.115, 0.185}, {0.46, 0.54}, {0.7535, 0.8065}};
    std::vector<std::size_t> out;
    for (const auto& s : spans)
    {
        const auto lo = static_cast<std::size_t>(std::ceil(s[0] * static_cast<double>(n)));
        const auto hi = static_cast<std::size_t>(std::floor(s[1] * static_cast<double>(n)));
        for (std::size_t j = lo; j <= hi && j < n; ++j)
            out.push_back(j);
    }
    return out;
}

} // namespace synth

} // namespace trigfit
