#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "trigfit/pipelines.hpp"

using namespace trigfit;

namespace
{

double band_limited(double x)
{
    return 0.4 * std::cos(two_pi * x) - 0.25 * std::sin(6 * pi * x + 0.4) + 0.1 * std::cos(10 * pi * x);
}

// two shifted Poisson kernels: coefficients are an exact two-term sum
const ExpSum two_poisson({cplx(0.5, 0.0), cplx(0.3, 0.0)},
                         {cplx(std::log(0.6), -two_pi * 0.2), cplx(std::log(0.7), -two_pi * 0.65)});

double poisson_pair(double x)
{
    return two_poisson(x);
}

} // namespace

TEST_CASE("sample_coeffs handles even and odd lengths")
{
    for (std::size_t n : {64u, 65u})
    {
        const auto c = sample_coeffs(SampleGrid::sample(band_limited, n));
        CHECK(c.size() == (n - 1) / 2 + 1);
        CHECK(std::abs(c[1] - cplx(0.2, 0.0)) <= 1e-14);
        CHECK(std::abs(c[5] - cplx(0.05, 0.0)) <= 1e-14);
        CHECK(std::abs(c[0]) <= 1e-15);
    }
}

TEST_CASE("denoise recovers an exact two-term sum")
{
    const double tol = 1e-9;
    const auto g = SampleGrid::sample(poisson_pair, 129);
    const auto d = denoise_superresolve(g, tol);
    CHECK(d.report.converged);
    CHECK(d.sum.size() == 2);
    for (std::int64_t k = 0; k <= 200; ++k)
        CHECK(std::abs(d.sum.coeff(k) - two_poisson.coeff(k)) <= 1e-8);
    double err = 0.0;
    for (int j = 0; j < 500; ++j)
    {
        const double x = j / 500.0;
        err = std::max(err, std::abs(d.model(x) - poisson_pair(x)));
    }
    CHECK(err <= 1e-7);
    CHECK(d.resolution > d.sample_band);
}

TEST_CASE("denoise the ECG surrogate")
{
    const auto g = synth::ecg_noisy(645, 1e-3, 20240611);
    const auto d = denoise_superresolve(g, 1e-3);
    CHECK(d.report.converged);
    CHECK(d.report.m >= 25);
    CHECK(d.report.m <= 45);
    double dev = 0.0;
    for (int j = 0; j < 4000; ++j)
    {
        const double x = j / 4000.0;
        bool core = false;
        for (const auto& b : synth::ecg_bumps())
            core = core || circular_distance(x, b.center) < 2 * b.width;
        if (!core)
            dev = std::max(dev, std::abs(d.model(x) - synth::ecg(x)));
    }
    CHECK(dev <= 5e-3);
    CHECK(d.resolution > 0);
}

TEST_CASE("denoise requires an equispaced grid")
{
    const SampleGrid g({0.0, 0.1, 0.3, 0.6, 0.7}, {1, 2, 3, 4, 5});
    CHECK_THROWS_AS(denoise_superresolve(g, 1e-3), Error);
}

TEST_CASE("undersampled fit on an exact sum agrees with RPM")
{
    const double tol = 1e-8;
    const auto g = SampleGrid::sample(poisson_pair, 101);
    const auto u = undersampled_fit(g, tol);
    FitConfig cfg;
    cfg.tol = tol;
    const auto r = fit_rpm_samples(g, cfg);
    for (int j = 0; j < 300; ++j)
    {
        const double x = j / 300.0;
        CHECK(std::abs(u.sum(x) - r.sum(x)) <= 10 * tol);
    }
}

TEST_CASE("undersampled fit beats direct RPM on the slow-decay signal")
{
    const double tol = 1e-5;
    const auto g = SampleGrid::sample(synth::slow_decay, 1401);
    FitConfig cfg;
    cfg.tol = tol;
    const auto direct = fit_rpm_samples(g, cfg);
    const auto pipe = undersampled_fit(g, tol);
    double ed = 0.0, ep = 0.0;
    for (int j = 0; j < 3000; ++j)
    {
        const double x = j / 3000.0;
        if (circular_distance(x, 0.0) <= 1e-2 || circular_distance(x, 0.5) <= 1e-2)
            continue;
        ed = std::max(ed, std::abs(direct.sum(x) - synth::slow_decay(x)));
        ep = std::max(ep, std::abs(pipe.sum(x) - synth::slow_decay(x)));
    }
    CHECK(direct.sum.size() >= 12);
    CHECK(direct.sum.size() <= 18);
    CHECK(ep <= 0.5 * ed);
}

TEST_CASE("generators")
{
    auto mean = [](double (*f)(double)) {
        const int n = 200000;
        double s = 0.0;
        for (int j = 0; j < n; ++j)
            s += f((j + 0.5) / n);
        return s / n;
    };
    CHECK(std::abs(mean(synth::bspline)) <= 1e-9);
    CHECK(std::abs(mean(synth::slow_decay)) <= 1e-9);
    CHECK(std::abs(mean(synth::ecg)) <= 1e-9);
    CHECK(std::abs(mean(synth::wild)) <= 1e-9);
    CHECK(std::abs(mean(synth::kink) - (2 / pi - pi / 2)) <= 1e-9);

    // exact coefficients against a fine DFT
    const std::size_t n = 20001;
    const auto cs = sample_coeffs(SampleGrid::sample(synth::slow_decay, n));
    const auto cw = sample_coeffs(SampleGrid::sample(synth::wild, n));
    for (std::int64_t k = 1; k <= 40; ++k)
    {
        CHECK(std::abs(cs[static_cast<std::size_t>(k)] - synth::slow_decay_coeff(k)) <= 1e-8);
        CHECK(std::abs(cw[static_cast<std::size_t>(k)] - synth::wild_coeff(k)) <= 1e-8);
        CHECK(std::abs(synth::slow_decay_coeff(-k) - std::conj(synth::slow_decay_coeff(k))) <= 1e-15);
    }
    const auto cg = sample_coeffs(SampleGrid::sample([](double x) { return synth::gaussian(x, 0.05); }, 1001));
    for (std::int64_t k = 0; k <= 20; ++k)
        CHECK(std::abs(cg[static_cast<std::size_t>(k)] - synth::gaussian_coeff(k, 0.05)) <= 1e-12);

    const auto a = synth::ecg_noisy(100, 1e-3, 7), b = synth::ecg_noisy(100, 1e-3, 7);
    CHECK(a.values() == b.values());
}
