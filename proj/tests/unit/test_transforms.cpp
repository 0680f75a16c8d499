#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "trigfit/pronyaaa.hpp"
#include "trigfit/rpm.hpp"
#include "trigfit/transforms.hpp"

using namespace trigfit;

namespace
{

double poisson(double a, double x)
{
    return (1 - a * a) / (1 - 2 * a * std::cos(two_pi * x) + a * a) - 1;
}

TrigRational poisson_model()
{
    FitConfig cfg;
    cfg.tol = 1e-12;
    return fit_pronyaaa(SampleGrid::sample([](double x) { return poisson(0.5, x); }, 256), cfg)
        .model;
}

ExpSum random_sum(std::mt19937_64& rng, int m)
{
    std::uniform_real_distribution<double> rad(0.3, 0.9), ph(0.0, two_pi), mag(0.2, 1.0);
    std::vector<cplx> w, a;
    for (int j = 0; j < m; ++j)
    {
        w.push_back(std::polar(mag(rng), ph(rng)));
        a.push_back(std::log(std::polar(rad(rng), ph(rng))));
    }
    return ExpSum(w, a, 0.1);
}

double max_coeff_error(const ExpSum& s, const ExpSum& t, std::int64_t n)
{
    double err = 0.0;
    for (std::int64_t k = 0; k <= n; ++k)
        err = std::max(err, std::abs(s.coeff(k) - t.coeff(k)));
    return err;
}

} // namespace

TEST_CASE("ft of the Poisson kernel")
{
    FitConfig cfg;
    const auto res = ft(poisson_model(), cfg);
    CHECK(res.converged);
    REQUIRE(res.sum.size() == 1);
    CHECK(std::abs(res.sum.exponents()[0] - std::log(0.5)) <= 1e-8);
    CHECK(std::abs(res.sum.weights()[0] - 1.0) <= 1e-8);
    CHECK(std::abs(res.sum.constant_term()) <= 1e-10);
}

TEST_CASE("rational_coeffs agree with the closed form")
{
    const auto c = rational_coeffs(poisson_model(), 64);
    for (std::size_t k = 1; k <= 64; ++k)
        CHECK(std::abs(c[k] - std::pow(0.5, static_cast<double>(k))) <= 1e-11);
}

TEST_CASE("ift of the one-term Poisson model")
{
    const ExpSum s({1.0}, {std::log(0.5)}, 0.0);
    FitConfig cfg;
    const auto r = ift(s, cfg);
    CHECK(r.report.converged);
    CHECK(r.model.nodes().size() == 2);
    for (int j = 0; j < 200; ++j)
    {
        const double x = (j + 0.3) / 200.0;
        CHECK(std::abs(r.model(x) - poisson(0.5, x)) <= 1e-10);
    }
}

TEST_CASE("ift then ft round trip")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 6; ++t)
    {
        const auto s = random_sum(rng, 1 + 2 * t);
        FitConfig cfg;
        const auto r = ift(s, cfg);
        CHECK(r.report.spurious == 0);
        const auto back = ft(r.model, cfg);
        const auto ne = epsilon_resolution(s, 1e-15);
        double peak = 0.0;
        for (std::int64_t k = 0; k <= ne; ++k)
            peak = std::max(peak, std::abs(s.coeff(k)));
        CHECK(max_coeff_error(s, back.sum, ne) <= 1e-8 * peak);
    }
}

TEST_CASE("ft then ift round trip")
{
    auto f = [](double x) { return poisson(0.7, x - 0.2) - 0.5 * poisson(0.4, x - 0.6); };
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto r = fit_pronyaaa(SampleGrid::sample(f, 400), cfg).model;
    const auto s = ft(r, cfg).sum;
    const auto back = ift(s, cfg).model;
    for (int j = 0; j < 300; ++j)
    {
        const double x = j / 300.0;
        CHECK(std::abs(back(x) - r(x)) <= 1e-9);
    }
}

TEST_CASE("ift of a sum with complex weight total falls back")
{
    const ExpSum s({cplx(0.5, 0.4), cplx(-0.2, 0.1)},
                   {std::log(std::polar(0.6, 0.9)), std::log(std::polar(0.5, -2.0))}, 0.0);
    FitConfig cfg;
    const auto r = ift(s, cfg);
    double err = 0.0;
    for (int j = 0; j < 200; ++j)
    {
        const double x = j / 200.0;
        err = std::max(err, std::abs(r.model(x) - s(x)));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("kink RPM then ift shows tapered poles")
{
    const std::size_t n = 1000;
    const auto g = SampleGrid::sample([](double x) { return std::abs(std::sin(pi * (x - 0.5))) - pi / 2; },
                                      2 * n + 1);
    auto c = fourier_coeffs(g);
    FitConfig cr;
    cr.tol = 1e-9;
    const auto rs = fit_rpm(c, cr);
    CHECK(rs.sum.size() >= 12);
    FitConfig cfg;
    const auto r = ift(rs.sum, cfg);
    std::vector<double> d;
    for (const auto& p : r.model.poles().poles)
        d.push_back(std::abs(p - cplx(0.5, 0.0)));
    std::sort(d.begin(), d.end());
    REQUIRE(d.size() >= 8);
    for (std::size_t j = 0; j + 1 < 8; ++j)
    {
        CHECK(d[j + 1] > d[j]);
        CHECK(d[j + 1] / d[j] < 50.0);
    }
}

TEST_CASE("expsum_samples offset")
{
    const ExpSum s({1.0}, {std::log(0.5)}, 0.25);
    double off = 0.0;
    const auto g = expsum_samples(s, 16, off);
    CHECK(g.size() == 16);
    for (std::size_t j = 0; j < g.size(); ++j)
        CHECK(std::abs(g.values()[j] + off - s(g.locations()[j])) <= 1e-14);
}
