#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "trigfit/algebra.hpp"
#include "trigfit/pronyaaa.hpp"

using namespace trigfit;

namespace
{

double poisson(double a, double x)
{
    return (1 - a * a) / (1 - 2 * a * std::cos(two_pi * x) + a * a) - 1;
}

ExpSum random_sum(std::mt19937_64& rng, int m, double c = 0.0)
{
    std::uniform_real_distribution<double> rad(0.3, 0.9), ph(0.0, two_pi), mag(0.2, 1.0);
    std::vector<cplx> w, a;
    for (int j = 0; j < m; ++j)
    {
        w.push_back(std::polar(mag(rng), ph(rng)));
        a.push_back(std::log(std::polar(rad(rng), ph(rng))));
    }
    return ExpSum(w, a, c);
}

double coeff_gap(const ExpSum& a, const std::function<cplx(std::int64_t)>& ref, std::int64_t n)
{
    double e = 0.0;
    for (std::int64_t k = 0; k <= n; ++k)
        e = std::max(e, std::abs(a.coeff(k) - ref(k)));
    return e;
}

} // namespace

TEST_CASE("compress leaves a minimal sum alone")
{
    const ExpSum s({1.0, cplx(-0.5, 0.2)},
                   {std::log(std::polar(0.8, 0.5)), std::log(std::polar(0.6, -2.0))}, 0.3);
    const auto c = compress(s, 1e-12);
    CHECK(c.converged);
    REQUIRE(c.sum.size() == 2);
    CHECK(coeff_gap(c.sum, [&](std::int64_t k) { return s.coeff(k); }, 200) <= 1e-10);
}

TEST_CASE("compress drops a negligible term")
{
    const ExpSum s({1.0, cplx(-0.5, 0.2), 1e-15},
                   {std::log(std::polar(0.8, 0.5)), std::log(std::polar(0.6, -2.0)),
                    std::log(std::polar(0.7, 1.4))});
    CHECK(compress(s, 1e-10).sum.size() == 2);
}

TEST_CASE("add_expsum")
{
    std::mt19937_64 rng(3);
    const auto s = random_sum(rng, 5, 0.2), g = random_sum(rng, 5, -0.7);
    CHECK(add_expsum(s, ExpSum()).size() == s.size());
    CHECK(coeff_gap(add_expsum(s, ExpSum()), [&](std::int64_t k) { return s.coeff(k); }, 100) <=
          1e-14);

    std::vector<cplx> neg;
    for (const auto& w : s.weights())
        neg.push_back(-w);
    const auto zero = add_expsum(s, ExpSum(neg, s.exponents(), -s.constant_term()));
    CHECK(zero.size() == 0);
    CHECK(zero.constant_term() == 0.0);

    const auto sum = add_expsum(s, g);
    CHECK(coeff_gap(sum, [&](std::int64_t k) { return s.coeff(k) + g.coeff(k); }, 200) <= 1e-12);
}

TEST_CASE("conv of one-term sums is closed form")
{
    const ExpSum s({cplx(0.5, 0.1)}, {cplx(-0.3, 0.4)}, 0.2);
    const ExpSum g({cplx(-0.7, 0.0)}, {cplx(-0.5, -1.0)}, 0.4);
    const auto r = conv(s, g);
    REQUIRE(r.sum.size() == 1);
    CHECK(std::abs(r.sum.weights()[0] - s.weights()[0] * g.weights()[0]) <= 1e-12);
    CHECK(std::abs(r.sum.exponents()[0] - (s.exponents()[0] + g.exponents()[0])) <= 1e-12);
    CHECK(r.sum.constant_term() == doctest::Approx(0.08));
}

TEST_CASE("conv rejects non-decaying coefficients")
{
    CHECK_THROWS_AS(ExpSum({1.0}, {cplx(0.0, 0.3)}), Error);
}

TEST_CASE("conv matches coefficientwise products")
{
    std::mt19937_64 rng(8);
    const auto s = random_sum(rng, 6), g = random_sum(rng, 4);
    const auto r = conv(s, g);
    CHECK(r.converged);
    CHECK(coeff_gap(r.sum, [&](std::int64_t k) { return s.coeff(k) * g.coeff(k); }, 300) <= 1e-10);
}

TEST_CASE("mul")
{
    const ExpSum one(1.0);
    std::mt19937_64 rng(5);
    const auto r = random_sum(rng, 3, 0.1);
    const auto id = mul(r, one);
    CHECK(coeff_gap(id.sum, [&](std::int64_t k) { return r.coeff(k); }, 200) <= 1e-12);

    // Poisson(1/2) times Poisson(1/3), each with its constant restored
    const ExpSum p({1.0}, {std::log(0.5)}, 1.0);
    const ExpSum q({1.0}, {std::log(1.0 / 3.0)}, 1.0);
    const auto pq = mul(p, q);
    auto dense = [](std::int64_t k) {
        cplx s = 0.0;
        for (std::int64_t j = -200; j <= 200; ++j)
            s += std::pow(0.5, std::abs(j)) * std::pow(1.0 / 3.0, std::abs(k - j));
        return s;
    };
    CHECK(coeff_gap(pq.sum, dense, 60) <= 1e-10);

    const auto a = random_sum(rng, 3), b = random_sum(rng, 4);
    CHECK(mul(a, b).sum.size() <= 7);
}

TEST_CASE("corr")
{
    std::mt19937_64 rng(10);
    const auto s = random_sum(rng, 4);
    const auto c = corr(s, s);
    const double lag0 = c.sum(0.0);
    const double energy = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return s(x) * s(x); }, 0.0, 1.0, 15, 1e-15);
    CHECK(std::abs(lag0 - energy) <= 1e-9 * energy);

    // pulse against a shifted copy peaks at the shift
    const ExpSum p({1.0}, {std::log(0.8)}, 0.0);
    const double shift = 0.3;
    const ExpSum ps({1.0}, {cplx(std::log(0.8), -two_pi * shift)}, 0.0);
    const auto pc = corr(p, ps);
    double best = -1e300, arg = 0.0;
    for (int j = 0; j < 1000; ++j)
    {
        const double x = j / 1000.0;
        if (pc.sum(x) > best)
        {
            best = pc.sum(x);
            arg = x;
        }
    }
    CHECK(circular_distance(arg, shift) <= 1e-3);

    const auto z = corr(s, ExpSum());
    CHECK(z.sum.size() == 0);
    CHECK(z.sum.constant_term() == 0.0);
}

TEST_CASE("rational sums and products")
{
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto a = fit_pronyaaa(SampleGrid::sample([](double x) { return poisson(0.5, x); }, 256), cfg).model;
    const auto b = fit_pronyaaa(SampleGrid::sample([](double x) { return poisson(0.6, x - 0.3); }, 256), cfg).model;
    const auto s = add_rfun(a, b);
    const auto p = mul_rfun(a, b);
    for (int j = 0; j < 100; ++j)
    {
        const double x = (j + 0.5) / 100.0;
        CHECK(std::abs(s.model(x) - (a(x) + b(x))) <= 1e-8);
        CHECK(std::abs(p.model(x) - a(x) * b(x)) <= 1e-7);
    }
}
