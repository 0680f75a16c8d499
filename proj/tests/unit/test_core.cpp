#include <doctest.h>

#include <cmath>
#include <random>

#include "trigfit/core.hpp"

using namespace trigfit;

namespace
{

// Direct evaluation of the cot quotient in extended precision.
long double bary_ld(const TrigRational& r, long double x)
{
    const long double pl = 3.141592653589793238462643383279502884L;
    long double num = 0.0L, den = 0.0L;
    for (std::size_t j = 0; j < r.nodes().size(); ++j)
    {
        const long double k = r.weights()[j] / std::tan(pl * (x - r.nodes()[j]));
        num += k * r.node_values()[j];
        den += k;
    }
    return num / den + r.mean_offset();
}

ExpSum poisson_half()
{
    return ExpSum({1.0}, {std::log(0.5)}, 0.0);
}

double poisson(double a, double x)
{
    return (1 - a * a) / (1 - 2 * a * std::cos(two_pi * x) + a * a) - 1;
}

} // namespace

TEST_CASE("circular helpers")
{
    CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(0.0) == 0.0);
    CHECK(circular_offset(0.95, 0.05) == doctest::Approx(-0.1));
    CHECK(circular_distance(0.02, 0.98) == doctest::Approx(0.04));
}

TEST_CASE("sample grid validation")
{
    CHECK_THROWS_AS(SampleGrid({0.0, 0.1, 0.2}, {1, 2, 3}), Error);
    CHECK_THROWS_AS(SampleGrid({0.0, 0.2, 0.1, 0.3}, {1, 2, 3, 4}), Error);
    CHECK_THROWS_AS(SampleGrid({0.0, 0.2, 0.4, 1.0}, {1, 2, 3, 4}), Error);
    CHECK_THROWS_AS(SampleGrid({0.0, 0.2, 0.4, 0.6}, {1, 2, 3}), Error);

    const auto g = SampleGrid::equispaced({1, 2, 3, 4, 5, 6, 7});
    CHECK(g.is_equispaced());
    CHECK(g.mean() == doctest::Approx(4.0));
    CHECK(g.scale() == doctest::Approx(3.0));
    const std::size_t drop[] = {3, 1};
    const auto h = g.without(drop);
    REQUIRE(h.size() == 5);
    CHECK(h.values()[1] == 3.0);
    CHECK(h.locations()[2] == doctest::Approx(4.0 / 7.0));
    CHECK_FALSE(SampleGrid({0.0, 0.1, 0.5, 0.7}, {1, 2, 3, 4}).is_equispaced());
}

TEST_CASE("trig rational invariants")
{
    CHECK_THROWS_AS(TrigRational({0.0, 0.3, 0.6}, {1, 1, 1}, {1, 0, -1}), Error);
    CHECK_THROWS_AS(TrigRational({0.0, 0.5}, {1, 1}, {1, 1}), Error); // sum g f != 0
    CHECK_THROWS_AS(TrigRational({0.2, 0.2}, {1, 1}, {1, -1}), Error);
    CHECK_THROWS_AS(TrigRational({0.0, 0.5}, {0, 0}, {1, -1}), Error);
    try
    {
        TrigRational({0.0, 0.5}, {1, 1}, {1, 1});
    }
    catch (const Error& e)
    {
        CHECK(e.kind() == ErrorKind::InvalidModel);
    }
}

TEST_CASE("eval_bary interpolates and matches the extended-precision quotient")
{
    const TrigRational r({0.0, 0.5}, {1.0, 1.0}, {1.0, -1.0});
    CHECK(r(0.0) == 1.0);
    CHECK(r(0.5) == -1.0);
    CHECK(std::abs(r(0.1) - static_cast<double>(bary_ld(r, 0.1L))) <= 1e-12);

    // four nodes with weights chosen to satisfy the constraint
    const std::vector<double> t{0.05, 0.3, 0.55, 0.8};
    const std::vector<double> f{0.4, -1.2, 0.7, 0.2};
    std::vector<double> w{1.0, 0.5, -0.25, 0.0};
    double s = 0.0;
    for (int j = 0; j < 3; ++j)
        s += w[j] * f[j];
    w[3] = -s / f[3];
    const TrigRational q(t, w, f, 0.3);
    CHECK(q(t[2]) == f[2] + 0.3);
    CHECK(eval_bary(q, t[1]) == f[1] + 0.3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k)
    {
        const double x = u(rng);
        const double ref = static_cast<double>(bary_ld(q, x));
        CHECK(std::abs(q(x) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("eval_expsum")
{
    const ExpSum one({1.0}, {-1.0}, 0.0);
    CHECK(std::abs(eval_expsum(one, 2) - std::exp(-2.0)) <= 1e-15);

    const ExpSum s({cplx(0.3, -0.2), cplx(-1.0, 0.5)},
                   {cplx(-0.2, 1.1), cplx(-0.7, -2.0)}, 0.4);
    CHECK(eval_expsum(s, -5) == std::conj(eval_expsum(s, 5)));
    CHECK(eval_expsum(s, 0) == cplx(0.4, 0.0));
    CHECK(std::abs(eval_expsum(poisson_half(), 3) - 0.125) <= 1e-15);
}

TEST_CASE("eval_expsum_time")
{
    CHECK(std::abs(eval_expsum_time(poisson_half(), 0.0) - 2.0) <= 1e-14);
    for (double x : {0.1, 0.37, 0.5, 0.81})
        CHECK(std::abs(poisson_half()(x) - poisson(0.5, x)) <= 1e-14);
    const ExpSum c(0.7);
    CHECK(c(0.0) == 0.7);
    CHECK(c(0.42) == 0.7);
    const ExpSum s({cplx(0.3, -0.2)}, {cplx(-0.2, 1.1)}, 0.1);
    CHECK(s(0.25) == s(1.25));
    CHECK(s(0.5) == s(-0.5));
}

TEST_CASE("exp sum invariants")
{
    CHECK_THROWS_AS(ExpSum({1.0}, {cplx(0.1, 0.0)}), Error);
    CHECK_THROWS_AS(ExpSum({1.0, 2.0}, {cplx(-0.5, 0.1), cplx(-0.5, 0.1)}), Error);
    CHECK_THROWS_AS(ExpSum({0.0}, {cplx(-0.5, 0.1)}), Error);
}

TEST_CASE("fourier_coeffs")
{
    const std::size_t n = 2 * 16 + 1;
    const auto c = fourier_coeffs(
        SampleGrid::sample([](double x) { return std::cos(two_pi * x); }, n));
    for (std::size_t k = 0; k < c.size(); ++k)
        CHECK(std::abs(c[k] - (k == 1 ? cplx(0.5) : cplx(0.0))) <= 1e-13);

    const auto one = fourier_coeffs(SampleGrid::sample([](double) { return 1.0; }, n));
    for (std::size_t k = 0; k < one.size(); ++k)
        CHECK(std::abs(one[k] - (k == 0 ? cplx(1.0) : cplx(0.0))) <= 1e-13);

    const std::size_t big = 128;
    const auto p = fourier_coeffs(
        SampleGrid::sample([](double x) { return poisson(0.5, x) + 1.0; }, 2 * big + 1));
    for (std::size_t k = 1; k <= big; ++k)
        CHECK(std::abs(p[k] - std::pow(0.5, static_cast<double>(k))) <=
              2.0 * std::pow(0.5, static_cast<double>(big)) + 1e-15);

    CHECK_THROWS_AS(fourier_coeffs(SampleGrid::equispaced({1, 2, 3, 4})), Error);
}

TEST_CASE("epsilon_resolution")
{
    // tail formula evaluated directly
    auto brute = [](const ExpSum& s, double eps) {
        for (std::int64_t n = 0;; ++n)
        {
            double t = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j)
            {
                const double q = std::exp(s.exponents()[j].real());
                t += 2.0 * std::abs(s.weights()[j]) * std::pow(q, static_cast<double>(n + 1)) /
                     (1.0 - q);
            }
            if (t <= eps)
                return n;
        }
    };
    const auto p = poisson_half();
    for (double eps : {3e-4, 1e-3, 7e-9})
        CHECK(epsilon_resolution(p, eps) == brute(p, eps));
    CHECK(epsilon_resolution(p, 10.0) == 0);

    const ExpSum two({cplx(1.0, 0.5), cplx(-0.3, 0.0)}, {cplx(-0.05, 1.0), cplx(-0.4, -2.0)});
    const auto ne = epsilon_resolution(two, 1e-8);
    // partial sums of 2|R(k)| bound the true tail from below
    double tail = 0.0;
    for (std::int64_t k = ne + 1; k <= 1000000; ++k)
        tail += 2.0 * std::abs(eval_expsum(two, k));
    CHECK(tail <= 1e-8);
    CHECK(ne == brute(two, 1e-8));
}

TEST_CASE("config validation")
{
    FitConfig c;
    c.tol = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.tol = 1e-9;
    CHECK_NOTHROW(c.validate());
}
