#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "trigfit/rpm.hpp"

using namespace trigfit;

namespace
{

std::vector<cplx> two_term(std::size_t n, cplx w1, cplx z1, cplx w2, cplx z2)
{
    std::vector<cplx> v(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        v[k] = w1 * std::pow(z1, static_cast<double>(k)) + w2 * std::pow(z2, static_cast<double>(k));
    return v;
}

// index of the exponent whose base is nearest to z
std::size_t nearest(const ExpSum& s, cplx z)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.size(); ++k)
        if (std::abs(std::exp(s.exponents()[k]) - z) <
            std::abs(std::exp(s.exponents()[best]) - z))
            best = k;
    return best;
}

} // namespace

TEST_CASE("hankel shape and singular values")
{
    std::vector<cplx> v(11, 1.0);
    const HankelSystem h(v);
    CHECK(h.rows() == 6);
    CHECK(h.cols() == 6);
    const HankelSystem odd(std::vector<cplx>(10, 1.0));
    CHECK(odd.rows() == 6);
    CHECK(odd.cols() == 5);
    const auto& s = h.singular_values();
    CHECK(s[0] == doctest::Approx(6.0));
    CHECK(s[1] <= 1e-12);
    CHECK(std::is_sorted(s.rbegin(), s.rend()));
}

TEST_CASE("one geometric term")
{
    std::vector<cplx> v(65);
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = std::pow(0.5, static_cast<double>(k));
    FitConfig cfg;
    cfg.tol = 1e-10;
    const auto r = fit_rpm(v, cfg);
    CHECK(r.success);
    REQUIRE(r.sum.size() == 1);
    CHECK(std::abs(r.sum.weights()[0] - 1.0) <= 1e-10);
    CHECK(std::abs(r.sum.exponents()[0] - std::log(0.5)) <= 1e-10);
    CHECK(r.sum.constant_term() == 1.0);
}

TEST_CASE("two complex terms")
{
    const cplx z1 = std::polar(0.9, 0.3), z2 = std::polar(0.5, -1.1);
    const auto v = two_term(128, 2.0, z1, -1.0, z2);
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto r = fit_rpm(v, cfg);
    REQUIRE(r.sum.size() == 2);
    const auto a = nearest(r.sum, z1), b = nearest(r.sum, z2);
    CHECK(a != b);
    CHECK(std::abs(std::exp(r.sum.exponents()[a]) - z1) <= 1e-8);
    CHECK(std::abs(std::exp(r.sum.exponents()[b]) - z2) <= 1e-8);
    CHECK(std::abs(r.sum.weights()[a] - 2.0) <= 1e-8);
    CHECK(std::abs(r.sum.weights()[b] + 1.0) <= 1e-8);
    for (std::size_t k = 1; k <= 128; ++k)
        CHECK(std::abs(r.sum.coeff(static_cast<std::int64_t>(k)) - v[k]) <= 1e-10);
}

TEST_CASE("fast-decaying terms are recovered without extraneous roots")
{
    const cplx z1 = std::polar(0.33, 2.0), z2 = std::polar(0.42, -0.7);
    const auto v = two_term(256, -0.8, z1, 1.1, z2);
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto r = fit_rpm(v, cfg);
    REQUIRE(r.sum.size() == 2);
    CHECK(std::abs(std::exp(r.sum.exponents()[nearest(r.sum, z1)]) - z1) <= 1e-8);
}

TEST_CASE("rank law on the fitted sum")
{
    const auto v = two_term(64, 1.0, std::polar(0.8, 1.0), 0.5, std::polar(0.7, -2.0));
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto r = fit_rpm(v, cfg);
    std::vector<cplx> w(65, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k)
        for (std::size_t j = 0; j < r.sum.size(); ++j)
            w[k] += r.sum.weights()[j] * std::exp(static_cast<double>(k) * r.sum.exponents()[j]);
    const HankelSystem h(w);
    const auto& s = h.singular_values();
    CHECK(s[r.sum.size()] / s[0] <= 1e-8);
}

TEST_CASE("noise filter property")
{
    const auto clean = two_term(200, 1.0, std::polar(0.85, 0.4), -0.6, std::polar(0.6, 2.5));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ph(0.0, two_pi);
    auto v = clean;
    for (std::size_t k = 1; k < v.size(); ++k)
        v[k] += std::polar(1e-6, ph(rng));
    v[0] = clean[0].real();
    const double eps_abs = 1e-3;
    const auto r = fit_rpm_abs(v, eps_abs);
    CHECK(r.sum.size() == 2);
    for (std::size_t k = 1; k < v.size(); ++k)
        CHECK(std::abs(r.sum.coeff(static_cast<std::int64_t>(k)) - clean[k]) <= 2.0 * eps_abs);
}

TEST_CASE("realness of a real-signal fit")
{
    auto v = two_term(80, cplx(0.7, 0.2), std::polar(0.9, 1.2), cplx(-0.3, 0.1), std::polar(0.8, -0.4));
    v[0] = 0.25;
    FitConfig cfg;
    cfg.tol = 1e-12;
    const auto r = fit_rpm(v, cfg);
    for (double x : {0.0, 0.13, 0.5, 0.77})
        CHECK(std::abs(eval_expsum_time_complex(r.sum, x).imag()) <= 1e-12);
}

TEST_CASE("failure state carries the smallest residual")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    std::vector<cplx> v(20);
    for (auto& x : v)
        x = cplx(n(rng), n(rng));
    v[0] = 1.0;
    const auto r = fit_rpm_abs(v, 1e-14);
    CHECK_FALSE(r.success);
    CHECK(r.min_residual > 1e-14);
    CHECK_FALSE(r.notes.empty());
    CHECK_THROWS_AS(fit_rpm_abs(std::vector<cplx>(5, 1.0), 1e-3), Error);
}

TEST_CASE("auto_tol")
{
    const double gap[] = {1.0, 0.5, 1e-9, 1e-10};
    const double t = auto_tol(gap);
    CHECK(t > 1e-9);
    CHECK(t < 0.5);

    std::vector<double> geo(30);
    for (std::size_t k = 0; k < geo.size(); ++k)
        geo[k] = std::ldexp(1.0, -static_cast<int>(k));
    CHECK(auto_tol(geo) == doctest::Approx(1e-12));

    auto v = two_term(60, 1.0, std::polar(0.9, 0.5), -0.7, std::polar(0.8, 2.0));
    std::mt19937_64 rng(4);
    std::normal_distribution<double> d;
    for (auto& x : v)
        x += cplx(1e-6 * d(rng), 1e-6 * d(rng));
    const HankelSystem h(v);
    const double cut = auto_tol(h.singular_values());
    std::size_t rank = 0;
    for (double s : h.singular_values())
        rank += s > cut ? 1 : 0;
    CHECK(rank == 2);
}

TEST_CASE("prony_roots")
{
    const std::vector<cplx> lin{-0.3, 1.0};
    const auto r = prony_roots(lin);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - 0.3) <= 1e-15);

    const std::vector<cplx> quad{0.8, -2.4, 1.0};
    const auto q = prony_roots(quad);
    REQUIRE(q.size() == 1);
    CHECK(std::abs(q[0] - 0.4) <= 1e-14);

    const std::vector<cplx> edge{cplx(-(1.0 - 1e-12)), 1.0};
    const auto e = prony_roots(edge);
    REQUIRE(e.size() == 1);
    CHECK(std::abs(e[0]) == doctest::Approx(1.0 - 1e-10).epsilon(1e-15));

    // degree 40 against an independent eigen solver on the companion matrix
    std::mt19937_64 rng(40);
    std::normal_distribution<double> n;
    std::vector<cplx> c(41);
    for (auto& x : c)
        x = cplx(n(rng), n(rng));
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(40, 40);
    for (int i = 1; i < 40; ++i)
        comp(i, i - 1) = 1.0;
    for (int i = 0; i < 40; ++i)
        comp(i, 39) = -c[static_cast<std::size_t>(i)] / c[40];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<cplx> ref;
    for (int i = 0; i < 40; ++i)
        if (std::abs(es.eigenvalues()(i)) < 1.0)
            ref.push_back(es.eigenvalues()(i));
    const auto got = prony_roots(c);
    CHECK(got.size() == ref.size());
    for (const auto& z : got)
    {
        double best = 1e300;
        for (const auto& w : ref)
            best = std::min(best, std::abs(z - w));
        CHECK(best <= 1e-8);
    }
}

TEST_CASE("vandermonde least squares")
{
    std::vector<cplx> v(30);
    for (std::size_t k = 0; k < v.size(); ++k)
        v[k] = std::pow(0.5, static_cast<double>(k));
    const std::vector<cplx> z{0.5};
    const auto f = vandermonde_ls(z, v);
    CHECK(std::abs(f.weights[0] - 1.0) <= 1e-12);

    const cplx z1 = std::polar(0.9, 0.2), z2 = std::polar(0.7, 2.2);
    const auto exact = two_term(50, 1.5, z1, -0.5, z2);
    const std::vector<cplx> zz{z1, z2};
    const auto g = vandermonde_ls(zz, exact);
    double nrm = 0.0;
    for (const auto& x : exact)
        nrm += std::norm(x);
    CHECK(g.residual <= 1e-10 * std::sqrt(nrm));

    // noisy overdetermined data against a complete orthogonal decomposition
    std::mt19937_64 rng(6);
    std::normal_distribution<double> d;
    auto noisy = exact;
    for (auto& x : noisy)
        x += cplx(1e-3 * d(rng), 1e-3 * d(rng));
    const auto h = vandermonde_ls(zz, noisy);
    Eigen::MatrixXcd vm(51, 2);
    Eigen::VectorXcd rhs(51);
    for (int j = 0; j < 51; ++j)
    {
        vm(j, 0) = std::pow(z1, static_cast<double>(j));
        vm(j, 1) = std::pow(z2, static_cast<double>(j));
        rhs(j) = noisy[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXcd ref = vm.completeOrthogonalDecomposition().solve(rhs);
    CHECK(h.residual == doctest::Approx((vm * ref - rhs).norm()).epsilon(1e-10));

    const std::vector<cplx> dup{0.5, cplx(0.5 + 1e-14)};
    const auto m = vandermonde_ls(dup, v);
    CHECK(m.merged);
    CHECK(m.roots.size() == 1);
}
