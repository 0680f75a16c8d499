#include "trigfit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "detail.hpp"
#include "trigfit/numkernels.hpp"
#include "trigfit/rpm.hpp"
#include "trigfit/transforms.hpp"

namespace trigfit
{

namespace
{

double weight_mass(const ExpSum& s)
{
    double m = 0.0;
    for (const auto& w : s.weights())
        m += std::abs(w);
    return m;
}

ExpSum sum_from_fit(const VandermondeFit& fit, double constant)
{
    std::vector<cplx> w, a;
    for (std::size_t k = 0; k < fit.roots.size(); ++k)
    {
        if (fit.weights[k] == 0.0 || fit.roots[k] == 0.0)
            continue;
        w.push_back(fit.weights[k]);
        a.push_back(std::log(fit.roots[k]));
    }
    try
    {
        return ExpSum(std::move(w), std::move(a), constant);
    }
    catch (const Error&)
    {
        return ExpSum(constant);
    }
}

} // namespace

CompressResult compress_sequence(const CoeffFn& coeff, double constant,
                                 std::size_t bound, std::int64_t n_eps, double tol,
                                 std::uint64_t seed)
{
    if (!(tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "compress: tol must be positive");
    CompressResult out;
    out.bound = bound;
    n_eps = std::max<std::int64_t>(n_eps, 1);
    if (bound == 0)
    {
        out.sum = ExpSum(constant);
        out.converged = true;
        return out;
    }

    const auto checks = detail::validation_indices(n_eps, 64, seed);
    std::vector<cplx> check_vals;
    double norm = 0.0;
    for (const auto k : checks)
    {
        const cplx v = k == 0 ? cplx(0.0) : coeff(k);
        check_vals.push_back(v);
        norm = std::max(norm, std::abs(v));
    }

    // u[i] = R(i + 1)
    std::vector<cplx> u;
    auto extend = [&](std::size_t count) {
        while (u.size() < count)
            u.push_back(coeff(static_cast<std::int64_t>(u.size()) + 1));
    };

    std::size_t m_rows = 2 * bound;
    double best = std::numeric_limits<double>::infinity();
    for (;;)
    {
        const std::size_t cols = bound + 1;
        const std::size_t rows = m_rows + 1;
        extend(rows + cols - 1);
        for (std::size_t i = 0; i < rows + cols - 1; ++i)
            norm = std::max(norm, std::abs(u[i]));
        out.norm = norm;
        const double eps_abs = tol * norm;

        kernels::CplxMatrix h(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t j = 0; j < rows; ++j)
            for (std::size_t k = 0; k < cols; ++k)
                h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = u[j + k];
        const auto s = kernels::svd(h, false);
        std::size_t rank = 0;
        while (rank < static_cast<std::size_t>(s.sigma.size()) && s.sigma(static_cast<Eigen::Index>(rank)) > eps_abs)
            ++rank;
        if (rank >= cols)
        {
            rank = cols - 1;
            out.notes.push_back("no singular value below the cut at M = " +
                                std::to_string(m_rows));
        }

        ExpSum cand(constant);
        if (rank > 0)
        {
            std::vector<cplx> c(cols);
            for (std::size_t l = 0; l < cols; ++l)
                c[l] = s.V(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(rank));
            auto z = prony_roots(c);
            const std::span<const cplx> data(u.data(), rows + cols - 1);
            VandermondeFit fit;
            for (int pass = 0; pass < 8; ++pass)
            {
                fit = vandermonde_ls(z, data, 1);
                std::vector<cplx> keep;
                for (std::size_t k = 0; k < fit.roots.size(); ++k)
                {
                    const double w = std::abs(fit.weights[k]);
                    if (w > eps_abs && w * std::abs(fit.roots[k]) > eps_abs)
                        keep.push_back(fit.roots[k]);
                }
                if (keep.size() == fit.roots.size())
                    break;
                z = std::move(keep);
            }
            cand = sum_from_fit(fit, constant);
        }

        double err = 0.0;
        for (std::size_t i = 0; i < checks.size(); ++i)
            if (checks[i] != 0)
                err = std::max(err, std::abs(cand.coeff(checks[i]) - check_vals[i]));
        if (err < best)
        {
            best = err;
            out.sum = std::move(cand);
            out.rows = m_rows;
        }
        if (best <= tol * norm)
            break;
        if (static_cast<std::int64_t>(m_rows) >= n_eps)
            break;
        m_rows = std::min<std::size_t>(2 * m_rows, static_cast<std::size_t>(n_eps));
    }
    out.error = best;
    out.converged = best <= tol * norm;
    if (!out.converged)
        out.notes.push_back("validation error above tolerance; best attempt returned");
    return out;
}

CompressResult compress(const ExpSum& s, double tol, std::uint64_t seed)
{
    return compress_sequence([&](std::int64_t k) { return s.coeff(k); },
                             s.constant_term(), s.size(), s.resolution(), tol, seed);
}

ExpSum add_expsum(const ExpSum& s, const ExpSum& g, double tol)
{
    std::vector<cplx> w = s.weights();
    std::vector<cplx> a = s.exponents();
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        const cplx zj = std::exp(g.exponents()[j]);
        bool merged = false;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            if (std::abs(std::exp(a[i]) - zj) < 1e-13)
            {
                w[i] += g.weights()[j];
                merged = true;
                break;
            }
        }
        if (!merged)
        {
            w.push_back(g.weights()[j]);
            a.push_back(g.exponents()[j]);
        }
    }
    const double c = s.constant_term() + g.constant_term();
    const double mass = weight_mass(s) + weight_mass(g);
    std::vector<cplx> wk, ak;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        if (std::abs(w[i]) <= 1e-15 * mass)
            continue;
        wk.push_back(w[i]);
        ak.push_back(a[i]);
    }
    const ExpSum raw(std::move(wk), std::move(ak), c);
    if (raw.size() <= 1)
        return raw;
    auto res = compress(raw, tol);
    if (!res.converged || res.sum.size() > raw.size())
        return raw;
    return res.sum;
}

ExpSum product_terms(const ExpSum& s, const ExpSum& g)
{
    std::vector<cplx> w, a;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
        {
            w.push_back(s.weights()[i] * g.weights()[j]);
            a.push_back(s.exponents()[i] + g.exponents()[j]);
        }
    return ExpSum(std::move(w), std::move(a), s.constant_term() * g.constant_term());
}

namespace
{

CompressResult product_compress(const ExpSum& s, const ExpSum& g, bool conj_s,
                                double tol, std::uint64_t seed)
{
    const double c = s.constant_term() * g.constant_term();
    if (s.empty() || g.empty())
    {
        CompressResult out;
        out.sum = ExpSum(c);
        out.converged = true;
        return out;
    }

    // non-negligible product terms
    const double cut = tol / static_cast<double>(s.size() * g.size());
    double total = 0.0;
    std::vector<double> infl;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
        {
            const double amp = std::abs(s.weights()[i] * g.weights()[j]);
            const double rho = std::exp(s.exponents()[i].real() + g.exponents()[j].real());
            infl.push_back(amp / (1.0 - rho));
            total = std::max(total, amp);
        }
    std::size_t bound = 0;
    for (const auto v : infl)
        if (v > cut * std::max(total, 1e-300))
            ++bound;

    auto coeff = [&](std::int64_t k) {
        const cplx a = s.coeff(k);
        return (conj_s ? std::conj(a) : a) * g.coeff(k);
    };

    std::int64_t n_eps = std::min(s.resolution(), g.resolution());
    // coefficient tail
    double peak = 0.0;
    std::int64_t last = 1;
    for (std::int64_t k = 1; k <= n_eps; ++k)
    {
        const double v = std::abs(coeff(k));
        peak = std::max(peak, v);
        if (v > tol * peak)
            last = k;
    }
    n_eps = std::max<std::int64_t>(last, 1);
    bound = std::min<std::size_t>(bound, std::max<std::size_t>(1, static_cast<std::size_t>(n_eps) / 2));

    auto out = compress_sequence(coeff, c, bound, n_eps, tol, seed);
    out.notes.push_back("term bound " + std::to_string(bound) + ", tail index " +
                        std::to_string(n_eps));
    return out;
}

} // namespace

CompressResult conv(const ExpSum& s, const ExpSum& g, double tol, std::uint64_t seed)
{
    return product_compress(s, g, false, tol, seed);
}

CompressResult corr(const ExpSum& s, const ExpSum& g, double tol, std::uint64_t seed)
{
    return product_compress(s, g, true, tol, seed);
}

CompressResult mul(const ExpSum& r, const ExpSum& s, double tol, std::uint64_t seed)
{
    const std::int64_t nr = r.empty() ? 0 : r.resolution();
    const std::int64_t ns = s.empty() ? 0 : s.resolution();
    const std::int64_t n = std::max(nr, ns);
    const std::int64_t rows = std::max<std::int64_t>(nr + ns, 8) + 1;
    const std::int64_t len = 2 * n + 1;

    // y_k = sum_{j=-n}^{n} R(k - j) S(j), k = 0..rows-1
    std::vector<cplx> x(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i)
        x[static_cast<std::size_t>(i)] = s.coeff(i - n);
    std::vector<cplx> diag(static_cast<std::size_t>(rows + len - 1));
    for (std::int64_t e = 0; e < rows + len - 1; ++e)
        diag[static_cast<std::size_t>(e)] = r.coeff(e - (len - 1) + n);
    const auto y = kernels::toeplitz_matvec(diag, static_cast<std::size_t>(rows), x);

    auto coeff = [&](std::int64_t k) {
        return k < rows ? y[static_cast<std::size_t>(k)] : cplx(0.0);
    };
    const std::size_t bound =
        std::min<std::size_t>(r.size() + s.size(), static_cast<std::size_t>(rows - 1) / 3);
    return compress_sequence(coeff, y[0].real(), bound, rows - 1, tol, seed);
}

namespace
{

FitReport report_from_ift(const IftReport& ir, std::size_t degree)
{
    FitReport rep;
    rep.converged = ir.converged;
    rep.degree = degree;
    rep.error = ir.error;
    rep.scale = ir.scale;
    rep.spurious_after = ir.spurious;
    rep.notes = ir.notes;
    return rep;
}

template <typename Pointwise, typename Coeffwise>
RfunOpResult pointwise_op(const TrigRational& s, const TrigRational& g,
                          const FitConfig& cfg, Pointwise op, Coeffwise cop)
{
    const std::size_t n =
        std::max<std::size_t>(4 * (s.nodes().size() + g.nodes().size()), 1024);
    const SampleGrid grid =
        SampleGrid::sample([&](double x) { return op(s(x), g(x)); }, n);
    try
    {
        auto fit = fit_pronyaaa(grid, cfg);
        if (fit.report.converged && fit.report.spurious_after == 0)
            return {std::move(fit.model), std::move(fit.report), false};
    }
    catch (const Error& e)
    {
        if (e.kind() != ErrorKind::DegenerateInput)
            throw;
        // constant result
        const double c = grid.values().front();
        TrigRational flat({0.0, 0.5}, {1.0, 1.0}, {0.0, 0.0}, c);
        FitReport rep;
        rep.converged = true;
        return {std::move(flat), rep, false};
    }
    const auto fs = ft(s, cfg).sum;
    const auto fg = ft(g, cfg).sum;
    const ExpSum combined = cop(fs, fg);
    auto back = ift(combined, cfg);
    auto rep = report_from_ift(back.report, back.model.degree());
    rep.notes.push_back("pronyAAA failed on pointwise values; used the exp-sum route");
    return {std::move(back.model), std::move(rep), true};
}

} // namespace

RfunOpResult add_rfun(const TrigRational& s, const TrigRational& g, const FitConfig& cfg)
{
    return pointwise_op(
        s, g, cfg, [](double a, double b) { return a + b; },
        [](const ExpSum& a, const ExpSum& b) { return add_expsum(a, b); });
}

RfunOpResult mul_rfun(const TrigRational& s, const TrigRational& g, const FitConfig& cfg)
{
    return pointwise_op(
        s, g, cfg, [](double a, double b) { return a * b; },
        [&](const ExpSum& a, const ExpSum& b) { return mul(a, b, cfg.tol).sum; });
}

} // namespace trigfit
