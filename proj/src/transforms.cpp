#include "trigfit/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "detail.hpp"
#include "trigfit/numkernels.hpp"
#include "trigfit/pronyaaa.hpp"
#include "trigfit/rpm.hpp"

namespace trigfit
{

//-----------------------------------------------------------------------------
// Forward transform
//-----------------------------------------------------------------------------

std::vector<cplx> rational_coeffs(const TrigRational& r, std::size_t n)
{
    const std::size_t pts = 2 * n + 1;
    std::vector<double> v(pts);
    const double c = r.mean_offset();
    for (std::size_t j = 0; j < pts; ++j)
        v[j] = r(static_cast<double>(j) / static_cast<double>(pts)) - c;
    return fourier_coeffs(SampleGrid::equispaced(std::move(v)));
}

namespace
{

double max_abs(std::span<const cplx> v, std::size_t from = 0)
{
    double m = 0.0;
    for (std::size_t k = from; k < v.size(); ++k)
        m = std::max(m, std::abs(v[k]));
    return m;
}

} // namespace

FtResult ft(const TrigRational& r, const FitConfig& cfg)
{
    cfg.validate();
    if (!r.has_poles())
        throw Error(ErrorKind::Numerical,
                    "ft: pole computation failed for a model with " +
                        std::to_string(r.nodes().size()) + " nodes");
    const PoleSet& ps = r.poles();
    const std::size_t m = r.degree();

    std::vector<cplx> bases;
    for (const auto& eta : ps.poles)
    {
        cplx z = std::conj(detail::unit_point(eta));
        const double a = std::abs(z);
        if (a < 1e-300)
            continue;
        if (a >= 1.0 - 1e-10)
            z *= (1.0 - 1e-10) / a;
        bases.push_back(z);
    }

    FtResult out;
    constexpr std::size_t cap = std::size_t(1) << 20;
    std::size_t n = std::max<std::size_t>(64, 8 * m);
    std::vector<cplx> rhat;
    std::size_t last = 0;
    for (;;)
    {
        rhat = rational_coeffs(r, n);
        const double amax = max_abs(rhat);
        last = 0;
        for (std::size_t k = 0; k < rhat.size(); ++k)
            if (std::abs(rhat[k]) > 1e-14 * amax)
                last = k;
        if (2 * last < n || n >= cap)
            break;
        n *= 2;
    }
    if (2 * last >= n)
        out.notes.push_back("coefficient plateau not reached at N = " +
                            std::to_string(n));
    const std::size_t n_eps = std::max<std::size_t>(last, 1);
    out.resolution = static_cast<std::int64_t>(n_eps);

    const double norm = max_abs(rhat);
    out.threshold = 10.0 * cfg.tol * norm;
    const double c = r.mean_offset() + rhat[0].real();

    if (bases.empty() || max_abs(rhat, 1) == 0.0)
    {
        out.sum = ExpSum(c);
        out.converged = max_abs(rhat, 1) <= out.threshold;
        return out;
    }

    const auto checks = detail::validation_indices(
        static_cast<std::int64_t>(n_eps), 32, cfg.seed);

    std::size_t mrows = std::max(cfg.coeff_fit_M * m, bases.size());
    const std::size_t mmax = std::max(8 * m, mrows);
    double best_err = std::numeric_limits<double>::infinity();
    for (;;)
    {
        const std::size_t rows = std::min(mrows, rhat.size() - 1);
        std::vector<cplx> z = bases;
        VandermondeFit fit;
        std::size_t dropped = 0;
        for (int pass = 0; pass < 8; ++pass)
        {
            if (z.size() > rows)
                break;
            fit = vandermonde_ls(z, std::span(rhat).subspan(1, rows), 1);
            std::vector<cplx> keep;
            for (std::size_t k = 0; k < fit.roots.size(); ++k)
            {
                const double w = std::abs(fit.weights[k]);
                if (w > out.threshold && w * std::abs(fit.roots[k]) > out.threshold)
                    keep.push_back(fit.roots[k]);
            }
            if (keep.size() == fit.roots.size())
                break;
            dropped += fit.roots.size() - keep.size();
            z = std::move(keep);
        }

        std::vector<cplx> w, a;
        for (std::size_t k = 0; k < fit.roots.size(); ++k)
        {
            if (fit.weights[k] == 0.0)
                continue;
            w.push_back(fit.weights[k]);
            a.push_back(std::log(fit.roots[k]));
        }
        ExpSum s(std::move(w), std::move(a), c);

        double err = 0.0;
        for (const auto k : checks)
        {
            if (k == 0)
                continue;
            err = std::max(err, std::abs(s.coeff(k) - rhat[static_cast<std::size_t>(k)]));
        }
        if (err < best_err)
        {
            best_err = err;
            out.sum = std::move(s);
            out.fit_rows = rows;
            out.terms_dropped = dropped;
        }
        if (best_err <= out.threshold || mrows >= mmax || rows >= rhat.size() - 1)
            break;
        mrows = std::min(2 * mrows, mmax);
    }
    out.validation_error = best_err;
    out.converged = best_err <= out.threshold;
    if (!out.converged)
        out.notes.push_back("validation error above threshold");
    return out;
}

//-----------------------------------------------------------------------------
// Inverse transform
//-----------------------------------------------------------------------------

SampleGrid expsum_samples(const ExpSum& s, std::size_t n, double& offset)
{
    cplx wsum = 0.0;
    for (const auto& w : s.weights())
        wsum += w;
    offset = s.constant_term() - wsum.real();
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = eval_expsum_time(s, static_cast<double>(j) / static_cast<double>(n)) -
               offset;
    return SampleGrid::equispaced(std::move(v));
}

namespace
{

using kernels::RealMatrix;
using kernels::RealVector;

struct Attempt
{
    std::optional<TrigRational> model;
    double error = std::numeric_limits<double>::infinity();
    std::size_t spurious = 0;
    bool certified = false;
    double drift = 0.0;
};

/// Real form of the pole matrix: Re and Im of the cot rows of the upper poles,
/// then the sample row, each scaled to unit max norm.
RealMatrix pole_matrix(std::span<const cplx> eta, const SampleGrid& g)
{
    const std::size_t m = eta.size();
    const std::size_t n = g.size();
    RealMatrix d(static_cast<Eigen::Index>(2 * m + 1), static_cast<Eigen::Index>(n));
    const auto& x = g.locations();
    for (std::size_t j = 0; j < m; ++j)
    {
        for (std::size_t k = 0; k < n; ++k)
        {
            const cplx v = detail::ccot(pi * (eta[j] - x[k]));
            d(static_cast<Eigen::Index>(2 * j), static_cast<Eigen::Index>(k)) = v.real();
            d(static_cast<Eigen::Index>(2 * j + 1), static_cast<Eigen::Index>(k)) = v.imag();
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        d(static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(k)) = g.values()[k];
    for (Eigen::Index i = 0; i < d.rows(); ++i)
    {
        const double s = d.row(i).cwiseAbs().maxCoeff();
        if (s > 0.0)
            d.row(i) /= s;
    }
    return d;
}

/// 2m + 2K grid indices: CPQR pivots up to the numerical rank, extra points at
/// the midpoints of the widest gaps, and the trailing column with the smallest
/// residual norm.
std::vector<std::size_t> select_nodes(const RealMatrix& d, std::size_t m, std::size_t k)
{
    const std::size_t n = static_cast<std::size_t>(d.cols());
    const std::size_t want = 2 * m + 2 * k - 1;
    const std::size_t steps = std::min<std::size_t>(want, static_cast<std::size_t>(d.rows()));
    const auto qr = kernels::cpqr(d, steps);

    std::vector<std::size_t> chosen;
    const double r00 = std::abs(qr.R(0, 0));
    for (std::size_t i = 0; i < steps; ++i)
    {
        if (std::abs(qr.R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))) <=
            1e-13 * r00)
            break;
        chosen.push_back(qr.pivots[i]);
    }
    std::vector<bool> used(n, false);
    for (const auto c : chosen)
        used[c] = true;

    while (chosen.size() < want)
    {
        std::vector<std::size_t> sorted = chosen;
        std::sort(sorted.begin(), sorted.end());
        std::size_t best_gap = 0, best_at = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i)
        {
            const std::size_t a = sorted[i];
            const std::size_t b = i + 1 < sorted.size() ? sorted[i + 1] : sorted[0] + n;
            if (b - a > best_gap)
            {
                best_gap = b - a;
                best_at = (a + (b - a) / 2) % n;
            }
        }
        if (best_gap < 2)
            break;
        chosen.push_back(best_at);
        used[best_at] = true;
    }

    std::size_t last = n;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
    {
        if (used[j])
            continue;
        const double nj = qr.residual_norms(static_cast<Eigen::Index>(j));
        if (nj < smallest)
        {
            smallest = nj;
            last = j;
        }
    }
    if (last < n)
        chosen.push_back(last);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

RealMatrix columns(const RealMatrix& d, std::span<const std::size_t> idx)
{
    RealMatrix out(d.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = d.col(static_cast<Eigen::Index>(idx[i]));
    return out;
}

/// Projects out the component along the node values so the weights satisfy
/// the interpolation constraint exactly.
std::vector<double> constrain(std::vector<double> w, std::span<const double> f)
{
    double wf = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        wf += w[i] * f[i];
        ff += f[i] * f[i];
    }
    if (ff > 0.0)
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] -= wf / ff * f[i];
    return w;
}

std::optional<TrigRational> make_model(const SampleGrid& g,
                                       std::span<const std::size_t> idx,
                                       std::vector<double> w)
{
    std::vector<double> t, f;
    for (const auto i : idx)
    {
        t.push_back(g.locations()[i]);
        f.push_back(g.values()[i]);
    }
    w = constrain(std::move(w), f);
    try
    {
        return TrigRational(std::move(t), std::move(w), std::move(f));
    }
    catch (const Error&)
    {
        return std::nullopt;
    }
}

void score(Attempt& a, const SampleGrid& g, const FitConfig& cfg)
{
    if (!a.model)
        return;
    a.error = grid_error(*a.model, g);
    if (!a.model->has_poles())
    {
        a.spurious = a.model->degree();
        return;
    }
    auto sp = spurious_poles(*a.model, cfg.tol, g.scale());
    const auto& poles = a.model->poles().poles;
    for (std::size_t i = 0; i < poles.size(); ++i)
        if (std::abs(poles[i].imag()) <= 1e-10)
            sp.push_back(i);
    std::sort(sp.begin(), sp.end());
    a.spurious = static_cast<std::size_t>(std::unique(sp.begin(), sp.end()) - sp.begin());
}

Attempt attempt_k0(const RealMatrix& d, const SampleGrid& g, std::size_t m,
                   const FitConfig& cfg)
{
    Attempt a;
    const auto idx = select_nodes(d, m, 0);
    if (idx.size() != 2 * m)
        return a;
    RealVector sigma;
    const RealVector v = kernels::trailing_right_singular_vector(columns(d, idx), &sigma);
    const auto p = sigma.size();
    if (p < 2 || sigma(0) <= 0.0)
        return a;
    const double ratio = sigma(p - 1) / sigma(0);
    const double gap = sigma(p - 2) / std::max(sigma(p - 1), 1e-300);
    if (!(ratio <= 1e-12 && gap >= 1e3))
        return a;
    a.certified = true;
    a.model = make_model(g, idx, std::vector<double>(v.data(), v.data() + v.size()));
    score(a, g, cfg);
    return a;
}

double nearest_gap(cplx eta, std::span<const double> t, std::size_t i)
{
    return circular_distance(eta.real(), t[i]);
}

Attempt attempt_k(const RealMatrix& d, const SampleGrid& g, std::size_t m,
                  std::size_t k, const FitConfig& cfg)
{
    Attempt a;
    auto idx = select_nodes(d, m, k);
    if (idx.size() != 2 * m + 2 * k || idx.size() >= g.size())
        return a;

    const RealMatrix dt = columns(d, idx);
    const Eigen::Index cols = dt.cols();
    Eigen::JacobiSVD<RealMatrix> svd(dt, Eigen::ComputeFullV);
    const auto& sig = svd.singularValues();
    const double s1 = sig.size() > 0 ? sig(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sig.size(); ++i)
        if (sig(i) > 1e-8 * s1)
            ++rank;
    const RealMatrix q = svd.matrixV().rightCols(cols - rank);
    if (q.cols() == 0)
        return a;

    // C restricted to non-node rows of the construction grid
    const auto& x = g.locations();
    const auto& y = g.values();
    std::vector<bool> is_node(g.size(), false);
    for (const auto i : idx)
        is_node[i] = true;
    RealMatrix c(static_cast<Eigen::Index>(g.size() - idx.size()), cols);
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        if (is_node[j])
            continue;
        for (Eigen::Index l = 0; l < cols; ++l)
        {
            const std::size_t tl = idx[static_cast<std::size_t>(l)];
            c(row, l) = (y[j] - y[tl]) / std::tan(pi * circular_offset(x[j], x[tl]));
        }
        ++row;
    }
    const RealVector eta = kernels::trailing_right_singular_vector(c * q);
    const RealVector gam = q * eta;
    const auto big = make_model(g, idx, std::vector<double>(gam.data(), gam.data() + gam.size()));
    if (!big || !big->has_poles())
        return a;

    const PoleSet& ps = big->poles();
    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(ps.residues[i]) < std::abs(ps.residues[j]);
    });

    const auto& t = big->nodes();
    std::vector<bool> removed(idx.size(), false);
    for (std::size_t p = 0; p < k && p < order.size(); ++p)
    {
        const cplx e = ps.poles[order[p]];
        for (int rep = 0; rep < 2; ++rep)
        {
            std::size_t near = idx.size();
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (!removed[i] && (near == idx.size() ||
                                    nearest_gap(e, t, i) < nearest_gap(e, t, near)))
                    near = i;
            if (near < idx.size())
                removed[near] = true;
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (!removed[i])
            keep.push_back(idx[i]);

    const auto ws = solve_weights_full(g, keep);
    a.model = make_model(g, keep, ws.weights);
    score(a, g, cfg);

    if (a.model && a.model->has_poles())
    {
        std::vector<cplx> kept_poles;
        for (std::size_t p = k; p < order.size(); ++p)
            kept_poles.push_back(ps.poles[order[p]]);
        for (const auto& e : a.model->poles().poles)
        {
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& q2 : kept_poles)
                dmin = std::min(dmin, std::abs(e - q2));
            if (std::isfinite(dmin))
                a.drift = std::max(a.drift, dmin);
        }
    }
    return a;
}

TrigRational constant_model(double c)
{
    return TrigRational({0.0, 0.5}, {1.0, 1.0}, {0.0, 0.0}, c);
}

} // namespace

IftResult ift(const ExpSum& s, const FitConfig& cfg)
{
    cfg.validate();
    IftReport rep;
    const std::size_t m = s.size();
    if (m == 0)
    {
        rep.converged = true;
        rep.notes.push_back("constant sum");
        return {constant_model(s.constant_term()), rep};
    }

    std::vector<cplx> eta(m);
    for (std::size_t j = 0; j < m; ++j)
        eta[j] = detail::x_from_mu(std::conj(std::exp(s.exponents()[j])));

    const std::int64_t neps = s.resolution();
    constexpr std::size_t cap = std::size_t(1) << 17;
    std::size_t n = std::max<std::size_t>(2 * (2 * static_cast<std::size_t>(neps) + 1), 64 * m);
    if (n > cap)
    {
        n = cap;
        rep.notes.push_back("construction grid capped at " + std::to_string(cap));
    }

    double offset = 0.0;
    auto accepted = [&](const Attempt& a, const SampleGrid& g) {
        return a.model && a.spurious == 0 && a.error <= 1e2 * cfg.tol * g.scale();
    };
    auto finish = [&](const Attempt& a, const SampleGrid& g) {
        rep.error = a.error;
        rep.scale = g.scale();
        rep.grid_size = g.size();
        rep.spurious = a.spurious;
        rep.k0_certified = a.certified;
        rep.pole_drift = a.drift;
        rep.converged = accepted(a, g);
        const auto& r = *a.model;
        return IftResult{TrigRational(r.nodes(), r.weights(), r.node_values(), offset), rep};
    };

    std::optional<Attempt> best;
    std::optional<SampleGrid> best_grid;
    auto keep_best = [&](Attempt a, const SampleGrid& g) {
        if (!a.model)
            return;
        if (!best || a.spurious < best->spurious ||
            (a.spurious == best->spurious && a.error < best->error))
        {
            best = std::move(a);
            best_grid = g;
        }
    };

    for (int pass = 0; pass < 2; ++pass)
    {
        const SampleGrid g = expsum_samples(s, n, offset);
        if (g.scale() == 0.0)
        {
            rep.converged = true;
            rep.grid_size = n;
            rep.notes.push_back("sum vanishes on the grid");
            return {constant_model(s.constant_term()), rep};
        }
        const RealMatrix d = pole_matrix(eta, g);

        if (pass == 0)
        {
            Attempt a0 = attempt_k0(d, g, m, cfg);
            if (accepted(a0, g))
                return finish(a0, g);
            keep_best(std::move(a0), g);
        }
        const std::size_t k1 = std::max<std::size_t>(cfg.oversample_K, 1);
        for (std::size_t k = k1; k <= std::max<std::size_t>(k1, 2); ++k)
        {
            if (2 * m + 2 * k >= n)
                break;
            Attempt a = attempt_k(d, g, m, k, cfg);
            rep.oversample_K = k;
            if (accepted(a, g))
                return finish(a, g);
            keep_best(std::move(a), g);
        }
        if (n >= cap)
            break;
        n = std::min(2 * n, cap);
        rep.regridded = true;
        rep.notes.push_back("spurious poles or inaccurate weights; doubled the grid");
    }

    // lower-accuracy pronyAAA on samples of the sum
    {
        const SampleGrid full = SampleGrid::sample(
            [&](double x) { return eval_expsum_time(s, x); }, n);
        FitConfig relaxed = cfg;
        relaxed.max_degree = std::max<std::size_t>(cfg.max_degree, m);
        for (double factor : {1e2, 1e4, 1e6})
        {
            relaxed.tol = std::min(cfg.tol * factor, 1e-2);
            try
            {
                auto fit = fit_pronyaaa(full, relaxed);
                if (fit.report.spurious_after == 0)
                {
                    rep.fell_back = true;
                    rep.error = fit.report.error;
                    rep.scale = full.scale();
                    rep.grid_size = n;
                    rep.spurious = 0;
                    rep.converged = fit.report.error <= 1e2 * cfg.tol * full.scale();
                    rep.notes.push_back("fell back to pronyAAA at tol " +
                                        std::to_string(relaxed.tol));
                    return {std::move(fit.model), rep};
                }
            }
            catch (const Error&)
            {
                break;
            }
        }
    }
    rep.notes.push_back("fallbacks exhausted");
    if (best)
    {
        auto out = finish(*best, *best_grid);
        out.report.fell_back = true;
        return out;
    }
    rep.fell_back = true;
    return {constant_model(s.constant_term()), rep};
}

} // namespace trigfit
