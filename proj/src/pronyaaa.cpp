#include "trigfit/pronyaaa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "detail.hpp"
#include "trigfit/numkernels.hpp"

namespace trigfit
{

namespace
{

using kernels::RealMatrix;
using kernels::RealVector;

// csc is antiperiodic, so its argument must not be wrapped: every term of the
// quotient has to come from the same branch.
double kernel(Basis basis, double x, double t)
{
    if (basis == Basis::Cot)
        return 1.0 / std::tan(pi * circular_offset(x, t));
    return 1.0 / std::sin(pi * (x - t));
}

// Orthonormal basis of the complement of v (columns), and whether v vanished.
RealMatrix complement_basis(const RealVector& v, bool& degenerate)
{
    const Eigen::Index n = v.size();
    degenerate = v.norm() == 0.0;
    if (degenerate)
        return RealMatrix::Identity(n, n).rightCols(n - 1);
    Eigen::HouseholderQR<RealMatrix> qr{RealMatrix(v)};
    const RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, n);
    return q.rightCols(n - 1);
}

std::vector<bool> node_mask(std::size_t n, std::span<const std::size_t> nodes)
{
    std::vector<bool> mask(n, false);
    for (auto j : nodes)
    {
        if (j >= n)
            throw Error(ErrorKind::InvalidArgument, "node index outside grid");
        if (mask[j])
            throw Error(ErrorKind::InvalidArgument, "repeated node index");
        mask[j] = true;
    }
    return mask;
}

std::vector<std::size_t> grid_indices_of(const TrigRational& r,
                                         const SampleGrid& g, bool& ok)
{
    ok = true;
    std::vector<std::size_t> idx;
    const auto& x = g.locations();
    for (double t : r.nodes())
    {
        auto it = std::lower_bound(x.begin(), x.end(), t - 1e-14);
        if (it != x.end() && std::abs(*it - t) <= 1e-14)
            idx.push_back(static_cast<std::size_t>(it - x.begin()));
        else
            ok = false;
    }
    return idx;
}

SampleGrid shifted(const SampleGrid& g, double c)
{
    std::vector<double> y = g.values();
    for (auto& v : y)
        v -= c;
    return SampleGrid(g.locations(), std::move(y));
}

TrigRational model_from(const SampleGrid& h, std::span<const std::size_t> nodes,
                        std::span<const double> weights, double c)
{
    std::vector<double> t, f;
    for (auto j : nodes)
    {
        t.push_back(h.locations()[j]);
        f.push_back(h.values()[j]);
    }
    return TrigRational(std::move(t), std::vector<double>(weights.begin(), weights.end()),
                        std::move(f), c);
}

} // namespace

WeightSolution solve_weights(const SampleGrid& g,
                             std::span<const std::size_t> nodes, Basis basis)
{
    const std::size_t n = g.size();
    const std::size_t k = nodes.size();
    if (k < 2 || k >= n)
        throw Error(ErrorKind::InvalidArgument,
                    "solve_weights: node count must lie in [2, grid size)");
    const auto mask = node_mask(n, nodes);
    const auto& x = g.locations();
    const auto& y = g.values();

    RealVector f(static_cast<Eigen::Index>(k));
    for (std::size_t l = 0; l < k; ++l)
        f(static_cast<Eigen::Index>(l)) = y[nodes[l]];

    WeightSolution out;
    const RealVector constraint =
        basis == Basis::Cot ? f : RealVector::Ones(static_cast<Eigen::Index>(k));
    const RealMatrix q = complement_basis(constraint, out.flagged);

    RealMatrix c(static_cast<Eigen::Index>(n - k), static_cast<Eigen::Index>(k));
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (mask[j])
            continue;
        for (std::size_t l = 0; l < k; ++l)
        {
            c(row, static_cast<Eigen::Index>(l)) =
                (y[j] - f(static_cast<Eigen::Index>(l))) *
                kernel(basis, x[j], x[nodes[l]]);
        }
        ++row;
    }

    RealVector sigma;
    const RealVector gt = kernels::trailing_right_singular_vector(c * q, &sigma);
    RealVector gamma = q * gt;
    gamma.normalize();
    out.weights.assign(gamma.data(), gamma.data() + gamma.size());
    out.residual = (c * gamma).norm();
    out.sigma_min = sigma.size() > 0 ? sigma(sigma.size() - 1) : 0.0;
    return out;
}

WeightSolution solve_weights_full(const SampleGrid& g,
                                  std::span<const std::size_t> nodes)
{
    if (nodes.size() % 2 != 0)
        throw Error(ErrorKind::InvalidArgument,
                    "solve_weights_full: node count must be even");
    return solve_weights(g, nodes, Basis::Cot);
}

WeightSolution solve_weights_half(const SampleGrid& g,
                                  std::span<const std::size_t> nodes)
{
    if (nodes.size() % 2 != 1)
        throw Error(ErrorKind::InvalidArgument,
                    "solve_weights_half: node count must be odd");
    return solve_weights(g, nodes, Basis::Csc);
}

std::vector<double> grid_residual(const SampleGrid& g,
                                  std::span<const std::size_t> nodes,
                                  std::span<const double> weights, Basis basis)
{
    const std::size_t n = g.size();
    const auto mask = node_mask(n, nodes);
    const auto& x = g.locations();
    const auto& y = g.values();
    std::vector<double> res(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
    {
        if (mask[j])
            continue;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t l = 0; l < nodes.size(); ++l)
        {
            const double kv =
                weights[l] * kernel(basis, x[j], x[nodes[l]]);
            num += kv * y[nodes[l]];
            den += kv;
        }
        const double r = std::abs(y[j] - num / den);
        res[j] = std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
    }
    return res;
}

std::size_t greedy_pick(std::span<const double> residual)
{
    std::size_t best = 0;
    double value = -1.0;
    for (std::size_t j = 0; j < residual.size(); ++j)
    {
        if (residual[j] > value)
        {
            value = residual[j];
            best = j;
        }
    }
    return best;
}

double grid_error(const TrigRational& r, const SampleGrid& g)
{
    std::vector<double> t = r.nodes();
    std::sort(t.begin(), t.end());
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
    {
        const double xj = g.locations()[j];
        auto it = std::lower_bound(t.begin(), t.end(), xj);
        bool at_node = false;
        if (it != t.end() && circular_distance(xj, *it) <= 1e-14)
            at_node = true;
        if (it != t.begin() && circular_distance(xj, *(it - 1)) <= 1e-14)
            at_node = true;
        if (circular_distance(xj, t.front()) <= 1e-14 ||
            circular_distance(xj, t.back()) <= 1e-14)
            at_node = true;
        if (at_node)
            continue;
        const double e = std::abs(g.values()[j] - r(xj));
        err = std::max(err, std::isfinite(e) ? e
                                             : std::numeric_limits<double>::infinity());
    }
    return err;
}

std::vector<std::size_t> spurious_poles(const TrigRational& r, double tol,
                                        double scale)
{
    std::vector<std::size_t> out;
    if (!r.has_poles())
        return out;
    const auto& p = r.poles();
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        const double im = p.poles[i].imag();
        const double modulus = std::exp(-two_pi * im);
        bool bad = im <= 1e-12;
        if (!bad && modulus > 0.0)
            bad = std::abs(p.residues[i]) / modulus <= tol * 1e-2 * scale;
        if (bad)
            out.push_back(i);
    }
    return out;
}

CleanupResult cleanup(const TrigRational& r, const SampleGrid& g,
                      const FitConfig& cfg)
{
    CleanupResult out{r};
    const double scale = g.scale();
    const double pre_err = grid_error(r, g);
    out.error = pre_err;
    const auto initial = spurious_poles(r, cfg.tol, scale);
    out.spurious_before = initial.size();
    out.spurious_after = initial.size();
    if (initial.empty())
        return out;

    bool ok = false;
    auto idx = grid_indices_of(r, g, ok);
    if (!ok)
    {
        out.reverted = true;
        return out;
    }
    const bool converged_pre = pre_err <= cfg.tol * scale;
    const SampleGrid h = shifted(g, r.mean_offset());

    TrigRational current = r;
    std::vector<std::size_t> nodes = idx;
    bool accepted = false;
    std::size_t removed_total = 0;
    for (int round = 0; round < 16; ++round)
    {
        const auto bad = spurious_poles(current, cfg.tol, scale);
        if (bad.empty())
            break;
        std::vector<bool> drop(nodes.size(), false);
        std::size_t dropped = 0;
        for (auto i : bad)
        {
            const double loc = current.poles().poles[i].real();
            for (int rep = 0; rep < 2; ++rep)
            {
                std::size_t best = nodes.size();
                double dist = std::numeric_limits<double>::infinity();
                for (std::size_t l = 0; l < nodes.size(); ++l)
                {
                    if (drop[l])
                        continue;
                    const double d = circular_distance(h.locations()[nodes[l]], loc);
                    if (d < dist)
                    {
                        dist = d;
                        best = l;
                    }
                }
                if (best < nodes.size())
                {
                    drop[best] = true;
                    ++dropped;
                }
            }
        }
        if (nodes.size() - dropped < 2)
            break;
        std::vector<std::size_t> kept;
        for (std::size_t l = 0; l < nodes.size(); ++l)
            if (!drop[l])
                kept.push_back(nodes[l]);
        const auto w = solve_weights_full(h, kept);
        TrigRational cand = model_from(h, kept, w.weights, r.mean_offset());
        const double err = grid_error(cand, g);
        const bool pass =
            converged_pre ? err <= cfg.tol * scale : err <= 2.0 * pre_err;
        if (!pass)
            break;
        current = std::move(cand);
        nodes = std::move(kept);
        removed_total += dropped;
        accepted = true;
        out.error = err;
    }

    if (!accepted)
    {
        out.reverted = true;
        return out;
    }
    out.model = current;
    out.nodes_removed = removed_total;
    out.spurious_after = spurious_poles(current, cfg.tol, scale).size();
    return out;
}

AaaFit fit_pronyaaa(const SampleGrid& g, const FitConfig& cfg)
{
    cfg.validate();
    const double mean = g.mean();
    const double scale = g.scale();
    if (!(scale > 0.0))
        throw Error(ErrorKind::DegenerateInput,
                    "pronyaaa: all sample values are equal");
    const SampleGrid h = shifted(g, mean);
    const std::size_t n = h.size();
    const double target = cfg.tol * scale;

    std::vector<double> absval(n);
    for (std::size_t j = 0; j < n; ++j)
        absval[j] = std::abs(h.values()[j]);
    std::vector<std::size_t> nodes{greedy_pick(absval)};
    absval[nodes[0]] = -1.0;
    nodes.push_back(greedy_pick(absval));

    std::vector<double> history;
    std::vector<std::size_t> best_nodes;
    std::vector<double> best_weights;
    double best_err = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;

    auto pick_new = [&](const std::vector<double>& res) {
        std::size_t j = greedy_pick(res);
        if (std::find(nodes.begin(), nodes.end(), j) != nodes.end())
        {
            for (j = 0; j < n; ++j)
                if (std::find(nodes.begin(), nodes.end(), j) == nodes.end())
                    break;
        }
        return j;
    };

    while (true)
    {
        ++iterations;
        const auto w = solve_weights_full(h, nodes);
        const auto res = grid_residual(h, nodes, w.weights, Basis::Cot);
        const double err = *std::max_element(res.begin(), res.end());
        history.push_back(err);
        if (err < best_err)
        {
            best_err = err;
            best_nodes = nodes;
            best_weights = w.weights;
        }
        if (err <= target)
        {
            converged = true;
            break;
        }
        const std::size_t m = nodes.size() / 2;
        if (m >= cfg.max_degree || 4 * (m + 1) > n)
            break;

        nodes.push_back(pick_new(res));
        const auto wh = solve_weights_half(h, nodes);
        const auto resh = grid_residual(h, nodes, wh.weights, Basis::Csc);
        nodes.push_back(pick_new(resh));
    }

    TrigRational fitted = model_from(h, best_nodes, best_weights, mean);
    FitReport report;
    report.iterations = iterations;
    report.scale = scale;
    if (!converged)
        report.notes.push_back("max_degree reached without meeting tol");

    auto cleaned = cleanup(fitted, g, cfg);
    report.spurious_before = cleaned.spurious_before;
    report.spurious_after = cleaned.spurious_after;
    report.nodes_removed = cleaned.nodes_removed;
    report.cleanup_reverted = cleaned.reverted;
    if (cleaned.reverted)
        report.notes.push_back("cleanup could not remove spurious poles "
                               "without degrading the fit");

    AaaFit out{cleaned.model, report, {}, std::move(history)};
    out.report.degree = out.model.degree();
    out.report.error = grid_error(out.model, g);
    out.report.converged = converged && out.report.error <= target;

    bool ok = false;
    out.state.chosen_nodes = grid_indices_of(out.model, g, ok);
    out.state.m = out.model.degree();
    out.state.half_step = false;
    out.state.residual.assign(n, 0.0);
    std::vector<bool> mask(n, false);
    for (auto j : out.state.chosen_nodes)
        mask[j] = true;
    for (std::size_t j = 0; j < n; ++j)
        if (!mask[j])
            out.state.residual[j] = std::abs(g.values()[j] - out.model(g.locations()[j]));
    return out;
}

} // namespace trigfit
