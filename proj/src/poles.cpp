#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail.hpp"
#include "trigfit/core.hpp"
#include "trigfit/numkernels.hpp"

namespace trigfit::detail
{

namespace
{

// Arrowhead pencil E = [[A, a^T], [1, diag(z)]], B = diag(0, I). Its finite
// eigenvalues mu solve A + sum_j a_j / (mu - z_j) = 0.
kernels::GenEig arrowhead_eigs(std::span<const double> nodes, double head,
                               const std::vector<cplx>& arm)
{
    const auto n = static_cast<Eigen::Index>(nodes.size());
    kernels::CplxMatrix e = kernels::CplxMatrix::Zero(n + 1, n + 1);
    kernels::CplxMatrix b = kernels::CplxMatrix::Zero(n + 1, n + 1);
    e(0, 0) = head;
    for (Eigen::Index j = 0; j < n; ++j)
    {
        e(0, j + 1) = arm[static_cast<std::size_t>(j)];
        e(j + 1, 0) = 1.0;
        e(j + 1, j + 1) = unit_point(nodes[static_cast<std::size_t>(j)]);
        b(j + 1, j + 1) = 1.0;
    }
    return kernels::gen_eig(e, b, 1e12);
}

// sum_j c_j cot(pi(x - t_j)) and its x-derivative.
void cot_sum(std::span<const double> nodes, std::span<const double> coef,
             cplx x, cplx& value, cplx& deriv)
{
    value = 0.0;
    deriv = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
    {
        const cplx c = ccot(pi * (x - nodes[j]));
        value += coef[j] * c;
        deriv += coef[j] * (-pi) * (1.0 + c * c);
    }
}

cplx newton_polish(std::span<const double> nodes, std::span<const double> coef,
                   cplx x)
{
    cplx v, dv;
    cot_sum(nodes, coef, x, v, dv);
    for (int it = 0; it < 4; ++it)
    {
        if (dv == 0.0 || !std::isfinite(std::abs(v)))
            break;
        const cplx trial = x - v / dv;
        cplx tv, tdv;
        cot_sum(nodes, coef, trial, tv, tdv);
        if (!(std::abs(tv) < std::abs(v)))
            break;
        x = trial;
        v = tv;
        dv = tdv;
    }
    return x;
}

} // namespace

PoleSet compute_poles(std::span<const double> nodes,
                      std::span<const double> weights,
                      std::span<const double> values)
{
    const std::size_t n = nodes.size();
    const std::size_t m = n / 2;
    const double head = 0.5 * std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<cplx> arm(n);
    for (std::size_t j = 0; j < n; ++j)
        arm[j] = weights[j] * unit_point(nodes[j]);

    const auto eig = arrowhead_eigs(nodes, head, arm);
    std::vector<cplx> finite;
    for (std::size_t i = 0; i < eig.values.size(); ++i)
        if (!eig.infinite[i])
            finite.push_back(eig.values[i]);
    std::sort(finite.begin(), finite.end(),
              [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    if (finite.size() < m)
        throw Error(ErrorKind::Numerical,
                    "poles: pencil has too few finite eigenvalues");

    std::vector<double> fw(n);
    for (std::size_t j = 0; j < n; ++j)
        fw[j] = weights[j] * values[j];

    PoleSet out;
    for (std::size_t i = 0; i < m; ++i)
    {
        cplx eta = x_from_mu(finite[i]);
        if (eta.imag() < 1.0)
            eta = newton_polish(nodes, weights, eta);
        eta = cplx(wrap_unit(eta.real()), eta.imag());
        if (!(eta.imag() > 0.0))
            eta = cplx(eta.real(), std::numeric_limits<double>::min());

        cplx num, dnum, den, dden;
        cot_sum(nodes, fw, eta, num, dnum);
        cot_sum(nodes, weights, eta, den, dden);
        const cplx res_x = num / dden;
        const cplx mu = unit_point(eta);
        out.poles.push_back(eta);
        out.residues.push_back(cplx(0.0, two_pi) * mu * res_x);
    }
    return out;
}

std::vector<cplx> compute_zeros(std::span<const double> nodes,
                                std::span<const double> weights,
                                std::span<const double> values, double c)
{
    const std::size_t n = nodes.size();
    const double head =
        0.5 * c * std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<cplx> arm(n);
    std::vector<double> coef(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        coef[j] = weights[j] * (values[j] + c);
        arm[j] = coef[j] * unit_point(nodes[j]);
    }
    const auto eig = arrowhead_eigs(nodes, head, arm);
    std::vector<cplx> out;
    for (std::size_t i = 0; i < eig.values.size(); ++i)
    {
        if (eig.infinite[i])
            continue;
        const cplx mu = eig.values[i];
        if (std::abs(mu) < 1e-12)
            continue;
        cplx x = x_from_mu(mu);
        if (std::abs(x.imag()) < 1.0)
            x = newton_polish(nodes, coef, x);
        out.emplace_back(wrap_unit(x.real()), x.imag());
    }
    return out;
}

} // namespace trigfit::detail
