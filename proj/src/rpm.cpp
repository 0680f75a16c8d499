#include "trigfit/rpm.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "trigfit/numkernels.hpp"

namespace trigfit
{

HankelSystem::HankelSystem(std::vector<cplx> coeffs) : m_v(std::move(coeffs))
{
    if (m_v.size() < 2)
        throw Error(ErrorKind::InvalidArgument, "hankel: too few coefficients");
    const std::size_t n = m_v.size() - 1;
    m_rows = (n + 1) / 2 + 1;
    m_cols = n / 2 + 1;
}

Eigen::MatrixXcd HankelSystem::dense() const
{
    Eigen::MatrixXcd h(static_cast<Eigen::Index>(m_rows),
                       static_cast<Eigen::Index>(m_cols));
    for (std::size_t j = 0; j < m_rows; ++j)
        for (std::size_t k = 0; k < m_cols; ++k)
            h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                m_v[j + k];
    return h;
}

const std::vector<double>& HankelSystem::singular_values() const
{
    if (m_sigma.empty())
    {
        const auto s = kernels::svd(dense(), false);
        m_sigma.assign(s.sigma.data(), s.sigma.data() + s.sigma.size());
    }
    return m_sigma;
}

double auto_tol(std::span<const double> s)
{
    if (s.size() < 4)
        throw Error(ErrorKind::InvalidArgument,
                    "auto_tol: at least 4 singular values required");
    const double s1 = s[0];
    for (std::size_t k = s.size() - 1; k >= 1; --k)
    {
        const double hi = s[k - 1];
        const double lo = s[k];
        if (hi > 0.0 && lo / hi <= 1e-3 && lo <= 1e-2 * s1)
            return std::sqrt(hi * std::max(lo, 1e-300));
    }
    return 1e-12 * s1;
}

std::vector<cplx> prony_roots(std::span<const cplx> c)
{
    std::vector<cplx> out;
    for (const auto& z : kernels::polynomial_roots(c))
    {
        const double r = std::abs(z);
        if (!(r < 1.0))
            continue;
        if (r >= 1.0 - 1e-10)
            out.push_back(z / r * (1.0 - 1e-10));
        else
            out.push_back(z);
    }
    return out;
}

VandermondeFit vandermonde_ls(std::span<const cplx> z, std::span<const cplx> v,
                              std::size_t first)
{
    VandermondeFit out;
    for (const auto& zi : z)
    {
        bool dup = false;
        for (const auto& kept : out.roots)
        {
            if (std::abs(kept - zi) < 1e-12)
            {
                dup = true;
                break;
            }
        }
        if (dup)
            out.merged = true;
        else
            out.roots.push_back(zi);
    }
    const auto rows = static_cast<Eigen::Index>(v.size());
    const auto cols = static_cast<Eigen::Index>(out.roots.size());
    Eigen::VectorXcd rhs(rows);
    for (Eigen::Index j = 0; j < rows; ++j)
        rhs(j) = v[static_cast<std::size_t>(j)];
    if (cols == 0)
    {
        out.residual = rhs.norm();
        return out;
    }
    if (rows < cols)
        throw Error(ErrorKind::InvalidArgument,
                    "vandermonde_ls: more roots than coefficients");

    Eigen::MatrixXcd vm(rows, cols);
    for (Eigen::Index k = 0; k < cols; ++k)
    {
        const cplx zk = out.roots[static_cast<std::size_t>(k)];
        cplx p = std::pow(zk, static_cast<double>(first));
        if (first == 0)
            p = 1.0;
        for (Eigen::Index j = 0; j < rows; ++j)
        {
            vm(j, k) = p;
            p *= zk;
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(vm);
    const Eigen::VectorXcd w = qr.solve(rhs);
    out.weights.assign(w.data(), w.data() + w.size());
    out.residual = (vm * w - rhs).norm();
    return out;
}

namespace
{

RpmResult rpm_core(std::span<const cplx> v, double eps_abs,
                   const kernels::Svd<kernels::CplxMatrix>& s)
{
    RpmResult out;
    out.eps_abs = eps_abs;
    out.singular_values.assign(s.sigma.data(), s.sigma.data() + s.sigma.size());
    const auto cols = static_cast<std::size_t>(s.V.cols());
    out.min_residual = out.singular_values.empty() ? 0.0 : out.singular_values.back();

    std::size_t rank = 0;
    while (rank < out.singular_values.size() && out.singular_values[rank] > eps_abs)
        ++rank;
    out.rank = rank;
    out.success = rank < cols;
    if (!out.success)
    {
        out.notes.push_back("no singular value below the tolerance; smallest is " +
                            std::to_string(out.min_residual));
        rank = cols - 1;
    }
    const double c0 = v[0].real();
    if (rank == 0)
    {
        out.sum = ExpSum(c0);
        return out;
    }

    std::vector<cplx> c(cols);
    for (std::size_t l = 0; l < cols; ++l)
        c[l] = s.V(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(rank));

    const auto tail = v.subspan(1);
    auto solve = [&](std::span<const cplx> nullvec, std::size_t& inside, std::size_t& dropped) {
        auto roots = prony_roots(nullvec);
        inside = roots.size();
        dropped = 0;
        VandermondeFit fit;
        for (int pass = 0; pass < 8; ++pass)
        {
            fit = vandermonde_ls(roots, tail, 1);
            std::vector<cplx> keep;
            for (std::size_t k = 0; k < fit.roots.size(); ++k)
            {
                const double w = std::abs(fit.weights[k]);
                if (w > eps_abs && w * std::abs(fit.roots[k]) > eps_abs)
                    keep.push_back(fit.roots[k]);
            }
            if (keep.size() == fit.roots.size())
                break;
            dropped += fit.roots.size() - keep.size();
            roots = std::move(keep);
        }
        return fit;
    };

    std::size_t dropped = 0;
    auto fit = solve(c, out.roots_inside, dropped);
    out.terms_dropped = dropped;

    // A square-Hankel null vector carries up to N/2 extraneous roots; when they
    // survive the weight cut, retry with the minimal-degree null vector.
    if (fit.roots.size() > rank && rank + 1 < cols)
    {
        const std::size_t rows = v.size() - rank - 1;
        kernels::CplxMatrix hr(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(rank + 1));
        for (std::size_t j = 0; j < rows; ++j)
            for (std::size_t k = 0; k <= rank; ++k)
                hr(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v[j + k];
        const auto sr = kernels::svd(hr, false);
        std::vector<cplx> cr(rank + 1);
        for (std::size_t l = 0; l <= rank; ++l)
            cr[l] = sr.V(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(rank));
        std::size_t inside = 0, dr = 0;
        auto alt = solve(cr, inside, dr);
        if (alt.residual <= std::max(2.0 * fit.residual, eps_abs))
        {
            fit = std::move(alt);
            out.roots_inside = inside;
            out.terms_dropped = dr;
            out.notes.push_back("used the minimal-degree null vector");
        }
    }
    if (fit.merged)
        out.notes.push_back("merged near-coincident roots");

    std::vector<cplx> w, a;
    for (std::size_t k = 0; k < fit.roots.size(); ++k)
    {
        if (fit.weights[k] == 0.0)
            continue;
        w.push_back(fit.weights[k]);
        a.push_back(std::log(fit.roots[k]));
    }
    out.sum = ExpSum(std::move(w), std::move(a), c0);
    return out;
}

void check_coeffs(std::span<const cplx> v)
{
    if (v.size() < 8)
        throw Error(ErrorKind::InvalidArgument,
                    "fit_rpm: at least 8 coefficients (N >= 7) required");
    for (const auto& x : v)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw Error(ErrorKind::InvalidArgument,
                        "fit_rpm: non-finite coefficient");
}

} // namespace

RpmResult fit_rpm(std::span<const cplx> v, const FitConfig& cfg)
{
    cfg.validate();
    check_coeffs(v);
    HankelSystem h(std::vector<cplx>(v.begin(), v.end()));
    const auto s = kernels::svd(h.dense(), false);
    std::vector<double> sigma(s.sigma.data(), s.sigma.data() + s.sigma.size());
    double eps = 0.0;
    if (cfg.auto_tol && sigma.size() >= 4)
        eps = auto_tol(sigma);
    else
        eps = cfg.tol * (sigma.empty() ? 0.0 : sigma[0]);
    return rpm_core(v, eps, s);
}

RpmResult fit_rpm_abs(std::span<const cplx> v, double eps_abs)
{
    check_coeffs(v);
    HankelSystem h(std::vector<cplx>(v.begin(), v.end()));
    const auto s = kernels::svd(h.dense(), false);
    return rpm_core(v, eps_abs, s);
}

} // namespace trigfit
