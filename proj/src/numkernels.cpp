#include "trigfit/numkernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fftw3.h>

#include "trigfit/errors.hpp"

namespace trigfit::kernels
{

namespace
{

template <typename MatrixT>
Svd<MatrixT> svd_impl(const MatrixT& a, bool want_u)
{
    Svd<MatrixT> out;
    if (a.rows() == 0 || a.cols() == 0)
    {
        out.sigma.resize(0);
        return out;
    }
    if (!a.allFinite())
    {
        throw Error(ErrorKind::Numerical, "svd: non-finite matrix entries");
    }
    const unsigned opts =
        (want_u ? Eigen::ComputeThinU : 0) | Eigen::ComputeThinV;
    if (std::min(a.rows(), a.cols()) <= 48)
    {
        Eigen::JacobiSVD<MatrixT> solver(a, opts);
        out.sigma = solver.singularValues();
        out.V = solver.matrixV();
        if (want_u)
            out.U = solver.matrixU();
    }
    else
    {
        Eigen::BDCSVD<MatrixT> solver(a, opts);
        if (solver.info() != Eigen::Success)
        {
            throw Error(ErrorKind::Numerical, "svd: no convergence");
        }
        out.sigma = solver.singularValues();
        out.V = solver.matrixV();
        if (want_u)
            out.U = solver.matrixU();
    }
    return out;
}

template <typename Scalar>
double abs2(const Scalar& s)
{
    return std::norm(s);
}

template <typename MatrixT>
Cpqr<MatrixT> cpqr_impl(const MatrixT& a, std::size_t steps)
{
    using Scalar = typename MatrixT::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const auto max_steps = static_cast<std::size_t>(std::min(rows, cols));
    if (steps == 0 || steps > max_steps)
        steps = max_steps;

    MatrixT w = a;
    Cpqr<MatrixT> out;
    out.initial_norms = a.colwise().norm().transpose();
    RealVector norms = out.initial_norms;

    std::vector<bool> taken(static_cast<std::size_t>(cols), false);
    std::vector<Vec> reflectors;
    reflectors.reserve(steps);

    for (std::size_t k = 0; k < steps; ++k)
    {
        const auto kk = static_cast<Eigen::Index>(k);
        Eigen::Index p = -1;
        double best = -1.0;
        for (Eigen::Index j = 0; j < cols; ++j)
        {
            if (!taken[static_cast<std::size_t>(j)] && norms(j) > best)
            {
                best = norms(j);
                p = j;
            }
        }
        taken[static_cast<std::size_t>(p)] = true;
        out.pivots.push_back(static_cast<std::size_t>(p));

        // Householder reflector mapping w(k:, p) onto a multiple of e_1.
        Vec v = w.col(p).tail(rows - kk);
        const double xnorm = v.norm();
        if (xnorm > 0.0)
        {
            Scalar phase = Scalar(1);
            if (std::abs(v(0)) > 0.0)
                phase = v(0) / std::abs(v(0));
            v(0) += phase * xnorm;
            v.normalize();
        }
        else
        {
            v.setZero();
        }
        reflectors.push_back(v);

        if (xnorm > 0.0)
        {
            for (Eigen::Index j = 0; j < cols; ++j)
            {
                if (taken[static_cast<std::size_t>(j)] && j != p)
                    continue;
                auto col = w.col(j).tail(rows - kk);
                const Scalar s = v.dot(col); // v^* col
                col -= Scalar(2) * s * v;
            }
        }
        for (Eigen::Index j = 0; j < cols; ++j)
        {
            if (taken[static_cast<std::size_t>(j)])
                norms(j) = 0.0;
            else
                norms(j) = w.col(j).tail(rows - kk - 1).norm();
        }
    }

    for (Eigen::Index j = 0; j < cols; ++j)
    {
        if (!taken[static_cast<std::size_t>(j)])
            out.pivots.push_back(static_cast<std::size_t>(j));
    }
    out.residual_norms = norms;

    const auto s = static_cast<Eigen::Index>(steps);
    out.R = MatrixT::Zero(s, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        const auto src = static_cast<Eigen::Index>(out.pivots[j]);
        const Eigen::Index top = std::min<Eigen::Index>(j + 1, s);
        out.R.col(j).head(top) = w.col(src).head(top);
    }

    out.Q = MatrixT::Identity(rows, s);
    for (Eigen::Index k = s - 1; k >= 0; --k)
    {
        const Vec& v = reflectors[static_cast<std::size_t>(k)];
        auto block = out.Q.bottomRows(rows - k);
        const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> vh = v.adjoint() * block;
        block -= Scalar(2) * v * vh;
    }
    return out;
}

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<cplx> fftw_transform(std::span<const cplx> in, int sign)
{
    const auto n = in.size();
    std::vector<cplx> out(n);
    if (n == 0)
        return out;
    std::vector<cplx> buf(in.begin(), in.end());
    auto* ip = reinterpret_cast<fftw_complex*>(buf.data());
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), ip, op, sign,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<cplx> linear_convolution(std::span<const cplx> a,
                                     std::span<const cplx> b)
{
    const std::size_t n = a.size() + b.size() - 1;
    std::vector<cplx> pa(n, cplx(0.0)), pb(n, cplx(0.0));
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    auto fa = dft(pa);
    const auto fb = dft(pb);
    for (std::size_t i = 0; i < n; ++i)
        fa[i] *= fb[i];
    return idft(fa);
}

} // namespace

Svd<RealMatrix> svd(const RealMatrix& a, bool want_u)
{
    return svd_impl(a, want_u);
}

Svd<CplxMatrix> svd(const CplxMatrix& a, bool want_u)
{
    return svd_impl(a, want_u);
}

RealVector trailing_right_singular_vector(const RealMatrix& a,
                                          RealVector* sigma_out)
{
    const Eigen::Index n = a.cols();
    if (n == 0)
        return RealVector(0);
    if (n == 1)
    {
        if (sigma_out)
            *sigma_out = RealVector::Constant(1, a.norm());
        return RealVector::Ones(1);
    }
    if (a.rows() < n)
    {
        // Underdetermined: the full V is needed to reach the null space.
        Eigen::JacobiSVD<RealMatrix> solver(a, Eigen::ComputeFullV);
        if (sigma_out)
        {
            RealVector s = RealVector::Zero(n);
            s.head(solver.singularValues().size()) = solver.singularValues();
            *sigma_out = s;
        }
        return solver.matrixV().col(n - 1);
    }
    Eigen::HouseholderQR<RealMatrix> qr(a);
    const RealMatrix r =
        qr.matrixQR().topRows(n).template triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<RealMatrix> solver(r, Eigen::ComputeFullV);
    if (sigma_out)
        *sigma_out = solver.singularValues();
    return solver.matrixV().col(n - 1);
}

Cpqr<RealMatrix> cpqr(const RealMatrix& a, std::size_t steps)
{
    return cpqr_impl(a, steps);
}

Cpqr<CplxMatrix> cpqr(const CplxMatrix& a, std::size_t steps)
{
    return cpqr_impl(a, steps);
}

GenEig gen_eig(const CplxMatrix& e, const CplxMatrix& b, double infinite_cutoff)
{
    if (e.rows() != e.cols() || b.rows() != b.cols() || e.rows() != b.rows())
    {
        throw Error(ErrorKind::InvalidArgument, "gen_eig: shape mismatch");
    }
    if (!e.allFinite() || !b.allFinite())
    {
        throw Error(ErrorKind::Numerical, "gen_eig: non-finite pencil");
    }
    const auto n = static_cast<lapack_int>(e.rows());
    GenEig out;
    if (n == 0)
        return out;

    CplxMatrix ea = e; // column-major copies, overwritten by LAPACK
    CplxMatrix ba = b;
    out.alpha.resize(static_cast<std::size_t>(n));
    out.beta.resize(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_zggev(
        LAPACK_COL_MAJOR, 'N', 'N', n, ea.data(), n, ba.data(), n,
        out.alpha.data(), out.beta.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
    {
        throw Error(ErrorKind::Numerical,
                    "gen_eig: QZ iteration failed (info=" +
                        std::to_string(info) + ")");
    }
    out.values.resize(out.alpha.size());
    out.infinite.resize(out.alpha.size());
    for (std::size_t i = 0; i < out.alpha.size(); ++i)
    {
        const double na = std::abs(out.alpha[i]);
        const double nb = std::abs(out.beta[i]);
        const bool inf = nb == 0.0 || na > infinite_cutoff * nb;
        out.infinite[i] = inf;
        out.values[i] = inf ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                            : out.alpha[i] / out.beta[i];
    }
    return out;
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs)
{
    double cmax = 0.0;
    for (const auto& c : coeffs)
        cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0)
        return {};
    const double cut = 1e-14 * cmax;
    std::size_t lo = 0;
    std::size_t hi = coeffs.size();
    while (lo < hi && std::abs(coeffs[lo]) <= cut)
        ++lo;
    while (hi > lo && std::abs(coeffs[hi - 1]) <= cut)
        --hi;
    if (hi - lo < 2)
        return {};
    const auto deg = static_cast<Eigen::Index>(hi - lo - 1);
    const cplx lead = coeffs[hi - 1];

    CplxMatrix comp = CplxMatrix::Zero(deg, deg);
    for (Eigen::Index i = 1; i < deg; ++i)
        comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i)
        comp(i, deg - 1) = -coeffs[lo + static_cast<std::size_t>(i)] / lead;

    std::vector<cplx> w(static_cast<std::size_t>(deg));
    const auto n = static_cast<lapack_int>(deg);
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, comp.data(), n, w.data(),
                      nullptr, 1, nullptr, 1);
    if (info != 0)
    {
        throw Error(ErrorKind::Numerical, "polynomial_roots: eigensolver failed");
    }
    return w;
}

std::vector<cplx> dft(std::span<const cplx> x)
{
    return fftw_transform(x, FFTW_FORWARD);
}

std::vector<cplx> idft(std::span<const cplx> y)
{
    auto out = fftw_transform(y, FFTW_BACKWARD);
    const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (auto& v : out)
        v *= scale;
    return out;
}

std::vector<cplx> hankel_matvec(std::span<const cplx> h, std::size_t rows,
                                std::span<const cplx> x)
{
    const std::size_t n = x.size();
    std::vector<cplx> y(rows, cplx(0.0));
    if (rows == 0 || n == 0)
        return y;
    if (h.size() < rows + n - 1)
    {
        throw Error(ErrorKind::InvalidArgument,
                    "hankel_matvec: sequence too short");
    }
    if (rows + n <= 512)
    {
        for (std::size_t j = 0; j < rows; ++j)
        {
            cplx acc(0.0);
            for (std::size_t k = 0; k < n; ++k)
                acc += h[j + k] * x[k];
            y[j] = acc;
        }
        return y;
    }
    std::vector<cplx> xr(x.rbegin(), x.rend());
    const auto conv = linear_convolution(h.first(rows + n - 1), xr);
    for (std::size_t j = 0; j < rows; ++j)
        y[j] = conv[j + n - 1];
    return y;
}

std::vector<cplx> toeplitz_matvec(std::span<const cplx> diag, std::size_t rows,
                                  std::span<const cplx> x)
{
    const std::size_t n = x.size();
    std::vector<cplx> y(rows, cplx(0.0));
    if (rows == 0 || n == 0)
        return y;
    if (diag.size() < rows + n - 1)
    {
        throw Error(ErrorKind::InvalidArgument,
                    "toeplitz_matvec: sequence too short");
    }
    if (rows + n <= 512)
    {
        for (std::size_t j = 0; j < rows; ++j)
        {
            cplx acc(0.0);
            for (std::size_t k = 0; k < n; ++k)
                acc += diag[j + n - 1 - k] * x[k];
            y[j] = acc;
        }
        return y;
    }
    const auto conv = linear_convolution(diag.first(rows + n - 1), x);
    for (std::size_t j = 0; j < rows; ++j)
        y[j] = conv[j + n - 1];
    return y;
}

} // namespace trigfit::kernels
