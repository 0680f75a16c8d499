#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace trigfit::kernels
{

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using CplxMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using CplxVector = Eigen::VectorXcd;

//-----------------------------------------------------------------------------
// Dense SVD
//-----------------------------------------------------------------------------

/// Thin SVD, A = U diag(sigma) V^*. sigma is nonincreasing. U is left empty
/// when `want_u` is false.
template <typename MatrixT>
struct Svd
{
    MatrixT U;
    RealVector sigma;
    MatrixT V;
};

Svd<RealMatrix> svd(const RealMatrix& a, bool want_u = true);
Svd<CplxMatrix> svd(const CplxMatrix& a, bool want_u = true);

/// Right singular vector for the smallest singular value of a tall matrix,
/// computed through a Householder QR followed by a Jacobi SVD of the
/// triangular factor. Returns the vector and writes the singular values
/// (nonincreasing) to `sigma_out` when non-null.
RealVector trailing_right_singular_vector(const RealMatrix& a,
                                          RealVector* sigma_out = nullptr);

//-----------------------------------------------------------------------------
// Column-pivoted QR
//-----------------------------------------------------------------------------

template <typename MatrixT>
struct Cpqr
{
    MatrixT Q;                        ///< rows x steps, orthonormal columns
    MatrixT R;                        ///< steps x cols, upper trapezoidal
    std::vector<std::size_t> pivots;  ///< full column permutation
    RealVector residual_norms;        ///< per original column, after `steps`
    RealVector initial_norms;         ///< per original column
};

/// Greedy max-norm column pivoting, stopping after `steps` Householder
/// reflections (all of min(rows, cols) when steps is 0). Ties go to the lowest
/// column index. A P = Q R holds on the leading `steps` columns and the
/// trailing block is left as the residual, whose column norms are returned.
Cpqr<RealMatrix> cpqr(const RealMatrix& a, std::size_t steps = 0);
Cpqr<CplxMatrix> cpqr(const CplxMatrix& a, std::size_t steps = 0);

//-----------------------------------------------------------------------------
// Eigenvalue problems
//-----------------------------------------------------------------------------

struct GenEig
{
    std::vector<cplx> alpha;
    std::vector<cplx> beta;
    /// alpha/beta, or infinity where |beta| vanishes relative to |alpha|.
    std::vector<cplx> values;
    std::vector<bool> infinite;
};

/// Generalized eigenvalues of the pencil (E, B): E y = mu B y (LAPACK QZ).
/// Eigenvalues with |mu| > infinite_cutoff are classified as infinite.
GenEig gen_eig(const CplxMatrix& e, const CplxMatrix& b,
               double infinite_cutoff = 1e12);

/// Roots of sum_k c_k z^k through companion-matrix eigenvalues. Leading and
/// trailing coefficients below 1e-14 * max|c| are stripped first, so zero
/// roots introduced by vanishing low-order coefficients are not returned.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

//-----------------------------------------------------------------------------
// Discrete Fourier transform (any length)
//-----------------------------------------------------------------------------

/// y_k = sum_j x_j exp(-2 pi i j k / n)
std::vector<cplx> dft(std::span<const cplx> x);
/// x_j = (1/n) sum_k y_k exp(2 pi i j k / n)
std::vector<cplx> idft(std::span<const cplx> y);

//-----------------------------------------------------------------------------
// Structured matrix-vector products
//-----------------------------------------------------------------------------

/// y_j = sum_k h_{j+k} x_k for j = 0..rows-1. Requires h.size() >= rows +
/// x.size() - 1. Uses FFT convolution when rows + x.size() > 512.
std::vector<cplx> hankel_matvec(std::span<const cplx> h, std::size_t rows,
                                std::span<const cplx> x);

/// y_j = sum_k t_{j-k} x_k for j = 0..rows-1, where the diagonal sequence is
/// stored with offset: t_{d} = diag[d + x.size() - 1]. Requires diag.size()
/// >= rows + x.size() - 1.
std::vector<cplx> toeplitz_matvec(std::span<const cplx> diag, std::size_t rows,
                                  std::span<const cplx> x);

} // namespace trigfit::kernels
