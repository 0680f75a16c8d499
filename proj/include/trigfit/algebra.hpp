#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trigfit/core.hpp"
#include "trigfit/pronyaaa.hpp"

namespace trigfit
{

struct CompressResult
{
    ExpSum sum;
    bool converged = false;
    double error = 0.0;     ///< max deviation on the validation indices
    double norm = 0.0;      ///< max |coefficient| over the sampled indices
    std::size_t bound = 0;  ///< column count minus one of the Hankel
    std::size_t rows = 0;   ///< M of the last attempt
    std::vector<std::string> notes;
};

/// Coefficient sequence R(k), k >= 1.
using CoeffFn = std::function<cplx(std::int64_t)>;

/// Prony compression of a coefficient sequence known to be close to a sum of
/// at most `bound` exponentials: (M+1) x (bound+1) Hankel on indices 1.., RPM
/// at an absolute cut of tol * max|R|, validated on 64 seeded indices in
/// [1, n_eps]; M starts at 2 bound and doubles up to n_eps.
CompressResult compress_sequence(const CoeffFn& coeff, double constant,
                                 std::size_t bound, std::int64_t n_eps,
                                 double tol, std::uint64_t seed = 20240611);

CompressResult compress(const ExpSum& s, double tol, std::uint64_t seed = 20240611);

/// Concatenation with exponents closer than 1e-13 merged, then compression at
/// `tol` (near machine precision by default).
ExpSum add_expsum(const ExpSum& s, const ExpSum& g, double tol = 1e-14);

/// Product of two sums as the closed-form l*n term list.
ExpSum product_terms(const ExpSum& s, const ExpSum& g);

/// Coefficientwise product S(k) G(k), compressed. The bound counts product
/// terms with |w v| / (1 - |e^(a+b)|) above tol / (l n); the coefficient tail
/// bounds the sample count.
CompressResult conv(const ExpSum& s, const ExpSum& g, double tol = 1e-12,
                    std::uint64_t seed = 20240611);

/// Coefficientwise conj(S(k)) G(k), compressed like conv.
CompressResult corr(const ExpSum& s, const ExpSum& g, double tol = 1e-12,
                    std::uint64_t seed = 20240611);

/// Pointwise product: truncated discrete convolution of the coefficients
/// through a Toeplitz matvec, then compression with bound l + n.
CompressResult mul(const ExpSum& r, const ExpSum& s, double tol = 1e-12,
                   std::uint64_t seed = 20240611);

struct RfunOpResult
{
    TrigRational model;
    FitReport report;
    bool fell_back = false; ///< went through ft / exp-sum arithmetic / ift
};

/// pronyAAA on pointwise sums over max(4 * total nodes, 1024) points, with the
/// exp-sum route as fallback.
RfunOpResult add_rfun(const TrigRational& s, const TrigRational& g,
                      const FitConfig& cfg = {});

/// pronyAAA on pointwise products, with the exp-sum route as fallback.
RfunOpResult mul_rfun(const TrigRational& s, const TrigRational& g,
                      const FitConfig& cfg = {});

} // namespace trigfit
