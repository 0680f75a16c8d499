#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "trigfit/core.hpp"

namespace trigfit::detail
{

/// cot(z) without overflow for large |Im z|.
inline cplx ccot(cplx z)
{
    const cplx i(0.0, 1.0);
    if (z.imag() >= 0.0)
    {
        const cplx w = std::exp(2.0 * i * z);
        return i * (w + 1.0) / (w - 1.0);
    }
    const cplx w = std::exp(-2.0 * i * z);
    return i * (1.0 + w) / (1.0 - w);
}

/// csc(z) without overflow for large |Im z|.
inline cplx ccsc(cplx z)
{
    const cplx i(0.0, 1.0);
    if (z.imag() >= 0.0)
    {
        const cplx e = std::exp(i * z);
        return 2.0 * i * e / (e * e - 1.0);
    }
    const cplx e = std::exp(-i * z);
    return 2.0 * i * e / (1.0 - e * e);
}

/// z-plane point of an x-plane location.
inline cplx unit_point(cplx x)
{
    return std::exp(cplx(0.0, two_pi) * x);
}

/// x = log(mu) / (2 pi i) with the real part wrapped to [0, 1).
inline cplx x_from_mu(cplx mu)
{
    const double r = std::max(std::abs(mu), 1e-290);
    const double re = wrap_unit(std::arg(mu) / two_pi);
    return {re, -std::log(r) / two_pi};
}

/// Distinct indices drawn uniformly from [0, n], at most `count` of them,
/// always including 0 and n when count >= 2. Deterministic in `seed`.
inline std::vector<std::int64_t> validation_indices(std::int64_t n,
                                                    std::size_t count,
                                                    std::uint64_t seed)
{
    std::vector<std::int64_t> out;
    if (n < 0)
        return out;
    if (static_cast<std::uint64_t>(n) + 1 <= count)
    {
        for (std::int64_t k = 0; k <= n; ++k)
            out.push_back(k);
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, n);
    out.push_back(0);
    out.push_back(n);
    while (out.size() < count)
        out.push_back(pick(rng));
    return out;
}

} // namespace trigfit::detail
