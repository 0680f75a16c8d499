#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trigfit/core.hpp"

namespace trigfit
{

enum class Basis
{
    Cot, ///< full step, even node count, sum g_j f_j = 0
    Csc, ///< half step, odd node count, sum g_j = 0
};

struct AaaState
{
    std::vector<std::size_t> chosen_nodes;
    /// |y - r| on the grid; entries at chosen nodes are zero.
    std::vector<double> residual;
    std::size_t m = 0;
    bool half_step = false;
};

struct FitReport
{
    bool converged = false;
    std::size_t degree = 0;
    double error = 0.0; ///< max |y - r| over non-node grid points
    double scale = 0.0; ///< max |y - mean|
    std::size_t iterations = 0;
    std::size_t spurious_before = 0;
    std::size_t spurious_after = 0;
    std::size_t nodes_removed = 0;
    bool cleanup_reverted = false;
    std::vector<std::string> notes;
};

struct WeightSolution
{
    std::vector<double> weights; ///< unit 2-norm
    double residual = 0.0;       ///< ||C Q g~||_2
    double sigma_min = 0.0;      ///< smallest singular value of C Q
    bool flagged = false;        ///< degenerate constraint vector
};

struct AaaFit
{
    TrigRational model;
    FitReport report;
    AaaState state;
    /// max grid residual after each full iteration, as used by the stopping test
    std::vector<double> history;
};

/// Greedy barycentric fit of a mean-removed copy of the samples, followed by
/// cleanup. Throws Error(DegenerateInput) when all values are equal.
AaaFit fit_pronyaaa(const SampleGrid& g, const FitConfig& cfg);

/// Weights for the listed grid indices as nodes, from the values stored in
/// `g` (no mean is removed). Minimizes ||C g|| subject to the constraint of
/// the basis, with C_{jl} = (y_j - f_l) k(pi(x_j - t_l)) over non-node rows.
WeightSolution solve_weights(const SampleGrid& g,
                             std::span<const std::size_t> nodes, Basis basis);

/// Cot basis; requires an even node count below the grid size.
WeightSolution solve_weights_full(const SampleGrid& g,
                                  std::span<const std::size_t> nodes);
/// Csc basis; requires an odd node count.
WeightSolution solve_weights_half(const SampleGrid& g,
                                  std::span<const std::size_t> nodes);

/// |y_j - r(x_j)| for the quotient in the given basis (zero at the nodes).
std::vector<double> grid_residual(const SampleGrid& g,
                                  std::span<const std::size_t> nodes,
                                  std::span<const double> weights, Basis basis);

/// Index of the largest residual, lowest index on ties.
std::size_t greedy_pick(std::span<const double> residual);

struct CleanupResult
{
    TrigRational model;
    std::size_t spurious_before = 0;
    std::size_t spurious_after = 0;
    std::size_t nodes_removed = 0;
    bool reverted = false;
    double error = 0.0;
};

/// Indices into r.poles() of poles that are real-valued (Im <= 1e-12) or have
/// negligible residue (|Res_z| / |z| <= tol * 1e-2 * scale).
std::vector<std::size_t> spurious_poles(const TrigRational& r, double tol,
                                        double scale);

/// Removes spurious poles by deleting the nearest nodes and refitting. The
/// nodes of r must be locations of g.
CleanupResult cleanup(const TrigRational& r, const SampleGrid& g,
                      const FitConfig& cfg);

/// max |y_j - r(x_j)| over grid points that are not nodes of r.
double grid_error(const TrigRational& r, const SampleGrid& g);

} // namespace trigfit
