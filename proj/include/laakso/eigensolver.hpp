#pragma once

#include "laakso/graph.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace laakso {

struct EigenResult {
    std::vector<double> values;          ///< ascending
    std::vector<double> residual_norms;  ///< ||A x - lambda x|| / ||x|| per value
    int k_requested = 0;
    int k_converged = 0;
    int iterations = 0;  ///< block steps taken by the iterative path (0 for dense)

    bool converged() const noexcept { return k_converged == k_requested; }
};

enum class EigenMethod { automatic, iterative, dense };

struct EigenOptions {
    EigenMethod method = EigenMethod::automatic;
    std::uint64_t seed = 0;   ///< start block seed
    int block_size = 0;       ///< 0 picks min(k, 128)
    int max_basis = 0;        ///< 0 picks a size from k and the block size
    int max_iterations = 400; ///< block steps, counting those before restarts
    /// Shift for (A - shift I)^{-1}, below the lowest eigenvalue. NaN tries -1
    /// and falls back to one unit below the Gershgorin lower bound.
    double shift = std::numeric_limits<double>::quiet_NaN();
};

/// Size at or below which the dense solver is available.
inline constexpr std::size_t kDenseLimit = 2000;

/**
 * The k algebraically smallest eigenvalues of a symmetric matrix.
 *
 * The iterative path is a shift-invert block Lanczos iteration with full
 * reorthogonalization and thick restarts; the block width lets it resolve
 * eigenvalues whose multiplicity does not exceed the block size. `automatic`
 * solves small matrices densely and falls back to the dense solver when the
 * iteration stalls on a matrix of dimension <= kDenseLimit. An exhausted
 * iteration budget gives a partial result: the current k estimates with
 * their residuals, k_converged counting those within tol.
 */
EigenResult lowest_eigenvalues(const SparseSymmetricMatrix& matrix, int k, double tol,
                               const EigenOptions& options = {});

/// Dense reference solver. Throws ValidationError above kDenseLimit.
EigenResult dense_lowest_eigenvalues(const SparseSymmetricMatrix& matrix, int k);

struct Cluster {
    double value = 0.0;  ///< mean of the members
    int multiplicity = 0;
};

struct ClusteredSpectrum {
    std::vector<Cluster> clusters;

    int total() const;
};

/// Greedy grouping of sorted values: a value joins the open cluster when its
/// gap to the previous value is <= rel_gap * max(1, |cluster mean|).
ClusteredSpectrum cluster_multiplicities(const std::vector<double>& sorted_values, double rel_gap);
ClusteredSpectrum cluster_multiplicities(const EigenResult& result, double rel_gap);

}  // namespace laakso
