#include "laakso/eigensolver.hpp"

#include "laakso/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace laakso {

namespace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Sparse = Eigen::SparseMatrix<double>;

Sparse to_eigen(const SparseSymmetricMatrix& a, double shift) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(a.nonzeros() + a.dimension);
    for (std::size_t i = 0; i < a.dimension; ++i) {
        for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(a.columns[p]), a.values[p]);
        }
        if (shift != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), -shift);
    }
    const auto n = static_cast<Eigen::Index>(a.dimension);
    Sparse out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

double gershgorin_lower(const SparseSymmetricMatrix& a) {
    double lower = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.dimension; ++i) {
        double diag = 0.0;
        double off = 0.0;
        for (std::size_t p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
            if (a.columns[p] == i) {
                diag += a.values[p];
            } else {
                off += std::abs(a.values[p]);
            }
        }
        lower = std::min(lower, diag - off);
    }
    return a.dimension == 0 ? 0.0 : lower;
}

void validate(const SparseSymmetricMatrix& a, int k) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (static_cast<std::size_t>(k) >= a.dimension) {
        throw ValidationError("k = " + std::to_string(k) + " must be below the matrix dimension " +
                              std::to_string(a.dimension));
    }
}

Matrix sparse_times(const SparseSymmetricMatrix& a, const Matrix& x) {
    Matrix y(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        a.multiply(std::span<const double>(x.col(c).data(), static_cast<std::size_t>(x.rows())),
                   std::span<double>(y.col(c).data(), static_cast<std::size_t>(y.rows())));
    }
    return y;
}

// Residual norms ||A x - lambda x|| / ||x|| for each column.
std::vector<double> residuals(const SparseSymmetricMatrix& a, const Matrix& x, const std::vector<double>& lambda) {
    const Matrix ax = sparse_times(a, x);
    std::vector<double> out(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        out[i] = (ax.col(c) - lambda[i] * x.col(c)).norm() / x.col(c).norm();
    }
    return out;
}

class BlockOrthonormalizer {
public:
    BlockOrthonormalizer(Eigen::Index n, std::uint64_t seed) : n_(n), rng_(seed) {}

    Vector random_vector() {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vector v(n_);
        for (Eigen::Index i = 0; i < n_; ++i) v(i) = dist(rng_);
        return v;
    }

    // Orthonormalizes the columns of `w` in place against basis(:, 0:used)
    // and each other. Deficient columns are replaced by random directions.
    void run(Matrix& w, const Matrix& basis, Eigen::Index used) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            Vector v = w.col(c);
            for (int attempt = 0;; ++attempt) {
                const double before = v.norm();
                for (int pass = 0; pass < 2; ++pass) {
                    if (used > 0) v -= basis.leftCols(used) * (basis.leftCols(used).transpose() * v);
                    if (c > 0) v -= w.leftCols(c) * (w.leftCols(c).transpose() * v);
                }
                const double after = v.norm();
                if (after > 1e-10 * std::max(before, 1e-300) && after > 0.0) {
                    w.col(c) = v / after;
                    break;
                }
                if (attempt > 8) throw NumericalError("cannot extend the Krylov basis (space exhausted)");
                v = random_vector();
            }
        }
    }

private:
    Eigen::Index n_;
    std::mt19937_64 rng_;
};

EigenResult block_lanczos(const SparseSymmetricMatrix& a, int k, double tol, const EigenOptions& options) {
    const auto n = static_cast<Eigen::Index>(a.dimension);
    const Eigen::Index want = k;
    Eigen::Index block = options.block_size > 0 ? options.block_size : std::min<Eigen::Index>(want, 128);
    block = std::clamp<Eigen::Index>(block, 1, n);
    Eigen::Index max_basis = options.max_basis > 0
                                 ? options.max_basis
                                 : std::max<Eigen::Index>(3 * want + 2 * block, want + 6 * block);
    // Room for one more block keeps the orthogonal complement nonempty.
    max_basis = std::min(max_basis, n - block);
    if (max_basis < want + block) {
        throw ValidationError("basis limit too small for k plus one block");
    }

    // Sylvester: all pivots positive <=> no eigenvalue below the shift.
    Eigen::SimplicialLDLT<Sparse> factor;
    const auto factor_at = [&](double sigma) {
        factor.compute(to_eigen(a, sigma));
        return factor.info() == Eigen::Success && (factor.vectorD().array() > 0.0).all();
    };
    double shift = options.shift;
    if (std::isnan(shift)) {
        shift = -1.0;
        if (!factor_at(shift)) {
            shift = gershgorin_lower(a) - 1.0;
            if (!factor_at(shift)) throw NumericalError("factorization of (A - shift I) failed");
        }
    } else if (!factor_at(shift)) {
        throw NumericalError("A - shift I is not positive definite for shift " + std::to_string(shift));
    }

    Matrix basis(n, max_basis);
    Matrix image(n, max_basis);  // (A - shift I)^{-1} applied to each basis column
    Matrix projected = Matrix::Zero(max_basis, max_basis);
    Eigen::Index used = 0;

    BlockOrthonormalizer ortho(n, options.seed);
    Matrix next(n, block);
    next.col(0).setOnes();
    for (Eigen::Index c = 1; c < block; ++c) next.col(c) = ortho.random_vector();
    ortho.run(next, basis, 0);

    EigenResult result;
    result.k_requested = k;

    for (int step = 1; step <= options.max_iterations; ++step) {
        const Eigen::Index width = next.cols();
        const Matrix applied = factor.solve(next);
        basis.middleCols(used, width) = next;
        image.middleCols(used, width) = applied;
        const Matrix coupling = basis.leftCols(used + width).transpose() * applied;
        projected.block(0, used, used + width, width) = coupling;
        projected.block(used, 0, width, used + width) = coupling.transpose();
        const Matrix diag = projected.block(used, used, width, width);
        projected.block(used, used, width, width) = 0.5 * (diag + diag.transpose());
        used += width;
        result.iterations = step;

        Eigen::SelfAdjointEigenSolver<Matrix> ritz(projected.topLeftCorner(used, used));
        if (ritz.info() != Eigen::Success) throw NumericalError("projected eigenproblem failed");
        // Largest theta <-> smallest lambda = shift + 1/theta.
        const Vector& theta = ritz.eigenvalues();

        if (used >= want) {
            Matrix top(used, want);
            std::vector<double> lambda(static_cast<std::size_t>(want));
            for (Eigen::Index i = 0; i < want; ++i) {
                top.col(i) = ritz.eigenvectors().col(used - 1 - i);
                lambda[static_cast<std::size_t>(i)] = shift + 1.0 / theta(used - 1 - i);
            }
            const Matrix x = basis.leftCols(used) * top;
            const auto res = residuals(a, x, lambda);
            const auto ok = std::count_if(res.begin(), res.end(), [&](double r) { return r <= tol; });
            result.values = lambda;
            result.residual_norms = res;
            result.k_converged = static_cast<int>(ok);
            if (ok == want) break;
        }
        if (step == options.max_iterations) break;

        // Next block: the part of the new image outside the basis.
        next = applied;
        ortho.run(next, basis, used);

        if (used + block > max_basis) {
            const Eigen::Index keep =
                std::min<Eigen::Index>(used, std::max<Eigen::Index>(want, want + (max_basis - want - block) / 2));
            const Matrix y = ritz.eigenvectors().rightCols(keep);
            const Matrix new_basis = basis.leftCols(used) * y;
            const Matrix new_image = image.leftCols(used) * y;
            basis.leftCols(keep) = new_basis;
            image.leftCols(keep) = new_image;
            projected.setZero();
            for (Eigen::Index i = 0; i < keep; ++i) projected(i, i) = theta(used - keep + i);
            used = keep;
        }
    }

    // Sort ascending (Ritz values come out ascending already; keep residuals aligned).
    std::vector<std::size_t> order(result.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return result.values[l] < result.values[r]; });
    EigenResult sorted = result;
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted.values[i] = result.values[order[i]];
        sorted.residual_norms[i] = result.residual_norms[order[i]];
    }
    return sorted;
}

}  // namespace

EigenResult dense_lowest_eigenvalues(const SparseSymmetricMatrix& matrix, int k) {
    validate(matrix, k);
    if (matrix.dimension > kDenseLimit) {
        throw ValidationError("dense solver limited to dimension <= " + std::to_string(kDenseLimit));
    }
    const auto n = static_cast<Eigen::Index>(matrix.dimension);
    Matrix dense = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < matrix.dimension; ++i) {
        for (std::size_t p = matrix.row_offsets[i]; p < matrix.row_offsets[i + 1]; ++p) {
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(matrix.columns[p])) = matrix.values[p];
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
    if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");

    EigenResult result;
    result.k_requested = k;
    result.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + k);
    result.residual_norms = residuals(matrix, solver.eigenvectors().leftCols(k), result.values);
    result.k_converged = k;
    return result;
}

EigenResult lowest_eigenvalues(const SparseSymmetricMatrix& matrix, int k, double tol, const EigenOptions& options) {
    validate(matrix, k);
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    switch (options.method) {
        case EigenMethod::dense:
            return dense_lowest_eigenvalues(matrix, k);
        case EigenMethod::iterative:
            return block_lanczos(matrix, k, tol, options);
        case EigenMethod::automatic:
            break;
    }
    if (matrix.dimension <= 200) return dense_lowest_eigenvalues(matrix, k);
    EigenResult result;
    try {
        result = block_lanczos(matrix, k, tol, options);
    } catch (const NumericalError&) {
        if (matrix.dimension > kDenseLimit) throw;
        return dense_lowest_eigenvalues(matrix, k);
    }
    if (!result.converged() && matrix.dimension <= kDenseLimit) return dense_lowest_eigenvalues(matrix, k);
    return result;
}

int ClusteredSpectrum::total() const {
    int sum = 0;
    for (const auto& c : clusters) sum += c.multiplicity;
    return sum;
}

ClusteredSpectrum cluster_multiplicities(const std::vector<double>& sorted_values, double rel_gap) {
    if (!(rel_gap > 0.0 && rel_gap < 0.5)) throw ValidationError("rel_gap must lie in (0, 0.5)");
    ClusteredSpectrum out;
    double sum = 0.0;
    double previous = 0.0;
    for (double v : sorted_values) {
        if (!out.clusters.empty()) {
            Cluster& open = out.clusters.back();
            if (v - previous <= rel_gap * std::max(1.0, std::abs(open.value))) {
                sum += v;
                ++open.multiplicity;
                open.value = sum / open.multiplicity;
                previous = v;
                continue;
            }
        }
        out.clusters.push_back({v, 1});
        sum = v;
        previous = v;
    }
    return out;
}

ClusteredSpectrum cluster_multiplicities(const EigenResult& result, double rel_gap) {
    return cluster_multiplicities(result.values, rel_gap);
}

}  // namespace laakso
