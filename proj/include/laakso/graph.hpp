#pragma once

#include "laakso/sequence.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <tuple>
#include <vector>

namespace laakso {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double length = 0.0;
};

/// Undirected metric multigraph. Parallel edges are allowed (loops of F_n).
class MetricGraph {
public:
    MetricGraph() = default;
    MetricGraph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    std::vector<std::size_t> degrees() const;
    /// degree -> number of vertices with that degree
    std::map<std::size_t, std::size_t> degree_histogram() const;
    /// Neighbour lists with multiplicity (a double edge lists the neighbour twice).
    std::vector<std::vector<std::size_t>> adjacency() const;
    bool connected() const;

private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
};

/**
 * Builds F_n: starting from the unit interval, level i subdivides every edge
 * into j_i equal pieces, duplicates the graph and glues the two copies at the
 * vertices inserted by that subdivision. Vertices that existed before the
 * subdivision keep one copy per side.
 *
 * Vertex ids: with V the vertex count of F_{n-1}, its two copies take
 * [0, V) and [V, 2V); the glued vertices follow, edge by edge.
 */
MetricGraph build_graph(const JSequence& seq, int n);

/// Header "<V> vertices <E> edges", then one "u v length" line per edge.
void write_edge_list(std::ostream& out, const MetricGraph& graph);
MetricGraph read_edge_list(std::istream& in);

/// Square sparse matrix in compressed-row form with sorted column indices.
struct SparseSymmetricMatrix {
    std::size_t dimension = 0;
    std::vector<std::size_t> row_offsets;  ///< size dimension + 1
    std::vector<std::size_t> columns;
    std::vector<double> values;

    std::size_t nonzeros() const noexcept { return values.size(); }
    double at(std::size_t row, std::size_t col) const;
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Exact structural and numerical symmetry (0 ulps).
    bool is_symmetric() const;
    std::vector<double> row_sums() const;
};

/// Builds the CSR layout from (row, col, value) triplets; duplicates are summed.
SparseSymmetricMatrix assemble_csr(std::size_t dimension,
                                   std::vector<std::tuple<std::size_t, std::size_t, double>> triplets);

/// diag(values) as a sparse matrix.
SparseSymmetricMatrix diagonal_matrix(std::span<const double> values);

/// Matrix Market "coordinate real symmetric" (lower triangle, 1-based).
void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix& matrix);

/**
 * Finite-difference Kirchhoff Laplacian of a metric graph.
 *
 * Unknowns are the graph vertices (indices 0..V-1) followed by the interior
 * mesh points edge by edge. `stiffness` K and the lumped `mass` M define
 * K u = lambda M u; `matrix` is the similar symmetric operator
 * M^{-1/2} K M^{-1/2} whose eigenvalues approximate those of -d^2/dx^2.
 */
struct Discretization {
    SparseSymmetricMatrix matrix;
    SparseSymmetricMatrix stiffness;
    std::vector<double> mass;
    std::size_t vertex_count = 0;
    int points_per_edge = 0;
    double mesh_width = 0.0;  ///< h for an edge of the shortest length

    /// Eigenvalues above this are not trusted for comparisons: (0.1 / h)^2.
    double trust_cutoff() const;
};

Discretization discretize(const MetricGraph& graph, int points_per_edge);

}  // namespace laakso
