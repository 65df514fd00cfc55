#include "laakso/graph.hpp"

#include "laakso/errors.hpp"
#include "laakso/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace laakso {

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
        if (e.u >= vertex_count_ || e.v >= vertex_count_) {
            throw ValidationError("edge endpoint out of range");
        }
        if (!(e.length > 0.0) || !std::isfinite(e.length)) throw ValidationError("edge lengths must be positive");
    }
}

std::vector<std::size_t> MetricGraph::degrees() const {
    std::vector<std::size_t> deg(vertex_count_, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::map<std::size_t, std::size_t> MetricGraph::degree_histogram() const {
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t d : degrees()) ++hist[d];
    return hist;
}

std::vector<std::vector<std::size_t>> MetricGraph::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(vertex_count_);
    for (const auto& e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

bool MetricGraph::connected() const {
    if (vertex_count_ == 0) return true;
    const auto adj = adjacency();
    std::vector<char> seen(vertex_count_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == vertex_count_;
}

MetricGraph build_graph(const JSequence& seq, int n) {
    if (n < 0) throw DomainError("level must be >= 0");
    if (!seq.has_level(n)) {
        throw DomainError("level " + std::to_string(n) + " is beyond the explicit prefix of '" + seq.to_string() + "'");
    }

    // Topology only; lengths are assigned at the end since every edge of F_n is 1/I_n long.
    std::size_t vertices = 2;
    std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}};

    for (int level = 1; level <= n; ++level) {
        const auto j = static_cast<std::size_t>(seq.j(level));
        const std::size_t inserted_per_edge = j - 1;
        // Copy A keeps ids [0, V), copy B uses [V, 2V), glued vertices follow.
        const std::size_t glued_base = 2 * vertices;
        std::vector<std::pair<std::size_t, std::size_t>> next;
        next.reserve(edges.size() * j * 2);
        for (std::size_t copy = 0; copy < 2; ++copy) {
            const std::size_t shift = copy * vertices;
            for (std::size_t e = 0; e < edges.size(); ++e) {
                std::size_t from = edges[e].first + shift;
                for (std::size_t p = 0; p < inserted_per_edge; ++p) {
                    const std::size_t glued = glued_base + e * inserted_per_edge + p;
                    next.emplace_back(from, glued);
                    from = glued;
                }
                next.emplace_back(from, edges[e].second + shift);
            }
        }
        vertices = glued_base + edges.size() * inserted_per_edge;
        edges = std::move(next);
    }

    const double length = 1.0 / scale_at(seq, n).convert_to<double>();
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& [u, v] : edges) out.push_back({u, v, length});
    return MetricGraph(vertices, std::move(out));
}

void write_edge_list(std::ostream& out, const MetricGraph& graph) {
    out << graph.vertex_count() << " vertices " << graph.edge_count() << " edges\n";
    for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.length) << '\n';
}

MetricGraph read_edge_list(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ValidationError("edge list: missing header");
    std::istringstream hs(header);
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    std::string w1;
    std::string w2;
    if (!(hs >> vertex_count >> w1 >> edge_count >> w2) || w1 != "vertices" || w2 != "edges") {
        throw ValidationError("edge list: header must read '<V> vertices <E> edges'");
    }
    std::vector<Edge> edges;
    edges.reserve(edge_count);
    for (std::size_t i = 0; i < edge_count; ++i) {
        Edge e;
        if (!(in >> e.u >> e.v >> e.length)) {
            throw ValidationError("edge list: expected " + std::to_string(edge_count) + " edges, read " +
                                  std::to_string(i));
        }
        edges.push_back(e);
    }
    return MetricGraph(vertex_count, std::move(edges));
}

double SparseSymmetricMatrix::at(std::size_t row, std::size_t col) const {
    const auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
    const auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return 0.0;
    return values[static_cast<std::size_t>(it - columns.begin())];
}

void SparseSymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < dimension; ++i) {
        double acc = 0.0;
        for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) acc += values[p] * x[columns[p]];
        y[i] = acc;
    }
}

bool SparseSymmetricMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < dimension; ++i) {
        for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
            const std::size_t j = columns[p];
            const auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[j]);
            const auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[j + 1]);
            const auto it = std::lower_bound(first, last, i);
            if (it == last || *it != i) return false;
            if (values[static_cast<std::size_t>(it - columns.begin())] != values[p]) return false;
        }
    }
    return true;
}

std::vector<double> SparseSymmetricMatrix::row_sums() const {
    std::vector<double> sums(dimension, 0.0);
    for (std::size_t i = 0; i < dimension; ++i) {
        for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) sums[i] += values[p];
    }
    return sums;
}

SparseSymmetricMatrix assemble_csr(std::size_t dimension,
                                   std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
    std::stable_sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    SparseSymmetricMatrix m;
    m.dimension = dimension;
    m.row_offsets.assign(dimension + 1, 0);
    std::size_t last_row = 0;
    std::size_t last_col = 0;
    bool any = false;
    for (const auto& [r, c, v] : triplets) {
        if (r >= dimension || c >= dimension) throw ValidationError("triplet index out of range");
        if (any && r == last_row && c == last_col) {
            m.values.back() += v;
            continue;
        }
        m.columns.push_back(c);
        m.values.push_back(v);
        ++m.row_offsets[r + 1];
        last_row = r;
        last_col = c;
        any = true;
    }
    for (std::size_t i = 1; i <= dimension; ++i) m.row_offsets[i] += m.row_offsets[i - 1];
    return m;
}

SparseSymmetricMatrix diagonal_matrix(std::span<const double> values) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    triplets.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) triplets.emplace_back(i, i, values[i]);
    return assemble_csr(values.size(), std::move(triplets));
}

void write_matrix_market(std::ostream& out, const SparseSymmetricMatrix& matrix) {
    std::size_t lower = 0;
    for (std::size_t i = 0; i < matrix.dimension; ++i) {
        for (std::size_t p = matrix.row_offsets[i]; p < matrix.row_offsets[i + 1]; ++p) {
            if (matrix.columns[p] <= i) ++lower;
        }
    }
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << matrix.dimension << ' ' << matrix.dimension << ' ' << lower << '\n';
    for (std::size_t i = 0; i < matrix.dimension; ++i) {
        for (std::size_t p = matrix.row_offsets[i]; p < matrix.row_offsets[i + 1]; ++p) {
            if (matrix.columns[p] <= i) {
                out << i + 1 << ' ' << matrix.columns[p] + 1 << ' ' << format_double(matrix.values[p]) << '\n';
            }
        }
    }
}

double Discretization::trust_cutoff() const {
    const double k = 0.1 / mesh_width;
    return k * k;
}

Discretization discretize(const MetricGraph& graph, int points_per_edge) {
    if (points_per_edge < 1) throw ValidationError("points_per_edge must be >= 1");
    const auto m = static_cast<std::size_t>(points_per_edge);
    const std::size_t nv = graph.vertex_count();
    const std::size_t dim = nv + graph.edge_count() * m;

    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    triplets.reserve(graph.edge_count() * (m + 1) * 4);
    std::vector<double> mass(dim, 0.0);
    double min_h = std::numeric_limits<double>::infinity();

    for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        const Edge& edge = graph.edges()[e];
        const double h = edge.length / static_cast<double>(m + 1);
        min_h = std::min(min_h, h);
        const double conductance = 1.0 / h;
        const std::size_t base = nv + e * m;
        auto node = [&](std::size_t i) { return i == 0 ? edge.u : (i == m + 1 ? edge.v : base + i - 1); };
        for (std::size_t s = 0; s <= m; ++s) {
            const std::size_t a = node(s);
            const std::size_t b = node(s + 1);
            triplets.emplace_back(a, a, conductance);
            triplets.emplace_back(b, b, conductance);
            triplets.emplace_back(a, b, -conductance);
            triplets.emplace_back(b, a, -conductance);
            mass[a] += 0.5 * h;
            mass[b] += 0.5 * h;
        }
    }

    Discretization out;
    out.stiffness = assemble_csr(dim, std::move(triplets));
    out.mass = std::move(mass);
    out.vertex_count = nv;
    out.points_per_edge = points_per_edge;
    out.mesh_width = min_h;

    std::vector<double> inv_sqrt_mass(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(out.mass[i] > 0.0)) throw ValidationError("isolated vertex in graph");
        inv_sqrt_mass[i] = 1.0 / std::sqrt(out.mass[i]);
    }
    out.matrix = out.stiffness;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t p = out.matrix.row_offsets[i]; p < out.matrix.row_offsets[i + 1]; ++p) {
            const std::size_t j = out.matrix.columns[p];
            out.matrix.values[p] = out.stiffness.values[p] * (inv_sqrt_mass[i] * inv_sqrt_mass[j]);
        }
    }
    return out;
}

}  // namespace laakso
