#include "generators.hpp"

#include "laakso/eigensolver.hpp"
#include "laakso/errors.hpp"
#include "laakso/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace laakso;

namespace {

constexpr double kPi = std::numbers::pi;

SparseSymmetricMatrix chain(int m) { return discretize(MetricGraph(2, {{0, 1, 1.0}}), m).matrix; }

// Weighted Laplacian of a random connected graph: a spanning path plus extra edges.
SparseSymmetricMatrix random_laplacian(testgen::Gen& gen, std::size_t n) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    auto add = [&](std::size_t a, std::size_t b, double w) {
        triplets.emplace_back(a, a, w);
        triplets.emplace_back(b, b, w);
        triplets.emplace_back(a, b, -w);
        triplets.emplace_back(b, a, -w);
    };
    for (std::size_t i = 0; i + 1 < n; ++i) add(i, i + 1, gen.uniform(0.5, 2.0));
    for (std::size_t e = 0; e < n; ++e) {
        const auto a = static_cast<std::size_t>(gen.integer(0, static_cast<int>(n) - 1));
        const auto b = static_cast<std::size_t>(gen.integer(0, static_cast<int>(n) - 1));
        if (a != b) add(a, b, gen.uniform(0.1, 1.0));
    }
    return assemble_csr(n, std::move(triplets));
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("diagonal matrix") {
    std::vector<double> diag(60);
    std::iota(diag.begin(), diag.end(), 0.0);
    const SparseSymmetricMatrix a = diagonal_matrix(diag);
    for (EigenMethod method : {EigenMethod::iterative, EigenMethod::dense, EigenMethod::automatic}) {
        const EigenResult r = lowest_eigenvalues(a, 3, 1e-10, {.method = method});
        REQUIRE(r.converged());
        REQUIRE(r.values.size() == 3);
        for (int i = 0; i < 3; ++i) CHECK(r.values[static_cast<std::size_t>(i)] == doctest::Approx(i).epsilon(1e-12));
    }
}

TEST_CASE("Neumann chain") {
    const SparseSymmetricMatrix a = chain(99);
    REQUIRE(a.dimension == 101);
    const EigenResult r = lowest_eigenvalues(a, 4, 1e-9, {.method = EigenMethod::iterative});
    REQUIRE(r.converged());
    CHECK(std::abs(r.values[0]) < 1e-9);
    for (int k = 1; k < 4; ++k) {
        const double exact = k * k * kPi * kPi;
        CHECK(std::abs(r.values[static_cast<std::size_t>(k)] - exact) / exact < 1e-3);
    }
    for (double res : r.residual_norms) CHECK(res <= 1e-9);
}

TEST_CASE("fine mesh on F_2 for 2,3") {
    const Discretization d = discretize(build_graph(JSequence::periodic({2, 3}), 2), 20);
    const EigenResult r = lowest_eigenvalues(d.matrix, 10, 1e-8, {.method = EigenMethod::iterative});
    REQUIRE(r.converged());
    const ClusteredSpectrum c = cluster_multiplicities(r, 1e-6);
    REQUIRE(c.clusters.size() >= 3);
    CHECK(c.clusters[0].multiplicity == 1);
    CHECK(c.clusters[1].value == doctest::Approx(9.87).epsilon(0.005));
    CHECK(c.clusters[1].multiplicity == 3);
    CHECK(c.clusters[2].value == doctest::Approx(39.4).epsilon(0.005));
    CHECK(c.clusters[2].multiplicity == 1);
}

TEST_CASE("iterative path agrees with the dense oracle") {
    testgen::Gen gen(41);
    for (int i = 0; i < 12; ++i) {
        const auto n = static_cast<std::size_t>(gen.integer(150, 900));
        const int k = gen.integer(1, 24);
        const double tol = 1e-8;
        const SparseSymmetricMatrix a = random_laplacian(gen, n);
        CAPTURE(n);
        CAPTURE(k);
        const EigenResult it = lowest_eigenvalues(a, k, tol, {.method = EigenMethod::iterative});
        const EigenResult dense = dense_lowest_eigenvalues(a, k);
        REQUIRE(it.converged());
        REQUIRE(dense.converged());
        for (std::size_t q = 0; q < static_cast<std::size_t>(k); ++q) {
            CHECK(std::abs(it.values[q] - dense.values[q]) <= 10 * tol);
            CHECK(it.residual_norms[q] <= tol);
        }
        CHECK(std::is_sorted(it.values.begin(), it.values.end()));
    }
}

TEST_CASE("graph operators: iterative vs dense") {
    for (const char* text : {"2", "3", "2,3", "3,2"}) {
        CAPTURE(text);
        const Discretization d = discretize(build_graph(parse_sequence(text), 2), 6);
        REQUIRE(d.matrix.dimension <= kDenseLimit);
        const EigenResult it = lowest_eigenvalues(d.matrix, 16, 1e-9, {.method = EigenMethod::iterative});
        const EigenResult dense = dense_lowest_eigenvalues(d.matrix, 16);
        REQUIRE(it.converged());
        for (std::size_t q = 0; q < 16; ++q) CHECK(std::abs(it.values[q] - dense.values[q]) <= 1e-8);
    }
}

TEST_CASE("fixed seed reproduces results bit for bit") {
    const Discretization d = discretize(build_graph(JSequence::periodic({2, 3}), 3), 4);
    const EigenOptions options{.method = EigenMethod::iterative, .seed = 7};
    const EigenResult a = lowest_eigenvalues(d.matrix, 20, 1e-8, options);
    const EigenResult b = lowest_eigenvalues(d.matrix, 20, 1e-8, options);
    CHECK(a.values == b.values);
    CHECK(a.residual_norms == b.residual_norms);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("argument checks") {
    const SparseSymmetricMatrix a = chain(3);
    CHECK_THROWS_AS(lowest_eigenvalues(a, 5, 1e-8), ValidationError);
    CHECK_THROWS_AS(lowest_eigenvalues(a, 6, 1e-8), ValidationError);
    CHECK_THROWS_AS(lowest_eigenvalues(a, 0, 1e-8), ValidationError);
    CHECK_THROWS_AS(lowest_eigenvalues(a, 2, 0.0), ValidationError);
    std::vector<double> big(kDenseLimit + 1, 1.0);
    CHECK_THROWS_AS(dense_lowest_eigenvalues(diagonal_matrix(big), 2), ValidationError);
}

TEST_CASE("exhausted budget yields a flagged partial result") {
    const Discretization d = discretize(build_graph(JSequence::constant(3), 3), 8);
    const EigenResult r =
        lowest_eigenvalues(d.matrix, 60, 1e-12, {.method = EigenMethod::iterative, .max_iterations = 1});
    CHECK(r.k_requested == 60);
    CHECK(r.k_converged < 60);
    CHECK_FALSE(r.converged());
    REQUIRE(r.values.size() == r.residual_norms.size());
    const auto within = std::count_if(r.residual_norms.begin(), r.residual_norms.end(),
                                      [](double res) { return res <= 1e-12; });
    CHECK(within == r.k_converged);
}

TEST_CASE("clustering examples") {
    const ClusteredSpectrum a = cluster_multiplicities(std::vector<double>{0.0, 9.869, 9.870, 9.871}, 0.01);
    REQUIRE(a.clusters.size() == 2);
    CHECK(a.clusters[0].value == 0.0);
    CHECK(a.clusters[0].multiplicity == 1);
    CHECK(a.clusters[1].value == doctest::Approx(9.870).epsilon(1e-12));
    CHECK(a.clusters[1].multiplicity == 3);

    const ClusteredSpectrum b = cluster_multiplicities(std::vector<double>{1.0, 2.0, 3.0}, 1e-6);
    CHECK(b.clusters.size() == 3);
    CHECK(b.total() == 3);

    CHECK(cluster_multiplicities(std::vector<double>{}, 0.1).clusters.empty());
    CHECK_THROWS_AS(cluster_multiplicities(std::vector<double>{1.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(cluster_multiplicities(std::vector<double>{1.0}, 0.5), ValidationError);
}

TEST_CASE("clustering invariants") {
    testgen::Gen gen(42);
    for (int i = 0; i < testgen::kCases; ++i) {
        std::vector<double> values;
        double v = gen.uniform(-1.0, 1.0);
        const int count = gen.integer(0, 50);
        for (int q = 0; q < count; ++q) {
            v += gen.integer(0, 2) == 0 ? gen.uniform(0.0, 1e-9) : gen.uniform(0.1, 5.0);
            values.push_back(v);
        }
        const ClusteredSpectrum c = cluster_multiplicities(values, 1e-6);
        CHECK(c.total() == count);
        for (std::size_t q = 0; q < c.clusters.size(); ++q) {
            CHECK(c.clusters[q].multiplicity >= 1);
            if (q > 0) CHECK(c.clusters[q - 1].value < c.clusters[q].value);
        }
    }
}

}  // TEST_SUITE
