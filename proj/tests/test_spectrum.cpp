#include "generators.hpp"

#include "laakso/errors.hpp"
#include "laakso/sequence.hpp"
#include "laakso/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

using namespace laakso;

namespace {

constexpr double kPi = std::numbers::pi;

// Multiplicities by direct enumeration of the five families in machine
// integers, keyed by m (lambda = m^2 pi^2 / 4).
std::map<long long, long long> brute_force(const JSequence& seq, long long max_key, int max_level) {
    std::map<long long, long long> out;
    for (long long k = 0; 2 * k <= max_key; ++k) out[2 * k] += 1;
    long long prev = 1;
    for (int n = 1; n <= max_level; ++n) {
        const long long j = seq.j(n);
        const long long scale = prev * j;
        if (scale > max_key) break;
        const long long two_n = 1LL << n;
        for (long long k = 0; (2 * k + 1) * scale <= max_key; ++k) out[(2 * k + 1) * scale] += two_n;
        for (long long k = 1; 2 * k * scale <= max_key; ++k) {
            out[2 * k * scale] += (two_n / 2) * (j - 2) * prev;
            if (n >= 2) out[2 * k * scale] += (two_n / 2) * (prev - 1);
        }
        if (n >= 2) {
            for (long long k = 1; k * scale <= max_key; ++k) out[k * scale] += (two_n / 4) * (prev - 1);
        }
        prev = scale;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

long long as_ll(const BigInt& x) { return x.convert_to<long long>(); }

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("first twenty distinct eigenvalues for 2,3,2,3,...") {
    const SpectrumTable table = first_distinct(JSequence::periodic({2, 3}), 20);
    const long long expected[] = {1, 3, 1, 8, 1, 3, 26, 3, 1, 8, 1, 3, 38, 3, 1, 8, 1, 3, 86, 3};
    REQUIRE(table.entries.size() == 20);
    for (int k = 0; k < 20; ++k) {
        CAPTURE(k);
        const auto& e = table.entries[static_cast<std::size_t>(k)];
        CHECK(as_ll(e.multiplicity) == expected[k]);
        CHECK(e.key.m == 2 * k);
        CHECK(e.value == doctest::Approx(k * k * kPi * kPi).epsilon(1e-15));
    }
}

TEST_CASE("full spectrum examples") {
    const JSequence alt = JSequence::periodic({2, 3});
    const SpectrumTable low = full_spectrum(alt, 360.0);
    REQUIRE(low.entries.size() == 7);
    const long long mult[] = {1, 3, 1, 8, 1, 3, 26};
    for (std::size_t i = 0; i < 7; ++i) CHECK(as_ll(low.entries[i].multiplicity) == mult[i]);
    CHECK(low.entries[6].value == doctest::Approx(355.3057584392169));

    const SpectrumTable high = full_spectrum(alt, 3600.0);
    std::map<long long, long long> by_key;
    for (const auto& e : high.entries) by_key[as_ll(e.key.m)] = as_ll(e.multiplicity);
    CHECK(by_key.at(24) == 38);
    CHECK(by_key.at(36) == 86);

    const SpectrumTable tiny = full_spectrum(JSequence::constant(2), 1.0);
    REQUIRE(tiny.entries.size() == 1);
    CHECK(tiny.entries[0].value == 0.0);
    CHECK(tiny.entries[0].multiplicity == 1);

    CHECK_THROWS_AS(full_spectrum(alt, -1.0), ValidationError);
}

TEST_CASE("per-shape spectra") {
    const JSequence alt = JSequence::periodic({2, 3});
    const auto v = shape_spectrum(Shape::v, alt, 1, 100.0);
    REQUIRE(v.size() == 2);
    CHECK(v[0].first.m == 2);
    CHECK(v[0].second == 2);
    CHECK(v[1].first.m == 6);
    CHECK(v[1].second == 2);
    CHECK(shape_spectrum(Shape::v, alt, 1, 50.0).size() == 1);

    CHECK(shape_spectrum(Shape::loop, JSequence::constant(2), 3, 1e6).empty());
    CHECK(shape_spectrum(Shape::loop, JSequence::constant(2), 2, INFINITY).empty());

    const auto quarter = shape_spectrum(Shape::cross_quarter, alt, 2, 360.0);
    REQUIRE(quarter.size() == 2);
    CHECK(quarter[0].first.m == 6);
    CHECK(quarter[1].first.m == 12);
    CHECK(quarter[0].second == 1);
    CHECK(shape_spectrum(Shape::cross_quarter, alt, 2, 100.0).size() == 1);

    CHECK_THROWS_AS(shape_spectrum(Shape::line, alt, 1, 10.0), DomainError);
    CHECK_THROWS_AS(shape_spectrum(Shape::v, alt, 0, 10.0), DomainError);
    CHECK_THROWS_AS(shape_spectrum(Shape::cross_full, alt, 1, 10.0), DomainError);
    CHECK_THROWS_AS(shape_spectrum(Shape::v, alt, 1, INFINITY), ValidationError);
}

TEST_CASE("shape names round-trip") {
    for (Shape s : {Shape::line, Shape::v, Shape::loop, Shape::cross_full, Shape::cross_quarter}) {
        CHECK(shape_from_string(to_string(s)) == s);
    }
    CHECK_THROWS(shape_from_string("diamond"));
}

TEST_CASE("level spectrum examples") {
    const SpectrumTable f1 = level_spectrum(JSequence::constant(2), 1, 800.0);
    REQUIRE(f1.entries.size() == 10);
    for (std::size_t k = 0; k < 10; ++k) {
        CAPTURE(k);
        CHECK(f1.entries[k].key.m == 2 * k);
        CHECK(f1.entries[k].multiplicity == (k % 2 == 1 ? 3 : 1));
    }
    CHECK(level_spectrum(JSequence::constant(2), 1, 100.0).entries.size() == 4);
    const SpectrumTable f0 = level_spectrum(JSequence::periodic({2, 3}), 0, 100.0);
    REQUIRE(f0.entries.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) CHECK(f0.entries[k].multiplicity == 1);
}

TEST_CASE("counting function") {
    const SpectrumTable table = full_spectrum(JSequence::periodic({2, 3}), 400.0);
    CHECK(counting_function(table, 10.0) == 4);
    CHECK(counting_function(table, 0.0) == 1);
    CHECK(counting_function(table, 356.0) == 43);
    CHECK_THROWS_AS(counting_function(table, 401.0), DomainError);
}

TEST_CASE("tables agree with brute-force enumeration") {
    testgen::Gen gen(21);
    for (int i = 0; i < testgen::kCases; ++i) {
        const JSequence seq = gen.sequence(3, 5);
        const double lambda_max = gen.log_uniform(10.0, 5e5);
        CAPTURE(seq.to_string());
        CAPTURE(lambda_max);
        const SpectrumTable table = full_spectrum(seq, lambda_max);
        const long long max_key = as_ll(max_key_for(lambda_max));
        const auto oracle = brute_force(seq, max_key, 64);
        REQUIRE(table.entries.size() == oracle.size());
        auto it = oracle.begin();
        for (const auto& e : table.entries) {
            CHECK(as_ll(e.key.m) == it->first);
            CHECK(as_ll(e.multiplicity) == it->second);
            ++it;
        }
    }
}

TEST_CASE("table invariants") {
    testgen::Gen gen(22);
    for (int i = 0; i < testgen::kCases; ++i) {
        const JSequence seq = gen.sequence();
        const SpectrumTable table = full_spectrum(seq, gen.log_uniform(1.0, 1e5));
        CAPTURE(seq.to_string());
        REQUIRE_FALSE(table.entries.empty());
        CHECK(table.entries.front().value == 0.0);
        CHECK(table.entries.front().multiplicity == 1);
        for (std::size_t k = 0; k < table.entries.size(); ++k) {
            const auto& e = table.entries[k];
            if (k > 0) CHECK(table.entries[k - 1].key < e.key);
            BigInt total = 0;
            for (const auto& c : e.contributions) total += c.count;
            CHECK(total == e.multiplicity);
            CHECK_FALSE(e.contributions.empty());
            const long double m = e.key.m.convert_to<long double>();
            const long double exact = m * m * 3.141592653589793238462643383279502884L *
                                      3.141592653589793238462643383279502884L / 4.0L;
            CHECK(std::abs(static_cast<long double>(e.value) - exact) <= std::nextafter(e.value, INFINITY) - e.value);
            CHECK(e.value <= table.lambda_max);
        }
        const double probe = gen.uniform(0.0, table.lambda_max);
        CHECK(counting_function(table, probe) <= counting_function(table, table.lambda_max));
    }
}

TEST_CASE("doubled cross family carries twice the quarter count") {
    testgen::Gen gen(23);
    for (int i = 0; i < testgen::kCases; ++i) {
        const JSequence seq = gen.sequence();
        for (int n = 2; n <= 8; ++n) {
            CHECK(family_of(Shape::cross_full, seq, n).multiplicity ==
                  2 * family_of(Shape::cross_quarter, seq, n).multiplicity);
        }
    }
}

TEST_CASE("capped tables converge to the full table") {
    testgen::Gen gen(24);
    for (int i = 0; i < testgen::kCases; ++i) {
        const JSequence seq = gen.sequence();
        const double lambda_max = gen.log_uniform(10.0, 1e5);
        const SpectrumTable full = full_spectrum(seq, lambda_max);
        const SpectrumTable capped = level_spectrum(seq, full.deepest_level + 3, lambda_max);
        REQUIRE(capped.entries.size() == full.entries.size());
        for (std::size_t k = 0; k < full.entries.size(); ++k) {
            CHECK(capped.entries[k].key == full.entries[k].key);
            CHECK(capped.entries[k].multiplicity == full.entries[k].multiplicity);
        }
        // Lower caps only ever remove multiplicity.
        const SpectrumTable lower = level_spectrum(seq, std::max(0, full.deepest_level - 1), lambda_max);
        CHECK(counting_function(lower, lambda_max) <= counting_function(full, lambda_max));
    }
}

TEST_CASE("explicit prefixes") {
    const JSequence prefix = parse_sequence("seq:2,3,2");
    CHECK_THROWS_AS(full_spectrum(prefix, 4000.0), DomainError);
    const SpectrumTable a = level_spectrum(prefix, 3, 4000.0);
    const SpectrumTable b = level_spectrum(JSequence::periodic({2, 3}), 3, 4000.0);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) CHECK(a.entries[k].multiplicity == b.entries[k].multiplicity);
    // Small cutoffs never reach past the prefix.
    CHECK_NOTHROW(full_spectrum(prefix, 100.0));
}

TEST_CASE("Weyl growth of the counting function") {
    for (const char* text : {"2", "3", "2,3", "3,2"}) {
        CAPTURE(text);
        const JSequence seq = parse_sequence(text);
        const SpectrumTable table = full_spectrum(seq, 1e6);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int points = 60;
        for (int i = 0; i < points; ++i) {
            const double lambda = std::pow(10.0, 3.0 + 3.0 * i / (points - 1));
            const double x = std::log(lambda);
            const double y = std::log(counting_function(table, lambda).convert_to<double>());
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
        const double target = dimensions(seq).spectral / 2.0;
        CHECK(std::abs(slope - target) / target < 0.05);
    }
}

TEST_CASE("annotated second reference table") {
    std::ifstream in(std::string(LAAKSO_DATA_DIR) + "/table2.csv");
    REQUIRE(in.good());
    std::map<std::string, SpectrumTable> tables;
    std::string line;
    int consistent = 0;
    int flagged = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("column", 0) == 0) continue;
        // column,"a,b",printed_lambda,key,printed_m,exact_m,status
        const auto q1 = line.find('"');
        const auto q2 = line.find('"', q1 + 1);
        const std::string seq_text = line.substr(q1 + 1, q2 - q1 - 1);
        std::vector<std::string> rest;
        std::istringstream fields(line.substr(q2 + 2));
        for (std::string f; std::getline(fields, f, ',');) rest.push_back(f);
        REQUIRE(rest.size() == 5);
        if (!tables.contains(seq_text)) tables.emplace(seq_text, full_spectrum(parse_sequence(seq_text), 4000.0));
        BigInt exact = 0;
        for (const auto& e : tables.at(seq_text).entries) {
            if (e.key.m == BigInt(rest[1])) exact = e.multiplicity;
        }
        CAPTURE(line);
        CHECK(exact == BigInt(rest[3]));
        if (rest[4] == "consistent") {
            ++consistent;
            CHECK(rest[2] == rest[3]);
        } else {
            ++flagged;
        }
    }
    CHECK(consistent == 75);
    CHECK(flagged == 5);
}

TEST_CASE("serialization") {
    const SpectrumTable table = full_spectrum(JSequence::periodic({2, 3}), 40.0);
    const auto doc = to_json(table);
    CHECK(doc["sequence"] == "2,3");
    REQUIRE(doc["entries"].size() == 3);
    CHECK(doc["entries"][1]["key"] == "2");
    CHECK(doc["entries"][1]["multiplicity"] == "3");
    CHECK(doc["entries"][1]["contributions"].size() == 2);

    std::ostringstream csv;
    write_csv(csv, table);
    CHECK(csv.str().rfind("lambda,multiplicity\n0,1\n9.869604401089358,3\n", 0) == 0);
}

}  // TEST_SUITE
