#pragma once

#include "laakso/sequence.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace laakso {

/// The five eigenvalue families of the Laplacian: the F_0 interval, then per
/// level the V, loop, doubled-cross and quarter-cross families.
enum class Shape { line, v, loop, cross_full, cross_quarter };

std::string_view to_string(Shape shape);
Shape shape_from_string(std::string_view name);

/// Exact eigenvalue label: lambda = m^2 pi^2 / 4.
struct EigenKey {
    BigInt m;

    double value() const;

    std::strong_ordering operator<=>(const EigenKey& other) const {
        const int c = m.compare(other.m);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    bool operator==(const EigenKey& other) const { return m == other.m; }
};

/// lambda = (m/2)^2 pi^2, correctly rounded from extended precision.
double eigenvalue_of_key(const BigInt& m);

/// Largest m with (m pi / 2)^2 <= lambda_max.
BigInt max_key_for(double lambda_max);

/**
 * One arithmetic family of keys m = stride * k + offset, k >= first_index,
 * each eigenvalue carrying `multiplicity` copies.
 */
struct SpectralFamily {
    Shape shape = Shape::line;
    int level = 0;
    BigInt multiplicity;
    BigInt stride;
    BigInt offset;
    int first_index = 0;

    BigInt key(const BigInt& k) const { return stride * k + offset; }
};

/// All families with nonzero multiplicity that first appear at level n.
/// Level 0 is the line family (including the zero eigenvalue).
std::vector<SpectralFamily> families_at_level(const JSequence& seq, int n);

/// The family of one shape at one level. Throws DomainError for incompatible
/// shape/level pairs (line needs n = 0, V and loop n >= 1, crosses n >= 2).
SpectralFamily family_of(Shape shape, const JSequence& seq, int n);

/// Eigenvalues <= lambda_max of one family, ascending, with their multiplicity.
std::vector<std::pair<EigenKey, BigInt>> shape_spectrum(Shape shape, const JSequence& seq, int n,
                                                        double lambda_max);

struct Contribution {
    Shape shape = Shape::line;
    int level = 0;
    BigInt mode;   ///< k within the family
    BigInt count;  ///< multiplicity added by this family
};

struct SpectrumEntry {
    EigenKey key;
    double value = 0.0;
    BigInt multiplicity;
    std::vector<Contribution> contributions;
};

struct SpectrumTable {
    JSequence sequence = JSequence::constant(2);
    double lambda_max = 0.0;
    std::optional<int> level_cap;  ///< set when levels above it were excluded
    int deepest_level = 0;         ///< highest level that contributed an eigenvalue
    std::vector<SpectrumEntry> entries;
};

/// Every eigenvalue <= lambda_max with exact multiplicities. Explicit
/// sequences throw DomainError when the prefix is too short to decide.
SpectrumTable full_spectrum(const JSequence& seq, double lambda_max);

/// As full_spectrum, restricted to families of level <= n_max (the spectrum
/// carried by the graph F_{n_max}).
SpectrumTable level_spectrum(const JSequence& seq, int n_max, double lambda_max);

/// The first `count` distinct eigenvalues, optionally capped at a level.
SpectrumTable first_distinct(const JSequence& seq, std::size_t count, std::optional<int> level_cap = {});

/// Sum of multiplicities of entries with value <= lambda.
BigInt counting_function(const SpectrumTable& table, double lambda);

nlohmann::json to_json(const SpectrumTable& table);
void write_csv(std::ostream& out, const SpectrumTable& table);

}  // namespace laakso
