#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace laakso {

using BigInt = boost::multiprecision::cpp_int;

enum class SequenceKind { constant, periodic, explicit_prefix };

/**
 * The defining sequence {j_n}, n >= 1, of a Laakso space.
 *
 * Constant and periodic sequences answer j(n) for every n >= 1. An explicit
 * sequence is a finite prefix; asking for a level past it throws DomainError.
 */
class JSequence {
public:
    static JSequence constant(int j);
    static JSequence periodic(std::vector<int> pattern);
    static JSequence explicit_prefix(std::vector<int> prefix);

    SequenceKind kind() const noexcept { return kind_; }
    const std::vector<int>& values() const noexcept { return values_; }

    /// j_n for n >= 1.
    int j(int n) const;

    /// Prefix length for explicit sequences, nullopt otherwise.
    std::optional<int> length() const;

    /// True when every level n' <= n is defined.
    bool has_level(int n) const;

    /// True for constant and periodic sequences (the ratio r exists).
    bool has_limit_ratio() const noexcept { return kind_ != SequenceKind::explicit_prefix; }

    /// Shortest repeating block. Constant sequences give a single entry.
    /// Throws DomainError for explicit sequences.
    std::vector<int> primitive_period() const;

    /// Canonical text form accepted by parse_sequence.
    std::string to_string() const;

    bool operator==(const JSequence&) const = default;

private:
    JSequence(SequenceKind kind, std::vector<int> values);

    SequenceKind kind_;
    std::vector<int> values_;
};

/// Parses "k", "a,b,..." (periodic pattern) or "seq:a,b,..." (explicit prefix).
JSequence parse_sequence(std::string_view text);

struct LevelInfo {
    int n = 0;
    BigInt scale;  ///< I_n = j_1 ... j_n; cells have length 1/I_n
    BigInt cells;  ///< N_n = 2^n I_n
    BigInt nodes;  ///< 2^{n-1}(I_n + 3) for n >= 1, 2 for n = 0
};

LevelInfo level_info(const JSequence& seq, int n);

/// I_n alone.
BigInt scale_at(const JSequence& seq, int n);

struct ShapeCensus {
    int n = 0;
    BigInt v_count;
    BigInt loop_count;
    BigInt cross_count;

    BigInt degree_one_nodes() const;
};

ShapeCensus shape_census(const JSequence& seq, int n);

struct DimensionReport {
    double r = 0.0;          ///< lim I_n^{1/n}
    double hausdorff = 0.0;  ///< Q = 1 + log 2 / log r
    double spectral = 0.0;   ///< d_s = log(2r) / log r
    double walk = 2.0;       ///< d_w
};

DimensionReport dimensions(const JSequence& seq);

/// 2^k for k >= 0.
BigInt pow2(int k);

}  // namespace laakso
