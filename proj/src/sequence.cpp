#include "laakso/sequence.hpp"

#include "laakso/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

namespace laakso {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<int> parse_entries(std::string_view body, std::string_view original) {
    std::vector<int> out;
    if (trim(body).empty()) {
        throw ValidationError("empty sequence specification '" + std::string(original) + "'");
    }
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const std::size_t comma = body.find(',', pos);
        const std::string_view raw =
            trim(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (raw.empty()) {
            throw ValidationError("empty entry in sequence specification '" + std::string(original) + "'");
        }
        int value = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
            throw ValidationError("malformed entry '" + std::string(raw) + "' in sequence specification '" +
                                  std::string(original) + "'");
        }
        if (value < 2) {
            throw ValidationError("sequence entry " + std::string(raw) + " is < 2 (every j_n must be >= 2)");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

void require_valid(const std::vector<int>& values) {
    if (values.empty()) throw ValidationError("sequence needs at least one entry");
    for (int v : values) {
        if (v < 2) throw ValidationError("sequence entry " + std::to_string(v) + " is < 2");
    }
}

}  // namespace

JSequence::JSequence(SequenceKind kind, std::vector<int> values) : kind_(kind), values_(std::move(values)) {
    require_valid(values_);
}

JSequence JSequence::constant(int j) { return JSequence(SequenceKind::constant, {j}); }

JSequence JSequence::periodic(std::vector<int> pattern) {
    return JSequence(SequenceKind::periodic, std::move(pattern));
}

JSequence JSequence::explicit_prefix(std::vector<int> prefix) {
    return JSequence(SequenceKind::explicit_prefix, std::move(prefix));
}

int JSequence::j(int n) const {
    if (n < 1) throw DomainError("j_n is defined for n >= 1 (got " + std::to_string(n) + ")");
    switch (kind_) {
        case SequenceKind::constant:
            return values_.front();
        case SequenceKind::periodic:
            return values_[static_cast<std::size_t>(n - 1) % values_.size()];
        case SequenceKind::explicit_prefix:
            if (static_cast<std::size_t>(n) > values_.size()) {
                throw DomainError("level " + std::to_string(n) + " is beyond the explicit prefix of length " +
                                  std::to_string(values_.size()));
            }
            return values_[static_cast<std::size_t>(n - 1)];
    }
    return values_.front();
}

std::optional<int> JSequence::length() const {
    if (kind_ == SequenceKind::explicit_prefix) return static_cast<int>(values_.size());
    return std::nullopt;
}

bool JSequence::has_level(int n) const {
    if (n < 0) return false;
    if (kind_ != SequenceKind::explicit_prefix) return true;
    return static_cast<std::size_t>(n) <= values_.size();
}

std::vector<int> JSequence::primitive_period() const {
    if (kind_ == SequenceKind::explicit_prefix) {
        throw DomainError("explicit sequence '" + to_string() + "' has no period");
    }
    const std::size_t len = values_.size();
    for (std::size_t p = 1; p <= len; ++p) {
        if (len % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < len && ok; ++i) ok = values_[i] == values_[i - p];
        if (ok) return {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(p)};
    }
    return values_;
}

std::string JSequence::to_string() const {
    std::string body;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) body += ',';
        body += std::to_string(values_[i]);
    }
    if (kind_ == SequenceKind::explicit_prefix) return "seq:" + body;
    return body;
}

JSequence parse_sequence(std::string_view text) {
    const std::string_view spec = trim(text);
    constexpr std::string_view explicit_tag = "seq:";
    if (spec.substr(0, explicit_tag.size()) == explicit_tag) {
        return JSequence::explicit_prefix(parse_entries(spec.substr(explicit_tag.size()), text));
    }
    auto values = parse_entries(spec, text);
    if (values.size() == 1) return JSequence::constant(values.front());
    return JSequence::periodic(std::move(values));
}

BigInt pow2(int k) {
    if (k < 0) throw DomainError("pow2 needs a non-negative exponent");
    BigInt one = 1;
    return one << k;
}

BigInt scale_at(const JSequence& seq, int n) {
    if (n < 0) throw DomainError("level must be >= 0");
    BigInt scale = 1;
    for (int i = 1; i <= n; ++i) scale *= seq.j(i);
    return scale;
}

LevelInfo level_info(const JSequence& seq, int n) {
    if (n < 0) throw DomainError("level must be >= 0 (got " + std::to_string(n) + ")");
    if (!seq.has_level(n)) {
        throw DomainError("level " + std::to_string(n) + " is beyond the explicit prefix of '" + seq.to_string() + "'");
    }
    LevelInfo info;
    info.n = n;
    info.scale = scale_at(seq, n);
    info.cells = pow2(n) * info.scale;
    info.nodes = n == 0 ? BigInt(2) : pow2(n - 1) * (info.scale + 3);
    return info;
}

BigInt ShapeCensus::degree_one_nodes() const { return 2 * v_count; }

ShapeCensus shape_census(const JSequence& seq, int n) {
    if (n < 1) throw DomainError("shapes exist only for n >= 1 (got " + std::to_string(n) + ")");
    if (!seq.has_level(n)) {
        throw DomainError("level " + std::to_string(n) + " is beyond the explicit prefix of '" + seq.to_string() + "'");
    }
    const BigInt prev = scale_at(seq, n - 1);
    ShapeCensus census;
    census.n = n;
    census.v_count = pow2(n);
    census.loop_count = pow2(n - 1) * (seq.j(n) - 2) * prev;
    census.cross_count = n >= 2 ? pow2(n - 2) * (prev - 1) : BigInt(0);
    return census;
}

DimensionReport dimensions(const JSequence& seq) {
    if (!seq.has_limit_ratio()) {
        throw DomainError("r = lim I_n^{1/n} is undefined for the explicit sequence '" + seq.to_string() + "'");
    }
    const auto period = seq.primitive_period();
    double log_product = 0.0;
    for (int j : period) log_product += std::log(static_cast<double>(j));
    const double log_r = log_product / static_cast<double>(period.size());

    DimensionReport report;
    report.r = std::exp(log_r);
    report.hausdorff = 1.0 + std::log(2.0) / log_r;
    report.walk = 2.0;
    report.spectral = 2.0 * report.hausdorff / report.walk;
    return report;
}

}  // namespace laakso
