#include "laakso/spectrum.hpp"

#include "laakso/errors.hpp"
#include "laakso/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <tuple>

namespace laakso {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

struct Generated {
    BigInt key;
    Contribution contribution;
};

void require_finite_cutoff(double lambda_max) {
    if (std::isnan(lambda_max) || lambda_max < 0.0) {
        throw ValidationError("lambda_max must be >= 0 (got " + format_double(lambda_max) + ")");
    }
}

void enumerate_family(const SpectralFamily& family, const BigInt& max_key, std::vector<Generated>& out) {
    if (family.multiplicity == 0) return;
    for (BigInt k = family.first_index;; ++k) {
        const BigInt key = family.key(k);
        if (key > max_key) break;
        out.push_back({key, Contribution{family.shape, family.level, k, family.multiplicity}});
    }
}

// Shared by full_spectrum and level_spectrum; `cap` limits the levels used.
SpectrumTable build_table(const JSequence& seq, double lambda_max, std::optional<int> cap) {
    require_finite_cutoff(lambda_max);
    if (std::isinf(lambda_max)) throw ValidationError("lambda_max must be finite for a spectrum table");
    if (cap && *cap < 0) throw ValidationError("level cap must be >= 0");

    const BigInt max_key = max_key_for(lambda_max);
    std::vector<Generated> generated;
    int deepest = 0;

    for (int n = 0;; ++n) {
        if (cap && n > *cap) break;
        if (n >= 1) {
            if (!seq.has_level(n)) {
                // Level n would contribute keys >= I_n >= 2 I_{n-1}.
                const BigInt lower = 2 * scale_at(seq, n - 1);
                if (lower <= max_key) {
                    throw DomainError("the explicit prefix of '" + seq.to_string() +
                                      "' is too short to determine eigenvalues up to " + format_double(lambda_max) +
                                      "; use a level cap");
                }
                break;
            }
            // Smallest key introduced at level n is I_n (V with k = 0, quarter-cross with k = 1).
            if (scale_at(seq, n) > max_key) break;
        }
        const std::size_t before = generated.size();
        for (const auto& family : families_at_level(seq, n)) enumerate_family(family, max_key, generated);
        if (generated.size() > before) deepest = n;
    }

    std::stable_sort(generated.begin(), generated.end(), [](const Generated& a, const Generated& b) {
        return std::tie(a.key, a.contribution.level) < std::tie(b.key, b.contribution.level);
    });

    SpectrumTable table{seq, lambda_max, cap, deepest, {}};
    for (auto& g : generated) {
        if (table.entries.empty() || table.entries.back().key.m != g.key) {
            SpectrumEntry entry;
            entry.key = EigenKey{g.key};
            entry.value = eigenvalue_of_key(g.key);
            entry.multiplicity = 0;
            table.entries.push_back(std::move(entry));
        }
        auto& entry = table.entries.back();
        entry.multiplicity += g.contribution.count;
        entry.contributions.push_back(std::move(g.contribution));
    }
    return table;
}

std::string big_to_string(const BigInt& v) { return v.str(); }

}  // namespace

std::string_view to_string(Shape shape) {
    switch (shape) {
        case Shape::line: return "line";
        case Shape::v: return "V";
        case Shape::loop: return "loop";
        case Shape::cross_full: return "cross-full";
        case Shape::cross_quarter: return "cross-quarter";
    }
    return "unknown";
}

Shape shape_from_string(std::string_view name) {
    for (Shape s : {Shape::line, Shape::v, Shape::loop, Shape::cross_full, Shape::cross_quarter}) {
        if (to_string(s) == name) return s;
    }
    throw ValidationError("unknown shape '" + std::string(name) + "'");
}

double eigenvalue_of_key(const BigInt& m) {
    const long double md = m.convert_to<long double>();
    return static_cast<double>(md * md * kPiL * kPiL / 4.0L);
}

double EigenKey::value() const { return eigenvalue_of_key(m); }

BigInt max_key_for(double lambda_max) {
    require_finite_cutoff(lambda_max);
    if (std::isinf(lambda_max)) throw ValidationError("no finite key bound for an infinite cutoff");
    const double guess = std::floor(2.0 * std::sqrt(lambda_max) / std::numbers::pi);
    BigInt m = static_cast<unsigned long long>(std::max(0.0, guess));
    while (eigenvalue_of_key(m + 1) <= lambda_max) ++m;
    while (m > 0 && eigenvalue_of_key(m) > lambda_max) --m;
    return m;
}

SpectralFamily family_of(Shape shape, const JSequence& seq, int n) {
    auto incompatible = [&](const char* need) {
        return DomainError(std::string(to_string(shape)) + " family needs " + need + " (got n = " +
                           std::to_string(n) + ")");
    };
    SpectralFamily family;
    family.shape = shape;
    family.level = n;
    if (shape == Shape::line) {
        if (n != 0) throw incompatible("n = 0");
        family.multiplicity = 1;
        family.stride = 2;
        family.offset = 0;
        family.first_index = 0;
        return family;
    }
    if (n < 1) throw incompatible("n >= 1");
    if ((shape == Shape::cross_full || shape == Shape::cross_quarter) && n < 2) throw incompatible("n >= 2");

    const BigInt scale = scale_at(seq, n);
    const BigInt prev = scale_at(seq, n - 1);
    switch (shape) {
        case Shape::v:
            family.multiplicity = pow2(n);
            family.stride = 2 * scale;
            family.offset = scale;
            family.first_index = 0;
            break;
        case Shape::loop:
            family.multiplicity = pow2(n - 1) * (seq.j(n) - 2) * prev;
            family.stride = 2 * scale;
            family.offset = 0;
            family.first_index = 1;
            break;
        case Shape::cross_full:
            family.multiplicity = pow2(n - 1) * (prev - 1);
            family.stride = 2 * scale;
            family.offset = 0;
            family.first_index = 1;
            break;
        case Shape::cross_quarter:
            family.multiplicity = pow2(n - 2) * (prev - 1);
            family.stride = scale;
            family.offset = 0;
            family.first_index = 1;
            break;
        case Shape::line:
            break;
    }
    return family;
}

std::vector<SpectralFamily> families_at_level(const JSequence& seq, int n) {
    std::vector<SpectralFamily> out;
    if (n == 0) {
        out.push_back(family_of(Shape::line, seq, 0));
        return out;
    }
    for (Shape s : {Shape::v, Shape::loop, Shape::cross_full, Shape::cross_quarter}) {
        if (n < 2 && (s == Shape::cross_full || s == Shape::cross_quarter)) continue;
        auto family = family_of(s, seq, n);
        if (family.multiplicity != 0) out.push_back(std::move(family));
    }
    return out;
}

std::vector<std::pair<EigenKey, BigInt>> shape_spectrum(Shape shape, const JSequence& seq, int n,
                                                        double lambda_max) {
    const SpectralFamily family = family_of(shape, seq, n);
    std::vector<std::pair<EigenKey, BigInt>> out;
    if (family.multiplicity == 0) return out;
    require_finite_cutoff(lambda_max);
    if (std::isinf(lambda_max)) {
        throw ValidationError("an infinite cutoff yields an infinite list for the " +
                              std::string(to_string(shape)) + " family");
    }
    std::vector<Generated> generated;
    enumerate_family(family, max_key_for(lambda_max), generated);
    out.reserve(generated.size());
    for (auto& g : generated) out.emplace_back(EigenKey{g.key}, g.contribution.count);
    return out;
}

SpectrumTable full_spectrum(const JSequence& seq, double lambda_max) {
    return build_table(seq, lambda_max, std::nullopt);
}

SpectrumTable level_spectrum(const JSequence& seq, int n_max, double lambda_max) {
    if (n_max < 0) throw ValidationError("n_max must be >= 0");
    return build_table(seq, lambda_max, n_max);
}

SpectrumTable first_distinct(const JSequence& seq, std::size_t count, std::optional<int> level_cap) {
    if (count == 0) throw ValidationError("count must be >= 1");
    double lambda_max = 16.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
        SpectrumTable table = level_cap ? level_spectrum(seq, *level_cap, lambda_max) : full_spectrum(seq, lambda_max);
        if (table.entries.size() >= count) {
            table.entries.resize(count);
            table.lambda_max = table.entries.back().value;
            table.deepest_level = 0;
            for (const auto& e : table.entries) {
                for (const auto& c : e.contributions) table.deepest_level = std::max(table.deepest_level, c.level);
            }
            return table;
        }
        lambda_max *= 4.0;
    }
    throw NumericalError("could not collect " + std::to_string(count) + " distinct eigenvalues");
}

BigInt counting_function(const SpectrumTable& table, double lambda) {
    if (lambda > table.lambda_max) {
        throw DomainError("lambda " + format_double(lambda) + " exceeds the table cutoff " +
                          format_double(table.lambda_max));
    }
    BigInt total = 0;
    for (const auto& entry : table.entries) {
        if (entry.value > lambda) break;
        total += entry.multiplicity;
    }
    return total;
}

nlohmann::json to_json(const SpectrumTable& table) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : table.entries) {
        nlohmann::json contributions = nlohmann::json::array();
        for (const auto& c : entry.contributions) {
            contributions.push_back({{"shape", to_string(c.shape)},
                                     {"level", c.level},
                                     {"k", big_to_string(c.mode)},
                                     {"count", big_to_string(c.count)}});
        }
        entries.push_back({{"key", big_to_string(entry.key.m)},
                           {"lambda", entry.value},
                           {"multiplicity", big_to_string(entry.multiplicity)},
                           {"contributions", std::move(contributions)}});
    }
    nlohmann::json out;
    out["sequence"] = table.sequence.to_string();
    out["lambda_max"] = table.lambda_max;
    out["level_cap"] = table.level_cap ? nlohmann::json(*table.level_cap) : nlohmann::json(nullptr);
    out["deepest_level"] = table.deepest_level;
    out["entries"] = std::move(entries);
    return out;
}

void write_csv(std::ostream& out, const SpectrumTable& table) {
    out << "lambda,multiplicity\n";
    for (const auto& entry : table.entries) {
        out << format_double(entry.value) << ',' << entry.multiplicity.str() << '\n';
    }
}

}  // namespace laakso
