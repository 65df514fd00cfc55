#include "cli.hpp"

#include "table1_data.hpp"

#include "laakso/eigensolver.hpp"
#include "laakso/errors.hpp"
#include "laakso/format.hpp"
#include "laakso/graph.hpp"
#include "laakso/heat_zeta.hpp"
#include "laakso/sequence.hpp"
#include "laakso/spectrum.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <iostream>
#include <optional>
#include <sstream>

namespace laakso::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
    std::string sequence;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 0;
};

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ValidationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == sep) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

// "a:b:Nlog" or a single value.
std::vector<double> parse_t_grid(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        const double t = parse_number(parts[0], "t");
        if (!(t > 0.0)) throw ValidationError("t must be > 0");
        return {t};
    }
    if (parts.size() != 3 || parts[2].size() < 4 || parts[2].substr(parts[2].size() - 3) != "log") {
        throw ValidationError("t grid must look like a:b:Nlog (got '" + std::string(text) + "')");
    }
    const double a = parse_number(parts[0], "t grid start");
    const double b = parse_number(parts[1], "t grid end");
    const int count = parse_int(parts[2].substr(0, parts[2].size() - 3), "t grid size");
    return log_grid(a, b, count);
}

std::pair<int, int> parse_range(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        const int m = parse_int(parts[0], "m");
        return {m, m};
    }
    if (parts.size() != 2) throw ValidationError("range must look like a:b (got '" + std::string(text) + "')");
    return {parse_int(parts[0], "range start"), parse_int(parts[1], "range end")};
}

// "2", "1.5+2i", "0.5-3i", "2i".
Complex parse_complex(std::string_view text) {
    if (text.empty()) throw ValidationError("empty complex number");
    if (text.back() != 'i') return {parse_number(text, "s"), 0.0};
    const std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split_at = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split_at = i;
            break;
        }
    }
    if (split_at == std::string_view::npos) {
        const std::string_view im = body.empty() || body == "+" ? "1" : body == "-" ? "-1" : body;
        return {0.0, parse_number(im, "s")};
    }
    const double re = parse_number(body.substr(0, split_at), "s");
    std::string_view im = body.substr(split_at);
    if (im.front() == '+') im.remove_prefix(1);
    double imag = 0.0;
    if (im.empty()) {
        imag = 1.0;
    } else if (im == "-") {
        imag = -1.0;
    } else {
        imag = parse_number(im, "s");
    }
    return {re, imag};
}

std::string complex_text(Complex z) {
    std::string text = format_double(z.real());
    if (z.imag() != 0.0) text += (z.imag() < 0.0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
    return text;
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string config_value_text(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_float()) return format_double(value.get<double>());
    return value.dump();
}

// Report = config + payload. JSON goes out whole; CSV writes config as
// "# key=value" lines, notes as "# note=..." and then the caller's rows.
class Report {
public:
    explicit Report(json config) : config_(std::move(config)) {}

    json& payload() { return payload_; }
    void note(std::string text) { notes_.push_back(std::move(text)); }
    void set_csv(std::function<void(std::ostream&)> rows) { csv_ = std::move(rows); }

    void write(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            json doc = payload_.is_null() ? json::object() : payload_;
            doc["config"] = config_;
            doc["notes"] = notes_;
            out << doc.dump(2) << '\n';
            return;
        }
        for (const auto& [key, value] : config_.items()) out << "# " << key << '=' << config_value_text(value) << '\n';
        for (const auto& n : notes_) out << "# note=" << n << '\n';
        if (csv_) csv_(out);
    }

private:
    json config_;
    json payload_;
    std::vector<std::string> notes_;
    std::function<void(std::ostream&)> csv_;
};

json base_config(const std::string& command, const GlobalOptions& g) {
    json config;
    config["command"] = command;
    config["sequence"] = g.sequence;
    config["format"] = g.format;
    config["out"] = g.out.empty() ? std::string("-") : g.out;
    config["seed"] = g.seed;
    return config;
}

JSequence require_sequence(const GlobalOptions& g) {
    if (g.sequence.empty()) throw ValidationError("a sequence is required (-j)");
    return parse_sequence(g.sequence);
}

bool is_pattern(const JSequence& seq, const std::vector<int>& pattern) {
    return seq.has_limit_ratio() && seq.primitive_period() == pattern;
}

// ---- spectrum -------------------------------------------------------------

struct SpectrumOptions {
    std::optional<double> lambda_max;
    std::optional<int> count;
    std::optional<int> n_max;
    std::string expect;
};

int cmd_spectrum(const GlobalOptions& g, const SpectrumOptions& o, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    if (o.lambda_max.has_value() == o.count.has_value()) {
        throw ValidationError("give exactly one of --lambda-max and --count");
    }
    if (!o.expect.empty() && o.expect != "table1") throw ValidationError("unknown reference '" + o.expect + "'");

    json config = base_config("spectrum", g);
    config["lambda_max"] = o.lambda_max ? json(*o.lambda_max) : json(nullptr);
    config["count"] = o.count ? json(*o.count) : json(nullptr);
    config["n_max"] = o.n_max ? json(*o.n_max) : json(nullptr);
    config["expect"] = o.expect.empty() ? json(nullptr) : json(o.expect);
    Report report(config);

    std::optional<int> cap = o.n_max;
    if (const auto length = seq.length()) {
        if (!cap || *cap > *length) {
            cap = *length;
            report.note("levels above " + std::to_string(*length) + " excluded: the explicit sequence ends there");
        }
    }
    if (o.count && *o.count < 1) throw ValidationError("--count must be >= 1");
    SpectrumTable table = o.count ? first_distinct(seq, static_cast<std::size_t>(*o.count), cap)
                          : cap   ? level_spectrum(seq, *cap, *o.lambda_max)
                                  : full_spectrum(seq, *o.lambda_max);
    report.payload()["table"] = to_json(table);

    int status = ok;
    if (o.expect == "table1") {
        if (!is_pattern(seq, {2, 3})) throw ValidationError("--expect table1 needs the sequence 2,3");
        const auto reference = table1_reference();
        const SpectrumTable check = first_distinct(seq, reference.size(), cap);
        json diffs = json::array();
        for (std::size_t i = 0; i < reference.size(); ++i) {
            const auto& ref = reference[i];
            const bool have = i < check.entries.size();
            const double lambda = have ? check.entries[i].value : std::nan("");
            const long long mult = have ? check.entries[i].multiplicity.convert_to<long long>() : -1;
            if (!have || std::abs(lambda - ref.lambda) > ref.tolerance() || mult != ref.multiplicity) {
                diffs.push_back({{"k", ref.k},
                                 {"expected_lambda", ref.lambda},
                                 {"expected_multiplicity", ref.multiplicity},
                                 {"lambda", have ? json(lambda) : json(nullptr)},
                                 {"multiplicity", have ? json(mult) : json(nullptr)}});
            }
        }
        report.payload()["expect"] = {{"reference", "table1"}, {"rows", reference.size()}, {"diffs", diffs}};
        report.note("table1: " + std::to_string(diffs.size()) + " diffs over " + std::to_string(reference.size()) +
                    " rows");
        if (!diffs.empty()) status = mismatch;
    }
    report.set_csv([&table](std::ostream& os) { write_csv(os, table); });
    report.write(out, g.format);
    return status;
}

// ---- compare --------------------------------------------------------------

struct CompareOptions {
    int n = -1;
    int m = 0;
    int k = 0;
    double tol = 1e-8;
    double rel_gap = 1e-6;
    std::string method = "auto";
};

EigenMethod method_from(const std::string& name) {
    if (name == "auto") return EigenMethod::automatic;
    if (name == "iterative") return EigenMethod::iterative;
    if (name == "dense") return EigenMethod::dense;
    throw ValidationError("unknown eigensolver method '" + name + "'");
}

int cmd_compare(const GlobalOptions& g, const CompareOptions& o, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    if (o.n < 0) throw ValidationError("-n must be >= 0");
    if (o.m < 1) throw ValidationError("-m must be >= 1");
    if (o.k < 1) throw ValidationError("-k must be >= 1");

    json config = base_config("compare", g);
    config["n"] = o.n;
    config["m"] = o.m;
    config["k"] = o.k;
    config["tol"] = o.tol;
    config["rel_gap"] = o.rel_gap;
    config["method"] = o.method;
    Report report(config);

    const MetricGraph graph = build_graph(seq, o.n);
    const Discretization disc = discretize(graph, o.m);
    EigenOptions options;
    options.method = method_from(o.method);
    options.seed = g.seed;
    const EigenResult result = lowest_eigenvalues(disc.matrix, o.k, o.tol, options);
    const ClusteredSpectrum clusters = cluster_multiplicities(result, o.rel_gap);

    const double top = result.values.empty() ? 0.0 : result.values.back();
    const SpectrumTable analytic = level_spectrum(seq, o.n, std::max(4.0 * top, 100.0) + 100.0);
    const double cutoff = disc.trust_cutoff();

    int status = result.converged() ? ok : numerical;
    json rows = json::array();
    double max_rel = 0.0;
    std::vector<std::vector<std::string>> csv_rows;
    for (std::size_t i = 0; i < clusters.clusters.size(); ++i) {
        const Cluster& c = clusters.clusters[i];
        const bool last = i + 1 == clusters.clusters.size();
        json row{{"index", i}, {"numeric", c.value}, {"numeric_multiplicity", c.multiplicity}};
        std::string status_text;
        double expected = std::nan("");
        long long expected_mult = -1;
        double rel = std::nan("");
        if (i < analytic.entries.size()) {
            expected = analytic.entries[i].value;
            expected_mult = analytic.entries[i].multiplicity.convert_to<long long>();
            rel = std::abs(c.value - expected) / std::max(expected, 1.0);
        }
        if (expected_mult < 0) {
            status_text = "no-reference";
        } else if (expected > cutoff) {
            status_text = "above-cutoff";
        } else if (c.multiplicity == expected_mult) {
            status_text = "match";
            max_rel = std::max(max_rel, rel);
        } else if (last && c.multiplicity < expected_mult) {
            status_text = "truncated";
        } else {
            status_text = "mismatch";
            if (status == ok) status = mismatch;
        }
        row["analytic"] = std::isnan(expected) ? json(nullptr) : json(expected);
        row["analytic_multiplicity"] = expected_mult < 0 ? json(nullptr) : json(expected_mult);
        row["rel_error"] = std::isnan(rel) ? json(nullptr) : json(rel);
        row["status"] = status_text;
        rows.push_back(row);
        csv_rows.push_back({std::to_string(i), format_double(c.value), std::to_string(c.multiplicity),
                            std::isnan(expected) ? "" : format_double(expected),
                            expected_mult < 0 ? "" : std::to_string(expected_mult),
                            std::isnan(rel) ? "" : format_double(rel), status_text});
    }
    if (!result.converged()) {
        report.note(std::to_string(result.k_converged) + " of " + std::to_string(result.k_requested) +
                    " eigenpairs converged");
    }

    json& p = report.payload();
    p["dimension"] = disc.matrix.dimension;
    p["trust_cutoff"] = cutoff;
    p["k_converged"] = result.k_converged;
    p["iterations"] = result.iterations;
    p["max_rel_error"] = max_rel;
    p["clusters"] = rows;
    report.set_csv([csv_rows](std::ostream& os) {
        os << "index,numeric,numeric_multiplicity,analytic,analytic_multiplicity,rel_error,status\n";
        for (const auto& r : csv_rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << '\n';
        }
    });
    report.write(out, g.format);
    return status;
}

// ---- dims -----------------------------------------------------------------

int cmd_dims(const GlobalOptions& g, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    Report report(base_config("dims", g));
    const DimensionReport d = dimensions(seq);
    report.payload() = {{"r", d.r}, {"hausdorff", d.hausdorff}, {"spectral", d.spectral}, {"walk", d.walk}};
    report.set_csv([d](std::ostream& os) {
        os << "quantity,value\n"
           << "r," << format_double(d.r) << "\nhausdorff," << format_double(d.hausdorff) << "\nspectral,"
           << format_double(d.spectral) << "\nwalk," << format_double(d.walk) << '\n';
    });
    report.write(out, g.format);
    return ok;
}

// ---- heat -----------------------------------------------------------------

struct HeatOptions {
    std::string t_grid;
    double tol = 1e-9;
    std::optional<int> n_max;
    bool fit_ds = false;
    bool asymptotic = false;
    int m_terms = 5;
};

int cmd_heat(const GlobalOptions& g, const HeatOptions& o, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    if (o.t_grid.empty()) throw ValidationError("--t is required");
    const std::vector<double> grid = parse_t_grid(o.t_grid);

    json config = base_config("heat", g);
    config["t"] = o.t_grid;
    config["tol"] = o.tol;
    config["n_max"] = o.n_max ? json(*o.n_max) : json(nullptr);
    config["fit_ds"] = o.fit_ds;
    config["asymptotic"] = o.asymptotic;
    config["m_terms"] = o.m_terms;
    Report report(config);
    if (o.n_max) report.note("levels above " + std::to_string(*o.n_max) + " excluded");

    std::function<double(double)> asymptotic;
    std::string formula;
    if (o.asymptotic) {
        if (!seq.has_limit_ratio() || o.n_max) {
            throw ValidationError("--asymptotic needs a constant or periodic sequence without a level cap");
        }
        if (is_pattern(seq, {2})) {
            formula = "j2";
            asymptotic = [m = o.m_terms](double t) { return leading_term_j2(t, m); };
        } else if (is_pattern(seq, {2, 3})) {
            formula = "j23";
            asymptotic = [m = o.m_terms](double t) { return leading_term_j23(t, m); };
        } else {
            formula = "residues";
            asymptotic = [seq, m = o.m_terms](double t) { return residue_expansion(seq, t, m); };
        }
    }

    std::vector<HeatTraceSample> samples;
    json rows = json::array();
    std::vector<double> asym_values;
    for (double t : grid) {
        samples.push_back(heat_trace(seq, t, o.tol, o.n_max));
        const auto& s = samples.back();
        json row{{"t", s.t}, {"z", s.z}, {"tail_bound", s.tail_bound}};
        if (asymptotic) {
            const double a = asymptotic(t);
            asym_values.push_back(a);
            row["asymptotic"] = a;
            row["rel_diff"] = std::abs(a - s.z) / s.z;
        }
        rows.push_back(row);
    }
    report.payload()["samples"] = rows;
    if (asymptotic) report.payload()["asymptotic_formula"] = formula;

    if (o.fit_ds) {
        if (!seq.has_limit_ratio()) throw ValidationError("--fit-ds needs a constant or periodic sequence");
        const double period = log_period(seq);
        const double fitted = estimate_spectral_dimension(samples, period);
        report.payload()["fit"] = {
            {"d_s", fitted}, {"expected", dimensions(seq).spectral}, {"averaging_period", period}};
        report.note("fitted d_s=" + format_double(fitted));
    }

    report.set_csv([samples, asym_values](std::ostream& os) {
        os << "t,z,tail_bound" << (asym_values.empty() ? "" : ",asymptotic") << '\n';
        for (std::size_t i = 0; i < samples.size(); ++i) {
            os << format_double(samples[i].t) << ',' << format_double(samples[i].z) << ','
               << format_double(samples[i].tail_bound);
            if (!asym_values.empty()) os << ',' << format_double(asym_values[i]);
            os << '\n';
        }
    });
    report.write(out, g.format);
    return ok;
}

// ---- zeta -----------------------------------------------------------------

struct ZetaOptions {
    std::vector<std::string> s_values;
    std::string method = "both";
    double lambda_max = 1e4;
};

int cmd_zeta(const GlobalOptions& g, const ZetaOptions& o, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    if (o.s_values.empty()) throw ValidationError("at least one --s value is required");
    if (o.method != "closed" && o.method != "direct" && o.method != "both") {
        throw ValidationError("--method must be closed, direct or both");
    }
    std::vector<Complex> points;
    for (const auto& text : o.s_values) {
        for (auto part : split(text, ',')) points.push_back(parse_complex(part));
    }

    json config = base_config("zeta", g);
    config["s"] = o.s_values;
    config["method"] = o.method;
    config["lambda_max"] = o.lambda_max;
    Report report(config);

    const bool closed = o.method != "direct";
    const bool direct = o.method != "closed";
    std::optional<SpectrumTable> table;
    if (direct) {
        const auto length = seq.length();
        table = length ? level_spectrum(seq, *length, o.lambda_max) : full_spectrum(seq, o.lambda_max);
        if (length) report.note("direct sum uses levels <= " + std::to_string(*length));
    }

    json rows = json::array();
    std::vector<std::string> csv_rows;
    for (Complex s : points) {
        json row{{"s", complex_json(s)}};
        std::string line = complex_text(s);
        if (closed) {
            const Complex v = spectral_zeta_closed(seq, s);
            row["closed"] = complex_json(v);
            line += "," + format_double(v.real()) + "," + format_double(v.imag());
        }
        if (direct) {
            std::optional<ZetaDirectResult> r;
            try {
                r = spectral_zeta_direct(*table, s);
            } catch (const DivergenceError& e) {
                if (o.method == "direct") throw;
                report.note("direct sum skipped at s=" + complex_text(s) + ": " + e.what());
            }
            if (r) {
                row["direct"] = complex_json(r->value);
                row["direct_tail"] = complex_json(r->tail);
                line += "," + format_double(r->value.real()) + "," + format_double(r->value.imag());
            } else {
                row["direct"] = nullptr;
                line += ",,";
            }
        }
        rows.push_back(row);
        csv_rows.push_back(line);
    }
    report.payload()["values"] = rows;
    report.set_csv([csv_rows, closed, direct](std::ostream& os) {
        os << "s";
        if (closed) os << ",closed_re,closed_im";
        if (direct) os << ",direct_re,direct_im";
        os << '\n';
        for (const auto& line : csv_rows) os << line << '\n';
    });
    report.write(out, g.format);
    return ok;
}

// ---- poles ----------------------------------------------------------------

int cmd_poles(const GlobalOptions& g, const std::string& range, std::ostream& out) {
    const JSequence seq = require_sequence(g);
    const auto [lo, hi] = parse_range(range);
    json config = base_config("poles", g);
    config["m"] = range;
    Report report(config);

    const PoleLattice lattice = poles(seq, lo, hi);
    json members = json::array();
    for (int m = lo; m <= hi; ++m) {
        const Complex s = lattice.members[static_cast<std::size_t>(m - lo)];
        members.push_back({{"m", m}, {"re", s.real()}, {"im", s.imag()}});
    }
    report.payload() = {{"real_part", lattice.real_part},
                        {"spacing", lattice.spacing},
                        {"log_period", 2.0 * std::numbers::pi / lattice.spacing},
                        {"members", members}};
    report.set_csv([lattice](std::ostream& os) {
        os << "m,re,im\n";
        for (std::size_t i = 0; i < lattice.members.size(); ++i) {
            os << lattice.m_lo + static_cast<int>(i) << ',' << format_double(lattice.members[i].real()) << ','
               << format_double(lattice.members[i].imag()) << '\n';
        }
    });
    report.write(out, g.format);
    return ok;
}

}  // namespace

double ReferenceRow::tolerance() const { return 0.5 * std::pow(10.0, -decimals) + 1e-9; }

std::vector<ReferenceRow> table1_reference() {
    std::vector<ReferenceRow> rows;
    std::istringstream in{std::string(kTable1Csv)};
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto parts = split(line, ',');
        if (parts.size() != 4) throw ValidationError("malformed reference row '" + line + "'");
        ReferenceRow row;
        row.k = parse_int(parts[0], "k");
        row.lambda = parse_number(parts[1], "lambda");
        row.decimals = parse_int(parts[2], "decimals");
        row.multiplicity = parse_int(parts[3], "multiplicity");
        rows.push_back(row);
    }
    return rows;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra, heat traces and zeta functions of Laakso spaces"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("-j,--sequence", g.sequence, "j sequence: k, a,b,... (periodic) or seq:a,b,... (explicit)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--seed", g.seed, "eigensolver start block seed");

    SpectrumOptions so;
    auto* spectrum = app.add_subcommand("spectrum", "distinct eigenvalues with multiplicities");
    spectrum->add_option("--lambda-max", so.lambda_max, "eigenvalue cutoff");
    spectrum->add_option("--count", so.count, "number of distinct eigenvalues");
    spectrum->add_option("--n-max", so.n_max, "highest level used");
    spectrum->add_option("--expect", so.expect, "diff against embedded reference data (table1)");

    CompareOptions co;
    auto* compare = app.add_subcommand("compare", "discretized graph eigenvalues against the analytic table");
    compare->add_option("-n,--level", co.n, "graph level")->required();
    compare->add_option("-m,--mesh", co.m, "interior mesh points per edge")->required();
    compare->add_option("-k,--count", co.k, "number of eigenvalues")->required();
    compare->add_option("--tol", co.tol, "residual tolerance");
    compare->add_option("--rel-gap", co.rel_gap, "relative gap that separates clusters");
    compare->add_option("--method", co.method, "auto, iterative or dense");

    auto* dims = app.add_subcommand("dims", "Hausdorff, spectral and walk dimensions");

    HeatOptions ho;
    auto* heat = app.add_subcommand("heat", "heat kernel trace on a t grid");
    heat->add_option("--t", ho.t_grid, "a:b:Nlog or a single t")->required();
    heat->add_option("--tol", ho.tol, "absolute truncation tolerance");
    heat->add_option("--n-max", ho.n_max, "highest level summed");
    heat->add_flag("--fit-ds", ho.fit_ds, "fit the spectral dimension");
    heat->add_flag("--asymptotic", ho.asymptotic, "compare with the small-t expansion");
    heat->add_option("--m-terms", ho.m_terms, "oscillatory terms per pole family");

    ZetaOptions zo;
    auto* zeta = app.add_subcommand("zeta", "spectral zeta function");
    zeta->add_option("--s", zo.s_values, "evaluation points (re, re+imi, comma lists)")->required();
    zeta->add_option("--method", zo.method, "closed, direct or both");
    zeta->add_option("--lambda-max", zo.lambda_max, "table cutoff for the direct sum");

    std::string pole_range = "-3:3";
    auto* pole_cmd = app.add_subcommand("poles", "lattice of leading poles");
    pole_cmd->add_option("-m,--range", pole_range, "m range a:b");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) {
            err << "error: cannot open '" << g.out << "' for writing\n";
            return validation;
        }
        sink = &file;
    }

    try {
        if (*spectrum) return cmd_spectrum(g, so, *sink);
        if (*compare) return cmd_compare(g, co, *sink);
        if (*dims) return cmd_dims(g, *sink);
        if (*heat) return cmd_heat(g, ho, *sink);
        if (*zeta) return cmd_zeta(g, zo, *sink);
        if (*pole_cmd) return cmd_poles(g, pole_range, *sink);
    } catch (const PoleError& e) {
        err << "error: " << e.what() << '\n';
        return numerical;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return numerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return validation;
    }
    return validation;
}

}  // namespace laakso::cli
