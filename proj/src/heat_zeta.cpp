#include "laakso/heat_zeta.hpp"

#include "laakso/errors.hpp"
#include "laakso/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace laakso {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLog2 = std::log(2.0);

// Neumaier's compensated sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double to_double(const BigInt& x) { return x.convert_to<double>(); }

Complex power(double base, Complex exponent) { return std::exp(exponent * std::log(base)); }

double family_lambda(double stride, double offset, double k) {
    const double m = stride * k + offset;
    return m * m * kPi * kPi / 4.0;
}

// Adds the terms of one family to z; returns the bound on the terms left out.
double sum_family(const SpectralFamily& family, double t, double budget, CompensatedSum& z) {
    const double g = to_double(family.multiplicity);
    const double stride = to_double(family.stride);
    const double offset = to_double(family.offset);
    constexpr double kMaxTerms = 2e8;
    for (double k = family.first_index;; k += 1.0) {
        const double lambda = family_lambda(stride, offset, k);
        z.add(g * std::exp(-lambda * t));
        const double next = family_lambda(stride, offset, k + 1.0);
        const double gap = family_lambda(stride, offset, k + 2.0) - next;
        const double tail = g * std::exp(-next * t) / -std::expm1(-gap * t);
        if (tail <= budget) return tail;
        if (k - family.first_index > kMaxTerms) {
            throw DomainError("heat trace at t = " + format_double(t) + " needs more than 2e8 terms per family; "
                              "achieved bound " + format_double(tail));
        }
    }
}

// Bound on all families of level n together (every later level adds at most
// a quarter of this once mu_n t >= 1).
double level_bound(double scale, int n, double t) {
    const double mu = kPi * kPi * scale * scale / 4.0;
    return std::ldexp(1.0 + scale, n) * std::exp(-mu * t) / -std::expm1(-0.75 * kPi * kPi * scale * scale * t);
}

struct Period {
    std::vector<int> pattern;
    double log_product = 0.0;
    bool all_twos = false;
};

Period period_of(const JSequence& seq) {
    if (!seq.has_limit_ratio()) {
        throw DomainError("the explicit sequence '" + seq.to_string() + "' has no closed form; use a level cap");
    }
    Period p;
    p.pattern = seq.primitive_period();
    for (int j : p.pattern) p.log_product += std::log(static_cast<double>(j));
    p.all_twos = p.pattern == std::vector<int>{2};
    return p;
}

// One period of the level sum split by growth rate:
// sum_n T_n = U / (1 - q1) + V / (1 - q2).
struct LevelSums {
    Complex u = 0.0;
    Complex v = 0.0;
    Complex q1 = 0.0;
    Complex q2 = 0.0;
};

LevelSums level_sums(const Period& period, Complex s) {
    const double p = static_cast<double>(period.pattern.size());
    LevelSums out;
    out.q1 = std::exp(p * kLog2 + (1.0 - 2.0 * s) * period.log_product);
    out.q2 = std::exp(p * kLog2 - 2.0 * s * period.log_product);
    const Complex four_s = power(4.0, s);
    const Complex b = 1.5 * four_s - 3.0;
    double scale_prev = 1.0;
    double two_pow = 1.0;
    for (int j : period.pattern) {
        const double scale = scale_prev * j;
        const Complex factor = power(scale, -2.0 * s) * two_pow;
        const Complex a = four_s / 2.0 + static_cast<double>(j) - 1.0;
        out.u += factor * scale_prev * a;
        out.v += factor * b;
        scale_prev = scale;
        two_pow *= 2.0;
    }
    return out;
}

// Nearest point s with q(s) = 1 where q = 2^p P^{shift - 2s}.
Complex nearest_pole(const Period& period, double shift, Complex s) {
    const double p = static_cast<double>(period.pattern.size());
    const double re = (p * kLog2 / period.log_product + shift) / 2.0;
    const double step = kPi / period.log_product;
    return {re, std::round(s.imag() / step) * step};
}

Complex bracket(const Period& period, Complex s) {
    const LevelSums sums = level_sums(period, s);
    if (std::abs(1.0 - sums.q1) < 1e-12) {
        const Complex pole = nearest_pole(period, 1.0, s);
        throw PoleError("zeta_L has a pole at " + format_double(pole.real()) + (pole.imag() < 0 ? " - " : " + ") +
                            format_double(std::abs(pole.imag())) + "i",
                        pole);
    }
    Complex result = 1.0 + sums.u / (1.0 - sums.q1);
    if (period.all_twos) {
        // V / (1 - q2) = 3/2 identically for j = 2.
        result += 1.5;
    } else {
        if (std::abs(1.0 - sums.q2) < 1e-12) {
            const Complex pole = nearest_pole(period, 0.0, s);
            throw PoleError("zeta_L has a pole at " + format_double(pole.real()) + (pole.imag() < 0 ? " - " : " + ") +
                                format_double(std::abs(pole.imag())) + "i",
                            pole);
        }
        result += sums.v / (1.0 - sums.q2);
    }
    return result;
}

Complex zeta_closed(const Period& period, Complex s) {
    return riemann_zeta(2.0 * s) * power(kPi, -2.0 * s) * bracket(period, s);
}

}  // namespace

HeatTraceSample heat_trace(const JSequence& seq, double t, double tol, std::optional<int> level_cap) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("t must be a positive finite number");
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    if (level_cap) {
        if (*level_cap < 0) throw ValidationError("level cap must be >= 0");
        if (!seq.has_level(*level_cap)) {
            throw ValidationError("level cap " + std::to_string(*level_cap) + " is beyond the explicit prefix of '" +
                                  seq.to_string() + "'");
        }
    } else if (!seq.has_limit_ratio()) {
        throw ValidationError("explicit sequences need a level cap for the heat trace");
    }

    CompensatedSum z;
    double bound = 0.0;
    for (int n = 0;; ++n) {
        if (level_cap && n > *level_cap) break;
        if (n >= 1) {
            const double scale = to_double(scale_at(seq, n));
            const double mu = kPi * kPi * scale * scale / 4.0;
            if (mu * t >= 1.0) {
                const double rest = 1.25 * level_bound(scale, n, t);
                if (rest <= tol / 2.0) {
                    bound += rest;
                    break;
                }
            }
        }
        const double budget = tol / (20.0 * (n + 1.0) * (n + 1.0));
        for (const auto& family : families_at_level(seq, n)) bound += sum_family(family, t, budget, z);
    }
    return {t, z.value(), bound, level_cap};
}

ZetaDirectResult spectral_zeta_direct(const SpectrumTable& table, Complex s) {
    const JSequence& seq = table.sequence;
    const auto cap = table.level_cap;
    double abscissa = 0.5;
    if (!cap) {
        if (!seq.has_limit_ratio()) {
            throw DomainError("explicit sequences need a level-capped table for the direct zeta sum");
        }
        abscissa = dimensions(seq).spectral / 2.0;
    }
    if (s.real() <= abscissa) {
        throw DivergenceError("the spectral zeta series diverges for Re s <= " + format_double(abscissa));
    }

    ZetaDirectResult result;
    BigInt max_key = max_key_for(table.lambda_max);
    for (const auto& entry : table.entries) {
        if (entry.key.m > max_key) max_key = entry.key.m;
        if (entry.key.m == 0) continue;
        result.partial_sum += to_double(entry.multiplicity) * power(entry.value, -s);
    }

    const Complex two_s = 2.0 * s;
    int quiet_levels = 0;
    for (int n = 0;; ++n) {
        if (cap && n > *cap) break;
        if (!seq.has_level(n)) throw DomainError("the table's sequence ends before the tail converges");
        Complex level_tail = 0.0;
        for (const auto& family : families_at_level(seq, n)) {
            BigInt first = family.first_index;
            if (max_key >= family.offset) first = std::max(first, BigInt((max_key - family.offset) / family.stride + 1));
            const double stride = to_double(family.stride);
            const double a = to_double(first) + to_double(family.offset) / stride;
            level_tail += to_double(family.multiplicity) * power(kPi * stride / 2.0, -two_s) * hurwitz_zeta(two_s, a);
        }
        result.tail += level_tail;
        result.levels = n + 1;
        const double total = std::abs(result.partial_sum + result.tail);
        quiet_levels = std::abs(level_tail) <= 1e-17 * total ? quiet_levels + 1 : 0;
        if (quiet_levels >= 3) break;
        if (n > 4000) throw NumericalError("direct zeta tail did not settle within 4000 levels");
    }
    result.value = result.partial_sum + result.tail;
    return result;
}

Complex spectral_zeta_closed(const JSequence& seq, Complex s) {
    const Period period = period_of(seq);
    if (std::abs(2.0 * s - 1.0) < 1e-12) {
        const Complex b = bracket(period, 0.5);
        if (std::abs(b) > 1e-10) throw PoleError("zeta_L has a pole at 0.5", Complex(0.5, 0.0));
        // Removable: the bracket vanishes where zeta_R(2s) has its pole.
        constexpr double h = 1e-5;
        return 0.5 * (zeta_closed(period, 0.5 + h) + zeta_closed(period, 0.5 - h));
    }
    return zeta_closed(period, s);
}

double zeta_at_zero(const JSequence& seq) { return spectral_zeta_closed(seq, 0.0).real(); }

PoleLattice poles(const JSequence& seq, int m_lo, int m_hi) {
    if (m_lo > m_hi) throw ValidationError("empty pole range");
    const Period period = period_of(seq);
    PoleLattice lattice;
    lattice.real_part = dimensions(seq).spectral / 2.0;
    lattice.spacing = 2.0 * kPi / (2.0 * period.log_product);
    lattice.m_lo = m_lo;
    lattice.m_hi = m_hi;
    for (int m = m_lo; m <= m_hi; ++m) lattice.members.emplace_back(lattice.real_part, m * lattice.spacing);
    return lattice;
}

double log_period(const JSequence& seq) { return 2.0 * kPi / poles(seq, 0, 0).spacing; }

std::vector<ResidueTerm> residue_terms(const JSequence& seq, int m_terms) {
    if (m_terms < 0) throw ValidationError("m_terms must be >= 0");
    const Period period = period_of(seq);
    const double p = static_cast<double>(period.pattern.size());
    const double step = kPi / period.log_product;
    const double denom = 2.0 * period.log_product;
    const auto mellin = [](Complex s) { return gamma(s) * riemann_zeta(2.0 * s) * power(kPi, -2.0 * s); };

    std::vector<ResidueTerm> terms;
    terms.push_back({0.0, 1.0 + zeta_at_zero(seq)});
    const Complex half = bracket(period, 0.5) / (2.0 * std::sqrt(kPi));
    if (std::abs(half) > 1e-14) terms.push_back({0.5, half});

    const double sigma_v = p * kLog2 / period.log_product / 2.0;
    for (int m = -m_terms; m <= m_terms; ++m) {
        const Complex s(sigma_v + 0.5, m * step);
        terms.push_back({s, mellin(s) * level_sums(period, s).u / denom});
    }
    if (!period.all_twos) {
        for (int m = -m_terms; m <= m_terms; ++m) {
            const Complex s(sigma_v, m * step);
            terms.push_back({s, mellin(s) * level_sums(period, s).v / denom});
        }
    }
    return terms;
}

double residue_expansion(const JSequence& seq, double t, int m_terms) {
    if (!(t > 0.0)) throw ValidationError("t must be > 0");
    double sum = 0.0;
    for (const auto& term : residue_terms(seq, m_terms)) {
        sum += (term.coefficient * std::exp(-term.pole * std::log(t))).real();
    }
    return sum;
}

double leading_term_j2(double t, int m_terms) {
    if (!(t > 0.0)) throw ValidationError("t must be > 0");
    const double log4 = std::log(4.0);
    double oscillation = 1.0;
    for (int m = 1; m <= m_terms; ++m) {
        const Complex w(0.0, 2.0 * kPi * m / log4);
        const Complex a = 6.0 * riemann_zeta(2.0 + 2.0 * w) * gamma(1.0 + w) / power(kPi, 2.0 + 2.0 * w);
        oscillation += 2.0 * (a * std::exp(-w * std::log(t))).real();
    }
    const double constant = 1.0 + zeta_at_zero(JSequence::constant(2));
    return constant + 3.0 / (4.0 * std::sqrt(kPi * t)) + oscillation / (16.0 * t * kLog2);
}

double leading_term_j23(double t, int m_terms) {
    if (!(t > 0.0)) throw ValidationError("t must be > 0");
    const double log6 = std::log(6.0);
    const double step = kPi / log6;
    const auto mellin = [](Complex s) { return gamma(s) * riemann_zeta(2.0 * s) / power(kPi, 2.0 * s); };
    const double log_t = std::log(t);

    double sum = 1.0 + zeta_at_zero(JSequence::periodic({2, 3}));
    for (int m = -m_terms; m <= m_terms; ++m) {
        const Complex s(0.5 + kLog2 / log6, m * step);
        const Complex four_s = power(4.0, s);
        const Complex c = (four_s * four_s + 10.0 * four_s + 12.0) / four_s / (24.0 * log6) * mellin(s);
        sum += (c * std::exp(-s * log_t)).real();
    }
    for (int m = -m_terms; m <= m_terms; ++m) {
        const Complex s(kLog2 / log6, m * step);
        const Complex four_s = power(4.0, s);
        const Complex c = 3.0 / (8.0 * log6) * (four_s * four_s - 4.0) / four_s * mellin(s);
        sum += (c * std::exp(-s * log_t)).real();
    }
    return sum;
}

double estimate_spectral_dimension(std::span<const HeatTraceSample> samples, double period) {
    if (!(period > 0.0)) throw ValidationError("averaging period must be > 0");
    if (samples.size() < 10) throw ValidationError("at least 10 samples are needed");
    std::vector<HeatTraceSample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (const auto& sample : sorted) {
        if (!(sample.t > 0.0) || !(sample.z > 0.0)) throw ValidationError("samples need t > 0 and z > 0");
        if (!(sample.tail_bound / sample.z < 1e-6)) {
            throw ValidationError("sample at t = " + format_double(sample.t) + " has tail_bound / z >= 1e-6");
        }
    }
    const std::size_t n = sorted.size();
    std::vector<double> u(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = std::log(sorted[i].t);
        y[i] = std::log(sorted[i].z);
    }
    if (u.back() - u.front() < 2.0 * std::log(10.0)) {
        throw ValidationError("samples span less than two decades of t");
    }
    if (u.back() - u.front() < 1.25 * period) {
        throw ValidationError("samples span less than 1.25 averaging periods");
    }

    // Running integral of the piecewise-linear interpolant of y.
    std::vector<double> area(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) area[i] = area[i - 1] + 0.5 * (y[i] + y[i - 1]) * (u[i] - u[i - 1]);
    const auto integral_to = [&](double x) {
        auto it = std::upper_bound(u.begin(), u.end(), x);
        std::size_t i = it == u.begin() ? 0 : static_cast<std::size_t>(it - u.begin()) - 1;
        if (i >= n - 1) i = n - 2;
        const double w = u[i + 1] - u[i];
        const double frac = w > 0.0 ? (x - u[i]) / w : 0.0;
        const double yx = y[i] + frac * (y[i + 1] - y[i]);
        return area[i] + 0.5 * (y[i] + yx) * (x - u[i]);
    };

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n && u[i] + period <= u.back() + 1e-12; ++i) {
        xs.push_back(u[i]);
        ys.push_back((integral_to(std::min(u[i] + period, u.back())) - integral_to(u[i])) / period);
    }
    if (xs.size() < 3) throw ValidationError("too few samples for one averaging window");

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return -2.0 * sxy / sxx;
}

double estimate_spectral_dimension(const JSequence& seq, std::span<const HeatTraceSample> samples) {
    return estimate_spectral_dimension(samples, log_period(seq));
}

std::vector<double> log_grid(double a, double b, int n) {
    if (!(a > 0.0) || !(b >= a)) throw ValidationError("log grid needs 0 < a <= b");
    if (n < 1 || (n == 1 && a != b)) throw ValidationError("log grid needs at least 2 points for a < b");
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double la = std::log(a);
    const double lb = std::log(b);
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = n == 1 ? a : std::exp(la + (lb - la) * i / (n - 1));
    grid.front() = a;
    grid.back() = b;
    return grid;
}

}  // namespace laakso
