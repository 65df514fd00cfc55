#pragma once

#include "laakso/sequence.hpp"
#include "laakso/special_functions.hpp"
#include "laakso/spectrum.hpp"

#include <optional>
#include <span>
#include <vector>

namespace laakso {

struct HeatTraceSample {
    double t = 0.0;
    double z = 0.0;
    double tail_bound = 0.0;       ///< bound on everything left out of z
    std::optional<int> level_cap;  ///< levels above the cap were not summed
};

/**
 * Z(t) = sum over the spectrum of multiplicity * exp(-lambda t).
 *
 * Each family is summed until its remaining terms are bounded by
 * g exp(-lambda_K t) / (1 - exp(-delta t)); levels stop once a geometric
 * bound covers every deeper level. With a level cap the sum is the trace of
 * the levels <= cap and the bound covers only the omitted family terms.
 * Explicit sequences require a cap inside the prefix.
 */
HeatTraceSample heat_trace(const JSequence& seq, double t, double tol, std::optional<int> level_cap = {});

struct ZetaDirectResult {
    Complex value;
    Complex partial_sum;  ///< eigenvalues listed in the table
    Complex tail;         ///< eigenvalues above lambda_max, summed per family
    int levels = 0;       ///< levels visited for the tail
};

/**
 * sum g_k E_k^{-s} over the nonzero eigenvalues. Entries of the table are
 * summed directly; each family's terms above lambda_max are added through
 * the Hurwitz zeta function, level by level until they no longer change the
 * result. Throws DivergenceError for Re s <= d_s/2 (1/2 with a level cap).
 */
ZetaDirectResult spectral_zeta_direct(const SpectrumTable& table, Complex s);

/**
 * zeta_L(s) from the factorised form zeta_R(2s) pi^{-2s} [1 + sum_n T_n(s)],
 * with the level sum closed over one period as two geometric series. This is
 * the meromorphic continuation, so any s away from the poles is accepted.
 * Throws PoleError (carrying the pole) within 1e-12 of one.
 */
Complex spectral_zeta_closed(const JSequence& seq, Complex s);

/// zeta_L(0) by continuation.
double zeta_at_zero(const JSequence& seq);

struct PoleLattice {
    double real_part = 0.0;  ///< d_s / 2
    double spacing = 0.0;    ///< imaginary step between consecutive poles
    int m_lo = 0;
    int m_hi = 0;
    std::vector<Complex> members;  ///< real_part + i m spacing, m = m_lo..m_hi
};

/// Poles of zeta_L with the largest real part.
PoleLattice poles(const JSequence& seq, int m_lo, int m_hi);

/// Length in log t of one oscillation period of the trace, 2 pi / spacing.
double log_period(const JSequence& seq);

struct ResidueTerm {
    Complex pole;
    Complex coefficient;  ///< Z(t) gets coefficient * t^{-pole}
};

/**
 * Residues of Gamma(s) zeta_L(s) t^{-s} with Re s >= 0 for a periodic
 * sequence, |m| <= m_terms on each lattice. The constant term includes the
 * zero eigenvalue.
 */
std::vector<ResidueTerm> residue_terms(const JSequence& seq, int m_terms = 5);

/// Sum of residue_terms at t.
double residue_expansion(const JSequence& seq, double t, int m_terms = 5);

/// Small-t expansion of Z(t) for j = 2 from its closed-form coefficients.
double leading_term_j2(double t, int m_terms = 5);

/// Small-t expansion of Z(t) for j = 2, 3, 2, 3, ... from its closed-form coefficients.
double leading_term_j23(double t, int m_terms = 5);

/**
 * Spectral dimension from heat trace samples: -2 times the least-squares
 * slope of log z against log t after averaging log z over a sliding window
 * of one oscillation period. Needs >= 10 samples over >= 2 decades with
 * tail_bound / z < 1e-6.
 */
double estimate_spectral_dimension(std::span<const HeatTraceSample> samples, double period);
double estimate_spectral_dimension(const JSequence& seq, std::span<const HeatTraceSample> samples);

/// n points log-spaced from a to b inclusive.
std::vector<double> log_grid(double a, double b, int n);

}  // namespace laakso
