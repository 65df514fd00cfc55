#include "laakso/special_functions.hpp"

#include "laakso/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace laakso {

namespace {

constexpr double kPi = std::numbers::pi;

// B_{2j} / (2j)! for j = 1..13.
constexpr std::array<double, 13> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
    657931.0 / 186313420339200000000000000.0,
};

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
};

Complex power(double base, Complex exponent) { return std::exp(exponent * std::log(base)); }

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// Borwein's algorithm 2 for eta(s) with n terms.
Complex eta(Complex s) {
    constexpr int n = 110;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), scaled by d_n.
    std::array<double, n + 1> d{};
    double term = 1.0 / n;
    double sum = term;
    d[0] = sum;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1) * (2.0 * i));
        sum += term;
        d[i] = sum;
    }
    const double dn = d[n];
    Complex acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double weight = (d[k] - dn) / dn;
        const Complex value = weight * power(static_cast<double>(k + 1), -s);
        acc += (k % 2 == 0) ? value : -value;
    }
    return -acc;
}

}  // namespace

Complex hurwitz_zeta(Complex s, double a) {
    if (!(a > 0.0)) throw ValidationError("hurwitz_zeta needs a > 0");
    if (s == Complex(1.0, 0.0)) throw PoleError("zeta pole at s = 1", Complex(1.0, 0.0));
    const double target = std::max(16.0, std::abs(s) + 8.0);
    const int shift = a >= target ? 0 : static_cast<int>(std::ceil(target - a));

    Complex head = 0.0;
    for (int k = shift - 1; k >= 0; --k) head += power(k + a, -s);
    const double x = shift + a;
    Complex tail = power(x, 1.0 - s) / (s - 1.0) + 0.5 * power(x, -s);
    // Rising factorial s (s+1) ... (s+2j-2) times x^{-s-2j+1}.
    Complex rising = s;
    Complex xpow = power(x, -s - 1.0);
    const double inv_x2 = 1.0 / (x * x);
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        const Complex correction = kBernoulliOverFactorial[j] * rising * xpow;
        tail += correction;
        if (std::abs(correction) <= 1e-17 * std::abs(tail)) break;
        const double m = 2.0 * static_cast<double>(j + 1);
        rising *= (s + m - 1.0) * (s + m);
        xpow *= inv_x2;
    }
    return head + tail;
}

Complex riemann_zeta(Complex s) {
    if (s == Complex(1.0, 0.0)) throw PoleError("zeta pole at s = 1", Complex(1.0, 0.0));
    if (s.real() < -1.0) {
        // Functional equation keeps the series in its accurate range.
        const Complex one_minus = 1.0 - s;
        return 2.0 * power(2.0 * kPi, s - 1.0) * std::sin(kPi * s / 2.0) * gamma(one_minus) *
               riemann_zeta(one_minus);
    }
    const Complex denom = 1.0 - power(2.0, 1.0 - s);
    if (std::abs(denom) < 0.1) return hurwitz_zeta(s, 1.0);
    return eta(s) / denom;
}

Complex log_gamma(Complex z) {
    if (z.real() < 0.5) throw DomainError("log_gamma is defined here for Re z >= 1/2");
    const Complex w = z - 1.0;
    Complex series = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) series += kLanczos[i] / (w + static_cast<double>(i));
    const Complex t = w + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (w + 0.5) * std::log(t) - t + std::log(series);
}

Complex gamma(Complex z) {
    if (is_nonpositive_integer(z)) throw PoleError("gamma pole", z);
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
    return std::exp(log_gamma(z));
}

}  // namespace laakso
