#pragma once

/**
 * @file bounds.hpp
 * @brief Closed-form derivative bounds and the Simpson error bound built on them.
 *
 * Replacing |f^(n+k+1)| by its supremum M in the transform representation gives
 *
 *   |d^k/dt^k quotient| <= M/n! int_0^1 s^k (1-s)^n ds = k! M / (n+k+1)!.
 *
 * Each family bound below is this beta integral (or its analogue for the
 * atan and tan representations). BoundResult records where equality holds,
 * so tests can enumerate the sharp cases directly.
 */

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

#include "derivbound/error.hpp"
#include "derivbound/transforms.hpp"

namespace derivbound {

enum class Parity { Even, Odd, Always };

struct BoundResult {
    double value = 0.0;
    std::optional<double> sharp_at;      ///< point where |derivative| == value
    std::optional<Parity> parity_condition;  ///< orders k for which sharp_at applies

    bool is_sharp_for(int k) const {
        if (!sharp_at || !parity_condition) return false;
        switch (*parity_condition) {
            case Parity::Even: return k % 2 == 0;
            case Parity::Odd: return k % 2 != 0;
            case Parity::Always: return true;
        }
        return false;
    }
};

inline constexpr int kMaxFactorial = 20;

/// n! for n <= 20, accumulated exactly in 64-bit integers.
inline std::uint64_t exact_factorial(int n) {
    if (n < 0 || n > kMaxFactorial) {
        throw ParameterError("exact_factorial: n must lie in [0, 20], got " + std::to_string(n));
    }
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

inline double factorial(int n) { return static_cast<double>(exact_factorial(n)); }

/// k! M / (n+k+1)!
inline BoundResult taylor_bound(int n, int k, double M) {
    if (n < 0 || k < 0) throw ParameterError("taylor_bound: n and k must be nonnegative");
    if (n + k + 1 > kMaxFactorial) throw ParameterError("taylor_bound: n + k + 1 must not exceed 20");
    if (!(M > 0.0)) throw ParameterError("taylor_bound: M must be positive");
    // k!/(n+k+1)! = 1 / ((k+1)(k+2)...(n+k+1)), exact in integers
    std::uint64_t denom = 1;
    for (int j = k + 1; j <= n + k + 1; ++j) denom *= static_cast<std::uint64_t>(j);
    return {M / static_cast<double>(denom), std::nullopt, std::nullopt};
}

/**
 * Uniform bound on the k-th derivative of the family's function at t.
 *
 *   Sinc, CinKernel, EinKernel   1/(k+1)
 *   CinOverT2                    1/((k+1)(k+2))
 *   SinhOverT                    cosh t/(k+1) for even k, |sinh t|/(k+1) for odd k
 *   CoshKernel                   |sinh t|/(k+1) for even k, cosh t/(k+1) for odd k
 *   ArcTanOverT                  k!/(k+1)
 *   TanEven (order 2k)           (2k)! / (pi/2 - |t|)^(2k+1)
 *
 * The EinKernel bound uses e^(-st) <= 1 and so holds only for t >= 0.
 */
inline BoundResult family_bound(const KernelFamily& family, int k, double t) {
    if (k < 0) throw ParameterError("family_bound: k must be nonnegative");
    if (!std::isfinite(t)) throw DomainError("family_bound: t must be finite");
    const double inv = 1.0 / (k + 1);
    switch (family.id) {
        case Family::Sinc: return {taylor_bound(0, k, 1.0).value, 0.0, Parity::Even};
        case Family::CinKernel: return {taylor_bound(0, k, 1.0).value, 0.0, Parity::Odd};
        case Family::EinKernel:
            if (t < 0.0) throw DomainError("family_bound: the Ein kernel bound requires t >= 0");
            return {taylor_bound(0, k, 1.0).value, 0.0, Parity::Always};
        case Family::CinOverT2: return {taylor_bound(1, k, 1.0).value, 0.0, Parity::Even};
        case Family::SinhOverT:
            return {(k % 2 == 0 ? std::cosh(t) : std::abs(std::sinh(t))) * inv, 0.0, Parity::Always};
        case Family::CoshKernel:
            return {(k % 2 == 0 ? std::abs(std::sinh(t)) : std::cosh(t)) * inv, 0.0, Parity::Always};
        case Family::ArcTanOverT: return {factorial(k) * inv, 0.0, Parity::Even};
        case Family::TanEven: {
            const double gap = std::numbers::pi / 2 - std::abs(t);
            if (!(gap > 0.0)) throw DomainError("family_bound: tan requires |t| < pi/2");
            if (2 * k > kMaxFactorial) throw ParameterError("family_bound: tan order too large");
            return {factorial(2 * k) / std::pow(gap, 2 * k + 1), std::nullopt, std::nullopt};
        }
        case Family::QIntegrand:
            throw ParameterError("family_bound: QIntegrand derivatives are bounded via lambda_kappa");
    }
    throw ParameterError("family_bound: unknown family");
}

inline BoundResult family_bound(Family id, int k, double t) { return family_bound(KernelFamily{id}, k, t); }

/**
 * Composite Simpson error bound on an interval of length x with n
 * subintervals, given |f''''| <= M4:  x^5 M4 / (180 n^4).
 * With M4 = 1/5 this is the cosine-integral bound x^5 / (900 n^4).
 */
template <std::floating_point T = double>
T simpson_error_bound(T M4, T x, int n) {
    if (n < 2 || n % 2 != 0) throw ParameterError("simpson_error_bound: n must be even and >= 2");
    if (!(M4 >= 0)) throw ParameterError("simpson_error_bound: M4 must be nonnegative");
    if (!(x >= 0)) throw ParameterError("simpson_error_bound: x must be nonnegative");
    const T n4 = T(n) * T(n) * T(n) * T(n);
    return x * x * x * x * x * M4 / (180 * n4);
}

} // namespace derivbound
