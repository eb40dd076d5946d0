#pragma once

/**
 * @file specfun.hpp
 * @brief Sine, cosine, exponential and inverse-tangent integrals, plus Gamma.
 *
 * Definitions (all integrals start at 0 unless noted):
 *
 *   Si(x)   = int sin t / t                Shi(x)  = int sinh t / t
 *   Cin(x)  = int (1 - cos t) / t          Cinh(x) = int (1 - cosh t) / t
 *   Ci(x)   = gamma + ln x - Cin(x)        Chi(x)  = gamma + ln x - Cinh(x)
 *   Ein(x)  = int (1 - e^-t) / t           E1(x)   = int_1^inf e^(-x t) / t
 *   Ti2(x)  = int atan t / t
 *
 * The entire functions (Si, Cin, Ein, Shi, Cinh) have two independent
 * evaluation routes: the Maclaurin series and panel quadrature of the
 * defining integral with a cancellation-free integrand. Strategy::Automatic
 * picks the series where it does not cancel badly (|x| <= 8) and quadrature
 * beyond. Everything is templated so the cosine-integral experiment can run
 * in long double.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "derivbound/error.hpp"
#include "derivbound/quadrature.hpp"
#include "derivbound/summation.hpp"

namespace derivbound {

/// Euler-Mascheroni constant, correct to long double precision.
template <std::floating_point T>
inline constexpr T euler_gamma_v = static_cast<T>(0.577215664901532860606512090082402431L);

struct MathConstants {
    static constexpr double euler_gamma = euler_gamma_v<double>;
    static constexpr double pi = std::numbers::pi;
};

enum class SpecialFnId { Si, Cin, Ci, Ein, E1, Shi, Cinh, Chi, Ti2 };

enum class Strategy { Automatic, Series, Quadrature };

inline constexpr std::array<SpecialFnId, 9> kAllSpecialFns = {
    SpecialFnId::Si,  SpecialFnId::Cin,  SpecialFnId::Ci,  SpecialFnId::Ein, SpecialFnId::E1,
    SpecialFnId::Shi, SpecialFnId::Cinh, SpecialFnId::Chi, SpecialFnId::Ti2};

constexpr std::string_view to_string(SpecialFnId id) {
    switch (id) {
        case SpecialFnId::Si: return "si";
        case SpecialFnId::Cin: return "cin";
        case SpecialFnId::Ci: return "ci";
        case SpecialFnId::Ein: return "ein";
        case SpecialFnId::E1: return "e1";
        case SpecialFnId::Shi: return "shi";
        case SpecialFnId::Cinh: return "cinh";
        case SpecialFnId::Chi: return "chi";
        case SpecialFnId::Ti2: return "ti2";
    }
    return "?";
}

inline std::optional<SpecialFnId> parse_special_fn(std::string_view name) {
    for (auto id : kAllSpecialFns) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

/// Ci, Chi and E1 are only defined for x > 0.
constexpr bool requires_positive_argument(SpecialFnId id) {
    return id == SpecialFnId::Ci || id == SpecialFnId::Chi || id == SpecialFnId::E1;
}

inline constexpr double kSpecialFnMaxArgument = 50.0;
inline constexpr double kSeriesCutoff = 8.0;

// ---------------------------------------------------------------------------
// Integrands with the removable singularity at 0 filled in.
// ---------------------------------------------------------------------------

/// sin t / t, equal to 1 at t = 0.
template <std::floating_point T>
T sinc_kernel(T t) {
    if (std::abs(t) < T(1e-3)) {
        const T t2 = t * t;
        return 1 - t2 / 6 + t2 * t2 / 120 - t2 * t2 * t2 / 5040;
    }
    return std::sin(t) / t;
}

/// (1 - cos t) / t written as 2 sin^2(t/2) / t.
template <std::floating_point T>
T cin_kernel(T t) {
    if (std::abs(t) < T(1e-3)) {
        const T t2 = t * t;
        return t / 2 * (1 - t2 / 12 + t2 * t2 / 360 - t2 * t2 * t2 / 20160);
    }
    const T s = std::sin(t / 2);
    return 2 * s * s / t;
}

/// (1 - e^-t) / t via expm1.
template <std::floating_point T>
T ein_kernel(T t) {
    if (std::abs(t) < T(1e-4)) {
        return 1 - t / 2 + t * t / 6 - t * t * t / 24;
    }
    return -std::expm1(-t) / t;
}

template <std::floating_point T>
T shi_kernel(T t) {
    if (std::abs(t) < T(1e-3)) {
        const T t2 = t * t;
        return 1 + t2 / 6 + t2 * t2 / 120 + t2 * t2 * t2 / 5040;
    }
    return std::sinh(t) / t;
}

/// (1 - cosh t) / t written as -2 sinh^2(t/2) / t.
template <std::floating_point T>
T cinh_kernel(T t) {
    if (std::abs(t) < T(1e-3)) {
        const T t2 = t * t;
        return -t / 2 * (1 + t2 / 12 + t2 * t2 / 360 + t2 * t2 * t2 / 20160);
    }
    const T s = std::sinh(t / 2);
    return -2 * s * s / t;
}

template <std::floating_point T>
T atan_kernel(T t) {
    if (std::abs(t) < T(1e-3)) {
        const T t2 = t * t;
        return 1 - t2 / 3 + t2 * t2 / 5 - t2 * t2 * t2 / 7;
    }
    return std::atan(t) / t;
}

namespace detail {

template <std::floating_point T>
void check_range(T x, std::string_view fn) {
    if (!std::isfinite(x) || std::abs(x) > T(kSpecialFnMaxArgument)) {
        throw DomainError(std::string(fn) + ": argument outside working range |x| <= 50");
    }
}

template <std::floating_point T>
void check_positive(T x, std::string_view fn) {
    if (!(x > 0)) throw DomainError(std::string(fn) + ": requires x > 0");
}

// Sum term_1 + term_2 + ... where next(m, prev) produces term m from term m-1.
// Stops once a term is negligible against the running sum.
template <std::floating_point T, typename Next>
T sum_series(T first, Next next) {
    CompensatedSum<T> acc(first);
    T term = first;
    const T eps = std::numeric_limits<T>::epsilon() / 4;
    for (int m = 2; m < 500; ++m) {
        term = next(m, term);
        acc += term;
        if (std::abs(term) <= eps * std::abs(acc.value())) break;
    }
    return acc.value();
}

// sign(x) * integral over [0, |x|] of an integrand odd in t (even antiderivative
// handled by the caller).
template <std::floating_point T, typename F>
T quad_from_zero(F&& f, T x) {
    if (x == 0) return T(0);
    if (x > 0) return integrate(f, T(0), x);
    return -integrate(f, x, T(0));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Series forms
// ---------------------------------------------------------------------------

template <std::floating_point T>
T si_series(T x) {
    // p_m = (-1)^m x^(2m+1) / (2m+1)!, term = p_m / (2m+1)
    if (x == 0) return 0;
    T p = x;
    return detail::sum_series<T>(x, [&](int m, T) {
        const int j = m - 1;
        p *= -x * x / (T(2 * j) * T(2 * j + 1));
        return p / T(2 * j + 1);
    });
}

template <std::floating_point T>
T cin_series(T x) {
    if (x == 0) return 0;
    T q = x * x / 2;  // (-1)^(m+1) x^(2m) / (2m)!
    return detail::sum_series<T>(q / 2, [&](int m, T) {
        q *= -x * x / (T(2 * m - 1) * T(2 * m));
        return q / T(2 * m);
    });
}

template <std::floating_point T>
T ein_series(T x) {
    if (x == 0) return 0;
    T r = x;  // (-1)^(m+1) x^m / m!
    return detail::sum_series<T>(x, [&](int m, T) {
        r *= -x / T(m);
        return r / T(m);
    });
}

template <std::floating_point T>
T shi_series(T x) {
    if (x == 0) return 0;
    T p = x;
    return detail::sum_series<T>(x, [&](int m, T) {
        const int j = m - 1;
        p *= x * x / (T(2 * j) * T(2 * j + 1));
        return p / T(2 * j + 1);
    });
}

template <std::floating_point T>
T cinh_series(T x) {
    if (x == 0) return 0;
    T q = x * x / 2;
    return detail::sum_series<T>(-q / 2, [&](int m, T) {
        q *= x * x / (T(2 * m - 1) * T(2 * m));
        return -q / T(2 * m);
    });
}

/// Ti2 by its Maclaurin series; only used for |x| <= 0.9 where it converges quickly.
template <std::floating_point T>
T ti2_series(T x) {
    if (std::abs(x) > T(0.9)) throw DomainError("ti2_series: requires |x| <= 0.9");
    if (x == 0) return 0;
    T p = x;
    return detail::sum_series<T>(x, [&](int m, T) {
        const int j = m - 1;
        p *= -x * x;
        return p / (T(2 * j + 1) * T(2 * j + 1));
    });
}

// ---------------------------------------------------------------------------
// Quadrature forms
// ---------------------------------------------------------------------------

template <std::floating_point T>
T si_quadrature(T x) { return detail::quad_from_zero([](T t) { return sinc_kernel(t); }, x); }

template <std::floating_point T>
T cin_quadrature(T x) {
    // the integrand is odd, so Cin is even
    return detail::quad_from_zero([](T t) { return cin_kernel(t); }, std::abs(x));
}

template <std::floating_point T>
T ein_quadrature(T x) { return detail::quad_from_zero([](T t) { return ein_kernel(t); }, x); }

template <std::floating_point T>
T shi_quadrature(T x) { return detail::quad_from_zero([](T t) { return shi_kernel(t); }, x); }

template <std::floating_point T>
T cinh_quadrature(T x) {
    return detail::quad_from_zero([](T t) { return cinh_kernel(t); }, std::abs(x));
}

template <std::floating_point T>
T ti2_quadrature(T x) { return detail::quad_from_zero([](T t) { return atan_kernel(t); }, x); }

/**
 * E1(x) from its definition after the substitution t = 1 + w/x:
 *
 *   E1(x) = e^-x * int_0^inf e^-w / (x + w) dw.
 *
 * The integral is cut at w = 44, where the neglected tail is below
 * e^-44 / x (relative 8e-20).
 */
template <std::floating_point T>
T e1_quadrature(T x) {
    detail::check_positive(x, "E1");
    PanelConfig cfg;
    cfg.panel_width = std::clamp(static_cast<double>(x), 0.05, 2.0);
    const T body = integrate([x](T w) { return std::exp(-w) / (x + w); }, T(0), T(44), cfg);
    return std::exp(-x) * body;
}

/// E1 from the series of Ein: E1(x) = Ein(x) - ln x - gamma. Accurate for x <= 1.
template <std::floating_point T>
T e1_series(T x) {
    detail::check_positive(x, "E1");
    return ein_series(x) - std::log(x) - euler_gamma_v<T>;
}

// ---------------------------------------------------------------------------
// Public evaluators
// ---------------------------------------------------------------------------

template <std::floating_point T>
T si(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Si");
    if (s == Strategy::Series || (s == Strategy::Automatic && std::abs(x) <= T(kSeriesCutoff))) {
        return si_series(x);
    }
    return si_quadrature(x);
}

template <std::floating_point T>
T cin(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Cin");
    if (s == Strategy::Series || (s == Strategy::Automatic && std::abs(x) <= T(kSeriesCutoff))) {
        return cin_series(x);
    }
    return cin_quadrature(x);
}

template <std::floating_point T>
T ci(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Ci");
    detail::check_positive(x, "Ci");
    return euler_gamma_v<T> + std::log(x) - cin(x, s);
}

template <std::floating_point T>
T ein(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Ein");
    if (s == Strategy::Series || (s == Strategy::Automatic && std::abs(x) <= T(kSeriesCutoff))) {
        return ein_series(x);
    }
    return ein_quadrature(x);
}

template <std::floating_point T>
T e1(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "E1");
    detail::check_positive(x, "E1");
    if (s == Strategy::Series || (s == Strategy::Automatic && x <= 1)) return e1_series(x);
    return e1_quadrature(x);
}

template <std::floating_point T>
T shi(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Shi");
    // the series has no cancellation anywhere in the working range
    if (s == Strategy::Quadrature) return shi_quadrature(x);
    return shi_series(x);
}

template <std::floating_point T>
T cinh(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Cinh");
    if (s == Strategy::Quadrature) return cinh_quadrature(x);
    return cinh_series(x);
}

template <std::floating_point T>
T chi(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Chi");
    detail::check_positive(x, "Chi");
    return euler_gamma_v<T> + std::log(x) - cinh(x, s);
}

template <std::floating_point T>
T ti2(T x, Strategy s = Strategy::Automatic) {
    detail::check_range(x, "Ti2");
    if (s == Strategy::Series) return ti2_series(x);
    return ti2_quadrature(x);
}

template <std::floating_point T>
T eval_special(SpecialFnId id, T x, Strategy s = Strategy::Automatic) {
    switch (id) {
        case SpecialFnId::Si: return si(x, s);
        case SpecialFnId::Cin: return cin(x, s);
        case SpecialFnId::Ci: return ci(x, s);
        case SpecialFnId::Ein: return ein(x, s);
        case SpecialFnId::E1: return e1(x, s);
        case SpecialFnId::Shi: return shi(x, s);
        case SpecialFnId::Cinh: return cinh(x, s);
        case SpecialFnId::Chi: return chi(x, s);
        case SpecialFnId::Ti2: return ti2(x, s);
    }
    throw ParameterError("eval_special: unknown function id");
}

/**
 * Gamma function on (0, 20] by the Lanczos approximation (g = 7, 9 terms),
 * with the reflection formula below 1/2. Relative error is a few ulp.
 */
inline double gamma_function(double kappa) {
    if (!(kappa > 0.0)) throw DomainError("gamma_function: requires kappa > 0");
    if (!(kappa <= 20.0)) throw DomainError("gamma_function: requires kappa <= 20");
    constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double pi = std::numbers::pi;
    if (kappa < 0.5) {
        return pi / (std::sin(pi * kappa) * gamma_function(1.0 - kappa));
    }
    const double z = kappa - 1.0;
    double a = c[0];
    const double t = z + 7.5;
    for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

} // namespace derivbound
