#pragma once

/**
 * @file quadrature.hpp
 * @brief Numerical integration used throughout the library.
 *
 *   - gauss_legendre_rule:      n-point rule on [-1, 1], exact for degree 2n-1
 *   - integrate:                composite Gauss-Legendre over equal panels
 *   - integrate_endpoint_graded: panels shrinking geometrically toward the
 *                               left endpoint, for integrable endpoint
 *                               singularities such as log(v) or v^(k-1)
 *   - simpson_composite:        the classical composite Simpson rule
 *   - integrate_semi_infinite:  [lower, inf) split into a finite part and an
 *                               analytic tail majorant supplied by the caller
 *
 * Every routine is templated on the working floating-point type so that the
 * same code runs in double and in long double.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "derivbound/error.hpp"
#include "derivbound/summation.hpp"

namespace derivbound {

template <std::floating_point T>
struct QuadratureRule {
    int order = 0;
    std::vector<T> nodes;    ///< strictly increasing, symmetric about 0
    std::vector<T> weights;  ///< positive, summing to 2
};

struct PanelConfig {
    double panel_width = 0.5;
    int rule_order = 16;
    bool compensated = true;

    void validate() const {
        if (!(panel_width > 0.0) || !std::isfinite(panel_width)) {
            throw ParameterError("PanelConfig: panel_width must be positive");
        }
        if (rule_order < 2 || rule_order > 64) {
            throw ParameterError("PanelConfig: rule_order must lie in [2, 64]");
        }
    }
};

/// A value together with a bound on its absolute error.
template <std::floating_point T>
struct Estimate {
    T value{};
    T error{};
};

inline constexpr int kMaxRuleOrder = 64;

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
template <std::floating_point T>
std::pair<T, T> legendre_with_derivative(int n, T x) {
    T p_prev = 1;
    T p = x;
    for (int j = 1; j < n; ++j) {
        const T p_next = ((2 * j + 1) * x * p - j * p_prev) / (j + 1);
        p_prev = p;
        p = p_next;
    }
    const T dp = n * (x * p - p_prev) / (x * x - 1);
    return {p, dp};
}

template <std::floating_point T>
QuadratureRule<T> compute_gauss_legendre(int order) {
    QuadratureRule<T> rule{order, std::vector<T>(order), std::vector<T>(order)};
    if (order == 1) {
        rule.nodes[0] = 0;
        rule.weights[0] = 2;
        return rule;
    }
    const T pi = std::numbers::pi_v<T>;
    const T tol = 4 * std::numeric_limits<T>::epsilon();
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        T x = std::cos(pi * (T(i) + T(0.75)) / (T(order) + T(0.5)));
        if (order % 2 == 1 && i == half - 1) {
            x = 0;
        } else {
            for (int it = 0; it < 100; ++it) {
                const auto [p, dp] = legendre_with_derivative(order, x);
                const T dx = p / dp;
                x -= dx;
                if (std::abs(dx) <= tol) {
                    // one more step from a converged iterate polishes the last bit
                    const auto [p2, dp2] = legendre_with_derivative(order, x);
                    x -= p2 / dp2;
                    break;
                }
            }
        }
        const T dp = legendre_with_derivative(order, x).second;
        const T w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

template <std::floating_point T, typename F>
T checked_eval(F& f, T t) {
    const T y = static_cast<T>(f(t));
    if (!std::isfinite(y)) {
        throw EvaluationError("integrand is not finite", static_cast<double>(t));
    }
    return y;
}

// One Gauss-Legendre panel on [lo, hi], added into acc.
template <std::floating_point T, typename F, typename Acc>
void add_panel(F& f, T lo, T hi, const QuadratureRule<T>& rule, Acc& acc) {
    const T half = (hi - lo) / 2;
    const T mid = lo + half;
    for (int i = 0; i < rule.order; ++i) {
        const T t = std::clamp(mid + half * rule.nodes[i], lo, hi);
        acc += half * rule.weights[i] * checked_eval(f, t);
    }
}

} // namespace detail

/// Gauss-Legendre rule of the given order on [-1, 1]; cached per order and type.
template <std::floating_point T = double>
const QuadratureRule<T>& gauss_legendre_rule(int order) {
    if (order < 1 || order > kMaxRuleOrder) {
        throw ParameterError("gauss_legendre_rule: order must lie in [1, 64], got " +
                             std::to_string(order));
    }
    static std::array<std::once_flag, kMaxRuleOrder + 1> flags;
    static std::array<QuadratureRule<T>, kMaxRuleOrder + 1> rules;
    std::call_once(flags[order], [order] { rules[order] = detail::compute_gauss_legendre<T>(order); });
    return rules[order];
}

/**
 * Composite Gauss-Legendre integral of f over [a, b].
 *
 * The interval is cut into ceil((b - a) / panel_width) equal panels and each
 * panel receives one rule_order-point rule. Panel contributions are summed
 * with compensation unless cfg.compensated is false.
 */
template <std::floating_point T, typename F>
T integrate(F&& f, T a, T b, const PanelConfig& cfg = {}) {
    cfg.validate();
    if (!(a <= b)) throw ParameterError("integrate: requires a <= b");
    if (a == b) return T(0);
    const auto& rule = gauss_legendre_rule<T>(cfg.rule_order);
    const T len = b - a;
    const long panels = std::max(1L, static_cast<long>(std::ceil(static_cast<double>(len) / cfg.panel_width)));
    auto run = [&](auto acc) {
        for (long p = 0; p < panels; ++p) {
            const T lo = a + len * T(p) / T(panels);
            const T hi = (p + 1 == panels) ? b : a + len * T(p + 1) / T(panels);
            detail::add_panel(f, lo, hi, rule, acc);
        }
        return acc.value();
    };
    return cfg.compensated ? run(CompensatedSum<T>{}) : run(NaiveSum<T>{});
}

/**
 * Integral over [a, b] of a function with an integrable singularity at a.
 *
 * The first min(b - a, panel_width) of the interval is covered by panels
 * [a + L 2^-(j+1), a + L 2^-j], j < levels, plus [a, a + L 2^-levels]; the
 * rest uses ordinary equal panels.
 */
template <std::floating_point T, typename F>
T integrate_endpoint_graded(F&& f, T a, T b, const PanelConfig& cfg = {}, int levels = 48) {
    cfg.validate();
    if (!(a <= b)) throw ParameterError("integrate_endpoint_graded: requires a <= b");
    if (a == b) return T(0);
    const auto& rule = gauss_legendre_rule<T>(cfg.rule_order);
    const T len = std::min<T>(b - a, T(cfg.panel_width));
    CompensatedSum<T> acc;
    T hi = a + len;
    for (int j = 0; j < levels; ++j) {
        const T lo = a + std::ldexp(len, -(j + 1));
        if (lo == a) break;
        detail::add_panel(f, lo, hi, rule, acc);
        hi = lo;
    }
    detail::add_panel(f, a, hi, rule, acc);
    if (a + len < b) acc += integrate(f, a + len, b, cfg);
    return acc.value();
}

/**
 * Composite Simpson rule with n subintervals on [a, b]:
 *
 *   (b - a)/(3n) * { f(a) + 4 sum f(odd nodes) + 2 sum f(interior even nodes) + f(b) }
 *
 * Nodes are a + j (b - a)/n. The weighted sum is accumulated with compensation,
 * so the result is bit-deterministic and free of growth in rounding error
 * with n.
 */
template <std::floating_point T, typename F>
T simpson_composite(F&& f, T a, T b, int n) {
    if (n < 2 || n % 2 != 0) {
        throw ParameterError("simpson_composite: n must be even and >= 2, got " + std::to_string(n));
    }
    if (!(a <= b)) throw ParameterError("simpson_composite: requires a <= b");
    if (a == b) return T(0);
    const T len = b - a;
    auto node = [&](int j) { return a + len * T(j) / T(n); };
    CompensatedSum<T> acc(detail::checked_eval(f, a));
    for (int j = 1; j <= n / 2; ++j) acc += 4 * detail::checked_eval(f, node(2 * j - 1));
    for (int j = 1; j <= n / 2 - 1; ++j) acc += 2 * detail::checked_eval(f, node(2 * j));
    acc += detail::checked_eval(f, b);
    return len / (3 * T(n)) * acc.value();
}

/// Simpson on [0, x], the form S_n(x) used for the cosine-integral experiment.
template <std::floating_point T, typename F>
T simpson_composite(F&& f, T x, int n) {
    if (!(x >= 0)) throw ParameterError("simpson_composite: x must be nonnegative");
    return simpson_composite(std::forward<F>(f), T(0), x, n);
}

template <std::floating_point T>
struct SemiInfiniteConfig {
    T lower = 0;
    T split_point = 1;
    /// Analytic majorant of |integral over [s, inf)| as a function of s.
    std::function<T(T)> tail_bound;
    PanelConfig panels{};
    /// Grade the panels toward `lower` (integrable singularity there).
    bool singular_at_lower = false;
};

/**
 * Integral over [cfg.lower, inf). The finite part [lower, split_point] goes
 * through integrate; the reported error is the caller's tail majorant at the
 * split point.
 */
template <std::floating_point T, typename F>
Estimate<T> integrate_semi_infinite(F&& f, const SemiInfiniteConfig<T>& cfg) {
    if (!cfg.tail_bound) throw ParameterError("integrate_semi_infinite: tail_bound is required");
    if (!(cfg.split_point > cfg.lower)) {
        throw ParameterError("integrate_semi_infinite: split_point must exceed the lower limit");
    }
    const T tail = cfg.tail_bound(cfg.split_point);
    if (!(tail >= 0)) throw ParameterError("integrate_semi_infinite: tail_bound must be nonnegative");
    const T body = cfg.singular_at_lower
                       ? integrate_endpoint_graded(f, cfg.lower, cfg.split_point, cfg.panels)
                       : integrate(f, cfg.lower, cfg.split_point, cfg.panels);
    return {body, tail};
}

} // namespace derivbound
