#pragma once

/**
 * @file lambda.hpp
 * @brief lambda_kappa by the method of steps, its Laplace transform check,
 *        and certified Simpson error for
 *
 *            int_a^b t^(-2 kappa) e^(-u t) e^(kappa Ein(t)) dt.
 *
 * lambda_kappa vanishes for v <= 0, equals e^(kappa gamma) v^(kappa-1) / Gamma(kappa)
 * on [0, 1], and beyond that solves the delay equation
 *
 *   (v^(1-kappa) lambda(v))' = kappa v^(-kappa) lambda(v - 1).
 *
 * Its Laplace transform is t^(-2 kappa) e^(kappa Ein(t)), so the integrand
 * above is the transform shifted by u, and its derivatives are moments of
 * lambda_kappa:
 *
 *   f^(k)(t) = (-1)^k int_0^inf (u+v)^k e^(-(u+v)t) lambda(v) dv.
 *
 * Since lambda_kappa >= 0, f'''' is nonnegative and nonincreasing, and
 * sup_{[a,b]} |f''''| = f''''(a).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "derivbound/bounds.hpp"
#include "derivbound/error.hpp"
#include "derivbound/quadrature.hpp"
#include "derivbound/specfun.hpp"
#include "derivbound/summation.hpp"

namespace derivbound {

enum class Side { Left, Right };

/// lambda_kappa tabulated at v_j = j * step, j = 0 .. v_max / step.
class LambdaGrid {
public:
    LambdaGrid() = default;
    LambdaGrid(double kappa, int v_max, double step, std::vector<double> values)
        : kappa_(kappa), v_max_(v_max), step_(step), values_(std::move(values)),
          per_unit_(static_cast<std::size_t>(std::llround(1.0 / step))),
          coefficient_(boundary_coefficient(kappa)) {}

    double kappa() const { return kappa_; }
    int v_max() const { return v_max_; }
    double step() const { return step_; }
    std::size_t nodes_per_unit() const { return per_unit_; }
    const std::vector<double>& values() const { return values_; }
    double node(std::size_t j) const { return static_cast<double>(j) * step_; }

    /// e^(kappa gamma) / Gamma(kappa)
    static double boundary_coefficient(double kappa) {
        return std::exp(kappa * euler_gamma_v<double>) / gamma_function(kappa);
    }

    /// Closed form on [0, 1].
    double boundary_value(double v) const {
        if (v <= 0.0) return 0.0;
        return coefficient_ * std::pow(v, kappa_ - 1.0);
    }

    /**
     * lambda(v) anywhere in (-inf, v_max]. Between nodes a cubic through the
     * four nearest nodes of the same unit segment is used; at an integer v the
     * side picks which segment's polynomial is evaluated.
     */
    double value_at(double v, Side side = Side::Right) const {
        if (v <= 0.0) return 0.0;
        if (v > static_cast<double>(v_max_)) throw DomainError("LambdaGrid::value_at: v beyond v_max");
        if (v <= 1.0 && !(v == 1.0 && side == Side::Right)) return boundary_value(v);
        double m = std::floor(v);
        if (v == m && (side == Side::Left || m == v_max_)) m -= 1.0;
        if (m < 1.0) return boundary_value(v);
        const std::size_t seg_lo = static_cast<std::size_t>(m) * per_unit_;
        const double pos = (v - m) / step_;  // in [0, per_unit]
        auto i0 = static_cast<std::ptrdiff_t>(std::floor(pos)) - 1;
        i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(per_unit_) - 3);
        const std::size_t base = seg_lo + static_cast<std::size_t>(i0);
        const double x = pos - static_cast<double>(i0);  // local coordinate, nodes at 0..3
        double result = 0.0;
        for (int i = 0; i < 4; ++i) {
            double w = 1.0;
            for (int j = 0; j < 4; ++j) {
                if (j != i) w *= (x - j) / (i - j);
            }
            result += w * values_[base + static_cast<std::size_t>(i)];
        }
        return result;
    }

private:
    double kappa_ = 2.0;
    int v_max_ = 0;
    double step_ = 0.0;
    std::vector<double> values_;
    std::size_t per_unit_ = 0;
    double coefficient_ = 0.0;
};

inline constexpr int kLambdaMinStepExponent = 8;
inline constexpr int kLambdaMaxStepExponent = 14;
inline constexpr int kLambdaMaxV = 64;

/// Accepts only step = 2^-p with 8 <= p <= 14; returns p.
inline int lambda_step_exponent(double step) {
    int e = 0;
    const double mant = std::frexp(step, &e);
    const int p = 1 - e;
    if (mant != 0.5 || p < kLambdaMinStepExponent || p > kLambdaMaxStepExponent) {
        throw ParameterError("build_lambda_grid: step must be 2^-p with 8 <= p <= 14");
    }
    return p;
}

/**
 * Method of steps. On [0, 1] the closed form is tabulated. On [1, 2] the
 * integrated equation
 *
 *   g(v) = v^(1-kappa) lambda(v) = g(1) + kappa C int_1^v u^-kappa (u-1)^(kappa-1) du
 *
 * is integrated per step with Gauss-Legendre (graded toward u = 1, where
 * (u-1)^(kappa-1) is not smooth). From v = 2 on, each step uses Simpson's
 * rule with lambda(u - 1) at the half-node from a cubic through four nodes
 * of the same unit segment, so the interpolant never straddles the
 * derivative jumps at the integers.
 */
inline LambdaGrid build_lambda_grid(double kappa, int v_max, double step) {
    if (!(kappa > 1.0 && kappa <= 5.0)) throw ParameterError("build_lambda_grid: kappa must lie in (1, 5]");
    if (v_max < 1 || v_max > kLambdaMaxV) throw ParameterError("build_lambda_grid: v_max must lie in [1, 64]");
    lambda_step_exponent(step);

    const std::size_t per_unit = static_cast<std::size_t>(std::llround(1.0 / step));
    const std::size_t total = per_unit * static_cast<std::size_t>(v_max);
    const double C = LambdaGrid::boundary_coefficient(kappa);
    std::vector<double> lam(total + 1, 0.0);
    for (std::size_t j = 1; j <= per_unit && j <= total; ++j) {
        lam[j] = C * std::pow(static_cast<double>(j) * step, kappa - 1.0);
    }
    auto node = [&](std::size_t j) { return static_cast<double>(j) * step; };

    if (v_max >= 2) {
        // [1, 2]: exact integrand with the boundary closed form
        auto h = [&](double u) { return std::pow(u, -kappa) * C * std::pow(u - 1.0, kappa - 1.0); };
        CompensatedSum<double> g(lam[per_unit]);  // 1^(1-kappa) lambda(1)
        PanelConfig single;
        single.panel_width = step;
        for (std::size_t j = per_unit; j < 2 * per_unit; ++j) {
            const double lo = node(j);
            const double hi = node(j + 1);
            const double piece = j == per_unit ? integrate_endpoint_graded(h, lo, hi, single)
                                               : integrate(h, lo, hi, single);
            g += kappa * piece;
            lam[j + 1] = std::pow(hi, kappa - 1.0) * g.value();
        }
    }

    for (int m = 2; m < v_max; ++m) {
        const std::size_t seg = static_cast<std::size_t>(m) * per_unit;
        const std::size_t prev = seg - per_unit;  // first node of [m-1, m]
        const double vm = static_cast<double>(m);
        CompensatedSum<double> g(std::pow(vm, 1.0 - kappa) * lam[seg]);
        for (std::size_t j = seg; j < seg + per_unit; ++j) {
            const std::size_t i = j - per_unit;  // lambda(v_j - 1) sits at node i
            const std::size_t local = i - prev;
            double mid;
            if (local == 0) {
                mid = (5.0 * lam[i] + 15.0 * lam[i + 1] - 5.0 * lam[i + 2] + lam[i + 3]) / 16.0;
            } else if (local + 1 == per_unit) {
                mid = (lam[i - 2] - 5.0 * lam[i - 1] + 15.0 * lam[i] + 5.0 * lam[i + 1]) / 16.0;
            } else {
                mid = (-lam[i - 1] + 9.0 * lam[i] + 9.0 * lam[i + 1] - lam[i + 2]) / 16.0;
            }
            const double u0 = node(j);
            const double u1 = node(j + 1);
            const double um = u0 + step / 2.0;
            const double h0 = std::pow(u0, -kappa) * lam[i];
            const double hm = std::pow(um, -kappa) * mid;
            const double h1 = std::pow(u1, -kappa) * lam[i + 1];
            g += kappa * step / 6.0 * (h0 + 4.0 * hm + h1);
            lam[j + 1] = std::pow(u1, kappa - 1.0) * g.value();
        }
    }
    return LambdaGrid(kappa, v_max, step, std::move(lam));
}

/// Convenience overload taking p for step = 2^-p.
inline LambdaGrid build_lambda_grid_pow2(double kappa, int v_max, int step_exponent) {
    return build_lambda_grid(kappa, v_max, std::ldexp(1.0, -step_exponent));
}

/// t^(-2 kappa) e^(kappa Ein(t)), the Laplace transform of lambda_kappa.
inline double lambda_transform(double kappa, double t) {
    return std::exp(-2.0 * kappa * std::log(t) + kappa * ein(t));
}

namespace detail {

/**
 * int_0^v_max w(v) lambda(v) dv for a smooth weight w: graded Gauss-Legendre
 * against the closed form on [0, 1], composite Simpson on the grid nodes of
 * each unit segment after that.
 */
template <typename W>
double lambda_moment(const LambdaGrid& grid, W&& w) {
    CompensatedSum<double> acc(integrate_endpoint_graded(
        [&](double v) { return w(v) * grid.boundary_value(v); }, 0.0, 1.0));
    const std::size_t per_unit = grid.nodes_per_unit();
    const auto& lam = grid.values();
    const double h = grid.step();
    for (int m = 1; m < grid.v_max(); ++m) {
        const std::size_t seg = static_cast<std::size_t>(m) * per_unit;
        CompensatedSum<double> s;
        for (std::size_t j = 0; j <= per_unit; ++j) {
            const double c = (j == 0 || j == per_unit) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            s += c * w(grid.node(seg + j)) * lam[seg + j];
        }
        acc += h / 3.0 * s.value();
    }
    return acc.value();
}

/**
 * Majorant of int_V^inf w(v) lambda(v) dv from monotonicity of lambda: for any
 * 0 < s, lambda(v) <= s e^(v s) F(s) with F the Laplace transform (lambda is
 * nondecreasing, so lambda(v) e^(-v s)/s <= int_v^inf e^(-w s) lambda(w) dw <= F(s)).
 * tail(s) must return int_V^inf w(v) e^(v s) dv; the minimum over a grid of
 * s in (0, s_max) is returned.
 */
template <typename Tail>
double lambda_tail_bound(double kappa, double s_max, Tail&& tail) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 64; ++i) {
        const double s = s_max * i / 64.0;
        const double b = s * lambda_transform(kappa, s) * tail(s);
        if (std::isfinite(b)) best = std::min(best, b);
    }
    return best;
}

// Gamma(k+1, x) = k! e^-x sum_{j<=k} x^j/j! for integer k >= 0
inline double upper_incomplete_gamma_int(int k, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j <= k; ++j) {
        term *= x / j;
        sum += term;
    }
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    return fact * std::exp(-x) * sum;
}

} // namespace detail

struct LaplaceCheck {
    double lhs = 0.0;         ///< int_0^v_max e^(-v t) lambda(v) dv from the grid
    double rhs = 0.0;         ///< t^(-2 kappa) e^(kappa Ein(t))
    double defect = 0.0;      ///< |lhs - rhs|
    double tail_bound = 0.0;  ///< majorant of the neglected int_v_max^inf
};

inline LaplaceCheck laplace_check(const LambdaGrid& grid, double t) {
    if (!(t >= 1.0)) throw DomainError("laplace_check: requires t >= 1");
    if (grid.values().empty()) throw ParameterError("laplace_check: empty grid");
    LaplaceCheck c;
    c.lhs = detail::lambda_moment(grid, [t](double v) { return std::exp(-v * t); });
    c.rhs = lambda_transform(grid.kappa(), t);
    c.defect = std::abs(c.lhs - c.rhs);
    const double V = grid.v_max();
    c.tail_bound = detail::lambda_tail_bound(grid.kappa(), t, [&](double s) {
        return std::exp(-V * (t - s)) / (t - s);
    });
    return c;
}

struct QIntSpec {
    double kappa = 2.0;
    double u = 1.0;
    double a = 1.0;
    double b = 3.0;

    void validate() const {
        if (!(kappa > 1.0)) throw ParameterError("QIntSpec: kappa must exceed 1");
        if (!(u > 0.0)) throw ParameterError("QIntSpec: u must be positive");
        if (!(a > 0.0)) throw ParameterError("QIntSpec: a must be positive");
        if (!(b >= a)) throw ParameterError("QIntSpec: b must not be below a");
    }
};

/// t^(-2 kappa) e^(-u t) e^(kappa Ein(t))
inline double qint_integrand(const QIntSpec& spec, double t) {
    return std::exp(-2.0 * spec.kappa * std::log(t) - spec.u * t + spec.kappa * ein(t));
}

inline constexpr int kCertifiedVMax = 40;

/**
 * f^(k)(t) for k in {4, 5} as a moment of lambda_kappa. The error field
 * bounds the neglected tail beyond the grid's v_max.
 */
inline Estimate<double> q_derivative(const QIntSpec& spec, int k, double t, const LambdaGrid& grid) {
    spec.validate();
    if (k != 4 && k != 5) throw ParameterError("q_derivative: k must be 4 or 5");
    if (grid.kappa() != spec.kappa) throw ParameterError("q_derivative: grid built for a different kappa");
    if (grid.v_max() < kCertifiedVMax) throw ParameterError("q_derivative: grid v_max must be >= 40");
    if (!(spec.a >= 1.0) || !(t >= spec.a)) {
        throw DomainError("q_derivative: requires t >= a >= 1");
    }
    const double u = spec.u;
    const double moment = detail::lambda_moment(
        grid, [&](double v) { return std::pow(u + v, k) * std::exp(-(u + v) * t); });
    const double V = grid.v_max();
    const double tail = detail::lambda_tail_bound(spec.kappa, t, [&](double s) {
        // int_V^inf (u+v)^k e^(-(u+v)t) e^(v s) dv
        const double r = t - s;
        return std::exp(u * s) * detail::upper_incomplete_gamma_int(k, (u + V) * r) / std::pow(r, k + 1);
    });
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return {sign * moment, tail};
}

struct QIntResult {
    double value = 0.0;        ///< Simpson approximation of the integral
    double bound = 0.0;        ///< (b-a)^5 f''''(a) / (180 n^4)
    double f4_at_a = 0.0;
    double f4_uncertainty = 0.0;
};

inline QIntResult qint_eval(const QIntSpec& spec, int n, const LambdaGrid& grid) {
    spec.validate();
    if (n < 2 || n % 2 != 0) throw ParameterError("qint_eval: n must be even and >= 2");
    if (!(spec.a >= 1.0)) throw ParameterError("qint_eval: requires a >= 1");
    QIntResult r;
    if (spec.a == spec.b) return r;
    r.value = simpson_composite([&](double t) { return qint_integrand(spec, t); }, spec.a, spec.b, n);
    const auto f4 = q_derivative(spec, 4, spec.a, grid);
    r.f4_at_a = f4.value;
    r.f4_uncertainty = f4.error;
    r.bound = simpson_error_bound(f4.value, spec.b - spec.a, n);
    return r;
}

} // namespace derivbound
