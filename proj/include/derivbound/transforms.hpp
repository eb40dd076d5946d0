#pragma once

/**
 * @file transforms.hpp
 * @brief Integral representations of Taylor-remainder quotients and their
 *        derivatives.
 *
 * For f with n+1 continuous derivatives,
 *
 *   (f(t) - sum_{j<=n} (t-a)^j f^(j)(a)/j!) / (t-a)^(n+1)
 *       = int_0^1 (1-s)^n / n! * f^(n+1)((t-a)s + a) ds,
 *
 * and differentiating k times under the integral sign gives
 *
 *   d^k/dt^k [...] = 1/n! int_0^1 s^k (1-s)^n f^(n+k+1)((t-a)s + a) ds.
 *
 * The right-hand side has no removable singularity and no cancellation, so
 * it is both a stable way to evaluate the derivative and the starting point
 * of every bound in bounds.hpp.
 *
 * Two functions do not fit the Taylor pattern and get their own
 * representations:
 *
 *   atan(t)/t = int_0^inf E1(v) cos(v t) dv
 *   tan t     = 2 int_0^inf sinh(2 s t) / sinh(pi s) ds,   |t| < pi/2
 */

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "derivbound/error.hpp"
#include "derivbound/quadrature.hpp"
#include "derivbound/specfun.hpp"

namespace derivbound {

enum class Family {
    Sinc,         ///< sin t / t
    CinKernel,    ///< (1 - cos t) / t
    CinOverT2,    ///< (1 - cos t) / t^2
    EinKernel,    ///< (1 - e^-t) / t
    SinhOverT,    ///< sinh t / t
    CoshKernel,   ///< (1 - cosh t) / t
    ArcTanOverT,  ///< atan t / t
    TanEven,      ///< tan t, even-order derivatives
    QIntegrand,   ///< t^(-2 kappa) e^(-u t) e^(kappa Ein(t))
};

inline constexpr std::array<Family, 9> kAllFamilies = {
    Family::Sinc,      Family::CinKernel,  Family::CinOverT2,   Family::EinKernel, Family::SinhOverT,
    Family::CoshKernel, Family::ArcTanOverT, Family::TanEven, Family::QIntegrand};

constexpr std::string_view to_string(Family f) {
    switch (f) {
        case Family::Sinc: return "sinc";
        case Family::CinKernel: return "cin";
        case Family::CinOverT2: return "cin2";
        case Family::EinKernel: return "ein";
        case Family::SinhOverT: return "shi";
        case Family::CoshKernel: return "cinh";
        case Family::ArcTanOverT: return "atan";
        case Family::TanEven: return "tan";
        case Family::QIntegrand: return "qint";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view name) {
    for (auto f : kAllFamilies) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

/// Family identity plus the parameters of the QIntegrand family.
struct KernelFamily {
    Family id = Family::Sinc;
    double kappa = 2.0;
    double u = 1.0;

    /// True when the family is a Taylor quotient of a sin/cos/exp/sinh/cosh base.
    constexpr bool has_base_function() const {
        switch (id) {
            case Family::Sinc:
            case Family::CinKernel:
            case Family::CinOverT2:
            case Family::EinKernel:
            case Family::SinhOverT:
            case Family::CoshKernel: return true;
            default: return false;
        }
    }

    /// Taylor order that turns the base function into this family's quotient.
    constexpr int canonical_order() const { return id == Family::CinOverT2 ? 1 : 0; }

    /**
     * order-th derivative of the base function at x. Bases are sin, -cos,
     * -exp(-t), sinh and -cosh; the derivative tables cycle with period 4
     * (or 2), so no symbolic work is needed.
     */
    double base_derivative(int order, double x) const {
        if (order < 0) throw ParameterError("base_derivative: order must be nonnegative");
        switch (id) {
            case Family::Sinc:
                switch (order % 4) {
                    case 0: return std::sin(x);
                    case 1: return std::cos(x);
                    case 2: return -std::sin(x);
                    default: return -std::cos(x);
                }
            case Family::CinKernel:
            case Family::CinOverT2:
                switch (order % 4) {
                    case 0: return -std::cos(x);
                    case 1: return std::sin(x);
                    case 2: return std::cos(x);
                    default: return -std::sin(x);
                }
            case Family::EinKernel:
                return (order % 2 == 0 ? -1.0 : 1.0) * std::exp(-x);
            case Family::SinhOverT:
                return order % 2 == 0 ? std::sinh(x) : std::cosh(x);
            case Family::CoshKernel:
                return order % 2 == 0 ? -std::cosh(x) : -std::sinh(x);
            default:
                throw ParameterError("base_derivative: family " + std::string(to_string(id)) +
                                     " has no base function");
        }
    }
};

/// f, expansion point a, Taylor order n and the sup bound M on |f^(n+k+1)|.
struct TaylorKernelSpec {
    KernelFamily family{};
    double a = 0.0;
    int n = 0;
    double M = 1.0;

    static TaylorKernelSpec canonical(Family id) {
        TaylorKernelSpec s;
        s.family.id = id;
        s.n = s.family.canonical_order();
        return s;
    }

    bool is_canonical() const { return a == 0.0 && n == family.canonical_order(); }

    void validate() const {
        if (n < 0) throw ParameterError("TaylorKernelSpec: n must be nonnegative");
        if (!(M > 0.0)) throw ParameterError("TaylorKernelSpec: M must be positive");
        if (!family.has_base_function() && !is_canonical()) {
            throw ParameterError("TaylorKernelSpec: family " + std::string(to_string(family.id)) +
                                 " only supports a = 0 with its own order");
        }
        if (family.id == Family::QIntegrand && !(family.kappa > 0.0 && family.u > 0.0)) {
            throw ParameterError("TaylorKernelSpec: QIntegrand needs kappa > 0 and u > 0");
        }
    }
};

inline constexpr int kMaxTransformOrder = 12;
inline constexpr double kTanGuard = 0.01;

namespace detail {

inline double factorial_d(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// cos(x + k pi/2) without rounding pi/2.
inline double cos_quarter_shift(int k, double x) {
    switch (k % 4) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
    }
}

// Panels on [0, 1] narrow enough that a phase (t - a) s never turns more
// than two radians across one panel.
inline PanelConfig unit_interval_panels(double scale) {
    PanelConfig cfg;
    cfg.panel_width = std::min(0.5, 2.0 / std::max(std::abs(scale), 1e-300));
    return cfg;
}

inline double canonical_ratio(Family id, double t) {
    switch (id) {
        case Family::Sinc: return sinc_kernel(t);
        case Family::CinKernel: return cin_kernel(t);
        case Family::CinOverT2: {
            if (std::abs(t) < 1e-3) {
                const double t2 = t * t;
                return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
            }
            const double h = sinc_kernel(t / 2.0);
            return 0.5 * h * h;
        }
        case Family::EinKernel: return ein_kernel(t);
        case Family::SinhOverT: return shi_kernel(t);
        case Family::CoshKernel: return cinh_kernel(t);
        default: break;
    }
    throw ParameterError("canonical_ratio: not a base-function family");
}

} // namespace detail

/**
 * Continuous extension of the Taylor quotient at t. For the named families
 * this is the closed form written without cancellation; for other (a, n) it
 * is the explicit quotient when |t - a| >= 1 and the integral representation
 * otherwise.
 */
inline double ratio_value(const TaylorKernelSpec& spec, double t) {
    spec.validate();
    if (!std::isfinite(t)) throw DomainError("ratio_value: t must be finite");
    switch (spec.family.id) {
        case Family::ArcTanOverT: return atan_kernel(t);
        case Family::TanEven:
            if (!(std::abs(t) < std::numbers::pi / 2)) {
                throw DomainError("ratio_value: tan requires |t| < pi/2");
            }
            return std::tan(t);
        case Family::QIntegrand: {
            if (!(t > 0.0)) throw DomainError("ratio_value: QIntegrand requires t > 0");
            const double kappa = spec.family.kappa;
            return std::exp(-2.0 * kappa * std::log(t) - spec.family.u * t + kappa * ein(t));
        }
        default: break;
    }
    if (spec.is_canonical()) return detail::canonical_ratio(spec.family.id, t);

    const auto& fam = spec.family;
    const double d = t - spec.a;
    if (std::abs(d) >= 1.0) {
        double taylor = 0.0;
        double pw = 1.0;
        for (int j = 0; j <= spec.n; ++j) {
            taylor += pw * fam.base_derivative(j, spec.a) / detail::factorial_d(j);
            pw *= d;
        }
        return (fam.base_derivative(0, t) - taylor) / pw;
    }
    const int n = spec.n;
    const double a = spec.a;
    return integrate(
               [&](double s) { return std::pow(1.0 - s, n) * fam.base_derivative(n + 1, d * s + a); },
               0.0, 1.0, detail::unit_interval_panels(d)) /
           detail::factorial_d(n);
}

inline double arctan_derivative(int k, double t);
inline double tan_even_derivative(int k, double t);

/**
 * k-th derivative of the Taylor quotient at t,
 * 1/n! int_0^1 s^k (1-s)^n f^(n+k+1)((t-a)s + a) ds.
 *
 * ArcTanOverT and TanEven dispatch to their own representations (for TanEven
 * k counts pairs, i.e. the derivative of order 2k is returned). QIntegrand
 * derivatives need the lambda_kappa tabulation and live in lambda.hpp.
 */
inline double transform_derivative(const TaylorKernelSpec& spec, int k, double t) {
    spec.validate();
    if (k < 0 || k > kMaxTransformOrder) {
        throw ParameterError("transform_derivative: k must lie in [0, 12], got " + std::to_string(k));
    }
    if (!std::isfinite(t)) throw DomainError("transform_derivative: t must be finite");
    switch (spec.family.id) {
        case Family::ArcTanOverT: return arctan_derivative(k, t);
        case Family::TanEven: return tan_even_derivative(k, t);
        case Family::QIntegrand:
            throw ParameterError("transform_derivative: use q_derivative for the QIntegrand family");
        default: break;
    }
    const auto& fam = spec.family;
    const int n = spec.n;
    const double a = spec.a;
    const double d = t - a;
    const int order = n + k + 1;
    const double body = integrate(
        [&](double s) {
            return std::pow(s, k) * std::pow(1.0 - s, n) * fam.base_derivative(order, d * s + a);
        },
        0.0, 1.0, detail::unit_interval_panels(d));
    return body / detail::factorial_d(n);
}

/**
 * k-th derivative by central differences with Richardson extrapolation
 * (Ridders' tableau, step halved each level). The k-th central difference
 *
 *   D_h = h^-k sum_j (-1)^j C(k, j) f(t + (k/2 - j) h)
 *
 * is symmetric, so its error expands in even powers of h. The tableau stops
 * when extrapolation starts amplifying rounding noise. About 1e-8 absolute
 * for unit-scale entire functions with k <= 4.
 */
template <typename F>
double finite_difference_derivative(F&& f, int k, double t, double h0 = 0.0) {
    if (k < 0 || k > 6) throw ParameterError("finite_difference_derivative: k must lie in [0, 6]");
    if (k == 0) return f(t);
    if (h0 <= 0.0) h0 = k <= 2 ? 0.2 : 0.5;

    std::array<double, 7> binom{};
    binom[0] = 1.0;
    for (int j = 1; j <= k; ++j) binom[j] = binom[j - 1] * (k - j + 1) / j;
    auto central = [&](double h) {
        CompensatedSum<double> acc;
        for (int j = 0; j <= k; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            acc += sign * binom[j] * f(t + (0.5 * k - j) * h);
        }
        return acc.value() / std::pow(h, k);
    };

    constexpr int kLevels = 10;
    std::array<std::array<double, kLevels>, kLevels> tab{};
    double best = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    double h = h0;
    for (int i = 0; i < kLevels; ++i, h /= 2.0) {
        tab[i][0] = central(h);
        double factor = 1.0;
        for (int j = 1; j <= i; ++j) {
            factor *= 4.0;
            tab[i][j] = tab[i][j - 1] + (tab[i][j - 1] - tab[i - 1][j - 1]) / (factor - 1.0);
            const double err = std::max(std::abs(tab[i][j] - tab[i][j - 1]),
                                        std::abs(tab[i][j] - tab[i - 1][j - 1]));
            if (err <= best_err) {
                best_err = err;
                best = tab[i][j];
            }
        }
        if (i > 0 && std::abs(tab[i][i] - tab[i - 1][i - 1]) >= 2.0 * best_err) break;
    }
    return best;
}

/**
 * d^k/dt^k atan(t)/t = int_0^inf v^k E1(v) cos(v t + k pi/2) dv.
 *
 * The log singularity of E1 at 0 is handled by geometric panels; the
 * integral is cut at v = 60 where, with E1(v) <= e^-v / v, the tail is below
 * int_60^inf v^(k-1) e^-v dv < 1e-13.
 */
inline Estimate<double> arctan_derivative_estimate(int k, double t) {
    if (k < 0 || k > 8) throw ParameterError("arctan_derivative: k must lie in [0, 8]");
    if (!std::isfinite(t)) throw DomainError("arctan_derivative: t must be finite");
    SemiInfiniteConfig<double> cfg;
    cfg.lower = 0.0;
    cfg.split_point = 60.0;
    cfg.singular_at_lower = true;
    cfg.panels.panel_width = std::min(0.5, 2.0 / std::max(std::abs(t), 1e-300));
    cfg.tail_bound = [k](double s) {
        // Gamma(k, s) <= s^(k-1) e^-s / (1 - (k-1)/s) for s > k - 1
        const double a = k;
        const double lead = std::exp((a - 1.0) * std::log(s) - s);
        return a <= 1.0 ? lead : lead / (1.0 - (a - 1.0) / s);
    };
    return integrate_semi_infinite(
        [k, t](double v) {
            // E1 past the |x| <= 50 working range of e1() is still well inside
            // what the quadrature form handles
            const double e = v <= 1.0 ? e1_series(v) : e1_quadrature(v);
            return std::pow(v, k) * e * detail::cos_quarter_shift(k, v * t);
        }, cfg);
}

inline double arctan_derivative(int k, double t) { return arctan_derivative_estimate(k, t).value; }

/**
 * d^(2k)/dt^(2k) tan t = 2 int_0^inf (2s)^(2k) sinh(2st) / sinh(pi s) ds.
 *
 * The integrand is evaluated as e^((2|t|-pi)s) (1 - e^(-4|t|s)) / (1 - e^(-2 pi s))
 * so nothing overflows for large s. The split point starts at
 * max(20, 20 / (pi - 2|t|)) and is pushed out until the tail majorant
 * 2 int (2s)^(2k) e^((2|t|-pi)s) ds falls below 1e-14 of the bound
 * (2k)! / (pi/2 - |t|)^(2k+1).
 */
inline Estimate<double> tan_even_derivative_estimate(int k, double t) {
    if (k < 0 || k > 5) throw ParameterError("tan_even_derivative: k must lie in [0, 5]");
    constexpr double pi = std::numbers::pi;
    if (!(std::abs(t) < pi / 2 - kTanGuard)) {
        throw DomainError("tan_even_derivative: requires |t| < pi/2 - 0.01");
    }
    const double at = std::abs(t);
    const double c = pi - 2.0 * at;  // decay rate of the integrand
    const int p = 2 * k;
    auto tail = [&](double s) {
        // 2 * 2^p * Gamma(p+1, c s) / c^(p+1), with the incomplete-gamma majorant
        const double x = c * s;
        double g = std::exp(p * std::log(x) - x);
        if (p > 0) g /= std::max(1e-300, 1.0 - p / x);
        return 2.0 * std::pow(2.0, p) * g / std::pow(c, p + 1);
    };
    const double scale = detail::factorial_d(p) / std::pow(pi / 2 - at, p + 1);
    double split = std::max(20.0, 20.0 / c);
    while (c * split <= p + 1.0 || tail(split) > 1e-14 * scale) split *= 1.25;

    SemiInfiniteConfig<double> cfg;
    cfg.split_point = split;
    cfg.tail_bound = tail;
    const double sign = t < 0 ? -1.0 : 1.0;
    auto integrand = [&](double s) {
        if (s == 0.0) return 0.0;
        const double ratio = std::exp(-c * s) * std::expm1(-4.0 * at * s) / std::expm1(-2.0 * pi * s);
        return 2.0 * std::pow(2.0 * s, p) * ratio;
    };
    auto est = integrate_semi_infinite(integrand, cfg);
    est.value *= sign;
    return est;
}

inline double tan_even_derivative(int k, double t) { return tan_even_derivative_estimate(k, t).value; }

} // namespace derivbound
