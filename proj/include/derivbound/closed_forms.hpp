#pragma once

/**
 * @file closed_forms.hpp
 * @brief Explicit derivative formulas, used as an independent check of the
 *        integral representations.
 *
 * For a quotient g(t)/t^m the product rule gives
 *
 *   d^k/dt^k [g t^-m] = sum_j C(k,j) g^(k-j)(t) (-1)^j m(m+1)...(m+j-1) t^-(m+j).
 *
 * The terms grow like k!/|t|^(k+m) while the result stays O(1), so these
 * expansions lose digits quickly as t -> 0. They are only offered for
 * |t| >= 0.1.
 */

#include <cmath>
#include <string>
#include <vector>

#include "derivbound/error.hpp"
#include "derivbound/transforms.hpp"

namespace derivbound {

inline constexpr double kClosedFormMinAbsT = 0.1;

namespace detail {

/// g^(j)(t) for the numerator g of each base-function family.
inline double numerator_derivative(const KernelFamily& fam, int j, double t) {
    if (fam.id == Family::ArcTanOverT) {
        if (j == 0) return std::atan(t);
        // d^m/dt^m 1/(1+t^2) = (-1)^m m! sin((m+1) phi) / (1+t^2)^((m+1)/2), phi = arccot t
        const int m = j - 1;
        const double phi = std::atan2(1.0, t);
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        return sign * factorial_d(m) * std::sin((m + 1) * phi) / std::pow(1.0 + t * t, (m + 1) / 2.0);
    }
    double v = fam.base_derivative(j, t);
    if (j == 0) {
        switch (fam.id) {
            case Family::CinKernel:
            case Family::CinOverT2:
            case Family::EinKernel:
            case Family::CoshKernel: v += 1.0; break;
            default: break;
        }
    }
    return v;
}

/// Coefficients of P with d^(2k)/dt^(2k) tan t = P(tan t).
inline std::vector<double> tan_derivative_polynomial(int order) {
    std::vector<double> p = {0.0, 1.0};
    for (int i = 0; i < order; ++i) {
        // d/dt P(T) = P'(T) (1 + T^2)
        std::vector<double> q(p.size() + 1, 0.0);
        for (std::size_t d = 1; d < p.size(); ++d) {
            const double c = static_cast<double>(d) * p[d];
            q[d - 1] += c;
            q[d + 1] += c;
        }
        p = std::move(q);
    }
    return p;
}

} // namespace detail

/**
 * k-th derivative of the family's canonical function by explicit
 * differentiation. For TanEven, k counts pairs as elsewhere (order 2k).
 */
inline double closed_form_derivative(Family id, int k, double t) {
    if (k < 0 || k > kMaxTransformOrder) throw ParameterError("closed_form_derivative: k must lie in [0, 12]");
    if (id == Family::QIntegrand) throw ParameterError("closed_form_derivative: no closed form for QIntegrand");
    if (id == Family::TanEven) {
        if (!(std::abs(t) < std::numbers::pi / 2)) throw DomainError("closed_form_derivative: tan requires |t| < pi/2");
        const auto p = detail::tan_derivative_polynomial(2 * k);
        const double T = std::tan(t);
        double acc = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * T + *it;
        return acc;
    }
    if (!(std::abs(t) >= kClosedFormMinAbsT)) {
        throw DomainError("closed_form_derivative: requires |t| >= 0.1");
    }
    const KernelFamily fam{id};
    const int m = id == Family::CinOverT2 ? 2 : 1;
    double sum = 0.0;
    double binom = 1.0;
    double rising = 1.0;
    for (int j = 0; j <= k; ++j) {
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        sum += binom * detail::numerator_derivative(fam, k - j, t) * sign * rising * std::pow(t, -(m + j));
        binom = binom * (k - j) / (j + 1);
        rising *= m + j;
    }
    return sum;
}

} // namespace derivbound
