#pragma once

/**
 * @file analysis.hpp
 * @brief Actual versus a-priori Simpson error for the cosine integral.
 *
 * With f(t) = (1 - cos t)/t and Cin(x) = int_0^x f,
 *
 *   E_n(x) = S_n(x) - Cin(x),   B_n(x) = x^5 / (900 n^4),   R_n(x) = B_n / E_n,
 *
 * where B_n follows from |f''''| <= 1/5. For x = 1 and n = 1000 the error is
 * about 4e-16 against Cin(1) = 0.24, which is below the resolution of
 * binary64; the whole experiment therefore runs in long double (64-bit
 * significand), where the same quantity is resolved to ~1e-4 relative.
 */

#include <algorithm>
#include <array>
#include <istream>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "derivbound/bounds.hpp"
#include "derivbound/error.hpp"
#include "derivbound/format.hpp"
#include "derivbound/quadrature.hpp"
#include "derivbound/specfun.hpp"

namespace derivbound {

/// Working precision of the Simpson experiment.
using Real = long double;

/// Below this |E_n| the ratio B_n / E_n is reported as undefined.
inline constexpr Real kUndefinedErrorThreshold = 1e-17L;

inline constexpr double kSimpsonMaxX = 40.0;
inline constexpr int kSimpsonMaxN = 1 << 14;

struct SimpsonReport {
    double x = 0.0;
    int n = 0;
    Real s_n = 0;        ///< Simpson value
    Real reference = 0;  ///< Cin(x)
    Real e_n = 0;        ///< s_n - reference
    Real b_n = 0;        ///< x^5 / (900 n^4)
    std::optional<Real> r_n;

    std::optional<double> ratio() const {
        if (!r_n) return std::nullopt;
        return static_cast<double>(*r_n);
    }
};

inline Real cin_integrand(Real t) { return cin_kernel(t); }

inline Real simpson_cin(double x, int n) { return simpson_composite(cin_integrand, static_cast<Real>(x), n); }

inline Real cin_bound(double x, int n) {
    const Real xl = x;
    const Real n4 = Real(n) * Real(n) * Real(n) * Real(n);
    return xl * xl * xl * xl * xl / (900 * n4);
}

inline SimpsonReport simpson_report(double x, int n) {
    if (!(x >= 0.0) || x > kSimpsonMaxX) throw ParameterError("simpson_report: x must lie in [0, 40]");
    if (n < 2 || n % 2 != 0 || n > kSimpsonMaxN) {
        throw ParameterError("simpson_report: n must be even and lie in [2, 16384]");
    }
    SimpsonReport r;
    r.x = x;
    r.n = n;
    if (x == 0.0) return r;
    r.s_n = simpson_cin(x, n);
    r.reference = cin<Real>(x);
    r.e_n = r.s_n - r.reference;
    r.b_n = cin_bound(x, n);
    if (std::abs(r.e_n) >= kUndefinedErrorThreshold) r.r_n = r.b_n / r.e_n;
    return r;
}

/// E_n(x) alone.
inline Real simpson_error(double x, int n) { return simpson_report(x, n).e_n; }

// ---------------------------------------------------------------------------
// Ratio grid over x = 1..10 and n = 10, 100, 1000.
// ---------------------------------------------------------------------------

struct Table1 {
    static constexpr std::array<double, 10> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    static constexpr std::array<int, 3> ns = {10, 100, 1000};
    std::array<std::array<SimpsonReport, 3>, 10> reports{};

    /// Signed ratio R_n(x) as double; throws if the error vanished.
    double ratio(std::size_t xi, std::size_t ni) const {
        const auto r = reports.at(xi).at(ni).ratio();
        if (!r) throw ParameterError("Table1: ratio undefined");
        return *r;
    }

    std::vector<SimpsonReport> rows() const {
        std::vector<SimpsonReport> out;
        for (const auto& row : reports) out.insert(out.end(), row.begin(), row.end());
        return out;
    }
};

inline Table1 table1() {
    Table1 t;
    for (std::size_t i = 0; i < Table1::xs.size(); ++i) {
        for (std::size_t j = 0; j < Table1::ns.size(); ++j) {
            t.reports[i][j] = simpson_report(Table1::xs[i], Table1::ns[j]);
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// CSV: x,n,S_n,Cin,E_n,B_n,R_n
// ---------------------------------------------------------------------------

inline constexpr const char* kSimpsonCsvHeader = "x,n,S_n,Cin,E_n,B_n,R_n";

inline void write_csv_row(std::ostream& os, const SimpsonReport& r) {
    os << format_g17(r.x) << ',' << r.n << ',' << format_g17(static_cast<double>(r.s_n)) << ','
       << format_g17(static_cast<double>(r.reference)) << ',' << format_g17(static_cast<double>(r.e_n))
       << ',' << format_g17(static_cast<double>(r.b_n)) << ',';
    if (auto q = r.ratio()) {
        os << format_g17(*q);
    } else {
        os << "undef";
    }
    os << '\n';
}

template <typename Range>
void write_csv(std::ostream& os, const Range& reports) {
    os << kSimpsonCsvHeader << '\n';
    for (const auto& r : reports) write_csv_row(os, r);
}

/// One parsed CSV row: (x, n, R_n) with R_n absent for `undef`.
struct RatioRow {
    double x = 0.0;
    int n = 0;
    std::optional<double> r;
};

/// Reads back the x, n and R_n columns of a CSV produced by write_csv.
inline std::vector<RatioRow> parse_ratio_csv(std::istream& is) {
    std::vector<RatioRow> rows;
    std::string line;
    if (!std::getline(is, line) || line != kSimpsonCsvHeader) {
        throw ParameterError("parse_ratio_csv: missing or unexpected header");
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw ParameterError("parse_ratio_csv: expected 7 columns");
        RatioRow row;
        const auto x = parse_double(cells[0]);
        const auto n = parse_double(cells[1]);
        if (!x || !n) throw ParameterError("parse_ratio_csv: malformed x or n");
        row.x = *x;
        row.n = static_cast<int>(*n);
        if (cells[6] != "undef") {
            const auto r = parse_double(cells[6]);
            if (!r) throw ParameterError("parse_ratio_csv: malformed R_n");
            row.r = *r;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Ratio scan and zero localisation.
// ---------------------------------------------------------------------------

/// Reports at x_min, x_min + step, ... up to x_max; vanishing errors leave r_n empty.
inline std::vector<SimpsonReport> scan_ratio(int n, double x_min, double x_max, double step) {
    if (!(x_min >= 0.0 && x_min < x_max && x_max <= kSimpsonMaxX)) {
        throw ParameterError("scan_ratio: requires 0 <= x_min < x_max <= 40");
    }
    if (!(step > 0.0)) throw ParameterError("scan_ratio: step must be positive");
    const auto count = static_cast<long>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
    std::vector<SimpsonReport> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(simpson_report(x_min + static_cast<double>(i) * step, n));
    return out;
}

struct ZeroBracket {
    double lo = 0.0;
    double hi = 0.0;
    Real e_lo = 0;
    Real e_hi = 0;
};

struct ZeroSearch {
    ZeroBracket initial;  ///< the bracket as supplied, with E_n at its ends
    ZeroBracket refined;  ///< after bisection
    int iterations = 0;
};

/// Bisection on E_n over [lo, hi] down to width tol.
inline ZeroSearch locate_error_zero(int n, double lo, double hi, double tol = 1e-6) {
    if (!(lo < hi)) throw ParameterError("locate_error_zero: requires lo < hi");
    if (!(tol > 0.0)) throw ParameterError("locate_error_zero: tol must be positive");
    ZeroSearch z;
    z.initial = {lo, hi, simpson_error(lo, n), simpson_error(hi, n)};
    if ((z.initial.e_lo > 0) == (z.initial.e_hi > 0) && z.initial.e_lo != 0 && z.initial.e_hi != 0) {
        throw BracketError("locate_error_zero: E_n has the same sign at both ends of [" +
                           format_shortest(lo) + ", " + format_shortest(hi) + "]");
    }
    ZeroBracket b = z.initial;
    while (b.hi - b.lo > tol && b.e_lo != 0 && b.e_hi != 0) {
        const double mid = b.lo + (b.hi - b.lo) / 2;
        if (mid <= b.lo || mid >= b.hi) break;
        const Real e_mid = simpson_error(mid, n);
        if ((e_mid > 0) == (b.e_lo > 0)) {
            b.lo = mid;
            b.e_lo = e_mid;
        } else {
            b.hi = mid;
            b.e_hi = e_mid;
        }
        ++z.iterations;
    }
    z.refined = b;
    return z;
}

// ---------------------------------------------------------------------------
// Truncated Frullani integral.
// ---------------------------------------------------------------------------

struct FrullaniSpec {
    double alpha = 1.0;
    double beta = 2.0;
    double truncation = 1000.0;
};

struct FrullaniResult {
    double truncated = 0.0;   ///< int_0^T (cos(alpha t) - cos(beta t)) / t^2 dt
    double tail_bound = 0.0;  ///< 2 / T
    double target = 0.0;      ///< (|beta| - |alpha|) pi / 2

    bool consistent() const { return std::abs(truncated - target) <= tail_bound + 1e-8; }
};

/**
 * The integrand is written as beta^2 g(beta t) - alpha^2 g(alpha t) with
 * g(u) = (1 - cos u)/u^2, which is smooth at 0. The tail beyond T is at most
 * int_T^inf 2/t^2 dt = 2/T since |cos - cos| <= 2.
 */
inline FrullaniResult frullani_check(const FrullaniSpec& spec) {
    if (!(spec.truncation >= 1.0)) throw ParameterError("frullani_check: truncation must be >= 1");
    if (!std::isfinite(spec.alpha) || !std::isfinite(spec.beta)) {
        throw ParameterError("frullani_check: alpha and beta must be finite");
    }
    auto g = [](double u) {
        if (std::abs(u) < 1e-3) {
            const double u2 = u * u;
            return 0.5 - u2 / 24.0 + u2 * u2 / 720.0;
        }
        const double h = std::sin(u / 2) / (u / 2);
        return 0.5 * h * h;
    };
    const double a = spec.alpha;
    const double b = spec.beta;
    PanelConfig cfg;
    cfg.panel_width = std::min(0.5, 2.0 / std::max({std::abs(a), std::abs(b), 1e-300}));
    FrullaniResult r;
    r.truncated = integrate([&](double t) { return b * b * g(b * t) - a * a * g(a * t); }, 0.0,
                            spec.truncation, cfg);
    r.tail_bound = 2.0 / spec.truncation;
    r.target = (std::abs(b) - std::abs(a)) * std::numbers::pi / 2;
    return r;
}

} // namespace derivbound
