#pragma once

/**
 * @file summation.hpp
 * @brief Compensated (Neumaier) summation.
 *
 * Each addition is split into the rounded sum and its exact rounding error
 * (an error-free transformation); the errors are accumulated separately and
 * folded back in at the end. The result is accurate to a few units in the
 * last place independent of the number of terms, as long as the exact sum
 * is not itself the result of massive cancellation.
 */

#include <cmath>
#include <concepts>
#include <span>

namespace derivbound {

template <std::floating_point T>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(T initial) : sum_(initial) {}

    constexpr CompensatedSum& operator+=(T term) {
        const T t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            correction_ += (sum_ - t) + term;
        } else {
            correction_ += (term - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    constexpr T value() const { return sum_ + correction_; }

private:
    T sum_{};
    T correction_{};
};

/// Plain running sum with the same interface, used when compensation is off.
template <std::floating_point T>
class NaiveSum {
public:
    constexpr NaiveSum() = default;
    constexpr explicit NaiveSum(T initial) : sum_(initial) {}
    constexpr NaiveSum& operator+=(T term) {
        sum_ += term;
        return *this;
    }
    constexpr T value() const { return sum_; }

private:
    T sum_{};
};

template <std::floating_point T>
T compensated_sum(std::span<const T> terms) {
    CompensatedSum<T> acc;
    for (T x : terms) acc += x;
    return acc.value();
}

} // namespace derivbound
