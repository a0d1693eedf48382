// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace streamsim {

/// Exact non-negative rational. Used for worker speeds and per-byte costs so
/// that durations stay exact integers of ticks.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    constexpr void normalize() {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    constexpr bool positive() const { return num > 0; }
    constexpr bool is_zero() const { return num == 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend constexpr bool operator==(const Rational&, const Rational&) = default;

    friend constexpr Rational operator/(Rational a, std::int64_t k) { return Rational{a.num, a.den * k}; }

    /// Exact conversion of a finite decimal such as 0.25 or 1.5 (at most nine
    /// fractional digits). Returns nullopt for anything else.
    static std::optional<Rational> from_decimal(double value) {
        if (!std::isfinite(value)) return std::nullopt;
        std::int64_t scale = 1;
        for (int digits = 0; digits <= 9; ++digits, scale *= 10) {
            const double scaled = value * static_cast<double>(scale);
            if (std::fabs(scaled) > 9.0e15) return std::nullopt;
            const double rounded = std::round(scaled);
            if (std::fabs(scaled - rounded) <= 1e-9 * std::max(1.0, std::fabs(scaled))) {
                return Rational{static_cast<std::int64_t>(rounded), scale};
            }
        }
        return std::nullopt;
    }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

/// round(r * n), halves rounded up. r and n must be non-negative.
inline std::int64_t mul_round_half_up(Rational r, std::int64_t n) {
    const __int128 twice = static_cast<__int128>(2) * r.num * n;
    return static_cast<std::int64_t>((twice + r.den) / (static_cast<__int128>(2) * r.den));
}

/// ceil(n / r) for non-negative n and positive r.
inline std::int64_t div_ceil(std::int64_t n, Rational r) {
    const __int128 scaled = static_cast<__int128>(n) * r.den;
    return static_cast<std::int64_t>((scaled + r.num - 1) / r.num);
}

}  // namespace streamsim
