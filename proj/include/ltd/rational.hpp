#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ltd {

/// Thrown when an exact operation would leave the 64-bit range.
class RationalOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Exact rational number in canonical reduced form.
///
/// The denominator is always positive and gcd(|num|, den) == 1, so equality
/// is plain field comparison. Arithmetic is carried out in 128-bit
/// intermediates and throws RationalOverflow if the reduced result does not
/// fit in int64. Nothing here ever rounds.
class Rational {
public:
    constexpr Rational() noexcept = default;
    constexpr Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den);

    /// Parses "3", "-0.25", "3/7", "+1.5". Decimals are converted exactly.
    static Rational parse(std::string_view text);

    [[nodiscard]] constexpr std::int64_t num() const noexcept { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const noexcept { return den_; }

    [[nodiscard]] constexpr int sign() const noexcept { return (num_ > 0) - (num_ < 0); }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return num_ == 0; }
    [[nodiscard]] constexpr bool is_integer() const noexcept { return den_ == 1; }

    /// Canonical text: "n" for integers, "n/d" otherwise.
    [[nodiscard]] std::string str() const;
    [[nodiscard]] double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    Rational operator-() const;

    friend constexpr bool operator==(const Rational&, const Rational&) noexcept = default;
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept;

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

[[nodiscard]] inline Rational abs(const Rational& value) { return value.sign() < 0 ? -value : value; }

}  // namespace ltd
