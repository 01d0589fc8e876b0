#include "ltd/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace ltd {
namespace {

using wide = __int128;

wide gcd_wide(wide a, wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(wide v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::invalid_argument bad_number(std::string_view text) {
    return std::invalid_argument("invalid number '" + std::string(text) + "'");
}

std::int64_t parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw bad_number(whole);
    std::int64_t value = 0;
    const auto* first = digits.data();
    const auto* last = digits.data() + digits.size();
    if (*first == '+') ++first;
    if (first == last) throw bad_number(whole);
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) throw RationalOverflow("number out of range '" + std::string(whole) + "'");
    if (ec != std::errc() || ptr != last) throw bad_number(whole);
    return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(wide num, wide den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const wide g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
    if (!fits(num) || !fits(den)) throw RationalOverflow("rational arithmetic overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) throw bad_number(text);

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const std::int64_t n = parse_integer(s.substr(0, slash), text);
        const auto den_text = s.substr(slash + 1);
        if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) throw bad_number(text);
        const std::int64_t d = parse_integer(den_text, text);
        if (d == 0) throw bad_number(text);
        return Rational(n, d);
    }

    const auto dot = s.find('.');
    if (dot == std::string_view::npos) return Rational(parse_integer(s, text));

    bool negative = false;
    std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
        negative = int_part.front() == '-';
        int_part.remove_prefix(1);
    }
    if (int_part.empty() && frac_part.empty()) throw bad_number(text);
    if (frac_part.size() > 18) throw RationalOverflow("too many decimal places in '" + std::string(text) + "'");
    for (char c : frac_part)
        if (c < '0' || c > '9') throw bad_number(text);
    for (char c : int_part)
        if (c < '0' || c > '9') throw bad_number(text);

    wide scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    const wide whole = int_part.empty() ? 0 : parse_integer(int_part, text);
    const wide frac = frac_part.empty() ? 0 : parse_integer(frac_part, text);
    wide num = whole * scale + frac;
    if (negative) num = -num;
    return from_wide(num, scale);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (den_ == rhs.den_) return *this = from_wide(wide(num_) + rhs.num_, den_);
    return *this = from_wide(wide(num_) * rhs.den_ + wide(rhs.num_) * den_, wide(den_) * rhs.den_);
}

Rational& Rational::operator-=(const Rational& rhs) {
    if (den_ == rhs.den_) return *this = from_wide(wide(num_) - rhs.num_, den_);
    return *this = from_wide(wide(num_) * rhs.den_ - wide(rhs.num_) * den_, wide(den_) * rhs.den_);
}

Rational& Rational::operator*=(const Rational& rhs) {
    return *this = from_wide(wide(num_) * rhs.num_, wide(den_) * rhs.den_);
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("division by zero");
    return *this = from_wide(wide(num_) * rhs.den_, wide(den_) * rhs.num_);
}

Rational Rational::operator-() const { return from_wide(-wide(num_), den_); }

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept {
    const wide l = wide(lhs.num_) * rhs.den_;
    const wide r = wide(rhs.num_) * lhs.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

}  // namespace ltd
