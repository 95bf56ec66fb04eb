#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "actigate/error.hpp"

namespace actigate {

// Exact rational number over int64, used for frame rates and timestamps.
// Frame timestamps are index/fps; keeping them rational makes time
// comparisons (notably the grace-period cutoff) exact instead of depending
// on floating-point rounding of index * (1/fps).
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1; // always > 0 after normalization

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0)
            throw InvariantError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool is_zero() const { return num == 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return combine(a, b, +1);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return combine(a, b, -1);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Exact conversion from a finite double. Every finite double is a dyadic
    // rational; throws when it does not fit the int64 representation.
    static Rational from_double(double x) {
        if (!std::isfinite(x))
            throw ConfigError("rational value must be finite");
        if (x == 0.0)
            return Rational(0, 1);
        int exp = 0;
        double m = std::frexp(x, &exp); // x = m * 2^exp, 0.5 <= |m| < 1
        // Scale mantissa to an integer, dropping trailing zero bits.
        std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
        exp -= 53;
        while (mant != 0 && (mant & 1) == 0) {
            mant >>= 1;
            ++exp;
        }
        if (exp >= 0) {
            if (exp > 62 || std::llabs(mant) > (std::numeric_limits<std::int64_t>::max() >> exp))
                throw ConfigError("value too large for exact rational");
            return Rational(mant << exp, 1);
        }
        if (exp < -62)
            throw ConfigError("value too fine-grained for exact rational");
        return Rational(mant, std::int64_t{1} << -exp);
    }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

  private:
    static Rational combine(const Rational& a, const Rational& b, int sign) {
        const __int128 n =
            static_cast<__int128>(a.num) * b.den + static_cast<__int128>(sign) * b.num * a.den;
        const __int128 d = static_cast<__int128>(a.den) * b.den;
        return from_int128(n, d);
    }

    static Rational from_int128(__int128 n, __int128 d) {
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
        if (n > lim || n < -lim || d > lim)
            throw InvariantError("rational overflow");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
};

// Parses "30", "30000/1001" or a decimal like "29.97" into an exact rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty())
        throw ConfigError("empty rational value");
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            const std::int64_t n = std::stoll(text.substr(0, slash));
            const std::int64_t d = std::stoll(text.substr(slash + 1));
            return Rational(n, d);
        }
        const auto dot = text.find('.');
        if (dot == std::string::npos)
            return Rational(std::stoll(text), 1);
        const std::string frac = text.substr(dot + 1);
        if (frac.size() > 9)
            throw ConfigError("too many decimal places in rational: " + text);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            den *= 10;
        const std::int64_t whole = std::stoll(text.substr(0, dot).empty() ? "0" : text.substr(0, dot));
        std::int64_t n = whole * den + (frac.empty() ? 0 : std::stoll(frac)) * (whole < 0 ? -1 : 1);
        if (text[0] == '-' && whole == 0)
            n = -n;
        return Rational(n, den);
    } catch (const std::invalid_argument&) {
        throw ConfigError("malformed rational value: " + text);
    } catch (const std::out_of_range&) {
        throw ConfigError("rational value out of range: " + text);
    }
}

} // namespace actigate
