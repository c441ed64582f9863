#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace walkmult {

/*
 * Exact rational number.
 *
 * Values whose numerator and denominator both fit in a signed 64-bit word
 * (excluding INT64_MIN) are held inline and combined with 128-bit
 * intermediates; anything larger spills to a GMP rational. The value is
 * always canonical: lowest terms, positive denominator, and inline whenever
 * it fits. Equality therefore never has to compare across representations.
 */
class Rational {
    using i64 = std::int64_t;
    using i128 = __int128;
    using u128 = unsigned __int128;

public:
    Rational() = default;
    Rational(int n) : num_(n) {}
    Rational(long n) : Rational(static_cast<long long>(n)) {}
    Rational(long long n) {
        if (n == std::numeric_limits<i64>::min()) {
            big_ = std::make_unique<mpq_class>(to_mpz(n));
            num_ = 0;
        } else {
            num_ = n;
        }
    }
    Rational(long long n, long long d) { assign128(n, d); }
    explicit Rational(const mpq_class& q) { assign_mpq(q); }

    Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            num_ = o.num_;
            den_ = o.den_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    /// Parses "-3", "7/2", "0.125", "1.5e-3". Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    /// True when `text` parses exactly as a rational (see parse()).
    static bool is_exact_literal(std::string_view text) noexcept;

    [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
    [[nodiscard]] bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
    [[nodiscard]] bool is_integer() const {
        return big_ ? big_->get_den() == 1 : den_ == 1;
    }
    [[nodiscard]] int sign() const {
        if (big_) return sgn(*big_);
        return (num_ > 0) - (num_ < 0);
    }
    [[nodiscard]] bool is_inline() const noexcept { return !big_; }

    [[nodiscard]] double to_double() const {
        if (big_) return big_->get_d();
        if (den_ == 1) return static_cast<double>(num_);
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    [[nodiscard]] mpq_class to_mpq() const {
        if (big_) return *big_;
        mpq_class q(to_mpz(num_), to_mpz(den_));
        return q;  // already canonical
    }

    [[nodiscard]] std::string numerator_string() const {
        return big_ ? big_->get_num().get_str() : std::to_string(num_);
    }
    [[nodiscard]] std::string denominator_string() const {
        return big_ ? big_->get_den().get_str() : std::to_string(den_);
    }

    /// Canonical text: "p" for integers, "p/q" otherwise.
    [[nodiscard]] std::string str() const {
        if (big_) return big_->get_str();
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const {
        if (big_) return Rational(mpq_class(-*big_));
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
        if (a.num_ == 0) return b;
        if (b.num_ == 0) return a;
        if (a.den_ == 1 && b.den_ == 1) {
            i64 s;
            if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != std::numeric_limits<i64>::min())
                return from_inline(s, 1);
            Rational r;
            r.assign_reduced128(static_cast<i128>(a.num_) + b.num_, 1);
            return r;
        }
        const i64 g = std::gcd(a.den_, b.den_);
        Rational r;
        if (g == 1) {
            r.assign_reduced128(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                                static_cast<i128>(a.den_) * b.den_);
            return r;
        }
        const i64 bd = b.den_ / g;
        const i128 n = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * (a.den_ / g);
        const i64 g2 = static_cast<i64>(gcd128(abs128(n), static_cast<u128>(g)));
        r.assign_reduced128(n / g2, static_cast<i128>(a.den_ / g2) * bd);
        return r;
    }

    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
        if (a.num_ == 0 || b.num_ == 0) return Rational();
        if (a.den_ == 1 && b.den_ == 1) {
            i64 p;
            if (!__builtin_mul_overflow(a.num_, b.num_, &p) && p != std::numeric_limits<i64>::min())
                return from_inline(p, 1);
        }
        const i64 g1 = std::gcd(a.num_, b.den_);
        const i64 g2 = std::gcd(b.num_, a.den_);
        Rational r;
        r.assign_reduced128(static_cast<i128>(a.num_ / g1) * (b.num_ / g2),
                            static_cast<i128>(a.den_ / g2) * (b.den_ / g1));
        return r;
    }

    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return a * b.reciprocal();
    }

    [[nodiscard]] Rational reciprocal() const {
        if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
        if (big_) return Rational(mpq_class(1 / *big_));
        Rational r;
        if (num_ < 0) {
            r.num_ = -den_;
            r.den_ = -num_;
        } else {
            r.num_ = den_;
            r.den_ = num_;
        }
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        if (a.big_ && b.big_) return *a.big_ == *b.big_;
        return false;
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            const i128 l = static_cast<i128>(a.num_) * b.den_;
            const i128 r = static_cast<i128>(b.num_) * a.den_;
            return l <=> r;
        }
        const int c = cmp(a.to_mpq(), b.to_mpq());
        return c <=> 0;
    }

    friend Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

private:
    i64 num_ = 0;
    i64 den_ = 1;
    std::unique_ptr<mpq_class> big_;

    static Rational from_inline(i64 n, i64 d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }

    static mpz_class to_mpz(i64 v) {
        mpz_class z;
        mpz_set_si(z.get_mpz_t(), v);
        return z;
    }

    static mpz_class to_mpz128(i128 v) {
        const bool neg = v < 0;
        u128 m = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
        mpz_class hi, lo;
        mpz_set_ui(hi.get_mpz_t(), static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
        mpz_set_ui(lo.get_mpz_t(), static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
        mpz_class z = (hi << 64) + lo;
        if (neg) z = -z;
        return z;
    }

    static u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v); }

    static u128 gcd128(u128 a, u128 b) {
        if ((a >> 64) == 0 && (b >> 64) == 0)
            return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
        while (b != 0) {
            const u128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static bool fits(i128 v) {
        return v > std::numeric_limits<i64>::min() && v <= std::numeric_limits<i64>::max();
    }

    // n/d already in lowest terms, d > 0
    void assign_reduced128(i128 n, i128 d) {
        if (n == 0) d = 1;
        if (fits(n) && fits(d)) {
            num_ = static_cast<i64>(n);
            den_ = static_cast<i64>(d);
            big_.reset();
            return;
        }
        mpq_class q(to_mpz128(n), to_mpz128(d));
        num_ = 0;
        den_ = 1;
        big_ = std::make_unique<mpq_class>(std::move(q));
    }

    void assign128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const u128 g = gcd128(abs128(n), static_cast<u128>(d));
        if (g > 1) {
            n /= static_cast<i128>(g);
            d /= static_cast<i128>(g);
        }
        if (n == 0) d = 1;
        assign_reduced128(n, d);
    }

    void assign_mpq(mpq_class q) {
        q.canonicalize();
        const mpz_class& n = q.get_num();
        const mpz_class& d = q.get_den();
        if (n.fits_slong_p() && d.fits_slong_p() && n != to_mpz(std::numeric_limits<i64>::min())) {
            num_ = n.get_si();
            den_ = d.get_si();
            big_.reset();
        } else {
            num_ = 0;
            den_ = 1;
            big_ = std::make_unique<mpq_class>(std::move(q));
        }
    }
};

namespace detail {

// Splits a decimal literal into sign, digits and exponent; returns false on malformed input.
inline bool split_decimal(std::string_view s, bool& negative, std::string& digits, long& exponent) {
    negative = false;
    digits.clear();
    exponent = 0;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    bool any_digit = false;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        const char ch = s[i];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            any_digit = true;
            if (seen_point) --exponent;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            eneg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) return false;
        long e = 0;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            e = e * 10 + (s[i] - '0');
            if (e > 100000) return false;
        }
        exponent += eneg ? -e : e;
    }
    return i == s.size();
}

inline bool is_integer_literal(std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline mpz_class parse_mpz(std::string_view s) {
    std::string buf(s);
    if (!buf.empty() && buf[0] == '+') buf.erase(0, 1);
    return mpz_class(buf, 10);
}

}  // namespace detail

inline bool Rational::is_exact_literal(std::string_view text) noexcept {
    const auto s = detail::trim(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto n = s.substr(0, slash);
        const auto d = s.substr(slash + 1);
        if (!detail::is_integer_literal(n) || !detail::is_integer_literal(d)) return false;
        for (char ch : d)
            if (ch >= '1' && ch <= '9') return true;
        return false;  // zero denominator
    }
    bool neg;
    std::string digits;
    long exponent;
    return detail::split_decimal(s, neg, digits, exponent);
}

inline Rational Rational::parse(std::string_view text) {
    const auto s = detail::trim(text);
    if (!is_exact_literal(s))
        throw std::invalid_argument("not an exact rational literal: '" + std::string(text) + "'");
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const mpz_class n = detail::parse_mpz(s.substr(0, slash));
        const mpz_class d = detail::parse_mpz(s.substr(slash + 1));
        return Rational(mpq_class(n, d));
    }
    bool neg;
    std::string digits;
    long exponent;
    detail::split_decimal(s, neg, digits, exponent);
    mpz_class n(digits, 10);
    if (neg) n = -n;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) return Rational(mpq_class(n * scale));
    return Rational(mpq_class(n, scale));
}

}  // namespace walkmult
