#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "walkmult/rational.hpp"

namespace walkmult {

/// Numerical thresholds used whenever a computation runs in floating point.
struct Tolerance {
    double tol_zero = 1e-9;         // absolute zero threshold after scaling
    double tol_sym = 1e-12;         // symmetry check
    double tol_eig_cluster = 1e-8;  // eigenvalue grouping width, relative to spectral radius

    void validate() const {
        if (!(tol_zero > 0) || !(tol_sym > 0) || !(tol_eig_cluster > 0))
            throw std::invalid_argument("Tolerance: all thresholds must be strictly positive");
    }
};

enum class ScalarMode { rational, floating };

inline std::string_view mode_name(ScalarMode m) { return m == ScalarMode::rational ? "rational" : "float"; }

inline ScalarMode parse_mode(std::string_view s) {
    if (s == "rational") return ScalarMode::rational;
    if (s == "float") return ScalarMode::floating;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected rational|float)");
}

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr ScalarMode mode = ScalarMode::rational;

    static bool is_zero(const Rational& x, const Tolerance&) { return x.is_zero(); }
    static bool equal(const Rational& a, const Rational& b, const Tolerance&) { return a == b; }
    static double to_double(const Rational& x) { return x.to_double(); }
    static Rational from_rational(const Rational& x) { return x; }
    static Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
    static std::string to_string(const Rational& x) { return x.str(); }
};

/// Shortest round-trip decimal representation.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr ScalarMode mode = ScalarMode::floating;

    static bool is_zero(double x, const Tolerance& tol) { return std::abs(x) <= tol.tol_zero; }
    static bool equal(double a, double b, const Tolerance& tol) {
        return std::abs(a - b) <= tol.tol_zero * std::max({1.0, std::abs(a), std::abs(b)});
    }
    static double to_double(double x) { return x; }
    static double from_rational(const Rational& x) { return x.to_double(); }
    static double abs(double x) { return std::abs(x); }
    static std::string to_string(double x) { return format_double(x); }
};

template <class T>
concept Scalar = requires(const T& a, const T& b) {
    { a + b } -> std::convertible_to<T>;
    { a * b } -> std::convertible_to<T>;
    { a - b } -> std::convertible_to<T>;
    { scalar_traits<T>::exact } -> std::convertible_to<bool>;
};

inline bool is_zero_exact(const Rational& x) { return x.is_zero(); }
inline bool is_zero_exact(double x) { return x == 0.0; }

/// Parses a weight string into a double; accepts every exact literal plus
/// anything std::from_chars understands (inf, nan, hex floats).
inline double parse_double(std::string_view text) {
    const auto s = detail::trim(text);
    if (Rational::is_exact_literal(s)) return Rational::parse(s).to_double();
    std::string_view body = s;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double v = 0;
    auto fmt = std::chars_format::general;
    bool neg = false;
    if (!body.empty() && body.front() == '-') {
        neg = true;
        body.remove_prefix(1);
    }
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        body.remove_prefix(2);
        fmt = std::chars_format::hex;
    }
    const auto res = std::from_chars(body.data(), body.data() + body.size(), v, fmt);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size())
        throw std::invalid_argument("malformed weight '" + std::string(text) + "'");
    return neg ? -v : v;
}

template <class T>
T parse_scalar(std::string_view text) {
    if constexpr (std::same_as<T, Rational>)
        return Rational::parse(text);
    else
        return parse_double(text);
}

}  // namespace walkmult
