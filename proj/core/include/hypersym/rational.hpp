#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace hypersym {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const { return Rational(-num_, den_, unchecked{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        BigInt l = a.num_ * b.den_, r = b.num_ * a.den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Integer power; e may be negative (requires nonzero base).
    Rational pow_int(long long e) const {
        if (e == 0) return Rational(1);
        if (num_ == 0) {
            if (e < 0) throw std::domain_error("zero to negative power");
            return Rational(0);
        }
        BigInt n = num_, d = den_;
        bool neg = e < 0;
        unsigned long long k = neg ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        BigInt rn = boost::multiprecision::pow(n, static_cast<unsigned>(k));
        BigInt rd = boost::multiprecision::pow(d, static_cast<unsigned>(k));
        if (neg) return Rational(rd, rn);
        return Rational(rn, rd, unchecked{});
    }

    /// Exact k-th root if it exists (k >= 1); nullopt otherwise.
    std::optional<Rational> root(long long k) const {
        if (k <= 0) return std::nullopt;
        if (k == 1) return *this;
        if (num_ < 0) return std::nullopt;
        auto iroot = [](const BigInt& v, long long kk) -> std::optional<BigInt> {
            if (v == 0) return BigInt(0);
            if (v == 1) return BigInt(1);
            BigInt lo = 1, hi = v;
            while (lo < hi) {
                BigInt mid = (lo + hi + 1) / 2;
                BigInt p = boost::multiprecision::pow(mid, static_cast<unsigned>(kk));
                if (p <= v) lo = mid; else hi = mid - 1;
            }
            if (boost::multiprecision::pow(lo, static_cast<unsigned>(kk)) == v) return lo;
            return std::nullopt;
        };
        auto rn = iroot(num_, k);
        if (!rn) return std::nullopt;
        auto rd = iroot(den_, k);
        if (!rd) return std::nullopt;
        return Rational(*rn, *rd, unchecked{});
    }

    /// Largest integer <= value.
    BigInt floor() const {
        if (den_ == 1) return num_;
        BigInt q = num_ / den_;
        if (num_ < 0) q -= 1;
        return q;
    }

    double to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

    /// Fits in long long?
    std::optional<long long> to_int() const {
        if (den_ != 1) return std::nullopt;
        if (num_ > std::numeric_limits<long long>::max() || num_ < std::numeric_limits<long long>::min())
            return std::nullopt;
        return num_.convert_to<long long>();
    }

    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    size_t hash() const {
        std::hash<std::string> h;
        return h(num_.str()) * 1315423911u ^ h(den_.str());
    }

private:
    struct unchecked {};
    Rational(BigInt n, BigInt d, unchecked) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

} // namespace hypersym
