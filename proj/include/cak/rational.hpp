#ifndef CAK_RATIONAL_HPP
#define CAK_RATIONAL_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cak {

/// Exact rational scalar. Thin alias over GMP's canonicalizing rational;
/// everything in the symbolic layer runs on these, never on doubles.
using Rational = mpq_class;

inline Rational ratFromLong(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or q = 0.
inline Rational ratParse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    mpq_class r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string ratToString(const Rational& r) { return r.get_str(); }

inline bool ratIsInteger(const Rational& r) { return r.get_den() == 1; }

/// Integer power with rational base; e < 0 requires b != 0.
inline Rational ratPow(const Rational& b, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        if (b == 0) throw std::domain_error("ratPow: 0 to negative power");
        return ratPow(Rational(1) / b, -e);
    }
    Rational acc(1), base(b);
    long n = e;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

/// Gaussian rational a + b*i. Closed under +,-,*,/ (division by nonzero); exact.
struct ComplexRational {
    Rational re, im;

    ComplexRational() : re(0), im(0) {}
    ComplexRational(Rational r) : re(std::move(r)), im(0) {}
    ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    ComplexRational(long r) : re(r), im(0) {}

    static ComplexRational i() { return ComplexRational(Rational(0), Rational(1)); }
    /// i^k for any integer k.
    static ComplexRational iPow(long k) {
        switch (((k % 4) + 4) % 4) {
            case 0: return ComplexRational(1);
            case 1: return i();
            case 2: return ComplexRational(-1);
            default: return ComplexRational(Rational(0), Rational(-1));
        }
    }

    bool isZero() const { return re == 0 && im == 0; }

    ComplexRational operator-() const { return {-re, -im}; }
    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ComplexRational& operator*=(const ComplexRational& o) { return *this = *this * o; }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        Rational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("ComplexRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

    std::complex<double> toComplexDouble() const { return {re.get_d(), im.get_d()}; }
};

inline ComplexRational crPow(const ComplexRational& b, long e) {
    if (e < 0) return ComplexRational(1) / crPow(b, -e);
    ComplexRational acc(1), base(b);
    long n = e;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

}  // namespace cak

#endif
