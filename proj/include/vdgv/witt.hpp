#pragma once

#include <cstdint>
#include <string>

#include "vdgv/field.hpp"

namespace vdgv {

// i^k, k mod 4.
struct GaussUnit {
    unsigned k = 0;

    static GaussUnit i_pow(long e) { return GaussUnit{unsigned(((e % 4) + 4) % 4)}; }
    GaussUnit operator*(GaussUnit o) const { return GaussUnit{(k + o.k) & 3}; }
    GaussUnit inv() const { return GaussUnit{(4 - k) & 3}; }
    GaussUnit operator-() const { return GaussUnit{(k + 2) & 3}; }
    bool operator==(const GaussUnit&) const = default;
    std::string str() const;
};

struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    GaussInt() = default;
    GaussInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}
    static GaussInt from(GaussUnit u);

    GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
    GaussInt operator-() const { return {-re, -im}; }
    GaussInt operator*(const GaussInt& o) const;
    GaussInt& operator+=(const GaussInt& o) { return *this = *this + o; }
    bool operator==(const GaussInt&) const = default;
    GaussInt conj() const { return {re, -im}; }
    std::int64_t norm() const { return re * re + im * im; }
    GaussInt pow(unsigned e) const;
    // "a+bi" / "a-bi"
    std::string str() const;
    static GaussInt parse(const std::string& s);
};

inline bool operator<(const GaussInt& a, const GaussInt& b)
{
    return a.re != b.re ? a.re < b.re : a.im < b.im;
}

// Length-2 Witt vector over an F_2-algebra.
struct WittPair {
    Elem a = 0;
    Elem b = 0;
    bool operator==(const WittPair&) const = default;
};

WittPair witt_add(const Field& f, WittPair x, WittPair y);
WittPair witt_mul(const Field& f, WittPair x, WittPair y);
WittPair witt_neg(const Field& f, WittPair x);
// Witt sum of (x^{r^i}, y^{r^i}) over i < from/to, r = 2^{to_deg}.
WittPair witt_trace(const Field& f, WittPair x, unsigned from_deg, unsigned to_deg);

// W_2(F_2) = Z/4 with (1,0) -> i.
GaussUnit xi2(WittPair x);
GaussUnit xi_q(const Field& f, WittPair x, unsigned q_deg);
GaussUnit Q_q(const Field& f, Elem x, unsigned q_deg);
GaussUnit psi_q(const Field& f, Elem x, unsigned q_deg);
GaussUnit B_Q(const Field& f, Elem x, Elem y, unsigned q_deg);

// -sum_{x in F_{2^deg}} Q(x), by direct summation.
GaussInt hd_sum(const Field& f, unsigned deg);

}  // namespace vdgv
