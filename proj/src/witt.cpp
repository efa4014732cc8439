#include "vdgv/witt.hpp"

#include <cctype>

namespace vdgv {

std::string GaussUnit::str() const
{
    static const char* names[4] = {"1", "i", "-1", "-i"};
    return names[k & 3];
}

GaussInt GaussInt::from(GaussUnit u)
{
    static const GaussInt vals[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return vals[u.k & 3];
}

GaussInt GaussInt::operator*(const GaussInt& o) const
{
    return {re * o.re - im * o.im, re * o.im + im * o.re};
}

GaussInt GaussInt::pow(unsigned e) const
{
    GaussInt r(1), b = *this;
    while (e) {
        if (e & 1)
            r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string GaussInt::str() const
{
    std::string s = std::to_string(re);
    s += im < 0 ? "-" : "+";
    s += std::to_string(im < 0 ? -im : im);
    return s + "i";
}

GaussInt GaussInt::parse(const std::string& s)
{
    // a+bi or a-bi with optional leading sign on a
    std::size_t pos = s.find_first_of("+-", 1);
    if (pos == std::string::npos || s.empty() || s.back() != 'i')
        fail(ErrorKind::ParseError, "bad Gaussian integer '" + s + "'");
    try {
        std::int64_t r = std::stoll(s.substr(0, pos));
        std::int64_t i = std::stoll(s.substr(pos + 1, s.size() - pos - 2));
        return {r, s[pos] == '-' ? -i : i};
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "bad Gaussian integer '" + s + "'");
    }
}

WittPair witt_add(const Field& f, WittPair x, WittPair y)
{
    return {x.a ^ y.a, x.b ^ y.b ^ f.mul(x.a, y.a)};
}

WittPair witt_mul(const Field& f, WittPair x, WittPair y)
{
    return {f.mul(x.a, y.a), f.mul(f.sqr(x.a), y.b) ^ f.mul(f.sqr(y.a), x.b)};
}

WittPair witt_neg(const Field& f, WittPair x)
{
    // (a,b) + (a, b + a^2) = (0, 0)
    return {x.a, x.b ^ f.sqr(x.a)};
}

WittPair witt_trace(const Field& f, WittPair x, unsigned from_deg, unsigned to_deg)
{
    require(to_deg != 0 && from_deg % to_deg == 0 && f.divides_N(from_deg), ErrorKind::DegreeMismatch,
            "Witt trace needs " + std::to_string(to_deg) + " | " + std::to_string(from_deg) + " | N");
    WittPair s{0, 0};
    for (unsigned i = 0; i < from_deg / to_deg; ++i) {
        long j = long(to_deg * i);
        s = witt_add(f, s, {f.frob2(x.a, j), f.frob2(x.b, j)});
    }
    return s;
}

GaussUnit xi2(WittPair x)
{
    require(x.a <= 1 && x.b <= 1, ErrorKind::DegreeMismatch, "xi_2 takes a Witt vector over F_2");
    return GaussUnit{(x.a + 2 * x.b) & 3};
}

GaussUnit xi_q(const Field& f, WittPair x, unsigned q_deg) { return xi2(witt_trace(f, x, q_deg, 1)); }

GaussUnit Q_q(const Field& f, Elem x, unsigned q_deg)
{
    require(f.divides_N(q_deg), ErrorKind::DegreeMismatch, "q is not a subfield of the ambient");
    require(f.in_subfield(x, q_deg), ErrorKind::DegreeMismatch, f.hex(x) + " is not in F_q");
    // running Witt sum of (x^{2^i}, 0): first coordinate is the trace, second the
    // second elementary symmetric function of the conjugates
    Elem a = 0, b = 0;
    for (unsigned i = 0; i < q_deg; ++i) {
        Elem c = f.frob2(x, long(i));
        b ^= f.mul(a, c);
        a ^= c;
    }
    return xi2({a, b});
}

GaussUnit psi_q(const Field& f, Elem x, unsigned q_deg)
{
    Elem t = f.trace(x, q_deg, 1);
    return GaussUnit{2 * t};
}

GaussUnit B_Q(const Field& f, Elem x, Elem y, unsigned q_deg) { return psi_q(f, f.mul(x, y), q_deg); }

GaussInt hd_sum(const Field& f, unsigned deg)
{
    std::int64_t cnt[4] = {0, 0, 0, 0};
    for (Elem x : f.subfield_elements(deg))
        ++cnt[Q_q(f, x, deg).k];
    return {-(cnt[0] - cnt[2]), -(cnt[1] - cnt[3])};
}

}  // namespace vdgv
