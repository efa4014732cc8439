#include "vdgv/skew.hpp"

#include <cctype>

namespace vdgv {

SkewPoly::SkewPoly(FieldPtr f, unsigned p_log) : f_(std::move(f)), k_(p_log ? p_log : f_->p_log())
{
    require(f_->N() % k_ == 0, ErrorKind::DegreeMismatch, "tau base degree must divide N");
}

SkewPoly SkewPoly::term(FieldPtr f, Elem a, int i, unsigned p_log)
{
    SkewPoly s(std::move(f), p_log);
    s.set(i, a);
    return s;
}

SkewPoly SkewPoly::from_coeffs(FieldPtr f, const std::vector<Elem>& a, unsigned p_log)
{
    SkewPoly s(std::move(f), p_log);
    for (std::size_t i = 0; i < a.size(); ++i)
        s.set(int(i), a[i]);
    return s;
}

int SkewPoly::min_exp() const
{
    require(!c_.empty(), ErrorKind::ZeroPolynomial, "zero polynomial has no exponent range");
    return c_.begin()->first;
}

int SkewPoly::max_exp() const
{
    require(!c_.empty(), ErrorKind::ZeroPolynomial, "zero polynomial has no exponent range");
    return c_.rbegin()->first;
}

Elem SkewPoly::coeff(int i) const
{
    auto it = c_.find(i);
    return it == c_.end() ? 0 : it->second;
}

void SkewPoly::set(int i, Elem a)
{
    a &= f_->mask();
    if (a)
        c_[i] = a;
    else
        c_.erase(i);
}

std::vector<Elem> SkewPoly::coeff_vector() const
{
    if (c_.empty())
        return {};
    require(min_exp() >= 0, ErrorKind::DegreeMismatch, "negative exponents present");
    std::vector<Elem> out(std::size_t(max_exp()) + 1, 0);
    for (auto [i, a] : c_)
        out[std::size_t(i)] = a;
    return out;
}

void SkewPoly::check_compatible(const SkewPoly& o) const
{
    require(f_->same_as(*o.f_), ErrorKind::CtxMismatch, "skew polynomials over different fields");
    require(k_ == o.k_, ErrorKind::CtxMismatch, "skew polynomials with different tau");
}

SkewPoly SkewPoly::operator+(const SkewPoly& o) const
{
    check_compatible(o);
    SkewPoly r = *this;
    for (auto [i, a] : o.c_)
        r.set(i, r.coeff(i) ^ a);
    return r;
}

SkewPoly SkewPoly::operator*(const SkewPoly& o) const
{
    check_compatible(o);
    SkewPoly r(f_, k_);
    for (auto [i, a] : c_)
        for (auto [j, b] : o.c_)
            r.set(i + j, r.coeff(i + j) ^ f_->mul(a, f_->frob_p(b, i)));
    return r;
}

SkewPoly SkewPoly::adjoint() const
{
    SkewPoly r(f_, k_);
    for (auto [i, a] : c_)
        r.set(-i, f_->frob_p(a, -i));
    return r;
}

SkewPoly SkewPoly::scaled(Elem a) const
{
    SkewPoly r(f_, k_);
    for (auto [i, b] : c_)
        r.set(i, f_->mul(a, b));
    return r;
}

bool SkewPoly::operator==(const SkewPoly& o) const
{
    return f_->same_as(*o.f_) && k_ == o.k_ && c_ == o.c_;
}

Elem SkewPoly::operator()(Elem x) const
{
    Elem s = 0;
    for (auto [i, a] : c_)
        s ^= f_->mul(a, f_->frob_p(x, i));
    return s;
}

std::string SkewPoly::str() const
{
    if (c_.empty())
        return "0";
    std::string s;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!s.empty())
            s += " + ";
        s += hex_string(it->second) + "*t^" + std::to_string(it->first);
    }
    return s;
}

SkewPoly SkewPoly::parse(FieldPtr f, const std::string& text, unsigned p_log)
{
    SkewPoly r(f, p_log);
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t == "0")
        return r;
    std::size_t pos = 0;
    while (pos <= t.size()) {
        std::size_t end = t.find('+', pos);
        if (end == std::string::npos)
            end = t.size();
        std::string term = t.substr(pos, end - pos);
        if (term.empty())
            fail(ErrorKind::ParseError, "empty term in '" + text + "'");
        Elem a = 1;
        int e = 0;
        std::size_t star = term.find('*');
        std::string cpart = term, tpart;
        if (star != std::string::npos) {
            cpart = term.substr(0, star);
            tpart = term.substr(star + 1);
        } else if (term[0] == 't') {
            cpart.clear();
            tpart = term;
        }
        if (!cpart.empty())
            a = f->parse_elem(cpart);
        if (!tpart.empty()) {
            if (tpart == "t") {
                e = 1;
            } else if (tpart.rfind("t^", 0) == 0) {
                try {
                    std::size_t used = 0;
                    e = std::stoi(tpart.substr(2), &used);
                    if (used != tpart.size() - 2)
                        throw std::invalid_argument(tpart);
                } catch (const std::exception&) {
                    fail(ErrorKind::ParseError, "bad exponent in '" + term + "'");
                }
            } else {
                fail(ErrorKind::ParseError, "bad term '" + term + "'");
            }
        }
        r.set(e, r.coeff(e) ^ a);
        pos = end + 1;
    }
    return r;
}

Subspace kernel_in_subfield(const SkewPoly& f, unsigned deg)
{
    const auto& F = f.field();
    auto dom = Subspace::subfield(F, deg, f.p_log());
    return kernel_of(dom, [&](Elem x) { return f(x); });
}

Subspace kernel(const SkewPoly& f)
{
    require(!f.is_zero(), ErrorKind::ZeroPolynomial, "kernel of the zero polynomial");
    const auto& F = f.field();
    auto K = kernel_in_subfield(f, F->N());
    unsigned want = unsigned(f.span());
    if (K.dim() != want)
        fail(ErrorKind::AmbientTooSmall, "kernel of " + f.str() + " has dimension " + std::to_string(K.dim()) +
                                             " in F_2^" + std::to_string(F->N()) + ", expected " +
                                             std::to_string(want));
    return K;
}

SkewPoly from_subspace(const Subspace& W)
{
    SkewPoly f = SkewPoly::term(W.field(), 1, 0, W.p_log());
    const auto& F = *W.field();
    std::uint64_t pm1 = (std::uint64_t(1) << W.p_log()) - 1;
    for (Elem u : W.fp_basis()) {
        Elem beta = F.pow(f(u), pm1);
        f = SkewPoly::term(W.field(), 1, 1, W.p_log()) * f + f.scaled(beta);
    }
    require(kernel(f) == W, ErrorKind::Internal, "f_W does not vanish exactly on W");
    return f;
}

Normalized normalize(const SkewPoly& f)
{
    require(!f.is_zero(), ErrorKind::ZeroPolynomial, "normalize of the zero polynomial");
    const auto& F = *f.field();
    int r = f.min_exp(), s = f.max_exp();
    Elem a = f.coeff(s);
    Elem ainv = F.inv(a);
    SkewPoly g(f.field(), f.p_log());
    for (auto [i, c] : f.terms())
        g.set(i - r, F.frob_p(F.mul(c, ainv), -r));
    Subspace W = kernel(f);
    require(g == from_subspace(W), ErrorKind::Internal, "normalized form differs from f_W");
    return {a, r, W};
}

std::optional<SkewPoly> try_right_divide(const SkewPoly& f, const SkewPoly& g)
{
    require(!g.is_zero(), ErrorKind::ZeroDivisor, "division by the zero polynomial");
    f.check_compatible(g);
    const auto& F = *f.field();
    const FieldPtr& fp = f.field();
    unsigned k = f.p_log();
    if (f.is_zero())
        return SkewPoly(fp, k);
    int rg = g.min_exp(), d = g.span();
    Elem c = g.coeff(g.max_exp());
    // u = c tau^{rg}, u^{-1} = (c^{-1})^{p^{-rg}} tau^{-rg}
    SkewPoly uinv = SkewPoly::term(fp, F.frob_p(F.inv(c), -rg), -rg, k);
    SkewPoly g0 = uinv * g;
    SkewPoly rem = f, h(fp, k);
    int lowest = f.min_exp();
    while (!rem.is_zero()) {
        int s = rem.max_exp();
        if (s - d < lowest)
            break;
        SkewPoly qt = SkewPoly::term(fp, rem.coeff(s), s - d, k);
        h = h + qt;
        rem = rem + qt * g0;
    }
    if (!rem.is_zero())
        return std::nullopt;
    SkewPoly res = h * uinv;
    require(res * g == f, ErrorKind::Internal, "right division round trip failed");
    return res;
}

SkewPoly right_divide(const SkewPoly& f, const SkewPoly& g)
{
    auto h = try_right_divide(f, g);
    if (!h)
        fail(ErrorKind::NotDivisible, "(" + f.str() + ") is not a right multiple of (" + g.str() + ")");
    return *h;
}

bool kernel_within_subfield(const SkewPoly& f, unsigned deg)
{
    require(!f.is_zero(), ErrorKind::ZeroPolynomial, "kernel of the zero polynomial");
    require(deg % f.p_log() == 0, ErrorKind::DegreeMismatch, "subfield degree must be a multiple of p_log");
    SkewPoly m = SkewPoly::term(f.field(), 1, int(deg / f.p_log()), f.p_log()) +
                 SkewPoly::term(f.field(), 1, 0, f.p_log());
    return try_right_divide(m, f).has_value();
}

unsigned kernel_splitting_degree(const SkewPoly& f, unsigned over_deg, unsigned cap)
{
    require(over_deg % f.p_log() == 0, ErrorKind::DegreeMismatch, "over_deg must be a multiple of p_log");
    for (unsigned m = 1; m <= cap; ++m)
        if (kernel_within_subfield(f, over_deg * m))
            return m;
    fail(ErrorKind::CapExceeded, "kernel of " + f.str() + " does not split within degree " + std::to_string(cap));
}

SymmetricFactor factor_through_symmetric(const SkewPoly& E, const Subspace& W)
{
    require(E == E.adjoint(), ErrorKind::NotSelfAdjoint, E.str());
    const auto& F = *E.field();
    SkewPoly fW = from_subspace(W);
    auto h = try_right_divide(E, fW);
    if (!h)
        fail(ErrorKind::NotIsotropic, W.to_string() + " is not inside ker E");
    SkewPoly hs = h->adjoint();
    Elem a = hs.coeff(hs.max_exp());
    if (hs != fW.scaled(a))
        fail(ErrorKind::NotIsotropic, W.to_string() + " is not maximal totally isotropic");
    SkewPoly Fr = fW.scaled(F.sqrt(a));
    if (Fr.adjoint() * Fr != E)
        fail(ErrorKind::NotIsotropic, "F*F does not reproduce E");
    return {Fr, a};
}

}  // namespace vdgv
