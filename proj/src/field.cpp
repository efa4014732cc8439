#include "vdgv/field.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

namespace vdgv {

const char* error_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::AmbientTooSmall: return "AmbientTooSmall";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::CtxMismatch: return "CtxMismatch";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::NotInKernel: return "NotInKernel";
    case ErrorKind::NotSubspaceOfW: return "NotSubspaceOfW";
    case ErrorKind::NotSymplectic: return "NotSymplectic";
    case ErrorKind::StabilizerNotCompatible: return "StabilizerNotCompatible";
    case ErrorKind::NotOnCurve: return "NotOnCurve";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::NonRealCount: return "NonRealCount";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::KernelNotRational: return "KernelNotRational";
    case ErrorKind::NoTwistParameter: return "NoTwistParameter";
    case ErrorKind::PairingConditionFailed: return "PairingConditionFailed";
    case ErrorKind::OddDegree: return "OddDegree";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::RootsNotSimple: return "RootsNotSimple";
    case ErrorKind::FOneNonzero: return "FOneNonzero";
    case ErrorKind::FieldTooSmall: return "FieldTooSmall";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

namespace {

int degree(std::uint64_t a) { return a ? 63 - std::countl_zero(a) : -1; }

std::uint64_t clmul32(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r = 0;
    while (b) {
        int i = std::countr_zero(b);
        r ^= a << i;
        b &= b - 1;
    }
    return r;
}

std::uint64_t pmod(std::uint64_t a, std::uint64_t m)
{
    int dm = degree(m);
    for (int d = degree(a); d >= dm; d = degree(a))
        a ^= m << (d - dm);
    return a;
}

std::uint64_t pgcd(std::uint64_t a, std::uint64_t b)
{
    while (b) {
        std::uint64_t r = pmod(a, b);
        a = b;
        b = r;
    }
    return a;
}

std::vector<unsigned> prime_factors(unsigned n)
{
    std::vector<unsigned> ps;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    if (n > 1)
        ps.push_back(n);
    return ps;
}

// Fixed table: lexicographically least irreducible polynomial of each degree with constant term 1.
constexpr std::uint64_t kBuiltin[33] = {
    0,
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b,
    0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003, 0x1002b,
    0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
    0x2000009, 0x400001b, 0x8000027, 0x10000003, 0x20000005, 0x40000003, 0x80000009, 0x10000008d,
};

}  // namespace

std::string hex_string(std::uint64_t v)
{
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
}

bool Field::is_irreducible(std::uint64_t m)
{
    int n = degree(m);
    if (n < 1 || n > 32)
        return false;
    if (n == 1)
        return true;
    if (!(m & 1))
        return false;
    auto xpow = [&](unsigned e) {
        std::uint64_t y = 2;
        for (unsigned i = 0; i < e; ++i)
            y = pmod(clmul32(y, y), m);
        return y;
    };
    if (xpow(unsigned(n)) != pmod(2, m))
        return false;
    for (unsigned l : prime_factors(unsigned(n)))
        if (pgcd(m, xpow(unsigned(n) / l) ^ 2) != 1)
            return false;
    return true;
}

std::uint64_t Field::builtin_poly(unsigned N)
{
    require(N >= 1 && N <= 32, ErrorKind::DegreeMismatch, "built-in table covers 1 <= N <= 32");
    return kBuiltin[N];
}

FieldPtr Field::make(unsigned N, std::optional<std::uint64_t> poly, unsigned p_log)
{
    require(N >= 1 && N <= 32, ErrorKind::DegreeMismatch, "ambient degree must be in [1, 32]");
    require(p_log >= 1 && N % p_log == 0, ErrorKind::DegreeMismatch,
            "p = 2^" + std::to_string(p_log) + " is not a subfield of F_2^" + std::to_string(N));
    std::uint64_t m = poly ? *poly : builtin_poly(N);
    require(degree(m) == int(N), ErrorKind::DegreeMismatch,
            "defining polynomial " + hex_string(m) + " does not have degree " + std::to_string(N));
    require(is_irreducible(m), ErrorKind::ReduciblePolynomial, hex_string(m));
    return FieldPtr(new Field(N, m, p_log));
}

FieldPtr Field::parse(const std::string& spec)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    auto log2_of = [&](const std::string& s) -> unsigned {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &used, 10);
        } catch (const std::exception&) {
            fail(ErrorKind::ParseError, "bad number '" + s + "' in field spec '" + spec + "'");
        }
        if (used != s.size() || v < 2 || (v & (v - 1)))
            fail(ErrorKind::ParseError, "'" + s + "' is not a power of two >= 2 in '" + spec + "'");
        return unsigned(std::countr_zero(v));
    };
    if (parts[0].size() < 2 || parts[0][0] != 'F')
        fail(ErrorKind::ParseError, "field spec must start with F<2^N>: '" + spec + "'");
    unsigned N = log2_of(parts[0].substr(1));
    std::optional<std::uint64_t> poly;
    unsigned k = 1;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (p.rfind("p=", 0) == 0) {
            k = log2_of(p.substr(2));
        } else if (p.rfind("0x", 0) == 0 || p.rfind("0X", 0) == 0) {
            try {
                std::size_t used = 0;
                poly = std::stoull(p, &used, 16);
                if (used != p.size())
                    throw std::invalid_argument(p);
            } catch (const std::exception&) {
                fail(ErrorKind::ParseError, "bad polynomial '" + p + "'");
            }
        } else {
            fail(ErrorKind::ParseError, "unknown field spec component '" + p + "'");
        }
    }
    return make(N, poly, k);
}

Field::Field(unsigned N, std::uint64_t poly, unsigned p_log)
    : N_(N), poly_(poly), k_(p_log), mask_(N == 32 ? 0xffffffffu : ((Elem(1) << N) - 1))
{
    for (unsigned c = 0; c < 4; ++c)
        for (unsigned v = 0; v < 256; ++v) {
            std::uint64_t h = std::uint64_t(v) << (8 * c);
            red_[c][v] = Elem(pmod(h << N_, poly_));
        }
    // Images of basis vectors under successive squarings, then byte tables.
    std::vector<Elem> img(N_);
    for (unsigned b = 0; b < N_; ++b)
        img[b] = Elem(1) << b;
    frob_.resize(std::size_t(N_) * 4);
    for (unsigned j = 0; j < N_; ++j) {
        for (unsigned c = 0; c < 4; ++c) {
            auto& t = frob_[j * 4 + c];
            for (unsigned v = 0; v < 256; ++v) {
                Elem acc = 0;
                for (unsigned bit = 0; bit < 8; ++bit) {
                    unsigned b = 8 * c + bit;
                    if ((v >> bit & 1) && b < N_)
                        acc ^= img[b];
                }
                t[v] = acc;
            }
        }
        for (unsigned b = 0; b < N_; ++b)
            img[b] = reduce(clmul32(img[b], img[b]));
    }
}

Elem Field::reduce(std::uint64_t r) const
{
    Elem lo = Elem(r) & mask_;
    std::uint64_t h = r >> N_;
    return lo ^ red_[0][h & 0xff] ^ red_[1][(h >> 8) & 0xff] ^ red_[2][(h >> 16) & 0xff] ^
           red_[3][(h >> 24) & 0xff];
}

Elem Field::mul(Elem a, Elem b) const
{
    std::uint64_t t[16];
    t[0] = 0;
    t[1] = a;
    for (unsigned i = 2; i < 16; i += 2) {
        t[i] = t[i / 2] << 1;
        t[i + 1] = t[i] ^ a;
    }
    std::uint64_t r = 0;
    for (int s = 28; s >= 0; s -= 4)
        r = (r << 4) ^ t[(b >> s) & 15];
    return reduce(r);
}

Elem Field::pow(Elem a, std::uint64_t e) const
{
    Elem r = 1;
    while (e) {
        if (e & 1)
            r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Elem Field::inv(Elem a) const
{
    require(a != 0, ErrorKind::ZeroDivisor, "inverse of 0");
    return pow(a, size() - 2);
}

Elem Field::frob2(Elem x, long j) const
{
    long n = long(N_);
    long r = ((j % n) + n) % n;
    if (r == 0)
        return x;
    const auto* t = &frob_[std::size_t(r) * 4];
    return t[0][x & 0xff] ^ t[1][(x >> 8) & 0xff] ^ t[2][(x >> 16) & 0xff] ^ t[3][x >> 24];
}

bool Field::in_subfield(Elem x, unsigned deg) const
{
    return deg != 0 && frob2(x, long(deg)) == x;
}

Elem Field::trace(Elem x, unsigned from_deg, unsigned to_deg) const
{
    require(to_deg != 0 && from_deg % to_deg == 0 && divides_N(from_deg), ErrorKind::DegreeMismatch,
            "trace needs " + std::to_string(to_deg) + " | " + std::to_string(from_deg) + " | " +
                std::to_string(N_));
    require(in_subfield(x, from_deg), ErrorKind::DegreeMismatch,
            hex(x) + " is not in the subfield of degree " + std::to_string(from_deg));
    Elem s = 0;
    for (unsigned i = 0; i < from_deg / to_deg; ++i)
        s ^= frob2(x, long(to_deg * i));
    return s;
}

std::vector<Elem> Field::subfield_basis(unsigned deg) const
{
    require(divides_N(deg), ErrorKind::DegreeMismatch,
            std::to_string(deg) + " does not divide " + std::to_string(N_));
    std::vector<Elem> dom(N_);
    for (unsigned b = 0; b < N_; ++b)
        dom[b] = Elem(1) << b;
    auto lm = LinearMap::on(dom, [&](Elem x) { return frob2(x, long(deg)) ^ x; });
    F2Echelon e;
    for (Elem v : lm.kernel())
        e.insert(v);
    std::vector<Elem> out;
    for (auto r : e.rows())
        out.push_back(Elem(r));
    return out;
}

std::vector<Elem> Field::subfield_elements(unsigned deg) const
{
    auto basis = subfield_basis(deg);
    std::vector<Elem> out;
    out.reserve(std::size_t(1) << basis.size());
    Elem x = 0;
    out.push_back(0);
    for (std::uint64_t i = 1; i < (std::uint64_t(1) << basis.size()); ++i) {
        x ^= basis[std::countr_zero(i)];
        out.push_back(x);
    }
    return out;
}

std::string Field::hex(Elem x) const { return hex_string(x); }

Elem Field::parse_elem(const std::string& s) const
{
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    std::uint64_t v = 0;
    try {
        std::size_t used = 0;
        v = std::stoull(t, &used, 16);
        if (used != t.size())
            throw std::invalid_argument(t);
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "bad field element '" + s + "'");
    }
    if (v >> N_)
        fail(ErrorKind::ParseError, "element '" + s + "' has more than " + std::to_string(N_) + " bits");
    return Elem(v);
}

std::string Field::spec() const
{
    return "F" + std::to_string(size()) + ":" + hex_string(poly_) + ":p=" + std::to_string(1u << k_);
}

// ---- F2Echelon ----

bool F2Echelon::insert(std::uint64_t v)
{
    v = reduce(v);
    if (!v)
        return false;
    int b = degree(v);
    for (std::uint64_t p = pivots_; p; p &= p - 1) {
        int i = std::countr_zero(p);
        if (row_[i] >> b & 1)
            row_[i] ^= v;
    }
    row_[b] = v;
    pivots_ |= std::uint64_t(1) << b;
    ++dim_;
    return true;
}

std::uint64_t F2Echelon::reduce(std::uint64_t v) const
{
    for (std::uint64_t p = pivots_ & v; p; p &= p - 1) {
        int i = std::countr_zero(p);
        if (v >> i & 1)
            v ^= row_[i];
    }
    return v;
}

std::vector<std::uint64_t> F2Echelon::rows() const
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = pivots_; p; p &= p - 1)
        out.push_back(row_[std::countr_zero(p)]);
    return out;
}

// ---- LinearMap ----

LinearMap LinearMap::on(const std::vector<Elem>& basis, const std::function<Elem(Elem)>& f)
{
    LinearMap m;
    m.dom = basis;
    for (Elem b : basis)
        m.img.push_back(f(b));
    return m;
}

namespace {
// Rows are (image << 32) | domain element.
F2Echelon combined(const LinearMap& m)
{
    F2Echelon e;
    for (std::size_t i = 0; i < m.dom.size(); ++i)
        e.insert((std::uint64_t(m.img[i]) << 32) | m.dom[i]);
    return e;
}
}  // namespace

std::vector<Elem> LinearMap::kernel() const
{
    std::vector<Elem> out;
    for (auto r : combined(*this).rows())
        if ((r >> 32) == 0)
            out.push_back(Elem(r));
    return out;
}

std::vector<Elem> LinearMap::image() const
{
    F2Echelon e;
    for (Elem v : img)
        e.insert(v);
    std::vector<Elem> out;
    for (auto r : e.rows())
        out.push_back(Elem(r));
    return out;
}

Elem LinearMap::solve(Elem target) const
{
    auto r = combined(*this).reduce(std::uint64_t(target) << 32);
    if (r >> 32)
        fail(ErrorKind::NoSolution, "target " + hex_string(target) + " is not in the image");
    return Elem(r);
}

Elem solve_linear_f2(const LinearMap& map, Elem target) { return map.solve(target); }

// ---- Subspace ----

Subspace::Subspace(FieldPtr f, unsigned p_log) : f_(std::move(f)), k_(p_log)
{
    require(f_ && p_log >= 1 && f_->N() % p_log == 0, ErrorKind::DegreeMismatch,
            "subspace base field degree must divide the ambient degree");
}

namespace {
std::vector<Elem> fp_f2_basis(const Field& f, unsigned k)
{
    return f.subfield_basis(k);
}
}  // namespace

Subspace Subspace::from_f2_span(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs)
{
    Subspace s(f, p_log);
    for (Elem v : vs)
        s.ech_.insert(v);
    auto theta = fp_f2_basis(*f, p_log);
    for (auto r : s.ech_.rows())
        for (Elem t : theta)
            require(s.ech_.contains(f->mul(t, Elem(r))), ErrorKind::DegreeMismatch,
                    "span is not closed under F_" + std::to_string(1u << p_log));
    return s;
}

Subspace Subspace::fp_span(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs)
{
    Subspace s(f, p_log);
    auto theta = fp_f2_basis(*f, p_log);
    for (Elem v : vs)
        for (Elem t : theta)
            s.ech_.insert(f->mul(t, v));
    return s;
}

Subspace Subspace::from_fp_basis(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs)
{
    Subspace s = fp_span(f, p_log, vs);
    require(s.dim() == vs.size(), ErrorKind::ConditionViolated, "basis vectors are F_p-dependent");
    return s;
}

Subspace Subspace::subfield(FieldPtr f, unsigned deg, unsigned p_log)
{
    require(deg % p_log == 0, ErrorKind::DegreeMismatch, "subfield degree must be a multiple of p_log");
    auto b = f->subfield_basis(deg);
    return from_f2_span(f, p_log, b);
}

std::vector<Elem> Subspace::f2_basis() const
{
    std::vector<Elem> out;
    for (auto r : ech_.rows())
        out.push_back(Elem(r));
    return out;
}

std::vector<Elem> Subspace::fp_basis() const
{
    Subspace acc(f_, k_);
    auto theta = fp_f2_basis(*f_, k_);
    std::vector<Elem> out;
    for (Elem v : f2_basis()) {
        if (acc.contains(v))
            continue;
        out.push_back(v);
        for (Elem t : theta)
            acc.ech_.insert(f_->mul(t, v));
    }
    return out;
}

std::vector<Elem> Subspace::elements(std::uint64_t limit) const
{
    require(size() <= limit, ErrorKind::BudgetExceeded,
            "subspace of 2^" + std::to_string(dim_f2()) + " elements exceeds enumeration limit");
    auto b = f2_basis();
    std::vector<Elem> out;
    out.reserve(size());
    Elem x = 0;
    out.push_back(0);
    for (std::uint64_t i = 1; i < size(); ++i) {
        x ^= b[std::countr_zero(i)];
        out.push_back(x);
    }
    return out;
}

void Subspace::check_compatible(const Subspace& o) const
{
    require(f_->same_as(*o.f_), ErrorKind::CtxMismatch, "subspaces live in different fields");
    require(k_ == o.k_, ErrorKind::DegreeMismatch, "subspaces over different base fields");
}

Subspace Subspace::intersect(const Subspace& o) const
{
    check_compatible(o);
    F2Echelon z;
    for (auto r : ech_.rows())
        z.insert((r << 32) | r);
    for (auto r : o.ech_.rows())
        z.insert(r << 32);
    Subspace s(f_, k_);
    for (auto r : z.rows())
        if ((r >> 32) == 0)
            s.ech_.insert(r);
    return s;
}

Subspace Subspace::operator+(const Subspace& o) const
{
    check_compatible(o);
    Subspace s = *this;
    for (auto r : o.ech_.rows())
        s.ech_.insert(r);
    return s;
}

bool Subspace::subset_of(const Subspace& o) const
{
    check_compatible(o);
    for (auto r : ech_.rows())
        if (!o.contains(Elem(r)))
            return false;
    return true;
}

bool Subspace::operator==(const Subspace& o) const
{
    return f_->same_as(*o.f_) && k_ == o.k_ && ech_.rows() == o.ech_.rows();
}

std::vector<Elem> Subspace::complement_basis(const Subspace& sub) const
{
    check_compatible(sub);
    F2Echelon e;
    for (auto r : ech_.rows())
        e.insert(sub.ech_.reduce(r));
    std::vector<Elem> out;
    for (auto r : e.rows())
        out.push_back(Elem(r));
    return out;
}

std::string Subspace::to_string() const
{
    std::string s = "<";
    bool first = true;
    for (Elem v : fp_basis()) {
        if (!first)
            s += ", ";
        s += hex_string(v);
        first = false;
    }
    return s + ">";
}

Subspace kernel_of(const Subspace& dom, const std::function<Elem(Elem)>& f)
{
    auto lm = LinearMap::on(dom.f2_basis(), f);
    return Subspace::from_f2_span(dom.field(), dom.p_log(), lm.kernel());
}

Subspace image_of(const Subspace& dom, const std::function<Elem(Elem)>& f)
{
    auto lm = LinearMap::on(dom.f2_basis(), f);
    return Subspace::from_f2_span(dom.field(), dom.p_log(), lm.image());
}

// ---- Embedding ----

Embedding::Embedding(FieldPtr src, FieldPtr dst) : src_(std::move(src)), dst_(std::move(dst))
{
    unsigned d = src_->N();
    require(dst_->divides_N(d), ErrorKind::DegreeMismatch,
            "cannot embed F_2^" + std::to_string(d) + " into F_2^" + std::to_string(dst_->N()));
    std::uint64_t m = src_->poly();
    auto eval = [&](Elem r) {
        Elem acc = 0;
        for (int i = int(d); i >= 0; --i)
            acc = dst_->mul(acc, r) ^ Elem((m >> i) & 1);
        return acc;
    };
    std::optional<Elem> root;
    for (Elem r : dst_->subfield_elements(d))
        if (eval(r) == 0 && (!root || r < *root))
            root = r;
    require(root.has_value(), ErrorKind::Internal, "no root of the source polynomial in target");
    Elem pw = 1;
    for (unsigned i = 0; i < d; ++i) {
        img_.push_back(pw);
        pw = dst_->mul(pw, *root);
    }
    for (unsigned i = 0; i < d; ++i) {
        inverse_.dom.push_back(Elem(1) << i);
        inverse_.img.push_back(img_[i]);
    }
}

Elem Embedding::operator()(Elem x) const
{
    Elem acc = 0;
    for (unsigned i = 0; i < img_.size(); ++i)
        if (x >> i & 1)
            acc ^= img_[i];
    return acc;
}

Elem Embedding::back(Elem y) const { return inverse_.solve(y); }

}  // namespace vdgv
