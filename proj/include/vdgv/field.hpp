#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vdgv/errors.hpp"

namespace vdgv {

// Bit pattern of an element in the polynomial basis; bit i is the coefficient of x^i.
using Elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_{2^N}, N <= 32, with a distinguished base field F_p, p = 2^k, k | N.
// Immutable after construction.
class Field {
public:
    static FieldPtr make(unsigned N, std::optional<std::uint64_t> poly = std::nullopt, unsigned p_log = 1);
    // "F<2^N>[:hexpoly][:p=2^k]"
    static FieldPtr parse(const std::string& spec);
    // Lexicographically least irreducible polynomial of degree N with nonzero constant term.
    static std::uint64_t builtin_poly(unsigned N);
    static bool is_irreducible(std::uint64_t poly);

    unsigned N() const { return N_; }
    std::uint64_t poly() const { return poly_; }
    unsigned p_log() const { return k_; }
    Elem mask() const { return mask_; }
    std::uint64_t size() const { return std::uint64_t(1) << N_; }
    std::string spec() const;
    bool same_as(const Field& o) const { return N_ == o.N_ && poly_ == o.poly_ && k_ == o.k_; }

    static Elem add(Elem a, Elem b) { return a ^ b; }
    Elem mul(Elem a, Elem b) const;
    Elem sqr(Elem a) const { return frob2(a, 1); }
    Elem pow(Elem a, std::uint64_t e) const;
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    // x^{2^j} for any integer j (negative j is the inverse Frobenius).
    Elem frob2(Elem x, long j) const;
    // x^{p^i}, p = 2^k.
    Elem frob_p(Elem x, long i) const { return frob2(x, long(k_) * i); }
    Elem sqrt(Elem x) const { return frob2(x, -1); }

    bool divides_N(unsigned d) const { return d != 0 && N_ % d == 0; }
    bool in_subfield(Elem x, unsigned deg) const;
    Elem trace(Elem x, unsigned from_deg, unsigned to_deg) const;
    // Canonical F_2 basis of the subfield of degree deg (fully reduced echelon, ascending pivots).
    std::vector<Elem> subfield_basis(unsigned deg) const;
    // Every element of the subfield of degree deg, in Gray-code order.
    std::vector<Elem> subfield_elements(unsigned deg) const;

    std::string hex(Elem x) const;
    Elem parse_elem(const std::string& s) const;

private:
    Field(unsigned N, std::uint64_t poly, unsigned p_log);
    Elem reduce(std::uint64_t r) const;

    unsigned N_;
    std::uint64_t poly_;
    unsigned k_;
    Elem mask_;
    // Linear maps x -> x^{2^j}, j in [0, N), as four byte-indexed tables each.
    std::vector<std::array<Elem, 256>> frob_;
    // x^N * h mod poly for the high half of a product, byte-indexed.
    std::array<std::array<Elem, 256>, 4> red_{};
};

std::string hex_string(std::uint64_t v);

// Row-reduced echelon form over F_2 on words of up to 64 bits.
// Rows are kept fully reduced, so reduce() returns the least element of a coset.
class F2Echelon {
public:
    bool insert(std::uint64_t v);
    std::uint64_t reduce(std::uint64_t v) const;
    bool contains(std::uint64_t v) const { return reduce(v) == 0; }
    unsigned dim() const { return dim_; }
    // Rows in ascending pivot order.
    std::vector<std::uint64_t> rows() const;

private:
    std::array<std::uint64_t, 64> row_{};
    std::uint64_t pivots_ = 0;
    unsigned dim_ = 0;
};

// An F_2-linear map given on a list of independent domain vectors.
struct LinearMap {
    std::vector<Elem> dom;
    std::vector<Elem> img;

    static LinearMap on(const std::vector<Elem>& basis, const std::function<Elem(Elem)>& f);
    std::vector<Elem> kernel() const;
    std::vector<Elem> image() const;
    // Least preimage in bit order; NoSolution when target is not in the image.
    Elem solve(Elem target) const;
};

Elem solve_linear_f2(const LinearMap& map, Elem target);

// An F_p-subspace of the ambient field, stored as its canonical F_2 echelon form.
class Subspace {
public:
    Subspace(FieldPtr f, unsigned p_log);
    // The F_2 span of vs, which must already be closed under F_p (DegreeMismatch otherwise).
    static Subspace from_f2_span(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs);
    // The F_p span of vs.
    static Subspace fp_span(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs);
    // vs must be F_p-independent.
    static Subspace from_fp_basis(FieldPtr f, unsigned p_log, const std::vector<Elem>& vs);
    static Subspace subfield(FieldPtr f, unsigned deg, unsigned p_log);

    const FieldPtr& field() const { return f_; }
    unsigned p_log() const { return k_; }
    unsigned dim() const { return ech_.dim() / k_; }
    unsigned dim_f2() const { return ech_.dim(); }
    std::uint64_t size() const { return std::uint64_t(1) << ech_.dim(); }
    bool contains(Elem x) const { return ech_.contains(x); }
    Elem reduce(Elem x) const { return Elem(ech_.reduce(x)); }
    std::vector<Elem> f2_basis() const;
    // Canonical F_p basis: greedy over the ascending echelon rows.
    std::vector<Elem> fp_basis() const;
    std::vector<Elem> elements(std::uint64_t limit = std::uint64_t(1) << 24) const;

    Subspace intersect(const Subspace& o) const;
    Subspace operator+(const Subspace& o) const;
    bool subset_of(const Subspace& o) const;
    bool operator==(const Subspace& o) const;
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    // Least representatives of the nonzero cosets of sub inside this space, as an F_2 basis.
    std::vector<Elem> complement_basis(const Subspace& sub) const;

    void check_compatible(const Subspace& o) const;
    std::string to_string() const;

private:
    FieldPtr f_;
    unsigned k_;
    F2Echelon ech_;
};

Subspace kernel_of(const Subspace& dom, const std::function<Elem(Elem)>& f);
Subspace image_of(const Subspace& dom, const std::function<Elem(Elem)>& f);

// Field embedding F_{2^d} -> F_{2^N}, d | N, sending x to the least root of the source polynomial.
class Embedding {
public:
    Embedding(FieldPtr src, FieldPtr dst);
    Elem operator()(Elem x) const;
    Elem back(Elem y) const;
    const FieldPtr& src() const { return src_; }
    const FieldPtr& dst() const { return dst_; }

private:
    FieldPtr src_, dst_;
    std::vector<Elem> img_;
    LinearMap inverse_;
};

}  // namespace vdgv
