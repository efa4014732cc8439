#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "vdgv/field.hpp"

using namespace vdgv;

namespace {

// schoolbook product reduced bit by bit
Elem slow_mul(Elem a, Elem b, std::uint64_t poly, unsigned N)
{
    std::uint64_t r = 0;
    for (unsigned i = 0; i < N; ++i)
        if (b >> i & 1)
            r ^= std::uint64_t(a) << i;
    for (int i = 2 * int(N) - 2; i >= int(N); --i)
        if (r >> i & 1)
            r ^= poly << (i - int(N));
    return Elem(r);
}

// trial division by every polynomial of degree <= N/2
bool irreducible_by_trial(std::uint64_t poly)
{
    int n = 63 - __builtin_clzll(poly);
    auto deg = [](std::uint64_t v) { return 63 - __builtin_clzll(v); };
    for (std::uint64_t d = 2; deg(d) <= n / 2; ++d) {
        std::uint64_t r = poly;
        while (r && deg(r) >= deg(d))
            r ^= d << (deg(r) - deg(d));
        if (r == 0)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("built-in polynomials are irreducible")
{
    for (unsigned N = 1; N <= 32; ++N)
        CHECK(Field::is_irreducible(Field::builtin_poly(N)));
    for (unsigned N = 1; N <= 20; ++N)
        CHECK(irreducible_by_trial(Field::builtin_poly(N)));
}

TEST_CASE("built-in polynomial is the least irreducible one with constant term 1")
{
    for (unsigned N = 2; N <= 14; ++N) {
        std::uint64_t first = 0;
        for (std::uint64_t c = (std::uint64_t(1) << N) | 1; !first; c += 2)
            if (irreducible_by_trial(c))
                first = c;
        CHECK(Field::builtin_poly(N) == first);
    }
}

TEST_CASE("Rabin test agrees with trial division")
{
    for (std::uint64_t c = 2; c < (1u << 13); ++c)
        CHECK(Field::is_irreducible(c) == irreducible_by_trial(c));
}

TEST_CASE("multiplication matches the schoolbook product")
{
    std::mt19937_64 rng(7);
    for (unsigned N : {1u, 2u, 4u, 8u, 12u, 16u, 24u, 31u, 32u}) {
        auto f = Field::make(N);
        for (int i = 0; i < 2000; ++i) {
            Elem a = Elem(rng()) & f->mask(), b = Elem(rng()) & f->mask();
            REQUIRE(f->mul(a, b) == slow_mul(a, b, f->poly(), N));
        }
    }
}

TEST_CASE("exhaustive field axioms over F_16")
{
    auto f = Field::make(4);
    for (Elem a = 0; a < 16; ++a) {
        if (a)
            CHECK(f->mul(a, f->inv(a)) == 1);
        for (Elem b = 0; b < 16; ++b) {
            CHECK(f->mul(a, b) == f->mul(b, a));
            for (Elem c = 0; c < 16; ++c) {
                CHECK(f->mul(a, b ^ c) == (f->mul(a, b) ^ f->mul(a, c)));
                CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
            }
        }
    }
    CHECK_THROWS_AS(f->inv(0), Error);
}

TEST_CASE("Frobenius powers for every integer exponent")
{
    std::mt19937_64 rng(11);
    for (unsigned N : {3u, 8u, 12u, 20u}) {
        auto f = Field::make(N);
        for (int i = 0; i < 200; ++i) {
            Elem x = Elem(rng()) & f->mask();
            Elem y = x;
            for (long j = 0; j <= long(N) + 2; ++j) {
                CHECK(f->frob2(x, j) == y);
                CHECK(f->frob2(y, -j) == x);
                y = f->mul(y, y);
            }
            CHECK(f->frob2(x, long(N)) == x);
            CHECK(f->sqr(f->sqrt(x)) == x);
        }
    }
}

TEST_CASE("traces: direct sum of conjugates and transitivity")
{
    std::mt19937_64 rng(3);
    auto f = Field::make(12, std::nullopt, 2);
    for (int i = 0; i < 300; ++i) {
        Elem x = Elem(rng()) & f->mask();
        Elem s = 0;
        for (long j = 0; j < 12; ++j)
            s ^= f->frob2(x, j);
        CHECK(s == f->trace(x, 12, 1));
        for (unsigned d : {2u, 4u, 6u})
            CHECK(f->trace(f->trace(x, 12, d), d, 1) == f->trace(x, 12, 1));
        CHECK(f->in_subfield(f->trace(x, 12, 4), 4));
    }
    CHECK_THROWS_AS(f->trace(3, 12, 5), Error);
}

TEST_CASE("subfields")
{
    auto f = Field::make(12);
    for (unsigned d : {1u, 2u, 3u, 4u, 6u, 12u}) {
        auto b = f->subfield_basis(d);
        CHECK(b.size() == d);
        auto els = f->subfield_elements(d);
        CHECK(els.size() == (std::size_t(1) << d));
        std::set<Elem> uniq(els.begin(), els.end());
        CHECK(uniq.size() == els.size());
        for (Elem x : els)
            CHECK(f->frob2(x, d) == x);
    }
    // F_16 ∩ F_64 = F_4 inside F_4096
    std::size_t common = 0;
    for (Elem x = 0; x < 4096; ++x)
        common += f->in_subfield(x, 4) && f->in_subfield(x, 6);
    CHECK(common == 4);
}

TEST_CASE("field spec parsing")
{
    auto f = Field::parse("F16:0x13:p=4");
    CHECK(f->N() == 4);
    CHECK(f->poly() == 0x13);
    CHECK(f->p_log() == 2);
    CHECK(Field::parse(f->spec())->same_as(*f));
    CHECK(Field::parse("F256")->poly() == 0x11b);
    CHECK_THROWS_AS(Field::parse("G16"), Error);
    CHECK_THROWS_AS(Field::parse("F12"), Error);
    try {
        Field::make(4, 0x15);
        FAIL("reducible polynomial accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ReduciblePolynomial);
    }
    CHECK(f->parse_elem("0xf") == 15);
    CHECK_THROWS_AS(f->parse_elem("0x1f"), Error);
}

TEST_CASE("echelon form keeps least coset representatives")
{
    F2Echelon e;
    CHECK(e.insert(0b1100));
    CHECK(e.insert(0b0110));
    CHECK(!e.insert(0b1010));
    CHECK(e.dim() == 2);
    // brute force: least element of v + span
    for (std::uint64_t v = 0; v < 16; ++v) {
        std::uint64_t best = v;
        for (std::uint64_t s : {0ull, 0b1100ull, 0b0110ull, 0b1010ull})
            best = std::min(best, v ^ s);
        CHECK(e.reduce(v) == best);
    }
}

TEST_CASE("linear maps: kernel, image and least preimage")
{
    auto f = Field::make(8);
    auto basis = f->subfield_basis(8);
    auto map = LinearMap::on(basis, [&](Elem x) { return f->sqr(x) ^ x; });
    auto ker = map.kernel();
    CHECK(ker.size() == 1);  // {0, 1}
    CHECK(map.image().size() == 7);
    for (Elem y = 0; y < 256; ++y) {
        bool in_image = f->trace(y, 8, 1) == 0;
        if (in_image) {
            Elem x = solve_linear_f2(map, y);
            CHECK((f->sqr(x) ^ x) == y);
            Elem least = 256;
            for (Elem z = 0; z < 256; ++z)
                if ((f->sqr(z) ^ z) == y)
                    least = std::min(least, z);
            CHECK(x == least);
        } else {
            CHECK_THROWS_AS(solve_linear_f2(map, y), Error);
        }
    }
}

TEST_CASE("subspace operations against element sets")
{
    auto f = Field::make(8, std::nullopt, 2);
    std::mt19937_64 rng(5);
    auto f4 = f->subfield_elements(2);
    auto as_set = [](const Subspace& s) {
        auto v = s.elements();
        return std::set<Elem>(v.begin(), v.end());
    };
    for (int it = 0; it < 60; ++it) {
        std::vector<Elem> a{Elem(rng() & 255), Elem(rng() & 255)}, b{Elem(rng() & 255), Elem(rng() & 255)};
        auto A = Subspace::fp_span(f, 2, a), B = Subspace::fp_span(f, 2, b);
        auto SA = as_set(A), SB = as_set(B);
        for (Elem x : SA)
            for (Elem lam : f4)
                CHECK(SA.count(f->mul(lam, x)));
        std::set<Elem> inter;
        for (Elem x : SA)
            if (SB.count(x))
                inter.insert(x);
        CHECK(as_set(A.intersect(B)) == inter);
        std::set<Elem> sum;
        for (Elem x : SA)
            for (Elem y : SB)
                sum.insert(x ^ y);
        CHECK(as_set(A + B) == sum);
        CHECK(A.subset_of(A + B));
        CHECK(A.dim() * 2 == A.dim_f2());
        // complement representatives are least in their cosets
        for (Elem c : (A + B).complement_basis(A))
            for (Elem x : SA)
                CHECK(c <= (c ^ x));
    }
    CHECK_THROWS_AS(Subspace::from_f2_span(f, 2, {1}), Error);
    Elem w = f4[0] > 1 ? f4[0] : f4[2] > 1 ? f4[2] : f4[3];
    CHECK_THROWS_AS(Subspace::from_fp_basis(f, 2, {1, w}), Error);
    CHECK_NOTHROW(Subspace::from_fp_basis(f, 2, {1, 2}));
    auto g = Field::make(8);
    CHECK_THROWS_AS(Subspace(f, 2).intersect(Subspace(g, 1)), Error);
}

TEST_CASE("embeddings are ring homomorphisms")
{
    for (auto [d, N] : {std::pair{2u, 8u}, {4u, 12u}, {3u, 9u}, {8u, 16u}}) {
        auto src = Field::make(d), dst = Field::make(N);
        Embedding emb(src, dst);
        for (Elem a = 0; a < (1u << d); ++a) {
            CHECK(dst->in_subfield(emb(a), d));
            CHECK(emb.back(emb(a)) == a);
            for (Elem b = 0; b < (1u << d); ++b) {
                CHECK(emb(src->mul(a, b)) == dst->mul(emb(a), emb(b)));
                CHECK(emb(a ^ b) == (emb(a) ^ emb(b)));
            }
        }
    }
}
