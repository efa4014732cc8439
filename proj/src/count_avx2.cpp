#include "vdgv/count.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <bit>

#include "vdgv/errors.hpp"

namespace vdgv::detail {

bool cpu_has_avx2()
{
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}

namespace {

__attribute__((target("avx2"))) inline __m256i parity_bit(__m256i v)
{
    v = _mm256_xor_si256(v, _mm256_srli_epi32(v, 16));
    v = _mm256_xor_si256(v, _mm256_srli_epi32(v, 8));
    v = _mm256_xor_si256(v, _mm256_srli_epi32(v, 4));
    v = _mm256_xor_si256(v, _mm256_srli_epi32(v, 2));
    v = _mm256_xor_si256(v, _mm256_srli_epi32(v, 1));
    return v;
}

}  // namespace

// Eight consecutive blocks run in the eight 32-bit lanes; they differ only in the
// top coordinates, so every lane flips the same low coordinate at each Gray step.
__attribute__((target("avx2"))) std::uint64_t count_blocks_avx2(const QuadraticSystem& sys, std::uint64_t b0,
                                                               std::uint64_t b1, unsigned low_bits)
{
    require((b1 - b0) % 8 == 0, ErrorKind::Internal, "vector kernel needs groups of 8 blocks");
    const std::size_t m = sys.cols.size();
    require(m <= 8, ErrorKind::Internal, "vector kernel supports at most 8 forms");
    const std::uint64_t steps = std::uint64_t(1) << low_bits;
    const __m256i one = _mm256_set1_epi32(1);
    std::uint64_t total = 0;

    for (std::uint64_t g = b0; g < b1; g += 8) {
        alignas(32) std::uint32_t xs[8];
        alignas(32) std::uint32_t as[8][8] = {};
        for (unsigned l = 0; l < 8; ++l) {
            xs[l] = std::uint32_t((g + l) << low_bits);
            for (std::size_t j = 0; j < m; ++j) {
                std::uint32_t a = 0;
                for (std::uint32_t h = xs[l]; h; h &= h - 1)
                    a ^= sys.cols[j][std::countr_zero(h)];
                as[j][l] = a;
            }
        }
        __m256i x = _mm256_load_si256(reinterpret_cast<const __m256i*>(xs));
        __m256i acc[8];
        for (std::size_t j = 0; j < m; ++j)
            acc[j] = _mm256_load_si256(reinterpret_cast<const __m256i*>(as[j]));
        // per-lane counters; each lane sees at most 2^low_bits <= 2^29 points
        __m256i cnt = _mm256_setzero_si256();
        for (std::uint64_t i = 1;; ++i) {
            __m256i bad = _mm256_setzero_si256();
            for (std::size_t j = 0; j < m; ++j)
                bad = _mm256_or_si256(bad, parity_bit(_mm256_and_si256(x, acc[j])));
            bad = _mm256_and_si256(bad, one);
            cnt = _mm256_add_epi32(cnt, _mm256_xor_si256(bad, one));
            if (i == steps)
                break;
            unsigned b = unsigned(std::countr_zero(i));
            x = _mm256_xor_si256(x, _mm256_set1_epi32(int(1u << b)));
            for (std::size_t j = 0; j < m; ++j)
                acc[j] = _mm256_xor_si256(acc[j], _mm256_set1_epi32(int(sys.cols[j][b])));
        }
        alignas(32) std::uint32_t c[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(c), cnt);
        for (unsigned l = 0; l < 8; ++l)
            total += c[l];
    }
    return total;
}

}  // namespace vdgv::detail

#endif
