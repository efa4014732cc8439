#pragma once

#include <cstdint>
#include <vector>

namespace vdgv {

// A family of quadratic forms on F_2^n given by linear maps L_j: q_j(x) = parity(x & L_j x).
// cols[j][c] is the image of the c-th unit vector under L_j.
struct QuadraticSystem {
    unsigned n = 0;
    std::vector<std::vector<std::uint32_t>> cols;
};

enum class CountKernel { Auto, Scalar, Avx2 };

bool kernel_available(CountKernel k);
CountKernel resolve_kernel(CountKernel k);
const char* kernel_name(CountKernel k);

// Number of x in F_2^n with q_j(x) = 0 for every j. Enumeration is split into 2^h blocks
// on the top coordinates; blocks are distributed over threads and summed in block order,
// so the result does not depend on the thread count.
std::uint64_t count_common_zeros(const QuadraticSystem& sys, CountKernel k = CountKernel::Auto,
                                 unsigned threads = 1);

namespace detail {
// Blocks [b0, b1) with low_bits free coordinates each; x = (block << low_bits) ^ gray(i).
std::uint64_t count_blocks_scalar(const QuadraticSystem& sys, std::uint64_t b0, std::uint64_t b1,
                                  unsigned low_bits);
// Same contract; (b1 - b0) must be a multiple of 8.
std::uint64_t count_blocks_avx2(const QuadraticSystem& sys, std::uint64_t b0, std::uint64_t b1,
                                unsigned low_bits);
bool cpu_has_avx2();
}  // namespace detail

}  // namespace vdgv
