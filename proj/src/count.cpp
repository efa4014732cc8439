#include "vdgv/count.hpp"

#include <algorithm>
#include <bit>
#include <thread>

#include "vdgv/errors.hpp"

namespace vdgv {

namespace detail {

std::uint64_t count_blocks_scalar(const QuadraticSystem& sys, std::uint64_t b0, std::uint64_t b1,
                                  unsigned low_bits)
{
    const std::size_t m = sys.cols.size();
    std::vector<std::uint32_t> acc(m);
    std::uint64_t total = 0;
    for (std::uint64_t blk = b0; blk < b1; ++blk) {
        std::uint32_t x = std::uint32_t(blk << low_bits);
        for (std::size_t j = 0; j < m; ++j) {
            std::uint32_t a = 0;
            for (std::uint32_t h = x; h; h &= h - 1)
                a ^= sys.cols[j][std::countr_zero(h)];
            acc[j] = a;
        }
        const std::uint64_t steps = std::uint64_t(1) << low_bits;
        for (std::uint64_t i = 1;; ++i) {
            std::uint32_t bad = 0;
            for (std::size_t j = 0; j < m; ++j)
                bad |= std::uint32_t(std::popcount(x & acc[j]) & 1);
            total += bad ^ 1;
            if (i == steps)
                break;
            unsigned b = unsigned(std::countr_zero(i));
            x ^= std::uint32_t(1) << b;
            for (std::size_t j = 0; j < m; ++j)
                acc[j] ^= sys.cols[j][b];
        }
    }
    return total;
}

#if !(defined(__x86_64__) || defined(__i386__))
std::uint64_t count_blocks_avx2(const QuadraticSystem&, std::uint64_t, std::uint64_t, unsigned)
{
    fail(ErrorKind::Internal, "AVX2 kernel not built for this target");
}
bool cpu_has_avx2() { return false; }
#endif

}  // namespace detail

bool kernel_available(CountKernel k)
{
    switch (k) {
    case CountKernel::Auto:
    case CountKernel::Scalar: return true;
    case CountKernel::Avx2: return detail::cpu_has_avx2();
    }
    return false;
}

CountKernel resolve_kernel(CountKernel k)
{
    if (k == CountKernel::Auto)
        return detail::cpu_has_avx2() ? CountKernel::Avx2 : CountKernel::Scalar;
    require(kernel_available(k), ErrorKind::Internal, std::string(kernel_name(k)) + " kernel unavailable");
    return k;
}

const char* kernel_name(CountKernel k)
{
    switch (k) {
    case CountKernel::Auto: return "auto";
    case CountKernel::Scalar: return "scalar";
    case CountKernel::Avx2: return "avx2";
    }
    return "?";
}

std::uint64_t count_common_zeros(const QuadraticSystem& sys, CountKernel k, unsigned threads)
{
    require(sys.n <= 32, ErrorKind::BudgetExceeded, "quadratic system larger than 32 coordinates");
    for (const auto& c : sys.cols)
        require(c.size() >= sys.n, ErrorKind::Internal, "quadratic system column list too short");
    k = resolve_kernel(k);
    const unsigned high = std::min(sys.n, 8u);
    const unsigned low = sys.n - high;
    const std::uint64_t blocks = std::uint64_t(1) << high;
    // the vector kernel wants whole groups of 8 blocks and enough inner work to pay off
    const bool vec = k == CountKernel::Avx2 && blocks >= 8 && low >= 2 && sys.cols.size() <= 8;
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(blocks / 8 ? blocks / 8 : 1)));

    auto run = [&](std::uint64_t b0, std::uint64_t b1) {
        return vec ? detail::count_blocks_avx2(sys, b0, b1, low) : detail::count_blocks_scalar(sys, b0, b1, low);
    };
    if (threads == 1)
        return run(0, blocks);

    std::vector<std::uint64_t> part(threads, 0);
    std::vector<std::thread> pool;
    const std::uint64_t groups = blocks / 8;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t g0 = groups * t / threads, g1 = groups * (t + 1) / threads;
        pool.emplace_back([&, t, g0, g1] { part[t] = run(g0 * 8, g1 * 8); });
    }
    for (auto& th : pool)
        th.join();
    std::uint64_t total = 0;
    for (auto v : part)
        total += v;
    return total;
}

}  // namespace vdgv
