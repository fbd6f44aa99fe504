// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace steerbench::tasks
{

// mt19937_64 output is fixed by the standard; the distributions are not, so bounded
// draws are done here to keep generated instances identical across standard libraries.
class SeededRng
{
public:
    explicit SeededRng(std::uint64_t seed): _engine(seed) {}

    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do
            x = _engine();
        while (x >= limit);
        return x % n;
    }

    /// Uniform in [lo, hi].
    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1)); }

    template <typename Container>
    void shuffle(Container& c)
    {
        for (std::size_t i = c.size(); i > 1; --i)
        {
            std::size_t j = below(i);
            std::swap(c[i - 1], c[j]);
        }
    }

private:
    std::mt19937_64 _engine;
};

} // namespace steerbench::tasks
