#pragma once

#include <cstddef>
#include <span>

namespace blockboot {

/// Inputs longer than this are summed pairwise instead of left to right.
inline constexpr std::size_t kPairwiseCutoff = 1024;

/// Sum of term(i) for i in [begin, end). Left-to-right below the cutoff,
/// recursive halving above it. The split points depend only on the range,
/// so the result is reproducible bit for bit.
template <typename Term>
[[nodiscard]] double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
    const std::size_t len = end - begin;
    if (len <= kPairwiseCutoff) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + len / 2;
    return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

[[nodiscard]] inline double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum(0, xs.size(), [xs](std::size_t i) { return xs[i]; });
}

}  // namespace blockboot
