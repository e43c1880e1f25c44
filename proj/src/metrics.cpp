#include "gadepth/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "gadepth/dataset.hpp"

namespace gadepth {

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    const std::size_t m = scores.size();
    if (labels.size() != m) throw ValidationError("auc_roc: scores and labels differ in length");

    std::uint64_t n_pos = 0;
    for (int y : labels) n_pos += static_cast<std::uint64_t>(y == 1);
    const std::uint64_t n_neg = m - n_pos;
    if (n_pos == 0 || n_neg == 0) throw ValidationError("auc_roc: both classes required");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // doubled average ranks keep everything in exact integer arithmetic
    std::uint64_t pos_rank2 = 0;
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j < m && scores[order[j]] == scores[order[i]]) ++j;
        const std::uint64_t rank2 = static_cast<std::uint64_t>(i + 1) + static_cast<std::uint64_t>(j);
        for (std::size_t t = i; t < j; ++t)
            if (labels[order[t]] == 1) pos_rank2 += rank2;
        i = j;
    }

    const std::uint64_t numerator2 = pos_rank2 - n_pos * (n_pos + 1);
    return static_cast<double>(numerator2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace gadepth
