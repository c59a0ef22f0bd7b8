#include "p300bench/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "p300bench/error.hpp"

namespace p300 {

std::optional<double> auc_mann_whitney(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw_runtime("score/label length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (Label l : labels) n_pos += (l != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) return std::nullopt;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Ranks are 1-based; tied runs share the mean rank (first + last) / 2.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] != 0) rank_sum_pos += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricSet compute_metrics(std::span<const double> scores, std::span<const Label> labels, double threshold) {
    if (scores.empty()) throw_runtime("no scores to evaluate");
    if (scores.size() != labels.size()) throw_runtime("score/label length mismatch");

    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] > threshold;
        const bool actual = labels[i] != 0;
        if (predicted && actual) ++tp;
        else if (predicted) ++fp;
        else if (actual) ++fn;
        else ++tn;
    }
    MetricSet m;
    m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(scores.size());
    m.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.auc = auc_mann_whitney(scores, labels);
    return m;
}

}  // namespace p300
