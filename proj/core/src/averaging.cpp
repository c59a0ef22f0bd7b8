#include "p300bench/averaging.hpp"

#include <algorithm>
#include <map>

#include "p300bench/error.hpp"

namespace p300 {

void AveragingConfig::validate() const {
    if (k_max < 1) throw_config("averaging: k_max must be >= 1");
}

EpochSet average_groups(const EpochSet& set, std::size_t k, bool within_subject) {
    if (k < 1) throw_config("averaging: group size must be >= 1");

    // Runs of same-class (and optionally same-subject) epochs in file order.
    std::map<std::pair<Label, std::int32_t>, std::vector<std::size_t>> pools;
    for (std::size_t e = 0; e < set.size(); ++e)
        pools[{set.labels[e], within_subject ? set.subject_ids[e] : 0}].push_back(e);

    std::vector<std::vector<std::size_t>> groups;
    for (const auto& [key, idx] : pools)
        for (std::size_t g = 0; g + k <= idx.size(); g += k)
            groups.emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(g),
                                idx.begin() + static_cast<std::ptrdiff_t>(g + k));
    std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    EpochSet out = set.empty_like();
    std::vector<double> sum(set.epoch_size());
    for (const auto& group : groups) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t e : group) {
            const auto w = set.epoch(e);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w[i];
        }
        if (k > 1)
            for (double& v : sum) v /= static_cast<double>(k);
        out.append(sum, set.labels[group.front()], set.subject_ids[group.front()]);
    }
    return out;
}

std::vector<std::optional<MetricSet>> averaging_eval(const Pipeline& pipeline, const EpochSet& holdout,
                                                     const AveragingConfig& cfg) {
    cfg.validate();
    std::vector<std::optional<MetricSet>> out;
    for (std::size_t k = 1; k <= cfg.k_max; ++k) {
        const EpochSet avg = average_groups(holdout, k, cfg.within_subject);
        const std::size_t n1 = avg.count_label(1);
        if (n1 == 0 || n1 == avg.size()) {
            out.emplace_back();
            continue;
        }
        out.emplace_back(pipeline.evaluate(avg));
    }
    return out;
}

}  // namespace p300
