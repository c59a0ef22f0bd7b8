#include "p300bench/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "p300bench/error.hpp"
#include "p300bench/rng.hpp"

namespace p300 {

namespace {

constexpr std::size_t kMinEpochs = 8;
constexpr std::uint64_t kSplitStream = 0x73706c697473ULL;  // "splits"

std::size_t floor_fraction(double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

// Shuffles `units`, returns the first `take` of them and the rest, each sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> draw(std::vector<std::size_t> units, std::size_t take,
                                                                   SeededRng rng) {
    rng.shuffle(std::span<std::size_t>(units));
    std::vector<std::size_t> picked(units.begin(), units.begin() + static_cast<std::ptrdiff_t>(take));
    std::vector<std::size_t> rest(units.begin() + static_cast<std::ptrdiff_t>(take), units.end());
    std::sort(picked.begin(), picked.end());
    std::sort(rest.begin(), rest.end());
    return {std::move(picked), std::move(rest)};
}

}  // namespace

void SplitPlan::validate() const {
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) throw_config("splits: holdout_fraction must lie in (0, 1)");
    if (!(cv_val_fraction > 0.0 && cv_val_fraction < 1.0)) throw_config("splits: cv_val_fraction must lie in (0, 1)");
    if (cv_iterations < 1) throw_config("splits: cv_iterations must be >= 1");
}

Splits make_splits(std::size_t n, const SplitPlan& plan) {
    plan.validate();
    if (n < kMinEpochs) throw_data("n too small: need at least 8 epochs, got " + std::to_string(n));
    const SeededRng root(splitmix64(plan.master_seed ^ kSplitStream));

    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    Splits out;
    std::vector<std::size_t> remaining;
    std::tie(out.holdout, remaining) = draw(std::move(all), floor_fraction(plan.holdout_fraction, n), root.child(0));

    const std::size_t n_val = floor_fraction(plan.cv_val_fraction, remaining.size());
    for (std::size_t i = 0; i < plan.cv_iterations; ++i) {
        CvFold fold;
        std::tie(fold.val, fold.train) = draw(remaining, n_val, root.child(i + 1));
        out.folds.push_back(std::move(fold));
    }
    return out;
}

Splits make_splits(const EpochSet& set, const SplitPlan& plan) {
    if (!plan.subject_wise) return make_splits(set.size(), plan);
    plan.validate();
    if (set.size() < kMinEpochs) throw_data("n too small: need at least 8 epochs, got " + std::to_string(set.size()));

    std::map<std::int32_t, std::vector<std::size_t>> by_subject;
    for (std::size_t e = 0; e < set.size(); ++e) by_subject[set.subject_ids[e]].push_back(e);
    if (by_subject.size() < 3) throw_data("subject-wise splits need at least 3 subjects");
    std::vector<std::int32_t> subjects;
    for (const auto& kv : by_subject) subjects.push_back(kv.first);

    auto expand = [&](const std::vector<std::size_t>& subject_slots) {
        std::vector<std::size_t> epochs;
        for (std::size_t s : subject_slots) {
            const auto& idx = by_subject[subjects[s]];
            epochs.insert(epochs.end(), idx.begin(), idx.end());
        }
        std::sort(epochs.begin(), epochs.end());
        return epochs;
    };

    const SeededRng root(splitmix64(plan.master_seed ^ kSplitStream));
    std::vector<std::size_t> slots(subjects.size());
    std::iota(slots.begin(), slots.end(), 0);
    const std::size_t n_hold = std::max<std::size_t>(1, floor_fraction(plan.holdout_fraction, slots.size()));
    auto [hold, remaining] = draw(std::move(slots), n_hold, root.child(0));

    Splits out;
    out.holdout = expand(hold);
    const std::size_t n_val = std::max<std::size_t>(1, floor_fraction(plan.cv_val_fraction, remaining.size()));
    for (std::size_t i = 0; i < plan.cv_iterations; ++i) {
        auto [val, train] = draw(remaining, n_val, root.child(i + 1));
        out.folds.push_back({expand(train), expand(val)});
    }
    return out;
}

void assert_leak_free(const Splits& splits) {
    const std::unordered_set<std::size_t> holdout(splits.holdout.begin(), splits.holdout.end());
    for (std::size_t i = 0; i < splits.folds.size(); ++i) {
        for (const auto* list : {&splits.folds[i].train, &splits.folds[i].val})
            for (std::size_t idx : *list)
                if (holdout.contains(idx))
                    throw_runtime("holdout leak: epoch " + std::to_string(idx) + " used in fold " + std::to_string(i));
    }
}

}  // namespace p300
