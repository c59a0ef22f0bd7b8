#pragma once

#include <cstdint>
#include <vector>

#include "p300bench/epochs.hpp"

namespace p300 {

struct SplitPlan {
    double holdout_fraction = 0.25;
    std::size_t cv_iterations = 30;
    double cv_val_fraction = 0.25;
    std::uint64_t master_seed = 0;
    /// Keep every subject's epochs on one side of each split.
    bool subject_wise = false;

    void validate() const;
};

struct CvFold {
    std::vector<std::size_t> train;  ///< sorted
    std::vector<std::size_t> val;    ///< sorted
};

struct Splits {
    std::vector<std::size_t> holdout;  ///< sorted
    std::vector<CvFold> folds;
};

/// Holdout of floor(holdout_fraction * n) epochs drawn once from child(0) of a
/// split stream derived from the master seed; fold i splits the remainder with
/// child(i + 1), taking floor(cv_val_fraction * remaining) for validation.
/// Throws on n < 8.
Splits make_splits(std::size_t n, const SplitPlan& plan);

/// Epoch-wise unless plan.subject_wise, in which case whole subjects are drawn
/// with the same fractions applied to the subject count.
Splits make_splits(const EpochSet& set, const SplitPlan& plan);

/// Throws a runtime error if any holdout index appears in a train or validation list.
void assert_leak_free(const Splits& splits);

}  // namespace p300
