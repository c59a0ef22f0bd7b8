#include "p300bench/evaluation.hpp"

#include <chrono>
#include <mutex>
#include <set>

#include "p300bench/error.hpp"
#include "parallel.hpp"

namespace p300 {

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64656c73ULL;

struct IterationResult {
    std::vector<MetricSet> validation, holdout;
    std::vector<std::vector<std::optional<MetricSet>>> averaging;
    std::vector<std::vector<EpochRecord>> logs;
    std::vector<double> seconds;
    std::vector<std::string> warnings;
};

}  // namespace

SeededRng model_rng(std::uint64_t master_seed, std::size_t iteration, std::size_t model) {
    return SeededRng(splitmix64(master_seed ^ kModelStream)).child(iteration).child(model);
}

EvalReport run_benchmark(const EpochSet& set, const std::vector<ModelSpec>& models, const SplitPlan& plan,
                         const EvalOptions& options) {
    if (models.empty()) throw_config("no models selected");
    std::set<std::string> names;
    for (const auto& m : models)
        if (!names.insert(m.name).second) throw_config("duplicate model name '" + m.name + "'");
    if (options.averaging) options.averaging->validate();
    set.validate();

    const Splits splits = make_splits(set, plan);
    assert_leak_free(splits);
    const EpochSet holdout = set.subset(splits.holdout);

    std::vector<IterationResult> results(splits.folds.size());
    std::mutex progress_mutex;
    detail::parallel_for(splits.folds.size(), options.threads, [&](std::size_t i) {
        const EpochSet train = set.subset(splits.folds[i].train);
        const EpochSet val = set.subset(splits.folds[i].val);
        IterationResult& r = results[i];
        for (std::size_t m = 0; m < models.size(); ++m) {
            const auto t0 = std::chrono::steady_clock::now();
            Pipeline p = [&] {
                try {
                    return Pipeline::fit(models[m], train, val, model_rng(plan.master_seed, i, m));
                } catch (const Error& e) {
                    throw Error(e.kind(), "iteration " + std::to_string(i) + ", model " + models[m].name + ": " +
                                              e.what());
                }
            }();
            r.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            for (const auto& w : p.warnings)
                r.warnings.push_back("iteration " + std::to_string(i) + ", model " + models[m].name + ": " + w);
            r.validation.push_back(p.evaluate(val));
            r.holdout.push_back(p.evaluate(holdout));
            if (options.averaging) r.averaging.push_back(averaging_eval(p, holdout, *options.averaging));
            r.logs.push_back(p.cnn() ? p.cnn()->training_log : std::vector<EpochRecord>{});
        }
        if (options.progress) {
            std::lock_guard lock(progress_mutex);
            options.progress("iteration " + std::to_string(i + 1) + "/" + std::to_string(splits.folds.size()) +
                             " done");
        }
    });

    EvalReport report;
    report.config = options.config_snapshot;
    report.n_epochs = set.size();
    report.n_holdout = holdout.size();
    report.n_iterations = splits.folds.size();
    report.k_max = options.averaging ? options.averaging->k_max : 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        ModelResult mr;
        mr.model = models[m].name;
        for (auto& r : results) {
            mr.validation.push_back(r.validation[m]);
            mr.holdout.push_back(r.holdout[m]);
            if (options.averaging) mr.averaging.push_back(r.averaging[m]);
            if (models[m].kind == ModelKind::cnn) mr.training_logs.push_back(r.logs[m]);
            mr.train_seconds.push_back(r.seconds[m]);
        }
        report.models.push_back(std::move(mr));
    }
    for (auto& r : results) report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
    return report;
}

}  // namespace p300
