#include "p300bench/timing.hpp"

#include <algorithm>
#include <chrono>

#include "p300bench/error.hpp"

namespace p300 {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Keeps the optimizer from discarding timed work.
volatile double g_sink = 0.0;

}  // namespace

double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw_runtime("linear fit needs at least two paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy * sxy / (sxx * syy);
}

TimingReport bench_timing(const std::vector<ModelSpec>& models, const EpochSet& train, const EpochSet& val,
                          const EpochSet& test, const TimingOptions& options) {
    if (test.size() == 0) throw_runtime("timing needs at least one test epoch");
    if (options.predict_calls == 0) throw_config("timing: predict_calls must be >= 1");
    TimingReport report;
    const SeededRng root(options.seed);

    std::vector<EpochSet> singles;
    for (std::size_t e = 0; e < test.size() && singles.size() < options.predict_calls; ++e) {
        const std::size_t idx[1] = {e};
        singles.push_back(test.subset(idx));
    }

    const Pipeline* lda_pipeline = nullptr;
    std::vector<Pipeline> fitted;
    fitted.reserve(models.size() + 1);
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto t0 = Clock::now();
        fitted.push_back(Pipeline::fit(models[m], train, val, root.child(m)));
        ModelTiming t;
        t.model = models[m].name;
        t.train_seconds = seconds_since(t0);

        std::vector<double> calls;
        calls.reserve(options.predict_calls);
        for (std::size_t c = 0; c < options.predict_calls; ++c) {
            const EpochSet& one = singles[c % singles.size()];
            const auto c0 = Clock::now();
            g_sink = g_sink + fitted.back().score(one)[0];
            calls.push_back(seconds_since(c0) * 1e3);
        }
        t.predict_median_ms = median(calls);
        t.predict_calls = calls.size();
        report.models.push_back(t);
        if (!lda_pipeline && models[m].kind == ModelKind::lda) lda_pipeline = &fitted.back();
    }
    if (!lda_pipeline) {
        fitted.push_back(Pipeline::fit(default_model(ModelKind::lda), train, val, root.child(models.size())));
        lda_pipeline = &fitted.back();
    }

    // Batch scoring on replicated, already standardized feature rows.
    const LdaModel& lda = *lda_pipeline->lda();
    Matrix feats = extract_features(test, lda_pipeline->spec().features).values;
    if (lda_pipeline->spec().standardize) feats = lda_pipeline->standardizer().apply(feats);
    std::vector<double> xs, ys;
    for (std::size_t size : options.scaling_sizes) {
        Matrix x(size, feats.cols());
        for (std::size_t r = 0; r < size; ++r) {
            const auto src = feats.row(r % feats.rows());
            std::copy(src.begin(), src.end(), x.row(r).begin());
        }
        std::vector<double> reps;
        for (std::size_t rep = 0; rep < std::max<std::size_t>(1, options.scaling_repeats); ++rep) {
            const auto t0 = Clock::now();
            g_sink = g_sink + lda.score(x).back();
            reps.push_back(seconds_since(t0));
        }
        report.lda_scaling.push_back({size, median(reps)});
        xs.push_back(static_cast<double>(size));
        ys.push_back(report.lda_scaling.back().seconds);
    }
    if (xs.size() >= 2) report.lda_scaling_r2 = linear_fit_r2(xs, ys);
    return report;
}

nlohmann::json to_json(const TimingReport& report) {
    nlohmann::json models = nlohmann::json::array();
    for (const auto& m : report.models)
        models.push_back({{"model", m.model},
                          {"train_seconds", m.train_seconds},
                          {"predict_median_ms", m.predict_median_ms},
                          {"predict_calls", m.predict_calls}});
    nlohmann::json scaling = nlohmann::json::array();
    for (const auto& p : report.lda_scaling) scaling.push_back({{"patterns", p.patterns}, {"seconds", p.seconds}});
    return {{"models", models}, {"lda_scaling", scaling}, {"lda_scaling_r2", report.lda_scaling_r2}};
}

}  // namespace p300
