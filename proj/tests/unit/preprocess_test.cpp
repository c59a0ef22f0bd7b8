#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "p300bench/error.hpp"
#include "p300bench/preprocess.hpp"
#include "support/test_util.hpp"

using namespace p300;

namespace {

ContinuousRecording ramp_recording(std::size_t channels, std::size_t points) {
    ContinuousRecording rec;
    rec.n_channels = channels;
    rec.n_points = points;
    rec.channel_names = default_channel_names(channels);
    rec.data.resize(channels * points);
    for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t t = 0; t < points; ++t) rec.data[c * points + t] = static_cast<double>(t);
    return rec;
}

EpochSet constant_set(double value, std::size_t n = 1) {
    EpochSet s;
    s.n_channels = 3;
    s.n_samples = 1200;
    s.channel_names = default_channel_names(3);
    const std::vector<double> w(3 * 1200, value);
    for (std::size_t e = 0; e < n; ++e) s.append(w, static_cast<Label>(e % 2));
    return s;
}

}  // namespace

TEST(Extract, WindowAroundMarker) {
    ContinuousRecording rec = ramp_recording(3, 8000);
    rec.markers = {{5000, 1, 3}};
    const auto r = extract_epochs(rec, {});
    ASSERT_EQ(r.epochs.size(), 1u);
    EXPECT_EQ(r.epochs.n_samples, 1200u);
    EXPECT_EQ(r.epochs.at(0, 0, 0), 4800.0);
    EXPECT_EQ(r.epochs.at(0, 2, 1199), 5999.0);
    EXPECT_EQ(r.epochs.labels[0], 1);
    EXPECT_EQ(r.epochs.subject_ids[0], 3);
    EXPECT_EQ(r.epochs.prestim_ms, 200.0);
}

TEST(Extract, RampOracle) {
    ContinuousRecording rec = ramp_recording(2, 3000);
    rec.markers = {{1000, 0, -1}};
    const auto r = extract_epochs(rec, {});
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t t = 0; t < 1200; ++t) ASSERT_EQ(r.epochs.at(0, c, t), static_cast<double>(800 + t));
}

TEST(Extract, SkipsEdgeMarkers) {
    ContinuousRecording rec = ramp_recording(1, 3000);
    rec.markers = {{100, 0, -1}, {1000, 1, -1}, {2000, 0, -1}, {2001, 0, -1}};
    const auto r = extract_epochs(rec, {});
    EXPECT_EQ(r.epochs.size(), 2u);  // 2000 + 1000 = 3000 still fits, 2001 does not
    EXPECT_EQ(r.skipped_markers, 2u);
}

TEST(Extract, ReembeddingRoundTrip) {
    const EpochSet epochs = p300::testing::random_set(4, 2, 1200, 3, 200.0);
    ContinuousRecording rec;
    rec.n_channels = 2;
    rec.n_points = 4 * 1500 + 500;
    rec.channel_names = epochs.channel_names;
    rec.data.assign(rec.n_channels * rec.n_points, 0.0);
    for (std::size_t e = 0; e < epochs.size(); ++e) {
        const std::size_t onset = 300 + e * 1500;
        rec.markers.push_back({onset, epochs.labels[e], epochs.subject_ids[e]});
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t t = 0; t < 1200; ++t) rec.data[c * rec.n_points + onset - 200 + t] = epochs.at(e, c, t);
    }
    EXPECT_EQ(extract_epochs(rec, {}).epochs, epochs);
}

TEST(Baseline, ConstantBecomesZero) {
    const EpochSet s = baseline_correct(constant_set(7.0), {});
    for (double v : s.data) ASSERT_EQ(v, 0.0);
}

TEST(Baseline, SubtractsPrestimMean) {
    EpochSet s = constant_set(0.0);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t t = 0; t < 200; ++t) s.at(0, c, t) = t % 2 ? 3.0 : 4.0;  // mean 3.5
    s.at(0, 1, 700) = 10.0;
    const EpochSet b = baseline_correct(s, {});
    EXPECT_DOUBLE_EQ(b.at(0, 1, 700), 6.5);
    EXPECT_DOUBLE_EQ(b.at(0, 0, 200), -3.5);  // t = 0 ms lies outside the window
}

TEST(Baseline, WindowMeanIsZeroAndIdempotent) {
    const EpochSet s = p300::testing::random_set(10, 3, 1200, 4, 200.0);
    const EpochSet b = baseline_correct(s, {});
    for (std::size_t e = 0; e < b.size(); ++e)
        for (std::size_t c = 0; c < 3; ++c) {
            double m = 0.0;
            for (std::size_t t = 0; t < 200; ++t) m += b.at(e, c, t);
            EXPECT_NEAR(m / 200.0, 0.0, 1e-9);
        }
    const EpochSet bb = baseline_correct(b, {});
    for (std::size_t i = 0; i < b.data.size(); ++i) ASSERT_NEAR(bb.data[i], b.data[i], 1e-9);
}

TEST(Reject, StrictThresholdBoundary) {
    EpochSet s = constant_set(0.0, 4);
    s.at(0, 0, 500) = 100.1;
    s.at(1, 2, 10) = 99.9;
    s.at(2, 1, 1199) = -100.0;
    s.at(3, 1, 3) = std::nextafter(100.0, 200.0);
    const auto [kept, report] = reject_artifacts(s, {});
    EXPECT_EQ(kept.size(), 2u);
    EXPECT_EQ(report.n_input, 4u);
    EXPECT_EQ(report.n_rejected, 2u);
    EXPECT_EQ(report.rejected_indices, (std::vector<std::size_t>{0, 3}));
    EXPECT_DOUBLE_EQ(report.rejection_rate, 0.5);
    EXPECT_EQ(kept.at(0, 2, 10), 99.9);
    EXPECT_EQ(kept.at(1, 1, 1199), -100.0);
}

TEST(Reject, AllZeroKeepsEverything) {
    const auto [kept, report] = reject_artifacts(constant_set(0.0, 5), {});
    EXPECT_EQ(kept.size(), 5u);
    EXPECT_EQ(report.rejection_rate, 0.0);
}

TEST(Reject, SurvivorsBelowThresholdAndLabelAgnostic) {
    EpochSet s = p300::testing::random_set(200, 3, 100, 5, 0.0);
    for (double& v : s.data) v *= 3.5;
    const auto [kept, report] = reject_artifacts(s, {});
    EXPECT_GT(report.n_rejected, 0u);
    EXPECT_LT(report.n_rejected, 200u);
    for (double v : kept.data) ASSERT_LE(std::abs(v), 100.0);
    EXPECT_TRUE(std::is_sorted(report.rejected_indices.begin(), report.rejected_indices.end()));

    EpochSet flipped = s;
    for (auto& l : flipped.labels) l = static_cast<Label>(1 - l);
    EXPECT_EQ(reject_artifacts(flipped, {}).second.rejected_indices, report.rejected_indices);
}

TEST(PreprocessConfig, Validation) {
    PreprocessConfig cfg;
    cfg.rejection_threshold_uv = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.baseline_start_ms = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
}
