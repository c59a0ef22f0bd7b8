#include <gtest/gtest.h>

#include "p300bench/config_io.hpp"
#include "p300bench/error.hpp"

using namespace p300;
using nlohmann::json;

namespace {

std::string config_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::config);
        return e.what();
    }
    ADD_FAILURE() << "no error";
    return {};
}

}  // namespace

TEST(ConfigIo, UnknownKeyIsNamed) {
    const auto msg = config_error([] { cnn_config_from_json(json{{"n_filter", 6}}); });
    EXPECT_EQ(msg, "unknown key 'cnn.n_filter'");
}

TEST(ConfigIo, WrongTypeIsNamed) {
    const auto msg = config_error([] { svm_config_from_json(json{{"C", "big"}}); });
    EXPECT_NE(msg.find("'svm.C'"), std::string::npos);
    config_error([] { cnn_config_from_json(json{{"max_epochs", -3}}); });
    config_error([] { cnn_config_from_json(json{{"activation", "tanh"}}); });
}

TEST(ConfigIo, ValuesAreValidated) {
    config_error([] { cnn_config_from_json(json{{"dropout_p", 1.5}}); });
    config_error([] { split_plan_from_json(json{{"holdout_fraction", 0.0}}); });
}

TEST(ConfigIo, RoundTrips) {
    CnnConfig cnn;
    cnn.dense_units = {120, 60};
    cnn.activation = Activation::relu;
    cnn.pooling = Pooling::max;
    cnn.adam.learning_rate = 3e-4;
    cnn.seed = 99;
    const CnnConfig cnn2 = cnn_config_from_json(config_to_json(cnn));
    EXPECT_EQ(config_to_json(cnn2), config_to_json(cnn));
    EXPECT_EQ(cnn2.dense_units, cnn.dense_units);

    SvmConfig svm;
    svm.gamma = 0.25;
    svm.C = 4.0;
    EXPECT_EQ(config_to_json(svm_config_from_json(config_to_json(svm))), config_to_json(svm));
    EXPECT_EQ(config_to_json(SvmConfig{})["gamma"], "scale");
    EXPECT_FALSE(svm_config_from_json(json{{"gamma", "scale"}}, svm).gamma.has_value());

    LdaConfig lda;
    EXPECT_EQ(config_to_json(lda)["shrinkage"], "auto");
    lda.fixed_shrinkage = 0.0;
    EXPECT_EQ(*lda_config_from_json(config_to_json(lda)).fixed_shrinkage, 0.0);

    SplitPlan plan;
    plan.master_seed = 12345678901234ull;
    plan.subject_wise = true;
    EXPECT_EQ(config_to_json(split_plan_from_json(config_to_json(plan))), config_to_json(plan));

    EXPECT_EQ(config_to_json(synth_config_from_json(config_to_json(SynthConfig{}))), config_to_json(SynthConfig{}));
    EXPECT_EQ(config_to_json(preprocess_config_from_json(config_to_json(PreprocessConfig{}))),
              config_to_json(PreprocessConfig{}));
    EXPECT_EQ(config_to_json(averaging_config_from_json(config_to_json(AveragingConfig{}))),
              config_to_json(AveragingConfig{}));
}

TEST(ConfigIo, ReadersOverrideOnlyGivenKeys) {
    CnnConfig base;
    base.max_epochs = 7;
    const CnnConfig c = cnn_config_from_json(json{{"patience", 2}}, base);
    EXPECT_EQ(c.max_epochs, 7u);
    EXPECT_EQ(c.patience, 2u);
}

TEST(ConfigIo, ModelSpecs) {
    const ModelSpec cnn = model_spec_from_json(json{{"type", "cnn"}, {"cnn", {{"dropout_p", 0.0}}}});
    EXPECT_EQ(cnn.kind, ModelKind::cnn);
    EXPECT_EQ(cnn.name, "cnn");
    EXPECT_EQ(cnn.cnn.dropout_p, 0.0);
    EXPECT_EQ(cnn.cnn.n_filters, 6u);

    ModelSpec lda = default_model(ModelKind::lda);
    lda.name = "lda-short";
    lda.features = parse_window("300-500");
    const ModelSpec back = model_spec_from_json(model_spec_to_json(lda));
    EXPECT_EQ(back.name, "lda-short");
    EXPECT_EQ(back.features, lda.features);

    config_error([] { model_spec_from_json(json{{"name", "x"}}); });
    config_error([] { model_spec_from_json(json{{"type", "knn"}}); });
}

TEST(ParseWindow, Forms) {
    const FeatureConfig a = parse_window("300-1000");
    EXPECT_EQ(a.window_start_ms, 300.0);
    EXPECT_EQ(a.window_end_ms, 1000.0);
    EXPECT_EQ(a.n_intervals, 20u);
    EXPECT_EQ(parse_window("300:800").window_end_ms, 800.0);
    config_error([] { parse_window("-100-500"); });
    config_error([] { parse_window("300"); });
    config_error([] { parse_window("300-abc"); });
    config_error([] { parse_window("800-300"); });
}
