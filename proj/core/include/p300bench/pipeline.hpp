#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/cnn.hpp"
#include "p300bench/epochs.hpp"
#include "p300bench/features.hpp"
#include "p300bench/lda.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/rng.hpp"
#include "p300bench/svm.hpp"

namespace p300 {

enum class ModelKind { lda, svm, cnn };

std::string to_string(ModelKind kind);
/// Accepts "lda", "svm" and "cnn".
ModelKind parse_model_kind(const std::string& name);

/// A named classifier configuration. LDA and SVM read standardized features,
/// the CNN reads raw epochs and ignores `features`.
struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::lda;
    FeatureConfig features;
    bool standardize = true;
    LdaConfig lda;
    SvmConfig svm;
    CnnConfig cnn;
};

ModelSpec default_model(ModelKind kind);
/// lda, svm and cnn with default settings.
std::vector<ModelSpec> default_models();

/// A model fitted together with its feature transform.
class Pipeline {
public:
    /// Fits on `train` only. The CNN also sees `val` for early stopping; its
    /// seed and the SVM tie-breaking stream come from `rng`.
    static Pipeline fit(const ModelSpec& spec, const EpochSet& train, const EpochSet& val, SeededRng rng);

    const ModelSpec& spec() const noexcept { return spec_; }
    /// Decision values: w^T x + b for LDA, f(x) for SVM, target probability for the CNN.
    std::vector<double> score(const EpochSet& set) const;
    double threshold() const noexcept;
    MetricSet evaluate(const EpochSet& set) const;

    const LdaModel* lda() const noexcept { return std::get_if<LdaModel>(&model_); }
    const SvmModel* svm() const noexcept { return std::get_if<SvmModel>(&model_); }
    const CnnModel* cnn() const noexcept { return std::get_if<CnnModel>(&model_); }
    const Standardizer& standardizer() const noexcept { return standardizer_; }

    /// Non-fatal notes such as an unconverged SVM.
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    static Pipeline from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static Pipeline load(const std::filesystem::path& path);

private:
    Pipeline(ModelSpec spec, Standardizer s, std::variant<LdaModel, SvmModel, CnnModel> model);
    Matrix features(const EpochSet& set) const;

    ModelSpec spec_;
    Standardizer standardizer_;
    std::variant<LdaModel, SvmModel, CnnModel> model_;
};

}  // namespace p300
