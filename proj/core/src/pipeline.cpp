#include "p300bench/pipeline.hpp"

#include <fstream>

#include "p300bench/config_io.hpp"
#include "p300bench/error.hpp"

namespace p300 {

namespace {

constexpr int kModelFormatVersion = 1;

void require_two_classes(const EpochSet& set) {
    const std::size_t n1 = set.count_label(1);
    if (n1 == 0 || n1 == set.size()) throw_runtime("need two classes");
}

}  // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::lda: return "lda";
        case ModelKind::svm: return "svm";
        case ModelKind::cnn: return "cnn";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "lda") return ModelKind::lda;
    if (name == "svm") return ModelKind::svm;
    if (name == "cnn") return ModelKind::cnn;
    throw_config("unknown model '" + name + "' (expected lda, svm or cnn)");
}

ModelSpec default_model(ModelKind kind) {
    ModelSpec spec;
    spec.name = to_string(kind);
    spec.kind = kind;
    return spec;
}

std::vector<ModelSpec> default_models() {
    return {default_model(ModelKind::lda), default_model(ModelKind::svm), default_model(ModelKind::cnn)};
}

Pipeline::Pipeline(ModelSpec spec, Standardizer s, std::variant<LdaModel, SvmModel, CnnModel> model)
    : spec_(std::move(spec)), standardizer_(std::move(s)), model_(std::move(model)) {}

Pipeline Pipeline::fit(const ModelSpec& spec, const EpochSet& train, const EpochSet& val, SeededRng rng) {
    require_two_classes(train);
    if (spec.kind == ModelKind::cnn) {
        ModelSpec resolved = spec;
        resolved.cnn.seed = splitmix64(spec.cnn.seed ^ rng.next_u64());
        CnnModel model = train_cnn(train, val, resolved.cnn);
        std::vector<std::string> notes = model.warnings;
        Pipeline p(std::move(resolved), Standardizer{}, std::move(model));
        p.warnings = std::move(notes);
        return p;
    }

    spec.features.validate();
    const FeatureMatrix fm = extract_features(train, spec.features);
    Standardizer s;
    Matrix x = fm.values;
    if (spec.standardize) {
        s = Standardizer::fit(x);
        x = s.apply(x);
    }
    if (spec.kind == ModelKind::lda) return Pipeline(spec, std::move(s), fit_lda(x, fm.labels, spec.lda));

    SvmModel model = fit_svm(x, to_signed_labels(fm.labels), spec.svm, rng);
    const bool converged = model.converged;
    Pipeline p(spec, std::move(s), std::move(model));
    if (!converged) p.warnings.push_back("svm: iteration limit reached before the KKT tolerance");
    return p;
}

Matrix Pipeline::features(const EpochSet& set) const {
    Matrix x = extract_features(set, spec_.features).values;
    return spec_.standardize ? standardizer_.apply(x) : x;
}

std::vector<double> Pipeline::score(const EpochSet& set) const {
    if (set.size() == 0) return {};
    if (const auto* m = cnn()) return m->predict_proba(batch_from_epochs(set));
    const Matrix x = features(set);
    if (const auto* m = lda()) return m->score(x);
    return svm()->score(x);
}

double Pipeline::threshold() const noexcept {
    return spec_.kind == ModelKind::cnn ? kProbabilityThreshold : kLinearThreshold;
}

MetricSet Pipeline::evaluate(const EpochSet& set) const {
    return compute_metrics(score(set), set.labels, threshold());
}

nlohmann::json Pipeline::to_json() const {
    nlohmann::json model;
    if (const auto* m = lda()) model = m->to_json();
    else if (const auto* m = svm()) model = m->to_json();
    else model = cnn()->to_json();
    return {{"format", "p300bench-model"},
            {"version", kModelFormatVersion},
            {"spec", model_spec_to_json(spec_)},
            {"standardizer", spec_.standardize && spec_.kind != ModelKind::cnn ? standardizer_.to_json()
                                                                               : nlohmann::json()},
            {"model", model},
            {"warnings", warnings}};
}

Pipeline Pipeline::from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "p300bench-model" || j.value("version", 0) != kModelFormatVersion)
        throw_data("not a p300bench model file");
    try {
        ModelSpec spec = model_spec_from_json(j.at("spec"));
        Standardizer s;
        if (!j.at("standardizer").is_null()) s = Standardizer::from_json(j.at("standardizer"));
        std::variant<LdaModel, SvmModel, CnnModel> model = LdaModel{};
        switch (spec.kind) {
            case ModelKind::lda: model = LdaModel::from_json(j.at("model")); break;
            case ModelKind::svm: model = SvmModel::from_json(j.at("model")); break;
            case ModelKind::cnn: model = CnnModel::from_json(j.at("model")); break;
        }
        Pipeline p(std::move(spec), std::move(s), std::move(model));
        p.warnings = j.value("warnings", std::vector<std::string>{});
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw_data(std::string("malformed model file: ") + e.what());
    }
}

void Pipeline::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw_data("cannot write " + path.string());
    out << to_json().dump() << '\n';
}

Pipeline Pipeline::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw_data("malformed model file " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

}  // namespace p300
