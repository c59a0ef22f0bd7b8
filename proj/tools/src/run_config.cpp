#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "p300bench/config_io.hpp"
#include "p300bench/error.hpp"

namespace p300::cli {

using nlohmann::json;

void RunConfig::resolve() {
    synth.seed = seed;
    splits.master_seed = seed;
}

void RunConfig::validate() const {
    synth.validate();
    preprocess.validate();
    features.validate();
    svm.validate();
    cnn.validate();
    splits.validate();
    averaging.validate();
    if (predict_calls == 0) throw_config("invalid value for 'predict_calls': must be >= 1");
}

std::vector<ModelSpec> RunConfig::select_models(const std::string& which) const {
    std::vector<ModelSpec> all = models;
    if (all.empty()) {
        for (ModelKind k : {ModelKind::lda, ModelKind::svm, ModelKind::cnn}) {
            ModelSpec m = default_model(k);
            m.features = features;
            m.lda = lda;
            m.svm = svm;
            m.cnn = cnn;
            all.push_back(m);
        }
    }
    if (which == "all") return all;
    const ModelKind kind = parse_model_kind(which);
    std::vector<ModelSpec> out;
    for (const auto& m : all)
        if (m.kind == kind) out.push_back(m);
    if (out.empty()) throw_config("no model of type '" + which + "' in the configuration");
    return out;
}

json to_json(const RunConfig& c) {
    json models = json::array();
    for (const auto& m : c.models) models.push_back(model_spec_to_json(m));
    return {{"seed", c.seed},
            {"threads", c.threads},
            {"predict_calls", c.predict_calls},
            {"synth", config_to_json(c.synth)},
            {"preprocess", config_to_json(c.preprocess)},
            {"features", config_to_json(c.features)},
            {"lda", config_to_json(c.lda)},
            {"svm", config_to_json(c.svm)},
            {"cnn", config_to_json(c.cnn)},
            {"splits", config_to_json(c.splits)},
            {"averaging", config_to_json(c.averaging)},
            {"models", models}};
}

namespace {

template <typename T>
T unsigned_value(const json& v, const char* key) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw_config(std::string("invalid value for '") + key + "': expected a non-negative integer");
    return v.get<T>();
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw_config("configuration must be a JSON object");
    RunConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "seed") c.seed = unsigned_value<std::uint64_t>(v, "seed");
        else if (key == "threads") c.threads = unsigned_value<std::size_t>(v, "threads");
        else if (key == "predict_calls") c.predict_calls = unsigned_value<std::size_t>(v, "predict_calls");
        else if (key == "synth") c.synth = synth_config_from_json(v);
        else if (key == "preprocess") c.preprocess = preprocess_config_from_json(v);
        else if (key == "features") c.features = feature_config_from_json(v);
        else if (key == "lda") c.lda = lda_config_from_json(v);
        else if (key == "svm") c.svm = svm_config_from_json(v);
        else if (key == "cnn") c.cnn = cnn_config_from_json(v);
        else if (key == "splits") c.splits = split_plan_from_json(v);
        else if (key == "averaging") c.averaging = averaging_config_from_json(v);
        else if (key == "models") {
            if (!v.is_array()) throw_config("invalid value for 'models': expected an array");
            for (const auto& m : v) c.models.push_back(model_spec_from_json(m));
        } else {
            throw_config("unknown key '" + key + "'");
        }
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_config("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw_config("config file " + path + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

std::string describe_config_keys() {
    const json j = to_json(RunConfig{});
    std::ostringstream out;
    for (const auto& [key, v] : j.items()) {
        if (v.is_object()) {
            for (const auto& [sub, value] : v.items()) out << "  " << key << '.' << sub << " = " << value.dump() << '\n';
        } else if (key == "models") {
            out << "  models = [] (list of {name, type, features, standardize, lda|svm|cnn}; empty: one per type)\n";
        } else {
            out << "  " << key << " = " << v.dump() << '\n';
        }
    }
    return out.str();
}

}  // namespace p300::cli
