#include "p300bench/config_io.hpp"

#include <charconv>
#include <set>

#include "p300bench/error.hpp"

namespace p300 {

using nlohmann::json;

namespace {

// Reads known keys of one JSON object and rejects the rest.
class Reader {
public:
    Reader(const json& j, std::string section) : j_(j), section_(std::move(section)) {
        if (!j_.is_object()) throw_config(section_ + ": expected an object");
    }

    template <typename T>
    void read(const std::string& key, T& out) {
        known_.insert(key);
        const auto it = j_.find(key);
        if (it != j_.end()) out = convert<T>(*it, key);
    }

    template <typename T>
    void read_optional(const std::string& key, std::optional<T>& out, const char* auto_word) {
        known_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        if (it->is_null() || (it->is_string() && it->get<std::string>() == auto_word)) out.reset();
        else out = convert<T>(*it, key);
    }

    template <typename E>
    void read_enum(const std::string& key, E& out, std::initializer_list<std::pair<const char*, E>> names) {
        known_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        const auto s = convert<std::string>(*it, key);
        for (const auto& [n, v] : names)
            if (s == n) {
                out = v;
                return;
            }
        std::string allowed;
        for (const auto& [n, v] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n);
        fail(key, "must be one of " + allowed);
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!known_.contains(item.key())) throw_config("unknown key '" + path(item.key()) + "'");
    }

    const std::string& section() const noexcept { return section_; }

private:
    std::string path(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw_config("invalid value for '" + path(key) + "': " + what);
    }

    template <typename T>
    T convert(const json& v, const std::string& key) const {
        if constexpr (std::is_same_v<T, json>) {
            return v;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) fail(key, "expected true or false");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) fail(key, "expected a string");
            return v.get<std::string>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) fail(key, "expected a number");
            return v.get<T>();
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                fail(key, "expected a non-negative integer");
            return v.get<T>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) fail(key, "expected an integer");
            return v.get<T>();
        } else {
            // std::vector<double> or std::vector<std::size_t>
            if (!v.is_array()) fail(key, "expected an array");
            T out;
            for (const auto& e : v) out.push_back(convert<typename T::value_type>(e, key));
            return out;
        }
    }

    const json& j_;
    std::string section_;
    std::set<std::string> known_;
};

const char* name_of(FeatureMode m) { return m == FeatureMode::raw ? "raw" : "windowed_means"; }
const char* name_of(KernelType k) {
    switch (k) {
        case KernelType::rbf: return "rbf";
        case KernelType::linear: return "linear";
        case KernelType::polynomial: return "polynomial";
    }
    return "?";
}
const char* name_of(Activation a) { return a == Activation::relu ? "relu" : "elu"; }
const char* name_of(Pooling p) { return p == Pooling::max ? "max" : "average"; }

template <typename T>
T validated(T c) {
    c.validate();
    return c;
}

}  // namespace

// --- writers ---------------------------------------------------------------

json config_to_json(const SynthConfig& c) {
    return {{"n_epochs", c.n_epochs},
            {"n_channels", c.n_channels},
            {"n_samples", c.n_samples},
            {"sampling_rate_hz", c.sampling_rate_hz},
            {"prestim_ms", c.prestim_ms},
            {"p300_amplitude_uv", c.p300_amplitude_uv},
            {"p300_latency_ms", c.p300_latency_ms},
            {"latency_jitter_ms", c.latency_jitter_ms},
            {"p300_width_ms", c.p300_width_ms},
            {"noise_std_uv", c.noise_std_uv},
            {"channel_gains", c.channel_gains},
            {"seed", c.seed}};
}

json config_to_json(const PreprocessConfig& c) {
    return {{"prestim_ms", c.prestim_ms},
            {"poststim_ms", c.poststim_ms},
            {"baseline_start_ms", c.baseline_start_ms},
            {"baseline_end_ms", c.baseline_end_ms},
            {"rejection_threshold_uv", c.rejection_threshold_uv}};
}

json config_to_json(const FeatureConfig& c) {
    return {{"mode", name_of(c.mode)},
            {"window_start_ms", c.window_start_ms},
            {"window_end_ms", c.window_end_ms},
            {"n_intervals", c.n_intervals}};
}

json config_to_json(const LdaConfig& c) {
    return {{"shrinkage", c.fixed_shrinkage ? json(*c.fixed_shrinkage) : json("auto")}};
}

json config_to_json(const SvmConfig& c) {
    return {{"C", c.C},
            {"kernel", name_of(c.kernel)},
            {"gamma", c.gamma ? json(*c.gamma) : json("scale")},
            {"degree", c.degree},
            {"coef0", c.coef0},
            {"tol", c.tol},
            {"max_iters", c.max_iters},
            {"cache_mb", c.cache_mb}};
}

json config_to_json(const CnnConfig& c) {
    return {{"n_filters", c.n_filters},
            {"filter_h", c.filter_h},
            {"filter_w", c.filter_w},
            {"pool_w", c.pool_w},
            {"pooling", name_of(c.pooling)},
            {"dense_units", c.dense_units},
            {"dropout_p", c.dropout_p},
            {"activation", name_of(c.activation)},
            {"elu_alpha", c.elu_alpha},
            {"batchnorm", c.batchnorm},
            {"bn_momentum", c.bn_momentum},
            {"bn_epsilon", c.bn_epsilon},
            {"batch_size", c.batch_size},
            {"max_epochs", c.max_epochs},
            {"patience", c.patience},
            {"learning_rate", c.adam.learning_rate},
            {"adam_beta1", c.adam.beta1},
            {"adam_beta2", c.adam.beta2},
            {"adam_epsilon", c.adam.epsilon},
            {"seed", c.seed}};
}

json config_to_json(const SplitPlan& c) {
    return {{"holdout_fraction", c.holdout_fraction},
            {"cv_iterations", c.cv_iterations},
            {"cv_val_fraction", c.cv_val_fraction},
            {"master_seed", c.master_seed},
            {"subject_wise", c.subject_wise}};
}

json config_to_json(const AveragingConfig& c) {
    return {{"k_max", c.k_max}, {"within_subject", c.within_subject}};
}

// --- readers ---------------------------------------------------------------

SynthConfig synth_config_from_json(const json& j, const SynthConfig& base) {
    SynthConfig c = base;
    Reader r(j, "synth");
    r.read("n_epochs", c.n_epochs);
    r.read("n_channels", c.n_channels);
    r.read("n_samples", c.n_samples);
    r.read("sampling_rate_hz", c.sampling_rate_hz);
    r.read("prestim_ms", c.prestim_ms);
    r.read("p300_amplitude_uv", c.p300_amplitude_uv);
    r.read("p300_latency_ms", c.p300_latency_ms);
    r.read("latency_jitter_ms", c.latency_jitter_ms);
    r.read("p300_width_ms", c.p300_width_ms);
    r.read("noise_std_uv", c.noise_std_uv);
    r.read("channel_gains", c.channel_gains);
    r.read("seed", c.seed);
    r.finish();
    return validated(c);
}

PreprocessConfig preprocess_config_from_json(const json& j, const PreprocessConfig& base) {
    PreprocessConfig c = base;
    Reader r(j, "preprocess");
    r.read("prestim_ms", c.prestim_ms);
    r.read("poststim_ms", c.poststim_ms);
    r.read("baseline_start_ms", c.baseline_start_ms);
    r.read("baseline_end_ms", c.baseline_end_ms);
    r.read("rejection_threshold_uv", c.rejection_threshold_uv);
    r.finish();
    return validated(c);
}

FeatureConfig feature_config_from_json(const json& j, const FeatureConfig& base) {
    FeatureConfig c = base;
    Reader r(j, "features");
    r.read_enum("mode", c.mode, {{"windowed_means", FeatureMode::windowed_means}, {"raw", FeatureMode::raw}});
    r.read("window_start_ms", c.window_start_ms);
    r.read("window_end_ms", c.window_end_ms);
    r.read("n_intervals", c.n_intervals);
    r.finish();
    return validated(c);
}

LdaConfig lda_config_from_json(const json& j, const LdaConfig& base) {
    LdaConfig c = base;
    Reader r(j, "lda");
    r.read_optional("shrinkage", c.fixed_shrinkage, "auto");
    r.finish();
    if (c.fixed_shrinkage && !(*c.fixed_shrinkage >= 0.0 && *c.fixed_shrinkage <= 1.0))
        throw_config("invalid value for 'lda.shrinkage': must be \"auto\" or lie in [0, 1]");
    return c;
}

SvmConfig svm_config_from_json(const json& j, const SvmConfig& base) {
    SvmConfig c = base;
    Reader r(j, "svm");
    r.read("C", c.C);
    r.read_enum("kernel", c.kernel,
                {{"rbf", KernelType::rbf}, {"linear", KernelType::linear}, {"polynomial", KernelType::polynomial}});
    r.read_optional("gamma", c.gamma, "scale");
    r.read("degree", c.degree);
    r.read("coef0", c.coef0);
    r.read("tol", c.tol);
    r.read("max_iters", c.max_iters);
    r.read("cache_mb", c.cache_mb);
    r.finish();
    return validated(c);
}

CnnConfig cnn_config_from_json(const json& j, const CnnConfig& base) {
    CnnConfig c = base;
    Reader r(j, "cnn");
    r.read("n_filters", c.n_filters);
    r.read("filter_h", c.filter_h);
    r.read("filter_w", c.filter_w);
    r.read("pool_w", c.pool_w);
    r.read_enum("pooling", c.pooling, {{"average", Pooling::average}, {"max", Pooling::max}});
    r.read("dense_units", c.dense_units);
    r.read("dropout_p", c.dropout_p);
    r.read_enum("activation", c.activation, {{"elu", Activation::elu}, {"relu", Activation::relu}});
    r.read("elu_alpha", c.elu_alpha);
    r.read("batchnorm", c.batchnorm);
    r.read("bn_momentum", c.bn_momentum);
    r.read("bn_epsilon", c.bn_epsilon);
    r.read("batch_size", c.batch_size);
    r.read("max_epochs", c.max_epochs);
    r.read("patience", c.patience);
    r.read("learning_rate", c.adam.learning_rate);
    r.read("adam_beta1", c.adam.beta1);
    r.read("adam_beta2", c.adam.beta2);
    r.read("adam_epsilon", c.adam.epsilon);
    r.read("seed", c.seed);
    r.finish();
    return validated(c);
}

SplitPlan split_plan_from_json(const json& j, const SplitPlan& base) {
    SplitPlan c = base;
    Reader r(j, "splits");
    r.read("holdout_fraction", c.holdout_fraction);
    r.read("cv_iterations", c.cv_iterations);
    r.read("cv_val_fraction", c.cv_val_fraction);
    r.read("master_seed", c.master_seed);
    r.read("subject_wise", c.subject_wise);
    r.finish();
    return validated(c);
}

AveragingConfig averaging_config_from_json(const json& j, const AveragingConfig& base) {
    AveragingConfig c = base;
    Reader r(j, "averaging");
    r.read("k_max", c.k_max);
    r.read("within_subject", c.within_subject);
    r.finish();
    return validated(c);
}

json model_spec_to_json(const ModelSpec& spec) {
    json j = {{"name", spec.name}, {"type", to_string(spec.kind)}};
    switch (spec.kind) {
        case ModelKind::lda:
            j["features"] = config_to_json(spec.features);
            j["standardize"] = spec.standardize;
            j["lda"] = config_to_json(spec.lda);
            break;
        case ModelKind::svm:
            j["features"] = config_to_json(spec.features);
            j["standardize"] = spec.standardize;
            j["svm"] = config_to_json(spec.svm);
            break;
        case ModelKind::cnn: j["cnn"] = config_to_json(spec.cnn); break;
    }
    return j;
}

ModelSpec model_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw_config("model entries need a string 'type' (lda, svm or cnn)");
    return model_spec_from_json(j, default_model(parse_model_kind(j.at("type").get<std::string>())));
}

ModelSpec model_spec_from_json(const json& j, const ModelSpec& base) {
    ModelSpec spec = base;
    Reader r(j, "models");
    std::string type = to_string(spec.kind);
    r.read("type", type);
    spec.kind = parse_model_kind(type);
    r.read("name", spec.name);
    if (spec.name.empty()) spec.name = type;
    r.read("standardize", spec.standardize);
    json sub;
    r.read("features", sub);
    if (!sub.is_null()) spec.features = feature_config_from_json(sub, spec.features);
    sub = nullptr;
    r.read("lda", sub);
    if (!sub.is_null()) spec.lda = lda_config_from_json(sub, spec.lda);
    sub = nullptr;
    r.read("svm", sub);
    if (!sub.is_null()) spec.svm = svm_config_from_json(sub, spec.svm);
    sub = nullptr;
    r.read("cnn", sub);
    if (!sub.is_null()) spec.cnn = cnn_config_from_json(sub, spec.cnn);
    r.finish();
    return spec;
}

FeatureConfig parse_window(const std::string& text, FeatureConfig base) {
    const auto sep = text.find_first_of("-:", 1);
    double lo = 0.0, hi = 0.0;
    const char* end = text.data() + text.size();
    bool ok = sep != std::string::npos;
    if (ok) {
        const auto a = std::from_chars(text.data(), text.data() + sep, lo);
        const auto b = std::from_chars(text.data() + sep + 1, end, hi);
        ok = a.ec == std::errc{} && a.ptr == text.data() + sep && b.ec == std::errc{} && b.ptr == end;
    }
    if (!ok) throw_config("invalid window '" + text + "': expected START-END in milliseconds");
    base.mode = FeatureMode::windowed_means;
    base.window_start_ms = lo;
    base.window_end_ms = hi;
    base.validate();
    return base;
}

}  // namespace p300
