#include "p300bench/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "cnn_layers.hpp"
#include "p300bench/config_io.hpp"
#include "p300bench/error.hpp"

namespace p300 {

namespace {

constexpr std::size_t kEvalChunk = 256;
constexpr int kCheckpointVersion = 1;

Batch gather(const Batch& x, std::span<const std::size_t> indices) {
    Batch out(indices.size(), x.shape);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = x.sample(indices[i]);
        std::copy(src.begin(), src.end(), out.sample(i).begin());
    }
    return out;
}

Batch slice(const Batch& x, std::size_t begin, std::size_t end) {
    Batch out(end - begin, x.shape);
    const std::size_t sz = x.shape.size();
    std::copy(x.data.begin() + static_cast<std::ptrdiff_t>(begin * sz),
              x.data.begin() + static_cast<std::ptrdiff_t>(end * sz), out.data.begin());
    return out;
}

Matrix softmax_rows(const Batch& logits) {
    const std::size_t k = logits.shape.size();
    Matrix p(logits.n, k);
    for (std::size_t b = 0; b < logits.n; ++b) {
        const auto z = logits.sample(b);
        const double zmax = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            p(b, i) = std::exp(z[i] - zmax);
            sum += p(b, i);
        }
        for (std::size_t i = 0; i < k; ++i) p(b, i) /= sum;
    }
    return p;
}

void check_finite(const Batch& b, std::size_t logical) {
    for (double v : b.data)
        if (!std::isfinite(v)) throw_runtime("numeric overflow at layer " + std::to_string(logical));
}

}  // namespace

// ---------------------------------------------------------------------------

double elu(double x, double alpha) noexcept { return x > 0.0 ? x : alpha * std::expm1(x); }

double elu_derivative(double x, double alpha) noexcept { return x > 0.0 ? 1.0 : alpha * std::exp(x); }

void CnnConfig::validate() const {
    if (n_filters < 1 || filter_h < 1 || filter_w < 1 || pool_w < 1 || batch_size < 1 || max_epochs < 1 ||
        patience < 1)
        throw_config("cnn: all counts must be >= 1");
    for (std::size_t u : dense_units)
        if (u < 1) throw_config("cnn: dense layer widths must be >= 1");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw_config("cnn: dropout_p must lie in [0, 1)");
    if (!(elu_alpha > 0.0)) throw_config("cnn: elu_alpha must be > 0");
    if (!(adam.learning_rate > 0.0) || !(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
        !(adam.beta2 >= 0.0 && adam.beta2 < 1.0) || !(adam.epsilon > 0.0))
        throw_config("cnn: invalid Adam hyperparameters");
    if (!(bn_momentum >= 0.0 && bn_momentum < 1.0) || !(bn_epsilon > 0.0))
        throw_config("cnn: invalid batchnorm hyperparameters");
}

Batch batch_from_epochs(const EpochSet& set, std::span<const std::size_t> indices) {
    Batch b(indices.size(), {set.n_channels, set.n_samples, 1});
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto ep = set.epoch(indices[i]);
        std::copy(ep.begin(), ep.end(), b.sample(i).begin());
    }
    return b;
}

Batch batch_from_epochs(const EpochSet& set) {
    Batch b;
    b.n = set.size();
    b.shape = {set.n_channels, set.n_samples, 1};
    b.data = set.data;
    return b;
}

ForwardCache::ForwardCache() = default;
ForwardCache::ForwardCache(ForwardCache&&) noexcept = default;
ForwardCache& ForwardCache::operator=(ForwardCache&&) noexcept = default;
ForwardCache::~ForwardCache() = default;

// ---------------------------------------------------------------------------

CnnModel::CnnModel(const CnnConfig& cfg, Shape3 input, SeededRng& init_rng) : cfg_(cfg), input_(input) {
    cfg_.validate();
    if (input.size() == 0) throw_runtime("cnn input must be non-empty");
    if (cfg_.filter_h > input.height || cfg_.filter_w > input.width)
        throw_config("cnn: filter larger than the input");
    const std::size_t conv_w = input.width - cfg_.filter_w + 1;
    if (conv_w / cfg_.pool_w == 0) throw_config("cnn: pooling width exceeds the convolution output");

    auto add = [&](std::unique_ptr<detail::Layer> layer, std::size_t logical) {
        layers_.push_back(std::move(layer));
        logical_of_.push_back(logical);
    };
    std::size_t logical = 1;
    add(detail::make_conv(input, cfg_.n_filters, cfg_.filter_h, cfg_.filter_w, init_rng), logical);
    add(detail::make_activation(cfg_.activation, cfg_.elu_alpha), logical);
    ++logical;
    add(cfg_.batchnorm ? detail::make_batchnorm(cfg_.n_filters, cfg_.bn_momentum, cfg_.bn_epsilon)
                       : detail::make_identity("batchnorm-off"),
        logical++);
    add(detail::make_dropout(cfg_.dropout_p), logical++);
    add(detail::make_pool(cfg_.pooling, cfg_.pool_w), logical++);
    add(detail::make_flatten(), logical++);

    Shape3 shape = input;
    for (const auto& l : layers_) shape = l->output_shape(shape);
    std::size_t features = shape.size();
    for (std::size_t units : cfg_.dense_units) {
        add(detail::make_dense(features, units, init_rng), logical);
        add(detail::make_activation(cfg_.activation, cfg_.elu_alpha), logical);
        ++logical;
        add(cfg_.batchnorm ? detail::make_batchnorm(units, cfg_.bn_momentum, cfg_.bn_epsilon)
                           : detail::make_identity("batchnorm-off"),
            logical++);
        add(detail::make_dropout(cfg_.dropout_p), logical++);
        features = units;
    }
    add(detail::make_dense(features, 2, init_rng), logical);
}

CnnModel::CnnModel(const CnnModel& other)
    : training_log(other.training_log), best_epoch(other.best_epoch), stopped_early(other.stopped_early),
      warnings(other.warnings), cfg_(other.cfg_), input_(other.input_), logical_of_(other.logical_of_) {
    for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

CnnModel& CnnModel::operator=(const CnnModel& other) {
    if (this != &other) {
        CnnModel tmp(other);
        *this = std::move(tmp);
    }
    return *this;
}

CnnModel::CnnModel(CnnModel&&) noexcept = default;
CnnModel& CnnModel::operator=(CnnModel&&) noexcept = default;
CnnModel::~CnnModel() = default;

std::size_t CnnModel::n_logical_layers() const noexcept { return logical_of_.empty() ? 0 : logical_of_.back(); }

Shape3 CnnModel::logical_output_shape(std::size_t logical_index) const {
    if (logical_index < 1 || logical_index > n_logical_layers())
        throw_config("invalid layer index " + std::to_string(logical_index));
    Shape3 shape = input_;
    for (std::size_t k = 0; k < layers_.size() && logical_of_[k] <= logical_index; ++k)
        shape = layers_[k]->output_shape(shape);
    return shape;
}

ForwardCache CnnModel::forward(const Batch& x, Mode mode, SeededRng* dropout_rng) {
    if (x.shape != input_) throw_runtime("dimension mismatch: input shape does not match the model");
    ForwardCache cache;
    cache.activations.resize(layers_.size() + 1);
    cache.scratch.resize(layers_.size());
    cache.activations[0] = x;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        layers_[k]->forward(cache.activations[k], cache.activations[k + 1], mode, dropout_rng, cache.scratch[k]);
        check_finite(cache.activations[k + 1], logical_of_[k]);
    }
    cache.probabilities = softmax_rows(cache.activations.back());
    return cache;
}

Gradients CnnModel::backward(const ForwardCache& cache, std::span<const Label> labels) const {
    const Batch& logits = cache.activations.back();
    if (labels.size() != logits.n) throw_runtime("label count does not match batch");

    Gradients grads;
    std::vector<std::size_t> offset(layers_.size());
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        offset[k] = grads.size();
        for (const auto& p : const_cast<detail::Layer&>(*layers_[k]).params())
            grads.emplace_back(p.values->size(), 0.0);
    }

    Batch delta(logits.n, logits.shape);
    const double inv_b = 1.0 / static_cast<double>(logits.n);
    for (std::size_t b = 0; b < logits.n; ++b)
        for (std::size_t c = 0; c < 2; ++c)
            delta.sample(b)[c] = (cache.probabilities(b, c) - (labels[b] == c ? 1.0 : 0.0)) * inv_b;

    for (std::size_t k = layers_.size(); k-- > 0;) {
        const std::size_t n_params = (k + 1 < layers_.size() ? offset[k + 1] : grads.size()) - offset[k];
        std::span<std::vector<double>> g(grads.data() + offset[k], n_params);
        Batch din;
        layers_[k]->backward(cache.activations[k], cache.activations[k + 1], delta, k > 0 ? &din : nullptr,
                             cache.scratch[k], g);
        if (k > 0) delta = std::move(din);
    }
    return grads;
}

double CnnModel::cross_entropy(const Matrix& probabilities, std::span<const Label> labels) {
    double loss = 0.0;
    for (std::size_t b = 0; b < probabilities.rows(); ++b)
        loss -= std::log(std::max(probabilities(b, labels[b]), std::numeric_limits<double>::min()));
    return loss / static_cast<double>(probabilities.rows());
}

std::vector<ParamRef> CnnModel::parameters() {
    std::vector<ParamRef> out;
    for (std::size_t k = 0; k < layers_.size(); ++k)
        for (auto& p : layers_[k]->params())
            out.push_back({"layer" + std::to_string(logical_of_[k]) + "." + layers_[k]->kind() + "." + p.name,
                           std::span<double>(*p.values)});
    return out;
}

std::size_t CnnModel::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_)
        for (const auto& p : const_cast<detail::Layer&>(*l).params()) n += p.values->size();
    return n;
}

std::vector<std::size_t> CnnModel::parameter_layers() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < layers_.size(); ++k)
        out.insert(out.end(), const_cast<detail::Layer&>(*layers_[k]).params().size(), k);
    return out;
}

double CnnModel::loss_from(const ForwardCache& cache, std::size_t first, std::span<const Label> labels) {
    if (first >= layers_.size()) throw_runtime("invalid physical layer " + std::to_string(first));
    Batch cur = cache.activations[first];
    Batch next;
    detail::Scratch scratch;
    for (std::size_t k = first; k < layers_.size(); ++k) {
        layers_[k]->forward(cur, next, Mode::train, nullptr, scratch);
        std::swap(cur, next);
    }
    return cross_entropy(softmax_rows(cur), labels);
}

Batch CnnModel::run_eval(const Batch& x, std::size_t stop_after_physical) const {
    if (x.shape != input_) throw_runtime("dimension mismatch: input shape does not match the model");
    Batch cur = x;
    Batch next;
    for (std::size_t k = 0; k <= stop_after_physical; ++k) {
        layers_[k]->infer(cur, next);
        check_finite(next, logical_of_[k]);
        std::swap(cur, next);
    }
    return cur;
}

std::vector<double> CnnModel::predict_proba(const Batch& x) const {
    std::vector<double> out;
    out.reserve(x.n);
    for (std::size_t begin = 0; begin < x.n; begin += kEvalChunk) {
        const Batch chunk = slice(x, begin, std::min(x.n, begin + kEvalChunk));
        const Matrix p = softmax_rows(run_eval(chunk, layers_.size() - 1));
        for (std::size_t b = 0; b < p.rows(); ++b) out.push_back(p(b, 1));
    }
    return out;
}

std::vector<Label> CnnModel::predict(const Batch& x) const {
    std::vector<Label> out;
    for (double p : predict_proba(x)) out.push_back(p > kProbabilityThreshold ? 1 : 0);
    return out;
}

double CnnModel::evaluate_loss(const Batch& x, std::span<const Label> labels) const {
    if (labels.size() != x.n) throw_runtime("label count does not match batch");
    double total = 0.0;
    for (std::size_t begin = 0; begin < x.n; begin += kEvalChunk) {
        const std::size_t end = std::min(x.n, begin + kEvalChunk);
        const Matrix p = softmax_rows(run_eval(slice(x, begin, end), layers_.size() - 1));
        total += cross_entropy(p, labels.subspan(begin, end - begin)) * static_cast<double>(end - begin);
    }
    return total / static_cast<double>(x.n);
}

Batch CnnModel::layer_output(const Batch& x, std::size_t logical_index) const {
    if (logical_index < 1 || logical_index > n_logical_layers())
        throw_config("invalid layer index " + std::to_string(logical_index));
    std::size_t last = 0;
    for (std::size_t k = 0; k < layers_.size(); ++k)
        if (logical_of_[k] == logical_index) last = k;
    Batch out = run_eval(x, last);
    if (logical_index == n_logical_layers()) {
        const Matrix p = softmax_rows(out);
        std::copy(p.data().begin(), p.data().end(), out.data.begin());
    }
    return out;
}

std::vector<std::vector<double>> CnnModel::snapshot() const {
    std::vector<std::vector<double>> out;
    for (const auto& l : layers_)
        for (const auto& buf : const_cast<detail::Layer&>(*l).state()) out.push_back(*buf.values);
    return out;
}

void CnnModel::restore(const std::vector<std::vector<double>>& state) {
    std::size_t i = 0;
    for (auto& l : layers_) {
        for (auto& buf : l->state()) {
            if (i >= state.size() || state[i].size() != buf.values->size())
                throw_data("checkpoint does not match the model architecture");
            *buf.values = state[i++];
        }
    }
    if (i != state.size()) throw_data("checkpoint does not match the model architecture");
}

nlohmann::json CnnModel::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        nlohmann::json buffers = nlohmann::json::object();
        for (const auto& buf : const_cast<detail::Layer&>(*layers_[k]).state()) buffers[buf.name] = *buf.values;
        layers.push_back({{"logical", logical_of_[k]}, {"kind", layers_[k]->kind()}, {"buffers", buffers}});
    }
    nlohmann::json log = nlohmann::json::array();
    for (const auto& r : training_log)
        log.push_back({{"epoch", r.epoch},
                       {"train_loss", r.train_loss},
                       {"val_loss", std::isfinite(r.val_loss) ? nlohmann::json(r.val_loss) : nlohmann::json()}});
    return {{"format", "p300bench-cnn"},
            {"version", kCheckpointVersion},
            {"config", config_to_json(cfg_)},
            {"input_shape", {input_.height, input_.width, input_.maps}},
            {"layers", layers},
            {"training_log", log},
            {"best_epoch", best_epoch},
            {"stopped_early", stopped_early}};
}

CnnModel CnnModel::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "p300bench-cnn" || j.value("version", 0) != kCheckpointVersion)
        throw_data("not a CNN checkpoint");
    const CnnConfig cfg = cnn_config_from_json(j.at("config"));
    const auto dims = j.at("input_shape").get<std::vector<std::size_t>>();
    if (dims.size() != 3) throw_data("checkpoint input_shape must have three entries");
    SeededRng rng(cfg.seed);
    CnnModel model(cfg, {dims[0], dims[1], dims[2]}, rng);

    const auto& layers = j.at("layers");
    if (layers.size() != model.layers_.size()) throw_data("checkpoint does not match the model architecture");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (layers[k].at("kind").get<std::string>() != model.layers_[k]->kind())
            throw_data("checkpoint does not match the model architecture");
        const auto& buffers = layers[k].at("buffers");
        for (auto& buf : model.layers_[k]->state()) {
            auto values = buffers.at(buf.name).get<std::vector<double>>();
            if (values.size() != buf.values->size()) throw_data("checkpoint does not match the model architecture");
            *buf.values = std::move(values);
        }
    }
    for (const auto& r : j.value("training_log", nlohmann::json::array())) {
        EpochRecord rec;
        rec.epoch = r.at("epoch").get<std::size_t>();
        rec.train_loss = r.at("train_loss").get<double>();
        rec.val_loss = r.at("val_loss").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : r.at("val_loss").get<double>();
        model.training_log.push_back(rec);
    }
    model.best_epoch = j.value("best_epoch", std::size_t{0});
    model.stopped_early = j.value("stopped_early", false);
    return model;
}

void CnnModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw_data("cannot write " + path.string());
    out << to_json().dump() << '\n';
}

CnnModel CnnModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw_data("malformed checkpoint " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------

void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               std::size_t t, const AdamConfig& cfg) {
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    }
}

void adam_step(CnnModel& model, const Gradients& grads, AdamState& state, const AdamConfig& cfg) {
    auto params = model.parameters();
    if (grads.size() != params.size()) throw_runtime("gradient count does not match parameters");
    if (state.m.empty()) {
        for (const auto& p : params) {
            state.m.emplace_back(p.values.size(), 0.0);
            state.v.emplace_back(p.values.size(), 0.0);
        }
    }
    ++state.t;
    for (std::size_t i = 0; i < params.size(); ++i)
        adam_step(params[i].values, grads[i], state.m[i], state.v[i], state.t, cfg);
}

bool EarlyStopping::update(double val_loss) {
    ++epoch_;
    if (epoch_ == 1 || val_loss < best_loss_) {
        best_loss_ = val_loss;
        best_epoch_ = epoch_;
        wait_ = 0;
        improved_last_ = true;
    } else {
        ++wait_;
        improved_last_ = false;
    }
    return wait_ >= patience_;
}

CnnModel train_cnn(const Batch& train_x, std::span<const Label> train_y, const Batch& val_x,
                   std::span<const Label> val_y, const CnnConfig& cfg) {
    cfg.validate();
    if (train_x.n == 0) throw_runtime("empty training set");
    if (train_y.size() != train_x.n || val_y.size() != val_x.n) throw_runtime("label count does not match batch");
    const auto n_target = static_cast<std::size_t>(std::count(train_y.begin(), train_y.end(), Label{1}));
    if (n_target == 0 || n_target == train_x.n) throw_runtime("need two classes");

    const SeededRng root(cfg.seed);
    SeededRng init_rng = root.child(0);
    SeededRng shuffle_rng = root.child(1);
    SeededRng dropout_rng = root.child(2);

    CnnModel model(cfg, train_x.shape, init_rng);
    const bool use_val = val_x.n > 0;
    if (!use_val) model.warnings.push_back("empty validation set: early stopping disabled");

    AdamState adam;
    EarlyStopping stopper(cfg.patience);
    auto best_state = model.snapshot();

    std::vector<std::size_t> order(train_x.n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<Label> batch_labels;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < train_x.n; begin += cfg.batch_size) {
            const std::size_t end = std::min(train_x.n, begin + cfg.batch_size);
            const std::span<const std::size_t> idx(order.data() + begin, end - begin);
            const Batch xb = gather(train_x, idx);
            batch_labels.clear();
            for (std::size_t i : idx) batch_labels.push_back(train_y[i]);

            const ForwardCache cache = model.forward(xb, Mode::train, &dropout_rng);
            loss_sum += CnnModel::cross_entropy(cache.probabilities, batch_labels) * static_cast<double>(idx.size());
            const Gradients grads = model.backward(cache, batch_labels);
            adam_step(model, grads, adam, cfg.adam);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(train_x.n);
        rec.val_loss = use_val ? model.evaluate_loss(val_x, val_y) : std::numeric_limits<double>::quiet_NaN();
        model.training_log.push_back(rec);

        if (use_val) {
            const bool stop = stopper.update(rec.val_loss);
            if (stopper.improved_last()) best_state = model.snapshot();
            if (stop && epoch < cfg.max_epochs) {
                model.stopped_early = true;
                break;
            }
        }
    }

    if (use_val) {
        model.restore(best_state);
        model.best_epoch = stopper.best_epoch();
    } else {
        model.best_epoch = model.training_log.size();
    }
    return model;
}

CnnModel train_cnn(const EpochSet& train, const EpochSet& val, const CnnConfig& cfg) {
    const Batch tx = batch_from_epochs(train);
    const Batch vx = val.size() ? batch_from_epochs(val) : Batch(0, tx.shape);
    return train_cnn(tx, train.labels, vx, val.labels, cfg);
}

LayerMap layer_outputs(const CnnModel& model, const Batch& x, std::size_t logical_index) {
    if (x.n == 0) throw_runtime("no inputs for layer map");
    const Shape3 shape = model.logical_output_shape(logical_index);
    const std::size_t positions = shape.height * shape.width;
    LayerMap map;
    map.shape = shape;
    map.n_inputs = x.n;
    map.mean = Matrix(positions, shape.maps);
    Matrix m2(positions, shape.maps);

    // Welford accumulation keeps the result independent of chunking.
    std::size_t seen = 0;
    for (std::size_t begin = 0; begin < x.n; begin += kEvalChunk) {
        const Batch out = model.layer_output(slice(x, begin, std::min(x.n, begin + kEvalChunk)), logical_index);
        for (std::size_t b = 0; b < out.n; ++b) {
            ++seen;
            const auto s = out.sample(b);
            for (std::size_t i = 0; i < s.size(); ++i) {
                double& mean = map.mean.data()[i];
                const double d = s[i] - mean;
                mean += d / static_cast<double>(seen);
                m2.data()[i] += d * (s[i] - mean);
            }
        }
    }
    map.stddev = Matrix(positions, shape.maps);
    for (std::size_t i = 0; i < m2.data().size(); ++i)
        map.stddev.data()[i] = std::sqrt(m2.data()[i] / static_cast<double>(seen));
    return map;
}

void write_training_log_csv(const std::vector<EpochRecord>& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write " + path.string());
    out.precision(17);
    out << "epoch,train_loss,val_loss\n";
    for (const auto& r : log) {
        out << r.epoch << ',' << r.train_loss << ',';
        if (std::isfinite(r.val_loss)) out << r.val_loss;
        out << '\n';
    }
}

void write_layer_map_csv(const LayerMap& map, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_data("cannot write " + path.string());
    out.precision(17);
    out << "index";
    for (std::size_t c = 0; c < map.mean.cols(); ++c) out << ",f" << c;
    out << '\n';
    for (std::size_t r = 0; r < map.mean.rows(); ++r) {
        out << r;
        for (double v : map.mean.row(r)) out << ',' << v;
        out << '\n';
    }
}

}  // namespace p300
