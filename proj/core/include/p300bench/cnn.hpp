#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/epochs.hpp"
#include "p300bench/matrix.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/rng.hpp"

namespace p300 {

enum class Activation { elu, relu };
enum class Pooling { average, max };
enum class Mode { train, eval };

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
};

struct CnnConfig {
    std::size_t n_filters = 6;
    std::size_t filter_h = 3;
    std::size_t filter_w = 3;
    std::size_t pool_w = 8;
    std::vector<std::size_t> dense_units{100};
    double dropout_p = 0.5;
    double elu_alpha = 1.0;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 30;
    std::size_t patience = 5;
    AdamConfig adam;
    Activation activation = Activation::elu;
    Pooling pooling = Pooling::average;
    bool batchnorm = true;
    double bn_momentum = 0.9;
    double bn_epsilon = 1e-5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Height x width x maps. Epochs enter as channels x samples x 1.
struct Shape3 {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t maps = 0;

    std::size_t size() const noexcept { return height * width * maps; }
    friend bool operator==(const Shape3&, const Shape3&) = default;
};

/// A stack of equally shaped tensors stored [sample][height][width][map].
struct Batch {
    std::size_t n = 0;
    Shape3 shape;
    std::vector<double> data;

    Batch() = default;
    Batch(std::size_t n_samples, Shape3 s) : n(n_samples), shape(s), data(n_samples * s.size(), 0.0) {}

    std::span<double> sample(std::size_t i) noexcept { return {data.data() + i * shape.size(), shape.size()}; }
    std::span<const double> sample(std::size_t i) const noexcept {
        return {data.data() + i * shape.size(), shape.size()};
    }
};

Batch batch_from_epochs(const EpochSet& set, std::span<const std::size_t> indices);
Batch batch_from_epochs(const EpochSet& set);

namespace detail {
class Layer;
struct Scratch;
}  // namespace detail

/// Activations of one forward pass, reused by backward().
struct ForwardCache {
    ForwardCache();
    ForwardCache(ForwardCache&&) noexcept;
    ForwardCache& operator=(ForwardCache&&) noexcept;
    ~ForwardCache();

    std::vector<Batch> activations;  ///< [0] is the input, [k + 1] the output of physical layer k
    std::vector<detail::Scratch> scratch;
    Matrix probabilities;            ///< n x 2 softmax output
};

struct ParamRef {
    std::string name;
    std::span<double> values;
};

/// Gradients aligned with CnnModel::parameters().
using Gradients = std::vector<std::vector<double>>;

struct EpochRecord {
    std::size_t epoch = 0;  ///< 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;  ///< NaN when there is no validation set
};

/// Mean (and per-cell standard deviation) of one layer's activation over a set of inputs.
struct LayerMap {
    Matrix mean;    ///< rows = height * width positions, cols = maps
    Matrix stddev;  ///< population standard deviation across inputs
    std::size_t n_inputs = 0;
    Shape3 shape;
};

/// conv(+activation) -> batchnorm -> dropout -> pool -> flatten ->
/// [dense(+activation) -> batchnorm -> dropout]... -> dense(2) -> softmax.
///
/// Logical layer numbers start at 1 and follow the list above (conv = 1,
/// pooling = 4, flatten = 5, first dense = 6, ...); the softmax output is the
/// last. Disabled batchnorm or zero dropout keep their number and act as identity.
class CnnModel {
public:
    CnnModel(const CnnConfig& cfg, Shape3 input, SeededRng& init_rng);
    CnnModel(const CnnModel& other);
    CnnModel& operator=(const CnnModel& other);
    CnnModel(CnnModel&&) noexcept;
    CnnModel& operator=(CnnModel&&) noexcept;
    ~CnnModel();

    const CnnConfig& config() const noexcept { return cfg_; }
    Shape3 input_shape() const noexcept { return input_; }
    std::size_t n_logical_layers() const noexcept;
    Shape3 logical_output_shape(std::size_t logical_index) const;

    /// Train mode draws dropout masks from `dropout_rng` and updates batchnorm running statistics.
    ForwardCache forward(const Batch& x, Mode mode, SeededRng* dropout_rng = nullptr);
    /// Gradients of the mean cross-entropy -(1/B) sum ln p[label].
    Gradients backward(const ForwardCache& cache, std::span<const Label> labels) const;

    /// Mean cross-entropy of cached probabilities.
    static double cross_entropy(const Matrix& probabilities, std::span<const Label> labels);

    std::vector<ParamRef> parameters();
    std::size_t parameter_count() const;
    /// Physical layer owning each parameters() block.
    std::vector<std::size_t> parameter_layers() const;
    std::size_t n_physical_layers() const noexcept { return layers_.size(); }

    /// Train-mode mean cross-entropy recomputed from the cached input of physical
    /// layer `first` onward; earlier activations are taken from `cache` as they are.
    /// Only valid when dropout draws nothing (dropout_p = 0).
    double loss_from(const ForwardCache& cache, std::size_t first, std::span<const Label> labels);

    /// Eval-mode target-class probability per sample, processed in chunks.
    std::vector<double> predict_proba(const Batch& x) const;
    std::vector<Label> predict(const Batch& x) const;
    double evaluate_loss(const Batch& x, std::span<const Label> labels) const;

    /// Eval-mode activations after logical layer `logical_index` (1-based).
    Batch layer_output(const Batch& x, std::size_t logical_index) const;

    /// Every persistent buffer: parameters and batchnorm running statistics.
    std::vector<std::vector<double>> snapshot() const;
    void restore(const std::vector<std::vector<double>>& state);

    std::vector<EpochRecord> training_log;
    std::size_t best_epoch = 0;
    bool stopped_early = false;
    std::vector<std::string> warnings;

    nlohmann::json to_json() const;
    static CnnModel from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static CnnModel load(const std::filesystem::path& path);

private:
    Batch run_eval(const Batch& x, std::size_t stop_after_physical) const;

    CnnConfig cfg_;
    Shape3 input_;
    std::vector<std::unique_ptr<detail::Layer>> layers_;
    std::vector<std::size_t> logical_of_;  ///< logical index of each physical layer
};

double elu(double x, double alpha) noexcept;
double elu_derivative(double x, double alpha) noexcept;

/// One Adam update on a flat parameter block; t is the 1-based step count.
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m, std::span<double> v,
               std::size_t t, const AdamConfig& cfg);

struct AdamState {
    Gradients m;
    Gradients v;
    std::size_t t = 0;
};

/// Applies adam_step to every parameter block of the model, incrementing state.t first.
void adam_step(CnnModel& model, const Gradients& grads, AdamState& state, const AdamConfig& cfg);

/// Patience-based early stopping on validation loss (strict improvement).
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

    /// Records the loss of the next epoch; true when training should stop.
    bool update(double val_loss);
    bool improved_last() const noexcept { return improved_last_; }
    std::size_t best_epoch() const noexcept { return best_epoch_; }
    double best_loss() const noexcept { return best_loss_; }
    std::size_t epochs_seen() const noexcept { return epoch_; }

private:
    std::size_t patience_;
    std::size_t epoch_ = 0;
    std::size_t best_epoch_ = 0;
    std::size_t wait_ = 0;
    double best_loss_ = 0.0;
    bool improved_last_ = false;
};

/// Mini-batch training with seeded shuffling, per-epoch validation loss in eval
/// mode, early stopping and restoration of the best-validation weights. An
/// empty validation set disables early stopping and records a warning.
CnnModel train_cnn(const Batch& train_x, std::span<const Label> train_y, const Batch& val_x,
                   std::span<const Label> val_y, const CnnConfig& cfg);
CnnModel train_cnn(const EpochSet& train, const EpochSet& val, const CnnConfig& cfg);

/// Eval-mode average of a logical layer's output over all inputs.
LayerMap layer_outputs(const CnnModel& model, const Batch& x, std::size_t logical_index);

void write_training_log_csv(const std::vector<EpochRecord>& log, const std::filesystem::path& path);
void write_layer_map_csv(const LayerMap& map, const std::filesystem::path& path);

}  // namespace p300
