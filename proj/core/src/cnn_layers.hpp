#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "p300bench/cnn.hpp"

namespace p300::detail {

/// Per-layer values a forward pass leaves for the backward pass.
struct Scratch {
    std::vector<double> values;       // batchnorm x_hat, dropout mask
    std::vector<double> aux;          // batchnorm inverse std per map
    std::vector<std::uint32_t> index; // max-pool argmax
};

struct NamedBuffer {
    std::string name;
    std::vector<double>* values;
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual std::unique_ptr<Layer> clone() const = 0;
    virtual std::string kind() const = 0;
    virtual Shape3 output_shape(Shape3 in) const = 0;

    virtual void forward(const Batch& in, Batch& out, Mode mode, SeededRng* rng, Scratch& scratch) = 0;
    /// Eval-mode forward that leaves the layer untouched.
    virtual void infer(const Batch& in, Batch& out) const = 0;
    /// Accumulates parameter gradients into `grads` (aligned with params()) and,
    /// when din is non-null, writes the input gradient.
    virtual void backward(const Batch& in, const Batch& out, const Batch& dout, Batch* din, const Scratch& scratch,
                          std::span<std::vector<double>> grads) const = 0;

    virtual std::vector<NamedBuffer> params() { return {}; }
    /// params() followed by non-trainable state such as running statistics.
    virtual std::vector<NamedBuffer> state() { return params(); }
};

std::unique_ptr<Layer> make_conv(Shape3 in, std::size_t n_filters, std::size_t fh, std::size_t fw, SeededRng& rng);
std::unique_ptr<Layer> make_activation(Activation a, double alpha);
std::unique_ptr<Layer> make_batchnorm(std::size_t maps, double momentum, double epsilon);
std::unique_ptr<Layer> make_identity(std::string kind);
std::unique_ptr<Layer> make_dropout(double p);
std::unique_ptr<Layer> make_pool(Pooling type, std::size_t width);
std::unique_ptr<Layer> make_flatten();
std::unique_ptr<Layer> make_dense(std::size_t in_features, std::size_t units, SeededRng& rng);

}  // namespace p300::detail
