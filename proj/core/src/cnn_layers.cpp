#include "cnn_layers.hpp"

#include <cmath>

#include "p300bench/error.hpp"

namespace p300::detail {

namespace {

// Normal(0, 1/sqrt(fan_in)) truncated at two standard deviations.
void init_fan_in(std::vector<double>& w, std::size_t fan_in, SeededRng& rng) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : w) {
        double z = rng.normal();
        while (std::abs(z) > 2.0) z = rng.normal();
        v = sd * z;
    }
}

class Conv2D final : public Layer {
public:
    Conv2D(Shape3 in, std::size_t nf, std::size_t fh, std::size_t fw)
        : in_(in), nf_(nf), fh_(fh), fw_(fw), kernel_(nf * fh * fw * in.maps, 0.0), bias_(nf, 0.0) {}

    void init(SeededRng& rng) { init_fan_in(kernel_, fh_ * fw_ * in_.maps, rng); }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv2D>(*this); }
    std::string kind() const override { return "conv"; }
    Shape3 output_shape(Shape3 in) const override { return {in.height - fh_ + 1, in.width - fw_ + 1, nf_}; }

    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch&) override { infer(in, out); }

    void infer(const Batch& in, Batch& out) const override {
        const Shape3 os = output_shape(in.shape);
        out = Batch(in.n, os);
        const std::size_t cin = in.shape.maps;
        const std::size_t w_in = in.shape.width;
        for (std::size_t b = 0; b < in.n; ++b) {
            const double* x = in.sample(b).data();
            double* y = out.sample(b).data();
            for (std::size_t oh = 0; oh < os.height; ++oh) {
                for (std::size_t ow = 0; ow < os.width; ++ow) {
                    double* cell = y + (oh * os.width + ow) * nf_;
                    for (std::size_t f = 0; f < nf_; ++f) {
                        double acc = bias_[f];
                        const double* k = kernel_.data() + f * fh_ * fw_ * cin;
                        for (std::size_t dh = 0; dh < fh_; ++dh) {
                            const double* xr = x + ((oh + dh) * w_in + ow) * cin;
                            const double* kr = k + dh * fw_ * cin;
                            for (std::size_t i = 0; i < fw_ * cin; ++i) acc += xr[i] * kr[i];
                        }
                        cell[f] = acc;
                    }
                }
            }
        }
    }

    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch&,
                  std::span<std::vector<double>> grads) const override {
        const Shape3 os = dout.shape;
        const std::size_t cin = in.shape.maps;
        const std::size_t w_in = in.shape.width;
        auto& dk = grads[0];
        auto& db = grads[1];
        if (din) *din = Batch(in.n, in.shape);
        for (std::size_t b = 0; b < in.n; ++b) {
            const double* x = in.sample(b).data();
            const double* g = dout.sample(b).data();
            double* dx = din ? din->sample(b).data() : nullptr;
            for (std::size_t oh = 0; oh < os.height; ++oh) {
                for (std::size_t ow = 0; ow < os.width; ++ow) {
                    const double* cell = g + (oh * os.width + ow) * nf_;
                    for (std::size_t f = 0; f < nf_; ++f) {
                        const double gf = cell[f];
                        db[f] += gf;
                        double* dkf = dk.data() + f * fh_ * fw_ * cin;
                        const double* kf = kernel_.data() + f * fh_ * fw_ * cin;
                        for (std::size_t dh = 0; dh < fh_; ++dh) {
                            const std::size_t off = ((oh + dh) * w_in + ow) * cin;
                            const double* xr = x + off;
                            double* dkr = dkf + dh * fw_ * cin;
                            for (std::size_t i = 0; i < fw_ * cin; ++i) dkr[i] += gf * xr[i];
                            if (dx) {
                                const double* kr = kf + dh * fw_ * cin;
                                for (std::size_t i = 0; i < fw_ * cin; ++i) dx[off + i] += gf * kr[i];
                            }
                        }
                    }
                }
            }
        }
    }

    std::vector<NamedBuffer> params() override { return {{"kernel", &kernel_}, {"bias", &bias_}}; }

private:
    Shape3 in_;
    std::size_t nf_, fh_, fw_;
    std::vector<double> kernel_;  // [filter][dh][dw][map]
    std::vector<double> bias_;
};

class ActivationLayer final : public Layer {
public:
    ActivationLayer(Activation a, double alpha) : type_(a), alpha_(alpha) {}

    std::unique_ptr<Layer> clone() const override { return std::make_unique<ActivationLayer>(*this); }
    std::string kind() const override { return type_ == Activation::elu ? "elu" : "relu"; }
    Shape3 output_shape(Shape3 in) const override { return in; }

    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch&) override { infer(in, out); }

    void infer(const Batch& in, Batch& out) const override {
        out = Batch(in.n, in.shape);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const double x = in.data[i];
            out.data[i] = type_ == Activation::elu ? elu(x, alpha_) : (x > 0.0 ? x : 0.0);
        }
    }

    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch&,
                  std::span<std::vector<double>>) const override {
        if (!din) return;
        *din = Batch(in.n, in.shape);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const double x = in.data[i];
            const double d = type_ == Activation::elu ? elu_derivative(x, alpha_) : (x > 0.0 ? 1.0 : 0.0);
            din->data[i] = dout.data[i] * d;
        }
    }

private:
    Activation type_;
    double alpha_;
};

// Normalizes each map over (sample, height, width).
class BatchNorm final : public Layer {
public:
    BatchNorm(std::size_t maps, double momentum, double epsilon)
        : momentum_(momentum), epsilon_(epsilon), gamma_(maps, 1.0), beta_(maps, 0.0),
          running_mean_(maps, 0.0), running_var_(maps, 1.0) {}

    std::unique_ptr<Layer> clone() const override { return std::make_unique<BatchNorm>(*this); }
    std::string kind() const override { return "batchnorm"; }
    Shape3 output_shape(Shape3 in) const override { return in; }

    void forward(const Batch& in, Batch& out, Mode mode, SeededRng*, Scratch& scratch) override {
        if (mode == Mode::eval) {
            infer(in, out);
            return;
        }
        const std::size_t c = in.shape.maps;
        const std::size_t count = in.data.size() / c;
        std::vector<double> mean(c, 0.0), var(c, 0.0);
        for (std::size_t i = 0; i < in.data.size(); ++i) mean[i % c] += in.data[i];
        for (double& m : mean) m /= static_cast<double>(count);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const double d = in.data[i] - mean[i % c];
            var[i % c] += d * d;
        }
        for (double& v : var) v /= static_cast<double>(count);

        scratch.aux.resize(c);
        for (std::size_t k = 0; k < c; ++k) scratch.aux[k] = 1.0 / std::sqrt(var[k] + epsilon_);
        scratch.values.resize(in.data.size());
        out = Batch(in.n, in.shape);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const std::size_t k = i % c;
            const double xhat = (in.data[i] - mean[k]) * scratch.aux[k];
            scratch.values[i] = xhat;
            out.data[i] = gamma_[k] * xhat + beta_[k];
        }
        for (std::size_t k = 0; k < c; ++k) {
            running_mean_[k] = momentum_ * running_mean_[k] + (1.0 - momentum_) * mean[k];
            running_var_[k] = momentum_ * running_var_[k] + (1.0 - momentum_) * var[k];
        }
    }

    void infer(const Batch& in, Batch& out) const override {
        const std::size_t c = in.shape.maps;
        out = Batch(in.n, in.shape);
        std::vector<double> scale(c), shift(c);
        for (std::size_t k = 0; k < c; ++k) {
            scale[k] = gamma_[k] / std::sqrt(running_var_[k] + epsilon_);
            shift[k] = beta_[k] - scale[k] * running_mean_[k];
        }
        for (std::size_t i = 0; i < in.data.size(); ++i) out.data[i] = scale[i % c] * in.data[i] + shift[i % c];
    }

    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch& scratch,
                  std::span<std::vector<double>> grads) const override {
        const std::size_t c = in.shape.maps;
        const double count = static_cast<double>(in.data.size() / c);
        auto& dgamma = grads[0];
        auto& dbeta = grads[1];
        std::vector<double> sum_dxhat(c, 0.0), sum_dxhat_xhat(c, 0.0);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const std::size_t k = i % c;
            const double g = dout.data[i];
            const double xhat = scratch.values[i];
            dgamma[k] += g * xhat;
            dbeta[k] += g;
            const double dxhat = g * gamma_[k];
            sum_dxhat[k] += dxhat;
            sum_dxhat_xhat[k] += dxhat * xhat;
        }
        if (!din) return;
        *din = Batch(in.n, in.shape);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            const std::size_t k = i % c;
            const double dxhat = dout.data[i] * gamma_[k];
            din->data[i] = scratch.aux[k] / count *
                           (count * dxhat - sum_dxhat[k] - scratch.values[i] * sum_dxhat_xhat[k]);
        }
    }

    std::vector<NamedBuffer> params() override { return {{"gamma", &gamma_}, {"beta", &beta_}}; }
    std::vector<NamedBuffer> state() override {
        return {{"gamma", &gamma_}, {"beta", &beta_}, {"running_mean", &running_mean_}, {"running_var", &running_var_}};
    }

private:
    double momentum_, epsilon_;
    std::vector<double> gamma_, beta_, running_mean_, running_var_;
};

class Identity final : public Layer {
public:
    explicit Identity(std::string kind) : kind_(std::move(kind)) {}

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Identity>(*this); }
    std::string kind() const override { return kind_; }
    Shape3 output_shape(Shape3 in) const override { return in; }
    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch&) override { out = in; }
    void infer(const Batch& in, Batch& out) const override { out = in; }
    void backward(const Batch&, const Batch&, const Batch& dout, Batch* din, const Scratch&,
                  std::span<std::vector<double>>) const override {
        if (din) *din = dout;
    }

private:
    std::string kind_;
};

// Inverted dropout: kept units are scaled by 1 / (1 - p) during training.
class Dropout final : public Layer {
public:
    explicit Dropout(double p) : p_(p) {}

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Dropout>(*this); }
    std::string kind() const override { return "dropout"; }
    Shape3 output_shape(Shape3 in) const override { return in; }

    void forward(const Batch& in, Batch& out, Mode mode, SeededRng* rng, Scratch& scratch) override {
        if (mode == Mode::eval || p_ == 0.0) {
            out = in;
            scratch.values.clear();
            return;
        }
        if (!rng) throw_runtime("dropout in train mode needs a random generator");
        const double keep_scale = 1.0 / (1.0 - p_);
        scratch.values.resize(in.data.size());
        out = Batch(in.n, in.shape);
        for (std::size_t i = 0; i < in.data.size(); ++i) {
            scratch.values[i] = rng->uniform() >= p_ ? keep_scale : 0.0;
            out.data[i] = in.data[i] * scratch.values[i];
        }
    }

    void infer(const Batch& in, Batch& out) const override { out = in; }

    void backward(const Batch&, const Batch&, const Batch& dout, Batch* din, const Scratch& scratch,
                  std::span<std::vector<double>>) const override {
        if (!din) return;
        *din = dout;
        if (scratch.values.empty()) return;
        for (std::size_t i = 0; i < din->data.size(); ++i) din->data[i] *= scratch.values[i];
    }

private:
    double p_;
};

// Pools along the width (time) axis with window = stride; the remainder is dropped.
class Pool final : public Layer {
public:
    Pool(Pooling type, std::size_t width) : type_(type), width_(width) {}

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Pool>(*this); }
    std::string kind() const override { return type_ == Pooling::average ? "avgpool" : "maxpool"; }
    Shape3 output_shape(Shape3 in) const override { return {in.height, in.width / width_, in.maps}; }

    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch& scratch) override {
        run(in, out, type_ == Pooling::max ? &scratch.index : nullptr);
    }
    void infer(const Batch& in, Batch& out) const override { run(in, out, nullptr); }

    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch& scratch,
                  std::span<std::vector<double>>) const override {
        if (!din) return;
        *din = Batch(in.n, in.shape);
        const Shape3 os = dout.shape;
        const std::size_t c = in.shape.maps;
        const double inv = 1.0 / static_cast<double>(width_);
        std::size_t o = 0;
        for (std::size_t b = 0; b < in.n; ++b) {
            double* dx = din->sample(b).data();
            const double* g = dout.sample(b).data();
            for (std::size_t h = 0; h < os.height; ++h)
                for (std::size_t ow = 0; ow < os.width; ++ow)
                    for (std::size_t k = 0; k < c; ++k, ++o) {
                        const double gv = g[(h * os.width + ow) * c + k];
                        if (type_ == Pooling::average) {
                            for (std::size_t j = 0; j < width_; ++j)
                                dx[(h * in.shape.width + ow * width_ + j) * c + k] += gv * inv;
                        } else {
                            dx[scratch.index[o]] += gv;
                        }
                    }
        }
    }

private:
    void run(const Batch& in, Batch& out, std::vector<std::uint32_t>* argmax) const {
        const Shape3 os = output_shape(in.shape);
        out = Batch(in.n, os);
        const std::size_t c = in.shape.maps;
        if (argmax) argmax->clear();
        const double inv = 1.0 / static_cast<double>(width_);
        for (std::size_t b = 0; b < in.n; ++b) {
            const double* x = in.sample(b).data();
            double* y = out.sample(b).data();
            for (std::size_t h = 0; h < os.height; ++h)
                for (std::size_t ow = 0; ow < os.width; ++ow)
                    for (std::size_t k = 0; k < c; ++k) {
                        const std::size_t base = (h * in.shape.width + ow * width_) * c + k;
                        double v;
                        if (type_ == Pooling::average) {
                            v = 0.0;
                            for (std::size_t j = 0; j < width_; ++j) v += x[base + j * c];
                            v *= inv;
                        } else {
                            std::size_t best = base;
                            for (std::size_t j = 1; j < width_; ++j)
                                if (x[base + j * c] > x[best]) best = base + j * c;
                            v = x[best];
                            if (argmax) argmax->push_back(static_cast<std::uint32_t>(best));
                        }
                        y[(h * os.width + ow) * c + k] = v;
                    }
        }
    }

    Pooling type_;
    std::size_t width_;
};

class Flatten final : public Layer {
public:
    std::unique_ptr<Layer> clone() const override { return std::make_unique<Flatten>(*this); }
    std::string kind() const override { return "flatten"; }
    Shape3 output_shape(Shape3 in) const override { return {1, 1, in.size()}; }
    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch&) override { infer(in, out); }
    void infer(const Batch& in, Batch& out) const override {
        out = in;
        out.shape = output_shape(in.shape);
    }
    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch&,
                  std::span<std::vector<double>>) const override {
        if (!din) return;
        *din = dout;
        din->shape = in.shape;
    }
};

// Four interleaved partial sums: a fixed summation order that pipelines well.
double dot4(const double* a, const double* b, std::size_t n) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

class Dense final : public Layer {
public:
    Dense(std::size_t in, std::size_t units) : in_(in), units_(units), weights_(in * units, 0.0), bias_(units, 0.0) {}

    void init(SeededRng& rng) { init_fan_in(weights_, in_, rng); }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Dense>(*this); }
    std::string kind() const override { return "dense"; }
    Shape3 output_shape(Shape3) const override { return {1, 1, units_}; }

    void forward(const Batch& in, Batch& out, Mode, SeededRng*, Scratch&) override { infer(in, out); }

    void infer(const Batch& in, Batch& out) const override {
        if (in.shape.size() != in_) throw_runtime("dimension mismatch in dense layer");
        out = Batch(in.n, output_shape(in.shape));
        for (std::size_t b = 0; b < in.n; ++b) {
            const auto x = in.sample(b);
            auto y = out.sample(b);
            for (std::size_t u = 0; u < units_; ++u) {
                y[u] = bias_[u] + dot4(weights_.data() + u * in_, x.data(), in_);
            }
        }
    }

    void backward(const Batch& in, const Batch&, const Batch& dout, Batch* din, const Scratch&,
                  std::span<std::vector<double>> grads) const override {
        auto& dw = grads[0];
        auto& db = grads[1];
        if (din) *din = Batch(in.n, in.shape);
        for (std::size_t b = 0; b < in.n; ++b) {
            const auto x = in.sample(b);
            const auto g = dout.sample(b);
            for (std::size_t u = 0; u < units_; ++u) {
                const double gu = g[u];
                db[u] += gu;
                double* dwu = dw.data() + u * in_;
                for (std::size_t f = 0; f < in_; ++f) dwu[f] += gu * x[f];
                if (din) {
                    const double* w = weights_.data() + u * in_;
                    auto dx = din->sample(b);
                    for (std::size_t f = 0; f < in_; ++f) dx[f] += gu * w[f];
                }
            }
        }
    }

    std::vector<NamedBuffer> params() override { return {{"weights", &weights_}, {"bias", &bias_}}; }

private:
    std::size_t in_, units_;
    std::vector<double> weights_;  // [unit][input]
    std::vector<double> bias_;
};

}  // namespace

std::unique_ptr<Layer> make_conv(Shape3 in, std::size_t n_filters, std::size_t fh, std::size_t fw, SeededRng& rng) {
    auto conv = std::make_unique<Conv2D>(in, n_filters, fh, fw);
    conv->init(rng);
    return conv;
}

std::unique_ptr<Layer> make_activation(Activation a, double alpha) { return std::make_unique<ActivationLayer>(a, alpha); }

std::unique_ptr<Layer> make_batchnorm(std::size_t maps, double momentum, double epsilon) {
    return std::make_unique<BatchNorm>(maps, momentum, epsilon);
}

std::unique_ptr<Layer> make_identity(std::string kind) { return std::make_unique<Identity>(std::move(kind)); }

std::unique_ptr<Layer> make_dropout(double p) { return std::make_unique<Dropout>(p); }

std::unique_ptr<Layer> make_pool(Pooling type, std::size_t width) { return std::make_unique<Pool>(type, width); }

std::unique_ptr<Layer> make_flatten() { return std::make_unique<Flatten>(); }

std::unique_ptr<Layer> make_dense(std::size_t in_features, std::size_t units, SeededRng& rng) {
    auto dense = std::make_unique<Dense>(in_features, units);
    dense->init(rng);
    return dense;
}

}  // namespace p300::detail
