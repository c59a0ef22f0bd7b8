#include "p300bench/lda.hpp"

#include <algorithm>
#include <cmath>

#include "p300bench/error.hpp"
#include "p300bench/linalg.hpp"

namespace p300 {

ShrinkageEstimate ledoit_wolf(const Matrix& x, bool assume_centered) {
    if (x.rows() < 2) throw_runtime("insufficient samples");
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();

    ShrinkageEstimate est;
    est.sample_covariance = covariance(x, assume_centered);
    const Matrix& s = est.sample_covariance;

    double trace = 0.0;
    for (std::size_t i = 0; i < p; ++i) trace += s(i, i);
    const double m = trace / static_cast<double>(p);
    est.target_scale = m;

    double d2 = 0.0;
    double s_norm2 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double v = s(i, j) - (i == j ? m : 0.0);
            d2 += v * v;
            s_norm2 += s(i, j) * s(i, j);
        }
    }
    d2 /= static_cast<double>(p);

    std::vector<double> mean(p, 0.0);
    if (!assume_centered) mean = column_means(x);
    std::vector<double> xc(p);
    // ||x x^T - S||_F^2 = ||x||^4 - 2 x^T S x + ||S||_F^2
    double spread = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < p; ++c) xc[c] = row[c] - mean[c];
        const double sq = dot(xc, xc);
        double quad = 0.0;
        for (std::size_t i = 0; i < p; ++i) quad += xc[i] * dot(s.row(i), xc);
        spread += sq * sq - 2.0 * quad + s_norm2;
    }
    const double nn = static_cast<double>(n);
    const double b2_bar = spread / (nn * nn) / static_cast<double>(p);
    const double b2 = std::min(d2, b2_bar);

    double rho = d2 < 1e-15 ? 0.0 : b2 / d2;
    rho = std::clamp(rho, 0.0, 1.0);
    est.intensity = rho;

    est.covariance = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            est.covariance(i, j) = (1.0 - rho) * s(i, j) + (i == j ? rho * m : 0.0);
    return est;
}

LdaModel fit_lda(const Matrix& x, std::span<const Label> labels, const LdaConfig& cfg) {
    if (labels.size() != x.rows()) throw_runtime("feature/label length mismatch");
    const std::size_t p = x.cols();

    std::size_t n1 = 0;
    for (Label l : labels) n1 += (l != 0);
    const std::size_t n0 = labels.size() - n1;
    if (n0 == 0 || n1 == 0) throw_runtime("need two classes");
    if (n0 < 2 || n1 < 2) throw_runtime("insufficient samples");

    LdaModel model;
    model.mean0.assign(p, 0.0);
    model.mean1.assign(p, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto& mu = labels[r] ? model.mean1 : model.mean0;
        const auto row = x.row(r);
        for (std::size_t c = 0; c < p; ++c) mu[c] += row[c];
    }
    for (double& v : model.mean0) v /= static_cast<double>(n0);
    for (double& v : model.mean1) v /= static_cast<double>(n1);

    Matrix centered(x.rows(), p);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto& mu = labels[r] ? model.mean1 : model.mean0;
        const auto row = x.row(r);
        auto dst = centered.row(r);
        for (std::size_t c = 0; c < p; ++c) dst[c] = row[c] - mu[c];
    }

    ShrinkageEstimate est = ledoit_wolf(centered, /*assume_centered=*/true);
    if (cfg.fixed_shrinkage) {
        const double rho = *cfg.fixed_shrinkage;
        if (!(rho >= 0.0 && rho <= 1.0)) throw_config("lda: shrinkage must lie in [0, 1]");
        est.intensity = rho;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                est.covariance(i, j) =
                    (1.0 - rho) * est.sample_covariance(i, j) + (i == j ? rho * est.target_scale : 0.0);
    }
    model.shrinkage = est.intensity;

    std::vector<double> delta(p);
    for (std::size_t c = 0; c < p; ++c) delta[c] = model.mean1[c] - model.mean0[c];

    const EigenDecomposition eig = sym_eig(est.covariance);
    const double lambda_max = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
    const double floor = 1e-12 * lambda_max;
    model.weights.assign(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const double lambda = std::max(eig.values[k], floor);
        if (lambda <= 0.0) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < p; ++i) proj += eig.vectors(i, k) * delta[i];
        proj /= lambda;
        for (std::size_t i = 0; i < p; ++i) model.weights[i] += proj * eig.vectors(i, k);
    }

    model.prior0 = static_cast<double>(n0) / static_cast<double>(labels.size());
    model.prior1 = static_cast<double>(n1) / static_cast<double>(labels.size());
    double mid = 0.0;
    for (std::size_t c = 0; c < p; ++c) mid += model.weights[c] * (model.mean0[c] + model.mean1[c]);
    model.bias = -0.5 * mid + std::log(model.prior1 / model.prior0);
    return model;
}

double LdaModel::score_row(std::span<const double> x) const {
    if (x.size() != weights.size()) throw_runtime("dimension mismatch: model expects " +
                                                  std::to_string(weights.size()) + " features");
    return dot(weights, x) + bias;
}

std::vector<double> LdaModel::score(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = score_row(x.row(r));
    return out;
}

std::vector<Label> LdaModel::predict(const Matrix& x) const {
    std::vector<Label> out;
    for (double s : score(x)) out.push_back(s > kLinearThreshold ? 1 : 0);
    return out;
}

nlohmann::json LdaModel::to_json() const {
    return {{"type", "lda"},     {"weights", weights}, {"bias", bias},     {"shrinkage", shrinkage},
            {"mean0", mean0},    {"mean1", mean1},     {"prior0", prior0}, {"prior1", prior1}};
}

LdaModel LdaModel::from_json(const nlohmann::json& j) {
    if (j.value("type", "") != "lda") throw_data("not an LDA model document");
    LdaModel m;
    j.at("weights").get_to(m.weights);
    j.at("bias").get_to(m.bias);
    j.at("shrinkage").get_to(m.shrinkage);
    j.at("mean0").get_to(m.mean0);
    j.at("mean1").get_to(m.mean1);
    j.at("prior0").get_to(m.prior0);
    j.at("prior1").get_to(m.prior1);
    return m;
}

}  // namespace p300
