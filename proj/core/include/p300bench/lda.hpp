#pragma once

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/matrix.hpp"
#include "p300bench/metrics.hpp"

namespace p300 {

/// Shrunk covariance Sigma* = rho * m * I + (1 - rho) * S with m = tr(S) / p.
struct ShrinkageEstimate {
    Matrix sample_covariance;  ///< S, biased (1/n)
    Matrix covariance;         ///< Sigma*
    double intensity = 0.0;    ///< rho in [0, 1]
    double target_scale = 0.0; ///< m
};

/// Ledoit-Wolf shrinkage toward a scaled identity.
///
///   d^2  = ||S - m I||_F^2 / p
///   b^2  = min(d^2, (1/n^2) sum_i ||x_i x_i^T - S||_F^2 / p)
///   rho  = b^2 / d^2      (0 when d^2 < 1e-15)
///
/// Rows x_i are the centered samples; pass assume_centered when the caller has
/// already removed the (class) means.
ShrinkageEstimate ledoit_wolf(const Matrix& x, bool assume_centered = false);

struct LdaConfig {
    /// Overrides the Ledoit-Wolf intensity, e.g. 0 for classic LDA.
    std::optional<double> fixed_shrinkage;
};

struct LdaModel {
    std::vector<double> weights;
    double bias = 0.0;
    double shrinkage = 0.0;
    std::vector<double> mean0, mean1;
    double prior0 = 0.5, prior1 = 0.5;

    /// w^T x + b for every row.
    std::vector<double> score(const Matrix& x) const;
    double score_row(std::span<const double> x) const;
    std::vector<Label> predict(const Matrix& x) const;

    nlohmann::json to_json() const;
    static LdaModel from_json(const nlohmann::json& j);
};

/// Binary shrinkage LDA. The pooled within-class covariance is shrunk with
/// ledoit_wolf on class-centered rows, and Sigma* w = mu1 - mu0 is solved through
/// its eigendecomposition with eigenvalues floored at 1e-12 * lambda_max.
/// b = -w^T (mu0 + mu1) / 2 + ln(pi1 / pi0), priors from class frequencies.
LdaModel fit_lda(const Matrix& x, std::span<const Label> labels, const LdaConfig& cfg = {});

}  // namespace p300
