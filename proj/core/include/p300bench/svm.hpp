#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "p300bench/matrix.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/rng.hpp"

namespace p300 {

enum class KernelType { rbf, linear, polynomial };

struct KernelParams {
    KernelType type = KernelType::rbf;
    double gamma = 1.0;
    int degree = 3;      ///< polynomial only
    double coef0 = 0.0;  ///< polynomial only

    double operator()(std::span<const double> x, std::span<const double> z) const;
};

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma);

struct SvmConfig {
    double C = 1.0;
    KernelType kernel = KernelType::rbf;
    std::optional<double> gamma;  ///< empty: "scale" = 1 / (p * var(X))
    int degree = 3;
    double coef0 = 0.0;
    double tol = 1e-3;            ///< KKT tolerance
    std::size_t max_iters = 0;    ///< 0: 10 * n, but at least 10000
    double cache_mb = 500.0;      ///< kernel-row cache budget
    bool record_objective = false;

    void validate() const;
};

/// "scale" heuristic: 1 / (n_features * variance of all entries); 1 when the variance is 0.
double scale_gamma(const Matrix& x);

struct SvmModel {
    Matrix support_vectors;
    std::vector<double> dual_coef;          ///< alpha_i * y_i
    std::vector<std::size_t> support_indices;  ///< rows of the training matrix
    double bias = 0.0;
    KernelParams kernel;
    bool converged = true;
    std::size_t iterations = 0;
    std::vector<double> objective_trace;    ///< dual objective after each step, if recorded

    double score_row(std::span<const double> x) const;
    /// f(x) = sum_i alpha_i y_i K(x_i, x) + b for every row.
    std::vector<double> score(const Matrix& x) const;
    std::vector<Label> predict(const Matrix& x) const;

    nlohmann::json to_json() const;
    static SvmModel from_json(const nlohmann::json& j);
};

/// C-SVC trained by SMO on the dual
///
///   max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
///   s.t. 0 <= alpha_i <= C,  sum_i alpha_i y_i = 0.
///
/// Each step picks the maximal violating pair: the first multiplier is the
/// worst KKT violator, the second maximises |E1 - E2| over the admissible
/// partners. Exact ties are broken by a random priority drawn from `rng`.
/// Stops once the violation gap is <= tol, which gives KKT within tol for
/// every training point; hitting max_iters clears `converged`.
///
/// Labels must be +1 / -1.
SvmModel fit_svm(const Matrix& x, std::span<const int> y, const SvmConfig& cfg, SeededRng rng = SeededRng{0});

/// Maps 0/1 labels to -1/+1.
std::vector<int> to_signed_labels(std::span<const Label> labels);

}  // namespace p300
