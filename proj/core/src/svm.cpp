#include "p300bench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <numeric>

#include "p300bench/error.hpp"

namespace p300 {

namespace {

constexpr double kTau = 1e-12;

// LRU cache of kernel rows K(x_i, .) within a byte budget.
class KernelCache {
public:
    KernelCache(const Matrix& x, const KernelParams& kernel, double budget_mb)
        : x_(x), kernel_(kernel), rows_(x.rows()), slot_(x.rows(), lru_.end()) {
        const double row_bytes = static_cast<double>(x.rows()) * sizeof(double);
        capacity_ = std::max<std::size_t>(2, static_cast<std::size_t>(budget_mb * 1024.0 * 1024.0 / row_bytes));
        diag_.resize(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) diag_[i] = kernel_(x_.row(i), x_.row(i));
    }

    double diag(std::size_t i) const noexcept { return diag_[i]; }

    std::span<const double> row(std::size_t i) {
        if (slot_[i] != lru_.end()) {
            lru_.splice(lru_.begin(), lru_, slot_[i]);
            return rows_[i];
        }
        if (lru_.size() == capacity_) {
            const std::size_t victim = lru_.back();
            lru_.pop_back();
            slot_[victim] = lru_.end();
            std::vector<double>().swap(rows_[victim]);
        }
        auto& r = rows_[i];
        r.resize(x_.rows());
        for (std::size_t j = 0; j < x_.rows(); ++j) r[j] = (j == i) ? diag_[i] : kernel_(x_.row(i), x_.row(j));
        lru_.push_front(i);
        slot_[i] = lru_.begin();
        return r;
    }

private:
    const Matrix& x_;
    KernelParams kernel_;
    std::vector<std::vector<double>> rows_;
    std::list<std::size_t> lru_;
    std::vector<std::list<std::size_t>::iterator> slot_;
    std::vector<double> diag_;
    std::size_t capacity_ = 0;
};

double dual_objective(std::span<const double> alpha, std::span<const double> grad) {
    // W = sum(alpha) - 1/2 alpha^T Q alpha, with grad = Q alpha - 1.
    double w = 0.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) w -= 0.5 * alpha[t] * (grad[t] - 1.0);
    return w;
}

std::string kernel_name(KernelType t) {
    switch (t) {
        case KernelType::rbf: return "rbf";
        case KernelType::linear: return "linear";
        case KernelType::polynomial: return "polynomial";
    }
    return "rbf";
}

KernelType kernel_from_name(const std::string& s) {
    if (s == "rbf") return KernelType::rbf;
    if (s == "linear") return KernelType::linear;
    if (s == "polynomial") return KernelType::polynomial;
    throw_data("unknown kernel type: " + s);
}

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma) {
    if (x.size() != z.size()) throw_runtime("dimension mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - z[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double KernelParams::operator()(std::span<const double> x, std::span<const double> z) const {
    switch (type) {
        case KernelType::rbf: return rbf_kernel(x, z, gamma);
        case KernelType::linear: return dot(x, z);
        case KernelType::polynomial: return std::pow(gamma * dot(x, z) + coef0, degree);
    }
    return 0.0;
}

void SvmConfig::validate() const {
    if (!(C > 0.0)) throw_config("svm: C must be > 0");
    if (gamma && !(*gamma > 0.0)) throw_config("svm: gamma must be > 0");
    if (!(tol > 0.0)) throw_config("svm: tol must be > 0");
    if (degree < 1) throw_config("svm: degree must be >= 1");
    if (!(cache_mb > 0.0)) throw_config("svm: cache_mb must be > 0");
}

double scale_gamma(const Matrix& x) {
    const auto values = x.data();
    if (values.empty()) return 1.0;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= n;
    if (var <= 0.0) return 1.0;
    return 1.0 / (static_cast<double>(x.cols()) * var);
}

std::vector<int> to_signed_labels(std::span<const Label> labels) {
    std::vector<int> y;
    y.reserve(labels.size());
    for (Label l : labels) y.push_back(l ? 1 : -1);
    return y;
}

SvmModel fit_svm(const Matrix& x, std::span<const int> y, const SvmConfig& cfg, SeededRng rng) {
    cfg.validate();
    const std::size_t n = x.rows();
    if (y.size() != n) throw_runtime("feature/label length mismatch");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else throw_runtime("svm labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw_runtime("need two classes");

    SvmModel model;
    model.kernel.type = cfg.kernel;
    model.kernel.gamma = cfg.gamma ? *cfg.gamma : scale_gamma(x);
    model.kernel.degree = cfg.degree;
    model.kernel.coef0 = cfg.coef0;

    const double C = cfg.C;
    const std::size_t max_iters = cfg.max_iters ? cfg.max_iters : std::max<std::size_t>(10 * n, 10000);

    // Random priorities decide exact ties in working-set selection.
    std::vector<std::size_t> priority(n);
    std::iota(priority.begin(), priority.end(), 0);
    rng.shuffle(std::span<std::size_t>(priority));

    KernelCache cache(x, model.kernel, cfg.cache_mb);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // Q alpha - 1

    auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

    std::size_t iter = 0;
    model.converged = false;
    while (true) {
        std::size_t i = n, j = n;
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(t) && (v > gmax || (v == gmax && i != n && priority[t] < priority[i]))) {
                gmax = v;
                i = t;
            }
            if (in_low(t) && (v < gmin || (v == gmin && j != n && priority[t] < priority[j]))) {
                gmin = v;
                j = t;
            }
        }
        if (i == n || j == n || gmax - gmin <= cfg.tol) {
            model.converged = true;
            break;
        }
        if (iter == max_iters) break;
        ++iter;

        const auto ki = cache.row(i);
        const auto kj = cache.row(j);
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        double quad = cache.diag(i) + cache.diag(j) - 2.0 * ki[j];
        if (quad <= 0.0) quad = kTau;

        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
            }
        }

        const double dai = (alpha[i] - old_ai) * y[i];
        const double daj = (alpha[j] - old_aj) * y[j];
        for (std::size_t t = 0; t < n; ++t) grad[t] += y[t] * (ki[t] * dai + kj[t] * daj);

        if (cfg.record_objective) {
            model.objective_trace.push_back(dual_objective(alpha, grad));
        }
    }
    model.iterations = iter;

    // Bias: average over free vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        const bool at_upper = alpha[t] >= C;
        const bool at_lower = alpha[t] <= 0.0;
        if (at_upper) {
            if (y[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (at_lower) {
            if (y[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    model.bias = -rho;

    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_indices.push_back(t);
            model.dual_coef.push_back(alpha[t] * y[t]);
        }
    }
    model.support_vectors = x.select_rows(model.support_indices);
    return model;
}

double SvmModel::score_row(std::span<const double> x) const {
    if (support_vectors.rows() > 0 && x.size() != support_vectors.cols())
        throw_runtime("dimension mismatch: model expects " + std::to_string(support_vectors.cols()) + " features");
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.rows(); ++i) f += dual_coef[i] * kernel(support_vectors.row(i), x);
    return f;
}

std::vector<double> SvmModel::score(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = score_row(x.row(r));
    return out;
}

std::vector<Label> SvmModel::predict(const Matrix& x) const {
    std::vector<Label> out;
    for (double s : score(x)) out.push_back(s > kLinearThreshold ? 1 : 0);
    return out;
}

nlohmann::json SvmModel::to_json() const {
    nlohmann::json sv = nlohmann::json::array();
    for (std::size_t i = 0; i < support_vectors.rows(); ++i) {
        const auto r = support_vectors.row(i);
        sv.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"type", "svm"},
            {"kernel", kernel_name(kernel.type)},
            {"gamma", kernel.gamma},
            {"degree", kernel.degree},
            {"coef0", kernel.coef0},
            {"bias", bias},
            {"dual_coef", dual_coef},
            {"support_vectors", sv},
            {"converged", converged},
            {"iterations", iterations}};
}

SvmModel SvmModel::from_json(const nlohmann::json& j) {
    if (j.value("type", "") != "svm") throw_data("not an SVM model document");
    SvmModel m;
    m.kernel.type = kernel_from_name(j.at("kernel").get<std::string>());
    j.at("gamma").get_to(m.kernel.gamma);
    j.at("degree").get_to(m.kernel.degree);
    j.at("coef0").get_to(m.kernel.coef0);
    j.at("bias").get_to(m.bias);
    j.at("dual_coef").get_to(m.dual_coef);
    m.converged = j.value("converged", true);
    m.iterations = j.value("iterations", std::size_t{0});
    const auto& sv = j.at("support_vectors");
    if (sv.size() != m.dual_coef.size()) throw_data("support vector / coefficient count mismatch");
    const std::size_t p = sv.empty() ? 0 : sv.front().size();
    m.support_vectors = Matrix(sv.size(), p);
    for (std::size_t i = 0; i < sv.size(); ++i) {
        const auto row = sv[i].get<std::vector<double>>();
        if (row.size() != p) throw_data("ragged support vectors");
        std::copy(row.begin(), row.end(), m.support_vectors.row(i).begin());
    }
    return m;
}

}  // namespace p300
