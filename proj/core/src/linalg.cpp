#include "p300bench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p300bench/error.hpp"

namespace p300 {

namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// A <- J^T A J and V <- V J for the rotation zeroing a(p, q).
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace

std::vector<double> column_means(const Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < x.cols(); ++c) mean[c] += row[c];
    }
    for (double& m : mean) m /= static_cast<double>(x.rows());
    return mean;
}

Matrix covariance(const Matrix& x, bool assume_centered) {
    if (x.rows() < 2) throw_runtime("insufficient samples");
    const std::size_t p = x.cols();
    std::vector<double> mean(p, 0.0);
    if (!assume_centered) mean = column_means(x);

    Matrix s(p, p);
    std::vector<double> centered(p);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        for (std::size_t c = 0; c < p; ++c) centered[c] = row[c] - mean[c];
        for (std::size_t i = 0; i < p; ++i) {
            const double ci = centered[i];
            auto srow = s.row(i);
            for (std::size_t j = i; j < p; ++j) srow[j] += ci * centered[j];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            s(i, j) *= inv_n;
            s(j, i) = s(i, j);
        }
    }
    return s;
}

EigenDecomposition sym_eig(const Matrix& input) {
    if (input.rows() != input.cols()) throw_runtime("asymmetric matrix");
    const std::size_t n = input.rows();
    double scale = 1.0;
    for (double v : input.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > kSymmetryTolerance * scale)
                throw_runtime("asymmetric matrix");

    Matrix a = input;
    Matrix v = Matrix::identity(n);
    const double threshold = kOffDiagonalTolerance * frobenius_norm(input);

    EigenDecomposition result;
    while (off_diagonal_norm(a) > threshold) {
        if (result.sweeps == kMaxSweeps) throw_runtime("eigensolver did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        ++result.sweeps;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return a(l, l) > a(r, r); });

    result.values.resize(n);
    result.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        result.values[k] = a(src, src);
        std::size_t argmax = 0;
        for (std::size_t r = 1; r < n; ++r)
            if (std::abs(v(r, src)) > std::abs(v(argmax, src))) argmax = r;
        const double sign = v(argmax, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t r = 0; r < n; ++r) result.vectors(r, k) = sign * v(r, src);
    }
    return result;
}

}  // namespace p300
