#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "p300bench/error.hpp"
#include "p300bench/linalg.hpp"
#include "p300bench/matrix.hpp"
#include "p300bench/metrics.hpp"
#include "p300bench/rng.hpp"
#include "support/oracles.hpp"

using namespace p300;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, SeededRng& rng) {
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

Matrix random_symmetric(std::size_t p, SeededRng& rng) {
    Matrix a = random_matrix(p, p, rng);
    Matrix s(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) s(i, j) = a(i, j) + a(j, i);
    return s;
}

// Independent double loop over the definition.
Matrix naive_covariance(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    std::vector<double> mean(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) mean[j] += x(i, j);
        mean[j] /= static_cast<double>(n);
    }
    Matrix s(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
            s(a, b) = acc / static_cast<double>(n);
        }
    return s;
}

}  // namespace

TEST(SeededRng, SameSeedSameStream) {
    SeededRng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs = differs || x != c.next_u64();
    }
    EXPECT_TRUE(differs);
}

TEST(SeededRng, PinnedStream) {
    // Guards against silent algorithm changes.
    EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
    SeededRng a(7);
    const auto first = a.next_u64();
    SeededRng b(7);
    EXPECT_EQ(first, b.next_u64());
    EXPECT_EQ(SeededRng(7).child(3).next_u64(), SeededRng(7).child(3).next_u64());
}

TEST(SeededRng, ChildrenAreDistinctStreams) {
    const SeededRng root(5);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 100; ++i) firsts.insert(root.child(i).next_u64());
    EXPECT_EQ(firsts.size(), 100u);
}

TEST(SeededRng, UniformAndBelowRanges) {
    SeededRng rng(1);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const auto k = rng.below(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(SeededRng, NormalMoments) {
    SeededRng rng(2);
    const int n = 200000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        s += v;
        ss += v * v;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.015);
}

TEST(SeededRng, ShuffleIsPermutation) {
    SeededRng rng(3);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    rng.shuffle(std::span<int>(v));
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
    EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

TEST(Matrix, ProductsAndTranspose) {
    const Matrix a{{1, 2}, {3, 4}, {5, 6}};
    const Matrix b{{1, 0, 2}, {0, 1, 3}};
    const Matrix c = a * b;
    EXPECT_EQ(c, (Matrix{{1, 2, 8}, {3, 4, 18}, {5, 6, 28}}));
    EXPECT_EQ(a.transposed(), (Matrix{{1, 3, 5}, {2, 4, 6}}));
    const std::vector<double> x{1, -1};
    EXPECT_EQ(a * std::span<const double>(x), (std::vector<double>{-1, -1, -1}));
    EXPECT_DOUBLE_EQ(frobenius_norm(Matrix{{3, 4}}), 5.0);
    const std::size_t rows[] = {2, 0};
    EXPECT_EQ(a.select_rows(rows), (Matrix{{5, 6}, {1, 2}}));
}

TEST(Covariance, IdenticalRowsGiveZero) {
    const Matrix x{{1, 2, 3}, {1, 2, 3}};
    EXPECT_EQ(covariance(x), Matrix(3, 3, 0.0));
}

TEST(Covariance, HandComputed) {
    const Matrix x{{1, 0}, {-1, 0}};
    EXPECT_EQ(covariance(x), (Matrix{{1, 0}, {0, 0}}));
}

TEST(Covariance, MatchesNaiveOracle) {
    SeededRng rng(10);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix x = random_matrix(10, 3, rng);
        const Matrix s = covariance(x);
        const Matrix o = naive_covariance(x);
        for (std::size_t i = 0; i < 9; ++i) EXPECT_NEAR(s.data()[i], o.data()[i], 1e-12);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), s(j, i));
    }
}

TEST(Covariance, NeedsTwoRows) {
    try {
        covariance(Matrix{{1, 2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::runtime);
        EXPECT_NE(std::string(e.what()).find("insufficient samples"), std::string::npos);
    }
}

TEST(SymEig, Identity) {
    const auto e = sym_eig(Matrix::identity(3));
    for (double v : e.values) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(SymEig, DiagonalAxisAligned) {
    const auto e = sym_eig(Matrix{{1, 0}, {0, 3}});
    EXPECT_DOUBLE_EQ(e.values[0], 3.0);
    EXPECT_DOUBLE_EQ(e.values[1], 1.0);
    EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(SymEig, TwoByTwoClosedForm) {
    const double a = 2.0, b = 1.5, d = -0.5;
    const auto e = sym_eig(Matrix{{a, b}, {b, d}});
    const double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    EXPECT_NEAR(e.values[0], mid + rad, 1e-13);
    EXPECT_NEAR(e.values[1], mid - rad, 1e-13);
}

TEST(SymEig, ReconstructionTraceAndOrthonormality) {
    SeededRng rng(11);
    for (std::size_t p : {2u, 3u, 5u, 12u}) {
        const Matrix a = random_symmetric(p, rng);
        const auto e = sym_eig(a);
        const double scale = frobenius_norm(a);
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            trace += a(i, i);
            sum += e.values[i];
            if (i > 0) EXPECT_GE(e.values[i - 1], e.values[i]);
        }
        EXPECT_NEAR(trace, sum, 1e-8 * std::max(1.0, scale));
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                double rec = 0.0, gram = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    rec += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
                    gram += e.vectors(k, i) * e.vectors(k, j);
                }
                EXPECT_NEAR(rec, a(i, j), 1e-8 * scale);
                EXPECT_NEAR(gram, i == j ? 1.0 : 0.0, 1e-8);
            }
    }
}

TEST(SymEig, DeterminantOfThreeByThree) {
    const Matrix a{{4, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    const auto e = sym_eig(a);
    const double det = 4 * (3 * 2 - 1) - 1 * (1 * 2 - 0);
    EXPECT_NEAR(e.values[0] * e.values[1] * e.values[2], det, 1e-10);
}

TEST(SymEig, RejectsAsymmetric) {
    try {
        sym_eig(Matrix{{1, 2}, {0, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("asymmetric matrix"), std::string::npos);
    }
}

TEST(Metrics, PerfectAndInverted) {
    const std::vector<double> s{-2, -1, 1, 2};
    const std::vector<Label> y{0, 0, 1, 1};
    const auto m = compute_metrics(s, y, 0.0);
    EXPECT_EQ(m.accuracy, 1.0);
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 1.0);
    EXPECT_EQ(*m.auc, 1.0);
    const std::vector<Label> inv{1, 1, 0, 0};
    const auto w = compute_metrics(s, inv, 0.0);
    EXPECT_EQ(w.accuracy, 0.0);
    EXPECT_EQ(*w.auc, 0.0);
}

TEST(Metrics, ThresholdIsStrict) {
    const std::vector<double> s{0.5, 0.5000001};
    const std::vector<Label> y{0, 1};
    const auto m = compute_metrics(s, y, kProbabilityThreshold);
    EXPECT_EQ(m.accuracy, 1.0);
}

TEST(Metrics, ConfusionMatrixCounts) {
    // tp = 2, fp = 1, fn = 1, tn = 2
    const std::vector<double> s{1, 1, 1, -1, -1, -1};
    const std::vector<Label> y{1, 1, 0, 1, 0, 0};
    const auto m = compute_metrics(s, y, 0.0);
    EXPECT_DOUBLE_EQ(m.accuracy, 4.0 / 6.0);
    EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
}

TEST(Metrics, UndefinedPrecisionIsZero) {
    const std::vector<double> s{-1, -1};
    const std::vector<Label> y{1, 0};
    const auto m = compute_metrics(s, y, 0.0);
    EXPECT_EQ(m.precision, 0.0);
    EXPECT_EQ(m.recall, 0.0);
}

TEST(Auc, AllTiedIsHalf) {
    const std::vector<double> s(10, 3.0);
    std::vector<Label> y(10, 0);
    y[2] = y[7] = 1;
    EXPECT_EQ(*auc_mann_whitney(s, y), 0.5);
}

TEST(Auc, SingleClassIsUndefined) {
    const std::vector<double> s{1, 2, 3};
    const std::vector<Label> y{1, 1, 1};
    EXPECT_FALSE(auc_mann_whitney(s, y).has_value());
    const auto m = compute_metrics(s, y, 0.0);
    EXPECT_FALSE(m.auc.has_value());
    EXPECT_EQ(m.accuracy, 1.0);
}

TEST(Auc, MatchesPairwiseOracleWithTies) {
    SeededRng rng(12);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> s(50);
        std::vector<Label> y(50);
        for (std::size_t i = 0; i < 50; ++i) {
            s[i] = static_cast<double>(rng.below(8));  // coarse grid forces ties
            y[i] = static_cast<Label>(rng.below(2));
        }
        y[0] = 0;
        y[1] = 1;
        EXPECT_EQ(*auc_mann_whitney(s, y), oracle::pairwise_auc(s, y));
    }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
    SeededRng rng(13);
    std::vector<double> s(40), t(40);
    std::vector<Label> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        s[i] = rng.normal();
        t[i] = std::exp(3.0 * s[i]) + 7.0;
        y[i] = static_cast<Label>(i % 2);
    }
    EXPECT_EQ(*auc_mann_whitney(s, y), *auc_mann_whitney(t, y));
}
