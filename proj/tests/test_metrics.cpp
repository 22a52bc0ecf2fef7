#include "ssae/metrics.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ssae;

namespace {

/// O(n^2) pair-counting oracle, ties worth one half.
double auc_pair_oracle(const Vector& scores, const Labels& truth) {
    double wins = 0.0;
    long pairs = 0;
    for (size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != 1) continue;
        for (size_t j = 0; j < truth.size(); ++j) {
            if (truth[j] != 0) continue;
            ++pairs;
            const double si = scores[static_cast<Index>(i)];
            const double sj = scores[static_cast<Index>(j)];
            if (si > sj) wins += 1.0;
            else if (si == sj) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("accuracy basics") {
    CHECK(accuracy({0, 1, 1}, {0, 1, 1}) == 1.0);
    CHECK(accuracy({1, 0, 0}, {0, 1, 1}) == 0.0);
    CHECK(accuracy({0, 1, 1, 0}, {0, 1, 0, 0}) == 0.75);
    CHECK_THROWS_AS(accuracy({}, {}), ContractViolation);
    CHECK_THROWS_AS(accuracy({0}, {0, 1}), ContractViolation);
}

TEST_CASE("roc auc worked examples") {
    Vector s(4);
    s << 0.9, 0.8, 0.3, 0.1;
    CHECK(roc_auc(s, {1, 1, 0, 0}) == 1.0);

    s << 0.9, 0.4, 0.6, 0.1;
    CHECK(roc_auc(s, {1, 1, 0, 0}) == 0.75);  // 3 of 4 pairs ordered correctly

    s << 0.5, 0.5, 0.5, 0.5;
    CHECK(roc_auc(s, {1, 1, 0, 0}) == 0.5);

    CHECK_THROWS_AS(roc_auc(s, {1, 1, 1, 1}), UndefinedMetricError);
}

TEST_CASE("roc auc equals brute-force pair counting") {
    Rng rng(91);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(47));
        Vector s(n);
        Labels y(static_cast<size_t>(n));
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            // coarse scores so ties actually happen
            s[i] = std::round(rng.uniform() * 8.0) / 8.0;
            y[static_cast<size_t>(i)] = static_cast<int>(rng.below(2));
            (y[static_cast<size_t>(i)] ? has1 : has0) = true;
        }
        if (!has0 || !has1) continue;
        CHECK(roc_auc(s, y) == doctest::Approx(auc_pair_oracle(s, y)).epsilon(1e-12));
    }
}

TEST_CASE("roc auc invariances") {
    Rng rng(92);
    Vector s(20);
    Labels y(20);
    for (int i = 0; i < 20; ++i) {
        s[i] = rng.uniform();
        y[static_cast<size_t>(i)] = i < 10 ? 0 : 1;
    }
    const double base = roc_auc(s, y);

    // strictly increasing transform
    Vector t(20);
    for (int i = 0; i < 20; ++i) t[i] = std::exp(3.0 * s[i]) + 1.0;
    CHECK(roc_auc(t, y) == doctest::Approx(base).epsilon(1e-12));

    // complementing the truth flips the statistic
    Labels flipped(20);
    for (int i = 0; i < 20; ++i) flipped[static_cast<size_t>(i)] = 1 - y[static_cast<size_t>(i)];
    CHECK(roc_auc(s, flipped) == doctest::Approx(1.0 - base).epsilon(1e-12));
}

TEST_CASE("macro f1 worked examples") {
    CHECK(f1_score({0, 1, 1, 0}, {0, 1, 1, 0}, 2) == 1.0);

    // confusion [[1,1],[1,1]]: both class F1 = 0.5
    CHECK(f1_score({0, 1, 0, 1}, {0, 0, 1, 1}, 2) == 0.5);

    // always predicting class 0 on a balanced binary task
    CHECK(f1_score({0, 0, 0, 0}, {0, 0, 1, 1}, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("f1 edge conventions and weighted variant") {
    // class 2 absent from pred and truth contributes 1 to the macro mean
    CHECK(f1_score({0, 1}, {0, 1}, 3) == 1.0);
    // class 1 never predicted and present in truth contributes 0
    CHECK(f1_score({0, 0}, {0, 1}, 3) ==
          doctest::Approx((2.0 / 3.0 + 0.0 + 1.0) / 3.0).epsilon(1e-15));

    // weighted average uses supports; the empty class gets zero weight
    CHECK(f1_score({0, 0}, {0, 1}, 3, F1Average::kWeighted) ==
          doctest::Approx((1.0 * (2.0 / 3.0) + 1.0 * 0.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("f1 and accuracy invariant under consistent relabeling") {
    Rng rng(93);
    const int n = 60, k = 3;
    Labels pred(static_cast<size_t>(n)), truth(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        pred[static_cast<size_t>(i)] = static_cast<int>(rng.below(k));
        truth[static_cast<size_t>(i)] = static_cast<int>(rng.below(k));
    }
    const int relabel[k] = {2, 0, 1};
    Labels pred2(pred.size()), truth2(truth.size());
    for (int i = 0; i < n; ++i) {
        pred2[static_cast<size_t>(i)] = relabel[pred[static_cast<size_t>(i)]];
        truth2[static_cast<size_t>(i)] = relabel[truth[static_cast<size_t>(i)]];
    }
    CHECK(f1_score(pred2, truth2, k) == doctest::Approx(f1_score(pred, truth, k)).epsilon(1e-12));
    CHECK(accuracy(pred2, truth2) == accuracy(pred, truth));
}

TEST_CASE("score distribution peaks, flip and normalization") {
    // all scores 1.0 in class 1: single peak at the last grid point
    Vector ones = Vector::Constant(30, 1.0);
    const Labels all1(30, 1);
    const ScoreDistribution d1 = score_distribution(ones, all1, 2);
    const Vector& curve1 = d1.density_per_class[1];
    Index peak = 0;
    curve1.maxCoeff(&peak);
    CHECK(peak == d1.grid.size() - 1);
    CHECK(d1.flipped_class0);

    // flip property: the class-0 curve of scores s is the class-1-style
    // curve of 1-s
    Rng rng(94);
    Vector s(40);
    for (Index i = 0; i < 40; ++i) s[i] = rng.uniform(0.5, 1.0);
    const ScoreDistribution flipped = score_distribution(s, Labels(40, 0), 2, 0.05);
    Vector complement = Vector::Constant(40, 1.0) - s;
    const ScoreDistribution direct = score_distribution(complement, Labels(40, 1), 2, 0.05);
    CHECK((flipped.density_per_class[0] - direct.density_per_class[1]).cwiseAbs().maxCoeff() <
          1e-9);

    // trapezoid mass is one per nonempty class
    Labels mixed(40);
    for (int i = 0; i < 40; ++i) mixed[static_cast<size_t>(i)] = i % 2;
    const ScoreDistribution dm = score_distribution(s, mixed, 2);
    for (int c = 0; c < 2; ++c) {
        const Vector& curve = dm.density_per_class[static_cast<size_t>(c)];
        CHECK(curve.minCoeff() >= 0.0);
        double integral = 0.0;
        for (Index g = 1; g < dm.grid.size(); ++g)
            integral += 0.5 * (curve[g] + curve[g - 1]) * (dm.grid[g] - dm.grid[g - 1]);
        CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
    }

    CHECK_THROWS_AS(score_distribution(Vector::Constant(3, 1.5), Labels{0, 1, 0}, 2),
                    ContractViolation);
}
