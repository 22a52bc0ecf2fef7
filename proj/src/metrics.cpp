#include "ssae/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ssae {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double silverman_bandwidth(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) return 0.01;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    const double h = 0.9 * spread * std::pow(n, -0.2);
    return h > 1e-6 ? h : 0.01;  // degenerate spread still gets a visible peak
}

}  // namespace

double accuracy(const Labels& pred, const Labels& truth) {
    require(!truth.empty(), "accuracy: empty inputs");
    require(pred.size() == truth.size(), "accuracy: length mismatch");
    size_t correct = 0;
    for (size_t i = 0; i < truth.size(); ++i)
        if (pred[i] == truth[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double roc_auc(const Vector& scores_pos_class, const Labels& truth_binary) {
    const size_t n = truth_binary.size();
    require(static_cast<size_t>(scores_pos_class.size()) == n, "roc_auc: length mismatch");
    size_t n_pos = 0;
    for (int label : truth_binary) {
        require(label == 0 || label == 1, "roc_auc: truth must be binary 0/1");
        n_pos += static_cast<size_t>(label);
    }
    const size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetricError("roc_auc: both classes must be present");

    // Rank-sum with midranks for ties.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scores_pos_class[static_cast<Index>(a)] < scores_pos_class[static_cast<Index>(b)];
    });

    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && scores_pos_class[static_cast<Index>(order[j + 1])] ==
                                scores_pos_class[static_cast<Index>(order[i])])
            ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (size_t t = i; t <= j; ++t)
            if (truth_binary[order[t]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }

    const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1_score(const Labels& pred, const Labels& truth, int k, F1Average average) {
    require(pred.size() == truth.size() && !truth.empty(), "f1_score: bad input lengths");
    std::vector<long> tp(static_cast<size_t>(k), 0), fp(static_cast<size_t>(k), 0),
        fn(static_cast<size_t>(k), 0), support(static_cast<size_t>(k), 0);
    for (size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i];
        const int p = pred[i];
        require(t >= 0 && t < k && p >= 0 && p < k, "f1_score: label outside 0..k-1");
        ++support[static_cast<size_t>(t)];
        if (p == t) {
            ++tp[static_cast<size_t>(t)];
        } else {
            ++fp[static_cast<size_t>(p)];
            ++fn[static_cast<size_t>(t)];
        }
    }

    double total = 0.0;
    double weight_sum = 0.0;
    for (int c = 0; c < k; ++c) {
        const size_t cc = static_cast<size_t>(c);
        const long denom = 2 * tp[cc] + fp[cc] + fn[cc];
        double f1;
        if (denom == 0) {
            f1 = (support[cc] == 0 && fp[cc] == 0) ? 1.0 : 0.0;
        } else {
            f1 = 2.0 * static_cast<double>(tp[cc]) / static_cast<double>(denom);
        }
        const double w = average == F1Average::kMacro ? 1.0 : static_cast<double>(support[cc]);
        total += w * f1;
        weight_sum += w;
    }
    return weight_sum > 0.0 ? total / weight_sum : 0.0;
}

ScoreDistribution score_distribution(const Vector& scores, const Labels& truth, int k,
                                     double bandwidth) {
    require(static_cast<size_t>(scores.size()) == truth.size(), "score_distribution: length mismatch");
    for (Index i = 0; i < scores.size(); ++i)
        require(scores[i] >= -1e-9 && scores[i] <= 1.0 + 1e-9,
                "score_distribution: scores must lie in [0, 1]");

    constexpr int grid_points = 201;
    ScoreDistribution dist;
    dist.grid = Vector::LinSpaced(grid_points, 0.0, 1.0);
    dist.flipped_class0 = (k == 2);
    dist.density_per_class.assign(static_cast<size_t>(k), Vector::Zero(grid_points));

    for (int c = 0; c < k; ++c) {
        std::vector<double> xs;
        for (size_t i = 0; i < truth.size(); ++i)
            if (truth[i] == c) xs.push_back(scores[static_cast<Index>(i)]);
        if (xs.empty()) continue;

        const double h = bandwidth > 0.0 ? bandwidth : silverman_bandwidth(xs);
        const double norm = 1.0 / (static_cast<double>(xs.size()) * h * std::sqrt(2.0 * std::numbers::pi));
        Vector& curve = dist.density_per_class[static_cast<size_t>(c)];
        const bool flip = dist.flipped_class0 && c == 0;
        for (int g = 0; g < grid_points; ++g) {
            const double t = flip ? 1.0 - dist.grid[g] : dist.grid[g];
            double acc = 0.0;
            for (double x : xs) {
                const double u = (t - x) / h;
                acc += std::exp(-0.5 * u * u);
            }
            curve[g] = norm * acc;
        }

        // Renormalize to unit mass over the visible [0, 1] window.
        double integral = 0.0;
        for (int g = 1; g < grid_points; ++g)
            integral += 0.5 * (curve[g] + curve[g - 1]) * (dist.grid[g] - dist.grid[g - 1]);
        if (integral > 0.0) curve /= integral;
    }
    return dist;
}

}  // namespace ssae
