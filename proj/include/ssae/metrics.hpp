#pragma once

#include "ssae/types.hpp"

#include <vector>

namespace ssae {

double accuracy(const Labels& pred, const Labels& truth);

/// Mann-Whitney AUC: fraction of (positive, negative) pairs ranked
/// correctly, ties counting one half. scores are for the positive class
/// (class 1); truth must contain both classes.
double roc_auc(const Vector& scores_pos_class, const Labels& truth_binary);

enum class F1Average { kMacro, kWeighted };

/// Mean over classes of 2PR/(P+R). A class absent from both pred and truth
/// contributes 1; a class with zero denominator contributes 0.
double f1_score(const Labels& pred, const Labels& truth, int k,
                F1Average average = F1Average::kMacro);

/// Gaussian KDE of predicted-class confidence scores, one curve per true
/// class, on a 201-point grid over [0, 1]. For binary tasks the class-0
/// curve is evaluated at 1-s ("flipped around 0.5"). Each curve is
/// renormalized to unit trapezoid integral over the grid.
struct ScoreDistribution {
    Vector grid;
    std::vector<Vector> density_per_class;
    bool flipped_class0 = false;
};

/// bandwidth <= 0 selects Silverman's rule per class.
ScoreDistribution score_distribution(const Vector& scores, const Labels& truth, int k,
                                     double bandwidth = 0.0);

}  // namespace ssae
