#pragma once

#include "ssae/rng.hpp"
#include "ssae/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ssae {

struct Dataset {
    Matrix x;                                // n×d, samples as rows
    Labels y;                                // contiguous ids 0..k-1
    std::vector<std::string> feature_names;  // length d
    std::vector<std::string> class_names;    // length k, id -> display name
    int k = 0;

    Index n() const { return x.rows(); }
    Index d() const { return x.cols(); }
};

/// Transductive split: unlabeled samples stay in the pool and are exactly
/// the ones evaluation runs on.
struct SemiSplit {
    std::vector<int> labeled_idx;    // sorted ascending
    std::vector<int> unlabeled_idx;  // sorted ascending
    double fraction_unlabeled = 0.0;
};

struct SynthConfig {
    int n = 1000;
    int d = 1000;
    int n_informative = 8;
    int k = 2;
    double separability = 1.0;    // hypercube vertex scale
    double flip_fraction = 0.01;  // label noise
    std::uint64_t seed = 0;
};

/// Gaussian clusters centered on hypercube vertices of the informative
/// subspace, a random rotation mixing the informative coordinates, pure
/// noise elsewhere, and a fraction of flipped labels. Classes balanced up
/// to rounding, sample order shuffled.
Dataset generate_synthetic(const SynthConfig& cfg, Rng& rng);

struct CsvOptions {
    std::string label_column = "label";
    bool transpose = false;  // features as rows, first column = names
    char delimiter = ',';
};

Dataset load_csv(const std::string& path, const CsvOptions& options = {});
void write_csv(const Dataset& ds, const std::string& path, bool transpose = false,
               char delimiter = ',');

/// Optional log(1+x), then per-feature zero-mean unit-variance over ALL
/// samples (the split is transductive). Constant features end up all-zero.
Dataset preprocess(const Dataset& ds, bool log_transform = false);

/// Uniform random transductive split with round(fraction*n) unlabeled
/// samples. Resamples (up to 100 draws) until every class keeps at least
/// one labeled sample.
SemiSplit mask_labels(const Dataset& ds, double fraction, Rng& rng);

}  // namespace ssae
