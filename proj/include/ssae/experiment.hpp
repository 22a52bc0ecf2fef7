#pragma once

#include "ssae/data.hpp"
#include "ssae/metrics.hpp"
#include "ssae/network.hpp"
#include "ssae/optim.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ssae {

enum class Method { kLabProp, kLabSpread, kFcnn, kSsae };

/// Lowercase token used in flags, config keys and file names.
std::string method_name(Method m);
/// Column header matching the paper's table layout.
std::string method_display_name(Method m);
std::optional<Method> parse_method(const std::string& token);

struct GraphConfig {
    int knn = 7;
    double alpha = 0.2;
    double tol = 1e-3;
    int max_iter = 1000;
};

struct ExperimentConfig {
    bool use_csv = false;
    std::string csv_path;
    CsvOptions csv;
    bool log_transform = false;  // biological-style data only
    SynthConfig synth;

    double unlabeled_fraction = 0.4;
    std::vector<std::uint64_t> seeds{0, 1, 2};
    std::vector<Method> methods{Method::kLabProp, Method::kLabSpread, Method::kFcnn,
                                Method::kSsae};
    TrainConfig train;
    GraphConfig graph;

    std::string out_dir = "out";
    bool overwrite = true;
    bool emit_artifacts = true;
};

struct MethodMetrics {
    double accuracy = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    std::vector<std::uint64_t> seeds;
    std::vector<Method> methods;
    std::vector<std::map<Method, MethodMetrics>> per_seed;  // one entry per seed
    std::map<Method, MethodMetrics> mean;                   // arithmetic mean over seeds
    bool graph_unreachable = false;  // some unlabeled node never received mass
    std::vector<std::string> artifact_paths;
};

/// Per seed: build/load the dataset, preprocess, split, train every
/// requested method on the labeled samples (graph methods see the whole
/// pool with unlabeled marked), and evaluate on the unlabeled subset only.
/// Artifacts are exported for the first seed.
EvalReport run_experiment(const ExperimentConfig& cfg);

struct SweepResult {
    std::string parameter;  // "separability" or "n_informative"
    std::vector<double> values;
    std::vector<EvalReport> reports;
    std::vector<std::string> artifact_paths;
};

SweepResult sweep_separability(ExperimentConfig cfg, const std::vector<double>& values);
SweepResult sweep_informative(ExperimentConfig cfg, const std::vector<int>& values);

/// (sample id, z1, z2, label, labeled flag) CSV plus labeled/unlabeled
/// scatter panels. With k != 2 the scatters are skipped with a warning.
std::vector<std::string> export_latent(const ModelParams& params, const Matrix& x,
                                       const Labels& y, const std::vector<std::string>& class_names,
                                       const SemiSplit& split, const std::string& out_dir,
                                       bool overwrite);

/// Rows sorted by descending l1 norm; log color scale, zeros white.
/// Emits the rendered SVG and the sorted matrix as CSV.
std::vector<std::string> export_weight_heatmap(const Matrix& w1,
                                               const std::vector<std::string>& feature_names,
                                               const std::string& out_dir, bool overwrite);

/// One KDE panel per method, stacked LabProp, LabSpread, FCNN, SSAE.
std::vector<std::string> export_distributions(
    const std::vector<std::pair<Method, ScoreDistribution>>& panels, const std::string& out_dir,
    bool overwrite);

/// Methods as columns, metrics as rows.
void print_report_table(std::ostream& os, const EvalReport& report);

/// Writes content unless the file exists and overwrite is false.
bool write_text_file(const std::string& path, const std::string& content, bool overwrite);

}  // namespace ssae
