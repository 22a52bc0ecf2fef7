#include "ssae/experiment.hpp"

#include "ssae/graph_ssl.hpp"
#include "ssae/numerics.hpp"
#include "ssae/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace ssae {

namespace {

constexpr Method kMethodOrder[] = {Method::kLabProp, Method::kLabSpread, Method::kFcnn,
                                   Method::kSsae};

std::string fmt_metric(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

int argmax_row(const Matrix& scores, Index i) {
    int best = 0;
    for (Index j = 1; j < scores.cols(); ++j)
        if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
    return best;
}

Labels argmax_rows(const Matrix& scores) {
    Labels out(static_cast<size_t>(scores.rows()));
    for (Index i = 0; i < scores.rows(); ++i) out[static_cast<size_t>(i)] = argmax_row(scores, i);
    return out;
}

/// Confidence of the predicted class, one value per row.
Vector predicted_class_scores(const Matrix& scores) {
    Vector out(scores.rows());
    for (Index i = 0; i < scores.rows(); ++i) out[i] = scores(i, argmax_row(scores, i));
    return out;
}

MethodMetrics evaluate_predictions(const Labels& pred, const Matrix& scores, const Labels& truth,
                                   int k) {
    MethodMetrics m;
    m.accuracy = accuracy(pred, truth);
    m.f1 = f1_score(pred, truth, k);
    m.auc = k == 2 ? roc_auc(scores.col(1), truth) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

struct SeedOutcome {
    std::map<Method, MethodMetrics> metrics;
    std::vector<std::pair<Method, ScoreDistribution>> panels;  // paper order
    bool graph_unreachable = false;

    // SSAE state kept for the artifact bundle (first seed only).
    bool has_ssae = false;
    DoubleDescentResult ssae;
};

SeedOutcome run_seed(const ExperimentConfig& cfg, const Dataset& ds, std::uint64_t seed,
                     bool keep_model) {
    Rng split_rng(derive_seed(seed, 1));
    const SemiSplit split = mask_labels(ds, cfg.unlabeled_fraction, split_rng);

    const Matrix x_lab = row_slice(ds.x, split.labeled_idx);
    const Labels y_lab = subset(ds.y, split.labeled_idx);
    const Matrix x_unl = row_slice(ds.x, split.unlabeled_idx);
    const Labels y_unl = subset(ds.y, split.unlabeled_idx);

    const bool wants_graph =
        std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
            return m == Method::kLabProp || m == Method::kLabSpread;
        });
    AffinityGraph graph;
    Labels y_partial;
    if (wants_graph) {
        graph = knn_affinity(ds.x, cfg.graph.knn);
        y_partial.assign(ds.y.begin(), ds.y.end());
        for (int i : split.unlabeled_idx) y_partial[static_cast<size_t>(i)] = -1;
    }

    SeedOutcome outcome;
    for (Method method : kMethodOrder) {
        if (std::find(cfg.methods.begin(), cfg.methods.end(), method) == cfg.methods.end())
            continue;

        Labels pred;
        Matrix scores_unl;
        switch (method) {
            case Method::kLabProp:
            case Method::kLabSpread: {
                const LabelDistribution ld =
                    method == Method::kLabProp
                        ? label_propagation(graph, y_partial, ds.k, cfg.graph.tol,
                                            cfg.graph.max_iter)
                        : label_spreading(graph, y_partial, ds.k, cfg.graph.alpha, cfg.graph.tol,
                                          cfg.graph.max_iter);
                outcome.graph_unreachable |= ld.has_unreachable;
                scores_unl = row_slice(ld.f, split.unlabeled_idx);
                pred = argmax_rows(scores_unl);
                break;
            }
            case Method::kFcnn: {
                TrainConfig tc = cfg.train;
                tc.seed = derive_seed(seed, 3);
                tc.epochs = 2 * cfg.train.epochs;  // same step budget as two descents
                Rng rng(tc.seed);
                ModelParams params = init_params(ds.d(), tc.hidden, ds.k, rng);
                train_one_descent(params, x_lab, y_lab, tc, rng, nullptr,
                                  Objective::kEncoderOnly);
                const Prediction p = predict(params, x_unl);
                pred = p.labels;
                scores_unl = p.scores;
                break;
            }
            case Method::kSsae: {
                TrainConfig tc = cfg.train;
                tc.seed = derive_seed(seed, 2);
                DoubleDescentResult dd = double_descent(tc, x_lab, y_lab, ds.k);
                const Prediction p = predict(dd.params, x_unl);
                pred = p.labels;
                scores_unl = p.scores;
                if (keep_model) {
                    outcome.ssae = std::move(dd);
                    outcome.has_ssae = true;
                }
                break;
            }
        }

        outcome.metrics[method] = evaluate_predictions(pred, scores_unl, y_unl, ds.k);
        outcome.panels.emplace_back(method,
                                    score_distribution(predicted_class_scores(scores_unl), y_unl, ds.k));
    }
    return outcome;
}

std::string metrics_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "seed,method,accuracy,auc,f1\n";
    for (size_t s = 0; s < report.seeds.size(); ++s)
        for (Method m : report.methods) {
            const MethodMetrics& mm = report.per_seed[s].at(m);
            out << report.seeds[s] << "," << method_name(m) << "," << fmt_metric(mm.accuracy)
                << "," << fmt_metric(mm.auc) << "," << fmt_metric(mm.f1) << "\n";
        }
    for (Method m : report.methods) {
        const MethodMetrics& mm = report.mean.at(m);
        out << "mean," << method_name(m) << "," << fmt_metric(mm.accuracy) << ","
            << fmt_metric(mm.auc) << "," << fmt_metric(mm.f1) << "\n";
    }
    return out.str();
}

std::string manifest_text(const ExperimentConfig& cfg, const EvalReport& report) {
    std::ostringstream out;
    out << "tool=ssae\n";
    out << "format=1\n";
    if (cfg.use_csv) {
        out << "data.dataset=csv\n";
        out << "data.csv_path=" << cfg.csv_path << "\n";
        out << "data.label_column=" << cfg.csv.label_column << "\n";
        out << "data.transpose=" << (cfg.csv.transpose ? 1 : 0) << "\n";
        out << "data.log1p=" << (cfg.log_transform ? 1 : 0) << "\n";
    } else {
        out << "data.dataset=synth\n";
        out << "data.n=" << cfg.synth.n << "\n";
        out << "data.d=" << cfg.synth.d << "\n";
        out << "data.informative=" << cfg.synth.n_informative << "\n";
        out << "data.sep=" << fmt_metric(cfg.synth.separability) << "\n";
        out << "data.k=" << cfg.synth.k << "\n";
        out << "data.flip=" << fmt_metric(cfg.synth.flip_fraction) << "\n";
    }
    out << "split.unlabeled_frac=" << fmt_metric(cfg.unlabeled_fraction) << "\n";
    out << "run.seeds=";
    for (size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
    out << "\nrun.methods=";
    for (size_t i = 0; i < report.methods.size(); ++i)
        out << (i ? "," : "") << method_name(report.methods[i]);
    out << "\n";
    out << "train.lambda=" << fmt_metric(cfg.train.lambda) << "\n";
    out << "train.eta=" << fmt_metric(cfg.train.eta) << "\n";
    out << "train.gamma=" << fmt_metric(cfg.train.gamma) << "\n";
    out << "train.epochs=" << cfg.train.epochs << "\n";
    out << "train.batch=" << cfg.train.batch << "\n";
    out << "train.hidden=" << cfg.train.hidden << "\n";
    out << "train.scheduler=" << (cfg.train.scheduler == Scheduler::kConstant ? "constant" : "step")
        << "\n";
    out << "graph.knn=" << cfg.graph.knn << "\n";
    out << "graph.alpha=" << fmt_metric(cfg.graph.alpha) << "\n";
    out << "graph.unreachable_nodes=" << (report.graph_unreachable ? 1 : 0) << "\n";
    for (const auto& path : report.artifact_paths) out << "artifact=" << path << "\n";
    return out.str();
}

EvalReport evaluate_experiment(const ExperimentConfig& cfg, SeedOutcome* first_seed_out) {
    if (cfg.methods.empty()) throw ConfigError("experiment: at least one method required");
    if (cfg.seeds.empty()) throw ConfigError("experiment: at least one seed required");

    EvalReport report;
    report.seeds = cfg.seeds;
    for (Method m : kMethodOrder)
        if (std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end())
            report.methods.push_back(m);

    Dataset csv_ds;
    if (cfg.use_csv) csv_ds = preprocess(load_csv(cfg.csv_path, cfg.csv), cfg.log_transform);

    for (size_t s = 0; s < cfg.seeds.size(); ++s) {
        const std::uint64_t seed = cfg.seeds[s];
        Dataset ds;
        if (cfg.use_csv) {
            ds = csv_ds;
        } else {
            SynthConfig synth = cfg.synth;
            synth.seed = seed;
            Rng gen_rng(derive_seed(seed, 0));
            ds = preprocess(generate_synthetic(synth, gen_rng), false);
        }

        const bool keep = cfg.emit_artifacts && s == 0 && first_seed_out != nullptr;
        SeedOutcome outcome = run_seed(cfg, ds, seed, keep);
        report.per_seed.push_back(outcome.metrics);
        report.graph_unreachable |= outcome.graph_unreachable;
        if (keep) *first_seed_out = std::move(outcome);
    }

    for (Method m : report.methods) {
        MethodMetrics mean;
        for (const auto& row : report.per_seed) {
            mean.accuracy += row.at(m).accuracy;
            mean.auc += row.at(m).auc;
            mean.f1 += row.at(m).f1;
        }
        const double n = static_cast<double>(report.per_seed.size());
        mean.accuracy /= n;
        mean.auc /= n;
        mean.f1 /= n;
        report.mean[m] = mean;
    }
    return report;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::kLabProp: return "labprop";
        case Method::kLabSpread: return "labspread";
        case Method::kFcnn: return "fcnn";
        case Method::kSsae: return "ssae";
    }
    return "?";
}

std::string method_display_name(Method m) {
    switch (m) {
        case Method::kLabProp: return "LabProp";
        case Method::kLabSpread: return "LabSpread";
        case Method::kFcnn: return "FCNN";
        case Method::kSsae: return "SSAE";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& token) {
    for (Method m : kMethodOrder)
        if (token == method_name(m)) return m;
    return std::nullopt;
}

bool write_text_file(const std::string& path, const std::string& content, bool overwrite) {
    if (!overwrite && std::filesystem::exists(path)) return false;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    return true;
}

std::vector<std::string> export_latent(const ModelParams& params, const Matrix& x,
                                       const Labels& y, const std::vector<std::string>& class_names,
                                       const SemiSplit& split, const std::string& out_dir,
                                       bool overwrite) {
    const Matrix z = fcnn_forward(params, x);
    std::vector<bool> labeled(static_cast<size_t>(x.rows()), false);
    for (int i : split.labeled_idx) labeled[static_cast<size_t>(i)] = true;

    std::vector<std::string> paths;
    std::ostringstream csv;
    csv << "sample";
    for (Index j = 0; j < z.cols(); ++j) csv << ",z" << (j + 1);
    csv << ",label,labeled\n";
    for (Index i = 0; i < z.rows(); ++i) {
        csv << i;
        for (Index j = 0; j < z.cols(); ++j) csv << "," << fmt_metric(z(i, j));
        csv << "," << y[static_cast<size_t>(i)] << "," << (labeled[static_cast<size_t>(i)] ? 1 : 0)
            << "\n";
    }
    const std::string csv_path = out_dir + "/latent.csv";
    write_text_file(csv_path, csv.str(), overwrite);
    paths.push_back(csv_path);

    if (z.cols() != 2) {
        std::cerr << "warning: latent dimension k=" << z.cols()
                  << " != 2, exporting CSV only (no scatter plots)\n";
        return paths;
    }

    const auto panel = [&](bool want_labeled, const std::string& title, const std::string& file) {
        std::vector<svg::ScatterPoint> pts;
        for (Index i = 0; i < z.rows(); ++i)
            if (labeled[static_cast<size_t>(i)] == want_labeled)
                pts.push_back({z(i, 0), z(i, 1), y[static_cast<size_t>(i)]});
        const std::string path = out_dir + "/" + file;
        write_text_file(path, svg::scatter(pts, class_names, title, "z1", "z2"), overwrite);
        paths.push_back(path);
    };
    panel(true, "Latent space, labeled samples", "latent_labeled.svg");
    panel(false, "Latent space, unlabeled samples", "latent_unlabeled.svg");
    return paths;
}

std::vector<std::string> export_weight_heatmap(const Matrix& w1,
                                               const std::vector<std::string>& feature_names,
                                               const std::string& out_dir, bool overwrite) {
    std::vector<int> order(static_cast<size_t>(w1.rows()));
    std::iota(order.begin(), order.end(), 0);
    Vector norms(w1.rows());
    for (Index i = 0; i < w1.rows(); ++i) norms[i] = w1.row(i).cwiseAbs().sum();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return norms[a] > norms[b]; });

    const Matrix sorted = row_slice(w1, order);
    std::vector<std::string> paths;
    const std::string svg_path = out_dir + "/weight_heatmap.svg";
    write_text_file(svg_path,
                    svg::heatmap_log(sorted, "First-layer weights, rows sorted by importance"),
                    overwrite);
    paths.push_back(svg_path);

    std::ostringstream csv;
    csv << "feature";
    for (Index j = 0; j < sorted.cols(); ++j) csv << ",n" << j;
    csv << "\n";
    for (Index i = 0; i < sorted.rows(); ++i) {
        const size_t orig = static_cast<size_t>(order[static_cast<size_t>(i)]);
        csv << (orig < feature_names.size() ? feature_names[orig] : "f" + std::to_string(orig));
        for (Index j = 0; j < sorted.cols(); ++j) csv << "," << fmt_metric(sorted(i, j));
        csv << "\n";
    }
    const std::string csv_path = out_dir + "/weight_heatmap.csv";
    write_text_file(csv_path, csv.str(), overwrite);
    paths.push_back(csv_path);
    return paths;
}

std::vector<std::string> export_distributions(
    const std::vector<std::pair<Method, ScoreDistribution>>& panels, const std::string& out_dir,
    bool overwrite) {
    std::vector<std::string> paths;
    std::vector<svg::KdePanel> svg_panels;
    for (const auto& [method, dist] : panels) {
        svg_panels.push_back({method_display_name(method), dist});

        std::ostringstream csv;
        csv << "score";
        for (size_t c = 0; c < dist.density_per_class.size(); ++c) csv << ",class" << c;
        csv << "\n";
        for (Index g = 0; g < dist.grid.size(); ++g) {
            csv << fmt_metric(dist.grid[g]);
            for (const auto& curve : dist.density_per_class)
                csv << "," << (curve.size() > g ? fmt_metric(curve[g]) : "0");
            csv << "\n";
        }
        const std::string csv_path = out_dir + "/score_dist_" + method_name(method) + ".csv";
        write_text_file(csv_path, csv.str(), overwrite);
        paths.push_back(csv_path);
    }
    const std::string svg_path = out_dir + "/score_distributions.svg";
    write_text_file(svg_path, svg::kde_panels(svg_panels, "Prediction score distributions"),
                    overwrite);
    paths.push_back(svg_path);
    return paths;
}

void print_report_table(std::ostream& os, const EvalReport& report) {
    os << "\nMean over " << report.seeds.size() << " seed" << (report.seeds.size() == 1 ? "" : "s")
       << ":\n";
    char buf[64];
    os << "            ";
    for (Method m : report.methods) {
        std::snprintf(buf, sizeof(buf), "%10s", method_display_name(m).c_str());
        os << buf;
    }
    os << "\nAccuracy %  ";
    for (Method m : report.methods) {
        std::snprintf(buf, sizeof(buf), "%10.2f", 100.0 * report.mean.at(m).accuracy);
        os << buf;
    }
    os << "\nAUC         ";
    for (Method m : report.methods) {
        std::snprintf(buf, sizeof(buf), "%10.4f", report.mean.at(m).auc);
        os << buf;
    }
    os << "\nF1 score    ";
    for (Method m : report.methods) {
        std::snprintf(buf, sizeof(buf), "%10.4f", report.mean.at(m).f1);
        os << buf;
    }
    os << "\n";
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);

    SeedOutcome first_seed;
    EvalReport report = evaluate_experiment(cfg, &first_seed);

    if (cfg.emit_artifacts && !report.per_seed.empty()) {
        if (first_seed.has_ssae) {
            // Re-derive the first seed's dataset and split for the exports.
            Dataset ds;
            if (cfg.use_csv) {
                ds = preprocess(load_csv(cfg.csv_path, cfg.csv), cfg.log_transform);
            } else {
                SynthConfig synth = cfg.synth;
                synth.seed = cfg.seeds.front();
                Rng gen_rng(derive_seed(cfg.seeds.front(), 0));
                ds = preprocess(generate_synthetic(synth, gen_rng), false);
            }
            Rng split_rng(derive_seed(cfg.seeds.front(), 1));
            const SemiSplit split = mask_labels(ds, cfg.unlabeled_fraction, split_rng);

            auto latent = export_latent(first_seed.ssae.params, ds.x, ds.y, ds.class_names, split,
                                        cfg.out_dir, cfg.overwrite);
            report.artifact_paths.insert(report.artifact_paths.end(), latent.begin(), latent.end());
            auto heat = export_weight_heatmap(first_seed.ssae.params.w1, ds.feature_names,
                                              cfg.out_dir, cfg.overwrite);
            report.artifact_paths.insert(report.artifact_paths.end(), heat.begin(), heat.end());
        }
        auto dists = export_distributions(first_seed.panels, cfg.out_dir, cfg.overwrite);
        report.artifact_paths.insert(report.artifact_paths.end(), dists.begin(), dists.end());
    }

    const std::string metrics_path = cfg.out_dir + "/metrics.csv";
    write_text_file(metrics_path, metrics_csv(report), cfg.overwrite);
    report.artifact_paths.push_back(metrics_path);
    write_text_file(cfg.out_dir + "/run.manifest", manifest_text(cfg, report), cfg.overwrite);

    print_report_table(std::cout, report);
    return report;
}

namespace {

SweepResult sweep_impl(ExperimentConfig cfg, const std::string& parameter,
                       const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: value list is empty");
    if (cfg.use_csv) throw ConfigError("sweep: only synthetic datasets can be swept");
    std::filesystem::create_directories(cfg.out_dir);

    SweepResult result;
    result.parameter = parameter;
    result.values = values;

    ExperimentConfig point = cfg;
    point.emit_artifacts = false;
    for (double v : values) {
        if (parameter == "separability") {
            point.synth.separability = v;
        } else {
            point.synth.n_informative = static_cast<int>(v);
        }
        result.reports.push_back(evaluate_experiment(point, nullptr));
    }

    std::ostringstream csv;
    csv << parameter << ",method,seed,accuracy,auc,f1\n";
    for (size_t i = 0; i < values.size(); ++i) {
        const EvalReport& rep = result.reports[i];
        for (size_t s = 0; s < rep.seeds.size(); ++s)
            for (Method m : rep.methods) {
                const MethodMetrics& mm = rep.per_seed[s].at(m);
                csv << fmt_metric(values[i]) << "," << method_name(m) << "," << rep.seeds[s] << ","
                    << fmt_metric(mm.accuracy) << "," << fmt_metric(mm.auc) << ","
                    << fmt_metric(mm.f1) << "\n";
            }
    }
    const std::string csv_path = cfg.out_dir + "/sweep_" + parameter + ".csv";
    write_text_file(csv_path, csv.str(), cfg.overwrite);
    result.artifact_paths.push_back(csv_path);

    std::vector<svg::Series> series;
    for (Method m : result.reports.front().methods) {
        svg::Series s;
        s.name = method_display_name(m);
        for (size_t i = 0; i < values.size(); ++i) {
            s.xs.push_back(values[i]);
            s.ys.push_back(result.reports[i].mean.at(m).accuracy);
        }
        series.push_back(std::move(s));
    }
    const std::string svg_path = cfg.out_dir + "/sweep_" + parameter + ".svg";
    write_text_file(svg_path,
                    svg::line_plot(series, "Accuracy as a function of " + parameter, parameter,
                                   "accuracy"),
                    cfg.overwrite);
    result.artifact_paths.push_back(svg_path);
    return result;
}

}  // namespace

SweepResult sweep_separability(ExperimentConfig cfg, const std::vector<double>& values) {
    return sweep_impl(std::move(cfg), "separability", values);
}

SweepResult sweep_informative(ExperimentConfig cfg, const std::vector<int>& values) {
    std::vector<double> as_double(values.begin(), values.end());
    return sweep_impl(std::move(cfg), "n_informative", as_double);
}

}  // namespace ssae
