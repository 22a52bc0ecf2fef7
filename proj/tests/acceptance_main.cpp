// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier end-to-end checks (criteria 8-12) run the same protocol
// as the CLI at desk scale.

#include "ssae/data.hpp"
#include "ssae/experiment.hpp"
#include "ssae/graph_ssl.hpp"
#include "ssae/metrics.hpp"
#include "ssae/network.hpp"
#include "ssae/numerics.hpp"
#include "ssae/optim.hpp"
#include "ssae/projection.hpp"

#include "test_helpers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace ssae;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& info) {
        if (!detail.empty()) detail += "; ";
        detail += info;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::string kOutRoot = (fs::temp_directory_path() / "ssae_acceptance").string();

// ---------------------------------------------------------------- criteria

Check criterion1_projection_oracle() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20240001);
    for (int trial = 0; trial < 1000; ++trial) {
        const Index n = 1 + static_cast<Index>(rng.below(12));
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = rng.uniform(-5.0, 5.0);
        const double radius = rng.uniform(0.0, 8.0);

        const Vector got = project_l1_ball(v, radius);
        const Vector want = testing::l1_project_bisection_oracle(v, radius);
        if ((got - want).cwiseAbs().maxCoeff() >= 1e-10) {
            c.expect(false, "oracle mismatch at trial " + std::to_string(trial));
            break;
        }
        if (v.cwiseAbs().sum() > radius &&
            std::abs(got.cwiseAbs().sum() - radius) >= 1e-10) {
            c.expect(false, "KKT norm violation at trial " + std::to_string(trial));
            break;
        }
    }
    const double secs = elapsed_s(t0);
    c.expect(secs < 5.0, "runtime " + fmt(secs) + "s >= 5s");
    c.note("1000 vectors in " + fmt(secs) + "s");
    return c;
}

Check criterion2_l11_contract() {
    Check c;
    Rng rng(20240002);
    for (int trial = 0; trial < 200; ++trial) {
        const Index rows = 1 + static_cast<Index>(rng.below(20));
        const Index cols = 1 + static_cast<Index>(rng.below(10));
        const Matrix w = testing::random_matrix(rng, rows, cols);
        const double eta1 = rng.uniform(0.0, 10.0);
        const double eta2 = eta1 + rng.uniform(0.1, 10.0);

        const Matrix p1 = project_l11(w, eta1);
        const Matrix p2 = project_l11(w, eta2);
        if (l11_norm(p1) > eta1 + 1e-10) {
            c.expect(false, "budget exceeded at trial " + std::to_string(trial));
            break;
        }
        if ((project_l11(p1, eta1) - p1).cwiseAbs().maxCoeff() >= 1e-12) {
            c.expect(false, "not idempotent at trial " + std::to_string(trial));
            break;
        }
        bool nested = true;
        for (Index i = 0; i < rows; ++i)
            if (p1.row(i).cwiseAbs().sum() > 0.0 && p2.row(i).cwiseAbs().sum() == 0.0)
                nested = false;
        if (!nested) {
            c.expect(false, "support nesting violated at trial " + std::to_string(trial));
            break;
        }
    }

    Matrix w(2, 2);
    w << 1, 1, 3, 1;
    const Matrix p = project_l11(w, 2.0);
    c.expect(p(0, 0) == 0.0 && p(0, 1) == 0.0 && std::abs(p(1, 0) - 2.0) < 1e-12 &&
                 p(1, 1) == 0.0,
             "worked example [[1,1],[3,1]] eta=2");
    return c;
}

Check criterion3_gradients() {
    Check c;
    double worst = 0.0;
    const double lambdas[] = {0.0, 1.0, 5.0};
    for (int instance = 0; instance < 20; ++instance) {
        Rng rng(3000 + static_cast<uint64_t>(instance));
        const ModelParams p = testing::random_instance(rng, 6, 4, 2);
        const Matrix x = testing::random_matrix(rng, 5, 6, -1.5, 1.5);
        Labels y(5);
        for (int i = 0; i < 5; ++i) y[static_cast<size_t>(i)] = static_cast<int>(rng.below(2));
        const double lambda = lambdas[instance % 3];

        const TotalLoss tl = total_loss(p, x, y, lambda);
        const double err = testing::max_grad_rel_error(
            p, tl.grads, [&](const ModelParams& q) { return total_loss(q, x, y, lambda).phi; });
        worst = std::max(worst, err);
    }
    c.expect(worst < 1e-4, "max relative error " + fmt(worst));
    c.note("max rel err " + fmt(worst) + " over 20 instances");
    return c;
}

Check criterion4_adam() {
    Check c;
    ModelParams p;
    p.w1 = Matrix::Zero(1, 1);
    p.w2 = Matrix::Zero(1, 1);
    p.w3 = Matrix::Zero(1, 1);
    p.w4 = Matrix::Zero(1, 1);
    p.b1 = Vector::Zero(1);
    p.b2 = Vector::Zero(1);
    p.b3 = Vector::Zero(1);
    p.b4 = Vector::Zero(1);

    AdamState st = AdamState::zeros_like(p);
    Gradients g = Gradients::zeros_like(p);
    adam_step(st, p, g, 1e-3);
    c.expect(p.w1(0, 0) == 0.0 && st.t == 1, "zero gradient must leave parameters fixed");

    const double grad = 0.7, gamma = 0.002;
    g.w1(0, 0) = grad;
    st = AdamState::zeros_like(p);
    p.w1(0, 0) = 0.5;
    double theta = 0.5, m = 0.0, v = 0.0;
    for (int t = 1; t <= 2; ++t) {
        adam_step(st, p, g, gamma);
        m = 0.9 * m + 0.1 * grad;
        v = 0.999 * v + 0.001 * grad * grad;
        theta -= gamma * (m / (1.0 - std::pow(0.9, t))) /
                 (std::sqrt(v / (1.0 - std::pow(0.999, t))) + 1e-8);
        if (std::abs(p.w1(0, 0) - theta) >= 1e-12) {
            c.expect(false, "step " + std::to_string(t) + " deviates from the recurrence");
        }
    }
    return c;
}

Check criterion5_double_descent_structure() {
    Check c;
    SynthConfig synth;
    synth.n = 200;
    synth.d = 40;
    synth.n_informative = 8;
    synth.separability = 1.2;
    Rng gen(20240005);
    const Dataset ds = preprocess(generate_synthetic(synth, gen), false);

    TrainConfig cfg;
    cfg.epochs = 6;
    cfg.batch = 8;
    cfg.hidden = 12;
    cfg.eta = 10.0;
    cfg.seed = 7;

    const DoubleDescentResult a = double_descent(cfg, ds.x, ds.y, ds.k);
    const Matrix ones = Matrix::Ones(a.mask.m0.rows(), a.mask.m0.cols());
    c.expect(a.params.w1.cwiseProduct(ones - a.mask.m0).cwiseAbs().maxCoeff() == 0.0,
             "w1 (x) (1-M0) must be exactly zero");
    c.expect((a.rewound.w1 - a.w_init.w1.cwiseProduct(a.mask.m0)).cwiseAbs().maxCoeff() == 0.0,
             "rewound w1 differs from masked init");
    c.expect((a.rewound.w2 - a.w_init.w2).cwiseAbs().maxCoeff() == 0.0 &&
                 (a.rewound.w3 - a.w_init.w3).cwiseAbs().maxCoeff() == 0.0 &&
                 (a.rewound.w4 - a.w_init.w4).cwiseAbs().maxCoeff() == 0.0,
             "rewound dense blocks differ from init");

    const DoubleDescentResult b = double_descent(cfg, ds.x, ds.y, ds.k);
    const Prediction pa = predict(a.params, ds.x);
    const Prediction pb = predict(b.params, ds.x);
    c.expect((a.params.w1 - b.params.w1).cwiseAbs().maxCoeff() == 0.0 &&
                 (pa.scores - pb.scores).cwiseAbs().maxCoeff() == 0.0 &&
                 accuracy(pa.labels, ds.y) == accuracy(pb.labels, ds.y),
             "identical seeds must give bit-identical results");
    return c;
}

Check criterion6_graph_fixed_points() {
    Check c;
    AffinityGraph g;
    g.n = 3;
    g.neighbors = {{1}, {0, 2}, {1}};
    g.weights = {{1.0}, {1.0, 1.0}, {1.0}};
    const Labels y{0, -1, 1};

    const LabelDistribution lp = label_propagation(g, y, 2, 1e-8, 10000);
    c.expect(std::abs(lp.f(1, 0) - 0.5) < 1e-6 && std::abs(lp.f(1, 1) - 0.5) < 1e-6,
             "chain propagation middle node != (0.5, 0.5)");

    const double alpha = 0.8;
    const LabelDistribution lsp = label_spreading(g, y, 2, alpha, 1e-12, 100000);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 3);
    s(0, 1) = s(1, 0) = s(1, 2) = s(2, 1) = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXd y0 = Eigen::MatrixXd::Zero(3, 2);
    y0(0, 0) = 1.0;
    y0(2, 1) = 1.0;
    Eigen::MatrixXd fstar =
        (1.0 - alpha) *
        (Eigen::MatrixXd::Identity(3, 3) - alpha * s).colPivHouseholderQr().solve(y0);
    for (int i = 0; i < 3; ++i) fstar.row(i) /= fstar.row(i).sum();
    double gap = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) gap = std::max(gap, std::abs(lsp.f(i, j) - fstar(i, j)));
    c.expect(gap < 1e-6, "spreading vs closed-form solve gap " + fmt(gap));
    return c;
}

Check criterion7_metric_oracles() {
    Check c;
    Rng rng(20240007);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 4 + static_cast<int>(rng.below(47));
        Vector s(n);
        Labels y(static_cast<size_t>(n));
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            s[i] = std::round(rng.uniform() * 10.0) / 10.0;  // force ties
            y[static_cast<size_t>(i)] = static_cast<int>(rng.below(2));
            pos += y[static_cast<size_t>(i)];
        }
        if (pos == 0 || pos == n) continue;

        double wins = 0.0;
        long pairs = 0;
        for (int i = 0; i < n; ++i) {
            if (y[static_cast<size_t>(i)] != 1) continue;
            for (int j = 0; j < n; ++j) {
                if (y[static_cast<size_t>(j)] != 0) continue;
                ++pairs;
                if (s[i] > s[j]) wins += 1.0;
                else if (s[i] == s[j]) wins += 0.5;
            }
        }
        if (std::abs(roc_auc(s, y) - wins / static_cast<double>(pairs)) >= 1e-12) {
            c.expect(false, "pair-count mismatch at trial " + std::to_string(trial));
            break;
        }
    }

    Vector s(4);
    s << 0.9, 0.8, 0.3, 0.1;
    c.expect(roc_auc(s, {1, 1, 0, 0}) == 1.0, "perfect separation must give 1.0");
    s << 0.9, 0.4, 0.6, 0.1;
    c.expect(roc_auc(s, {1, 1, 0, 0}) == 0.75, "worked 0.75 example");
    return c;
}

ExperimentConfig protocol_config(int d, double sep, const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.synth.n = 1000;
    cfg.synth.d = d;
    cfg.synth.n_informative = 8;
    cfg.synth.separability = sep;
    cfg.unlabeled_fraction = 0.4;
    cfg.seeds = {0, 1, 2};
    cfg.train.eta = 25.0;
    cfg.out_dir = out_dir;
    return cfg;
}

Check criterion8_trend_d1000() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const EvalReport report =
        run_experiment(protocol_config(1000, 0.8, kOutRoot + "/trend_d1000"));
    const double secs = elapsed_s(t0);

    const double ssae = report.mean.at(Method::kSsae).accuracy;
    const double labprop = report.mean.at(Method::kLabProp).accuracy;
    const double labspread = report.mean.at(Method::kLabSpread).accuracy;
    const double ssae_auc = report.mean.at(Method::kSsae).auc;
    const double fcnn_auc = report.mean.at(Method::kFcnn).auc;

    c.expect(ssae >= 0.85, "SSAE accuracy " + fmt(ssae) + " < 0.85");
    c.expect(ssae - labprop >= 0.10, "SSAE - LabProp margin " + fmt(ssae - labprop) + " < 0.10");
    c.expect(ssae - labspread >= 0.10,
             "SSAE - LabSpread margin " + fmt(ssae - labspread) + " < 0.10");
    c.expect(ssae_auc >= fcnn_auc,
             "SSAE AUC " + fmt(ssae_auc) + " < FCNN AUC " + fmt(fcnn_auc));
    c.expect(secs < 300.0, "runtime " + fmt(secs) + "s >= 5min");
    c.note("SSAE " + fmt(ssae) + ", LabProp " + fmt(labprop) + ", " + fmt(secs) + "s");
    return c;
}

Check criterion9_trend_d10000() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    const EvalReport report =
        run_experiment(protocol_config(10000, 0.8, kOutRoot + "/trend_d10000"));
    const double secs = elapsed_s(t0);

    const double ssae = report.mean.at(Method::kSsae).accuracy;
    const double fcnn = report.mean.at(Method::kFcnn).accuracy;
    const double labprop = report.mean.at(Method::kLabProp).accuracy;
    const double labspread = report.mean.at(Method::kLabSpread).accuracy;

    c.expect(ssae - fcnn >= 0.05, "SSAE - FCNN margin " + fmt(ssae - fcnn) + " < 0.05");
    c.expect(labprop <= 0.70, "LabProp accuracy " + fmt(labprop) + " > 0.70");
    c.expect(labspread <= 0.70, "LabSpread accuracy " + fmt(labspread) + " > 0.70");
    c.expect(secs < 1200.0, "runtime " + fmt(secs) + "s >= 20min");
    c.note("SSAE " + fmt(ssae) + ", FCNN " + fmt(fcnn) + ", LabProp " + fmt(labprop) + ", " +
           fmt(secs) + "s");
    return c;
}

Check criterion10_easy_regime() {
    Check c;
    const EvalReport report = run_experiment(protocol_config(100, 2.0, kOutRoot + "/easy"));
    for (Method m : report.methods) {
        const double acc = report.mean.at(m).accuracy;
        c.expect(acc >= 0.90, method_display_name(m) + " accuracy " + fmt(acc) + " < 0.90");
    }
    const double ssae = report.mean.at(Method::kSsae).accuracy;
    c.expect(ssae >= 0.95, "SSAE accuracy " + fmt(ssae) + " < 0.95");
    c.note("SSAE " + fmt(ssae));
    return c;
}

Check criterion11_sparsity() {
    Check c;
    SynthConfig synth;
    synth.n = 1000;
    synth.d = 1000;
    synth.n_informative = 8;
    synth.separability = 0.8;
    Rng gen(derive_seed(0, 0));
    const Dataset ds = preprocess(generate_synthetic(synth, gen), false);
    Rng split_rng(derive_seed(0, 1));
    const SemiSplit split = mask_labels(ds, 0.4, split_rng);

    TrainConfig cfg;
    cfg.eta = 25.0;  // keeps well under 5% of the 1000 rows
    cfg.seed = derive_seed(0, 2);

    const Matrix x_lab = row_slice(ds.x, split.labeled_idx);
    const Labels y_lab = subset(ds.y, split.labeled_idx);
    const DoubleDescentResult dd = double_descent(cfg, x_lab, y_lab, ds.k);

    const double row_fraction =
        static_cast<double>(dd.mask.nonzero_rows()) / static_cast<double>(dd.mask.m0.rows());
    c.expect(row_fraction <= 0.05, "surviving row fraction " + fmt(row_fraction) + " > 5%");

    const Prediction pred = predict(dd.params, row_slice(ds.x, split.unlabeled_idx));
    const double acc = accuracy(pred.labels, subset(ds.y, split.unlabeled_idx));
    c.expect(acc >= 0.85, "sparse SSAE accuracy " + fmt(acc) + " < 0.85");

    // the exported heatmap's zero-row set must equal the mask's, exactly
    const std::string dir = kOutRoot + "/sparsity";
    fs::create_directories(dir);
    export_weight_heatmap(dd.params.w1, ds.feature_names, dir, true);
    std::ifstream csv(dir + "/weight_heatmap.csv");
    std::string line;
    std::getline(csv, line);  // header
    size_t csv_zero_rows = 0;
    while (std::getline(csv, line)) {
        const auto first_comma = line.find(',');
        bool all_zero = true;
        std::stringstream fields(line.substr(first_comma + 1));
        std::string field;
        while (std::getline(fields, field, ','))
            if (std::stod(field) != 0.0) all_zero = false;
        if (all_zero) ++csv_zero_rows;
    }
    const size_t mask_zero_rows =
        static_cast<size_t>(dd.mask.m0.rows() - dd.mask.nonzero_rows());
    c.expect(csv_zero_rows == mask_zero_rows,
             "heatmap zero rows " + std::to_string(csv_zero_rows) + " != mask zero rows " +
                 std::to_string(mask_zero_rows));
    c.note("rows kept " + fmt(100.0 * row_fraction) + "%, accuracy " + fmt(acc));
    return c;
}

Check criterion12_artifacts() {
    Check c;
    ExperimentConfig cfg = protocol_config(100, 1.5, kOutRoot + "/artifacts");
    cfg.synth.n = 300;
    cfg.seeds = {4};
    cfg.train.epochs = 12;
    cfg.train.eta = 10.0;

    fs::remove_all(cfg.out_dir);
    const EvalReport report = run_experiment(cfg);

    const std::vector<std::string> expected = {
        "metrics.csv",          "latent.csv",           "latent_labeled.svg",
        "latent_unlabeled.svg", "weight_heatmap.svg",   "weight_heatmap.csv",
        "score_dist_labprop.csv", "score_dist_labspread.csv", "score_dist_fcnn.csv",
        "score_dist_ssae.csv",  "score_distributions.svg", "run.manifest"};
    for (const auto& name : expected)
        c.expect(fs::exists(cfg.out_dir + "/" + name), "missing artifact " + name);
    for (const auto& path : report.artifact_paths)
        c.expect(fs::exists(path), "referenced artifact missing: " + path);

    const std::string panels = slurp(cfg.out_dir + "/score_distributions.svg");
    size_t count = 0, pos = 0;
    while ((pos = panels.find("<g class='panel'>", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    c.expect(count == 4, "expected 4 distribution panels, found " + std::to_string(count));

    std::vector<std::pair<std::string, std::string>> snapshot;
    for (const auto& name : expected) snapshot.emplace_back(name, slurp(cfg.out_dir + "/" + name));
    run_experiment(cfg);
    for (const auto& [name, content] : snapshot)
        c.expect(slurp(cfg.out_dir + "/" + name) == content, "rerun changed " + name);
    return c;
}

}  // namespace

int main() {
    fs::create_directories(kOutRoot);

    struct Criterion {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "projection oracle equivalence + KKT", criterion1_projection_oracle},
        {2, "l1,1 projection contract", criterion2_l11_contract},
        {3, "gradient correctness vs finite differences", criterion3_gradients},
        {4, "adam conformance", criterion4_adam},
        {5, "double-descent structure and determinism", criterion5_double_descent_structure},
        {6, "graph baseline fixed points", criterion6_graph_fixed_points},
        {7, "metric oracles", criterion7_metric_oracles},
        {8, "trend reproduction d=1000", criterion8_trend_d1000},
        {9, "trend reproduction d=10000", criterion9_trend_d10000},
        {10, "easy-regime sanity", criterion10_easy_regime},
        {11, "sparsity behavior", criterion11_sparsity},
        {12, "artifact completeness and reproducibility", criterion12_artifacts},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Check result;
        try {
            result = criterion.run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s%s%s\n", result.ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, result.detail.empty() ? "" : " -- ",
                    result.detail.c_str());
        std::fflush(stdout);
        if (!result.ok) ++failures;
    }

    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
