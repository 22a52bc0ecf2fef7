// Experiment runner: synthetic benchmarks, CSV datasets, metric tables and
// figure artifacts for the semi-supervised autoencoder and its baselines.

#include "ssae/experiment.hpp"
#include "ssae/numerics.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ssae::ConfigError;
using ssae::DataError;

struct Options {
    std::string dataset = "synth";
    std::string csv_path;
    std::string label_column = "label";
    bool transpose = false;
    std::string delimiter = ",";
    bool log1p = false;

    int n = 1000;
    int d = 1000;
    int informative = 8;
    int k = 2;
    double sep = 1.0;
    double flip = 0.01;

    double unlabeled_frac = 0.4;
    std::string seeds = "0,1,2";
    std::string methods = "labprop,labspread,fcnn,ssae";

    double lambda = 1.0;
    double eta = 25.0;
    double gamma = 1e-3;
    int epochs = 30;
    int batch = 8;
    int hidden = 100;
    std::string scheduler = "constant";
    bool project_every_epoch = false;

    int knn = 7;
    double alpha = 0.2;

    std::string out_dir = "out";
    bool overwrite = true;

    std::string values;          // sweep points
    std::uint64_t seed = 0;      // synth-gen
    std::string out = "synth.csv";
};

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& tok : split_csv_list(s)) {
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad seed '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("--seeds: no seeds given");
    return out;
}

std::vector<ssae::Method> parse_methods(const std::string& s) {
    std::vector<ssae::Method> out;
    for (const auto& tok : split_csv_list(s)) {
        const auto m = ssae::parse_method(tok);
        if (!m) throw ConfigError("unknown method '" + tok + "' (expected labprop, labspread, fcnn, ssae)");
        out.push_back(*m);
    }
    if (out.empty()) throw ConfigError("--methods: no methods given");
    return out;
}

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split_csv_list(s)) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad sweep value '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError("--values: no values given");
    return out;
}

ssae::ExperimentConfig to_experiment_config(const Options& o) {
    ssae::ExperimentConfig cfg;
    if (o.dataset == "csv") {
        if (o.csv_path.empty()) throw ConfigError("--csv-path is required with --dataset csv");
        cfg.use_csv = true;
        cfg.csv_path = o.csv_path;
        cfg.csv.label_column = o.label_column;
        cfg.csv.transpose = o.transpose;
        if (o.delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
        cfg.csv.delimiter = o.delimiter[0];
        cfg.log_transform = o.log1p;
    } else if (o.dataset == "synth") {
        cfg.use_csv = false;
        cfg.synth.n = o.n;
        cfg.synth.d = o.d;
        cfg.synth.n_informative = o.informative;
        cfg.synth.k = o.k;
        cfg.synth.separability = o.sep;
        cfg.synth.flip_fraction = o.flip;
    } else {
        throw ConfigError("--dataset must be 'synth' or 'csv'");
    }

    cfg.unlabeled_fraction = o.unlabeled_frac;
    cfg.seeds = parse_seeds(o.seeds);
    cfg.methods = parse_methods(o.methods);

    cfg.train.lambda = o.lambda;
    cfg.train.eta = o.eta > 0.0 ? o.eta : std::numeric_limits<double>::infinity();
    cfg.train.gamma = o.gamma;
    cfg.train.epochs = o.epochs;
    cfg.train.batch = o.batch;
    cfg.train.hidden = o.hidden;
    cfg.train.project_every_epoch = o.project_every_epoch;
    if (o.scheduler == "constant") {
        cfg.train.scheduler = ssae::Scheduler::kConstant;
    } else if (o.scheduler == "step") {
        cfg.train.scheduler = ssae::Scheduler::kStep;
    } else {
        throw ConfigError("--scheduler must be 'constant' or 'step'");
    }

    cfg.graph.knn = o.knn;
    cfg.graph.alpha = o.alpha;
    cfg.out_dir = o.out_dir;
    cfg.overwrite = o.overwrite;
    return cfg;
}

// Flat key=value config file; the part after the last '.' names the flag
// (e.g. train.gamma=0.001 sets --gamma). Command-line flags win.
void apply_config_file(const std::string& path, Options& o) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");

    const std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"dataset", [&](const std::string& v) { o.dataset = v; }},
        {"csv-path", [&](const std::string& v) { o.csv_path = v; }},
        {"label-column", [&](const std::string& v) { o.label_column = v; }},
        {"transpose", [&](const std::string& v) { o.transpose = v == "1" || v == "true"; }},
        {"delimiter", [&](const std::string& v) { o.delimiter = v; }},
        {"log1p", [&](const std::string& v) { o.log1p = v == "1" || v == "true"; }},
        {"n", [&](const std::string& v) { o.n = std::stoi(v); }},
        {"d", [&](const std::string& v) { o.d = std::stoi(v); }},
        {"informative", [&](const std::string& v) { o.informative = std::stoi(v); }},
        {"k", [&](const std::string& v) { o.k = std::stoi(v); }},
        {"sep", [&](const std::string& v) { o.sep = std::stod(v); }},
        {"flip", [&](const std::string& v) { o.flip = std::stod(v); }},
        {"unlabeled-frac", [&](const std::string& v) { o.unlabeled_frac = std::stod(v); }},
        {"seeds", [&](const std::string& v) { o.seeds = v; }},
        {"methods", [&](const std::string& v) { o.methods = v; }},
        {"lambda", [&](const std::string& v) { o.lambda = std::stod(v); }},
        {"eta", [&](const std::string& v) { o.eta = std::stod(v); }},
        {"gamma", [&](const std::string& v) { o.gamma = std::stod(v); }},
        {"epochs", [&](const std::string& v) { o.epochs = std::stoi(v); }},
        {"batch", [&](const std::string& v) { o.batch = std::stoi(v); }},
        {"hidden", [&](const std::string& v) { o.hidden = std::stoi(v); }},
        {"scheduler", [&](const std::string& v) { o.scheduler = v; }},
        {"project-every-epoch",
         [&](const std::string& v) { o.project_every_epoch = v == "1" || v == "true"; }},
        {"knn", [&](const std::string& v) { o.knn = std::stoi(v); }},
        {"alpha", [&](const std::string& v) { o.alpha = std::stod(v); }},
        {"out-dir", [&](const std::string& v) { o.out_dir = v; }},
        {"overwrite", [&](const std::string& v) { o.overwrite = v == "1" || v == "true"; }},
        {"values", [&](const std::string& v) { o.values = v; }},
        {"seed", [&](const std::string& v) { o.seed = std::stoull(v); }},
        {"out", [&](const std::string& v) { o.out = v; }},
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
        };
        strip(key);
        strip(value);
        const auto dot = key.rfind('.');
        const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);

        const auto it = setters.find(name);
        if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
        try {
            it->second(value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config: bad value for '" + key + "': '" + value + "'");
        }
    }
}

void add_data_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--dataset", o.dataset, "Dataset source: synth or csv");
    cmd->add_option("--csv-path", o.csv_path, "CSV file to load");
    cmd->add_option("--label-column", o.label_column, "Label column (or row in transpose mode)");
    cmd->add_option("--transpose", o.transpose, "CSV has features as rows");
    cmd->add_option("--delimiter", o.delimiter, "CSV field delimiter");
    cmd->add_option("--log1p", o.log1p, "Apply log(1+x) before standardization");
    cmd->add_option("--n", o.n, "Synthetic sample count");
    cmd->add_option("--d", o.d, "Synthetic feature count");
    cmd->add_option("--informative", o.informative, "Synthetic informative feature count");
    cmd->add_option("--k", o.k, "Synthetic class count");
    cmd->add_option("--sep", o.sep, "Synthetic class separability");
    cmd->add_option("--flip", o.flip, "Synthetic label flip fraction");
}

void add_run_options(CLI::App* cmd, Options& o) {
    add_data_options(cmd, o);
    cmd->add_option("--unlabeled-frac", o.unlabeled_frac, "Fraction of samples left unlabeled");
    cmd->add_option("--seeds", o.seeds, "Comma-separated seed list");
    cmd->add_option("--methods", o.methods, "Comma-separated subset of labprop,labspread,fcnn,ssae");
    cmd->add_option("--lambda", o.lambda, "Reconstruction loss weight");
    cmd->add_option("--eta", o.eta, "l1,1 budget for the first layer (<= 0 disables projection)");
    cmd->add_option("--gamma", o.gamma, "Learning rate");
    cmd->add_option("--epochs", o.epochs, "Epochs per descent");
    cmd->add_option("--batch", o.batch, "Mini-batch size");
    cmd->add_option("--hidden", o.hidden, "Hidden layer width");
    cmd->add_option("--scheduler", o.scheduler, "Learning-rate schedule: constant or step");
    cmd->add_option("--project-every-epoch", o.project_every_epoch,
                    "Also project w1 after every first-descent epoch");
    cmd->add_option("--knn", o.knn, "Neighbors for the graph baselines");
    cmd->add_option("--alpha", o.alpha, "Label spreading clamping factor");
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_option("--overwrite", o.overwrite, "Overwrite existing output files");
}

int dispatch(const std::string& command, Options& o) {
    if (command == "synth-gen") {
        ssae::SynthConfig cfg;
        cfg.n = o.n;
        cfg.d = o.d;
        cfg.n_informative = o.informative;
        cfg.k = o.k;
        cfg.separability = o.sep;
        cfg.flip_fraction = o.flip;
        cfg.seed = o.seed;
        ssae::Rng rng(cfg.seed);
        const ssae::Dataset ds = ssae::generate_synthetic(cfg, rng);
        ssae::write_csv(ds, o.out, o.transpose, o.delimiter.at(0));
        std::cout << "wrote " << ds.n() << "x" << ds.d() << " dataset to " << o.out << "\n";
        return 0;
    }

    if (command == "run") {
        ssae::run_experiment(to_experiment_config(o));
        return 0;
    }
    if (command == "export") {
        // Single-seed run emitting the full artifact bundle.
        ssae::ExperimentConfig cfg = to_experiment_config(o);
        cfg.seeds.resize(1);
        ssae::run_experiment(cfg);
        return 0;
    }
    if (command == "sweep-sep") {
        if (o.values.empty()) throw ConfigError("--values is required for sweep-sep");
        ssae::sweep_separability(to_experiment_config(o), parse_values(o.values));
        return 0;
    }
    if (command == "sweep-informative") {
        if (o.values.empty()) throw ConfigError("--values is required for sweep-informative");
        std::vector<int> ints;
        for (double v : parse_values(o.values)) ints.push_back(static_cast<int>(v));
        ssae::sweep_informative(to_experiment_config(o), ints);
        return 0;
    }
    throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    Options opts;

    // --config is applied before CLI parsing so flags can override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], opts);
            } catch (const ConfigError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"Semi-supervised autoencoder experiments"};
    app.require_subcommand(1);
    std::string config_path;

    CLI::App* synth_gen = app.add_subcommand("synth-gen", "Generate a synthetic dataset CSV");
    add_data_options(synth_gen, opts);
    synth_gen->add_option("--seed", opts.seed, "Generator seed");
    synth_gen->add_option("--out", opts.out, "Output CSV path");

    CLI::App* run = app.add_subcommand("run", "Run the full experiment protocol");
    add_run_options(run, opts);

    CLI::App* exp = app.add_subcommand("export", "Single-seed run that exports the artifact bundle");
    add_run_options(exp, opts);

    CLI::App* sweep_sep = app.add_subcommand("sweep-sep", "Sweep class separability");
    add_run_options(sweep_sep, opts);
    sweep_sep->add_option("--values", opts.values, "Comma-separated separability values");

    CLI::App* sweep_inf = app.add_subcommand("sweep-informative", "Sweep informative feature count");
    add_run_options(sweep_inf, opts);
    sweep_inf->add_option("--values", opts.values, "Comma-separated informative-feature counts");

    for (CLI::App* cmd : {synth_gen, run, exp, sweep_sep, sweep_inf})
        cmd->add_option("--config", config_path, "key=value config file (flags override it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return dispatch(app.get_subcommands().front()->get_name(), opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
