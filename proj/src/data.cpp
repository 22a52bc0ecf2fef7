#include "ssae/data.hpp"

#include "ssae/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ssae {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& field, size_t row, size_t col) {
    try {
        size_t consumed = 0;
        const double value = std::stod(field, &consumed);
        if (consumed != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw DataError("csv: non-numeric cell '" + field + "' at row " + std::to_string(row) +
                        ", column " + std::to_string(col));
    }
}

// Labels that are literally the contiguous integers 0..k-1 keep their
// numeric ids, so a written dataset reloads with identical class ids.
// Anything else gets ids in first-appearance order.
Labels map_class_names(const std::vector<std::string>& raw, std::vector<std::string>& class_names) {
    std::set<std::string> unique(raw.begin(), raw.end());
    bool numeric_contiguous = true;
    for (size_t c = 0; c < unique.size() && numeric_contiguous; ++c)
        if (unique.find(std::to_string(c)) == unique.end()) numeric_contiguous = false;

    Labels y(raw.size());
    class_names.clear();
    if (numeric_contiguous) {
        for (size_t c = 0; c < unique.size(); ++c) class_names.push_back(std::to_string(c));
        for (size_t i = 0; i < raw.size(); ++i) y[i] = std::stoi(raw[i]);
        return y;
    }
    std::map<std::string, int> ids;
    for (size_t i = 0; i < raw.size(); ++i) {
        auto it = ids.find(raw[i]);
        if (it == ids.end()) {
            it = ids.emplace(raw[i], static_cast<int>(class_names.size())).first;
            class_names.push_back(raw[i]);
        }
        y[i] = it->second;
    }
    return y;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::vector<std::string>> read_table(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");
    std::vector<std::vector<std::string>> table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, delimiter);
        for (auto& f : fields) f = trim(f);
        table.push_back(std::move(fields));
    }
    if (table.empty()) throw DataError("csv: '" + path + "' is empty");
    const size_t width = table.front().size();
    for (size_t r = 0; r < table.size(); ++r)
        if (table[r].size() != width)
            throw DataError("csv: ragged row " + std::to_string(r) + " (" +
                            std::to_string(table[r].size()) + " fields, expected " +
                            std::to_string(width) + ")");
    return table;
}

}  // namespace

Dataset generate_synthetic(const SynthConfig& cfg, Rng& rng) {
    if (cfg.n < 1 || cfg.d < 1 || cfg.k < 2) throw ConfigError("synthetic: need n >= 1, d >= 1, k >= 2");
    if (cfg.n_informative < 1 || cfg.n_informative > cfg.d)
        throw ConfigError("synthetic: n_informative must lie in 1..d");
    if (cfg.separability < 0.0) throw ConfigError("synthetic: separability must be >= 0");
    if (cfg.flip_fraction < 0.0 || cfg.flip_fraction > 1.0)
        throw ConfigError("synthetic: flip_fraction must lie in [0, 1]");
    const int m = cfg.n_informative;
    if (cfg.k > 2 && (m >= 63 ? false : (1LL << m) < cfg.k))
        throw ConfigError("synthetic: hypercube has fewer vertices than classes");

    // Balanced labels, shuffled sample order.
    Labels y(static_cast<size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) y[static_cast<size_t>(i)] = i % cfg.k;
    const std::vector<int> order = rng.permutation(cfg.n);
    Labels shuffled(y.size());
    for (int i = 0; i < cfg.n; ++i) shuffled[static_cast<size_t>(i)] = y[static_cast<size_t>(order[static_cast<size_t>(i)])];
    y = shuffled;

    // Class centroids on hypercube vertices of the informative subspace.
    // Two classes get an antipodal pair so task difficulty does not depend
    // on the luck of the vertex draw; more classes draw distinct vertices.
    Matrix centroids(cfg.k, m);
    if (cfg.k == 2) {
        for (int j = 0; j < m; ++j) {
            const double sign = rng.next_u64() & 1 ? 1.0 : -1.0;
            centroids(0, j) = cfg.separability * sign;
            centroids(1, j) = -cfg.separability * sign;
        }
    } else {
        std::set<std::vector<int>> used;
        for (int c = 0; c < cfg.k; ++c) {
            std::vector<int> code(static_cast<size_t>(m));
            do {
                for (int j = 0; j < m; ++j) code[static_cast<size_t>(j)] = rng.next_u64() & 1 ? 1 : -1;
            } while (!used.insert(code).second);
            for (int j = 0; j < m; ++j) centroids(c, j) = cfg.separability * code[static_cast<size_t>(j)];
        }
    }

    Matrix info = sample_gaussian(rng, cfg.n, m, 0.0, 1.0);
    for (int i = 0; i < cfg.n; ++i) info.row(i) += centroids.row(y[static_cast<size_t>(i)]);

    // Random rotation mixing the informative coordinates among themselves.
    const Matrix gauss = sample_gaussian(rng, m, m, 0.0, 1.0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    info = info * q;

    Dataset ds;
    ds.x.resize(cfg.n, cfg.d);
    ds.x.leftCols(m) = info;
    if (cfg.d > m) ds.x.rightCols(cfg.d - m) = sample_gaussian(rng, cfg.n, cfg.d - m, 0.0, 1.0);

    const int n_flip = static_cast<int>(std::llround(cfg.flip_fraction * cfg.n));
    if (n_flip > 0) {
        const std::vector<int> flip_order = rng.permutation(cfg.n);
        for (int t = 0; t < n_flip; ++t) {
            const size_t i = static_cast<size_t>(flip_order[static_cast<size_t>(t)]);
            const int shift = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(cfg.k - 1)));
            y[i] = (y[i] + shift) % cfg.k;
        }
    }

    ds.y = std::move(y);
    ds.k = cfg.k;
    ds.feature_names.reserve(static_cast<size_t>(cfg.d));
    for (int j = 0; j < cfg.d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    for (int c = 0; c < cfg.k; ++c) ds.class_names.push_back(std::to_string(c));
    return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    const auto table = read_table(path, options.delimiter);
    Dataset ds;
    std::vector<std::string> raw_labels;

    if (!options.transpose) {
        const auto& header = table.front();
        int label_col = -1;
        for (size_t j = 0; j < header.size(); ++j)
            if (header[j] == options.label_column) label_col = static_cast<int>(j);
        if (label_col < 0)
            throw DataError("csv: label column '" + options.label_column + "' not found in header");

        const size_t n = table.size() - 1;
        const size_t d = header.size() - 1;
        if (n == 0 || d == 0) throw DataError("csv: no samples or no features");
        ds.x.resize(static_cast<Index>(n), static_cast<Index>(d));
        for (size_t j = 0; j < header.size(); ++j)
            if (static_cast<int>(j) != label_col) ds.feature_names.push_back(header[j]);
        for (size_t r = 1; r < table.size(); ++r) {
            Index col = 0;
            for (size_t j = 0; j < header.size(); ++j) {
                if (static_cast<int>(j) == label_col) {
                    raw_labels.push_back(table[r][j]);
                } else {
                    ds.x(static_cast<Index>(r - 1), col++) = parse_number(table[r][j], r, j);
                }
            }
        }
    } else {
        // Features as rows: first cell is the feature name, remaining cells
        // are per-sample values; the row named after the label column holds
        // the labels. No header row.
        int label_row = -1;
        for (size_t r = 0; r < table.size(); ++r)
            if (table[r].front() == options.label_column) label_row = static_cast<int>(r);
        if (label_row < 0)
            throw DataError("csv: label row '" + options.label_column + "' not found in first column");

        const size_t n = table.front().size() - 1;
        const size_t d = table.size() - 1;
        if (n == 0 || d == 0) throw DataError("csv: no samples or no features");
        ds.x.resize(static_cast<Index>(n), static_cast<Index>(d));
        Index feature = 0;
        for (size_t r = 0; r < table.size(); ++r) {
            if (static_cast<int>(r) == label_row) {
                raw_labels.assign(table[r].begin() + 1, table[r].end());
                continue;
            }
            ds.feature_names.push_back(table[r].front());
            for (size_t j = 1; j < table[r].size(); ++j)
                ds.x(static_cast<Index>(j - 1), feature) = parse_number(table[r][j], r, j);
            ++feature;
        }
    }

    ds.y = map_class_names(raw_labels, ds.class_names);
    ds.k = static_cast<int>(ds.class_names.size());
    if (ds.k < 1) throw DataError("csv: no labels found");
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path, bool transpose, char delimiter) {
    std::ofstream out(path);
    if (!out) throw DataError("csv: cannot write '" + path + "'");
    const char sep = delimiter;

    if (!transpose) {
        for (Index j = 0; j < ds.d(); ++j) out << ds.feature_names[static_cast<size_t>(j)] << sep;
        out << "label\n";
        for (Index i = 0; i < ds.n(); ++i) {
            for (Index j = 0; j < ds.d(); ++j) out << format_value(ds.x(i, j)) << sep;
            out << ds.class_names[static_cast<size_t>(ds.y[static_cast<size_t>(i)])] << "\n";
        }
    } else {
        for (Index j = 0; j < ds.d(); ++j) {
            out << ds.feature_names[static_cast<size_t>(j)];
            for (Index i = 0; i < ds.n(); ++i) out << sep << format_value(ds.x(i, j));
            out << "\n";
        }
        out << "label";
        for (Index i = 0; i < ds.n(); ++i)
            out << sep << ds.class_names[static_cast<size_t>(ds.y[static_cast<size_t>(i)])];
        out << "\n";
    }
}

Dataset preprocess(const Dataset& ds, bool log_transform) {
    Dataset out = ds;
    if (log_transform) {
        for (Index j = 0; j < out.d(); ++j) {
            const double lo = out.x.col(j).minCoeff();
            if (lo < 0.0)
                throw DataError("preprocess: feature '" + out.feature_names[static_cast<size_t>(j)] +
                                "' has negative values; log transform needs x >= 0");
        }
        out.x = out.x.array().log1p().matrix();
    }

    const double n = static_cast<double>(out.n());
    for (Index j = 0; j < out.d(); ++j) {
        // Exactly-constant features standardize to all zeros.
        if (out.x.col(j).minCoeff() == out.x.col(j).maxCoeff()) {
            out.x.col(j).setZero();
            continue;
        }
        const double mean = out.x.col(j).sum() / n;
        out.x.col(j).array() -= mean;
        const double var = out.x.col(j).squaredNorm() / n;
        if (var > 0.0) out.x.col(j) /= std::sqrt(var);
    }
    return out;
}

SemiSplit mask_labels(const Dataset& ds, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw ConfigError("mask_labels: fraction must lie strictly in (0, 1)");
    const int n = static_cast<int>(ds.n());
    const int n_unlabeled = static_cast<int>(std::llround(fraction * n));
    if (n_unlabeled < 1 || n_unlabeled >= n)
        throw ConfigError("mask_labels: split leaves no labeled or no unlabeled samples");

    for (int attempt = 0; attempt < 100; ++attempt) {
        const std::vector<int> perm = rng.permutation(n);
        SemiSplit split;
        split.fraction_unlabeled = fraction;
        split.unlabeled_idx.assign(perm.begin(), perm.begin() + n_unlabeled);
        split.labeled_idx.assign(perm.begin() + n_unlabeled, perm.end());

        std::vector<bool> seen(static_cast<size_t>(ds.k), false);
        for (int i : split.labeled_idx) seen[static_cast<size_t>(ds.y[static_cast<size_t>(i)])] = true;
        if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
            std::sort(split.labeled_idx.begin(), split.labeled_idx.end());
            std::sort(split.unlabeled_idx.begin(), split.unlabeled_idx.end());
            return split;
        }
    }
    throw ConfigError("mask_labels: could not keep every class labeled after 100 attempts");
}

}  // namespace ssae
