#include "gadepth/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gadepth/rng.hpp"

namespace gadepth {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \r\n");
    return s.substr(b, e - b + 1);
}

// shortest decimal text that parses back to the same double
std::string format_value(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

}  // namespace

std::size_t Dataset::class_count(int cls) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), cls));
}

Dataset make_dataset(Matrix features, std::vector<int> labels,
                     std::vector<std::string> feature_names,
                     std::array<std::string, 2> class_names) {
    if (features.rows < 2) throw ValidationError("dataset needs at least 2 rows");
    if (features.cols < 1) throw ValidationError("dataset needs at least 1 feature");
    if (labels.size() != features.rows) throw ValidationError("label count does not match row count");
    if (feature_names.size() != features.cols)
        throw ValidationError("feature name count does not match feature count");
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 0) has0 = true;
        else if (labels[i] == 1) has1 = true;
        else throw ValidationError("label outside {0,1} at row " + std::to_string(i + 1));
    }
    if (!has0 || !has1) throw ValidationError("both classes must be present");
    for (std::size_t r = 0; r < features.rows; ++r) {
        for (std::size_t c = 0; c < features.cols; ++c) {
            if (!std::isfinite(features(r, c))) {
                throw ValidationError("non-finite value at row " + std::to_string(r + 1) +
                                      ", column \"" + feature_names[c] + "\"");
            }
        }
    }
    std::set<std::string> seen;
    for (const auto& name : feature_names) {
        if (!seen.insert(name).second)
            throw ValidationError("duplicate feature name \"" + name + "\"");
    }
    Dataset d;
    d.features = std::move(features);
    d.labels = std::move(labels);
    d.feature_names = std::move(feature_names);
    d.class_names = std::move(class_names);
    return d;
}

Dataset load_dataset(const std::string& path, const std::string& label_column,
                     char delimiter, const std::string& positive_label) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty file: " + path);
    const auto header = split_line(trim(line), delimiter);

    std::size_t label_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == label_column) {
            if (label_col != header.size())
                throw ValidationError("ambiguous label column \"" + label_column + "\"");
            label_col = i;
        }
    }
    if (label_col == header.size())
        throw ValidationError("label column \"" + label_column + "\" not found in header");

    std::vector<std::string> names;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_col) names.push_back(trim(header[i]));

    std::vector<double> cells;
    std::vector<std::string> raw_labels;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        ++row;
        const auto fields = split_line(t, delimiter);
        if (fields.size() != header.size())
            throw ValidationError("row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        std::size_t feat = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_col) {
                raw_labels.push_back(trim(fields[i]));
                continue;
            }
            const std::string cell = trim(fields[i]);
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            const bool parsed = res.ec == std::errc() && res.ptr == cell.data() + cell.size();
            if (!parsed || !std::isfinite(v)) {
                throw ValidationError("non-numeric or non-finite value \"" + cell +
                                      "\" at row " + std::to_string(row) + ", column \"" +
                                      names[feat] + "\"");
            }
            cells.push_back(v);
            ++feat;
        }
    }
    if (row == 0) throw ValidationError("no data rows in " + path);

    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    if (distinct.size() != 2)
        throw ValidationError("label column \"" + label_column + "\" has " +
                              std::to_string(distinct.size()) + " distinct values, expected 2");

    // lexicographically larger value is the positive class unless overridden
    std::string neg = *distinct.begin(), pos = *std::next(distinct.begin());
    if (!positive_label.empty()) {
        if (!distinct.count(positive_label))
            throw ValidationError("positive label \"" + positive_label + "\" not present in data");
        pos = positive_label;
        neg = (pos == *distinct.begin()) ? *std::next(distinct.begin()) : *distinct.begin();
    }

    std::vector<int> labels;
    labels.reserve(raw_labels.size());
    for (const auto& s : raw_labels) labels.push_back(s == pos ? 1 : 0);

    Matrix features(row, names.size());
    features.values = std::move(cells);
    return make_dataset(std::move(features), std::move(labels), std::move(names), {neg, pos});
}

void save_dataset(const Dataset& data, const std::string& path,
                  const std::string& label_column, char delimiter) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    for (std::size_t c = 0; c < data.n_features(); ++c) {
        out << data.feature_names[c] << delimiter;
    }
    out << label_column << '\n';
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
        for (std::size_t c = 0; c < data.n_features(); ++c) {
            out << format_value(data.features(r, c)) << delimiter;
        }
        out << data.class_names[static_cast<std::size_t>(data.labels[r])] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Partition split_partition(const Dataset& data, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x5054u));  // tag keeps the stream distinct from fold plans
    Partition p;
    std::array<std::vector<std::size_t>*, 3> parts = {&p.train_idx, &p.test_idx,
                                                      &p.validation_idx};
    constexpr double ratio[3] = {0.6, 0.2, 0.2};

    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.n_rows(); ++i)
            if (data.labels[i] == cls) members.push_back(i);
        if (members.size() < 5)
            throw ValidationError("class " + data.class_names[static_cast<std::size_t>(cls)] +
                                  " has " + std::to_string(members.size()) +
                                  " rows; need at least 5 for a stratified 60/20/20 split");
        rng.shuffle(members);

        const double nc = static_cast<double>(members.size());
        std::size_t count[3];
        double frac[3];
        std::size_t assigned = 0;
        for (int j = 0; j < 3; ++j) {
            const double target = ratio[j] * nc;
            count[j] = static_cast<std::size_t>(target);
            frac[j] = target - static_cast<double>(count[j]);
            assigned += count[j];
        }
        // remainder goes to the largest fractional targets; seeded shuffle breaks ties
        std::vector<int> order = {0, 1, 2};
        rng.shuffle(order);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return frac[a] > frac[b]; });
        for (std::size_t r = 0; r < members.size() - assigned; ++r) ++count[order[r]];

        std::size_t at = 0;
        for (int j = 0; j < 3; ++j) {
            parts[j]->insert(parts[j]->end(), members.begin() + at,
                             members.begin() + at + count[j]);
            at += count[j];
        }
    }
    for (auto* part : parts) std::sort(part->begin(), part->end());
    return p;
}

FoldPlan stratified_kfold(std::vector<std::size_t> indices, const std::vector<int>& labels,
                          int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("fold count must be at least 2");
    std::sort(indices.begin(), indices.end());
    FoldPlan plan;
    plan.k = k;
    plan.indices = indices;
    plan.fold_of.assign(indices.size(), -1);

    Rng rng(derive_seed(seed, 0x464Fu));
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::size_t> members;  // positions within plan.indices
        for (std::size_t i = 0; i < indices.size(); ++i)
            if (labels[indices[i]] == cls) members.push_back(i);
        if (members.size() < static_cast<std::size_t>(k))
            throw ValidationError("class " + std::to_string(cls) + " has " +
                                  std::to_string(members.size()) + " rows; need at least k=" +
                                  std::to_string(k) + " for stratified folds");
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i)
            plan.fold_of[members[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return plan;
}

std::vector<std::size_t> FoldPlan::fold_members(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (fold_of[i] == fold) out.push_back(indices[i]);
    return out;
}

std::vector<std::size_t> FoldPlan::fold_complement(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (fold_of[i] != fold) out.push_back(indices[i]);
    return out;
}

std::string partition_to_json(const Partition& p) {
    nlohmann::json j;
    j["train"] = p.train_idx;
    j["test"] = p.test_idx;
    j["validation"] = p.validation_idx;
    return j.dump();
}

std::string fold_plan_to_json(const FoldPlan& f) {
    nlohmann::json j;
    j["k"] = f.k;
    j["indices"] = f.indices;
    j["fold_of"] = f.fold_of;
    return j.dump();
}

}  // namespace gadepth
