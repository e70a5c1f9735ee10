#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/features.hpp"
#include "rosterflow/ml/adaboost.hpp"
#include "rosterflow/ml/common.hpp"
#include "rosterflow/ml/forest.hpp"
#include "rosterflow/ml/gboost.hpp"
#include "rosterflow/ml/knn.hpp"
#include "rosterflow/ml/softmax.hpp"
#include "rosterflow/ml/tree.hpp"
#include "rosterflow/util/config.hpp"

namespace rosterflow::ml {

enum class Algorithm { DecisionTree, RandomForest, ExtraTrees, AdaBoost, GradientBoost, SoftmaxRegression, KNN };

inline constexpr std::array<Algorithm, 7> kAllAlgorithms = {
    Algorithm::DecisionTree,  Algorithm::RandomForest,      Algorithm::ExtraTrees, Algorithm::AdaBoost,
    Algorithm::GradientBoost, Algorithm::SoftmaxRegression, Algorithm::KNN};

// The six families in the default accuracy matrix.
inline constexpr std::array<Algorithm, 6> kTableAlgorithms = {
    Algorithm::RandomForest,  Algorithm::ExtraTrees,        Algorithm::AdaBoost,
    Algorithm::GradientBoost, Algorithm::SoftmaxRegression, Algorithm::KNN};

constexpr std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::DecisionTree: return "DecisionTree";
    case Algorithm::RandomForest: return "RandomForest";
    case Algorithm::ExtraTrees: return "ExtraTrees";
    case Algorithm::AdaBoost: return "AdaBoost";
    case Algorithm::GradientBoost: return "GradientBoost";
    case Algorithm::SoftmaxRegression: return "SoftmaxRegression";
    case Algorithm::KNN: return "KNN";
    }
    return "?";
}

/// Short name used on the command line.
constexpr std::string_view cli_name(Algorithm a) {
    switch (a) {
    case Algorithm::DecisionTree: return "tree";
    case Algorithm::RandomForest: return "forest";
    case Algorithm::ExtraTrees: return "extra-trees";
    case Algorithm::AdaBoost: return "adaboost";
    case Algorithm::GradientBoost: return "xgb-like";
    case Algorithm::SoftmaxRegression: return "logreg";
    case Algorithm::KNN: return "knn";
    }
    return "?";
}

/// Accepts either the short or the long name, case-insensitively.
inline Algorithm parse_algorithm(std::string_view text) {
    std::string lower;
    for (char c : text) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (Algorithm a : kAllAlgorithms) {
        std::string longname;
        for (char c : to_string(a)) {
            longname.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        if (lower == cli_name(a) || lower == longname) {
            return a;
        }
    }
    throw Error(ErrorKind::BadConfig, "unknown algorithm '" + std::string(text) + "'");
}

inline std::vector<Algorithm> parse_algorithms(std::string_view list) {
    std::vector<Algorithm> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto comma = list.find(',', start);
        auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        if (item == "all") {
            out.insert(out.end(), kTableAlgorithms.begin(), kTableAlgorithms.end());
        } else if (!item.empty()) {
            out.push_back(parse_algorithm(item));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (out.empty()) {
        throw Error(ErrorKind::BadConfig, "empty algorithm list");
    }
    return out;
}

struct Hyperparameters {
    TreeOptions tree;
    ForestOptions forest = ForestOptions::random_forest();
    ForestOptions extra_trees = ForestOptions::extra_trees();
    AdaBoostOptions adaboost;
    GradientBoostOptions gboost;
    SoftmaxOptions softmax;
    KnnOptions knn;

    void validate() const {
        auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidHyperparameter, what); };
        if (forest.trees < 1 || extra_trees.trees < 1) {
            bad("trees must be >= 1");
        }
        if (adaboost.rounds < 1 || gboost.rounds < 1) {
            bad("rounds must be >= 1");
        }
        if (gboost.max_depth < 1) {
            bad("gboost depth must be >= 1");
        }
        if (!(adaboost.learning_rate > 0.0) || !(gboost.learning_rate > 0.0)) {
            bad("learning rate must be > 0");
        }
        if (gboost.l2 < 0.0 || softmax.l2 < 0.0) {
            bad("l2 must be >= 0");
        }
        if (knn.k < 1) {
            bad("k must be >= 1");
        }
    }

    /// Overrides from [tree], [forest], [extra_trees], [adaboost], [gboost],
    /// [softmax] and [knn] config sections.
    static Hyperparameters from_document(const config::Document& doc) {
        Hyperparameters h;
        auto size = [&](const std::string& key, std::size_t& out) {
            if (auto v = doc.get_number(key)) {
                if (*v < 0.0) {
                    throw Error(ErrorKind::InvalidHyperparameter, key + " must be non-negative");
                }
                out = static_cast<std::size_t>(*v);
            }
        };
        auto real = [&](const std::string& key, double& out) {
            if (auto v = doc.get_number(key)) {
                out = *v;
            }
        };
        auto flag = [&](const std::string& key, bool& out) {
            if (auto v = doc.get_bool(key)) {
                out = *v;
            }
        };
        size("tree.max_depth", h.tree.max_depth);
        size("tree.min_samples_split", h.tree.min_samples_split);
        for (auto [name, opt] : {std::pair<const char*, ForestOptions*>{"forest", &h.forest},
                                 std::pair<const char*, ForestOptions*>{"extra_trees", &h.extra_trees}}) {
            std::string p = name;
            size(p + ".trees", opt->trees);
            size(p + ".max_depth", opt->max_depth);
            size(p + ".min_samples_split", opt->min_samples_split);
            size(p + ".max_features", opt->max_features);
            flag(p + ".bootstrap", opt->bootstrap);
        }
        size("adaboost.rounds", h.adaboost.rounds);
        real("adaboost.learning_rate", h.adaboost.learning_rate);
        size("gboost.rounds", h.gboost.rounds);
        real("gboost.learning_rate", h.gboost.learning_rate);
        size("gboost.max_depth", h.gboost.max_depth);
        real("gboost.l2", h.gboost.l2);
        real("gboost.min_child_weight", h.gboost.min_child_weight);
        real("gboost.gamma", h.gboost.gamma);
        real("softmax.l2", h.softmax.l2);
        size("softmax.max_iterations", h.softmax.max_iterations);
        real("softmax.gradient_tolerance", h.softmax.gradient_tolerance);
        size("knn.k", h.knn.k);
        flag("knn.standardize", h.knn.standardize);
        h.validate();
        return h;
    }
};

/// Probability per team index; entries sum to one.
using ClassDistribution = std::array<double, kTeamsPerLeague>;

inline constexpr int kNoMask = -1;

/// Zeroes the masked team and renormalizes; with no remaining mass the
/// result is uniform over the unmasked teams.
inline ClassDistribution apply_mask(ClassDistribution p, int mask) {
    if (mask >= 0) {
        p[static_cast<std::size_t>(mask)] = 0.0;
    }
    double sum = 0.0;
    for (double v : p) {
        sum += v;
    }
    if (!(sum > 0.0)) {
        double share = 1.0 / static_cast<double>(kTeamsPerLeague - (mask >= 0 ? 1 : 0));
        for (std::size_t t = 0; t < p.size(); ++t) {
            p[t] = static_cast<int>(t) == mask ? 0.0 : share;
        }
        return p;
    }
    for (double& v : p) {
        v /= sum;
    }
    return p;
}

/// First index of the maximum; team indices follow code order, so ties go
/// to the alphabetically smaller code.
inline int argmax(const ClassDistribution& p) {
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

struct Model {
    static constexpr int kFormatVersion = 1;

    Algorithm algorithm = Algorithm::DecisionTree;
    std::uint64_t seed = 0;
    std::uint64_t fingerprint = 0;
    std::size_t width = 0;
    std::vector<int> classes; // compact class -> team index
    std::variant<ClassificationTree, Forest, AdaBoost, GradientBoost, SoftmaxRegression, Knn> impl;

    ClassDistribution raw_distribution(std::span<const double> row) const {
        std::vector<double> compact = std::visit(
            [&](const auto& m) {
                auto d = m.predict_dist(row);
                return std::vector<double>(d.begin(), d.end());
            },
            impl);
        ClassDistribution out{};
        for (std::size_t k = 0; k < classes.size(); ++k) {
            out[static_cast<std::size_t>(classes[k])] = compact[k];
        }
        return out;
    }
};

/// Trains on rows of `X` whose labels are team indices.
inline Model fit(Algorithm alg, const MatrixView& X, std::span<const int> teams, std::uint64_t fingerprint,
                 std::uint64_t seed, const Hyperparameters& hp = {}, std::size_t jobs = 1) {
    hp.validate();
    if (X.rows == 0) {
        throw Error(ErrorKind::DegenerateLabels, "no training rows");
    }
    require_finite(X);
    Model model;
    model.algorithm = alg;
    model.seed = seed;
    model.fingerprint = fingerprint;
    model.width = X.cols;
    std::map<int, int> compact;
    for (int t : teams) {
        compact.emplace(t, 0);
    }
    if (compact.size() < 2) {
        throw Error(ErrorKind::DegenerateLabels, "need at least 2 distinct labels, got " +
                                                     std::to_string(compact.size()));
    }
    for (auto& [team, idx] : compact) {
        idx = static_cast<int>(model.classes.size());
        model.classes.push_back(team);
    }
    std::vector<int> y(teams.size());
    for (std::size_t i = 0; i < teams.size(); ++i) {
        y[i] = compact.at(teams[i]);
    }
    TrainingView data{X, y, model.classes.size()};
    switch (alg) {
    case Algorithm::DecisionTree: {
        ClassificationTree t;
        Rng rng(seed);
        t.fit(data, {}, hp.tree, rng);
        model.impl = std::move(t);
        break;
    }
    case Algorithm::RandomForest:
    case Algorithm::ExtraTrees: {
        Forest f;
        f.fit(data, alg == Algorithm::RandomForest ? hp.forest : hp.extra_trees, seed, jobs);
        model.impl = std::move(f);
        break;
    }
    case Algorithm::AdaBoost: {
        AdaBoost a;
        a.fit(data, hp.adaboost, seed);
        model.impl = std::move(a);
        break;
    }
    case Algorithm::GradientBoost: {
        GradientBoost g;
        g.fit(data, hp.gboost, jobs);
        model.impl = std::move(g);
        break;
    }
    case Algorithm::SoftmaxRegression: {
        SoftmaxRegression s;
        s.fit(data, hp.softmax);
        model.impl = std::move(s);
        break;
    }
    case Algorithm::KNN: {
        Knn k;
        k.fit(data, hp.knn);
        model.impl = std::move(k);
        break;
    }
    }
    return model;
}

inline Model fit(Algorithm alg, const features::LabeledDataset& ds, std::uint64_t seed, const Hyperparameters& hp = {},
                 std::size_t jobs = 1) {
    MatrixView X{ds.values.data(), ds.rows(), ds.width()};
    return fit(alg, X, ds.labels, ds.fingerprint(), seed, hp, jobs);
}

inline ClassDistribution predict_proba(const Model& model, std::span<const double> row, std::uint64_t fingerprint,
                                       int mask) {
    if (fingerprint != model.fingerprint || row.size() != model.width) {
        throw Error(ErrorKind::ManifestMismatch, "row manifest does not match the trained model");
    }
    return apply_mask(model.raw_distribution(row), mask);
}

inline int predict(const Model& model, std::span<const double> row, std::uint64_t fingerprint, int mask) {
    return argmax(predict_proba(model, row, fingerprint, mask));
}

inline nlohmann::json to_json(const Model& m) {
    nlohmann::json j;
    j["format"] = "rosterflow-model";
    j["version"] = Model::kFormatVersion;
    j["algorithm"] = std::string(to_string(m.algorithm));
    j["seed"] = m.seed;
    j["fingerprint"] = m.fingerprint;
    j["width"] = m.width;
    j["classes"] = m.classes;
    std::visit([&](const auto& impl) { j["params"] = impl; }, m.impl);
    return j;
}

inline Model model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "rosterflow-model" || j.value("version", 0) != Model::kFormatVersion) {
        throw Error(ErrorKind::BadConfig, "not a supported model file");
    }
    Model m;
    m.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    j.at("seed").get_to(m.seed);
    j.at("fingerprint").get_to(m.fingerprint);
    j.at("width").get_to(m.width);
    j.at("classes").get_to(m.classes);
    const auto& p = j.at("params");
    switch (m.algorithm) {
    case Algorithm::DecisionTree: m.impl = p.get<ClassificationTree>(); break;
    case Algorithm::RandomForest:
    case Algorithm::ExtraTrees: m.impl = p.get<Forest>(); break;
    case Algorithm::AdaBoost: m.impl = p.get<AdaBoost>(); break;
    case Algorithm::GradientBoost: m.impl = p.get<GradientBoost>(); break;
    case Algorithm::SoftmaxRegression: m.impl = p.get<SoftmaxRegression>(); break;
    case Algorithm::KNN: m.impl = p.get<Knn>(); break;
    }
    return m;
}

inline void save_model(const Model& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::IOFailure, "cannot write " + path);
    }
    out << to_json(m).dump() << '\n';
}

inline Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IOFailure, "cannot read " + path);
    }
    try {
        return model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadConfig, path + ": " + e.what());
    }
}

} // namespace rosterflow::ml
