#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/ml/common.hpp"
#include "rosterflow/ml/tree.hpp"
#include "rosterflow/util/parallel.hpp"
#include "rosterflow/util/random.hpp"

namespace rosterflow::ml {

struct ForestOptions {
    std::size_t trees = 500;
    std::size_t max_depth = 0;
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0; // 0 = ceil(sqrt(d))
    bool bootstrap = true;
    bool random_thresholds = false;

    static ForestOptions random_forest() { return {}; }

    static ForestOptions extra_trees() {
        ForestOptions o;
        o.bootstrap = false;
        o.random_thresholds = true;
        return o;
    }

    std::size_t features_per_node(std::size_t d) const {
        if (max_features != 0) {
            return std::min(max_features, d);
        }
        return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    }
};

/// Bagged or extremely randomized trees; probabilities are the mean of
/// the trees' leaf distributions.
class Forest {
public:
    void fit(const TrainingView& data, const ForestOptions& opt, std::uint64_t seed, std::size_t jobs = 1) {
        classes_ = data.classes;
        trees_.assign(opt.trees, {});
        TreeOptions tree_opt;
        tree_opt.max_depth = opt.max_depth;
        tree_opt.min_samples_split = opt.min_samples_split;
        tree_opt.max_features = opt.features_per_node(data.X.cols);
        tree_opt.random_thresholds = opt.random_thresholds;
        parallel_for(opt.trees, jobs, [&](std::size_t t) {
            Rng rng(derive_seed(seed, t));
            std::vector<double> weights;
            if (opt.bootstrap) {
                weights.assign(data.X.rows, 0.0);
                for (std::size_t i = 0; i < data.X.rows; ++i) {
                    weights[static_cast<std::size_t>(rng.below(data.X.rows))] += 1.0;
                }
            }
            trees_[t].fit(data, weights, tree_opt, rng);
        });
    }

    std::vector<double> predict_dist(std::span<const double> x) const {
        std::vector<double> out(classes_, 0.0);
        for (const auto& tree : trees_) {
            auto d = tree.predict_dist(x);
            for (std::size_t k = 0; k < classes_; ++k) {
                out[k] += d[k];
            }
        }
        for (double& v : out) {
            v /= static_cast<double>(trees_.size());
        }
        return out;
    }

    const std::vector<ClassificationTree>& trees() const { return trees_; }

    friend void to_json(nlohmann::json& j, const Forest& f) { j = {{"classes", f.classes_}, {"trees", f.trees_}}; }
    friend void from_json(const nlohmann::json& j, Forest& f) {
        j.at("classes").get_to(f.classes_);
        j.at("trees").get_to(f.trees_);
    }

private:
    std::size_t classes_ = 0;
    std::vector<ClassificationTree> trees_;
};

} // namespace rosterflow::ml
