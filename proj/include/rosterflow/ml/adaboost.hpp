#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/error.hpp"
#include "rosterflow/ml/common.hpp"
#include "rosterflow/ml/tree.hpp"
#include "rosterflow/util/random.hpp"

namespace rosterflow::ml {

/// SAMME stage weight: ln((1 - err) / err) + ln(K - 1).
inline double samme_alpha(double weighted_error, std::size_t classes) {
    return std::log((1.0 - weighted_error) / weighted_error) + std::log(static_cast<double>(classes) - 1.0);
}

struct AdaBoostOptions {
    std::size_t rounds = 300;
    double learning_rate = 1.0;
};

/// Discrete multiclass AdaBoost (SAMME) over depth-1 trees.
class AdaBoost {
public:
    /// Called after each round's reweighting with the normalized sample weights.
    using RoundObserver = std::function<void(std::size_t round, std::span<const double> weights)>;

    void fit(const TrainingView& data, const AdaBoostOptions& opt, std::uint64_t seed,
             const RoundObserver& observer = {}) {
        classes_ = data.classes;
        stumps_.clear();
        alphas_.clear();
        const std::size_t n = data.X.rows;
        std::vector<double> w(n, 1.0 / static_cast<double>(n));
        TreeOptions stump;
        stump.max_depth = 1;
        Rng rng(seed);
        for (std::size_t round = 0; round < opt.rounds; ++round) {
            ClassificationTree tree;
            tree.fit(data, w, stump, rng);
            std::vector<bool> miss(n);
            double err = 0.0, total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                miss[i] = tree.predict_class(data.X.row(i)) != static_cast<std::size_t>(data.y[i]);
                total += w[i];
                if (miss[i]) {
                    err += w[i];
                }
            }
            err /= total;
            if (err <= 0.0) {
                // Perfect stump: keep it and stop.
                stumps_.push_back(std::move(tree));
                alphas_.push_back(1.0);
                break;
            }
            if (err >= 1.0 - 1.0 / static_cast<double>(classes_)) {
                // No better than chance; keep one stump so prediction is defined.
                if (stumps_.empty()) {
                    stumps_.push_back(std::move(tree));
                    alphas_.push_back(1.0);
                }
                break;
            }
            double alpha = opt.learning_rate * samme_alpha(err, classes_);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (miss[i]) {
                    w[i] *= std::exp(alpha);
                }
                sum += w[i];
            }
            for (double& v : w) {
                v /= sum;
            }
            stumps_.push_back(std::move(tree));
            alphas_.push_back(alpha);
            if (observer) {
                observer(round, w);
            }
        }
    }

    /// Alpha-weighted vote shares.
    std::vector<double> predict_dist(std::span<const double> x) const {
        std::vector<double> out(classes_, 0.0);
        double total = 0.0;
        for (std::size_t t = 0; t < stumps_.size(); ++t) {
            out[stumps_[t].predict_class(x)] += alphas_[t];
            total += alphas_[t];
        }
        for (double& v : out) {
            v /= total;
        }
        return out;
    }

    const std::vector<double>& alphas() const { return alphas_; }

    friend void to_json(nlohmann::json& j, const AdaBoost& a) {
        j = {{"classes", a.classes_}, {"stumps", a.stumps_}, {"alphas", a.alphas_}};
    }
    friend void from_json(const nlohmann::json& j, AdaBoost& a) {
        j.at("classes").get_to(a.classes_);
        j.at("stumps").get_to(a.stumps_);
        j.at("alphas").get_to(a.alphas_);
    }

private:
    std::size_t classes_ = 0;
    std::vector<ClassificationTree> stumps_;
    std::vector<double> alphas_;
};

} // namespace rosterflow::ml
