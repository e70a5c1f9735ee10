#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/ml/common.hpp"

namespace rosterflow::ml {

struct KnnOptions {
    std::size_t k = 5;
    bool standardize = true;
};

/// Stores (optionally z-scored) training rows; a class's probability is the
/// share of the k nearest neighbors carrying it. Distance ties go to the
/// lower training index.
class Knn {
public:
    void fit(const TrainingView& data, const KnnOptions& opt) {
        classes_ = data.classes;
        k_ = std::min(opt.k, data.X.rows);
        cols_ = data.X.cols;
        if (opt.standardize) {
            scaler_ = Standardizer::fit(data.X);
        } else {
            scaler_.mean.assign(cols_, 0.0);
            scaler_.scale.assign(cols_, 1.0);
        }
        rows_ = scaler_.transform(data.X);
        labels_.assign(data.y.begin(), data.y.end());
    }

    std::vector<double> predict_dist(std::span<const double> x) const {
        std::vector<double> xs(cols_);
        scaler_.apply(x, xs);
        const std::size_t n = labels_.size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* r = rows_.data() + i * cols_;
            for (std::size_t c = 0; c < cols_; ++c) {
                double d = r[c] - xs[c];
                s += d * d;
            }
            dist[i] = {s, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
        std::vector<double> out(classes_, 0.0);
        for (std::size_t j = 0; j < k_; ++j) {
            out[static_cast<std::size_t>(labels_[dist[j].second])] += 1.0 / static_cast<double>(k_);
        }
        return out;
    }

    friend void to_json(nlohmann::json& j, const Knn& m) {
        j = {{"classes", m.classes_}, {"k", m.k_},       {"cols", m.cols_},
             {"scaler", m.scaler_},   {"rows", m.rows_}, {"labels", m.labels_}};
    }
    friend void from_json(const nlohmann::json& j, Knn& m) {
        j.at("classes").get_to(m.classes_);
        j.at("k").get_to(m.k_);
        j.at("cols").get_to(m.cols_);
        j.at("scaler").get_to(m.scaler_);
        j.at("rows").get_to(m.rows_);
        j.at("labels").get_to(m.labels_);
    }

private:
    std::size_t classes_ = 0;
    std::size_t k_ = 0;
    std::size_t cols_ = 0;
    Standardizer scaler_;
    std::vector<double> rows_;
    std::vector<int> labels_;
};

} // namespace rosterflow::ml
