#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/ml/common.hpp"
#include "rosterflow/util/random.hpp"

namespace rosterflow::ml {

/// Gini impurity 1 - sum p_k^2 of weighted class counts.
inline double gini(std::span<const double> counts, double total) {
    if (total <= 0.0) {
        return 0.0;
    }
    double sq = 0.0;
    for (double c : counts) {
        sq += c * c;
    }
    return 1.0 - sq / (total * total);
}

/// Impurity decrease of sending rows with x[feature] <= threshold left.
inline double gini_split(const TrainingView& data, std::span<const std::size_t> rows, std::size_t feature,
                         double threshold) {
    std::vector<double> parent(data.classes, 0.0), left(data.classes, 0.0), right(data.classes, 0.0);
    double wl = 0.0, wr = 0.0;
    for (std::size_t r : rows) {
        auto k = static_cast<std::size_t>(data.y[r]);
        parent[k] += 1.0;
        if (data.X.at(r, feature) <= threshold) {
            left[k] += 1.0;
            wl += 1.0;
        } else {
            right[k] += 1.0;
            wr += 1.0;
        }
    }
    double w = wl + wr;
    if (w == 0.0) {
        return 0.0;
    }
    return gini(parent, w) - (wl / w) * gini(left, wl) - (wr / w) * gini(right, wr);
}

struct SplitCandidate {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double decrease = -std::numeric_limits<double>::infinity();
};

namespace detail {

/// Midpoint that still separates a < b after rounding.
inline double midpoint(double a, double b) {
    double mid = a + (b - a) / 2.0;
    return (mid >= b || mid < a) ? a : mid;
}

struct SortedEntry {
    double value;
    std::size_t label;
    double weight;
};

} // namespace detail

/// Best CART threshold for one feature over the weighted rows. Thresholds
/// sit at midpoints between consecutive distinct values.
inline SplitCandidate best_threshold(const TrainingView& data, std::span<const std::size_t> rows,
                                     std::span<const double> weights, std::size_t feature,
                                     std::vector<detail::SortedEntry>& scratch) {
    const std::size_t K = data.classes;
    scratch.clear();
    std::vector<double> total(K, 0.0);
    double w_total = 0.0;
    for (std::size_t r : rows) {
        double w = weights.empty() ? 1.0 : weights[r];
        auto k = static_cast<std::size_t>(data.y[r]);
        scratch.push_back({data.X.at(r, feature), k, w});
        total[k] += w;
        w_total += w;
    }
    SplitCandidate best;
    best.feature = feature;
    if (scratch.size() < 2) {
        return best;
    }
    std::sort(scratch.begin(), scratch.end(),
              [](const detail::SortedEntry& a, const detail::SortedEntry& b) { return a.value < b.value; });
    if (scratch.front().value == scratch.back().value) {
        return best;
    }
    const double parent = gini(total, w_total);
    std::vector<double> left(K, 0.0);
    double sq_total = 0.0;
    for (double c : total) {
        sq_total += c * c;
    }
    double sq_left = 0.0, sq_right = sq_total, wl = 0.0;
    for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        const auto& e = scratch[i];
        double cl = left[e.label];
        double cr = total[e.label] - cl;
        sq_left += (cl + e.weight) * (cl + e.weight) - cl * cl;
        sq_right += (cr - e.weight) * (cr - e.weight) - cr * cr;
        left[e.label] = cl + e.weight;
        wl += e.weight;
        if (scratch[i + 1].value == e.value) {
            continue;
        }
        double wr = w_total - wl;
        if (wl <= 0.0 || wr <= 0.0) {
            continue;
        }
        double gl = 1.0 - sq_left / (wl * wl);
        double gr = 1.0 - sq_right / (wr * wr);
        double dec = parent - (wl / w_total) * gl - (wr / w_total) * gr;
        if (!best.valid || dec > best.decrease) {
            best.valid = true;
            best.threshold = detail::midpoint(e.value, scratch[i + 1].value);
            best.decrease = dec;
        }
    }
    return best;
}

/// Exhaustive best split over `features` (in the given order; earlier wins ties).
inline SplitCandidate best_gini_split(const TrainingView& data, std::span<const std::size_t> rows,
                                      std::span<const double> weights, std::span<const std::size_t> features) {
    std::vector<detail::SortedEntry> scratch;
    SplitCandidate best;
    for (std::size_t f : features) {
        auto cand = best_threshold(data, rows, weights, f, scratch);
        if (cand.valid && (!best.valid || cand.decrease > best.decrease)) {
            best = cand;
        }
    }
    return best;
}

struct TreeOptions {
    std::size_t max_depth = 0;         // 0 = grow until pure
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0;      // 0 = all features
    bool random_thresholds = false;    // one uniform threshold per candidate feature
};

/// CART classification tree with Gini splits.
class ClassificationTree {
public:
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t leaf = 0; // offset into distributions
    };

    void fit(const TrainingView& data, std::span<const double> weights, const TreeOptions& opt, Rng& rng) {
        classes_ = data.classes;
        nodes_.clear();
        dists_.clear();
        std::vector<std::size_t> rows;
        rows.reserve(data.X.rows);
        for (std::size_t r = 0; r < data.X.rows; ++r) {
            if (weights.empty() || weights[r] > 0.0) {
                rows.push_back(r);
            }
        }
        struct Task {
            std::uint32_t node;
            std::size_t begin;
            std::size_t end;
            std::size_t depth;
        };
        std::vector<Task> stack;
        nodes_.emplace_back();
        stack.push_back({0, 0, rows.size(), 0});
        std::vector<detail::SortedEntry> scratch;
        std::vector<std::size_t> features(data.X.cols);
        std::vector<double> counts(classes_);
        while (!stack.empty()) {
            Task t = stack.back();
            stack.pop_back();
            std::span<const std::size_t> node_rows(rows.data() + t.begin, t.end - t.begin);
            std::fill(counts.begin(), counts.end(), 0.0);
            double total = 0.0;
            for (std::size_t r : node_rows) {
                double w = weights.empty() ? 1.0 : weights[r];
                counts[static_cast<std::size_t>(data.y[r])] += w;
                total += w;
            }
            bool can_split = node_rows.size() >= std::max<std::size_t>(opt.min_samples_split, 2) &&
                             (opt.max_depth == 0 || t.depth < opt.max_depth) && gini(counts, total) > 0.0;
            SplitCandidate split;
            if (can_split) {
                split = choose_split(data, node_rows, weights, opt, rng, features, scratch);
            }
            if (!split.valid) {
                make_leaf(t.node, counts, total);
                continue;
            }
            auto mid = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(t.begin),
                                             rows.begin() + static_cast<std::ptrdiff_t>(t.end),
                                             [&](std::size_t r) { return data.X.at(r, split.feature) <= split.threshold; });
            std::size_t cut = static_cast<std::size_t>(mid - rows.begin());
            if (cut == t.begin || cut == t.end) {
                make_leaf(t.node, counts, total);
                continue;
            }
            auto left = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
            auto right = static_cast<std::uint32_t>(nodes_.size());
            nodes_.emplace_back();
            nodes_[t.node].feature = static_cast<int>(split.feature);
            nodes_[t.node].threshold = split.threshold;
            nodes_[t.node].left = left;
            nodes_[t.node].right = right;
            // Right pushed first so the left subtree is built first.
            stack.push_back({right, cut, t.end, t.depth + 1});
            stack.push_back({left, t.begin, cut, t.depth + 1});
        }
    }

    /// Leaf class distribution reached by `x`.
    std::span<const double> predict_dist(std::span<const double> x) const {
        std::uint32_t n = 0;
        while (nodes_[n].feature >= 0) {
            const auto& node = nodes_[n];
            n = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
        }
        return {dists_.data() + nodes_[n].leaf, classes_};
    }

    /// Most frequent class in the leaf (lowest index on ties).
    std::size_t predict_class(std::span<const double> x) const {
        auto d = predict_dist(x);
        return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
    }

    std::size_t classes() const { return classes_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t depth() const {
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
        std::size_t best = 0;
        while (!stack.empty()) {
            auto [n, d] = stack.back();
            stack.pop_back();
            best = std::max(best, d);
            if (nodes_[n].feature >= 0) {
                stack.emplace_back(nodes_[n].left, d + 1);
                stack.emplace_back(nodes_[n].right, d + 1);
            }
        }
        return best;
    }

    friend void to_json(nlohmann::json& j, const ClassificationTree& t) {
        std::vector<int> feature;
        std::vector<double> threshold;
        std::vector<std::uint32_t> left, right, leaf;
        for (const auto& n : t.nodes_) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            leaf.push_back(n.leaf);
        }
        j = {{"classes", t.classes_}, {"feature", feature}, {"threshold", threshold}, {"left", left},
             {"right", right},        {"leaf", leaf},       {"dists", t.dists_}};
    }

    friend void from_json(const nlohmann::json& j, ClassificationTree& t) {
        j.at("classes").get_to(t.classes_);
        auto feature = j.at("feature").get<std::vector<int>>();
        auto threshold = j.at("threshold").get<std::vector<double>>();
        auto left = j.at("left").get<std::vector<std::uint32_t>>();
        auto right = j.at("right").get<std::vector<std::uint32_t>>();
        auto leaf = j.at("leaf").get<std::vector<std::uint32_t>>();
        j.at("dists").get_to(t.dists_);
        t.nodes_.resize(feature.size());
        for (std::size_t i = 0; i < feature.size(); ++i) {
            t.nodes_[i] = Node{feature[i], threshold[i], left[i], right[i], leaf[i]};
        }
    }

private:
    void make_leaf(std::uint32_t node, const std::vector<double>& counts, double total) {
        nodes_[node].feature = -1;
        nodes_[node].leaf = static_cast<std::uint32_t>(dists_.size());
        for (double c : counts) {
            dists_.push_back(total > 0.0 ? c / total : 1.0 / static_cast<double>(classes_));
        }
    }

    SplitCandidate choose_split(const TrainingView& data, std::span<const std::size_t> node_rows,
                                std::span<const double> weights, const TreeOptions& opt, Rng& rng,
                                std::vector<std::size_t>& features, std::vector<detail::SortedEntry>& scratch) {
        const std::size_t d = data.X.cols;
        std::iota(features.begin(), features.end(), std::size_t{0});
        bool subset = opt.max_features != 0 && opt.max_features < d;
        if (subset || opt.random_thresholds) {
            rng.shuffle(features);
        }
        std::size_t budget = subset ? opt.max_features : d;
        SplitCandidate best;
        std::size_t visited = 0;
        for (std::size_t f : features) {
            if (visited >= budget) {
                break;
            }
            SplitCandidate cand = opt.random_thresholds ? random_threshold(data, node_rows, weights, f, rng)
                                                        : best_threshold(data, node_rows, weights, f, scratch);
            if (!cand.valid) {
                continue; // constant within the node; does not use up the budget
            }
            ++visited;
            if (!best.valid || cand.decrease > best.decrease) {
                best = cand;
            }
        }
        return best;
    }

    SplitCandidate random_threshold(const TrainingView& data, std::span<const std::size_t> node_rows,
                                    std::span<const double> weights, std::size_t f, Rng& rng) const {
        SplitCandidate cand;
        cand.feature = f;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r : node_rows) {
            double v = data.X.at(r, f);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) {
            return cand;
        }
        double thr = rng.uniform(lo, hi);
        if (thr >= hi) {
            thr = lo;
        }
        std::vector<double> total(classes_, 0.0), left(classes_, 0.0), right(classes_, 0.0);
        double wl = 0.0, wr = 0.0;
        for (std::size_t r : node_rows) {
            double w = weights.empty() ? 1.0 : weights[r];
            auto k = static_cast<std::size_t>(data.y[r]);
            total[k] += w;
            if (data.X.at(r, f) <= thr) {
                left[k] += w;
                wl += w;
            } else {
                right[k] += w;
                wr += w;
            }
        }
        double w = wl + wr;
        cand.valid = wl > 0.0 && wr > 0.0;
        cand.threshold = thr;
        cand.decrease = gini(total, w) - (wl / w) * gini(left, wl) - (wr / w) * gini(right, wr);
        return cand;
    }

    std::size_t classes_ = 0;
    std::vector<Node> nodes_;
    std::vector<double> dists_;
};

} // namespace rosterflow::ml
