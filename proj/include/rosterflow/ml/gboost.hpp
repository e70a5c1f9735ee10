#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/ml/common.hpp"
#include "rosterflow/ml/tree.hpp"
#include "rosterflow/util/parallel.hpp"

namespace rosterflow::ml {

struct GradientBoostOptions {
    std::size_t rounds = 200;
    double learning_rate = 0.1;
    std::size_t max_depth = 6;
    double l2 = 1.0;              // leaf weight penalty
    double min_child_weight = 1.0; // minimum hessian sum per child
    double gamma = 0.0;           // minimum gain to split
};

/// Regression tree fitted to first/second-order statistics.
class RegressionTree {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        double value = 0.0;
    };

    /// Level-wise exact greedy growth. `sorted` holds, per feature, all row
    /// indices ordered by value. On return `leaf_of[i]` is row i's leaf.
    void fit(const MatrixView& X, std::span<const double> grad, std::span<const double> hess,
             const std::vector<std::vector<std::uint32_t>>& sorted, const GradientBoostOptions& opt,
             std::vector<std::uint32_t>& leaf_of) {
        const std::size_t n = X.rows;
        nodes_.assign(1, Node{});
        std::vector<double> G{0.0}, H{0.0};
        leaf_of.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            G[0] += grad[i];
            H[0] += hess[i];
        }
        std::vector<std::uint32_t> frontier{0};
        struct Best {
            double gain;
            int feature;
            double threshold;
        };
        struct Scan {
            double gl;
            double hl;
            double last;
            bool has;
        };
        for (std::size_t depth = 0; depth < opt.max_depth && !frontier.empty(); ++depth) {
            std::vector<char> open(nodes_.size(), 0);
            std::vector<Best> best(nodes_.size(), Best{opt.gamma + 1e-12, -1, 0.0});
            for (auto nd : frontier) {
                open[nd] = 1;
            }
            std::vector<Scan> scan(nodes_.size());
            for (std::size_t f = 0; f < X.cols; ++f) {
                for (auto nd : frontier) {
                    scan[nd] = Scan{0.0, 0.0, 0.0, false};
                }
                for (std::uint32_t i : sorted[f]) {
                    std::uint32_t nd = leaf_of[i];
                    if (!open[nd]) {
                        continue;
                    }
                    double v = X.at(i, f);
                    Scan& st = scan[nd];
                    if (st.has && v > st.last) {
                        double gr = G[nd] - st.gl;
                        double hr = H[nd] - st.hl;
                        if (st.hl >= opt.min_child_weight && hr >= opt.min_child_weight) {
                            double gain = 0.5 * (st.gl * st.gl / (st.hl + opt.l2) + gr * gr / (hr + opt.l2) -
                                                 G[nd] * G[nd] / (H[nd] + opt.l2)) -
                                          opt.gamma;
                            if (gain > best[nd].gain) {
                                best[nd] = Best{gain, static_cast<int>(f), detail::midpoint(st.last, v)};
                            }
                        }
                    }
                    st.gl += grad[i];
                    st.hl += hess[i];
                    st.last = v;
                    st.has = true;
                }
            }
            std::vector<std::uint32_t> next;
            std::vector<char> split(nodes_.size(), 0);
            for (auto nd : frontier) {
                if (best[nd].feature < 0) {
                    continue;
                }
                auto left = static_cast<std::uint32_t>(nodes_.size());
                nodes_.push_back(Node{});
                nodes_.push_back(Node{});
                G.resize(nodes_.size(), 0.0);
                H.resize(nodes_.size(), 0.0);
                nodes_[nd].feature = best[nd].feature;
                nodes_[nd].threshold = best[nd].threshold;
                nodes_[nd].left = left;
                nodes_[nd].right = left + 1;
                split[nd] = 1;
                next.push_back(left);
                next.push_back(left + 1);
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::uint32_t nd = leaf_of[i];
                if (nd < split.size() && split[nd]) {
                    const auto& node = nodes_[nd];
                    std::uint32_t child =
                        X.at(i, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
                    leaf_of[i] = child;
                    G[child] += grad[i];
                    H[child] += hess[i];
                }
            }
            frontier = std::move(next);
        }
        for (std::size_t nd = 0; nd < nodes_.size(); ++nd) {
            if (nodes_[nd].feature < 0) {
                nodes_[nd].value = -G[nd] / (H[nd] + opt.l2);
            }
        }
    }

    double predict(std::span<const double> x) const {
        std::uint32_t n = 0;
        while (nodes_[n].feature >= 0) {
            const auto& node = nodes_[n];
            n = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
        }
        return nodes_[n].value;
    }

    void scale_leaves(double factor) {
        for (auto& node : nodes_) {
            node.value *= factor;
        }
    }

    const std::vector<Node>& nodes() const { return nodes_; }

    friend void to_json(nlohmann::json& j, const RegressionTree& t) {
        std::vector<int> feature;
        std::vector<double> threshold, value;
        std::vector<std::uint32_t> left, right;
        for (const auto& n : t.nodes_) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            value.push_back(n.value);
        }
        j = {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
    }
    friend void from_json(const nlohmann::json& j, RegressionTree& t) {
        auto feature = j.at("feature").get<std::vector<int>>();
        auto threshold = j.at("threshold").get<std::vector<double>>();
        auto left = j.at("left").get<std::vector<std::uint32_t>>();
        auto right = j.at("right").get<std::vector<std::uint32_t>>();
        auto value = j.at("value").get<std::vector<double>>();
        t.nodes_.resize(feature.size());
        for (std::size_t i = 0; i < feature.size(); ++i) {
            t.nodes_[i] = Node{feature[i], threshold[i], left[i], right[i], value[i]};
        }
    }

private:
    std::vector<Node> nodes_;
};

/// Mean softmax cross-entropy of row-major logits.
inline double softmax_cross_entropy(std::span<const double> logits, std::span<const int> y, std::size_t K) {
    const std::size_t n = y.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* z = logits.data() + i * K;
        double top = *std::max_element(z, z + K);
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            sum += std::exp(z[k] - top);
        }
        loss += std::log(sum) + top - z[static_cast<std::size_t>(y[i])];
    }
    return loss / static_cast<double>(n);
}

inline void softmax_inplace(std::span<double> z) {
    double top = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : z) {
        v /= sum;
    }
}

/// Additive trees on the softmax loss: one tree per class per round, leaf
/// weights -G/(H + l2), shrinkage, and a halving line search on each
/// round's step so training loss never increases.
class GradientBoost {
public:
    void fit(const TrainingView& data, const GradientBoostOptions& opt, std::size_t jobs = 1) {
        const std::size_t n = data.X.rows;
        const std::size_t K = data.classes;
        classes_ = K;
        rounds_.clear();
        loss_trace_.clear();

        std::vector<std::vector<std::uint32_t>> sorted(data.X.cols);
        for (std::size_t f = 0; f < data.X.cols; ++f) {
            auto& idx = sorted[f];
            idx.resize(n);
            std::iota(idx.begin(), idx.end(), 0U);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::uint32_t a, std::uint32_t b) { return data.X.at(a, f) < data.X.at(b, f); });
        }

        std::vector<double> logits(n * K, 0.0);
        double loss = softmax_cross_entropy(logits, data.y, K);
        loss_trace_.push_back(loss);
        std::vector<double> prob(n * K);
        std::vector<std::vector<double>> grad(K, std::vector<double>(n)), hess(K, std::vector<double>(n));
        std::vector<std::vector<std::uint32_t>> leaf_of(K);
        std::vector<double> candidate(n * K);

        for (std::size_t round = 0; round < opt.rounds; ++round) {
            prob = logits;
            for (std::size_t i = 0; i < n; ++i) {
                softmax_inplace(std::span<double>(prob.data() + i * K, K));
            }
            for (std::size_t k = 0; k < K; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    double p = prob[i * K + k];
                    grad[k][i] = p - (static_cast<std::size_t>(data.y[i]) == k ? 1.0 : 0.0);
                    hess[k][i] = std::max(p * (1.0 - p), 1e-16);
                }
            }
            std::vector<RegressionTree> trees(K);
            parallel_for(K, jobs, [&](std::size_t k) {
                trees[k].fit(data.X, grad[k], hess[k], sorted, opt, leaf_of[k]);
            });

            double scale = opt.learning_rate;
            double new_loss = loss;
            bool accepted = false;
            for (int attempt = 0; attempt < 40; ++attempt) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t k = 0; k < K; ++k) {
                        candidate[i * K + k] =
                            logits[i * K + k] + trees[k].nodes()[leaf_of[k][i]].value * scale;
                    }
                }
                new_loss = softmax_cross_entropy(candidate, data.y, K);
                if (new_loss <= loss) {
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if (!accepted) {
                scale = 0.0;
                new_loss = loss;
            } else {
                logits.swap(candidate);
            }
            for (auto& t : trees) {
                t.scale_leaves(scale);
            }
            rounds_.push_back(std::move(trees));
            loss = new_loss;
            loss_trace_.push_back(loss);
        }
    }

    std::vector<double> predict_logits(std::span<const double> x) const {
        std::vector<double> z(classes_, 0.0);
        for (const auto& round : rounds_) {
            for (std::size_t k = 0; k < classes_; ++k) {
                z[k] += round[k].predict(x);
            }
        }
        return z;
    }

    std::vector<double> predict_dist(std::span<const double> x) const {
        auto z = predict_logits(x);
        softmax_inplace(z);
        return z;
    }

    /// Training loss before the first round followed by the loss after each round.
    const std::vector<double>& loss_trace() const { return loss_trace_; }

    friend void to_json(nlohmann::json& j, const GradientBoost& g) {
        j = {{"classes", g.classes_}, {"rounds", g.rounds_}, {"loss_trace", g.loss_trace_}};
    }
    friend void from_json(const nlohmann::json& j, GradientBoost& g) {
        j.at("classes").get_to(g.classes_);
        j.at("rounds").get_to(g.rounds_);
        j.at("loss_trace").get_to(g.loss_trace_);
    }

private:
    std::size_t classes_ = 0;
    std::vector<std::vector<RegressionTree>> rounds_;
    std::vector<double> loss_trace_;
};

} // namespace rosterflow::ml
