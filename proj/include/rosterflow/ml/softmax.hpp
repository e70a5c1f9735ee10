#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/ml/common.hpp"
#include "rosterflow/ml/gboost.hpp"

namespace rosterflow::ml {

struct SoftmaxOptions {
    double l2 = 1e-3;
    std::size_t max_iterations = 2000;
    double gradient_tolerance = 1e-6;
    double initial_step = 1.0;
};

struct Objective {
    double loss = 0.0;
    std::vector<double> gradient;
};

/// Mean cross-entropy plus (l2/2)||W||^2 over non-bias weights. W is
/// K x (d + 1) row-major with the bias in the last column.
inline Objective softmax_objective(std::span<const double> W, const MatrixView& X, std::span<const int> y,
                                   std::size_t K, double l2) {
    const std::size_t d = X.cols;
    const std::size_t stride = d + 1;
    Objective out;
    out.gradient.assign(K * stride, 0.0);
    std::vector<double> z(K);
    const double inv_n = 1.0 / static_cast<double>(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        auto x = X.row(i);
        for (std::size_t k = 0; k < K; ++k) {
            double s = W[k * stride + d];
            for (std::size_t c = 0; c < d; ++c) {
                s += W[k * stride + c] * x[c];
            }
            z[k] = s;
        }
        auto label = static_cast<std::size_t>(y[i]);
        double top = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double v : z) {
            sum += std::exp(v - top);
        }
        double lse = top + std::log(sum);
        out.loss += (lse - z[label]) * inv_n;
        for (double& v : z) {
            v = std::exp(v - lse);
        }
        for (std::size_t k = 0; k < K; ++k) {
            double r = (z[k] - (k == label ? 1.0 : 0.0)) * inv_n;
            for (std::size_t c = 0; c < d; ++c) {
                out.gradient[k * stride + c] += r * x[c];
            }
            out.gradient[k * stride + d] += r;
        }
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            double w = W[k * stride + c];
            out.loss += 0.5 * l2 * w * w;
            out.gradient[k * stride + c] += l2 * w;
        }
    }
    return out;
}

/// Multinomial logistic regression on standardized inputs, full-batch
/// gradient descent with Armijo backtracking.
class SoftmaxRegression {
public:
    void fit(const TrainingView& data, const SoftmaxOptions& opt) {
        classes_ = data.classes;
        const std::size_t d = data.X.cols;
        scaler_ = Standardizer::fit(data.X);
        auto Z = scaler_.transform(data.X);
        MatrixView Xs{Z.data(), data.X.rows, d};
        weights_.assign(classes_ * (d + 1), 0.0);
        loss_trace_.clear();
        auto obj = softmax_objective(weights_, Xs, data.y, classes_, opt.l2);
        loss_trace_.push_back(obj.loss);
        double step = opt.initial_step;
        std::vector<double> trial(weights_.size());
        for (std::size_t it = 0; it < opt.max_iterations; ++it) {
            double g2 = 0.0;
            for (double g : obj.gradient) {
                g2 += g * g;
            }
            if (std::sqrt(g2) < opt.gradient_tolerance) {
                break;
            }
            bool moved = false;
            for (int attempt = 0; attempt < 60; ++attempt) {
                for (std::size_t j = 0; j < weights_.size(); ++j) {
                    trial[j] = weights_[j] - step * obj.gradient[j];
                }
                auto next = softmax_objective(trial, Xs, data.y, classes_, opt.l2);
                if (next.loss <= obj.loss - 1e-4 * step * g2) {
                    weights_.swap(trial);
                    obj = std::move(next);
                    moved = true;
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) {
                break;
            }
            loss_trace_.push_back(obj.loss);
        }
    }

    std::vector<double> predict_dist(std::span<const double> x) const {
        const std::size_t d = scaler_.mean.size();
        std::vector<double> xs(d);
        scaler_.apply(x, xs);
        std::vector<double> z(classes_);
        for (std::size_t k = 0; k < classes_; ++k) {
            double s = weights_[k * (d + 1) + d];
            for (std::size_t c = 0; c < d; ++c) {
                s += weights_[k * (d + 1) + c] * xs[c];
            }
            z[k] = s;
        }
        softmax_inplace(z);
        return z;
    }

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& loss_trace() const { return loss_trace_; }

    friend void to_json(nlohmann::json& j, const SoftmaxRegression& m) {
        j = {{"classes", m.classes_}, {"scaler", m.scaler_}, {"weights", m.weights_}, {"loss_trace", m.loss_trace_}};
    }
    friend void from_json(const nlohmann::json& j, SoftmaxRegression& m) {
        j.at("classes").get_to(m.classes_);
        j.at("scaler").get_to(m.scaler_);
        j.at("weights").get_to(m.weights_);
        j.at("loss_trace").get_to(m.loss_trace_);
    }

private:
    std::size_t classes_ = 0;
    Standardizer scaler_;
    std::vector<double> weights_;
    std::vector<double> loss_trace_;
};

} // namespace rosterflow::ml
