#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/error.hpp"

namespace rosterflow::ml {

/// Non-owning row-major matrix.
struct MatrixView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data + r * cols, cols}; }
};

/// Labels are compact class indices in [0, classes).
struct TrainingView {
    MatrixView X;
    std::span<const int> y;
    std::size_t classes = 0;
};

inline void require_finite(const MatrixView& X) {
    for (std::size_t i = 0; i < X.rows * X.cols; ++i) {
        if (!std::isfinite(X.data[i])) {
            throw Error(ErrorKind::NonFiniteFeature,
                        "row " + std::to_string(i / X.cols) + " column " + std::to_string(i % X.cols));
        }
    }
}

/// Per-column z-score parameters; constant columns keep scale 1.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const MatrixView& X) {
        Standardizer s;
        s.mean.assign(X.cols, 0.0);
        s.scale.assign(X.cols, 1.0);
        if (X.rows == 0) {
            return s;
        }
        for (std::size_t c = 0; c < X.cols; ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < X.rows; ++r) {
                sum += X.at(r, c);
            }
            double mu = sum / static_cast<double>(X.rows);
            double ss = 0.0;
            for (std::size_t r = 0; r < X.rows; ++r) {
                double d = X.at(r, c) - mu;
                ss += d * d;
            }
            double sd = std::sqrt(ss / static_cast<double>(X.rows));
            s.mean[c] = mu;
            s.scale[c] = sd > 1e-12 ? sd : 1.0;
        }
        return s;
    }

    void apply(std::span<const double> in, std::span<double> out) const {
        for (std::size_t c = 0; c < in.size(); ++c) {
            out[c] = (in[c] - mean[c]) / scale[c];
        }
    }

    std::vector<double> transform(const MatrixView& X) const {
        std::vector<double> out(X.rows * X.cols);
        for (std::size_t r = 0; r < X.rows; ++r) {
            apply(X.row(r), std::span<double>(out.data() + r * X.cols, X.cols));
        }
        return out;
    }
};

inline void to_json(nlohmann::json& j, const Standardizer& s) { j = {{"mean", s.mean}, {"scale", s.scale}}; }
inline void from_json(const nlohmann::json& j, Standardizer& s) {
    j.at("mean").get_to(s.mean);
    j.at("scale").get_to(s.scale);
}

} // namespace rosterflow::ml
