#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"

namespace support {

// Perron vector of damping * A^T + (1 - damping)/n * J from a dense
// eigensolver, scaled to max 1.
inline std::vector<double> dense_eigenvector(const Digraph& g, double damping = 0.85) {
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXd M = Eigen::MatrixXd::Constant(n, n, (1.0 - damping) / static_cast<double>(g.n));
    for (auto [u, v] : g.edges) {
        M(v, u) += damping;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
        if (solver.eigenvalues()[i].real() > solver.eigenvalues()[best].real()) {
            best = i;
        }
    }
    Eigen::VectorXd x = solver.eigenvectors().col(best).real();
    double peak = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(x[i]) > std::abs(peak)) {
            peak = x[i];
        }
    }
    std::vector<double> out(g.n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = x[i] / peak;
    }
    return out;
}

} // namespace support
