#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace deblur {

/// Gauss-Legendre rule on [0,1] (weights sum to 1), Golub-Welsch.
inline void gauss_rule(int order, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(order);
    w.resize(order);
    for (int i = 0; i < order; ++i) {
        x[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
        double v0 = es.eigenvectors()(0, i);
        w[i] = v0 * v0;
    }
}

}  // namespace deblur
