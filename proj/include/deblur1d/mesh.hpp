#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace deblur {

/// Parameters of the edge prior: edge scale epsilon > 0 and the
/// perturbation exponent q > 1 of the invertible derivative D_q.
struct PriorParams {
    double epsilon;
    double q;

    explicit PriorParams(double epsilon_, double q_ = 4.0)
        : epsilon(epsilon_), q(q_) {
        if (!(epsilon > 0.0)) throw std::invalid_argument("PriorParams: epsilon must be > 0");
        if (!(q > 1.0)) throw std::invalid_argument("PriorParams: q must be > 1");
    }

    /// epsilon^q, the constant D_q adds on the mean component.
    double eps_q() const { return std::pow(epsilon, q); }
};

/// Dyadic mesh on the circle [0,1) with 2^level half-open cells
/// K_j = [j/N, (j+1)/N), j = 0..N-1.
struct Mesh {
    int level;
    int cells;

    explicit Mesh(int n) : level(n), cells(1 << n) {
        if (n < 0 || n > 30) throw std::invalid_argument("Mesh: level out of range");
    }

    double width() const { return 1.0 / cells; }
    double node(int j) const { return static_cast<double>(j) / cells; }

    bool operator==(const Mesh& o) const { return level == o.level; }
    bool operator!=(const Mesh& o) const { return level != o.level; }
};

struct PCFunction;

/// Neumaier-compensated sum; the means feeding D_q and its inverse suffer
/// heavy cancellation and get amplified by eps^{-q}.
inline double compensated_sum(const Eigen::VectorXd& v) {
    double s = 0.0, c = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double t = s + v[i];
        if (std::abs(s) >= std::abs(v[i]))
            c += (s - t) + v[i];
        else
            c += (v[i] - t) + s;
        s = t;
    }
    return s + c;
}

/// Continuous piecewise-linear function on the circle, stored by its
/// nodal values at j/N. The wrap-around node reuses nodal[0].
struct PLFunction {
    Mesh mesh;
    Eigen::VectorXd nodal;

    PLFunction(Mesh m, Eigen::VectorXd vals) : mesh(m), nodal(std::move(vals)) {
        if (nodal.size() != mesh.cells)
            throw std::invalid_argument("PLFunction: nodal size must equal cell count");
    }

    static PLFunction constant(Mesh m, double c) {
        return {m, Eigen::VectorXd::Constant(m.cells, c)};
    }

    static PLFunction from_samples(Mesh m, const std::function<double(double)>& f) {
        Eigen::VectorXd v(m.cells);
        for (int j = 0; j < m.cells; ++j) v[j] = f(m.node(j));
        return {m, std::move(v)};
    }

    /// Periodic evaluation, linear on each cell.
    double operator()(double x) const {
        double y = x - std::floor(x);
        double s = y * mesh.cells;
        int j = static_cast<int>(s);
        if (j >= mesh.cells) j = mesh.cells - 1;
        double t = s - j;
        return nodal[j] * (1.0 - t) + nodal[(j + 1) % mesh.cells] * t;
    }

    /// Exact integral over the circle (trapezoid is exact on PL).
    double mean() const { return compensated_sum(nodal) / nodal.size(); }

    /// Nodal interpolation into PL(finer_level); exact since meshes nest.
    PLFunction prolong(int finer_level) const;
};

/// Piecewise-constant function on the same dyadic mesh.
struct PCFunction {
    Mesh mesh;
    Eigen::VectorXd cellvals;

    PCFunction(Mesh m, Eigen::VectorXd vals) : mesh(m), cellvals(std::move(vals)) {
        if (cellvals.size() != mesh.cells)
            throw std::invalid_argument("PCFunction: cellvals size must equal cell count");
    }

    static PCFunction constant(Mesh m, double c) {
        return {m, Eigen::VectorXd::Constant(m.cells, c)};
    }

    double operator()(double x) const {
        double y = x - std::floor(x);
        int j = static_cast<int>(y * mesh.cells);
        if (j >= mesh.cells) j = mesh.cells - 1;
        return cellvals[j];
    }

    double integral() const { return compensated_sum(cellvals) / mesh.cells; }
};

/// Exact weak derivative of a piecewise-linear function.
PCFunction derivative(const PLFunction& f);

/// Perturbed derivative D_q f = Df + eps^q * mean(f) * 1.
PCFunction apply_dq(const PLFunction& f, const PriorParams& p);

/// Inverse of apply_dq on PL(n): unique u with D_q u = g.
PLFunction solve_dq(const PCFunction& g, const PriorParams& p);

/// Cell-averaging operator Q_n; exact for PL inputs.
PCFunction cell_average(const PLFunction& f);

/// Q_n for an arbitrary integrable function, per-cell Gauss quadrature.
PCFunction cell_average(const std::function<double(double)>& f, Mesh mesh, int quad_order = 16);

enum class InnerKind { L2, Hnu, Dq };

/// Exact L2 inner product of two PL functions on the same mesh.
double inner(const PLFunction& f, const PLFunction& g);
/// Exact L2 inner product of two PC functions on the same mesh.
double inner(const PCFunction& f, const PCFunction& g);
/// Mixed PL x PC inner product (exact).
double inner(const PLFunction& f, const PCFunction& g);

/// Inner product in the requested geometry:
///   L2         standard,
///   Hnu        (1/4eps)<f,g>_L2 + eps <Df,Dg>_L2,
///   Dq         <D_q f, D_q g>_L2.
double inner(const PLFunction& f, const PLFunction& g, InnerKind kind, const PriorParams& p);

inline double norm_l2(const PLFunction& f) { return std::sqrt(inner(f, f)); }
inline double norm_l2(const PCFunction& f) { return std::sqrt(inner(f, f)); }

/// L2-orthogonal projection of f onto PL(k), k <= f.mesh.level.
PLFunction l2_project(const PLFunction& f, int k);

/// Fourier coefficients c_j = int f e^{-2 pi i j x} dx for j = 0..band
/// (negative modes are conjugates for real f). Closed form via the
/// sinc^2 transform of the hat basis.
Eigen::VectorXcd fourier_coeffs(const PLFunction& f, int band);

/// Truncated Sobolev norm ||f||_{H^t} from the Fourier sum up to |j| <= band;
/// band < 0 selects the default 16*N.
double sobolev_norm(const PLFunction& f, double t, int band = -1);

}  // namespace deblur
