#include "deblur1d/mesh.hpp"

#include <complex>
#include <vector>

#include "deblur1d/quadrature.hpp"

namespace deblur {

PLFunction PLFunction::prolong(int finer_level) const {
    if (finer_level < mesh.level)
        throw std::invalid_argument("prolong: target level must be >= current");
    if (finer_level == mesh.level) return *this;
    Mesh fm(mesh.level + 1);
    Eigen::VectorXd v(fm.cells);
    for (int j = 0; j < mesh.cells; ++j) {
        v[2 * j] = nodal[j];
        v[2 * j + 1] = 0.5 * (nodal[j] + nodal[(j + 1) % mesh.cells]);
    }
    return PLFunction(fm, std::move(v)).prolong(finer_level);
}

PCFunction derivative(const PLFunction& f) {
    const int N = f.mesh.cells;
    Eigen::VectorXd d(N);
    for (int j = 0; j < N; ++j) d[j] = N * (f.nodal[(j + 1) % N] - f.nodal[j]);
    return {f.mesh, std::move(d)};
}

PCFunction apply_dq(const PLFunction& f, const PriorParams& p) {
    PCFunction d = derivative(f);
    d.cellvals.array() += p.eps_q() * f.mean();
    return d;
}

PLFunction solve_dq(const PCFunction& g, const PriorParams& p) {
    const int N = g.mesh.cells;
    const double gmean = g.integral();
    const double umean = gmean / p.eps_q();
    // Integrate the mean-zero part cumulatively, then shift to the right mean.
    Eigen::VectorXd u(N);
    u[0] = 0.0;
    for (int j = 1; j < N; ++j) u[j] = u[j - 1] + (g.cellvals[j - 1] - gmean) / N;
    u.array() += umean - u.mean();
    return {g.mesh, std::move(u)};
}

PCFunction cell_average(const PLFunction& f) {
    const int N = f.mesh.cells;
    Eigen::VectorXd a(N);
    for (int j = 0; j < N; ++j) a[j] = 0.5 * (f.nodal[j] + f.nodal[(j + 1) % N]);
    return {f.mesh, std::move(a)};
}

PCFunction cell_average(const std::function<double(double)>& f, Mesh mesh, int quad_order) {
    std::vector<double> qx, qw;
    gauss_rule(quad_order, qx, qw);
    const int N = mesh.cells;
    const double h = mesh.width();
    Eigen::VectorXd a = Eigen::VectorXd::Zero(N);
    for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int i = 0; i < quad_order; ++i) s += qw[i] * f((j + qx[i]) * h);
        a[j] = s;  // N * integral = plain Gauss average on the cell
    }
    return {mesh, std::move(a)};
}

double inner(const PLFunction& f, const PLFunction& g) {
    if (f.mesh != g.mesh) throw std::invalid_argument("inner: mesh mismatch");
    const int N = f.mesh.cells;
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
        double a = f.nodal[j], b = f.nodal[(j + 1) % N];
        double c = g.nodal[j], d = g.nodal[(j + 1) % N];
        // exact integral of the product of two linears on a cell
        s += (2.0 * a * c + a * d + b * c + 2.0 * b * d) / 6.0;
    }
    return s / N;
}

double inner(const PCFunction& f, const PCFunction& g) {
    if (f.mesh != g.mesh) throw std::invalid_argument("inner: mesh mismatch");
    return f.cellvals.dot(g.cellvals) / f.mesh.cells;
}

double inner(const PLFunction& f, const PCFunction& g) {
    if (f.mesh != g.mesh) throw std::invalid_argument("inner: mesh mismatch");
    const int N = f.mesh.cells;
    double s = 0.0;
    for (int j = 0; j < N; ++j)
        s += 0.5 * (f.nodal[j] + f.nodal[(j + 1) % N]) * g.cellvals[j];
    return s / N;
}

double inner(const PLFunction& f, const PLFunction& g, InnerKind kind, const PriorParams& p) {
    switch (kind) {
        case InnerKind::L2:
            return inner(f, g);
        case InnerKind::Hnu:
            return inner(f, g) / (4.0 * p.epsilon) +
                   p.epsilon * inner(derivative(f), derivative(g));
        case InnerKind::Dq:
            return inner(apply_dq(f, p), apply_dq(g, p));
    }
    throw std::logic_error("inner: unknown kind");
}

PLFunction l2_project(const PLFunction& f, int k) {
    const int n = f.mesh.level;
    if (k > n) throw std::invalid_argument("l2_project: k must be <= level of f");
    if (k == n) return f;
    Mesh mk(k);
    const int K = mk.cells;
    // Hat basis of PL(k): mass matrix at level k, load vector at level n.
    Eigen::MatrixXd M(K, K);
    std::vector<PLFunction> hats;
    hats.reserve(K);
    for (int i = 0; i < K; ++i)
        hats.emplace_back(mk, Eigen::VectorXd::Unit(K, i));
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) M(i, j) = inner(hats[i], hats[j]);
    Eigen::VectorXd b(K);
    for (int i = 0; i < K; ++i) b[i] = inner(f, hats[i].prolong(n));
    Eigen::VectorXd c = Eigen::LDLT<Eigen::MatrixXd>(M).solve(b);
    return {mk, std::move(c)};
}

Eigen::VectorXcd fourier_coeffs(const PLFunction& f, int band) {
    if (band < 1) throw std::invalid_argument("fourier_coeffs: band must be >= 1");
    const int N = f.mesh.cells;
    Eigen::VectorXcd c(band + 1);
    for (int j = 0; j <= band; ++j) {
        std::complex<double> s(0.0, 0.0);
        for (int m = 0; m < N; ++m) {
            double phase = -2.0 * M_PI * j * m / N;
            s += f.nodal[m] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        double arg = M_PI * j / N;
        double shape = (j == 0) ? 1.0 : std::pow(std::sin(arg) / arg, 2);
        c[j] = s * (shape / N);
    }
    return c;
}

double sobolev_norm(const PLFunction& f, double t, int band) {
    if (band < 0) band = 16 * f.mesh.cells;
    Eigen::VectorXcd c = fourier_coeffs(f, band);
    double s = std::pow(1.0, t) * std::norm(c[0]);
    for (int j = 1; j <= band; ++j)
        s += 2.0 * std::pow(1.0 + 4.0 * M_PI * M_PI * j * j, t) * std::norm(c[j]);
    return std::sqrt(s);
}

}  // namespace deblur
