#include "deblur1d/forward.hpp"

#include <algorithm>

#include "deblur1d/quadrature.hpp"

namespace deblur {

Kernel Kernel::periodized_gaussian(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("Kernel: width must be > 0");
    Kernel k;
    k.type_ = Type::PeriodizedGaussian;
    k.width_ = width;
    k.mass_ = 1.0;
    // normalize by quadrature of the raw kernel over [0,1]
    std::vector<double> qx, qw;
    gauss_rule(16, qx, qw);
    const int cells = 256;
    double m = 0.0;
    for (int c = 0; c < cells; ++c)
        for (size_t i = 0; i < qx.size(); ++i)
            m += qw[i] * k.raw((c + qx[i]) / cells);
    k.mass_ = m / cells;
    return k;
}

Kernel Kernel::custom_table(std::vector<double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("Kernel: table needs >= 2 samples");
    Kernel k;
    k.type_ = Type::CustomTable;
    k.table_ = std::move(samples);
    // periodic linear interpolant: trapezoid mass is exact
    double m = 0.0;
    for (double s : k.table_) m += s;
    k.mass_ = m / k.table_.size();
    if (std::abs(k.mass_) < 1e-300) throw std::invalid_argument("Kernel: zero-mass table");
    return k;
}

double Kernel::raw(double x) const {
    if (type_ == Type::PeriodizedGaussian) {
        double s = 0.0;
        for (int m = -5; m <= 5; ++m) {
            double z = x + m;
            s += std::exp(-0.5 * z * z / (width_ * width_));
        }
        return s / (width_ * std::sqrt(2.0 * M_PI));
    }
    double y = x - std::floor(x);
    double t = y * table_.size();
    size_t j = static_cast<size_t>(t);
    if (j >= table_.size()) j = table_.size() - 1;
    double frac = t - j;
    return table_[j] * (1.0 - frac) + table_[(j + 1) % table_.size()] * frac;
}

double Kernel::operator()(double x) const { return raw(x - std::floor(x)) / mass_; }

HierarchicalBasis measurement_coords(int k) {
    // Inner-product params are irrelevant for the L2 geometry.
    return build_basis(k, InnerKind::L2, PriorParams(1.0, 4.0));
}

namespace {

// Periodic hat at node i of mesh mn.
double hat_eval(int i, const Mesh& mn, double y) {
    double d = y - mn.node(i);
    d -= std::round(d);  // wrap to [-1/2, 1/2]
    double t = std::abs(d) / mn.width();
    return t < 1.0 ? 1.0 - t : 0.0;
}

// rho(z) = int b_l(x) hat_i(x - z) dx, exact: the hat supports two cells,
// the integrand is piecewise quadratic, and 2-point Gauss per smooth piece
// integrates cubics exactly.
double cross_corr(const PLFunction& bl, int i, const Mesh& mn, double z) {
    const double hn = mn.width(), c = mn.node(i);
    const double lo = z + c - hn, hi = z + c + hn;
    const int K = bl.mesh.cells;
    static thread_local std::vector<double> bps;
    bps.clear();
    bps.push_back(lo);
    long jlo = static_cast<long>(std::ceil(lo * K)), jhi = static_cast<long>(std::floor(hi * K));
    for (long j = jlo; j <= jhi; ++j) {
        double x = double(j) / K;
        if (x > lo + 1e-15 && x < hi - 1e-15) bps.push_back(x);
    }
    double apex = z + c;
    if (apex > lo + 1e-15 && apex < hi - 1e-15) bps.push_back(apex);
    bps.push_back(hi);
    std::sort(bps.begin(), bps.end());
    const double g1 = 0.5 - 0.5 / std::sqrt(3.0), g2 = 0.5 + 0.5 / std::sqrt(3.0);
    double s = 0.0;
    for (size_t r = 0; r + 1 < bps.size(); ++r) {
        double a = bps[r], h = bps[r + 1] - bps[r];
        if (h <= 0.0) continue;
        double x1 = a + g1 * h, x2 = a + g2 * h;
        s += 0.5 * h * (bl(x1) * hat_eval(i, mn, x1 - z) + bl(x2) * hat_eval(i, mn, x2 - z));
    }
    return s;
}

// A_mat entries <A hat_i^n, b_l^k>_L2 = int kappa(z) rho_{li}(z) dz at the
// given order. The z-grid splits at every kink of rho (the level-max dyadic
// grid) and of kappa (table breakpoints); table kernels are therefore
// integrated exactly, Gaussians to quadrature accuracy on panels no wider
// than the kernel scale.
Eigen::MatrixXd assemble_entries(const Kernel& kernel, int n, int k,
                                 const HierarchicalBasis& onb, int order) {
    Mesh mn(n), mk(k);
    const int N = mn.cells, K = mk.cells;
    std::vector<double> qx, qw;
    gauss_rule(order, qx, qw);
    const int Q = order;

    std::vector<double> cuts;
    const int G = std::max(N, K);
    if (kernel.type() == Kernel::Type::CustomTable) {
        const int Mt = static_cast<int>(kernel.table_size());
        for (int r = 0; r < Mt; ++r) cuts.push_back(double(r) / Mt);
        for (int r = 0; r < G; ++r) cuts.push_back(double(r) / G);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return b - a < 1e-15; }),
                   cuts.end());
    } else {
        int nsub = std::min(64, std::max(1, int(std::ceil(1.0 / (G * kernel.width())))));
        for (int r = 0; r < G * nsub; ++r) cuts.push_back(double(r) / (G * nsub));
    }
    cuts.push_back(1.0);

    // kernel values at all panel Gauss nodes, shared across entries
    const size_t P = cuts.size() - 1;
    std::vector<double> zs(P * Q), wz(P * Q);
    for (size_t r = 0; r < P; ++r) {
        double a = cuts[r], h = cuts[r + 1] - cuts[r];
        for (int p = 0; p < Q; ++p) {
            zs[r * Q + p] = a + qx[p] * h;
            wz[r * Q + p] = qw[p] * h * kernel(zs[r * Q + p]);
        }
    }

    Eigen::MatrixXd A(K, N);
    for (int l = 0; l < K; ++l) {
        PLFunction bl = onb.vector(l);
        for (int i = 0; i < N; ++i) {
            double s = 0.0;
            for (size_t m = 0; m < zs.size(); ++m)
                s += wz[m] * cross_corr(bl, i, mn, zs[m]);
            A(l, i) = s;
        }
    }
    return A;
}

}  // namespace

ForwardOperator assemble_a(const Kernel& kernel, int n, int k, int quad_order) {
    if (quad_order < 2) throw std::invalid_argument("assemble_a: quad_order must be >= 2");
    HierarchicalBasis onb = measurement_coords(k);
    Eigen::MatrixXd A = assemble_entries(kernel, n, k, onb, quad_order);
    Eigen::MatrixXd A2 = assemble_entries(kernel, n, k, onb, quad_order + 2);
    double dev = (A - A2).cwiseAbs().maxCoeff();
    if (dev > 1e-6)
        throw std::runtime_error("assemble_a: quadrature did not converge; raise quad_order");
    return {n, k, std::move(A2), quad_order, std::move(onb)};
}

Measurement synthesize(const PLFunction& u_true, const ForwardOperator& fop, double sigma,
                       std::mt19937_64& rng) {
    if (u_true.mesh.level != fop.n)
        throw std::invalid_argument("synthesize: truth level does not match operator");
    if (sigma < 0.0) throw std::invalid_argument("synthesize: sigma must be >= 0");
    Eigen::VectorXd coeffs = fop.A_mat * u_true.nodal;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < coeffs.size(); ++i) coeffs[i] += sigma * gauss(rng);
    return {fop.k, std::move(coeffs), sigma};
}

}  // namespace deblur
