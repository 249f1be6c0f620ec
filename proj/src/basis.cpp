#include "deblur1d/basis.hpp"

#include <vector>

namespace deblur {

const Eigen::PartialPivLU<Eigen::MatrixXd>& HierarchicalBasis::solver() const {
    if (!lu_) lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(columns);
    return *lu_;
}

namespace {

// Nodal values of the hierarchical hat generators at level n, in order:
// constant, then the new midpoint hats of levels 1..n left to right.
Eigen::MatrixXd hat_generators(int n) {
    Mesh mesh(n);
    const int N = mesh.cells;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    A.col(0).setOnes();
    int col = 1;
    for (int m = 1; m <= n; ++m) {
        Mesh mm(m);
        const int Nm = mm.cells;
        for (int i = 0; i < Nm / 2; ++i) {
            Eigen::VectorXd hat = Eigen::VectorXd::Unit(Nm, 2 * i + 1);
            A.col(col++) = PLFunction(mm, hat).prolong(n).nodal;
        }
    }
    return A;
}

}  // namespace

HierarchicalBasis build_basis(int n, InnerKind kind, const PriorParams& p) {
    Mesh mesh(n);
    const int N = mesh.cells;
    Eigen::MatrixXd A = hat_generators(n);
    Eigen::MatrixXd G(N, N);
    for (int i = 0; i < N; ++i) {
        PLFunction gi(mesh, A.col(i));
        for (int j = 0; j <= i; ++j) {
            double v = inner(gi, PLFunction(mesh, A.col(j)), kind, p);
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("build_basis: Gram matrix not SPD");
    // B = A L^{-T}: solve L B^T = A^T, keeping leading spans.
    Eigen::MatrixXd B =
        llt.matrixL().transpose().template solve<Eigen::OnTheRight>(A);
    // Fix signs: first nonzero nodal value of each column positive.
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            if (std::abs(B(i, j)) > 1e-14) {
                if (B(i, j) < 0.0) B.col(j) = -B.col(j);
                break;
            }
        }
    }
    return {mesh, kind, p, std::move(B)};
}

Eigen::VectorXd coords(const PLFunction& f, const HierarchicalBasis& basis) {
    if (f.mesh != basis.mesh) throw std::invalid_argument("coords: mesh mismatch");
    return basis.solver().solve(f.nodal);
}

PLFunction from_coords(const Eigen::VectorXd& x, const HierarchicalBasis& basis) {
    if (x.size() != basis.mesh.cells)
        throw std::invalid_argument("from_coords: size mismatch");
    return {basis.mesh, basis.columns * x};
}

SMatrix build_s(const HierarchicalBasis& fbasis) {
    if (fbasis.kind != InnerKind::Dq)
        throw std::invalid_argument("build_s: basis must be Dq-orthonormal");
    const int N = fbasis.mesh.cells;
    const double rtN = std::sqrt(static_cast<double>(N));
    Eigen::MatrixXd S(N, N);
    for (int kcol = 0; kcol < N; ++kcol) {
        PCFunction d = apply_dq(fbasis.vector(kcol), fbasis.params);
        // S_jk = <D_q f_k, sqrt(N) 1_{K_j}> = (1/sqrt(N)) (D_q f_k)_j
        S.col(kcol) = d.cellvals / rtN;
    }
    return {fbasis.mesh, fbasis.params, std::move(S)};
}

CondCovariance build_c_from_vbar(const Eigen::VectorXd& vbar, const HierarchicalBasis& fbasis,
                                 const SMatrix& S, const PriorParams& p) {
    const int N = fbasis.mesh.cells;
    if (vbar.size() != N) throw std::invalid_argument("build_c: vbar size mismatch");
    Eigen::VectorXd L = (p.epsilon * p.epsilon + vbar.array().square()).inverse();

    // Route (a): defining integrals C_jk = <Lambda_n(v) D_q f_j, D_q f_k>.
    Eigen::MatrixXd D(N, N);
    for (int j = 0; j < N; ++j)
        D.col(j) = apply_dq(fbasis.vector(j), p).cellvals;
    Eigen::MatrixXd C_direct = D.transpose() * (L / N).asDiagonal() * D;

    // Route (b): S^T diag(L) S. Both must agree; the factorization is exact.
    Eigen::MatrixXd C_fact = S.entries.transpose() * L.asDiagonal() * S.entries;
    double dev = (C_direct - C_fact).cwiseAbs().maxCoeff();
    if (dev > 1e-10 * std::max(1.0, C_fact.cwiseAbs().maxCoeff()))
        throw std::runtime_error("build_c: factorization disagrees with defining integrals");

    Eigen::MatrixXd root =
        S.entries.transpose() * L.array().sqrt().matrix().asDiagonal() * S.entries;
    return {vbar, std::move(C_fact), std::move(L), std::move(root)};
}

CondCovariance build_c(const PLFunction& v, const HierarchicalBasis& fbasis,
                       const SMatrix& S, const PriorParams& p) {
    if (v.mesh != fbasis.mesh) throw std::invalid_argument("build_c: mesh mismatch");
    return build_c_from_vbar(cell_average(v).cellvals, fbasis, S, p);
}

}  // namespace deblur
