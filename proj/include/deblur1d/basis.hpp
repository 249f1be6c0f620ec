#pragma once

#include <memory>

#include "deblur1d/mesh.hpp"

namespace deblur {

/// Level-nested orthonormal basis of PL(n) under a chosen inner product.
/// Column j of `columns` holds the nodal values of basis vector b_j; the
/// leading 2^m columns span PL(m) for every m <= n.
struct HierarchicalBasis {
    Mesh mesh;
    InnerKind kind;
    PriorParams params;
    Eigen::MatrixXd columns;

    PLFunction vector(int j) const { return {mesh, columns.col(j)}; }

    const Eigen::PartialPivLU<Eigen::MatrixXd>& solver() const;

    // lazy factorization of `columns` for coords(); treat as internal
    mutable std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

/// Gram-Cholesky orthonormalization of the hierarchical hat generators
/// (level-0 constant, then each level's midpoint hats left to right).
/// Triangularity preserves leading spans, so nestedness holds by construction.
HierarchicalBasis build_basis(int n, InnerKind kind, const PriorParams& p);

/// Coefficients of f in the basis (inverse of from_coords).
Eigen::VectorXd coords(const PLFunction& f, const HierarchicalBasis& basis);
PLFunction from_coords(const Eigen::VectorXd& x, const HierarchicalBasis& basis);

/// Change of basis from {D_q f_k} to {sqrt(N) 1_{K_j}} in PC(n);
/// orthogonal: S S^T = I.
struct SMatrix {
    Mesh mesh;
    PriorParams params;
    Eigen::MatrixXd entries;
};

SMatrix build_s(const HierarchicalBasis& fbasis);

/// Conditional covariance C(v) of the u-coordinates given v, with its
/// exact factorization C = S^T diag(L) S, L_jj = (eps^2 + vbar_j^2)^{-1}.
struct CondCovariance {
    Eigen::VectorXd vbar;
    Eigen::MatrixXd C;
    Eigen::VectorXd L_diag;
    Eigen::MatrixXd sqrt_C;  // S^T diag(L^{1/2}) S, symmetric root

    double log_det() const { return L_diag.array().log().sum(); }
};

CondCovariance build_c(const PLFunction& v, const HierarchicalBasis& fbasis,
                       const SMatrix& S, const PriorParams& p);

/// Same, from precomputed cell averages Q_n v.
CondCovariance build_c_from_vbar(const Eigen::VectorXd& vbar, const HierarchicalBasis& fbasis,
                                 const SMatrix& S, const PriorParams& p);

}  // namespace deblur
