#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "deblur1d/basis.hpp"

namespace deblur {

/// Mass-one smoothing kernel on the circle: periodized Gaussian or a
/// periodically interpolated sample table. Normalized at construction.
class Kernel {
  public:
    enum class Type { PeriodizedGaussian, CustomTable };

    static Kernel periodized_gaussian(double width);
    static Kernel custom_table(std::vector<double> samples);

    double operator()(double x) const;  // periodic, normalized
    Type type() const { return type_; }
    double width() const { return width_; }
    double table_size() const { return static_cast<double>(table_.size()); }

  private:
    Kernel() = default;
    double raw(double x) const;

    Type type_ = Type::PeriodizedGaussian;
    double width_ = 0.0;
    std::vector<double> table_;
    double mass_ = 1.0;
};

/// Discretized forward map: K x N matrix taking nodal values of PL(n) to
/// the L2-orthonormal coordinates of P_k A u in PL(k).
struct ForwardOperator {
    int n;
    int k;
    Eigen::MatrixXd A_mat;
    int quad_order;
    HierarchicalBasis meas_basis;  // L2-orthonormal basis of PL(k)
};

/// L2-orthonormal coordinates on PL(k); coords are plain inner products
/// against the basis, so the euclidean norm equals the L2 norm.
HierarchicalBasis measurement_coords(int k);

/// Assemble A_mat by per-cell Gauss quadrature; verifies quadrature
/// convergence by re-running at quad_order + 2.
ForwardOperator assemble_a(const Kernel& kernel, int n, int k, int quad_order = 8);

struct Measurement {
    int k;
    Eigen::VectorXd coeffs;
    double sigma;
    std::uint64_t seed = 0;
    std::string kernel_spec;
    std::string truth_ref;
};

/// coeffs = A u_true + sigma * xi, xi ~ N(0, I_K).
Measurement synthesize(const PLFunction& u_true, const ForwardOperator& fop, double sigma,
                       std::mt19937_64& rng);

}  // namespace deblur
