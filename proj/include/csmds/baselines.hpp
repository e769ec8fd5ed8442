#pragma once

#include <cstdint>
#include <vector>

#include "csmds/matrix.hpp"
#include "csmds/types.hpp"

namespace csmds {

/// Double-centered Gram matrix B = -1/2 H (D o D) H; symmetric with zero row
/// and column sums.
class GramMatrix {
public:
    explicit GramMatrix(Matrix values) : values_(std::move(values)) {}
    std::size_t size() const { return values_.rows(); }
    const Matrix& values() const { return values_; }

private:
    Matrix values_;
};

GramMatrix double_center(const TargetMatrix& delta);

struct EigResult {
    std::vector<double> values;  // descending
    Matrix vectors;              // orthonormal columns, vectors.col(k) <-> values[k]
};

/// Symmetric eigendecomposition by cyclic Jacobi sweeps. Throws
/// numerical_error if the off-diagonal norm has not dropped below
/// 1e-10 * ||A||_F after 100 sweeps.
EigResult symmetric_eig(const Matrix& symmetric);

struct ClassicalMdsResult {
    Embedding embedding;
    std::size_t clamped_eigenvalues = 0;  // top-L eigenvalues below zero, clamped
};

/// Torgerson scaling: X = V_L diag(sqrt(max(lambda, 0))).
ClassicalMdsResult classical_mds(const TargetMatrix& delta, std::size_t l);

/// One Guttman transform X' = (1/N) B(X) X with unit weights; never
/// increases the SMACOF stress.
Embedding guttman_step(const Embedding& x, const TargetMatrix& delta);

struct SmacofOptions {
    double tol = 1e-6;          // relative stress-decrease threshold
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

struct SmacofResult {
    Embedding embedding;
    std::vector<TraceRecord> trace;
    bool converged = false;
};

/// Iterated Guttman transform from a uniform [0,1) random start.
SmacofResult run_smacof(const TargetMatrix& delta, std::size_t l, const SmacofOptions& opts = {});

}  // namespace csmds
