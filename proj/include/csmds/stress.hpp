#pragma once

#include <span>
#include <vector>

#include "csmds/matrix.hpp"
#include "csmds/types.hpp"

namespace csmds {

/// Pairwise Euclidean distances of the rows of coords. Symmetric, zero
/// diagonal.
Matrix compute_distance_matrix(const Matrix& coords);

/// Frobenius objective sum_ij (t_ij - d_ij)^2; the full double sum, so each
/// off-diagonal pair is counted twice.
double raw_stress(const Matrix& t, const Matrix& d);
double raw_stress(const TargetMatrix& t, const Matrix& d);

/// Kruskal Stress-1: sqrt(sum (t_ij - d_ij)^2 / sum d_ij^2).
double stress1(const TargetMatrix& t, const Matrix& d);

struct DeltaStress {
    double new_stress = 0.0;
    std::vector<double> new_row;  // distance row for point i after the move
};

/// Raw stress after replacing point i with `candidate`, computed from
/// old_stress by adjusting the 2(N-1) row/column-i terms. O(N*L).
DeltaStress move_delta_stress(const TargetMatrix& t, const Embedding& emb, std::size_t i,
                              std::span<const double> candidate, double old_stress);

/// Same, specialized to an axis-aligned step of signed length `step` along
/// `dim`: each new distance comes from the cached one in O(1), so the whole
/// update is O(N) independent of L.
DeltaStress move_delta_stress_axis(const TargetMatrix& t, const Embedding& emb, std::size_t i,
                                   std::size_t dim, double step, double old_stress);

}  // namespace csmds
