#include "csmds/stress.hpp"

#include <cmath>
#include <stdexcept>

#include "csmds/errors.hpp"

namespace csmds {

Matrix compute_distance_matrix(const Matrix& coords) {
    const std::size_t n = coords.rows(), l = coords.cols();
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!std::isfinite(coords.data()[i]))
            throw std::invalid_argument("compute_distance_matrix: non-finite coordinate");
    }
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = coords.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto xj = coords.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < l; ++k) {
                const double diff = xi[k] - xj[k];
                s += diff * diff;
            }
            const double dist = std::sqrt(s);
            d(i, j) = dist;
            d(j, i) = dist;
        }
    }
    return d;
}

double raw_stress(const Matrix& t, const Matrix& d) {
    if (t.rows() != d.rows() || t.cols() != d.cols())
        throw std::invalid_argument("raw_stress: shape mismatch");
    double s = 0.0;
    const double* tp = t.data();
    const double* dp = d.data();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double diff = tp[i] - dp[i];
        s += diff * diff;
    }
    return s;
}

double raw_stress(const TargetMatrix& t, const Matrix& d) { return raw_stress(t.values(), d); }

double stress1(const TargetMatrix& t, const Matrix& d) {
    if (t.size() != d.rows() || t.size() != d.cols())
        throw std::invalid_argument("stress1: shape mismatch");
    double num = 0.0, den = 0.0;
    const double* tp = t.values().data();
    const double* dp = d.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double diff = tp[i] - dp[i];
        num += diff * diff;
        den += dp[i] * dp[i];
    }
    if (den == 0.0) throw validation_error("stress1: embedded distances are identically zero");
    return std::sqrt(num / den);
}

DeltaStress move_delta_stress(const TargetMatrix& t, const Embedding& emb, std::size_t i,
                              std::span<const double> candidate, double old_stress) {
    const std::size_t n = emb.size(), l = emb.dim();
    if (i >= n) throw std::invalid_argument("move_delta_stress: point index out of range");
    if (candidate.size() != l) throw std::invalid_argument("move_delta_stress: wrong candidate size");
    for (double v : candidate)
        if (!std::isfinite(v)) throw std::invalid_argument("move_delta_stress: non-finite candidate");

    DeltaStress out;
    out.new_row.assign(n, 0.0);
    double delta = 0.0;
    const Matrix& coords = emb.coords();
    const Matrix& dist = emb.distances();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto xj = coords.row(j);
        double s = 0.0;
        for (std::size_t k = 0; k < l; ++k) {
            const double diff = candidate[k] - xj[k];
            s += diff * diff;
        }
        const double nd = std::sqrt(s);
        out.new_row[j] = nd;
        const double tij = t(i, j);
        const double a = tij - nd;
        const double b = tij - dist(i, j);
        delta += a * a - b * b;
    }
    out.new_stress = old_stress + 2.0 * delta;  // row + mirrored column
    return out;
}

DeltaStress move_delta_stress_axis(const TargetMatrix& t, const Embedding& emb, std::size_t i,
                                   std::size_t dim, double step, double old_stress) {
    const std::size_t n = emb.size();
    if (i >= n) throw std::invalid_argument("move_delta_stress_axis: point index out of range");
    if (dim >= emb.dim()) throw std::invalid_argument("move_delta_stress_axis: axis out of range");

    DeltaStress out;
    out.new_row.assign(n, 0.0);
    double delta = 0.0;
    const Matrix& coords = emb.coords();
    const Matrix& dist = emb.distances();
    const double xis = coords(i, dim);
    const double step_sq = step * step;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dij = dist(i, j);
        // d'^2 = d^2 + 2*step*(x_is - x_js) + step^2; clamp cancellation noise.
        double nd_sq = dij * dij + 2.0 * step * (xis - coords(j, dim)) + step_sq;
        if (nd_sq < 0.0) nd_sq = 0.0;
        const double nd = std::sqrt(nd_sq);
        out.new_row[j] = nd;
        const double tij = t(i, j);
        const double a = tij - nd;
        const double b = tij - dij;
        delta += a * a - b * b;
    }
    out.new_stress = old_stress + 2.0 * delta;
    return out;
}

}  // namespace csmds
