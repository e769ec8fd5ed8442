#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "csmds/errors.hpp"
#include "csmds/matrix.hpp"
#include "csmds/rng.hpp"

namespace csmds {

/// N x N symmetric dissimilarity matrix: non-negative, zero diagonal, finite.
/// Construct through validate(), which enforces the invariants (asymmetry and
/// diagonal tolerance 1e-6 absolute) and symmetrizes by averaging.
class TargetMatrix {
public:
    static TargetMatrix validate(Matrix values);

    std::size_t size() const { return values_.rows(); }
    const Matrix& values() const { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
    explicit TargetMatrix(Matrix values) : values_(std::move(values)) {}
    Matrix values_;
};

/// N x L coordinates with a cached N x N Euclidean distance matrix. The cache
/// is maintained on every mutation: set_point replaces one coordinate row and
/// mirrors the supplied distance row into row/column i.
class Embedding {
public:
    explicit Embedding(Matrix coords);

    /// Entries i.i.d. uniform [0,1), filled row-major.
    static Embedding random_uniform(std::size_t n, std::size_t l, Rng& rng);

    std::size_t size() const { return coords_.rows(); }
    std::size_t dim() const { return coords_.cols(); }
    const Matrix& coords() const { return coords_; }
    const Matrix& distances() const { return distances_; }
    std::span<const double> point(std::size_t i) const { return coords_.row(i); }

    void set_point(std::size_t i, std::span<const double> new_coords,
                   std::span<const double> new_distance_row);

    /// Recomputes the distance matrix and checks the cache within 1e-9
    /// relative. Test/diagnostic helper; throws internal_error on drift.
    void check_distance_cache() const;

private:
    Matrix coords_;
    Matrix distances_;
};

/// N x 2L per-point, per-signed-coordinate evaluation probabilities.
/// Column s in [0,L) is the positive direction along axis s; column s+L the
/// negative one.
class ProbabilityMatrix {
public:
    ProbabilityMatrix(std::size_t n, std::size_t l, double p_init);

    std::size_t points() const { return probs_.rows(); }
    std::size_t dim() const { return l_; }
    double at(std::size_t i, std::size_t col) const { return probs_(i, col); }
    void set(std::size_t i, std::size_t col, double v);

    std::size_t column(std::size_t dim, int sign) const {
        return sign > 0 ? dim : dim + l_;
    }
    /// Inverse of column(): (axis, sign) for a column index.
    std::pair<std::size_t, int> signed_coordinate(std::size_t col) const {
        return col < l_ ? std::pair{col, +1} : std::pair{col - l_, -1};
    }

    const Matrix& values() const { return probs_; }
    bool operator==(const ProbabilityMatrix&) const = default;

private:
    std::size_t l_;
    Matrix probs_;
};

enum class Variant { full_search, randomized, bootstrapped };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);  // "fs" | "rn" | "bs"

/// Optimizer hyperparameters. validate() enforces the per-variant
/// constraints (FS: p_init=1, p_a=0; RN: p_init<1, p_a=0; BS: p_a>0,
/// p_th<p_init).
struct RunConfig {
    Variant variant = Variant::full_search;
    std::size_t l = 2;
    double r0 = 5.0;
    double epsilon = 1e-4;
    double delta = 1e-3;
    double p_init = 1.0;
    double p_a = 0.0;
    double p_th = 0.0;
    std::size_t max_epochs = 10000;
    std::uint64_t seed = 0;

    void validate() const;  // throws config_error
};

/// Evolving optimizer state; single-owner, never shared across threads.
struct RunState {
    std::size_t epoch = 0;
    double radius = 0.0;
    double stress = 0.0;
    double prev_stress = 0.0;  // stress at the start of the previous epoch
    std::uint64_t evals = 0;   // cumulative candidate evaluations
    Rng rng{0};
};

/// One trace row per epoch (or SMACOF iteration).
struct TraceRecord {
    std::size_t epoch = 0;
    double stress = 0.0;
    double radius = 0.0;
    std::uint64_t evals = 0;
    double elapsed_ms = 0.0;
};

}  // namespace csmds
