#include "csmds/types.hpp"

#include <cmath>
#include <string>

#include "csmds/stress.hpp"

namespace csmds {

namespace {

std::string index_pair(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

TargetMatrix TargetMatrix::validate(Matrix values) {
    constexpr double kSymTol = 1e-6;
    if (values.rows() != values.cols())
        throw validation_error("target matrix is not square: " + std::to_string(values.rows()) +
                               "x" + std::to_string(values.cols()));
    const std::size_t n = values.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values(i, j);
            if (!std::isfinite(v))
                throw validation_error("target matrix has non-finite entry at " + index_pair(i, j));
            if (v < 0.0)
                throw validation_error("target matrix has negative entry at " + index_pair(i, j));
        }
        if (std::abs(values(i, i)) > kSymTol)
            throw validation_error("target matrix has nonzero diagonal at (" + std::to_string(i) +
                                   "," + std::to_string(i) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(values(i, j) - values(j, i)) > kSymTol)
                throw validation_error("target matrix asymmetric at " + index_pair(i, j));
            const double avg = 0.5 * (values(i, j) + values(j, i));
            values(i, j) = values(j, i) = avg;
        }
        values(i, i) = 0.0;
    }
    return TargetMatrix(std::move(values));
}

Embedding::Embedding(Matrix coords) : coords_(std::move(coords)) {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_.data()[i]))
            throw validation_error("embedding coordinates must be finite");
    }
    distances_ = compute_distance_matrix(coords_);
}

Embedding Embedding::random_uniform(std::size_t n, std::size_t l, Rng& rng) {
    Matrix coords(n, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < l; ++k) coords(i, k) = rng.uniform();
    return Embedding(std::move(coords));
}

void Embedding::set_point(std::size_t i, std::span<const double> new_coords,
                          std::span<const double> new_distance_row) {
    if (i >= size()) throw std::invalid_argument("set_point: index out of range");
    if (new_coords.size() != dim() || new_distance_row.size() != size())
        throw std::invalid_argument("set_point: row size mismatch");
    auto row = coords_.row(i);
    std::copy(new_coords.begin(), new_coords.end(), row.begin());
    for (std::size_t j = 0; j < size(); ++j) {
        distances_(i, j) = new_distance_row[j];
        distances_(j, i) = new_distance_row[j];
    }
    distances_(i, i) = 0.0;
}

void Embedding::check_distance_cache() const {
    const Matrix fresh = compute_distance_matrix(coords_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) {
            const double a = distances_(i, j), b = fresh(i, j);
            if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b)))
                throw internal_error("distance cache drifted at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        }
    }
}

ProbabilityMatrix::ProbabilityMatrix(std::size_t n, std::size_t l, double p_init)
    : l_(l), probs_(n, 2 * l, p_init) {
    if (!(p_init >= 0.0 && p_init <= 1.0))
        throw std::invalid_argument("probability matrix init outside [0,1]");
}

void ProbabilityMatrix::set(std::size_t i, std::size_t col, double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("probability entry outside [0,1]");
    probs_(i, col) = v;
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::full_search: return "fs";
        case Variant::randomized: return "rn";
        case Variant::bootstrapped: return "bs";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "fs") return Variant::full_search;
    if (name == "rn") return Variant::randomized;
    if (name == "bs") return Variant::bootstrapped;
    throw config_error("unknown variant '" + name + "' (expected fs, rn or bs)");
}

void RunConfig::validate() const {
    if (l == 0) throw config_error("embedding dimension must be positive");
    if (!(r0 > delta && delta > 0.0))
        throw config_error("radii must satisfy r0 > delta > 0");
    if (!(epsilon > 0.0)) throw config_error("epsilon must be positive");
    if (!(p_init > 0.0 && p_init <= 1.0)) throw config_error("p_init must lie in (0,1]");
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw config_error("p_a must lie in [0,1]");
    if (!(p_th >= 0.0 && p_th <= 1.0)) throw config_error("p_th must lie in [0,1]");
    if (max_epochs == 0) throw config_error("max_epochs must be positive");
    switch (variant) {
        case Variant::full_search:
            if (p_init != 1.0) throw config_error("full search requires p_init = 1");
            if (p_a != 0.0) throw config_error("full search requires p_a = 0");
            break;
        case Variant::randomized:
            if (p_init >= 1.0) throw config_error("randomized search requires p_init < 1");
            if (p_a != 0.0) throw config_error("randomized search requires p_a = 0");
            break;
        case Variant::bootstrapped:
            if (!(p_a > 0.0)) throw config_error("bootstrapped search requires p_a > 0");
            if (!(p_th < p_init))
                throw config_error("bootstrapped search requires p_th < p_init");
            break;
    }
}

}  // namespace csmds
