#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "csmds/stress.hpp"
#include "csmds/types.hpp"

namespace csmds {

/// One signed axis-aligned candidate step of length `radius` along `dim`.
struct CandidateStep {
    std::size_t dim = 0;
    int sign = +1;
    double radius = 0.0;
};

/// Result of one greedy point move. `chosen` empty means the zero step (no
/// candidate strictly improved).
struct MoveOutcome {
    std::optional<CandidateStep> chosen;
    double new_stress = 0.0;
    std::size_t evaluated = 0;
};

struct VariantOverrides {
    std::optional<double> p_init;
    std::optional<double> p_a;
    std::optional<double> p_th;
    std::optional<double> r0;
    std::optional<double> epsilon;
    std::optional<double> delta;
    std::optional<std::size_t> max_epochs;
    std::optional<std::uint64_t> seed;
};

/// Builds a validated RunConfig for a variant, rejecting contradictory
/// overrides (e.g. full search with p_init != 1).
RunConfig config_for_variant(Variant variant, std::size_t l,
                             const VariantOverrides& overrides = {});

/// Draws the candidate set for point i: for each axis s < L, the positive
/// direction with probability p[i][s] and the negative one with p[i][s+L].
/// Exactly 2L Bernoulli draws in fixed order (s ascending, + before -).
std::vector<CandidateStep> search_coordinates(double radius, std::size_t i,
                                              const ProbabilityMatrix& p, Rng& rng);

/// Evaluates every candidate and applies the strict argmin if one improves on
/// current_stress; otherwise leaves the embedding untouched (zero step).
/// Ties at the minimum keep the earliest candidate in iteration order.
/// current_stress must equal raw_stress(t, emb.distances()); pass
/// verify_stress=true to check that (O(N^2)) and throw internal_error when
/// stale.
MoveOutcome optimal_move(const TargetMatrix& t, Embedding& emb, std::size_t i,
                         std::span<const CandidateStep> candidates, double current_stress,
                         bool verify_stress = false);

/// Bootstrap update of row i: winner +2*p_a capped at 1, then every signed
/// coordinate -p_a floored at p_th. No-op on the zero step or when p_a = 0.
void update_probabilities(ProbabilityMatrix& p, std::size_t i, const MoveOutcome& outcome,
                          double p_a, double p_th);

/// Optional instrumentation for tests and tracing; both callbacks may be
/// empty. on_move fires after every point move, on_epoch after each epoch
/// with the state as of that epoch's end.
struct RunHooks {
    std::function<void(std::size_t point, const MoveOutcome&, const RunState&)> on_move;
    std::function<void(const RunState&, const Embedding&, const ProbabilityMatrix&)> on_epoch;
};

struct RunResult {
    Embedding embedding;
    std::vector<TraceRecord> trace;
    ProbabilityMatrix probabilities;
    bool converged = false;       // false when max_epochs was hit first
    double initial_stress = 0.0;  // stress of the random initialization
    std::size_t halvings = 0;
    RunState final_state;
};

/// The radius-halving epoch loop: per epoch, every point in ascending order
/// gets one greedy move over its sampled candidate set; the radius halves at
/// the top of an epoch when the previous epoch's relative improvement fell
/// below epsilon, and the run stops once it drops to delta.
RunResult run_csmds(const TargetMatrix& t, const RunConfig& config, const RunHooks& hooks = {});

}  // namespace csmds
