#include "csmds/coordsearch.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "csmds/errors.hpp"

namespace csmds {

RunConfig config_for_variant(Variant variant, std::size_t l, const VariantOverrides& o) {
    RunConfig c;
    c.variant = variant;
    c.l = l;
    if (o.r0) c.r0 = *o.r0;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.delta) c.delta = *o.delta;
    if (o.max_epochs) c.max_epochs = *o.max_epochs;
    if (o.seed) c.seed = *o.seed;
    switch (variant) {
        case Variant::full_search:
            // Probability matrix of ones, never updated.
            c.p_init = o.p_init.value_or(1.0);
            c.p_a = o.p_a.value_or(0.0);
            c.p_th = o.p_th.value_or(0.0);
            break;
        case Variant::randomized:
            c.p_init = o.p_init.value_or(0.7);
            c.p_a = o.p_a.value_or(0.0);
            c.p_th = o.p_th.value_or(0.0);
            break;
        case Variant::bootstrapped:
            c.p_init = o.p_init.value_or(0.7);
            c.p_a = o.p_a.value_or(0.05);
            c.p_th = o.p_th.value_or(0.2);
            break;
    }
    c.validate();
    return c;
}

std::vector<CandidateStep> search_coordinates(double radius, std::size_t i,
                                              const ProbabilityMatrix& p, Rng& rng) {
    if (!(radius > 0.0)) throw std::invalid_argument("search_coordinates: radius must be positive");
    if (i >= p.points()) throw std::invalid_argument("search_coordinates: point index out of range");
    const std::size_t l = p.dim();
    std::vector<CandidateStep> steps;
    steps.reserve(2 * l);
    for (std::size_t s = 0; s < l; ++s) {
        if (rng.bernoulli(p.at(i, p.column(s, +1)))) steps.push_back({s, +1, radius});
        if (rng.bernoulli(p.at(i, p.column(s, -1)))) steps.push_back({s, -1, radius});
    }
    return steps;
}

MoveOutcome optimal_move(const TargetMatrix& t, Embedding& emb, std::size_t i,
                         std::span<const CandidateStep> candidates, double current_stress,
                         bool verify_stress) {
    if (i >= emb.size()) throw std::invalid_argument("optimal_move: point index out of range");
    if (!std::isfinite(current_stress) || current_stress < 0.0)
        throw internal_error("optimal_move: cached stress is not a valid stress value");
    if (verify_stress) {
        const double fresh = raw_stress(t, emb.distances());
        if (std::abs(fresh - current_stress) > 1e-9 * std::max(1.0, fresh))
            throw internal_error("optimal_move: cached stress is stale");
    }

    MoveOutcome best;
    best.new_stress = current_stress;  // zero step
    DeltaStress best_delta;
    for (const CandidateStep& cand : candidates) {
        DeltaStress d = move_delta_stress_axis(t, emb, i, cand.dim,
                                               cand.sign > 0 ? cand.radius : -cand.radius,
                                               current_stress);
        ++best.evaluated;
        if (d.new_stress < best.new_stress) {  // strict: first minimum wins ties
            best.new_stress = d.new_stress;
            best.chosen = cand;
            best_delta = std::move(d);
        }
    }
    if (best.chosen) {
        std::vector<double> new_coords(emb.point(i).begin(), emb.point(i).end());
        new_coords[best.chosen->dim] +=
            (best.chosen->sign > 0 ? best.chosen->radius : -best.chosen->radius);
        emb.set_point(i, new_coords, best_delta.new_row);
    }
    return best;
}

void update_probabilities(ProbabilityMatrix& p, std::size_t i, const MoveOutcome& outcome,
                          double p_a, double p_th) {
    if (p_a == 0.0 || !outcome.chosen) return;
    const std::size_t winner = p.column(outcome.chosen->dim, outcome.chosen->sign);
    p.set(i, winner, std::min(p.at(i, winner) + 2.0 * p_a, 1.0));
    for (std::size_t col = 0; col < 2 * p.dim(); ++col)
        p.set(i, col, std::max(p.at(i, col) - p_a, p_th));
}

RunResult run_csmds(const TargetMatrix& t, const RunConfig& config, const RunHooks& hooks) {
    config.validate();
    const std::size_t n = t.size();
    if (n < 2) throw std::invalid_argument("run_csmds: need at least two points");

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t_start] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t_start)
            .count();
    };

    RunState state;
    state.rng = Rng(config.seed);
    Embedding emb = Embedding::random_uniform(n, config.l, state.rng);
    ProbabilityMatrix probs(n, config.l, config.p_init);
    state.stress = raw_stress(t, emb.distances());
    state.prev_stress = std::numeric_limits<double>::infinity();
    state.radius = config.r0;

    RunResult result{std::move(emb), {}, std::move(probs), false, state.stress, 0, state};
    const bool update_probs = config.p_a > 0.0;

    while (state.radius > config.delta && state.epoch < config.max_epochs) {
        // Halve when the previous epoch's relative improvement fell below epsilon.
        if (state.prev_stress - state.stress <= config.epsilon * state.stress) {
            state.radius *= 0.5;
            ++result.halvings;
        }
        const double epoch_start_stress = state.stress;
        for (std::size_t i = 0; i < n; ++i) {
            const auto candidates =
                search_coordinates(state.radius, i, result.probabilities, state.rng);
            const MoveOutcome outcome =
                optimal_move(t, result.embedding, i, candidates, state.stress);
            if (update_probs)
                update_probabilities(result.probabilities, i, outcome, config.p_a, config.p_th);
            state.stress = outcome.new_stress;
            state.evals += outcome.evaluated;
            if (hooks.on_move) hooks.on_move(i, outcome, state);
        }
        state.prev_stress = epoch_start_stress;
        result.trace.push_back(
            {state.epoch, state.stress, state.radius, state.evals, elapsed_ms()});
        if (hooks.on_epoch) hooks.on_epoch(state, result.embedding, result.probabilities);
        ++state.epoch;
    }

    result.converged = state.radius <= config.delta;
    result.final_state = state;
    return result;
}

}  // namespace csmds
