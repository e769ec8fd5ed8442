#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "csmds/coordsearch.hpp"
#include "csmds/errors.hpp"
#include "csmds/stress.hpp"

using namespace csmds;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

TargetMatrix random_target(std::size_t n, Rng& rng) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 10.0 * rng.uniform();
    return TargetMatrix::validate(std::move(m));
}

TargetMatrix distances_of_random_points(std::size_t n, std::size_t l, Rng& rng) {
    Matrix coords(n, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < l; ++j) coords(i, j) = 10.0 * (rng.uniform() - 0.5);
    return TargetMatrix::validate(compute_distance_matrix(coords));
}

}  // namespace

TEST_CASE("config_for_variant fills the documented defaults") {
    const RunConfig fs = config_for_variant(Variant::full_search, 2);
    CHECK(fs.p_init == 1.0);
    CHECK(fs.p_a == 0.0);
    CHECK(fs.r0 == 5.0);
    CHECK(fs.epsilon == 1e-4);
    CHECK(fs.delta == 1e-3);

    VariantOverrides rn_over;
    rn_over.p_init = 0.7;
    const RunConfig rn = config_for_variant(Variant::randomized, 10, rn_over);
    CHECK(rn.p_init == 0.7);
    CHECK(rn.p_a == 0.0);

    VariantOverrides bs_over;
    bs_over.p_init = 0.4;
    bs_over.p_a = 0.05;
    bs_over.p_th = 0.2;
    const RunConfig bs = config_for_variant(Variant::bootstrapped, 10, bs_over);
    CHECK(bs.p_init == 0.4);
    CHECK(bs.p_a == 0.05);
    CHECK(bs.p_th == 0.2);
}

TEST_CASE("config_for_variant rejects contradictory overrides") {
    VariantOverrides bad;
    bad.p_init = 0.5;
    CHECK_THROWS_AS(config_for_variant(Variant::full_search, 2, bad), config_error);

    VariantOverrides bad_rn;
    bad_rn.p_a = 0.1;
    CHECK_THROWS_AS(config_for_variant(Variant::randomized, 2, bad_rn), config_error);

    VariantOverrides bad_bs;
    bad_bs.p_init = 0.2;
    bad_bs.p_th = 0.5;
    CHECK_THROWS_AS(config_for_variant(Variant::bootstrapped, 2, bad_bs), config_error);
}

TEST_CASE("search_coordinates with all-ones probabilities lists every signed axis in order") {
    const ProbabilityMatrix p(3, 2, 1.0);
    Rng rng(1);
    const auto steps = search_coordinates(0.5, 1, p, rng);
    REQUIRE(steps.size() == 4);
    CHECK(steps[0].dim == 0);
    CHECK(steps[0].sign == +1);
    CHECK(steps[1].dim == 0);
    CHECK(steps[1].sign == -1);
    CHECK(steps[2].dim == 1);
    CHECK(steps[2].sign == +1);
    CHECK(steps[3].dim == 1);
    CHECK(steps[3].sign == -1);
    for (const auto& s : steps) CHECK(s.radius == 0.5);
}

TEST_CASE("search_coordinates draws nothing at probability zero") {
    const ProbabilityMatrix p(2, 3, 0.0);
    Rng rng(2);
    CHECK(search_coordinates(1.0, 0, p, rng).empty());
}

TEST_CASE("search_coordinates mean candidate count matches the binomial expectation") {
    const ProbabilityMatrix p(1, 10, 0.2);
    Rng rng(42);
    double total = 0.0;
    for (int trial = 0; trial < 10000; ++trial)
        total += double(search_coordinates(1.0, 0, p, rng).size());
    const double mean = total / 10000.0;  // expectation 2 * 10 * 0.2 = 4
    CHECK(mean > 3.8);
    CHECK(mean < 4.2);
}

TEST_CASE("search_coordinates is deterministic under a fixed seed") {
    ProbabilityMatrix p(2, 4, 0.5);
    p.set(0, 2, 0.9);
    p.set(0, 5, 0.1);
    Rng a(7), b(7);
    const auto s1 = search_coordinates(1.0, 0, p, a);
    const auto s2 = search_coordinates(1.0, 0, p, b);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].dim == s2[i].dim);
        CHECK(s1[i].sign == s2[i].sign);
    }
}

TEST_CASE("search_coordinates rejects a non-positive radius") {
    const ProbabilityMatrix p(1, 1, 1.0);
    Rng rng(1);
    CHECK_THROWS_AS(search_coordinates(0.0, 0, p, rng), std::invalid_argument);
}

TEST_CASE("optimal_move with no candidates is the zero step") {
    Rng rng(3);
    const TargetMatrix t = random_target(4, rng);
    Embedding emb(from_rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
    const double e = raw_stress(t, emb.distances());
    const Matrix before = emb.coords();
    const MoveOutcome out = optimal_move(t, emb, 0, {}, e, true);
    CHECK_FALSE(out.chosen.has_value());
    CHECK(out.new_stress == e);
    CHECK(out.evaluated == 0);
    CHECK(emb.coords() == before);
}

TEST_CASE("optimal_move picks the stress-minimizing signed step") {
    const TargetMatrix t = TargetMatrix::validate(from_rows({{0, 2}, {2, 0}}));
    Embedding emb(from_rows({{0.0}, {1.0}}));
    const double e = raw_stress(t, emb.distances());
    const std::vector<CandidateStep> candidates{{0, +1, 1.0}, {0, -1, 1.0}};
    const MoveOutcome out = optimal_move(t, emb, 0, candidates, e, true);
    REQUIRE(out.chosen.has_value());
    CHECK(out.chosen->sign == -1);
    CHECK(out.new_stress == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(out.evaluated == 2);
    CHECK(emb.point(0)[0] == -1.0);
    emb.check_distance_cache();
}

TEST_CASE("optimal_move keeps the zero step when no candidate strictly improves") {
    // Points already at the exact target distance: any +-1 step strictly worsens.
    const TargetMatrix t = TargetMatrix::validate(from_rows({{0, 1}, {1, 0}}));
    Embedding emb(from_rows({{0.0}, {1.0}}));
    const double e = raw_stress(t, emb.distances());
    const std::vector<CandidateStep> candidates{{0, +1, 1.0}, {0, -1, 1.0}};
    const MoveOutcome out = optimal_move(t, emb, 0, candidates, e, true);
    CHECK_FALSE(out.chosen.has_value());
    CHECK(out.new_stress == e);
    CHECK(out.evaluated == 2);
}

TEST_CASE("optimal_move breaks exact ties toward the first candidate in order") {
    // Point 0 sits symmetrically between points on the x and y axes; stepping
    // +x or +y trades the same two distance terms, so both candidates improve
    // the stress by bitwise-identical amounts.
    const TargetMatrix t = TargetMatrix::validate(from_rows({{0, 1, 1}, {1, 0, 3}, {1, 3, 0}}));
    Embedding emb(from_rows({{0, 0}, {2, 0}, {0, 2}}));
    const double e = raw_stress(t, emb.distances());
    const std::vector<CandidateStep> candidates{{0, +1, 0.5}, {1, +1, 0.5}};
    const DeltaStress along_x = move_delta_stress_axis(t, emb, 0, 0, +0.5, e);
    const DeltaStress along_y = move_delta_stress_axis(t, emb, 0, 1, +0.5, e);
    REQUIRE(along_x.new_stress == along_y.new_stress);  // exact float tie by symmetry
    REQUIRE(along_x.new_stress < e);
    const MoveOutcome out = optimal_move(t, emb, 0, candidates, e, true);
    REQUIRE(out.chosen.has_value());
    CHECK(out.chosen->dim == 0);
}

TEST_CASE("optimal_move verifies the cached stress when asked") {
    Rng rng(4);
    const TargetMatrix t = random_target(3, rng);
    Embedding emb(from_rows({{0, 0}, {1, 0}, {0, 1}}));
    const std::vector<CandidateStep> candidates{{0, +1, 1.0}};
    CHECK_THROWS_AS(optimal_move(t, emb, 0, candidates, 1e9, true), internal_error);
}

TEST_CASE("update_probabilities applies the winner boost then the global decay") {
    ProbabilityMatrix p(2, 3, 0.7);
    MoveOutcome out;
    out.chosen = CandidateStep{1, +1, 0.5};
    update_probabilities(p, 0, out, 0.05, 0.2);
    CHECK(p.at(0, 1) == doctest::Approx(0.75).epsilon(1e-12));  // min(0.8,1) - 0.05
    for (std::size_t col = 0; col < 6; ++col)
        if (col != 1) CHECK(p.at(0, col) == doctest::Approx(0.65).epsilon(1e-12));
    for (std::size_t col = 0; col < 6; ++col) CHECK(p.at(1, col) == 0.7);  // other rows untouched
}

TEST_CASE("update_probabilities clamps at the cap and the floor") {
    ProbabilityMatrix p(1, 1, 0.5);
    p.set(0, 0, 0.98);  // winner near the cap
    p.set(0, 1, 0.21);  // loser near the floor
    MoveOutcome out;
    out.chosen = CandidateStep{0, +1, 1.0};
    update_probabilities(p, 0, out, 0.05, 0.2);
    CHECK(p.at(0, 0) == doctest::Approx(0.95).epsilon(1e-12));  // min(1.08,1)=1, then -0.05
    CHECK(p.at(0, 1) == doctest::Approx(0.2).epsilon(1e-12));   // max(0.16,0.2)
}

TEST_CASE("update_probabilities is a no-op on zero steps and when p_a is zero") {
    ProbabilityMatrix p(1, 2, 0.5);
    const ProbabilityMatrix before = p;
    update_probabilities(p, 0, MoveOutcome{}, 0.05, 0.2);  // zero step
    CHECK(p == before);
    MoveOutcome chosen;
    chosen.chosen = CandidateStep{0, +1, 1.0};
    update_probabilities(p, 0, chosen, 0.0, 0.2);  // FS/RN
    CHECK(p == before);
}

TEST_CASE("run_csmds solves the two-point problem") {
    const TargetMatrix t = TargetMatrix::validate(from_rows({{0, 2}, {2, 0}}));
    const RunConfig config = config_for_variant(Variant::full_search, 1);
    const RunResult result = run_csmds(t, config);
    CHECK(result.converged);
    CHECK(result.final_state.stress < 1e-3);
    const double gap = std::abs(result.embedding.coords()(0, 0) - result.embedding.coords()(1, 0));
    CHECK(gap == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("run_csmds trace stress is non-increasing for every variant") {
    Rng seed_rng(11);
    for (Variant v : {Variant::full_search, Variant::randomized, Variant::bootstrapped}) {
        Rng data_rng(21);
        const TargetMatrix t = random_target(12, data_rng);
        VariantOverrides o;
        o.seed = seed_rng.next_u64();
        o.max_epochs = 120;
        if (v != Variant::full_search) o.p_init = 0.7;
        if (v == Variant::bootstrapped) {
            o.p_a = 0.05;
            o.p_th = 0.2;
        }
        const RunResult r = run_csmds(t, config_for_variant(v, 2, o));
        REQUIRE(!r.trace.empty());
        CHECK(r.trace.front().stress <= r.initial_stress);
        for (std::size_t k = 1; k < r.trace.size(); ++k)
            CHECK(r.trace[k].stress <= r.trace[k - 1].stress);
    }
}

TEST_CASE("run_csmds self-reconstruction reaches a low stress1") {
    Rng rng(31);
    const TargetMatrix t = distances_of_random_points(50, 3, rng);
    VariantOverrides o;
    o.seed = 5;
    const RunResult r = run_csmds(t, config_for_variant(Variant::full_search, 3, o));
    CHECK(r.converged);
    CHECK(stress1(t, r.embedding.distances()) < 0.05);
}

TEST_CASE("run_csmds radius follows the halving schedule") {
    Rng rng(41);
    const TargetMatrix t = random_target(10, rng);
    const RunConfig config = config_for_variant(Variant::full_search, 2);
    const RunResult r = run_csmds(t, config);
    CHECK(r.converged);
    for (const TraceRecord& rec : r.trace) {
        // radius = r0 * 2^-h exactly (halving is a float division by two)
        const double h = std::log2(config.r0 / rec.radius);
        CHECK(h == doctest::Approx(std::round(h)).epsilon(1e-12));
    }
    CHECK(r.halvings <= std::size_t(std::ceil(std::log2(config.r0 / config.delta))));
    CHECK(r.trace.back().radius <= config.delta);
}

TEST_CASE("run_csmds flags non-convergence at the epoch cap") {
    Rng rng(51);
    const TargetMatrix t = random_target(15, rng);
    VariantOverrides o;
    o.max_epochs = 3;
    const RunResult r = run_csmds(t, config_for_variant(Variant::full_search, 2, o));
    CHECK_FALSE(r.converged);
    CHECK(r.trace.size() == 3);
}

TEST_CASE("run_csmds is bitwise deterministic under a fixed seed") {
    Rng rng(61);
    const TargetMatrix t = random_target(10, rng);
    VariantOverrides o;
    o.p_init = 0.4;
    o.p_a = 0.05;
    o.p_th = 0.2;
    o.seed = 99;
    o.max_epochs = 50;
    const RunConfig config = config_for_variant(Variant::bootstrapped, 2, o);
    const RunResult a = run_csmds(t, config);
    const RunResult b = run_csmds(t, config);
    CHECK(a.embedding.coords() == b.embedding.coords());
    CHECK(a.probabilities == b.probabilities);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        CHECK(a.trace[k].stress == b.trace[k].stress);
        CHECK(a.trace[k].evals == b.trace[k].evals);
    }
}

TEST_CASE("run_csmds keeps FS and RN probabilities bitwise constant") {
    Rng rng(71);
    const TargetMatrix t = random_target(8, rng);
    for (Variant v : {Variant::full_search, Variant::randomized}) {
        VariantOverrides o;
        o.max_epochs = 40;
        if (v == Variant::randomized) o.p_init = 0.5;
        const RunConfig config = config_for_variant(v, 2, o);
        const RunResult r = run_csmds(t, config);
        const ProbabilityMatrix expect(t.size(), 2, config.p_init);
        CHECK(r.probabilities == expect);
    }
}

TEST_CASE("run_csmds hooks observe every point move and epoch") {
    Rng rng(81);
    const TargetMatrix t = random_target(6, rng);
    VariantOverrides o;
    o.max_epochs = 10;
    std::size_t moves = 0, epochs = 0;
    double last_stress = std::numeric_limits<double>::infinity();
    bool monotone = true;
    RunHooks hooks;
    hooks.on_move = [&](std::size_t, const MoveOutcome& out, const RunState&) {
        ++moves;
        if (out.new_stress > last_stress + 1e-12) monotone = false;
        last_stress = out.new_stress;
    };
    hooks.on_epoch = [&](const RunState&, const Embedding&, const ProbabilityMatrix&) {
        ++epochs;
    };
    const RunResult r = run_csmds(t, config_for_variant(Variant::full_search, 2, o), hooks);
    CHECK(epochs == r.trace.size());
    CHECK(moves == epochs * t.size());
    CHECK(monotone);
}

TEST_CASE("run_csmds rejects degenerate inputs") {
    const TargetMatrix t = TargetMatrix::validate(Matrix(1, 1));
    CHECK_THROWS_AS(run_csmds(t, config_for_variant(Variant::full_search, 1)),
                    std::invalid_argument);
}
