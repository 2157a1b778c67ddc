#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "latembed/optimizer.hpp"

using namespace latembed;

namespace {

Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

FieldSet fields_for(const std::shared_ptr<const Manifold>& m, double eps = 0.25,
                    std::vector<Region> regions = {}) {
    return FieldSet{ActivationField(m, eps), ReinforcementField(std::move(regions))};
}

bool same_positions(const std::vector<ContinuousPoint>& a,
                    const std::vector<ContinuousPoint>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

}  // namespace

TEST_CASE("initialization embeds every lattice point verbatim") {
    const Lattice lattice = generate_box_lattice(LatticePoint{0, 0, 1}, LatticePoint{1, 1, 1});
    const EmbeddingState st = initialize(lattice);
    REQUIRE(st.positions.size() == 4);
    CHECK(st.iteration == 0);
    for (std::size_t i = 0; i < lattice.size(); ++i) REQUIRE(st.positions[i] == embed(lattice[i]));
}

TEST_CASE("stationary points are skipped, not moved") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{0, 0, 0}, LatticePoint{2, 2, 0});
    const EmbeddingState st = initialize(lattice);  // already on the plane

    StepStats stats;
    const EmbeddingState next = step(st, *plane, fields, params, StepControl{}, &stats);
    CHECK(same_positions(st.positions, next.positions));
    CHECK(stats.skipped == 9);
    CHECK(stats.moved == 0);
    CHECK(stats.line_search_failures == 0);
    CHECK(next.iteration == 1);
}

TEST_CASE("one backtracking step on a single off-plane point") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    ObjectiveParams params;
    params.gamma = 0.0;  // pure alignment: f = z^2, gradient (0, 0, 2z)
    const Lattice lattice(std::vector<LatticePoint>{{0, 0, 1}});
    const EmbeddingState st = initialize(lattice);

    StepStats stats;
    std::vector<double> totals{1.0};
    const EmbeddingState next =
        step(st, *plane, fields, params, StepControl{}, &stats, 1, nullptr, &totals);
    // initial step 0.1 passes the Armijo test immediately: z = 1 - 0.1 * 2
    CHECK(next.positions[0][2] == 0.8);
    CHECK(stats.moved == 1);
    CHECK(totals[0] == 0.8 * 0.8);
}

TEST_CASE("accepted steps never increase a point objective") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{-1, -1, -1}, LatticePoint{1, 1, 1});

    EmbeddingState st = initialize(lattice);
    st.positions[13][0] += 1e-6;  // origin sits on the medial axis

    std::vector<double> before(lattice.size());
    const auto parts = per_point_objectives(lattice, st, *sphere, fields, params);
    for (std::size_t i = 0; i < parts.size(); ++i) before[i] = parts[i].total;
    std::vector<double> totals = before;

    StepControl control;
    control.skip_grad_below = 1e-9;
    StepStats stats;
    const EmbeddingState next =
        step(st, *sphere, fields, params, control, &stats, 1, nullptr, &totals);
    CHECK(stats.moved > 0);
    for (std::size_t i = 0; i < totals.size(); ++i) REQUIRE(totals[i] <= before[i]);

    // reported totals match a fresh evaluation of the new state
    const auto after = per_point_objectives(lattice, next, *sphere, fields, params);
    for (std::size_t i = 0; i < after.size(); ++i) REQUIRE(after[i].total == totals[i]);
}

TEST_CASE("hopeless step sizes fail the line search and leave points in place") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;
    const Lattice lattice(std::vector<LatticePoint>{{2, 0, 0}});
    const EmbeddingState st = initialize(lattice);

    StepControl control;
    control.initial_step = 1e9;
    control.max_halvings = 3;
    StepStats stats;
    const EmbeddingState next = step(st, *sphere, fields, params, control, &stats);
    CHECK(same_positions(st.positions, next.positions));
    CHECK(stats.line_search_failures == 1);
    CHECK(stats.moved == 0);

    OptimizerOptions options;
    options.step = control;
    const auto [final_state, report] = optimize(lattice, *sphere, fields, params, options);
    CHECK(report.termination == Termination::kLineSearchFailure);
    CHECK(to_string(report.termination) == "line-search-failure");
    CHECK(report.line_search_failures >= 1);
    CHECK(report.iterations == 1);
}

TEST_CASE("termination labels") {
    CHECK(to_string(Termination::kConverged) == "converged");
    CHECK(to_string(Termination::kMaxIters) == "max-iters");
    CHECK(to_string(Termination::kLineSearchFailure) == "line-search-failure");
}

TEST_CASE("a lifted plane grid settles back onto the plane") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{0, 0, 1}, LatticePoint{4, 4, 1});

    const auto [state, report] = optimize(lattice, *plane, fields, params);
    CHECK(report.termination == Termination::kConverged);
    CHECK(report.iterations <= 200);
    for (const auto& z : state.positions) REQUIRE(std::abs(z[2]) <= 1e-6);
    CHECK(report.final_breakdown.total <= 1e-10);
    CHECK(report.final_gradient_sup_norm <= 1e-6);

    // x and y coordinates never had a reason to move
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        REQUIRE(state.positions[i][0] == static_cast<double>(lattice[i][0]));
        REQUIRE(state.positions[i][1] == static_cast<double>(lattice[i][1]));
    }
}

TEST_CASE("objective trace is recorded and never increases") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{-1, -1, -1}, LatticePoint{1, 1, 1});

    const auto [state, report] = optimize(lattice, *sphere, fields, params);
    REQUIRE(report.objective_trace.size() == static_cast<std::size_t>(report.iterations) + 1);
    for (std::size_t i = 1; i < report.objective_trace.size(); ++i)
        REQUIRE(report.objective_trace[i] <= report.objective_trace[i - 1]);
    CHECK(report.objective_trace.front() > report.objective_trace.back());
}

TEST_CASE("a cube of lattice points collapses onto the unit sphere") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{-1, -1, -1}, LatticePoint{1, 1, 1});

    const auto [state, report] = optimize(lattice, *sphere, fields, params);
    CHECK(report.termination == Termination::kConverged);
    CHECK(report.medial_axis_nudges == 1);  // the origin
    for (const auto& z : state.positions) REQUIRE(std::abs(z.norm() - 1.0) <= 1e-4);
    CHECK(report.min_pairwise_distance < 1.0);
    CHECK(report.point_breakdowns.size() == lattice.size());

    // reported minimum pairwise distance matches the final positions
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.positions.size(); ++i)
        for (std::size_t j = i + 1; j < state.positions.size(); ++j)
            best = std::min(best, (state.positions[i] - state.positions[j]).norm());
    CHECK(report.min_pairwise_distance == best);
}

TEST_CASE("repeat runs and worker counts change nothing") {
    const auto sphere = make_sphere(v3(0.1, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{-1, -1, -1}, LatticePoint{1, 1, 1});

    OptimizerOptions options;
    const auto [s1, r1] = optimize(lattice, *sphere, fields, params, options);
    const auto [s2, r2] = optimize(lattice, *sphere, fields, params, options);
    CHECK(same_positions(s1.positions, s2.positions));
    CHECK(r1.objective_trace == r2.objective_trace);

    options.threads = 3;
    const auto [s3, r3] = optimize(lattice, *sphere, fields, params, options);
    CHECK(same_positions(s1.positions, s3.positions));
    CHECK(r1.objective_trace == r3.objective_trace);

    // the seed is echoed only; it drives no randomness
    options.threads = 1;
    options.seed = 42;
    const auto [s4, r4] = optimize(lattice, *sphere, fields, params, options);
    CHECK(same_positions(s1.positions, s4.positions));
}

TEST_CASE("lattice construction order cannot leak into the result") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const FieldSet fields = fields_for(sphere);
    const ObjectiveParams params;

    std::vector<LatticePoint> pts;
    for (std::int64_t x = -1; x <= 1; ++x)
        for (std::int64_t y = -1; y <= 1; ++y)
            for (std::int64_t z = -1; z <= 1; ++z) pts.push_back(LatticePoint{x, y, z});
    std::vector<LatticePoint> shuffled = pts;
    std::mt19937 rng(123u);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    const Lattice a(pts);
    const Lattice b(shuffled);
    REQUIRE(a.points() == b.points());
    const auto [sa, ra] = optimize(a, *sphere, fields, params);
    const auto [sb, rb] = optimize(b, *sphere, fields, params);
    CHECK(same_positions(sa.positions, sb.positions));
    CHECK(ra.objective_trace == rb.objective_trace);
}

TEST_CASE("constant reinforcement does not move the minimizer") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    std::vector<Region> everywhere;
    everywhere.push_back(Ball{v3(0, 0, 0), 100.0});
    const FieldSet fields = fields_for(sphere, 0.25, everywhere);
    const Lattice lattice(std::vector<LatticePoint>{
        {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 1, 1}});

    ObjectiveParams off;
    off.lambda = 0.0;
    ObjectiveParams on;
    on.lambda = 1.0;
    const auto [s_off, r_off] = optimize(lattice, *sphere, fields, off);
    const auto [s_on, r_on] = optimize(lattice, *sphere, fields, on);
    REQUIRE(r_off.termination == Termination::kConverged);
    REQUIRE(r_on.termination == Termination::kConverged);
    for (std::size_t i = 0; i < s_off.positions.size(); ++i)
        REQUIRE((s_off.positions[i] - s_on.positions[i]).norm() <= 1e-8);
    // the objective itself shifts by exactly lambda per point
    CHECK(r_on.final_breakdown.reinforcement == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("unequal alignment weights are flagged as approximate") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    const Lattice lattice(std::vector<LatticePoint>{{0, 0, 1}});

    ObjectiveParams skewed;
    skewed.alpha = 1.0;
    skewed.beta = 2.0;
    const auto [s1, r1] = optimize(lattice, *plane, fields, skewed);
    CHECK(r1.gradient_is_approximate);
    CHECK(r1.termination == Termination::kConverged);
    REQUIRE(std::abs(s1.positions[0][2]) <= 1e-6);

    const ObjectiveParams equal;
    const auto [s2, r2] = optimize(lattice, *plane, fields, equal);
    CHECK_FALSE(r2.gradient_is_approximate);
}

TEST_CASE("optimizer option validation") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    const ObjectiveParams params;
    const Lattice lattice(std::vector<LatticePoint>{{0, 0, 0}});
    OptimizerOptions bad;
    bad.max_iters = -1;
    CHECK_THROWS_AS(optimize(lattice, *plane, fields, params, bad), Error);
    bad = OptimizerOptions{};
    bad.grad_tol = -1.0;
    CHECK_THROWS_AS(optimize(lattice, *plane, fields, params, bad), Error);
}

TEST_CASE("zero iterations reports the initial state honestly") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const FieldSet fields = fields_for(plane);
    const ObjectiveParams params;
    const Lattice lattice = generate_box_lattice(LatticePoint{0, 0, 1}, LatticePoint{1, 1, 1});

    OptimizerOptions options;
    options.max_iters = 0;
    const auto [state, report] = optimize(lattice, *plane, fields, params, options);
    CHECK(report.termination == Termination::kMaxIters);
    CHECK(report.iterations == 0);
    REQUIRE(report.objective_trace.size() == 1);
    CHECK(same_positions(state.positions, initialize(lattice).positions));
    CHECK(report.final_breakdown.total ==
          doctest::Approx(report.objective_trace[0]).epsilon(1e-12));
}
