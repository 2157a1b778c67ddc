#ifndef LATEMBED_OPTIMIZER_HPP
#define LATEMBED_OPTIMIZER_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "latembed/embedding_state.hpp"
#include "latembed/objective.hpp"

namespace latembed {

// Backtracking line-search parameters (Armijo rule).
struct StepControl {
    double initial_step = 0.1;
    double shrink = 0.5;
    double armijo_c = 1e-4;
    int max_halvings = 40;
    // Points whose gradient sup-norm is at or below this hold still; the
    // driver sets it to grad_tol so stationary points are not counted as
    // line-search failures.
    double skip_grad_below = 0.0;
};

struct StepStats {
    int moved = 0;
    int skipped = 0;
    int line_search_failures = 0;
};

enum class Termination { kConverged, kMaxIters, kLineSearchFailure };

std::string to_string(Termination t);

struct OptimizationReport {
    // Total objective before iterating, then after every iteration.
    // Accepted steps never increase it; comparisons on stored values are exact.
    std::vector<double> objective_trace;
    double final_gradient_sup_norm = 0.0;
    int iterations = 0;
    Termination termination = Termination::kConverged;
    std::vector<ObjectiveBreakdown> point_breakdowns;  // lattice enumeration order
    ObjectiveBreakdown final_breakdown;
    double min_pairwise_distance = std::numeric_limits<double>::infinity();
    int medial_axis_nudges = 0;
    int line_search_failures = 0;  // cumulative over all iterations
    // Set when alpha != beta: the alignment gradient drops the footpoint
    // sensitivity, so it is a controlled approximation in that regime.
    bool gradient_is_approximate = false;
};

struct OptimizerOptions {
    double grad_tol = 1e-6;
    int max_iters = 10000;
    StepControl step;
    std::uint64_t seed = 0;  // echoed in outputs; the algorithm draws no randomness
    int threads = 1;
};

// Identity embedding zeta(q) = embed(q), iteration 0.
EmbeddingState initialize(const Lattice& lattice);

/* One sweep of per-point gradient descent with Armijo backtracking.
   Points whose line search fails keep their position. With `gradients`
   the per-point gradients are taken as given instead of recomputed;
   `point_totals` is read for the current per-point objectives and updated
   in place for points that moved. */
EmbeddingState step(const EmbeddingState& state, const Manifold& m, const FieldSet& fields,
                    const ObjectiveParams& params, const StepControl& control,
                    StepStats* stats = nullptr, int threads = 1,
                    const std::vector<Eigen::VectorXd>* gradients = nullptr,
                    std::vector<double>* point_totals = nullptr);

// Minimize the total objective from the identity embedding. Initial
// positions with an ambiguous or singular footpoint are nudged by 1e-6
// along the first coordinate axis before iterating. Non-convergence is a
// report outcome, not an exception.
std::pair<EmbeddingState, OptimizationReport> optimize(const Lattice& lattice,
                                                       const Manifold& m,
                                                       const FieldSet& fields,
                                                       const ObjectiveParams& params,
                                                       const OptimizerOptions& options = {});

}  // namespace latembed

#endif
