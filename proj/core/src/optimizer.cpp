#include "latembed/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "latembed/parallel.hpp"

namespace latembed {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::kConverged: return "converged";
        case Termination::kMaxIters: return "max-iters";
        case Termination::kLineSearchFailure: return "line-search-failure";
    }
    return "unknown";
}

EmbeddingState initialize(const Lattice& lattice) {
    EmbeddingState state;
    state.lattice = lattice;
    state.positions.reserve(lattice.size());
    for (const LatticePoint& q : lattice) state.positions.push_back(embed(q));
    state.iteration = 0;
    return state;
}

EmbeddingState step(const EmbeddingState& state, const Manifold& m, const FieldSet& fields,
                    const ObjectiveParams& params, const StepControl& control,
                    StepStats* stats, int threads,
                    const std::vector<Eigen::VectorXd>* gradients,
                    std::vector<double>* point_totals) {
    params.validate();
    state.validate();
    const Lattice& lattice = state.lattice;
    if (gradients && gradients->size() != lattice.size())
        throw Error("step: gradient array does not match the lattice");
    if (point_totals && point_totals->size() != lattice.size())
        throw Error("step: point-total array does not match the lattice");

    EmbeddingState next = state;
    std::vector<std::uint8_t> moved(lattice.size(), 0), skipped(lattice.size(), 0),
        failed(lattice.size(), 0);

    parallel_for(lattice.size(), threads, [&](std::size_t i) {
        const ContinuousPoint& pos = state.positions[i];
        const Eigen::VectorXd g =
            gradients ? (*gradients)[i] : point_gradient(m, fields, pos, params);
        const double g_sup = g.size() ? g.cwiseAbs().maxCoeff() : 0.0;
        if (g_sup <= control.skip_grad_below) {
            skipped[i] = 1;
            return;
        }

        const ContinuousPoint anchor = embed(lattice[i]);
        const double f0 = point_totals
                              ? (*point_totals)[i]
                              : point_objective(m, fields, anchor, pos, params).total;
        const double g_sq = g.squaredNorm();

        double s = control.initial_step;
        for (int halvings = 0; halvings <= control.max_halvings; ++halvings) {
            const ContinuousPoint trial = pos - s * g;
            double f;
            try {
                f = point_objective(m, fields, anchor, trial, params).total;
            } catch (const Error&) {
                // Trial left the valid neighborhood; treat as a rejection.
                s *= control.shrink;
                continue;
            }
            if (f <= f0 - control.armijo_c * s * g_sq && f < f0) {
                next.positions[i] = trial;
                if (point_totals) (*point_totals)[i] = f;
                moved[i] = 1;
                return;
            }
            s *= control.shrink;
        }
        failed[i] = 1;
    });

    if (stats) {
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            stats->moved += moved[i];
            stats->skipped += skipped[i];
            stats->line_search_failures += failed[i];
        }
    }
    ++next.iteration;
    return next;
}

namespace {

double min_pairwise_distance(const std::vector<ContinuousPoint>& positions) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            best = std::min(best, (positions[i] - positions[j]).norm());
    return best;
}

}  // namespace

std::pair<EmbeddingState, OptimizationReport> optimize(const Lattice& lattice,
                                                       const Manifold& m,
                                                       const FieldSet& fields,
                                                       const ObjectiveParams& params,
                                                       const OptimizerOptions& options) {
    params.validate();
    if (options.max_iters < 0) throw Error("optimize: max_iters must be nonnegative");
    if (!(options.grad_tol >= 0.0)) throw Error("optimize: grad_tol must be nonnegative");

    EmbeddingState state = initialize(lattice);
    OptimizationReport report;
    report.gradient_is_approximate = params.alpha != params.beta;

    // Initial positions on the medial axis have no usable footpoint; move
    // them deterministically off it before iterating.
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        bool nudge = false;
        try {
            nudge = m.project(state.positions[i]).ambiguous;
        } catch (const SingularGradient&) {
            nudge = true;
        }
        if (nudge) {
            state.positions[i][0] += 1e-6;
            ++report.medial_axis_nudges;
        }
    }

    std::vector<ObjectiveBreakdown> parts =
        per_point_objectives(lattice, state, m, fields, params, options.threads);
    std::vector<double> totals(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) totals[i] = parts[i].total;
    report.objective_trace.push_back(pairwise_sum(totals));

    StepControl control = options.step;
    control.skip_grad_below = std::max(control.skip_grad_below, options.grad_tol);

    double sup = 0.0;
    Termination termination = Termination::kMaxIters;
    while (true) {
        const std::vector<Eigen::VectorXd> grads =
            objective_gradient(lattice, state, m, fields, params, options.threads);
        sup = 0.0;
        for (const Eigen::VectorXd& g : grads)
            if (g.size()) sup = std::max(sup, g.cwiseAbs().maxCoeff());

        if (sup <= options.grad_tol) {
            termination = Termination::kConverged;
            break;
        }
        if (report.iterations >= options.max_iters) {
            termination = Termination::kMaxIters;
            break;
        }

        StepStats stats;
        state = step(state, m, fields, params, control, &stats, options.threads, &grads,
                     &totals);
        ++report.iterations;
        report.objective_trace.push_back(pairwise_sum(totals));
        report.line_search_failures += stats.line_search_failures;

        if (stats.moved == 0) {
            // Every active point is stuck; the gradient cannot shrink further.
            termination = Termination::kLineSearchFailure;
            break;
        }
    }

    report.termination = termination;
    report.final_gradient_sup_norm = sup;
    report.point_breakdowns =
        per_point_objectives(lattice, state, m, fields, params, options.threads);
    report.final_breakdown = aggregate_breakdowns(report.point_breakdowns);
    report.min_pairwise_distance = min_pairwise_distance(state.positions);
    return {std::move(state), std::move(report)};
}

}  // namespace latembed
