#ifndef LATEMBED_OBJECTIVE_HPP
#define LATEMBED_OBJECTIVE_HPP

#include <vector>

#include <Eigen/Core>

#include "latembed/embedding_state.hpp"
#include "latembed/fields.hpp"
#include "latembed/lattice.hpp"
#include "latembed/manifold.hpp"

namespace latembed {

// Weights of the objective terms. The activation width lives in the
// ActivationField, not here.
struct ObjectiveParams {
    double alpha = 1.0;    // tangential alignment weight
    double beta = 1.0;     // normal alignment weight
    double lambda = 0.0;   // reinforcement weight
    double gamma = 1.0;    // activation-penalty weight
    double kappa_w = 0.0;  // curvature-penalty weight, off by default

    void validate() const;
};

struct ObjectiveBreakdown {
    double alignment = 0.0;
    double reinforcement = 0.0;
    double activation_penalty = 0.0;
    double curvature_penalty = 0.0;
    double total = 0.0;
};

// alpha ||(q - p)_T||^2 + beta ||(q - p)_N||^2, split taken at p (p on M).
double alignment_metric(const Manifold& m, const ContinuousPoint& p, const ContinuousPoint& q,
                        const ObjectiveParams& params);

/* Objective contribution of one lattice point with embedded position
   zeta_q. The footpoint p = closest_point(zeta_q) is computed once and
   shared by all terms:
     alignment          alpha ||(zeta_q - p)_T||^2 + beta ||(zeta_q - p)_N||^2
     reinforcement      lambda mu(zeta_q)
     activation penalty gamma (1 - A(zeta_q))^2
     curvature penalty  kappa_w K(p)^2  (zero when disabled or unsupported) */
ObjectiveBreakdown point_objective(const Manifold& m, const FieldSet& fields,
                                   const ContinuousPoint& q_lattice,
                                   const ContinuousPoint& zeta_q,
                                   const ObjectiveParams& params);

// Gradient of the point objective with respect to zeta_q. The footpoint is
// held fixed while differentiating the alignment term (exact for
// alpha == beta); the curvature term uses central finite differences.
Eigen::VectorXd point_gradient(const Manifold& m, const FieldSet& fields,
                               const ContinuousPoint& zeta_q, const ObjectiveParams& params);

// Per-point breakdowns in lattice enumeration order. Evaluations may run
// in parallel; results do not depend on the worker count.
std::vector<ObjectiveBreakdown> per_point_objectives(const Lattice& lattice,
                                                     const EmbeddingState& zeta,
                                                     const Manifold& m, const FieldSet& fields,
                                                     const ObjectiveParams& params,
                                                     int threads = 1);

// Component-wise pairwise-tree sum of breakdowns; the summation order is
// fixed, so totals are bit-identical for any worker count.
ObjectiveBreakdown aggregate_breakdowns(const std::vector<ObjectiveBreakdown>& parts);

ObjectiveBreakdown total_objective(const Lattice& lattice, const EmbeddingState& zeta,
                                   const Manifold& m, const FieldSet& fields,
                                   const ObjectiveParams& params, int threads = 1);

// One gradient vector per lattice point, same order as the lattice.
std::vector<Eigen::VectorXd> objective_gradient(const Lattice& lattice,
                                                const EmbeddingState& zeta, const Manifold& m,
                                                const FieldSet& fields,
                                                const ObjectiveParams& params, int threads = 1);

}  // namespace latembed

#endif
