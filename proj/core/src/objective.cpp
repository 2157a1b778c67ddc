#include "latembed/objective.hpp"

#include <cmath>
#include <span>
#include <string>

#include "latembed/parallel.hpp"

namespace latembed {

namespace {

void check_fields(const Manifold& m, const FieldSet& fields) {
    if (&fields.activation.manifold() != &m)
        throw Error("FieldSet activation is bound to a different manifold instance");
    if (!fields.reinforcement.empty() &&
        fields.reinforcement.dimension() != m.ambient_dimension())
        throw DimensionMismatch(m.ambient_dimension(), fields.reinforcement.dimension(),
                                "reinforcement regions");
}

double curvature_penalty_at(const Manifold& m, const Footpoint& fp,
                            const ObjectiveParams& params) {
    if (params.kappa_w == 0.0 || !m.supports_curvature()) return 0.0;
    const double k = m.gaussian_curvature_at(fp);
    return params.kappa_w * k * k;
}

}  // namespace

void ObjectiveParams::validate() const {
    const auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw Error(std::string("ObjectiveParams: ") + name +
                        " must be finite and nonnegative, got " + std::to_string(v));
    };
    check(alpha, "alpha");
    check(beta, "beta");
    check(lambda, "lambda");
    check(gamma, "gamma");
    check(kappa_w, "kappa_w");
    if (alpha + beta <= 0.0)
        throw Error("ObjectiveParams: alpha + beta must be positive");
}

double alignment_metric(const Manifold& m, const ContinuousPoint& p, const ContinuousPoint& q,
                        const ObjectiveParams& params) {
    params.validate();
    if (p.size() != q.size())
        throw DimensionMismatch(static_cast<int>(p.size()), static_cast<int>(q.size()),
                                "alignment_metric");
    const TangentNormalSplit s = m.split_tangent_normal(p, q - p);
    return params.alpha * s.tangential.squaredNorm() + params.beta * s.normal.squaredNorm();
}

ObjectiveBreakdown point_objective(const Manifold& m, const FieldSet& fields,
                                   const ContinuousPoint& q_lattice,
                                   const ContinuousPoint& zeta_q,
                                   const ObjectiveParams& params) {
    params.validate();
    check_fields(m, fields);
    if (q_lattice.size() != zeta_q.size())
        throw DimensionMismatch(static_cast<int>(q_lattice.size()),
                                static_cast<int>(zeta_q.size()), "point_objective");

    const Footpoint fp = m.project(zeta_q);
    const TangentNormalSplit s = m.split_at(fp, zeta_q - fp.point);

    ObjectiveBreakdown b;
    b.alignment =
        params.alpha * s.tangential.squaredNorm() + params.beta * s.normal.squaredNorm();
    b.reinforcement = params.lambda * fields.reinforcement.value(zeta_q);
    const double a = fields.activation.value_from_footpoint(zeta_q, fp.point);
    b.activation_penalty = params.gamma * (1.0 - a) * (1.0 - a);
    b.curvature_penalty = curvature_penalty_at(m, fp, params);
    b.total = b.alignment + b.reinforcement + b.activation_penalty + b.curvature_penalty;
    return b;
}

Eigen::VectorXd point_gradient(const Manifold& m, const FieldSet& fields,
                               const ContinuousPoint& zeta_q, const ObjectiveParams& params) {
    params.validate();
    check_fields(m, fields);

    const Footpoint fp = m.project(zeta_q);
    const Eigen::VectorXd offset = zeta_q - fp.point;
    const TangentNormalSplit s = m.split_at(fp, offset);

    // Alignment, with the footpoint held fixed.
    Eigen::VectorXd g = 2.0 * params.alpha * s.tangential + 2.0 * params.beta * s.normal;

    // d/dzeta gamma (1 - A)^2 = (4 gamma / eps^2) (1 - A) A (zeta - p).
    const double eps = fields.activation.epsilon();
    const double a = fields.activation.value_from_footpoint(zeta_q, fp.point);
    g += (4.0 * params.gamma / (eps * eps)) * (1.0 - a) * a * offset;

    // The reinforcement field is piecewise constant: no gradient term.

    if (params.kappa_w > 0.0 && m.supports_curvature()) {
        const auto penalty = [&](const Eigen::VectorXd& x) {
            const Footpoint fpx = m.project(x);
            const double k = m.gaussian_curvature_at(fpx);
            return params.kappa_w * k * k;
        };
        const double h = std::max(1e-5, 1e-7 * zeta_q.norm());
        Eigen::VectorXd xp = zeta_q, xm = zeta_q;
        for (Eigen::Index i = 0; i < zeta_q.size(); ++i) {
            xp[i] = zeta_q[i] + h;
            xm[i] = zeta_q[i] - h;
            g[i] += (penalty(xp) - penalty(xm)) / (2.0 * h);
            xp[i] = zeta_q[i];
            xm[i] = zeta_q[i];
        }
    }
    return g;
}

std::vector<ObjectiveBreakdown> per_point_objectives(const Lattice& lattice,
                                                     const EmbeddingState& zeta,
                                                     const Manifold& m, const FieldSet& fields,
                                                     const ObjectiveParams& params,
                                                     int threads) {
    params.validate();
    check_fields(m, fields);

    std::vector<ObjectiveBreakdown> parts(lattice.size());
    parallel_for(lattice.size(), threads, [&](std::size_t i) {
        const ContinuousPoint& zq = zeta.position_for(lattice[i]);
        parts[i] = point_objective(m, fields, embed(lattice[i]), zq, params);
    });
    return parts;
}

ObjectiveBreakdown aggregate_breakdowns(const std::vector<ObjectiveBreakdown>& parts) {
    std::vector<double> column(parts.size());
    const auto sum_of = [&](double ObjectiveBreakdown::*field) {
        for (std::size_t i = 0; i < parts.size(); ++i) column[i] = parts[i].*field;
        return pairwise_sum(column);
    };
    ObjectiveBreakdown out;
    out.alignment = sum_of(&ObjectiveBreakdown::alignment);
    out.reinforcement = sum_of(&ObjectiveBreakdown::reinforcement);
    out.activation_penalty = sum_of(&ObjectiveBreakdown::activation_penalty);
    out.curvature_penalty = sum_of(&ObjectiveBreakdown::curvature_penalty);
    out.total =
        out.alignment + out.reinforcement + out.activation_penalty + out.curvature_penalty;
    return out;
}

ObjectiveBreakdown total_objective(const Lattice& lattice, const EmbeddingState& zeta,
                                   const Manifold& m, const FieldSet& fields,
                                   const ObjectiveParams& params, int threads) {
    return aggregate_breakdowns(per_point_objectives(lattice, zeta, m, fields, params, threads));
}

std::vector<Eigen::VectorXd> objective_gradient(const Lattice& lattice,
                                                const EmbeddingState& zeta, const Manifold& m,
                                                const FieldSet& fields,
                                                const ObjectiveParams& params, int threads) {
    params.validate();
    check_fields(m, fields);

    std::vector<Eigen::VectorXd> grads(lattice.size());
    parallel_for(lattice.size(), threads, [&](std::size_t i) {
        grads[i] = point_gradient(m, fields, zeta.position_for(lattice[i]), params);
    });
    return grads;
}

}  // namespace latembed
