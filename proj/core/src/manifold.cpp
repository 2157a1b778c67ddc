#include "latembed/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

namespace latembed {

namespace {

// Central-difference step, balancing truncation and rounding at doubles.
double fd_step(const Eigen::VectorXd& x) {
    return std::max(1e-5, 1e-7 * x.norm());
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x) {
    const double h = fd_step(x);
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

Eigen::MatrixXd fd_hessian_from_gradient(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const double h = fd_step(x);
    Eigen::MatrixXd h_mat(n, n);
    Eigen::VectorXd xp = x, xm = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        h_mat.col(i) = (grad(xp) - grad(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return 0.5 * (h_mat + h_mat.transpose());
}

Eigen::MatrixXd fd_hessian_from_level(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const double h = fd_step(x);
    Eigen::MatrixXd h_mat(n, n);
    const double f0 = f(x);
    Eigen::VectorXd y = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = x[i] + h;
        const double fp = f(y);
        y[i] = x[i] - h;
        const double fm = f(y);
        y[i] = x[i];
        h_mat(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            y[i] = x[i] + h; y[j] = x[j] + h;
            const double fpp = f(y);
            y[j] = x[j] - h;
            const double fpm = f(y);
            y[i] = x[i] - h;
            const double fmm = f(y);
            y[j] = x[j] + h;
            const double fmp = f(y);
            y[i] = x[i]; y[j] = x[j];
            h_mat(i, j) = h_mat(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return h_mat;
}

// Adjugate (transposed cofactor matrix) of a symmetric 3x3.
Eigen::Matrix3d adjugate3(const Eigen::Matrix3d& m) {
    Eigen::Matrix3d a;
    a(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    a(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    a(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    a(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    a(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    a(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    a(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    a(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    a(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return a;
}

}  // namespace

void Manifold::check_ambient(const Eigen::VectorXd& x, const char* context) const {
    if (static_cast<int>(x.size()) != ambient_dimension())
        throw DimensionMismatch(ambient_dimension(), static_cast<int>(x.size()), context);
}

void Manifold::check_working_radius(double distance) const {
    if (distance > working_radius_)
        throw OutsideWorkingNeighborhood(
            "query lies at distance " + std::to_string(distance) +
            " from the manifold, beyond the working radius " +
            std::to_string(working_radius_));
}

double Manifold::sectional_curvature(const ContinuousPoint& p, const Eigen::VectorXd& v,
                                     const Eigen::VectorXd& w) const {
    if (!supports_curvature())
        throw NotImplemented(
            "sectional_curvature: supported for 2-surfaces in R^3 only, got intrinsic "
            "dimension " + std::to_string(intrinsic_dimension()) + " in R^" +
            std::to_string(ambient_dimension()));
    check_ambient(p, "sectional_curvature");
    check_ambient(v, "sectional_curvature");
    check_ambient(w, "sectional_curvature");

    for (const auto* vec : {&v, &w}) {
        const TangentNormalSplit s = split_tangent_normal(p, *vec);
        if (s.normal.norm() > geom::kNormalAlignment * std::max(vec->norm(), 1e-300))
            throw Error("sectional_curvature: input vector is not tangent at p");
    }

    const double gram = v.squaredNorm() * w.squaredNorm() - std::pow(v.dot(w), 2);
    if (gram <= 1e-12)
        throw Error("sectional_curvature: tangent vectors are linearly dependent");

    const double ii_vv = second_fundamental_form(p, v, v);
    const double ii_ww = second_fundamental_form(p, w, w);
    const double ii_vw = second_fundamental_form(p, v, w);
    return (ii_vv * ii_ww - ii_vw * ii_vw) / gram;
}

// ---------------------------------------------------------------------------
// ImplicitSurface

ImplicitSurface::ImplicitSurface(int ambient_dimension, LevelFn level, GradientFn gradient,
                                 HessianFn hessian, double working_radius)
    : Manifold(working_radius),
      ambient_dimension_(ambient_dimension),
      level_fn_(std::move(level)),
      gradient_fn_(std::move(gradient)),
      hessian_fn_(std::move(hessian)) {
    if (ambient_dimension_ < 2)
        throw Error("ImplicitSurface: ambient dimension must be at least 2");
    if (!level_fn_) throw Error("ImplicitSurface: level function is required");
}

double ImplicitSurface::level(const Eigen::VectorXd& x) const {
    check_ambient(x, "level");
    return level_fn_(x);
}

Eigen::VectorXd ImplicitSurface::gradient(const Eigen::VectorXd& x) const {
    check_ambient(x, "gradient");
    if (gradient_fn_) return gradient_fn_(x);
    return fd_gradient(level_fn_, x);
}

Eigen::MatrixXd ImplicitSurface::hessian(const Eigen::VectorXd& x) const {
    check_ambient(x, "hessian");
    if (hessian_fn_) return hessian_fn_(x);
    if (gradient_fn_) return fd_hessian_from_gradient(gradient_fn_, x);
    return fd_hessian_from_level(level_fn_, x);
}

/* Footpoint by damped Newton on the stationarity system of
       min 1/2 ||x - q||^2  s.t.  F(x) = 0,
   i.e. r(x, nu) = [x - q + nu grad F(x); F(x)] = 0, seeded with one
   first-order level-set projection of q. */
Footpoint ImplicitSurface::project(const ContinuousPoint& q) const {
    check_ambient(q, "closest_point");
    const Eigen::Index n = q.size();

    const double f_q = level_fn_(q);
    Eigen::VectorXd g = gradient(q);
    const double g_sq = g.squaredNorm();
    if (g_sq < geom::kSingularGradient * geom::kSingularGradient)
        throw SingularGradient(q, "closest_point");

    Eigen::VectorXd x = q - (f_q / g_sq) * g;
    double nu = f_q / g_sq;

    const auto residual = [&](const Eigen::VectorXd& xi, double nui, Eigen::VectorXd& gi,
                              double& fi) {
        fi = level_fn_(xi);
        gi = gradient(xi);
        const Eigen::VectorXd r1 = xi - q + nui * gi;
        return std::max(r1.cwiseAbs().maxCoeff(), std::abs(fi));
    };

    Eigen::VectorXd g_x;
    double f_x = 0.0;
    double res = residual(x, nu, g_x, f_x);
    int iterations = 0;
    constexpr int kMaxIterations = 100;

    while (res > geom::kNewtonTarget && iterations < kMaxIterations) {
        Eigen::MatrixXd kkt(n + 1, n + 1);
        kkt.setZero();
        kkt.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) + nu * hessian(x);
        kkt.topRightCorner(n, 1) = g_x;
        kkt.bottomLeftCorner(1, n) = g_x.transpose();

        Eigen::VectorXd rhs(n + 1);
        rhs.head(n) = -(x - q + nu * g_x);
        rhs[n] = -f_x;

        const Eigen::VectorXd delta = kkt.fullPivLu().solve(rhs);
        if (!delta.allFinite()) break;

        double t = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            const Eigen::VectorXd x_try = x + t * delta.head(n);
            const double nu_try = nu + t * delta[n];
            Eigen::VectorXd g_try;
            double f_try;
            const double res_try = residual(x_try, nu_try, g_try, f_try);
            if (res_try < res) {
                x = x_try;
                nu = nu_try;
                g_x = g_try;
                f_x = f_try;
                res = res_try;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        ++iterations;
        if (!improved) break;  // stalled; the contract check below decides
    }

    if (g_x.norm() < geom::kSingularGradient)
        throw SingularGradient(x, "closest_point");

    const Eigen::VectorXd offset = q - x;
    const double distance = offset.norm();
    if (std::abs(f_x) > geom::kLevelResidual)
        throw NonConvergence(x, res, "closest_point");
    const Eigen::VectorXd tangential = offset - (offset.dot(g_x) / g_x.squaredNorm()) * g_x;
    if (tangential.norm() > geom::kNormalAlignment * std::max(1.0, distance))
        throw NonConvergence(x, res, "closest_point");
    check_working_radius(distance);

    Footpoint fp;
    fp.point = x;
    fp.iterations = iterations;
    return fp;
}

Eigen::VectorXd ImplicitSurface::unit_normal(const ContinuousPoint& p,
                                             const char* context) const {
    Eigen::VectorXd g = gradient(p);
    const double norm = g.norm();
    if (norm < geom::kSingularGradient) throw SingularGradient(p, context);
    return g / norm;
}

void ImplicitSurface::check_on_surface(const ContinuousPoint& p, const char* context) const {
    const double scale = std::max(1.0, gradient(p).norm());
    if (std::abs(level_fn_(p)) > geom::kOnManifold * scale)
        throw Error(std::string(context) + ": point is not on the surface, |F| = " +
                    std::to_string(std::abs(level_fn_(p))));
}

TangentNormalSplit ImplicitSurface::split_tangent_normal(const ContinuousPoint& p,
                                                         const Eigen::VectorXd& v) const {
    check_ambient(p, "split_tangent_normal");
    check_ambient(v, "split_tangent_normal");
    check_on_surface(p, "split_tangent_normal");
    const Eigen::VectorXd n_hat = unit_normal(p, "split_tangent_normal");
    TangentNormalSplit s;
    s.normal = v.dot(n_hat) * n_hat;
    s.tangential = v - s.normal;
    return s;
}

// K = grad^T adj(H) grad / ||grad||^4 for a regular level set in R^3.
double ImplicitSurface::gaussian_curvature(const ContinuousPoint& p) const {
    if (ambient_dimension_ != 3)
        throw NotImplemented("gaussian_curvature: implemented for surfaces in R^3, got R^" +
                             std::to_string(ambient_dimension_));
    check_ambient(p, "gaussian_curvature");
    check_on_surface(p, "gaussian_curvature");

    const Eigen::Vector3d g = gradient(p);
    const double g_norm = g.norm();
    if (g_norm < geom::kSingularGradient) throw SingularGradient(p, "gaussian_curvature");
    const Eigen::Matrix3d h = hessian(p);
    return g.dot(adjugate3(h) * g) / std::pow(g_norm, 4);
}

double ImplicitSurface::second_fundamental_form(const ContinuousPoint& p,
                                                const Eigen::VectorXd& v,
                                                const Eigen::VectorXd& w) const {
    const Eigen::VectorXd g = gradient(p);
    const double g_norm = g.norm();
    if (g_norm < geom::kSingularGradient)
        throw SingularGradient(p, "second_fundamental_form");
    return v.dot(hessian(p) * w) / g_norm;
}

// ---------------------------------------------------------------------------
// ParametricChart

ParametricChart::ParametricChart(int ambient_dimension, int parameter_dimension, MapFn map,
                                 JacobianFn jacobian, Eigen::VectorXd domain_lower,
                                 Eigen::VectorXd domain_upper, SecondDerivativeFn second,
                                 double working_radius)
    : Manifold(working_radius),
      ambient_dimension_(ambient_dimension),
      parameter_dimension_(parameter_dimension),
      map_fn_(std::move(map)),
      jacobian_fn_(std::move(jacobian)),
      second_fn_(std::move(second)),
      domain_lower_(std::move(domain_lower)),
      domain_upper_(std::move(domain_upper)) {
    if (!map_fn_) throw Error("ParametricChart: parametrization is required");
    if (parameter_dimension_ < 1 || parameter_dimension_ >= ambient_dimension_)
        throw Error("ParametricChart: need 1 <= k < n, got k = " +
                    std::to_string(parameter_dimension_) + ", n = " +
                    std::to_string(ambient_dimension_));
    if (domain_lower_.size() != parameter_dimension_ ||
        domain_upper_.size() != parameter_dimension_)
        throw DimensionMismatch(parameter_dimension_,
                                static_cast<int>(domain_lower_.size()), "ParametricChart domain");
    for (Eigen::Index i = 0; i < domain_lower_.size(); ++i)
        if (!(domain_lower_[i] < domain_upper_[i]))
            throw Error("ParametricChart: empty parameter domain in component " +
                        std::to_string(i));
}

Eigen::VectorXd ParametricChart::map(const Eigen::VectorXd& u) const {
    if (u.size() != parameter_dimension_)
        throw DimensionMismatch(parameter_dimension_, static_cast<int>(u.size()), "map");
    return map_fn_(u);
}

Eigen::MatrixXd ParametricChart::jacobian(const Eigen::VectorXd& u) const {
    if (u.size() != parameter_dimension_)
        throw DimensionMismatch(parameter_dimension_, static_cast<int>(u.size()), "jacobian");
    if (jacobian_fn_) return jacobian_fn_(u);
    const double h = fd_step(u);
    Eigen::MatrixXd j(ambient_dimension_, parameter_dimension_);
    Eigen::VectorXd up = u, um = u;
    for (int a = 0; a < parameter_dimension_; ++a) {
        up[a] = u[a] + h;
        um[a] = u[a] - h;
        j.col(a) = (map_fn_(up) - map_fn_(um)) / (2.0 * h);
        up[a] = u[a];
        um[a] = u[a];
    }
    return j;
}

Eigen::VectorXd ParametricChart::second_derivative(const Eigen::VectorXd& u, int a,
                                                   int b) const {
    if (second_fn_) return second_fn_(u, a, b);
    // Differentiate the Jacobian column once more.
    const double h = fd_step(u);
    Eigen::VectorXd up = u, um = u;
    up[b] += h;
    um[b] -= h;
    return (jacobian(up).col(a) - jacobian(um).col(a)) / (2.0 * h);
}

std::vector<Eigen::VectorXd> ParametricChart::seeds() const {
    // 8 deterministic starts: cell centers of a near-uniform split of the box.
    std::vector<int> counts(static_cast<std::size_t>(parameter_dimension_), 1);
    int product = 1;
    int axis = 0;
    while (product < 8) {
        counts[static_cast<std::size_t>(axis % parameter_dimension_)] *= 2;
        product *= 2;
        ++axis;
    }
    std::vector<Eigen::VectorXd> out;
    std::vector<int> idx(static_cast<std::size_t>(parameter_dimension_), 0);
    while (true) {
        Eigen::VectorXd u(parameter_dimension_);
        for (int i = 0; i < parameter_dimension_; ++i) {
            const double t = (idx[static_cast<std::size_t>(i)] + 0.5) /
                             counts[static_cast<std::size_t>(i)];
            u[i] = domain_lower_[i] + t * (domain_upper_[i] - domain_lower_[i]);
        }
        out.push_back(u);
        int i = parameter_dimension_ - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < counts[static_cast<std::size_t>(i)]) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

ParametricChart::ParamSolve ParametricChart::minimize_from(const Eigen::VectorXd& seed,
                                                           const ContinuousPoint& q) const {
    const auto clamp = [&](Eigen::VectorXd u) {
        for (Eigen::Index i = 0; i < u.size(); ++i)
            u[i] = std::clamp(u[i], domain_lower_[i], domain_upper_[i]);
        return u;
    };
    const auto value = [&](const Eigen::VectorXd& u) {
        return (map_fn_(u) - q).squaredNorm();
    };

    Eigen::VectorXd u = clamp(seed);
    double f = value(u);

    // Projected gradient descent with backtracking.
    for (int it = 0; it < 400; ++it) {
        const Eigen::VectorXd r = map_fn_(u) - q;
        const Eigen::VectorXd grad = 2.0 * jacobian(u).transpose() * r;
        const double stationarity = (u - clamp(u - grad)).cwiseAbs().maxCoeff();
        if (stationarity <= 1e-13 * std::max(1.0, grad.cwiseAbs().maxCoeff())) break;

        double s = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving) {
            const Eigen::VectorXd u_try = clamp(u - s * grad);
            const double f_try = value(u_try);
            const double decrease = grad.dot(u - u_try);
            if (f_try <= f - 1e-4 * decrease && f_try < f) {
                u = u_try;
                f = f_try;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) break;
    }

    // Newton polish in the interior for a tight tangential residual.
    const double span = (domain_upper_ - domain_lower_).maxCoeff();
    const auto interior = [&](const Eigen::VectorXd& ui) {
        for (Eigen::Index i = 0; i < ui.size(); ++i)
            if (ui[i] - domain_lower_[i] < 1e-12 * span ||
                domain_upper_[i] - ui[i] < 1e-12 * span)
                return false;
        return true;
    };
    for (int it = 0; it < 40 && interior(u); ++it) {
        const Eigen::VectorXd r = map_fn_(u) - q;
        const Eigen::MatrixXd j = jacobian(u);
        const Eigen::VectorXd grad = 2.0 * j.transpose() * r;
        if (grad.cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, std::sqrt(f))) break;
        Eigen::MatrixXd hess = 2.0 * j.transpose() * j;
        for (int a = 0; a < parameter_dimension_; ++a)
            for (int b = 0; b < parameter_dimension_; ++b)
                hess(a, b) += 2.0 * r.dot(second_derivative(u, a, b));
        const Eigen::VectorXd delta = hess.fullPivLu().solve(-grad);
        if (!delta.allFinite()) break;
        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving) {
            const Eigen::VectorXd u_try = clamp(u + t * delta);
            const double f_try = value(u_try);
            if (f_try < f) {
                u = u_try;
                f = f_try;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }

    ParamSolve out;
    out.param = u;
    out.squared_distance = f;
    out.interior = interior(u);
    return out;
}

Footpoint ParametricChart::project(const ContinuousPoint& q) const {
    check_ambient(q, "closest_point");

    ParamSolve best;
    best.squared_distance = std::numeric_limits<double>::infinity();
    std::vector<ParamSolve> solves;
    for (const Eigen::VectorXd& seed : seeds()) {
        ParamSolve s = minimize_from(seed, q);
        if (s.squared_distance < best.squared_distance) best = s;
        solves.push_back(std::move(s));
    }
    if (!std::isfinite(best.squared_distance))
        throw NonConvergence(q, best.squared_distance, "closest_point");

    const Eigen::VectorXd p = map_fn_(best.param);
    const double distance = std::sqrt(best.squared_distance);

    bool ambiguous = false;
    const double position_scale = std::max(1.0, q.norm());
    for (const ParamSolve& s : solves) {
        if ((map_fn_(s.param) - p).norm() <= 1e-6 * position_scale) continue;
        if (s.squared_distance <= best.squared_distance +
                                      1e-9 * std::max(1.0, best.squared_distance)) {
            ambiguous = true;
            break;
        }
    }

    if (best.interior) {
        // Interior minimizer: the offset must be normal to the chart.
        const Eigen::MatrixXd j = full_rank_jacobian(best.param, "closest_point");
        const Eigen::VectorXd grad = j.transpose() * (q - p);
        if (grad.cwiseAbs().maxCoeff() >
            geom::kNormalAlignment * std::max(1.0, distance) * j.norm())
            throw NonConvergence(p, grad.cwiseAbs().maxCoeff(), "closest_point");
    }
    check_working_radius(distance);

    Footpoint fp;
    fp.point = p;
    fp.chart_param = best.param;
    fp.ambiguous = ambiguous;
    return fp;
}

Eigen::MatrixXd ParametricChart::full_rank_jacobian(const Eigen::VectorXd& u,
                                                    const char* context) const {
    Eigen::MatrixXd j = jacobian(u);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(j);
    if (qr.rank() < parameter_dimension_)
        throw ImmersionViolation(std::string(context) +
                                 ": chart Jacobian is rank deficient at an evaluation point");
    return j;
}

Eigen::VectorXd ParametricChart::parameter_of(const ContinuousPoint& p) const {
    const Footpoint fp = project(p);
    if ((fp.point - p).norm() > 1e-6 * std::max(1.0, p.norm()))
        throw Error("parameter_of: point is not on the chart");
    return fp.chart_param;
}

TangentNormalSplit ParametricChart::split_at_param(const Eigen::VectorXd& u,
                                                   const Eigen::VectorXd& v) const {
    const Eigen::MatrixXd j = full_rank_jacobian(u, "split_tangent_normal");

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(j);
    const Eigen::MatrixXd q_thin =
        qr.householderQ() * Eigen::MatrixXd::Identity(ambient_dimension_, parameter_dimension_);

    TangentNormalSplit s;
    s.tangential = q_thin * (q_thin.transpose() * v);
    s.normal = v - s.tangential;
    return s;
}

TangentNormalSplit ParametricChart::split_tangent_normal(const ContinuousPoint& p,
                                                         const Eigen::VectorXd& v) const {
    check_ambient(p, "split_tangent_normal");
    check_ambient(v, "split_tangent_normal");
    return split_at_param(parameter_of(p), v);
}

TangentNormalSplit ParametricChart::split_at(const Footpoint& footpoint,
                                             const Eigen::VectorXd& v) const {
    if (footpoint.chart_param.size() != parameter_dimension_)
        return split_tangent_normal(footpoint.point, v);
    check_ambient(v, "split_tangent_normal");
    return split_at_param(footpoint.chart_param, v);
}

Eigen::Vector3d ParametricChart::surface_normal(const Eigen::VectorXd& u) const {
    const Eigen::MatrixXd j = jacobian(u);
    const Eigen::Vector3d cross = Eigen::Vector3d(j.col(0)).cross(Eigen::Vector3d(j.col(1)));
    const double norm = cross.norm();
    if (norm < geom::kSingularGradient)
        throw ImmersionViolation("surface normal undefined: degenerate first fundamental form");
    return cross / norm;
}

double ParametricChart::gaussian_curvature(const ContinuousPoint& p) const {
    if (!supports_curvature())
        throw NotImplemented("gaussian_curvature: implemented for 2-surfaces in R^3");
    check_ambient(p, "gaussian_curvature");
    return curvature_at_param(parameter_of(p));
}

double ParametricChart::gaussian_curvature_at(const Footpoint& footpoint) const {
    if (footpoint.chart_param.size() != parameter_dimension_)
        return gaussian_curvature(footpoint.point);
    if (!supports_curvature())
        throw NotImplemented("gaussian_curvature: implemented for 2-surfaces in R^3");
    return curvature_at_param(footpoint.chart_param);
}

double ParametricChart::curvature_at_param(const Eigen::VectorXd& u) const {
    const Eigen::MatrixXd j = jacobian(u);
    Eigen::Matrix2d first;
    first << j.col(0).dot(j.col(0)), j.col(0).dot(j.col(1)),
             j.col(1).dot(j.col(0)), j.col(1).dot(j.col(1));
    const double det_first = first.determinant();
    if (det_first < 1e-12)
        throw Error("gaussian_curvature: singular first fundamental form");

    const Eigen::Vector3d n_hat = surface_normal(u);
    Eigen::Matrix2d second;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            second(a, b) = n_hat.dot(second_derivative(u, a, b));
    return second.determinant() / det_first;
}

double ParametricChart::second_fundamental_form(const ContinuousPoint& p,
                                                const Eigen::VectorXd& v,
                                                const Eigen::VectorXd& w) const {
    const Eigen::VectorXd u = parameter_of(p);
    const Eigen::MatrixXd j = full_rank_jacobian(u, "second_fundamental_form");

    // Tangent coefficients a, b with v = J a, w = J b (least squares).
    const Eigen::VectorXd a = j.colPivHouseholderQr().solve(v);
    const Eigen::VectorXd b = j.colPivHouseholderQr().solve(w);

    const Eigen::Vector3d n_hat = surface_normal(u);
    double ii = 0.0;
    for (int s = 0; s < parameter_dimension_; ++s)
        for (int t = 0; t < parameter_dimension_; ++t)
            ii += a[s] * b[t] * n_hat.dot(second_derivative(u, s, t));
    return ii;
}

// ---------------------------------------------------------------------------
// Polynomial evaluation and the built-in catalog

namespace {

double ipow(double base, int exponent) {
    double out = 1.0;
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

void validate_terms(const std::vector<PolynomialTerm>& terms, int variables,
                    const char* context) {
    for (const PolynomialTerm& t : terms) {
        if (static_cast<int>(t.exponents.size()) != variables)
            throw DimensionMismatch(variables, static_cast<int>(t.exponents.size()), context);
        for (int e : t.exponents)
            if (e < 0) throw Error(std::string(context) + ": negative exponent");
    }
}

double poly_value(const std::vector<PolynomialTerm>& terms, const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (const PolynomialTerm& t : terms) {
        double m = t.coefficient;
        for (Eigen::Index i = 0; i < x.size(); ++i)
            m *= ipow(x[i], t.exponents[static_cast<std::size_t>(i)]);
        sum += m;
    }
    return sum;
}

Eigen::VectorXd poly_gradient(const std::vector<PolynomialTerm>& terms,
                              const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    for (const PolynomialTerm& t : terms) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const int ei = t.exponents[static_cast<std::size_t>(i)];
            if (ei == 0) continue;
            double m = t.coefficient * ei;
            for (Eigen::Index j = 0; j < x.size(); ++j) {
                const int ej = t.exponents[static_cast<std::size_t>(j)];
                m *= ipow(x[j], j == i ? ej - 1 : ej);
            }
            g[i] += m;
        }
    }
    return g;
}

Eigen::MatrixXd poly_hessian(const std::vector<PolynomialTerm>& terms,
                             const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (const PolynomialTerm& t : terms) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const int ei = t.exponents[static_cast<std::size_t>(i)];
            if (ei == 0) continue;
            for (Eigen::Index j = 0; j < n; ++j) {
                const int ej = t.exponents[static_cast<std::size_t>(j)];
                double factor;
                if (i == j) {
                    if (ei < 2) continue;
                    factor = static_cast<double>(ei) * (ei - 1);
                } else {
                    if (ej == 0) continue;
                    factor = static_cast<double>(ei) * ej;
                }
                double m = t.coefficient * factor;
                for (Eigen::Index l = 0; l < n; ++l) {
                    int el = t.exponents[static_cast<std::size_t>(l)];
                    if (l == i) el -= 1;
                    if (l == j) el -= 1;
                    m *= ipow(x[l], el);
                }
                h(i, j) += m;
            }
        }
    }
    return h;
}

}  // namespace

std::shared_ptr<ImplicitSurface> make_plane(const Eigen::VectorXd& normal, double offset,
                                            double working_radius) {
    const double norm = normal.norm();
    if (norm < geom::kSingularGradient) throw Error("make_plane: zero normal vector");
    const Eigen::VectorXd n_hat = normal / norm;
    const double b = offset / norm;
    const int n = static_cast<int>(normal.size());
    return std::make_shared<ImplicitSurface>(
        n, [n_hat, b](const Eigen::VectorXd& x) { return n_hat.dot(x) - b; },
        [n_hat](const Eigen::VectorXd&) { return n_hat; },
        [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n).eval(); },
        working_radius);
}

std::shared_ptr<ImplicitSurface> make_sphere(const Eigen::VectorXd& center, double radius,
                                             double working_radius) {
    if (!(radius > 0.0)) throw Error("make_sphere: radius must be positive");
    const int n = static_cast<int>(center.size());
    const Eigen::VectorXd c = center;
    return std::make_shared<ImplicitSurface>(
        n,
        [c, radius](const Eigen::VectorXd& x) { return (x - c).squaredNorm() - radius * radius; },
        [c](const Eigen::VectorXd& x) { return (2.0 * (x - c)).eval(); },
        [n](const Eigen::VectorXd&) { return (2.0 * Eigen::MatrixXd::Identity(n, n)).eval(); },
        working_radius);
}

std::shared_ptr<ImplicitSurface> make_cylinder(const Eigen::Vector3d& center, double radius,
                                               double working_radius) {
    if (!(radius > 0.0)) throw Error("make_cylinder: radius must be positive");
    const Eigen::Vector3d c = center;
    return std::make_shared<ImplicitSurface>(
        3,
        [c, radius](const Eigen::VectorXd& x) {
            const double dx = x[0] - c[0], dy = x[1] - c[1];
            return dx * dx + dy * dy - radius * radius;
        },
        [c](const Eigen::VectorXd& x) {
            return Eigen::Vector3d(2.0 * (x[0] - c[0]), 2.0 * (x[1] - c[1]), 0.0).eval();
        },
        [](const Eigen::VectorXd&) {
            Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
            h(0, 0) = h(1, 1) = 2.0;
            return Eigen::MatrixXd(h);
        },
        working_radius);
}

std::shared_ptr<ImplicitSurface> make_torus(const Eigen::Vector3d& center,
                                            double major_radius, double minor_radius,
                                            double working_radius) {
    if (!(major_radius > 0.0) || !(minor_radius > 0.0))
        throw Error("make_torus: radii must be positive");
    if (!(minor_radius < major_radius))
        throw Error("make_torus: minor radius must be smaller than the major radius");
    const Eigen::Vector3d c = center;
    const double big_r = major_radius;

    // rho = distance to the torus axis; the axis itself is singular.
    const auto axis_distance = [c](const Eigen::VectorXd& x) {
        return std::hypot(x[0] - c[0], x[1] - c[1]);
    };
    return std::make_shared<ImplicitSurface>(
        3,
        [c, big_r, minor_radius, axis_distance](const Eigen::VectorXd& x) {
            const double rho = axis_distance(x);
            const double dz = x[2] - c[2];
            return (rho - big_r) * (rho - big_r) + dz * dz - minor_radius * minor_radius;
        },
        [c, big_r, axis_distance](const Eigen::VectorXd& x) {
            const double rho = axis_distance(x);
            if (rho < geom::kSingularGradient)
                throw SingularGradient(x, "torus gradient (axis point)");
            const double s = 2.0 * (rho - big_r) / rho;
            return Eigen::Vector3d(s * (x[0] - c[0]), s * (x[1] - c[1]),
                                   2.0 * (x[2] - c[2])).eval();
        },
        [c, big_r, axis_distance](const Eigen::VectorXd& x) {
            const double rho = axis_distance(x);
            if (rho < geom::kSingularGradient)
                throw SingularGradient(x, "torus hessian (axis point)");
            const double dx = x[0] - c[0], dy = x[1] - c[1];
            const double rho3 = rho * rho * rho;
            Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
            h(0, 0) = 2.0 - 2.0 * big_r * dy * dy / rho3;
            h(1, 1) = 2.0 - 2.0 * big_r * dx * dx / rho3;
            h(0, 1) = h(1, 0) = 2.0 * big_r * dx * dy / rho3;
            h(2, 2) = 2.0;
            return Eigen::MatrixXd(h);
        },
        working_radius);
}

std::shared_ptr<ImplicitSurface> make_polynomial_surface(int ambient_dimension,
                                                         std::vector<PolynomialTerm> terms,
                                                         double working_radius) {
    if (terms.empty()) throw Error("make_polynomial_surface: empty term list");
    validate_terms(terms, ambient_dimension, "make_polynomial_surface");
    auto shared = std::make_shared<std::vector<PolynomialTerm>>(std::move(terms));
    return std::make_shared<ImplicitSurface>(
        ambient_dimension,
        [shared](const Eigen::VectorXd& x) { return poly_value(*shared, x); },
        [shared](const Eigen::VectorXd& x) { return poly_gradient(*shared, x); },
        [shared](const Eigen::VectorXd& x) { return poly_hessian(*shared, x); },
        working_radius);
}

std::shared_ptr<ParametricChart> make_polynomial_chart(
    std::vector<std::vector<PolynomialTerm>> components, Eigen::VectorXd domain_lower,
    Eigen::VectorXd domain_upper, double working_radius) {
    const int n = static_cast<int>(components.size());
    const int k = static_cast<int>(domain_lower.size());
    for (const auto& comp : components)
        validate_terms(comp, k, "make_polynomial_chart");
    auto shared = std::make_shared<std::vector<std::vector<PolynomialTerm>>>(
        std::move(components));

    auto map_fn = [shared, n](const Eigen::VectorXd& u) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = poly_value((*shared)[static_cast<std::size_t>(i)], u);
        return x;
    };
    auto jac_fn = [shared, n, k](const Eigen::VectorXd& u) {
        Eigen::MatrixXd j(n, k);
        for (int i = 0; i < n; ++i)
            j.row(i) = poly_gradient((*shared)[static_cast<std::size_t>(i)], u).transpose();
        return j;
    };
    auto second_fn = [shared, n](const Eigen::VectorXd& u, int a, int b) {
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i)
            d[i] = poly_hessian((*shared)[static_cast<std::size_t>(i)], u)(a, b);
        return d;
    };
    return std::make_shared<ParametricChart>(n, k, std::move(map_fn), std::move(jac_fn),
                                             std::move(domain_lower), std::move(domain_upper),
                                             std::move(second_fn), working_radius);
}

}  // namespace latembed
