#ifndef LATEMBED_MANIFOLD_HPP
#define LATEMBED_MANIFOLD_HPP

#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "latembed/errors.hpp"
#include "latembed/lattice.hpp"

namespace latembed {

// Decomposition of an ambient vector at a surface point.
// tangential + normal reconstructs the input; the parts are orthogonal.
struct TangentNormalSplit {
    Eigen::VectorXd tangential;
    Eigen::VectorXd normal;
};

// Result of a closest-point solve.
struct Footpoint {
    ContinuousPoint point;        // closest point p on M
    Eigen::VectorXd chart_param;  // parameter of p; empty for implicit surfaces
    int iterations = 0;
    bool ambiguous = false;       // a competing footpoint at near-equal distance exists
};

// Tolerances shared by the geometric primitives.
namespace geom {
constexpr double kSingularGradient = 1e-12;   // ||grad F|| below this is a medial-axis point
constexpr double kLevelResidual = 1e-10;      // footpoint must satisfy |F(p)| <= this
constexpr double kNormalAlignment = 1e-8;     // tangential part of q - p, relative
constexpr double kOnManifold = 1e-8;          // |F(p)| scale for "p lies on M" checks
constexpr double kNewtonTarget = 5e-13;       // KKT residual the solver aims for
}  // namespace geom

// A smooth manifold embedded in R^n, presented either as a regular level
// set or as a parametric chart. Immutable after construction; all methods
// are const and safe to call concurrently.
class Manifold {
public:
    virtual ~Manifold() = default;

    virtual int ambient_dimension() const = 0;
    virtual int intrinsic_dimension() const = 0;

    // Radius of the neighborhood around M inside which queries must stay.
    double working_radius() const { return working_radius_; }

    // Gaussian/sectional curvature is implemented for 2-surfaces in R^3.
    bool supports_curvature() const {
        return ambient_dimension() == 3 && intrinsic_dimension() == 2;
    }

    // Closest-point projection of q onto M.
    virtual Footpoint project(const ContinuousPoint& q) const = 0;
    ContinuousPoint closest_point(const ContinuousPoint& q) const { return project(q).point; }

    // Decompose v into its tangential and normal parts at p (p on M).
    virtual TangentNormalSplit split_tangent_normal(const ContinuousPoint& p,
                                                    const Eigen::VectorXd& v) const = 0;

    virtual double gaussian_curvature(const ContinuousPoint& p) const = 0;

    // Variants that reuse an already computed footpoint; the chart
    // implementation reads the stored parameter instead of re-projecting.
    virtual TangentNormalSplit split_at(const Footpoint& footpoint,
                                        const Eigen::VectorXd& v) const {
        return split_tangent_normal(footpoint.point, v);
    }
    virtual double gaussian_curvature_at(const Footpoint& footpoint) const {
        return gaussian_curvature(footpoint.point);
    }

    // Curvature of the tangent plane spanned by v and w at p. For the
    // 2-surfaces supported here this is basis independent and equals the
    // Gaussian curvature.
    double sectional_curvature(const ContinuousPoint& p, const Eigen::VectorXd& v,
                               const Eigen::VectorXd& w) const;

protected:
    explicit Manifold(double working_radius) : working_radius_(working_radius) {}

    void check_ambient(const Eigen::VectorXd& x, const char* context) const;
    void check_working_radius(double distance) const;

    // Second fundamental form II(v, w) at p for tangent vectors v, w.
    virtual double second_fundamental_form(const ContinuousPoint& p,
                                           const Eigen::VectorXd& v,
                                           const Eigen::VectorXd& w) const = 0;

    double working_radius_;
};

// Hypersurface M = { x : F(x) = 0 } with grad F != 0 near M. Gradient and
// Hessian callbacks are optional; missing ones fall back to central finite
// differences with step h = max(1e-5, 1e-7 ||x||).
class ImplicitSurface final : public Manifold {
public:
    using LevelFn = std::function<double(const Eigen::VectorXd&)>;
    using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

    ImplicitSurface(int ambient_dimension, LevelFn level, GradientFn gradient = nullptr,
                    HessianFn hessian = nullptr,
                    double working_radius = std::numeric_limits<double>::infinity());

    double level(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

    bool has_analytic_gradient() const { return static_cast<bool>(gradient_fn_); }
    bool has_analytic_hessian() const { return static_cast<bool>(hessian_fn_); }

    int ambient_dimension() const override { return ambient_dimension_; }
    int intrinsic_dimension() const override { return ambient_dimension_ - 1; }

    Footpoint project(const ContinuousPoint& q) const override;
    TangentNormalSplit split_tangent_normal(const ContinuousPoint& p,
                                            const Eigen::VectorXd& v) const override;
    double gaussian_curvature(const ContinuousPoint& p) const override;

protected:
    double second_fundamental_form(const ContinuousPoint& p, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& w) const override;

private:
    Eigen::VectorXd unit_normal(const ContinuousPoint& p, const char* context) const;
    void check_on_surface(const ContinuousPoint& p, const char* context) const;

    int ambient_dimension_;
    LevelFn level_fn_;
    GradientFn gradient_fn_;
    HessianFn hessian_fn_;
};

// Patch of M given by a parametrization psi: D -> R^n on an axis-aligned
// box D in R^k, k < n, with full-rank Jacobian. The Jacobian and second
// derivatives are optional; missing ones use central finite differences.
class ParametricChart final : public Manifold {
public:
    using MapFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
    // second_derivative(u, a, b) = d^2 psi / du_a du_b, an ambient vector
    using SecondDerivativeFn =
        std::function<Eigen::VectorXd(const Eigen::VectorXd&, int, int)>;

    ParametricChart(int ambient_dimension, int parameter_dimension, MapFn map,
                    JacobianFn jacobian, Eigen::VectorXd domain_lower,
                    Eigen::VectorXd domain_upper, SecondDerivativeFn second = nullptr,
                    double working_radius = std::numeric_limits<double>::infinity());

    Eigen::VectorXd map(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const;  // n x k
    Eigen::VectorXd second_derivative(const Eigen::VectorXd& u, int a, int b) const;

    const Eigen::VectorXd& domain_lower() const { return domain_lower_; }
    const Eigen::VectorXd& domain_upper() const { return domain_upper_; }

    // Recover the parameter of a point already on the chart.
    Eigen::VectorXd parameter_of(const ContinuousPoint& p) const;

    int ambient_dimension() const override { return ambient_dimension_; }
    int intrinsic_dimension() const override { return parameter_dimension_; }

    Footpoint project(const ContinuousPoint& q) const override;
    TangentNormalSplit split_tangent_normal(const ContinuousPoint& p,
                                            const Eigen::VectorXd& v) const override;
    double gaussian_curvature(const ContinuousPoint& p) const override;
    TangentNormalSplit split_at(const Footpoint& footpoint,
                                const Eigen::VectorXd& v) const override;
    double gaussian_curvature_at(const Footpoint& footpoint) const override;

protected:
    double second_fundamental_form(const ContinuousPoint& p, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& w) const override;

private:
    struct ParamSolve {
        Eigen::VectorXd param;
        double squared_distance = 0.0;
        bool interior = true;
    };
    ParamSolve minimize_from(const Eigen::VectorXd& seed, const ContinuousPoint& q) const;
    std::vector<Eigen::VectorXd> seeds() const;
    Eigen::MatrixXd full_rank_jacobian(const Eigen::VectorXd& u, const char* context) const;
    Eigen::Vector3d surface_normal(const Eigen::VectorXd& u) const;
    TangentNormalSplit split_at_param(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
    double curvature_at_param(const Eigen::VectorXd& u) const;

    int ambient_dimension_;
    int parameter_dimension_;
    MapFn map_fn_;
    JacobianFn jacobian_fn_;
    SecondDerivativeFn second_fn_;
    Eigen::VectorXd domain_lower_;
    Eigen::VectorXd domain_upper_;
};

// One monomial of a polynomial level set or chart component:
// coefficient * prod_i x_i^exponents[i].
struct PolynomialTerm {
    double coefficient = 0.0;
    std::vector<int> exponents;
};

// Built-in catalog. Every factory returns analytic gradients and Hessians.
std::shared_ptr<ImplicitSurface> make_plane(
    const Eigen::VectorXd& normal, double offset,
    double working_radius = std::numeric_limits<double>::infinity());

std::shared_ptr<ImplicitSurface> make_sphere(
    const Eigen::VectorXd& center, double radius,
    double working_radius = std::numeric_limits<double>::infinity());

// Axis-aligned circular cylinder in R^3, axis parallel to z through center.
std::shared_ptr<ImplicitSurface> make_cylinder(
    const Eigen::Vector3d& center, double radius,
    double working_radius = std::numeric_limits<double>::infinity());

// Torus in R^3 around the z axis through center.
std::shared_ptr<ImplicitSurface> make_torus(
    const Eigen::Vector3d& center, double major_radius, double minor_radius,
    double working_radius = std::numeric_limits<double>::infinity());

std::shared_ptr<ImplicitSurface> make_polynomial_surface(
    int ambient_dimension, std::vector<PolynomialTerm> terms,
    double working_radius = std::numeric_limits<double>::infinity());

// Chart whose components are polynomials in the parameters; one
// coefficient table per ambient component.
std::shared_ptr<ParametricChart> make_polynomial_chart(
    std::vector<std::vector<PolynomialTerm>> components, Eigen::VectorXd domain_lower,
    Eigen::VectorXd domain_upper,
    double working_radius = std::numeric_limits<double>::infinity());

}  // namespace latembed

#endif
