#include "latembed/fields.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace latembed {

ActivationField::ActivationField(std::shared_ptr<const Manifold> manifold, double epsilon)
    : manifold_(std::move(manifold)), epsilon_(epsilon) {
    if (!manifold_) throw Error("ActivationField: null manifold");
    if (!(epsilon_ > 0.0)) throw Error("ActivationField: epsilon must be positive");
}

double ActivationField::value(const ContinuousPoint& x) const {
    return value_from_footpoint(x, manifold_->closest_point(x));
}

Eigen::VectorXd ActivationField::gradient(const ContinuousPoint& x) const {
    return gradient_from_footpoint(x, manifold_->closest_point(x));
}

double ActivationField::value_from_footpoint(const ContinuousPoint& x,
                                             const ContinuousPoint& footpoint) const {
    const double d2 = (x - footpoint).squaredNorm();
    return std::exp(-d2 / (epsilon_ * epsilon_));
}

/* grad A = -(2 / eps^2) A(x) (x - p(x)); the footpoint map has no
   first-order contribution because x - p is normal to M at p. */
Eigen::VectorXd ActivationField::gradient_from_footpoint(const ContinuousPoint& x,
                                                         const ContinuousPoint& footpoint) const {
    const double a = value_from_footpoint(x, footpoint);
    return (-2.0 / (epsilon_ * epsilon_)) * a * (x - footpoint);
}

namespace {

int region_dimension(const Region& region) {
    if (const Ball* ball = std::get_if<Ball>(&region))
        return static_cast<int>(ball->center.size());
    return static_cast<int>(std::get<Box>(region).lower.size());
}

void validate_region(const Region& region) {
    if (const Ball* ball = std::get_if<Ball>(&region)) {
        if (!(ball->radius >= 0.0)) throw Error("ReinforcementField: negative ball radius");
        return;
    }
    const Box& box = std::get<Box>(region);
    if (box.lower.size() != box.upper.size())
        throw DimensionMismatch(static_cast<int>(box.lower.size()),
                                static_cast<int>(box.upper.size()), "ReinforcementField box");
    for (Eigen::Index i = 0; i < box.lower.size(); ++i)
        if (box.lower[i] > box.upper[i])
            throw Error("ReinforcementField: box lower bound exceeds upper bound in component " +
                        std::to_string(i));
}

bool region_contains(const Region& region, const ContinuousPoint& x) {
    if (const Ball* ball = std::get_if<Ball>(&region))
        return (x - ball->center).norm() <= ball->radius;
    const Box& box = std::get<Box>(region);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < box.lower[i] || x[i] > box.upper[i]) return false;
    return true;
}

}  // namespace

ReinforcementField::ReinforcementField(std::vector<Region> regions)
    : regions_(std::move(regions)) {
    for (const Region& region : regions_) {
        validate_region(region);
        const int dim = region_dimension(region);
        if (dimension_ < 0)
            dimension_ = dim;
        else if (dim != dimension_)
            throw DimensionMismatch(dimension_, dim, "ReinforcementField regions");
    }
}

bool ReinforcementField::contains(const ContinuousPoint& x) const {
    if (regions_.empty()) return false;
    if (static_cast<int>(x.size()) != dimension_)
        throw DimensionMismatch(dimension_, static_cast<int>(x.size()), "ReinforcementField");
    for (const Region& region : regions_)
        if (region_contains(region, x)) return true;
    return false;
}

}  // namespace latembed
