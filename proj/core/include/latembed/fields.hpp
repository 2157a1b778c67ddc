#ifndef LATEMBED_FIELDS_HPP
#define LATEMBED_FIELDS_HPP

#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "latembed/manifold.hpp"

namespace latembed {

// Smoothed indicator of the manifold, A(x) = exp(-d(x, M)^2 / eps^2).
// Equals 1 on M and decays with the square of the distance.
class ActivationField {
public:
    explicit ActivationField(std::shared_ptr<const Manifold> manifold, double epsilon = 0.25);

    double value(const ContinuousPoint& x) const;
    Eigen::VectorXd gradient(const ContinuousPoint& x) const;

    // Variants that reuse an already computed footpoint of x, so a caller
    // holding one pays for a single projection per evaluation.
    double value_from_footpoint(const ContinuousPoint& x, const ContinuousPoint& footpoint) const;
    Eigen::VectorXd gradient_from_footpoint(const ContinuousPoint& x,
                                            const ContinuousPoint& footpoint) const;

    double epsilon() const { return epsilon_; }
    const Manifold& manifold() const { return *manifold_; }
    const std::shared_ptr<const Manifold>& manifold_ptr() const { return manifold_; }

private:
    std::shared_ptr<const Manifold> manifold_;
    double epsilon_;
};

// Closed regions the reinforcement term can mark.
struct Ball {
    ContinuousPoint center;
    double radius = 0.0;
};

struct Box {
    ContinuousPoint lower;
    ContinuousPoint upper;
};

using Region = std::variant<Ball, Box>;

// Crisp {0, 1} membership field: 1 on the union of its closed regions.
class ReinforcementField {
public:
    ReinforcementField() = default;
    explicit ReinforcementField(std::vector<Region> regions);

    double value(const ContinuousPoint& x) const { return contains(x) ? 1.0 : 0.0; }
    bool contains(const ContinuousPoint& x) const;

    bool empty() const { return regions_.empty(); }
    const std::vector<Region>& regions() const { return regions_; }
    // Common dimension of the regions; -1 when there are none.
    int dimension() const { return dimension_; }

private:
    std::vector<Region> regions_;
    int dimension_ = -1;
};

// The two fields the objective reads, bound to one manifold.
struct FieldSet {
    ActivationField activation;
    ReinforcementField reinforcement;
};

}  // namespace latembed

#endif
