#ifndef LATEMBED_LATTICE_HPP
#define LATEMBED_LATTICE_HPP

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "latembed/errors.hpp"

namespace latembed {

// A point of the ambient continuous space R^n.
using ContinuousPoint = Eigen::VectorXd;

// An integer n-tuple. Ordering is lexicographic, equality component-wise.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
    LatticePoint(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

    int dimension() const { return static_cast<int>(coords_.size()); }
    std::int64_t operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
    const std::vector<std::int64_t>& coords() const { return coords_; }

    std::string to_string() const;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

private:
    std::vector<std::int64_t> coords_;
};

// Component-wise min / max. Throw DimensionMismatch on unequal dimensions.
LatticePoint meet(const LatticePoint& a, const LatticePoint& b);
LatticePoint join(const LatticePoint& a, const LatticePoint& b);

// Same operations on embedded (real) tuples.
ContinuousPoint meet(const ContinuousPoint& a, const ContinuousPoint& b);
ContinuousPoint join(const ContinuousPoint& a, const ContinuousPoint& b);

// Component-wise partial order a <= b (the order induced by meet/join).
bool leq(const LatticePoint& a, const LatticePoint& b);

// Euclidean distance between grid vertices.
double grid_distance(const LatticePoint& a, const LatticePoint& b);

// True iff exactly one component differs, and by exactly 1.
bool is_adjacent(const LatticePoint& a, const LatticePoint& b);

// Identity embedding into R^n (integer components reinterpreted as reals).
ContinuousPoint embed(const LatticePoint& a);

// A finite set of lattice points of one dimension, enumerated
// lexicographically. Duplicates in the input are dropped.
class Lattice {
public:
    explicit Lattice(int dimension) : dimension_(dimension) { check_dimension(); }
    explicit Lattice(std::vector<LatticePoint> points);

    int dimension() const { return dimension_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<LatticePoint>& points() const { return points_; }

    std::vector<LatticePoint>::const_iterator begin() const { return points_.begin(); }
    std::vector<LatticePoint>::const_iterator end() const { return points_.end(); }

    // Position of p in enumeration order, or npos when absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const LatticePoint& p) const;

private:
    void check_dimension() const;

    int dimension_ = 0;
    std::vector<LatticePoint> points_;
};

// All integer tuples of the axis-aligned box [lower, upper], lexicographic.
Lattice generate_box_lattice(const LatticePoint& lower, const LatticePoint& upper);

// Index pairs (i, j), i < j, of adjacent lattice points.
std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const Lattice& lattice);

}  // namespace latembed

#endif
