#include "latembed/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace latembed {

namespace {

void require_same_dimension(const LatticePoint& a, const LatticePoint& b,
                            const char* context) {
    if (a.dimension() != b.dimension())
        throw DimensionMismatch(a.dimension(), b.dimension(), context);
}

}  // namespace

std::string LatticePoint::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(coords_[i]);
    }
    return s + ")";
}

LatticePoint meet(const LatticePoint& a, const LatticePoint& b) {
    require_same_dimension(a, b, "meet");
    std::vector<std::int64_t> c(a.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = std::min(a.coords()[i], b.coords()[i]);
    return LatticePoint(std::move(c));
}

LatticePoint join(const LatticePoint& a, const LatticePoint& b) {
    require_same_dimension(a, b, "join");
    std::vector<std::int64_t> c(a.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = std::max(a.coords()[i], b.coords()[i]);
    return LatticePoint(std::move(c));
}

ContinuousPoint meet(const ContinuousPoint& a, const ContinuousPoint& b) {
    if (a.size() != b.size())
        throw DimensionMismatch(static_cast<int>(a.size()), static_cast<int>(b.size()), "meet");
    return a.cwiseMin(b);
}

ContinuousPoint join(const ContinuousPoint& a, const ContinuousPoint& b) {
    if (a.size() != b.size())
        throw DimensionMismatch(static_cast<int>(a.size()), static_cast<int>(b.size()), "join");
    return a.cwiseMax(b);
}

bool leq(const LatticePoint& a, const LatticePoint& b) {
    require_same_dimension(a, b, "leq");
    for (int i = 0; i < a.dimension(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

double grid_distance(const LatticePoint& a, const LatticePoint& b) {
    require_same_dimension(a, b, "grid_distance");
    double sum = 0.0;
    for (int i = 0; i < a.dimension(); ++i) {
        const double d = static_cast<double>(a[i] - b[i]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

bool is_adjacent(const LatticePoint& a, const LatticePoint& b) {
    require_same_dimension(a, b, "is_adjacent");
    int differing = 0;
    for (int i = 0; i < a.dimension(); ++i) {
        const std::int64_t diff = a[i] - b[i];
        if (diff == 0) continue;
        if (diff != 1 && diff != -1) return false;
        if (++differing > 1) return false;
    }
    return differing == 1;
}

ContinuousPoint embed(const LatticePoint& a) {
    ContinuousPoint x(a.dimension());
    for (int i = 0; i < a.dimension(); ++i)
        x[i] = static_cast<double>(a[i]);
    return x;
}

Lattice::Lattice(std::vector<LatticePoint> points) : points_(std::move(points)) {
    if (points_.empty())
        throw Error("Lattice: cannot infer dimension from an empty point list");
    dimension_ = points_.front().dimension();
    check_dimension();
    for (const auto& p : points_)
        if (p.dimension() != dimension_)
            throw DimensionMismatch(dimension_, p.dimension(), "Lattice");
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

void Lattice::check_dimension() const {
    if (dimension_ < 1)
        throw Error("Lattice: dimension must be at least 1, got " + std::to_string(dimension_));
}

std::size_t Lattice::index_of(const LatticePoint& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return npos;
    return static_cast<std::size_t>(it - points_.begin());
}

Lattice generate_box_lattice(const LatticePoint& lower, const LatticePoint& upper) {
    require_same_dimension(lower, upper, "generate_box_lattice");
    const int n = lower.dimension();
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) {
        if (lower[i] > upper[i])
            throw Error("generate_box_lattice: inverted bounds in component " +
                        std::to_string(i) + ": " + std::to_string(lower[i]) + " > " +
                        std::to_string(upper[i]));
        count *= static_cast<std::size_t>(upper[i] - lower[i] + 1);
    }

    std::vector<LatticePoint> points;
    points.reserve(count);
    std::vector<std::int64_t> cursor(lower.coords());
    while (true) {
        points.emplace_back(cursor);
        int i = n - 1;
        for (; i >= 0; --i) {
            if (cursor[static_cast<std::size_t>(i)] < upper[i]) {
                ++cursor[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < n; ++j)
                    cursor[static_cast<std::size_t>(j)] = lower[j];
                break;
            }
        }
        if (i < 0) break;
    }
    return Lattice(std::move(points));
}

std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const Lattice& lattice) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    // Neighbor lookup beats the quadratic scan for box-sized lattices.
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const LatticePoint& p = lattice[i];
        std::vector<std::int64_t> c(p.coords());
        for (int axis = 0; axis < lattice.dimension(); ++axis) {
            c[static_cast<std::size_t>(axis)] += 1;
            const std::size_t j = lattice.index_of(LatticePoint(c));
            c[static_cast<std::size_t>(axis)] -= 1;
            if (j == Lattice::npos) continue;
            pairs.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

}  // namespace latembed
