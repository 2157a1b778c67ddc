#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "latembed/fields.hpp"

using namespace latembed;

namespace {

Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

}  // namespace

TEST_CASE("activation equals one on the manifold and decays with distance") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const ActivationField field(plane);  // default epsilon 0.25
    CHECK(field.epsilon() == 0.25);

    CHECK(field.value(v3(3, -1, 0)) == 1.0);
    CHECK(field.value(v3(0, 0, 0.25)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(field.value(v3(0, 0, 6 * 0.25)) <= 3e-16);

    const ActivationField wide(plane, 2.0);
    CHECK(wide.value(v3(1, 1, 2.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("activation stays within [0, 1]") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const ActivationField field(sphere, 0.5);
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int evaluated = 0;
    for (int i = 0; i < 10000; ++i) {
        const Eigen::Vector3d x = v3(u(rng), u(rng), u(rng));
        if (x.norm() < 1e-3) continue;  // medial point
        const double a = field.value(x);
        REQUIRE(a >= 0.0);
        REQUIRE(a <= 1.0);
        ++evaluated;
    }
    CHECK(evaluated > 9900);
}

TEST_CASE("activation is strictly decreasing along a normal ray") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const ActivationField field(plane, 0.4);
    double prev = field.value(v3(0.3, 0.7, 0.0));
    for (int i = 1; i <= 40; ++i) {
        const double cur = field.value(v3(0.3, 0.7, 0.05 * i));
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("activation gradient points back toward the manifold") {
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    const double eps = 0.25;
    const ActivationField field(plane, eps);

    CHECK(field.gradient(v3(2, 5, 0)).norm() == 0.0);

    const Eigen::VectorXd g = field.gradient(v3(0, 0, eps));
    CHECK(std::abs(g[0]) <= 1e-15);
    CHECK(std::abs(g[1]) <= 1e-15);
    CHECK(g[2] == doctest::Approx(-2.0 * std::exp(-1.0) / eps).epsilon(1e-12));
}

TEST_CASE("activation gradient matches central finite differences") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const ActivationField field(sphere, 0.5);
    std::mt19937 rng(12u);
    std::normal_distribution<double> n;
    const double h = 1e-6;
    for (int i = 0; i < 50; ++i) {
        Eigen::Vector3d x = v3(n(rng), n(rng), n(rng)).normalized() * (0.6 + 0.001 * i);
        const Eigen::VectorXd g = field.gradient(x);
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d hi = x, lo = x;
            hi[k] += h;
            lo[k] -= h;
            const double fd = (field.value(hi) - field.value(lo)) / (2 * h);
            REQUIRE(std::abs(g[k] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("footpoint-reuse variants agree with the direct evaluations") {
    const auto sphere = make_sphere(v3(0, 0, 0), 1.0);
    const ActivationField field(sphere, 0.3);
    const Eigen::Vector3d x = v3(1.4, -0.2, 0.3);
    const Eigen::VectorXd p = sphere->closest_point(x);
    CHECK(field.value_from_footpoint(x, p) == field.value(x));
    CHECK((field.gradient_from_footpoint(x, p) - field.gradient(x)).norm() == 0.0);
}

TEST_CASE("activation field constructor validation") {
    CHECK_THROWS_AS(ActivationField(nullptr), Error);
    const auto plane = make_plane(v3(0, 0, 1), 0.0);
    CHECK_THROWS_AS(ActivationField(plane, 0.0), Error);
    CHECK_THROWS_AS(ActivationField(plane, -1.0), Error);
}

TEST_CASE("reinforcement marks closed regions with crisp values") {
    const ReinforcementField empty;
    CHECK(empty.value(v3(0, 0, 0)) == 0.0);
    CHECK(empty.empty());
    CHECK(empty.dimension() == -1);

    std::vector<Region> regions;
    regions.push_back(Ball{v3(0, 0, 0), 1.0});
    Eigen::VectorXd lo(3), hi(3);
    lo << 2, 2, 2;
    hi << 3, 4, 5;
    regions.push_back(Box{lo, hi});
    const ReinforcementField field(regions);
    CHECK(field.dimension() == 3);

    SUBCASE("ball membership includes the boundary sphere") {
        CHECK(field.value(v3(0, 0, 0)) == 1.0);
        CHECK(field.value(v3(1, 0, 0)) == 1.0);
        CHECK(field.value(v3(0, 0.6, 0.8)) == 1.0);
        CHECK(field.value(v3(1.0000001, 0, 0)) == 0.0);
    }
    SUBCASE("box membership includes faces and corners") {
        CHECK(field.value(v3(2.5, 3.0, 4.0)) == 1.0);
        CHECK(field.value(v3(2, 2, 2)) == 1.0);
        CHECK(field.value(v3(3, 4, 5)) == 1.0);
        CHECK(field.value(v3(3.0001, 4, 5)) == 0.0);
    }
    SUBCASE("values are exactly zero or one") {
        std::mt19937 rng(77u);
        std::uniform_real_distribution<double> u(-4.0, 6.0);
        for (int i = 0; i < 1000; ++i) {
            const double v = field.value(v3(u(rng), u(rng), u(rng)));
            REQUIRE((v == 0.0 || v == 1.0));
        }
    }
}

TEST_CASE("region order never changes the field") {
    std::vector<Region> fwd;
    fwd.push_back(Ball{v3(0, 0, 0), 1.5});
    fwd.push_back(Ball{v3(2, 0, 0), 0.5});
    Eigen::VectorXd lo(3), hi(3);
    lo << -1, -1, -1;
    hi << 0, 0, 0;
    fwd.push_back(Box{lo, hi});
    std::vector<Region> rev(fwd.rbegin(), fwd.rend());

    const ReinforcementField a(fwd);
    const ReinforcementField b(rev);
    std::mt19937 rng(13u);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const Eigen::Vector3d x = v3(u(rng), u(rng), u(rng));
        REQUIRE(a.value(x) == b.value(x));
    }
}

TEST_CASE("reinforcement validation") {
    std::vector<Region> bad_radius;
    bad_radius.push_back(Ball{v3(0, 0, 0), -1.0});
    CHECK_THROWS_AS(ReinforcementField{bad_radius}, Error);

    Eigen::VectorXd lo(3), hi(3);
    lo << 0, 0, 0;
    hi << -1, 1, 1;
    std::vector<Region> bad_box;
    bad_box.push_back(Box{lo, hi});
    CHECK_THROWS_AS(ReinforcementField{bad_box}, Error);

    std::vector<Region> mixed;
    mixed.push_back(Ball{v3(0, 0, 0), 1.0});
    mixed.push_back(Ball{Eigen::Vector2d(0, 0), 1.0});
    CHECK_THROWS_AS(ReinforcementField{mixed}, DimensionMismatch);

    std::vector<Region> ok;
    ok.push_back(Ball{v3(0, 0, 0), 1.0});
    const ReinforcementField field(ok);
    CHECK_THROWS_AS(field.contains(Eigen::Vector2d(0, 0)), DimensionMismatch);
}
