#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "latembed/lattice.hpp"

using namespace latembed;

namespace {

LatticePoint random_point(std::mt19937& rng, int dim) {
    std::uniform_int_distribution<std::int64_t> coord(-50, 50);
    std::vector<std::int64_t> c(static_cast<std::size_t>(dim));
    for (auto& v : c) v = coord(rng);
    return LatticePoint(std::move(c));
}

}  // namespace

TEST_CASE("meet and join are component-wise min and max") {
    CHECK(meet(LatticePoint{2, 5, 1}, LatticePoint{4, 3, 3}) == LatticePoint{2, 3, 1});
    CHECK(join(LatticePoint{2, 5, 1}, LatticePoint{4, 3, 3}) == LatticePoint{4, 5, 3});
    CHECK(meet(LatticePoint{1, 2}, LatticePoint{1, 2}) == LatticePoint{1, 2});
    CHECK(join(LatticePoint{1, 2}, LatticePoint{1, 2}) == LatticePoint{1, 2});
    CHECK(meet(LatticePoint{-7}, LatticePoint{4}) == LatticePoint{-7});
}

TEST_CASE("dimension mismatch is rejected with both dimensions reported") {
    const LatticePoint a{1, 2};
    const LatticePoint b{1, 2, 3};
    CHECK_THROWS_AS(meet(a, b), DimensionMismatch);
    CHECK_THROWS_AS(join(a, b), DimensionMismatch);
    try {
        meet(a, b);
        FAIL("expected DimensionMismatch");
    } catch (const DimensionMismatch& e) {
        CHECK(e.lhs_dimension == 2);
        CHECK(e.rhs_dimension == 3);
        CHECK(std::string(e.what()).find('2') != std::string::npos);
        CHECK(std::string(e.what()).find('3') != std::string::npos);
    }
    CHECK_THROWS_AS(grid_distance(a, b), DimensionMismatch);
    CHECK_THROWS_AS(is_adjacent(a, b), DimensionMismatch);
    CHECK_THROWS_AS(leq(a, b), DimensionMismatch);
}

TEST_CASE("lattice laws hold exactly on random triples, dimensions 1 through 5") {
    std::mt19937 rng(20260821u);
    for (int dim = 1; dim <= 5; ++dim) {
        for (int trial = 0; trial < 1000; ++trial) {
            const LatticePoint a = random_point(rng, dim);
            const LatticePoint b = random_point(rng, dim);
            const LatticePoint c = random_point(rng, dim);

            REQUIRE(meet(a, b) == meet(b, a));
            REQUIRE(join(a, b) == join(b, a));
            REQUIRE(meet(a, meet(b, c)) == meet(meet(a, b), c));
            REQUIRE(join(a, join(b, c)) == join(join(a, b), c));
            REQUIRE(meet(a, a) == a);
            REQUIRE(join(a, a) == a);
            REQUIRE(meet(a, join(a, b)) == a);
            REQUIRE(join(a, meet(a, b)) == a);
            REQUIRE(meet(a, join(b, c)) == join(meet(a, b), meet(a, c)));
            REQUIRE(join(a, meet(b, c)) == meet(join(a, b), join(a, c)));

            // meet/join generate the component-wise order
            REQUIRE(leq(meet(a, b), a));
            REQUIRE(leq(a, join(a, b)));
            REQUIRE((leq(a, b) == (meet(a, b) == a)));
            REQUIRE((leq(a, b) == (join(a, b) == b)));
        }
    }
}

TEST_CASE("grid distance is the Euclidean distance of the integer tuples") {
    CHECK(grid_distance(LatticePoint{0, 0}, LatticePoint{1, 0}) == 1.0);
    CHECK(grid_distance(LatticePoint{3, 4}, LatticePoint{3, 4}) == 0.0);
    CHECK(grid_distance(LatticePoint{0, 0}, LatticePoint{3, 4}) == 5.0);
    CHECK(grid_distance(LatticePoint{-1}, LatticePoint{2}) == 3.0);
}

TEST_CASE("adjacency means exactly one component differs by exactly one") {
    CHECK(is_adjacent(LatticePoint{0, 0}, LatticePoint{1, 0}));
    CHECK(is_adjacent(LatticePoint{0, 0}, LatticePoint{0, -1}));
    CHECK_FALSE(is_adjacent(LatticePoint{0, 0}, LatticePoint{1, 1}));
    CHECK_FALSE(is_adjacent(LatticePoint{0, 0}, LatticePoint{2, 0}));
    CHECK_FALSE(is_adjacent(LatticePoint{2, 2}, LatticePoint{2, 2}));
}

TEST_CASE("adjacency coincides with unit grid distance on random pairs") {
    std::mt19937 rng(7u);
    std::uniform_int_distribution<std::int64_t> coord(-3, 3);
    for (int dim = 1; dim <= 4; ++dim) {
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<std::int64_t> ca(static_cast<std::size_t>(dim));
            std::vector<std::int64_t> cb(static_cast<std::size_t>(dim));
            for (auto& v : ca) v = coord(rng);
            for (auto& v : cb) v = coord(rng);
            const LatticePoint a(ca);
            const LatticePoint b(cb);
            REQUIRE(is_adjacent(a, b) == (grid_distance(a, b) == 1.0));
        }
    }
}

TEST_CASE("box lattices enumerate lexicographically without duplicates") {
    SUBCASE("2 x 2 square") {
        const Lattice l = generate_box_lattice(LatticePoint{0, 0}, LatticePoint{1, 1});
        REQUIRE(l.size() == 4);
        CHECK(l[0] == LatticePoint{0, 0});
        CHECK(l[1] == LatticePoint{0, 1});
        CHECK(l[2] == LatticePoint{1, 0});
        CHECK(l[3] == LatticePoint{1, 1});
    }
    SUBCASE("singleton") {
        const Lattice l = generate_box_lattice(LatticePoint{5, -2}, LatticePoint{5, -2});
        REQUIRE(l.size() == 1);
        CHECK(l[0] == LatticePoint{5, -2});
    }
    SUBCASE("3 x 3 x 3 cube") {
        const Lattice l = generate_box_lattice(LatticePoint{0, 0, 0}, LatticePoint{2, 2, 2});
        CHECK(l.size() == 27);
        CHECK(std::is_sorted(l.begin(), l.end()));
        CHECK(std::adjacent_find(l.begin(), l.end()) == l.end());
    }
    SUBCASE("inverted bounds are rejected") {
        CHECK_THROWS_AS(generate_box_lattice(LatticePoint{1, 0}, LatticePoint{0, 1}), Error);
        CHECK_THROWS_AS(generate_box_lattice(LatticePoint{0, 0}, LatticePoint{1}),
                        DimensionMismatch);
    }
}

TEST_CASE("explicit point lists are deduplicated and ordered") {
    const Lattice l(std::vector<LatticePoint>{
        {1, 1}, {0, 0}, {1, 1}, {0, 1}, {0, 0}});
    REQUIRE(l.size() == 3);
    CHECK(l[0] == LatticePoint{0, 0});
    CHECK(l[1] == LatticePoint{0, 1});
    CHECK(l[2] == LatticePoint{1, 1});
    CHECK(l.index_of(LatticePoint{0, 1}) == 1);
    CHECK(l.index_of(LatticePoint{7, 7}) == Lattice::npos);
    CHECK_THROWS_AS(Lattice(std::vector<LatticePoint>{{0, 0}, {1}}), DimensionMismatch);
}

TEST_CASE("adjacent pairs match a brute-force scan") {
    const Lattice l = generate_box_lattice(LatticePoint{0, 0, 0}, LatticePoint{2, 1, 1});
    const auto pairs = adjacent_pairs(l);

    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j)
            if (is_adjacent(l[i], l[j])) expected.insert({i, j});

    std::set<std::pair<std::size_t, std::size_t>> got(pairs.begin(), pairs.end());
    CHECK(got == expected);
    for (const auto& [i, j] : pairs) {
        CHECK(i < j);
        CHECK(grid_distance(l[i], l[j]) == 1.0);
    }
    // interior cube count: edges of a 3 x 2 x 2 grid
    CHECK(pairs.size() == 2 * 2 * 2 + 3 * 1 * 2 + 3 * 2 * 1);
}

TEST_CASE("embedding reinterprets integer coordinates as reals") {
    const ContinuousPoint x = embed(LatticePoint{1, -2});
    REQUIRE(x.size() == 2);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == -2.0);
    CHECK(embed(LatticePoint{0, 0, 0}).isZero(0.0));
}

TEST_CASE("embedding commutes with meet and join") {
    const LatticePoint a{1, 3};
    const LatticePoint b{2, 2};
    const ContinuousPoint m = embed(meet(a, b));
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 2.0);
    CHECK(m == meet(embed(a), embed(b)));
    CHECK(embed(join(a, b)) == join(embed(a), embed(b)));

    std::mt19937 rng(99u);
    for (int dim = 1; dim <= 5; ++dim) {
        for (int trial = 0; trial < 1000; ++trial) {
            const LatticePoint p = random_point(rng, dim);
            const LatticePoint q = random_point(rng, dim);
            REQUIRE(embed(meet(p, q)) == meet(embed(p), embed(q)));
            REQUIRE(embed(join(p, q)) == join(embed(p), embed(q)));
            REQUIRE((embed(p) == embed(q)) == (p == q));
        }
    }
}
