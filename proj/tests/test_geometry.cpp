#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geospan/geometry.hpp"
#include "test_util.hpp"

using namespace geospan;
using test::Rng;
using test::make_cube;
using test::make_disk;

namespace {

// Brute-force oracle: largest dyadic cell (over all levels and all index
// positions) containing the center under the half-open rule and contained
// in the shape.
CellId storing_cell_oracle(const Shape& s, const BoxSpec& box) {
    for (int level = box.levels; level >= 0; --level) {
        const std::int32_t cells = std::int32_t(std::int64_t(1) << (box.levels - level));
        for (std::int32_t x = 0; x < cells; ++x) {
            for (std::int32_t y = 0; y < cells; ++y) {
                CellId c;
                c.level = std::int8_t(level);
                c.ix = {x, y};
                if (point_in_cell(box, c, s.center) && shape_contains_cell(box, c, s)) return c;
            }
        }
    }
    FAIL("oracle found no storing cell");
    return {};
}

BoxSpec box16() {
    return BoxSpec::with_unit_cells(Vec{0, 0}, 16.0, 2);
}

}  // namespace

TEST_CASE("storing cell matches brute-force oracle on the worked examples") {
    const BoxSpec box = box16();

    const Shape a = make_disk(1, 0.5, 0.5, 2.0);
    const CellId ca = storing_cell(a, box);
    CHECK(ca == storing_cell_oracle(a, box));
    CHECK(ca.level == 0);
    CHECK(ca.ix[0] == 0);
    CHECK(ca.ix[1] == 0);

    const Shape b = make_disk(2, 5.5, 5.5, 2.5);
    const CellId cb = storing_cell(b, box);
    CHECK(cb == storing_cell_oracle(b, box));
    CHECK(cb.level == 1);  // side 2: [4,6]^2
    CHECK(cb.ix[0] == 2);
    CHECK(cb.ix[1] == 2);
}

TEST_CASE("storing cell of a grid-aligned cube uses the half-open rule") {
    const BoxSpec box = box16();
    // Cube [0,4]^2: center (2,2) lies in [0,4) per axis, and the level-2
    // cell [0,4]^2 is contained in the cube, so it is the storing cell.
    const Shape s = make_cube(3, 2, Vec{2, 2}, 4.0);
    const CellId c = storing_cell(s, box);
    CHECK(c == storing_cell_oracle(s, box));
    CHECK(c.level == 2);
    CHECK(c.ix[0] == 0);
    CHECK(c.ix[1] == 0);
}

TEST_CASE("storing cell on random shapes equals oracle") {
    const BoxSpec box = BoxSpec::bounding(8.0, 2);
    Rng rng(42);
    for (int t = 0; t < 200; ++t) {
        const auto kind = t % 2 == 0 ? ShapeKind::Disk : ShapeKind::Cube;
        const Shape s = test::random_shape(rng, t, kind, 2, box.side - 0.25, 8.0);
        CHECK(storing_cell(s, box) == storing_cell_oracle(s, box));
    }
}

TEST_CASE("storing family is the parent chain down to the unit cell") {
    const BoxSpec box = box16();
    const Shape s = make_disk(4, 5.5, 5.5, 2.5);
    const auto family = storing_family(s, box);
    REQUIRE(family.size() == 2);
    CHECK(family[0] == storing_cell(s, box));
    CHECK(family[1].level == 0);
    CHECK(family[1].ix[0] == 5);
    CHECK(family[1].ix[1] == 5);
    for (std::size_t i = 0; i + 1 < family.size(); ++i) {
        CHECK(parent_cell(family[i + 1]) == family[i]);
        CHECK(point_in_cell(box, family[i], s.center));
    }

    // r=8 disk at (5.5,5.5): the side-8 cell [0,8]^2 is contained (max
    // corner distance^2 = 60.5 <= 64), giving a 4-cell chain.
    const Shape big = make_disk(5, 5.5, 5.5, 8.0);
    const auto fam = storing_family(big, box);
    REQUIRE(fam.size() == 4);
    CHECK(fam[0] == storing_cell_oracle(big, box));
    CHECK(fam[0].level == 3);
}

TEST_CASE("unit storing cell gives a singleton family") {
    const BoxSpec box = box16();
    const Shape s = make_disk(6, 0.5, 0.5, 2.0);
    CHECK(storing_family(s, box).size() == 1);
}

TEST_CASE("storing cell rejects centers outside the box") {
    const BoxSpec box = box16();
    CHECK_THROWS_AS(storing_cell(make_disk(7, -1.0, 5.0, 2.0), box), std::domain_error);
}

TEST_CASE("neighborhood regions") {
    const BoxSpec box = box16();
    CellId c;  // [4,6]^2
    c.level = 1;
    c.ix = {2, 2};
    const Region r3 = neighborhood(box, c, 3);
    CHECK(r3.center[0] == doctest::Approx(5.0));
    CHECK(r3.halfwidth == doctest::Approx(3.0));

    const Region r1 = neighborhood(box, c, 1);
    CHECK(r1.halfwidth == doctest::Approx(1.0));

    CellId unit;  // [0,1]^2
    unit.level = 0;
    unit.ix = {0, 0};
    const Region r65 = neighborhood(box, unit, 65);
    CHECK(r65.center[0] == doctest::Approx(0.5));
    CHECK(r65.halfwidth == doctest::Approx(32.5));
    CHECK(r65.center[0] - r65.halfwidth == doctest::Approx(-32.0));

    CHECK_THROWS_AS(neighborhood(box, c, 2), std::invalid_argument);
}

TEST_CASE("intersection predicates are closed") {
    CHECK(intersects(make_disk(1, 0, 0, 2), make_disk(2, 4, 0, 2)));
    CHECK_FALSE(intersects(make_disk(1, 0, 0, 2), make_disk(2, 4.0001, 0, 2)));
    // Cubes sharing a corner: centers (2,2) and (6,6), side 4.
    CHECK(intersects(make_cube(3, 2, Vec{2, 2}, 4), make_cube(4, 2, Vec{6, 6}, 4)));
    CHECK_FALSE(intersects(make_cube(3, 2, Vec{2, 2}, 4), make_cube(4, 2, Vec{6.01, 6}, 4)));
    CHECK_THROWS_AS(intersects(make_disk(1, 0, 0, 2), make_cube(2, 2, Vec{0, 0}, 4)),
                    std::invalid_argument);
}

TEST_CASE("intersects is symmetric and matches the distance computation") {
    Rng rng(7);
    for (int t = 0; t < 500; ++t) {
        const Shape a = test::random_shape(rng, 1, ShapeKind::Disk, 2, 32, 10);
        const Shape b = test::random_shape(rng, 2, ShapeKind::Disk, 2, 32, 10);
        const bool direct = std::hypot(a.center[0] - b.center[0], a.center[1] - b.center[1]) <=
                            a.extent + b.extent;
        CHECK(intersects(a, b) == direct);
        CHECK(intersects(b, a) == direct);
    }
}

TEST_CASE("edge weight is the center distance") {
    CHECK(edge_weight(make_disk(1, 0, 0, 2), make_disk(2, 3, 4, 2)) == doctest::Approx(5.0));
    CHECK(edge_weight(make_disk(1, 1, 1, 2), make_disk(2, 1, 1, 3)) == 0.0);
}

TEST_CASE("diameter is bounded by 4*sqrt(2) times the storing cell side") {
    const BoxSpec box = BoxSpec::bounding(16.0, 2);
    Rng rng(99);
    for (int t = 0; t < 300; ++t) {
        const Shape s = test::random_shape(rng, t, ShapeKind::Disk, 2, box.side - 0.25, 16.0);
        const CellId c = storing_cell(s, box);
        CHECK(s.diameter() <= 4.0 * std::sqrt(2.0) * box.cell_side(c.level) + 1e-9);
    }
}

TEST_CASE("equal-size populated neighbor cells have pairwise-intersecting populations") {
    // Observation: for |C| = |C'| with C' inside 3*C, all pairs across
    // pi(C) x pi(C') intersect. Sample random shape pairs and check.
    const BoxSpec box = BoxSpec::bounding(16.0, 2);
    Rng rng(123);
    int checked = 0;
    for (int t = 0; t < 2000 && checked < 200; ++t) {
        const Shape a = test::random_shape(rng, 1, ShapeKind::Disk, 2, box.side - 0.25, 16.0);
        const Shape b = test::random_shape(rng, 2, ShapeKind::Disk, 2, box.side - 0.25, 16.0);
        const auto fa = storing_family(a, box);
        const auto fb = storing_family(b, box);
        for (const CellId& ca : fa) {
            for (const CellId& cb : fb) {
                if (ca.level != cb.level) continue;
                if (!region_contains_cell(box, neighborhood(box, ca, 3), cb)) continue;
                CHECK(intersects(a, b));
                ++checked;
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("shape records round-trip through the line format") {
    const Shape d = make_disk(17, 1.25, -3.5, 4.75);
    const Shape back = parse_shape(format_shape(d));
    CHECK(back.id == d.id);
    CHECK(back.kind == d.kind);
    CHECK(back.center == d.center);
    CHECK(back.extent == d.extent);

    Vec c{1, 2, 3};
    const Shape q = make_cube(9, 3, c, 5.0);
    const Shape qb = parse_shape(format_shape(q));
    CHECK(qb.dim == 3);
    CHECK(qb.center[2] == 3.0);
    CHECK_THROWS_AS(parse_shape("blob 1 2 3 4"), std::invalid_argument);
}
