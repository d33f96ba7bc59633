#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geospan/focused.hpp"
#include "geospan/oracle.hpp"
#include "test_util.hpp"

using namespace geospan;
using test::Rng;
using test::make_disk;

namespace {

FocusedConfig config(double eps, double psi) {
    FocusedConfig cfg;
    cfg.eps_user = eps;
    cfg.psi = psi;
    return cfg;
}

Shape spread_disk(Rng& rng, ShapeId id, double psi, double span) {
    Shape s;
    s.id = id;
    s.kind = ShapeKind::Disk;
    s.dim = 2;
    // Clustered around a few hubs so that intersections actually happen
    // across a huge region.
    const double hub_x = double(rng.below(8)) * span / 8.0 - span / 2.0;
    const double hub_y = double(rng.below(8)) * span / 8.0 - span / 2.0;
    s.center = {hub_x + rng.uniform(0, 3 * psi), hub_y + rng.uniform(0, 3 * psi)};
    s.extent = (4.0 + rng.uniform() * (psi - 4.0)) / 2.0;
    return s;
}

}  // namespace

TEST_CASE("first shape creates exactly one focused spanner") {
    FocusedDecomposition fd(config(0.5, 16.0));
    fd.insert(make_disk(1, 1000, -2000, 3));
    CHECK(fd.stats().focused_count == 1);
    // A shape with its psi/2 box inside the existing focal area adds none.
    fd.insert(make_disk(2, 1000.5, -2000.5, 2.5));
    CHECK(fd.stats().focused_count == 1);
    CHECK(fd.connected(1, 2) == intersects(make_disk(1, 1000, -2000, 3),
                                           make_disk(2, 1000.5, -2000.5, 2.5)));
}

TEST_CASE("far apart shapes get disjoint focused spanners and engines") {
    const double psi = 16.0;
    FocusedDecomposition fd(config(0.5, psi));
    fd.insert(make_disk(1, 0, 0, 3));
    fd.insert(make_disk(2, 100 * psi, 0, 3));
    CHECK(fd.stats().focused_count == 2);
    CHECK_FALSE(fd.connected(1, 2));
    // Connection areas separated by more than 6 psi share no engine.
    const auto m1 = fd.memberships(1);
    const auto m2 = fd.memberships(2);
    REQUIRE(m1.size() == 1);
    REQUIRE(m2.size() == 1);
    CHECK(m1[0] != m2[0]);
}

TEST_CASE("union spanner keeps the stretch bound over a spread region") {
    const double psi = 16.0;
    for (double eps : {0.5, 0.9}) {
        FocusedDecomposition fd(config(eps, psi));
        Rng rng(std::uint64_t(eps * 10));
        std::vector<ShapeId> live;
        ShapeId next = 1;
        for (int step = 0; step < 120; ++step) {
            if (live.empty() || rng.uniform() < 0.7) {
                const Shape s = spread_disk(rng, next++, psi, 1000.0 * psi);
                fd.insert(s);
                live.push_back(s.id);
            } else {
                const std::size_t k = rng.below(live.size());
                fd.delete_shape(live[k]);
                live.erase(live.begin() + std::ptrdiff_t(k));
            }
            if (step % 12 == 11) {
                const auto report = oracle::check_stretch(fd.spanner_edges(), fd.shapes(), eps);
                REQUIRE(report.ok);
            }
        }
    }
}

TEST_CASE("every intersecting pair is co-resident in some engine") {
    const double psi = 8.0;
    FocusedDecomposition fd(config(0.5, psi));
    Rng rng(99);
    ShapeId next = 1;
    for (int step = 0; step < 80; ++step) {
        fd.insert(spread_disk(rng, next++, psi, 50.0 * psi));
    }
    const auto& shapes = fd.shapes();
    for (auto it = shapes.begin(); it != shapes.end(); ++it) {
        auto jt = it;
        for (++jt; jt != shapes.end(); ++jt) {
            if (!intersects(it->second, jt->second)) continue;
            REQUIRE(fd.connected(it->first, jt->first));
        }
    }
}

TEST_CASE("connectivity over the union matches the oracle") {
    const double psi = 16.0;
    FocusedDecomposition fd(config(0.5, psi));
    Rng rng(1234);
    std::vector<ShapeId> live;
    ShapeId next = 1;
    for (int step = 0; step < 150; ++step) {
        if (live.empty() || rng.uniform() < 0.65) {
            const Shape s = spread_disk(rng, next++, psi, 200.0 * psi);
            fd.insert(s);
            live.push_back(s.id);
        } else {
            const std::size_t k = rng.below(live.size());
            fd.delete_shape(live[k]);
            live.erase(live.begin() + std::ptrdiff_t(k));
        }
        if (step % 10 == 9) {
            const auto graph = oracle::full_graph(fd.shapes());
            const auto labels = oracle::components(graph);
            for (int t = 0; t < 10; ++t) {
                const ShapeId a = live[rng.below(live.size())];
                const ShapeId b = live[rng.below(live.size())];
                REQUIRE(fd.connected(a, b) == (labels.at(a) == labels.at(b)));
            }
        }
    }
}

TEST_CASE("global rebuilds fire exactly per the N, N/2, 2N schedule") {
    const double psi = 8.0;
    FocusedDecomposition fd(config(0.5, psi));
    Rng rng(7);
    std::vector<ShapeId> live;
    ShapeId next = 1;

    // Shadow the schedule: N is |S| at the last rebuild; a rebuild fires
    // when ops since reach max(N,1), or |S| doubles, or halves.
    std::size_t shadow_n = 0;
    std::size_t shadow_ops = 0;
    std::size_t shadow_rebuilds = 0;
    for (int step = 0; step < 220; ++step) {
        if (live.empty() || rng.uniform() < 0.6) {
            const Shape s = spread_disk(rng, next++, psi, 40.0 * psi);
            fd.insert(s);
            live.push_back(s.id);
        } else {
            const std::size_t k = rng.below(live.size());
            fd.delete_shape(live[k]);
            live.erase(live.begin() + std::ptrdiff_t(k));
        }
        ++shadow_ops;
        const std::size_t n = live.size();
        if (shadow_ops >= std::max<std::size_t>(1, shadow_n) || n >= 2 * shadow_n ||
            2 * n <= shadow_n) {
            ++shadow_rebuilds;
            shadow_n = n;
            shadow_ops = 0;
        }
        REQUIRE(fd.rebuild_count() == shadow_rebuilds);
        REQUIRE(fd.stats().last_rebuild_size == shadow_n);
    }
    CHECK(shadow_rebuilds > 3);
}

TEST_CASE("membership counts stay bounded by the packing constant") {
    const double psi = 8.0;
    FocusedDecomposition fd(config(0.5, psi));
    Rng rng(55);
    ShapeId next = 1;
    for (int step = 0; step < 120; ++step) {
        fd.insert(spread_disk(rng, next++, psi, 30.0 * psi));
    }
    for (const auto& [id, s] : fd.shapes()) {
        CHECK(fd.memberships(id).size() <= 9);
    }
    CHECK(fd.stats().focused_count <= 2 * fd.shapes().size());
}
