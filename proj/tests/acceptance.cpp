// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails. Run with --calibrate to print measured constants
// (used once to freeze kSizeConstant below) instead of asserting.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "geospan/branch_store.hpp"
#include "geospan/connectivity_engine.hpp"
#include "geospan/focused.hpp"
#include "geospan/oracle.hpp"
#include "geospan/spanner_engine.hpp"
#include "geospan/workload.hpp"

using namespace geospan;

namespace {

// Spanner-size constant fitted on a calibration set (seeds 5000+, disjoint
// from the acceptance seeds) and frozen: max observed
// edge_count / (n eps^-2 log2(psi*) log2(1/eps)) was 9.84, dominated by
// eps = 0.9 where the budget denominator is smallest.
constexpr double kSizeConstant = 11.0;

constexpr double kStretchSlack = 1e-9;

struct Outcome {
    int id;
    std::string name;
    bool pass = true;
    std::string detail;
};

std::vector<Outcome> outcomes;
bool calibrate_mode = false;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    outcomes.push_back({id, name, pass, detail});
}

double size_budget(std::size_t n, double eps, int levels) {
    return double(n) * std::pow(eps, -2.0) * double(levels) * std::log2(1.0 / eps);
}

struct ChurnDriver {
    SplitMix rng;
    ShapeId next = 1;
    std::vector<ShapeId> live;

    explicit ChurnDriver(std::uint64_t seed) : rng(seed) {}

    // Returns an op: insert (shape filled) or delete (id filled).
    WorkloadOp step(ShapeKind kind, int dim, double span, double psi, double churn) {
        WorkloadOp op;
        if (!live.empty() && rng.uniform() < churn) {
            const std::size_t k = rng.below(live.size());
            op.insert = false;
            op.id = live[k];
            live.erase(live.begin() + std::ptrdiff_t(k));
            return op;
        }
        Shape s;
        s.id = next++;
        s.kind = kind;
        s.dim = std::int8_t(dim);
        for (int k = 0; k < dim; ++k) {
            s.center[k] = double(rng.below(std::uint64_t(span * 8.0) + 1)) / 8.0;
        }
        const double dia = 4.0 + double(rng.below(std::uint64_t((psi - 4.0) * 8.0) + 1)) / 8.0;
        s.extent = kind == ShapeKind::Disk ? dia / 2.0 : dia;
        op.insert = true;
        op.shape = s;
        op.id = s.id;
        live.push_back(s.id);
        return op;
    }
};

// criteria 1, 2, 10 share the same 100 workloads.
void run_stretch_size_tree() {
    const double psis[] = {8.0, 16.0, 32.0};
    const double epses[] = {0.25, 0.5, 0.9};
    bool stretch_ok = true, size_ok = true, tree_ok = true;
    double worst_ratio = 0.0;
    double max_size_norm = 0.0;
    double max_tree_norm = 0.0;
    std::string stretch_detail, size_detail, tree_detail;
    int workload_index = 0;

    for (double psi : psis) {
        for (double eps : epses) {
            for (int rep = 0; rep < 11 && workload_index < 100; ++rep, ++workload_index) {
                SpannerConfig cfg;
                cfg.eps_user = eps;
                cfg.psi = psi;
                cfg.mode = SpaceMode::Small;
                SpannerEngine engine(cfg);
                const int levels = engine.tree().box().levels;
                const double span = engine.tree().box().side - 0.25;
                const std::uint64_t seed =
                    calibrate_mode ? 5000 + std::uint64_t(workload_index)
                                   : 100 + std::uint64_t(workload_index);
                ChurnDriver driver(seed);
                for (int step = 0; step < 92; ++step) {
                    const WorkloadOp op =
                        driver.step(ShapeKind::Disk, 2, span, psi, 0.35);
                    if (op.insert) {
                        engine.insert(op.shape);
                    } else {
                        engine.delete_shape(op.id);
                    }
                    // criterion 1: stretch after every update.
                    const auto rep1 = oracle::check_stretch(
                        engine.edges(), engine.tree().shapes(), eps, kStretchSlack, 64, 200,
                        seed + std::uint64_t(step));
                    worst_ratio = std::max(worst_ratio, rep1.max_ratio);
                    if (!rep1.ok && stretch_ok) {
                        stretch_ok = false;
                        std::ostringstream d;
                        d << "violation at psi=" << psi << " eps=" << eps << " step=" << step
                          << " ratio=" << rep1.max_ratio;
                        stretch_detail = d.str();
                    }
                    // criterion 2: size bound against the frozen constant.
                    const std::size_t n = engine.tree().size();
                    if (n >= 2) {
                        const double norm =
                            double(engine.edges().size()) / size_budget(n, eps, levels);
                        max_size_norm = std::max(max_size_norm, norm);
                        if (norm > 2.0 * kSizeConstant && size_ok) {
                            size_ok = false;
                            std::ostringstream d;
                            d << "edge count " << engine.edges().size() << " exceeds 2c budget at n="
                              << n << " psi=" << psi << " eps=" << eps;
                            size_detail = d.str();
                        }
                    }
                    // criterion 10: quadtree node bound.
                    if (n >= 1) {
                        const double bound = (4.0 / 3.0) * double(n) * double(levels + 1);
                        max_tree_norm =
                            std::max(max_tree_norm, double(engine.tree().node_count()) / bound);
                        if (double(engine.tree().node_count()) > bound && tree_ok) {
                            tree_ok = false;
                            std::ostringstream d;
                            d << "nodes " << engine.tree().node_count() << " > bound " << bound
                              << " at n=" << n;
                            tree_detail = d.str();
                        }
                    }
                }
            }
        }
    }
    if (calibrate_mode) {
        std::cout << "calibration: max size norm = " << max_size_norm
                  << " (freeze c >= this), worst stretch ratio = " << worst_ratio
                  << ", max tree norm = " << max_tree_norm << "\n";
        return;
    }
    {
        std::ostringstream d;
        d << "100 workloads, worst dist ratio " << worst_ratio;
        report(1, "stretch soundness", stretch_ok, stretch_ok ? d.str() : stretch_detail);
    }
    {
        std::ostringstream d;
        d << "max normalized size " << max_size_norm << " vs c=" << kSizeConstant << " (2c ceiling)";
        report(2, "spanner size", size_ok, size_ok ? d.str() : size_detail);
    }
    {
        std::ostringstream d;
        d << "max node-count ratio " << max_tree_norm << " of 4/3*n*(log2(psi*)+1)";
        report(10, "quadtree bounds", tree_ok, tree_ok ? d.str() : tree_detail);
    }
}

void run_mode_equivalence() {
    bool ok = true;
    std::string detail = "12 workloads, big and small logs byte-identical";
    int workload_index = 0;
    for (double psi : {8.0, 16.0, 32.0}) {
        for (double eps : {0.25, 0.9}) {
            for (int rep = 0; rep < 2; ++rep, ++workload_index) {
                SpannerConfig cfg;
                cfg.eps_user = eps;
                cfg.psi = psi;
                cfg.kind = ShapeKind::Disk;
                cfg.mode = SpaceMode::Big;
                SpannerEngine big(cfg);
                cfg.mode = SpaceMode::Small;
                SpannerEngine small(cfg);
                std::ostringstream big_log, small_log;
                big.set_event_log(&big_log);
                small.set_event_log(&small_log);
                const double span = big.tree().box().side - 0.25;
                ChurnDriver driver(300 + std::uint64_t(workload_index));
                for (int step = 0; step < 130; ++step) {
                    const WorkloadOp op = driver.step(ShapeKind::Disk, 2, span, psi, 0.4);
                    if (op.insert) {
                        big.insert(op.shape);
                        small.insert(op.shape);
                    } else {
                        big.delete_shape(op.id);
                        small.delete_shape(op.id);
                    }
                }
                if (big_log.str() != small_log.str() || big_log.str().empty()) {
                    ok = false;
                    std::ostringstream d;
                    d << "logs diverge at psi=" << psi << " eps=" << eps << " rep=" << rep;
                    detail = d.str();
                }
            }
        }
    }
    report(3, "mode equivalence", ok, detail);
}

void run_branch_persistence() {
    bool ok = true;
    std::string detail;
    BranchStore bs(IndexKind::CubeIntervalTree, 2, 12.0);
    std::map<ShapeId, Shape> oracle_root;
    std::map<BranchLabel, std::set<ShapeId>> oracle_branches;
    SplitMix rng(4242);
    ShapeId next = 1;
    std::vector<BranchLabel> labels;
    std::size_t rebuilds = 0;

    auto make_cube = [&](ShapeId id) {
        Shape s;
        s.id = id;
        s.kind = ShapeKind::Cube;
        s.dim = 2;
        s.center = {double(rng.below(481)) / 8.0, double(rng.below(481)) / 8.0};
        s.extent = 4.0 + double(rng.below(65)) / 8.0;
        return s;
    };
    auto oracle_query = [&](BranchLabel label, const Shape& q) -> std::optional<ShapeId> {
        if (label == kRootBranch) {
            for (const auto& [id, s] : oracle_root) {
                if (intersects(s, q)) return id;
            }
            return std::nullopt;
        }
        for (ShapeId id : oracle_branches.at(label)) {
            if (intersects(oracle_root.at(id), q)) return id;
        }
        return std::nullopt;
    };

    for (int step = 0; step < 10000 && ok; ++step) {
        const double roll = rng.uniform();
        if (oracle_root.empty() || roll < 0.32) {
            const Shape s = make_cube(next++);
            bs.root_update(s, UpdateOp::Insert);
            oracle_root.emplace(s.id, s);
            for (auto& [label, set] : oracle_branches) set.insert(s.id);
        } else if (roll < 0.42) {
            auto it = oracle_root.begin();
            std::advance(it, std::ptrdiff_t(rng.below(oracle_root.size())));
            bs.root_update_delete(it->first);
            for (auto& [label, set] : oracle_branches) set.erase(it->first);
            oracle_root.erase(it);
        } else if (roll < 0.5 && labels.size() < 16) {
            const BranchLabel label = BranchLabel(labels.size() + 1);
            bs.branch(label);
            std::set<ShapeId> all;
            for (const auto& [id, s] : oracle_root) all.insert(id);
            oracle_branches[label] = all;
            labels.push_back(label);
        } else if (!labels.empty() && roll < 0.85) {
            const BranchLabel label = labels[rng.below(labels.size())];
            auto it = oracle_root.begin();
            std::advance(it, std::ptrdiff_t(rng.below(oracle_root.size())));
            const auto op = rng.uniform() < 0.5 ? UpdateOp::Insert : UpdateOp::Delete;
            bs.branch_update(label, it->first, op);
            if (op == UpdateOp::Insert) {
                oracle_branches[label].insert(it->first);
            } else {
                oracle_branches[label].erase(it->first);
            }
        } else if (roll < 0.87) {
            // z-accounting must be exact at every rebuild.
            std::size_t z = 0;
            for (const auto& [label, set] : oracle_branches) z += oracle_root.size() - set.size();
            if (bs.symmetric_difference() != z) {
                ok = false;
                detail = "z mismatch before rebuild at step " + std::to_string(step);
                break;
            }
            bs.rebuild();
            ++rebuilds;
        }
        const Shape q = make_cube(1 << 28);
        if (bs.query_min(kRootBranch, q) != oracle_query(kRootBranch, q)) {
            ok = false;
            detail = "root query mismatch at step " + std::to_string(step);
        }
        if (!labels.empty()) {
            const BranchLabel label = labels[rng.below(labels.size())];
            if (bs.query_min(label, q) != oracle_query(label, q)) {
                ok = false;
                detail = "branch query mismatch at step " + std::to_string(step);
            }
        }
    }
    if (ok) {
        detail = "10^4 ops over the interval-tree index, " + std::to_string(rebuilds) +
                 " rebuilds, all queries and z exact";
    }
    report(4, "branch persistence semantics", ok, detail);
}

void run_matching_invariants() {
    bool ok = true;
    std::string detail;
    std::size_t pairs_checked = 0;
    for (double psi : {8.0, 32.0}) {
        for (double eps : {0.25, 0.9}) {
            SpannerConfig cfg;
            cfg.eps_user = eps;
            cfg.psi = psi;
            cfg.mode = SpaceMode::Small;
            SpannerEngine engine(cfg);
            const double span = engine.tree().box().side - 0.25;
            ChurnDriver driver(700 + std::uint64_t(psi * 10 + eps * 10));
            for (int step = 0; step < 110 && ok; ++step) {
                const WorkloadOp op = driver.step(ShapeKind::Disk, 2, span, psi, 0.35);
                if (op.insert) {
                    engine.insert(op.shape);
                } else {
                    engine.delete_shape(op.id);
                }
                const QuadTree& tree = engine.tree();
                for (const auto& info : engine.active_pairs()) {
                    ++pairs_checked;
                    auto side = [&](const EpsCellId& e, bool gamma) {
                        std::set<ShapeId> out;
                        if (const NodeRecord* rec = tree.node(e.cell)) {
                            auto it = rec->eps.find(e.grid);
                            if (it != rec->eps.end()) out = gamma ? it->second.gamma : it->second.pi;
                        }
                        return out;
                    };
                    const auto gamma = side(info.left, true);
                    const auto pi = side(info.right, false);
                    std::set<ShapeId> used_l, used_r;
                    for (const auto& [l, r] : info.matching->edges()) {
                        if (!gamma.count(l) || !pi.count(r) || l == r ||
                            !intersects(*tree.shape(l), *tree.shape(r)) ||
                            !used_l.insert(l).second || !used_r.insert(r).second) {
                            ok = false;
                            detail = "invalid matching edge";
                        }
                    }
                    for (ShapeId l : gamma) {
                        if (used_l.count(l)) continue;
                        for (ShapeId r : pi) {
                            if (used_r.count(r) || l == r) continue;
                            if (intersects(*tree.shape(l), *tree.shape(r))) {
                                ok = false;
                                detail = "maximality violated";
                            }
                        }
                    }
                }
                if (engine.z_total() != 2 * engine.matching_total()) {
                    ok = false;
                    detail = "z != 2*sum|M| at step " + std::to_string(step);
                }
            }
        }
    }
    if (ok) {
        detail = "validity, maximality and z = 2*sum|M| exact over " +
                 std::to_string(pairs_checked) + " pair states";
    }
    report(5, "matching invariants", ok, detail);
}

void run_connectivity_equivalence() {
    bool ok = true;
    std::string detail;
    std::size_t queries = 0;
    int workload_index = 0;
    struct Combo {
        ShapeKind kind;
        int dim;
        int count;
    };
    const Combo combos[] = {{ShapeKind::Disk, 2, 34}, {ShapeKind::Cube, 2, 33},
                            {ShapeKind::Cube, 3, 33}};
    for (const Combo& combo : combos) {
        for (int rep = 0; rep < combo.count && ok; ++rep, ++workload_index) {
            const double psi = rep % 3 == 0 ? 8.0 : (rep % 3 == 1 ? 16.0 : 32.0);
            ConnectivityConfig cfg;
            cfg.psi = psi;
            cfg.dim = combo.dim;
            cfg.kind = combo.kind;
            ConnectivityEngine engine(cfg);
            const double span = engine.tree().box().side - 0.25;
            SplitMix rng(900 + std::uint64_t(workload_index));
            ChurnDriver driver(900 + std::uint64_t(workload_index));
            for (int step = 0; step < 500 && ok; ++step) {
                WorkloadOp op;
                // Every eighth insert nests a small shape inside a live big
                // one so engulfed cases that bypass perimeter matchings are
                // exercised.
                if (!driver.live.empty() && step % 8 == 3) {
                    const ShapeId host_id = driver.live[rng.below(driver.live.size())];
                    const Shape* host = engine.tree().shape(host_id);
                    Shape s;
                    s.id = driver.next++;
                    s.kind = combo.kind;
                    s.dim = std::int8_t(combo.dim);
                    for (int k = 0; k < combo.dim; ++k) {
                        const double jitter = double(rng.below(17)) / 8.0 - 1.0;
                        s.center[k] = host->center[k] + jitter;
                        s.center[k] = std::max(0.0, std::min(span, s.center[k]));
                    }
                    s.extent = combo.kind == ShapeKind::Disk ? 2.0 : 4.0;
                    op.insert = true;
                    op.shape = s;
                    op.id = s.id;
                    driver.live.push_back(s.id);
                } else {
                    op = driver.step(combo.kind, combo.dim, span, psi, 0.42);
                }
                if (op.insert) {
                    engine.insert(op.shape);
                } else {
                    engine.delete_shape(op.id);
                }
                if (driver.live.size() < 2) continue;
                const auto labels =
                    oracle::components(oracle::full_graph(engine.tree().shapes()));
                for (int t = 0; t < 6; ++t) {
                    const ShapeId a = driver.live[rng.below(driver.live.size())];
                    const ShapeId b = driver.live[rng.below(driver.live.size())];
                    ++queries;
                    if (engine.connected(a, b) != (labels.at(a) == labels.at(b))) {
                        ok = false;
                        std::ostringstream d;
                        d << "mismatch at workload " << workload_index << " step " << step
                          << " ids " << a << "," << b;
                        detail = d.str();
                        break;
                    }
                }
            }
        }
    }
    if (ok) {
        detail = "100 workloads x 500 ops, " + std::to_string(queries) +
                 " queries equal to the union-find oracle";
    }
    report(6, "connectivity equivalence", ok, detail);
}

void run_focused_criteria() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (int rep = 0; rep < 10 && ok; ++rep) {
        const double psi = rep % 2 == 0 ? 8.0 : 16.0;
        const double eps = rep % 3 == 0 ? 0.9 : 0.5;
        FocusedConfig cfg;
        cfg.eps_user = eps;
        cfg.psi = psi;
        FocusedDecomposition fd(cfg);
        SplitMix rng(1700 + std::uint64_t(rep));
        std::vector<ShapeId> live;
        ShapeId next = 1;
        std::size_t shadow_n = 0, shadow_ops = 0, shadow_rebuilds = 0;
        const double span = 1000.0 * psi;
        for (int step = 0; step < 160 && ok; ++step) {
            if (live.empty() || rng.uniform() < 0.68) {
                Shape s;
                s.id = next++;
                s.kind = ShapeKind::Disk;
                s.dim = 2;
                // Hubs hold chains along a line so spanner paths need
                // multiple hops; hubs are spread across the whole region.
                const std::uint64_t hub = rng.below(6);
                const double hub_x = double(hub) * span / 6.0 - span / 2.0;
                const double hub_y = double((hub * 2654435761ull) % 7) * span / 7.0 - span / 2.0;
                s.center = {hub_x + rng.uniform(0, 6 * psi), hub_y + rng.uniform(0, 4.0)};
                s.extent = (4.0 + rng.uniform() * (psi - 4.0)) / 2.0;
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
            if (fd.rebuild_count() != shadow_rebuilds) {
                ok = false;
                detail = "rebuild schedule deviates at step " + std::to_string(step);
                break;
            }
            const auto report1 = oracle::check_stretch(fd.spanner_edges(), fd.shapes(), eps,
                                                       kStretchSlack, 64, 200,
                                                       std::uint64_t(step));
            worst = std::max(worst, report1.max_ratio);
            if (!report1.ok) {
                ok = false;
                detail = "union stretch violated at step " + std::to_string(step);
            }
        }
    }
    if (ok) {
        std::ostringstream d;
        d << "10 spread workloads (1000 psi region), union stretch ok (worst ratio " << worst
          << "), rebuild schedule exact";
        detail = d.str();
    }
    report(7, "focused decomposition", ok, detail);
}

void run_interval_tree_criteria() {
    bool ok = true;
    std::string detail;
    // Correctness against a linear scan for d in {2,3,4}.
    for (int dim : {2, 3, 4}) {
        auto ix = make_index(IndexKind::CubeIntervalTree, dim, 10.0);
        SplitMix rng(2500 + std::uint64_t(dim));
        std::map<ShapeId, Shape> live;
        auto random_cube = [&](ShapeId id) {
            Shape s;
            s.id = id;
            s.kind = ShapeKind::Cube;
            s.dim = std::int8_t(dim);
            for (int k = 0; k < dim; ++k) s.center[k] = double(rng.below(801)) / 8.0;
            s.extent = 4.0 + double(rng.below(49)) / 8.0;
            return s;
        };
        for (ShapeId id = 1; id <= 1000; ++id) {
            const Shape s = random_cube(id);
            ix->insert(kRootBranch, s);
            live.emplace(id, s);
        }
        for (int t = 0; t < 1000 && ok; ++t) {
            const Shape q = random_cube(1 << 28);
            std::optional<ShapeId> want;
            for (const auto& [id, s] : live) {
                if (intersects(s, q)) {
                    want = id;
                    break;
                }
            }
            const auto got = ix->query_min(kRootBranch, q);
            if (got != want) {
                ok = false;
                detail = "query mismatch vs linear scan at d=" + std::to_string(dim);
            }
        }
    }
    // Touches-per-query slope over n up to 1e5 (d = 2).
    std::vector<double> ns{1000, 10000, 100000};
    std::vector<double> touches;
    for (double nd : ns) {
        const int n = int(nd);
        auto ix = make_index(IndexKind::CubeIntervalTree, 2, 8.0);
        SplitMix rng(31337);
        const double span = 8.0 * std::sqrt(double(n));
        auto random_cube = [&](ShapeId id) {
            Shape s;
            s.id = id;
            s.kind = ShapeKind::Cube;
            s.dim = 2;
            for (int k = 0; k < 2; ++k) {
                s.center[k] = double(rng.below(std::uint64_t(span * 8.0))) / 8.0;
            }
            s.extent = 4.0 + double(rng.below(33)) / 8.0;
            return s;
        };
        for (ShapeId id = 1; id <= n; ++id) ix->insert(kRootBranch, random_cube(id));
        auto& store = ix->store();
        const int queries = 200;
        const std::uint64_t before = store.touches_total();
        for (int t = 0; t < queries; ++t) {
            (void)ix->query_any(kRootBranch, random_cube(1 << 28));
        }
        touches.push_back(double(store.touches_total() - before) / queries);
    }
    // Least-squares slope in log-log space.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double x = std::log(ns[i]);
        const double y = std::log(touches[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = double(ns.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (calibrate_mode) {
        std::cout << "calibration: interval-tree touches " << touches[0] << "/" << touches[1]
                  << "/" << touches[2] << " slope " << slope << "\n";
    }
    if (slope >= 0.5) {
        ok = false;
        std::ostringstream d;
        d << "touch slope " << slope << " >= 0.5";
        detail = d.str();
    }
    if (ok) {
        std::ostringstream d;
        d << "scan-exact for d in {2,3,4}; touch slope " << slope << " (< 0.5) up to n=1e5";
        detail = d.str();
    }
    report(8, "hypercube interval tree", ok, detail);
}

void run_lower_bound_workload() {
    bool ok = true;
    std::string detail;
    std::vector<double> touched_per_update;
    std::vector<int> satellite_counts;
    for (double psi : {8.0, 16.0, 32.0, 64.0}) {
        SpannerConfig cfg;
        cfg.eps_user = 0.5;
        cfg.psi = psi;
        cfg.mode = SpaceMode::Big;
        SpannerEngine engine(cfg);
        const double cx = engine.tree().box().side / 2.0;

        // Star: one diameter-psi disk, satellites of diameter 4 on a
        // spacing-5 grid, each touching the center disk and none touching
        // each other.
        Shape center;
        center.id = 1;
        center.kind = ShapeKind::Disk;
        center.dim = 2;
        center.center = {cx, cx};
        center.extent = psi / 2.0;

        std::vector<Shape> sats;
        ShapeId next = 2;
        const double reach = psi / 2.0 + 2.0;
        for (double dx = -reach; dx <= reach; dx += 5.0) {
            for (double dy = -reach; dy <= reach; dy += 5.0) {
                if (std::hypot(dx, dy) > reach) continue;
                Shape s;
                s.id = next++;
                s.kind = ShapeKind::Disk;
                s.dim = 2;
                s.center = {cx + dx, cx + dy};
                s.extent = 2.0;
                sats.push_back(s);
            }
        }
        satellite_counts.push_back(int(sats.size()));
        for (const Shape& s : sats) engine.insert(s);

        auto graph_delta = [&](const std::vector<EdgeEvent>& events) {
            std::map<std::pair<ShapeId, ShapeId>, int> net;
            for (const EdgeEvent& e : events) net[{e.u, e.v}] += e.added ? 1 : -1;
            std::size_t touched = 0;
            for (const auto& [key, d] : net) touched += std::size_t(d != 0);
            return touched;
        };
        std::size_t total = 0;
        int ops = 0;
        engine.insert(center);
        for (int cycle = 0; cycle < 5; ++cycle) {
            total += graph_delta(engine.delete_shape(center.id));
            ++ops;
            total += graph_delta(engine.insert(center));
            ++ops;
        }
        touched_per_update.push_back(double(total) / ops);
    }
    std::ostringstream d;
    d << "edges touched per update:";
    for (std::size_t i = 0; i < touched_per_update.size(); ++i) {
        d << ' ' << touched_per_update[i] << "(sats " << satellite_counts[i] << ")";
    }
    for (std::size_t i = 0; i + 1 < touched_per_update.size(); ++i) {
        const double ratio = touched_per_update[i + 1] / touched_per_update[i];
        d << " ratio " << ratio;
        if (ratio < 2.0) ok = false;  // quadratic growth within a factor 2
    }
    report(9, "lower bound workload", ok, d.str());
}

}  // namespace

int main(int argc, char** argv) {
    calibrate_mode = argc > 1 && std::strcmp(argv[1], "--calibrate") == 0;
    const auto start = std::chrono::steady_clock::now();

    run_stretch_size_tree();
    if (!calibrate_mode) {
        run_mode_equivalence();
        run_branch_persistence();
        run_matching_invariants();
        run_connectivity_equivalence();
        run_focused_criteria();
    }
    run_interval_tree_criteria();
    if (!calibrate_mode) {
        run_lower_bound_workload();
    }

    const auto stop = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(stop - start).count();

    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    bool all_ok = true;
    for (const Outcome& o : outcomes) {
        std::cout << "criterion " << o.id << " (" << o.name << "): "
                  << (o.pass ? "PASS" : "FAIL") << " — " << o.detail << '\n';
        all_ok = all_ok && o.pass;
    }
    std::cout << "total time: " << secs << " s\n";
    return all_ok ? 0 : 1;
}
