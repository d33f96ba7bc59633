#include "geospan/point_spanner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace geospan {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

PointSpanner::PointSpanner(double eps, int dim) : eps_(eps), dim_(dim) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must be in (0,1)");
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
    // cos t - sin t = sqrt(2) cos(t + pi/4) >= 1/(1+eps)
    theta_ = std::acos(1.0 / (std::sqrt(2.0) * (1.0 + eps))) - kPi / 4.0;
    if (theta_ <= 0) throw std::logic_error("degenerate cone angle");
    if (dim_ == 2) {
        sectors_2d_ = int(std::ceil(2.0 * kPi / theta_));
    } else {
        face_cell_ = theta_ / (2.5 * std::sqrt(double(dim_ - 1)));
        face_grid_ = std::int64_t(std::ceil(2.0 / face_cell_)) + 1;
    }
}

std::int64_t PointSpanner::cone_index(const Vec& from, const Vec& to) const {
    if (dim_ == 2) {
        double a = std::atan2(to[1] - from[1], to[0] - from[0]);
        if (a < 0) a += 2.0 * kPi;
        auto s = std::int64_t(a / (2.0 * kPi) * double(sectors_2d_));
        if (s >= sectors_2d_) s = sectors_2d_ - 1;
        return s;
    }
    // Dominant-axis face, remaining coordinates normalized to [-1,1] and
    // gridded with cells of angular diameter <= theta.
    std::array<double, kMaxDim> d{};
    int axis = 0;
    double mag = 0;
    for (int k = 0; k < dim_; ++k) {
        d[k] = to[k] - from[k];
        if (std::abs(d[k]) > mag) {
            mag = std::abs(d[k]);
            axis = k;
        }
    }
    const int face = axis * 2 + (d[axis] < 0 ? 1 : 0);
    std::int64_t idx = face;
    for (int k = 0; k < dim_; ++k) {
        if (k == axis) continue;
        double v = d[k] / mag;  // in [-1, 1]
        auto g = std::int64_t(std::floor((v + 1.0) / face_cell_));
        if (g < 0) g = 0;
        if (g >= face_grid_) g = face_grid_ - 1;
        idx = idx * face_grid_ + g;
    }
    return idx;
}

void PointSpanner::add_ref(ShapeId a, ShapeId b) {
    const Pair e = a < b ? Pair{a, b} : Pair{b, a};
    if (!before_.count(e)) before_[e] = edge_refs_.count(e) != 0;
    touched_.insert(e);
    edge_refs_[e] += 1;
}

void PointSpanner::del_ref(ShapeId a, ShapeId b) {
    const Pair e = a < b ? Pair{a, b} : Pair{b, a};
    if (!before_.count(e)) before_[e] = edge_refs_.count(e) != 0;
    touched_.insert(e);
    auto it = edge_refs_.find(e);
    if (it == edge_refs_.end()) throw std::logic_error("edge refcount underflow");
    if (--it->second == 0) edge_refs_.erase(it);
}

EdgeDelta PointSpanner::drain_delta() {
    EdgeDelta delta;
    for (const Pair& e : touched_) {
        const bool now = edge_refs_.count(e) != 0;
        const bool was = before_.at(e);
        if (now && !was) delta.added.push_back(e);
        if (!now && was) delta.removed.push_back(e);
    }
    touched_.clear();
    before_.clear();
    return delta;
}

bool PointSpanner::better(const Vec& from, ShapeId cand, ShapeId incumbent) const {
    const Vec& pc = points_.at(cand);
    const Vec& pi = points_.at(incumbent);
    const double dc = center_distance(from, pc, dim_);
    const double di = center_distance(from, pi, dim_);
    if (dc != di) return dc < di;
    return cand < incumbent;
}

void PointSpanner::rescan_cone(ShapeId q, std::int64_t cone) {
    const Vec& qp = points_.at(q);
    ShapeId best = -1;
    for (const auto& [id, p] : points_) {
        if (id == q || p == qp) continue;
        if (cone_index(qp, p) != cone) continue;
        if (best < 0 || better(qp, id, best)) best = id;
    }
    auto& w = winners_[q];
    if (best >= 0) {
        w[cone] = best;
        add_ref(q, best);
    } else {
        w.erase(cone);
    }
}

void PointSpanner::refresh_chain(const std::vector<ShapeId>& before,
                                 const std::vector<ShapeId>& after) {
    for (std::size_t i = 0; i + 1 < before.size(); ++i) del_ref(before[i], before[i + 1]);
    for (std::size_t i = 0; i + 1 < after.size(); ++i) add_ref(after[i], after[i + 1]);
}

EdgeDelta PointSpanner::insert_point(ShapeId id, const Vec& p) {
    if (points_.count(id)) throw std::invalid_argument("duplicate point id");

    std::array<double, kMaxDim> key = p;
    auto& bucket = buckets_[key];
    std::vector<ShapeId> chain_before(bucket.begin(), bucket.end());

    points_.emplace(id, p);
    bucket.insert(id);
    std::vector<ShapeId> chain_after(bucket.begin(), bucket.end());
    refresh_chain(chain_before, chain_after);

    std::map<std::int64_t, ShapeId> own;
    for (const auto& [qid, qp] : points_) {
        if (qid == id || qp == p) continue;
        // Candidate for the new point's cones.
        const std::int64_t ci = cone_index(p, qp);
        auto it = own.find(ci);
        if (it == own.end() || better(p, qid, it->second)) own[ci] = qid;
        // The new point may beat q's current winner.
        const std::int64_t cj = cone_index(qp, p);
        auto& w = winners_[qid];
        auto jt = w.find(cj);
        if (jt == w.end()) {
            w[cj] = id;
            add_ref(qid, id);
        } else if (better(qp, id, jt->second)) {
            del_ref(qid, jt->second);
            jt->second = id;
            add_ref(qid, id);
        }
    }
    for (const auto& [cone, win] : own) add_ref(id, win);
    winners_[id] = std::move(own);

    return drain_delta();
}

EdgeDelta PointSpanner::delete_point(ShapeId id) {
    auto pit = points_.find(id);
    if (pit == points_.end()) throw std::invalid_argument("unknown point id");
    const Vec p = pit->second;

    for (const auto& [cone, win] : winners_[id]) del_ref(id, win);
    winners_.erase(id);

    std::array<double, kMaxDim> key = p;
    auto& bucket = buckets_[key];
    std::vector<ShapeId> chain_before(bucket.begin(), bucket.end());
    bucket.erase(id);
    std::vector<ShapeId> chain_after(bucket.begin(), bucket.end());
    refresh_chain(chain_before, chain_after);
    if (bucket.empty()) buckets_.erase(key);

    points_.erase(pit);

    // Re-point every cone that had the removed point as its winner.
    std::vector<std::pair<ShapeId, std::int64_t>> orphans;
    for (auto& [qid, w] : winners_) {
        for (auto& [cone, win] : w) {
            if (win == id) orphans.emplace_back(qid, cone);
        }
    }
    for (const auto& [qid, cone] : orphans) {
        del_ref(qid, id);
        winners_[qid].erase(cone);
        rescan_cone(qid, cone);
    }

    return drain_delta();
}

std::vector<std::tuple<ShapeId, ShapeId, double>> PointSpanner::edges() const {
    std::vector<std::tuple<ShapeId, ShapeId, double>> out;
    out.reserve(edge_refs_.size());
    for (const auto& [e, refs] : edge_refs_) {
        out.emplace_back(e.first, e.second,
                         center_distance(points_.at(e.first), points_.at(e.second), dim_));
    }
    return out;
}

std::size_t PointSpanner::max_degree() const {
    std::map<ShapeId, std::size_t> deg;
    for (const auto& [e, refs] : edge_refs_) {
        deg[e.first] += 1;
        deg[e.second] += 1;
    }
    std::size_t best = 0;
    for (const auto& [id, d] : deg) best = std::max(best, d);
    return best;
}

bool PointSpanner::verify_stretch(double slack) const {
    if (points_.size() < 2) return true;
    std::map<ShapeId, std::vector<std::pair<ShapeId, double>>> adj;
    for (const auto& [e, refs] : edge_refs_) {
        const double w = center_distance(points_.at(e.first), points_.at(e.second), dim_);
        adj[e.first].emplace_back(e.second, w);
        adj[e.second].emplace_back(e.first, w);
    }
    for (const auto& [src, sp] : points_) {
        std::map<ShapeId, double> dist;
        using Item = std::pair<double, ShapeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[src] = 0;
        heap.push({0, src});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            for (const auto& [v, w] : adj[u]) {
                const double nd = d + w;
                auto it = dist.find(v);
                if (it == dist.end() || nd < it->second) {
                    dist[v] = nd;
                    heap.push({nd, v});
                }
            }
        }
        for (const auto& [dst, dp] : points_) {
            if (dst == src) continue;
            const double direct = center_distance(sp, dp, dim_);
            auto it = dist.find(dst);
            if (it == dist.end()) return false;
            if (it->second > (1.0 + eps_) * direct + slack) return false;
        }
    }
    return true;
}

}  // namespace geospan
