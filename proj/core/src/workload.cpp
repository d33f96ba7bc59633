#include "geospan/workload.hpp"

#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace geospan {

Workload generate_workload(const GenerateParams& params) {
    Workload w;
    w.dim = params.dim;
    w.psi = params.psi;
    w.seed = params.seed;

    double span = params.span;
    double origin = params.origin;
    if (span <= 0) {
        span = BoxSpec::bounding(params.psi, params.dim).side;
        origin = 0.0;
    }

    SplitMix rng(params.seed);
    std::vector<ShapeId> live;
    ShapeId next = 1;
    int inserted = 0;
    while (inserted < params.n) {
        if (!live.empty() && rng.uniform() < params.churn) {
            const std::size_t k = rng.below(live.size());
            WorkloadOp op;
            op.insert = false;
            op.id = live[k];
            live.erase(live.begin() + std::ptrdiff_t(k));
            w.ops.push_back(op);
            continue;
        }
        Shape s;
        s.id = next++;
        s.kind = params.kind;
        s.dim = std::int8_t(params.dim);
        for (int k = 0; k < params.dim; ++k) {
            // Snap to a 1/8 grid so predicates stay rational-friendly; the
            // range stays strictly inside half-open boxes of side `span`.
            s.center[k] = origin + double(rng.below(std::uint64_t(span * 8.0))) / 8.0;
        }
        const double dia = 4.0 + double(rng.below(std::uint64_t((params.psi - 4.0) * 8.0) + 1)) / 8.0;
        s.extent = params.kind == ShapeKind::Disk ? dia / 2.0 : dia;
        WorkloadOp op;
        op.insert = true;
        op.shape = s;
        op.id = s.id;
        w.ops.push_back(op);
        live.push_back(s.id);
        ++inserted;
    }
    return w;
}

std::string serialize_workload(const Workload& w) {
    std::ostringstream out;
    out.precision(17);
    out << "v1 " << w.dim << ' ' << w.psi << ' ' << w.seed << '\n';
    for (const WorkloadOp& op : w.ops) {
        if (op.insert) {
            out << "I " << format_shape(op.shape) << '\n';
        } else {
            out << "D " << op.id << '\n';
        }
    }
    return out.str();
}

Workload parse_workload(std::istream& in) {
    Workload w;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty workload");
    {
        std::istringstream head(line);
        std::string tag;
        head >> tag;
        if (tag != "v1") throw std::invalid_argument("unsupported workload version");
        if (!(head >> w.dim >> w.psi >> w.seed)) throw std::invalid_argument("bad header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream rec(line);
        std::string tag;
        rec >> tag;
        WorkloadOp op;
        if (tag == "I") {
            std::string rest;
            std::getline(rec, rest);
            op.insert = true;
            op.shape = parse_shape(rest);
            op.id = op.shape.id;
        } else if (tag == "D") {
            op.insert = false;
            if (!(rec >> op.id)) throw std::invalid_argument("bad delete record");
        } else {
            throw std::invalid_argument("unknown op tag: " + tag);
        }
        w.ops.push_back(op);
    }
    return w;
}

}  // namespace geospan
