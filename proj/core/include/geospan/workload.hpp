#ifndef GEOSPAN_WORKLOAD_HPP
#define GEOSPAN_WORKLOAD_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geospan/geometry.hpp"

namespace geospan {

// Deterministic splitmix64 stream; identical bytes for identical seeds on
// any platform.
struct SplitMix {
    std::uint64_t state;

    explicit SplitMix(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

struct WorkloadOp {
    bool insert = true;
    Shape shape;  // valid when insert
    ShapeId id = -1;
};

struct Workload {
    int dim = 2;
    double psi = 16.0;
    std::uint64_t seed = 0;
    std::vector<WorkloadOp> ops;
};

struct GenerateParams {
    std::uint64_t seed = 1;
    int n = 64;           // inserts to generate
    double psi = 16.0;
    int dim = 2;
    ShapeKind kind = ShapeKind::Disk;
    double churn = 0.3;   // fraction of ops that delete a live shape
    double span = 0.0;    // region side; 0 = the [0, psi*]^dim box
    double origin = 0.0;  // region corner (same on all axes)
};

// Uniform centers in the region, diameters uniform in [4, psi], interleaved
// deletes at the churn ratio. Deterministic in the seed.
Workload generate_workload(const GenerateParams& params);

// Text format: header `v1 d psi seed`, then `I id kind cx cy [cz...] extent`
// or `D id` per line.
std::string serialize_workload(const Workload& w);
Workload parse_workload(std::istream& in);

}  // namespace geospan

#endif
