#include "geospan/intersection_index.hpp"

#include <stdexcept>

#include "geospan/cube_interval_tree.hpp"
#include "geospan/disk_grid_index.hpp"

namespace geospan {

std::unique_ptr<IntersectionIndex> make_index(IndexKind kind, int dim, double psi) {
    switch (kind) {
        case IndexKind::DiskGrid:
            return std::make_unique<DiskGridIndex>(dim, psi);
        case IndexKind::CubeIntervalTree:
            return std::make_unique<CubeIntervalTree>(dim);
    }
    throw std::logic_error("unknown index kind");
}

}  // namespace geospan
