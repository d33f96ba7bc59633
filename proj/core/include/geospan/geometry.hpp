#ifndef GEOSPAN_GEOMETRY_HPP
#define GEOSPAN_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace geospan {

// Maximum supported dimension. Disks are 2D only; hypercubes up to 4D.
inline constexpr int kMaxDim = 4;

using ShapeId = std::int64_t;
using Vec = std::array<double, kMaxDim>;

enum class ShapeKind : std::uint8_t { Disk, Cube };

// A disk (center, radius) or axis-aligned hypercube (center, side length).
// The diameter convention follows the largest horizontal segment: 2*radius
// for disks, side for cubes. All live shapes must have diameter in [4, psi].
struct Shape {
    ShapeId id = -1;
    ShapeKind kind = ShapeKind::Disk;
    std::int8_t dim = 2;
    Vec center{};
    double extent = 0.0;  // radius (disk) or side length (cube)

    double diameter() const { return kind == ShapeKind::Disk ? 2.0 * extent : extent; }
    // Per-axis reach from the center: radius for disks, side/2 for cubes.
    double reach() const { return kind == ShapeKind::Disk ? extent : extent * 0.5; }
};

// A dyadic cell grid over an axis-aligned box. The box side equals
// unit * 2^levels exactly; cells at level L have side unit * 2^L and are
// half-open per axis so every point lies in exactly one cell per level.
struct BoxSpec {
    Vec origin{};
    double side = 0.0;
    double unit = 1.0;
    std::int8_t dim = 2;
    std::int8_t levels = 0;

    // Box [0, 2^ceil(log2(psi))+1 ...]: smallest power of two strictly
    // greater than psi, with unit cells of size 1.
    static BoxSpec bounding(double psi, int dim);
    // Arbitrary box: unit is chosen as side / 2^ceil(log2(side)), the first
    // cell size <= 1 obtained by halving the box.
    static BoxSpec with_unit_cells(const Vec& origin, double side, int dim);

    double cell_side(int level) const { return unit * double(std::int64_t(1) << level); }
};

// Identifies one dyadic cell: level plus integer grid coordinates relative
// to the box origin (cell k spans [origin + k*side, origin + (k+1)*side)).
struct CellId {
    std::int8_t level = 0;
    std::array<std::int32_t, kMaxDim> ix{};

    friend bool operator==(const CellId&, const CellId&) = default;
    friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct CellIdHash {
    std::size_t operator()(const CellId& c) const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(std::uint64_t(std::uint8_t(c.level)));
        for (int k = 0; k < kMaxDim; ++k) mix(std::uint64_t(std::uint32_t(c.ix[k])));
        return std::size_t(h);
    }
};

// The axis-aligned box k*C: side k*|C|, concentric with C.
struct Region {
    Vec center{};
    double halfwidth = 0.0;
    std::int8_t dim = 2;
};

// One cell of the m x ... x m grid partitioning a quadtree cell.
struct EpsCellId {
    CellId cell;
    std::array<std::int16_t, kMaxDim> grid{};

    friend bool operator==(const EpsCellId&, const EpsCellId&) = default;
    friend auto operator<=>(const EpsCellId&, const EpsCellId&) = default;
};

struct EpsCellIdHash {
    std::size_t operator()(const EpsCellId& e) const {
        std::uint64_t h = CellIdHash{}(e.cell);
        for (int k = 0; k < kMaxDim; ++k) {
            h ^= std::uint64_t(std::uint16_t(e.grid[k])) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return std::size_t(h);
    }
};

// --- cell geometry -------------------------------------------------------

double cell_low(const BoxSpec& box, const CellId& c, int axis);
Vec cell_center(const BoxSpec& box, const CellId& c);
Region cell_region(const BoxSpec& box, const CellId& c);

bool point_in_box(const BoxSpec& box, const Vec& p);
// Half-open membership test against one cell.
bool point_in_cell(const BoxSpec& box, const CellId& c, const Vec& p);
// The unique cell at `level` containing p (half-open per axis).
CellId locate_cell(const BoxSpec& box, int level, const Vec& p);
CellId parent_cell(const CellId& c);
bool is_ancestor_or_self(const CellId& anc, const CellId& c);

// --- shape predicates (closed, exact on squared distances) ---------------

bool shape_contains_point(const Shape& s, const Vec& p);
// Closed containment of the cell's closed box in the shape.
bool shape_contains_cell(const BoxSpec& box, const CellId& c, const Shape& s);
bool shape_contains_region(const Shape& s, const Region& r);
// Strict containment in the interior of the shape.
bool interior_contains_region(const Shape& s, const Region& r);
bool shape_intersects_region(const Shape& s, const Region& r);
// 7*C-style boundary test: the region meets the shape but pokes out of its
// interior.
bool region_meets_boundary(const Shape& s, const Region& r);

bool region_contains_cell(const BoxSpec& box, const Region& r, const CellId& c);
bool region_intersects_cell(const BoxSpec& box, const Region& r, const CellId& c);
bool region_intersects_region(const Region& a, const Region& b);

// --- core operations ------------------------------------------------------

// Largest dyadic cell containing s.center and contained in s.
// Throws std::domain_error if the center lies outside the box.
CellId storing_cell(const Shape& s, const BoxSpec& box);
// The chain storing_cell(s) down to the unit cell, each containing s.center.
std::vector<CellId> storing_family(const Shape& s, const BoxSpec& box);
// k*C for odd k >= 1; throws std::invalid_argument on even k.
Region neighborhood(const BoxSpec& box, const CellId& c, int k);
// Closed intersection predicate; throws std::invalid_argument on mixed kinds.
bool intersects(const Shape& a, const Shape& b);
// Euclidean distance between centers.
double edge_weight(const Shape& a, const Shape& b);
double center_distance(const Vec& a, const Vec& b, int dim);

// Grid index of the eps-cell of `c` containing p, with m subdivisions per
// axis (m = ceil(1/eps)).
EpsCellId eps_cell_of(const BoxSpec& box, const CellId& c, int m, const Vec& p);

// --- serialization --------------------------------------------------------

// Line record: `kind id cx cy [cz...] extent`.
std::string format_shape(const Shape& s);
Shape parse_shape(const std::string& line);

}  // namespace geospan

#endif
