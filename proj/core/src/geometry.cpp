#include "geospan/geometry.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace geospan {

BoxSpec BoxSpec::bounding(double psi, int dim) {
    if (psi <= 0) throw std::invalid_argument("psi must be positive");
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
    int levels = 1;
    while (double(std::int64_t(1) << levels) <= psi) ++levels;
    BoxSpec b;
    b.origin = Vec{};
    b.levels = std::int8_t(levels);
    b.unit = 1.0;
    b.side = double(std::int64_t(1) << levels);
    b.dim = std::int8_t(dim);
    return b;
}

BoxSpec BoxSpec::with_unit_cells(const Vec& origin, double side, int dim) {
    if (side <= 0) throw std::invalid_argument("box side must be positive");
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("unsupported dimension");
    int levels = 0;
    while (side / double(std::int64_t(1) << levels) > 1.0) ++levels;
    BoxSpec b;
    b.origin = origin;
    b.side = side;
    b.levels = std::int8_t(levels);
    b.unit = side / double(std::int64_t(1) << levels);
    b.dim = std::int8_t(dim);
    return b;
}

double cell_low(const BoxSpec& box, const CellId& c, int axis) {
    return box.origin[axis] + double(c.ix[axis]) * box.cell_side(c.level);
}

Vec cell_center(const BoxSpec& box, const CellId& c) {
    Vec v{};
    const double half = box.cell_side(c.level) * 0.5;
    for (int k = 0; k < box.dim; ++k) v[k] = cell_low(box, c, k) + half;
    return v;
}

Region cell_region(const BoxSpec& box, const CellId& c) {
    Region r;
    r.center = cell_center(box, c);
    r.halfwidth = box.cell_side(c.level) * 0.5;
    r.dim = box.dim;
    return r;
}

bool point_in_box(const BoxSpec& box, const Vec& p) {
    for (int k = 0; k < box.dim; ++k) {
        if (p[k] < box.origin[k] || p[k] >= box.origin[k] + box.side) return false;
    }
    return true;
}

bool point_in_cell(const BoxSpec& box, const CellId& c, const Vec& p) {
    const double side = box.cell_side(c.level);
    for (int k = 0; k < box.dim; ++k) {
        const double lo = cell_low(box, c, k);
        if (p[k] < lo || p[k] >= lo + side) return false;
    }
    return true;
}

CellId locate_cell(const BoxSpec& box, int level, const Vec& p) {
    CellId c;
    c.level = std::int8_t(level);
    const double side = box.cell_side(level);
    const std::int32_t cells = std::int32_t(std::int64_t(1) << (box.levels - level));
    for (int k = 0; k < box.dim; ++k) {
        double rel = (p[k] - box.origin[k]) / side;
        auto ix = std::int32_t(std::floor(rel));
        if (ix < 0) ix = 0;
        if (ix >= cells) ix = cells - 1;
        // floor can land one off for values on the cell boundary; fix up
        // against the exact half-open test.
        while (ix > 0 && p[k] < box.origin[k] + double(ix) * side) --ix;
        while (ix + 1 < cells && p[k] >= box.origin[k] + double(ix + 1) * side) ++ix;
        c.ix[k] = ix;
    }
    return c;
}

CellId parent_cell(const CellId& c) {
    CellId p;
    p.level = std::int8_t(c.level + 1);
    for (int k = 0; k < kMaxDim; ++k) {
        p.ix[k] = std::int32_t(std::floor(double(c.ix[k]) / 2.0));
    }
    return p;
}

bool is_ancestor_or_self(const CellId& anc, const CellId& c) {
    if (anc.level < c.level) return false;
    const int shift = anc.level - c.level;
    for (int k = 0; k < kMaxDim; ++k) {
        if ((c.ix[k] >> shift) != anc.ix[k]) return false;
    }
    return true;
}

bool shape_contains_point(const Shape& s, const Vec& p) {
    if (s.kind == ShapeKind::Disk) {
        double d2 = 0;
        for (int k = 0; k < s.dim; ++k) {
            const double d = p[k] - s.center[k];
            d2 += d * d;
        }
        return d2 <= s.extent * s.extent;
    }
    const double h = s.extent * 0.5;
    for (int k = 0; k < s.dim; ++k) {
        if (p[k] < s.center[k] - h || p[k] > s.center[k] + h) return false;
    }
    return true;
}

bool shape_contains_region(const Shape& s, const Region& r) {
    if (s.kind == ShapeKind::Disk) {
        // Farthest corner of the box from the disk center.
        double d2 = 0;
        for (int k = 0; k < s.dim; ++k) {
            const double d = std::abs(r.center[k] - s.center[k]) + r.halfwidth;
            d2 += d * d;
        }
        return d2 <= s.extent * s.extent;
    }
    const double h = s.extent * 0.5;
    for (int k = 0; k < s.dim; ++k) {
        if (r.center[k] - r.halfwidth < s.center[k] - h) return false;
        if (r.center[k] + r.halfwidth > s.center[k] + h) return false;
    }
    return true;
}

bool interior_contains_region(const Shape& s, const Region& r) {
    if (s.kind == ShapeKind::Disk) {
        double d2 = 0;
        for (int k = 0; k < s.dim; ++k) {
            const double d = std::abs(r.center[k] - s.center[k]) + r.halfwidth;
            d2 += d * d;
        }
        return d2 < s.extent * s.extent;
    }
    const double h = s.extent * 0.5;
    for (int k = 0; k < s.dim; ++k) {
        if (r.center[k] - r.halfwidth <= s.center[k] - h) return false;
        if (r.center[k] + r.halfwidth >= s.center[k] + h) return false;
    }
    return true;
}

bool shape_intersects_region(const Shape& s, const Region& r) {
    if (s.kind == ShapeKind::Disk) {
        // Squared distance from the disk center to the box.
        double d2 = 0;
        for (int k = 0; k < s.dim; ++k) {
            double d = std::abs(s.center[k] - r.center[k]) - r.halfwidth;
            if (d > 0) d2 += d * d;
        }
        return d2 <= s.extent * s.extent;
    }
    const double h = s.extent * 0.5;
    for (int k = 0; k < s.dim; ++k) {
        if (s.center[k] + h < r.center[k] - r.halfwidth) return false;
        if (s.center[k] - h > r.center[k] + r.halfwidth) return false;
    }
    return true;
}

bool region_meets_boundary(const Shape& s, const Region& r) {
    return shape_intersects_region(s, r) && !interior_contains_region(s, r);
}

bool shape_contains_cell(const BoxSpec& box, const CellId& c, const Shape& s) {
    return shape_contains_region(s, cell_region(box, c));
}

bool region_contains_cell(const BoxSpec& box, const Region& r, const CellId& c) {
    const Region cr = cell_region(box, c);
    for (int k = 0; k < box.dim; ++k) {
        if (cr.center[k] - cr.halfwidth < r.center[k] - r.halfwidth) return false;
        if (cr.center[k] + cr.halfwidth > r.center[k] + r.halfwidth) return false;
    }
    return true;
}

bool region_intersects_cell(const BoxSpec& box, const Region& r, const CellId& c) {
    const Region cr = cell_region(box, c);
    return region_intersects_region(r, cr);
}

bool region_intersects_region(const Region& a, const Region& b) {
    for (int k = 0; k < a.dim; ++k) {
        if (a.center[k] + a.halfwidth < b.center[k] - b.halfwidth) return false;
        if (a.center[k] - a.halfwidth > b.center[k] + b.halfwidth) return false;
    }
    return true;
}

CellId storing_cell(const Shape& s, const BoxSpec& box) {
    if (!point_in_box(box, s.center)) throw std::domain_error("shape center outside box");
    for (int level = box.levels; level >= 0; --level) {
        const CellId c = locate_cell(box, level, s.center);
        if (shape_contains_cell(box, c, s)) return c;
    }
    // Unreachable for shapes with diameter >= 4 and unit cells of size <= 1.
    throw std::logic_error("no storing cell: shape smaller than the unit cell");
}

std::vector<CellId> storing_family(const Shape& s, const BoxSpec& box) {
    const CellId top = storing_cell(s, box);
    std::vector<CellId> chain;
    chain.reserve(top.level + 1);
    for (int level = top.level; level >= 0; --level) {
        chain.push_back(locate_cell(box, level, s.center));
    }
    return chain;
}

Region neighborhood(const BoxSpec& box, const CellId& c, int k) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("neighborhood factor must be odd and >= 1");
    Region r = cell_region(box, c);
    r.halfwidth *= double(k);
    return r;
}

bool intersects(const Shape& a, const Shape& b) {
    if (a.kind != b.kind) throw std::invalid_argument("mixed shape kinds");
    if (a.kind == ShapeKind::Disk) {
        double d2 = 0;
        for (int k = 0; k < a.dim; ++k) {
            const double d = a.center[k] - b.center[k];
            d2 += d * d;
        }
        const double rr = a.extent + b.extent;
        return d2 <= rr * rr;
    }
    const double h = (a.extent + b.extent) * 0.5;
    for (int k = 0; k < a.dim; ++k) {
        if (std::abs(a.center[k] - b.center[k]) > h) return false;
    }
    return true;
}

double center_distance(const Vec& a, const Vec& b, int dim) {
    double d2 = 0;
    for (int k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        d2 += d * d;
    }
    return std::sqrt(d2);
}

double edge_weight(const Shape& a, const Shape& b) {
    return center_distance(a.center, b.center, a.dim);
}

EpsCellId eps_cell_of(const BoxSpec& box, const CellId& c, int m, const Vec& p) {
    EpsCellId e;
    e.cell = c;
    const double sub = box.cell_side(c.level) / double(m);
    for (int k = 0; k < box.dim; ++k) {
        const double lo = cell_low(box, c, k);
        auto g = std::int32_t(std::floor((p[k] - lo) / sub));
        if (g < 0) g = 0;
        if (g >= m) g = m - 1;
        while (g > 0 && p[k] < lo + double(g) * sub) --g;
        while (g + 1 < m && p[k] >= lo + double(g + 1) * sub) ++g;
        e.grid[k] = std::int16_t(g);
    }
    return e;
}

std::string format_shape(const Shape& s) {
    std::ostringstream out;
    out.precision(17);
    out << (s.kind == ShapeKind::Disk ? "disk" : "cube") << ' ' << s.id;
    for (int k = 0; k < s.dim; ++k) out << ' ' << s.center[k];
    out << ' ' << s.extent;
    return out.str();
}

Shape parse_shape(const std::string& line) {
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind)) throw std::invalid_argument("empty shape record");
    Shape s;
    if (kind == "disk") {
        s.kind = ShapeKind::Disk;
    } else if (kind == "cube") {
        s.kind = ShapeKind::Cube;
    } else {
        throw std::invalid_argument("unknown shape kind: " + kind);
    }
    if (!(in >> s.id)) throw std::invalid_argument("bad shape id");
    std::vector<double> nums;
    double v;
    while (in >> v) nums.push_back(v);
    if (nums.size() < 2 || nums.size() > std::size_t(kMaxDim) + 1) {
        throw std::invalid_argument("bad shape coordinates");
    }
    s.dim = std::int8_t(nums.size() - 1);
    for (std::size_t k = 0; k + 1 < nums.size(); ++k) s.center[k] = nums[k];
    s.extent = nums.back();
    return s;
}

}  // namespace geospan
