#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace infobs {

using NodeIndex = std::uint32_t;

/// Point in R^1 or R^2. For one-dimensional grids `y` is always zero.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);
double norm(const Point& p);

// Continuum domain descriptors. Omega is the open set {signed distance < 0}.
struct IntervalShape {
    double a = -1.0;
    double b = 1.0;
    friend bool operator==(const IntervalShape&, const IntervalShape&) = default;
};

struct DiskShape {
    double cx = 0.0;
    double cy = 0.0;
    double r = 1.0;
    friend bool operator==(const DiskShape&, const DiskShape&) = default;
};

struct RectShape {
    double x0 = -1.0;
    double y0 = -1.0;
    double x1 = 1.0;
    double y1 = 1.0;
    friend bool operator==(const RectShape&, const RectShape&) = default;
};

/// Arbitrary domain given by a signed distance callable and a bounding box of Omega.
struct SignedDistanceShape {
    int dimension = 2;
    std::function<double(const Point&)> sdf;
    Point lo;
    Point hi;
    std::string label = "sdf";

    friend bool operator==(const SignedDistanceShape& a, const SignedDistanceShape& b) {
        return a.label == b.label && a.dimension == b.dimension && a.lo == b.lo && a.hi == b.hi;
    }
};

using Shape = std::variant<IntervalShape, DiskShape, RectShape, SignedDistanceShape>;

int shape_dimension(const Shape& shape);
double signed_distance(const Shape& shape, const Point& p);
/// Bounding box of the closure of Omega.
std::pair<Point, Point> bounding_box(const Shape& shape);

/// Parses `interval{a,b}`, `disk{cx,cy,r}` or `rect{x0,y0,x1,y1}`.
Shape parse_shape(std::string_view text);
std::string format_shape(const Shape& shape);

/// Uniform axis-aligned lattice over Omega plus the boundary strip Gamma.
///
/// Lattice points are k*h (k integer) in every coordinate so the origin is
/// always a node. Nodes are stored in lexicographic order of their
/// coordinates. A node is interior when its signed distance is negative and
/// belongs to the strip when 0 <= dist <= gamma.
class GridDomain {
public:
    int dimension() const noexcept { return dimension_; }
    double spacing() const noexcept { return h_; }
    double strip_width() const noexcept { return gamma_; }
    const Shape& shape() const noexcept { return shape_; }

    std::size_t size() const noexcept { return points_.size(); }
    const Point& point(NodeIndex i) const { return points_.at(i); }
    std::span<const Point> points() const noexcept { return points_; }

    bool is_interior(NodeIndex i) const { return interior_.at(i) != 0; }
    bool is_strip(NodeIndex i) const { return interior_.at(i) == 0; }
    std::span<const NodeIndex> interior_nodes() const noexcept { return interior_list_; }
    std::span<const NodeIndex> strip_nodes() const noexcept { return strip_list_; }

    /// Integer lattice coordinates of node i.
    std::pair<int, int> lattice(NodeIndex i) const { return lattice_.at(i); }
    /// Node at the given lattice coordinates, if it belongs to the grid.
    std::optional<NodeIndex> node_at(int ki, int kj = 0) const;
    /// Node closest to p (Euclidean), ties to the lowest index.
    NodeIndex nearest_node(const Point& p) const;

    friend std::shared_ptr<const GridDomain> build_grid(const Shape& shape, double h, double gamma);

private:
    GridDomain() = default;

    int dimension_ = 1;
    double h_ = 0.0;
    double gamma_ = 0.0;
    Shape shape_;
    std::vector<Point> points_;
    std::vector<std::pair<int, int>> lattice_;
    std::vector<std::uint8_t> interior_;
    std::vector<NodeIndex> interior_list_;
    std::vector<NodeIndex> strip_list_;
    int ki_min_ = 0;
    int kj_min_ = 0;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<std::int64_t> lookup_;  // dense lattice box -> node index or -1
};

using GridPtr = std::shared_ptr<const GridDomain>;

/// Builds the lattice covering Omega union Gamma. Throws GridError on bad
/// parameters or when no node falls inside Omega.
GridPtr build_grid(const Shape& shape, double h, double gamma);

/// Closed lattice balls {m : |x_m - x_c| <= radius} for every node, stored as
/// CSR rows sorted by node index. Balls are truncated to the grid.
class NeighborhoodTable {
public:
    NeighborhoodTable() = default;
    NeighborhoodTable(const GridDomain& grid, double radius);

    double radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<const NodeIndex> members(NodeIndex center) const {
        return {members_.data() + offsets_[center], members_.data() + offsets_[center + 1]};
    }
    bool contains(NodeIndex center, NodeIndex m) const;
    std::size_t total_members() const noexcept { return members_.size(); }

private:
    double radius_ = 0.0;
    std::vector<std::size_t> offsets_;
    std::vector<NodeIndex> members_;
};

/// Move neighborhoods for step eps. Requires h <= eps <= gamma.
NeighborhoodTable neighborhoods(const GridDomain& grid, double eps);

/// Lattice balls of the given radius for residual stencils. Requires radius >= h.
NeighborhoodTable stencil(const GridDomain& grid, double radius);

/// Discrete distance eps * ceil(|x - y| / eps).
double d_epsilon(const Point& x, const Point& y, double eps);

/// Multi-source breadth-first search from the strip through eps-balls.
/// Returns true if every interior node can reach the strip.
bool strip_reachable(const GridDomain& grid, const NeighborhoodTable& table);

}  // namespace infobs
