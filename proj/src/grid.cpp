#include "infobs/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "infobs/errors.hpp"

namespace infobs {

namespace {

// Relative slack for lattice classification; k*h is not exact in floating point.
constexpr double kGeomSlack = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view body, std::string_view text) {
    std::vector<double> out;
    std::string item;
    auto flush = [&]() {
        std::size_t b = item.find_first_not_of(" \t");
        std::size_t e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw GridError("empty coordinate in shape '" + std::string(text) + "'");
        }
        std::string tok = item.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(v)) {
            throw GridError("bad number '" + tok + "' in shape '" + std::string(text) + "'");
        }
        out.push_back(v);
        item.clear();
    };
    for (char c : body) {
        if (c == ',') {
            flush();
        } else {
            item.push_back(c);
        }
    }
    flush();
    return out;
}

}  // namespace

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double norm(const Point& p) { return std::hypot(p.x, p.y); }

int shape_dimension(const Shape& shape) {
    return std::visit(overloaded{[](const IntervalShape&) { return 1; },
                                 [](const DiskShape&) { return 2; },
                                 [](const RectShape&) { return 2; },
                                 [](const SignedDistanceShape& s) { return s.dimension; }},
                      shape);
}

double signed_distance(const Shape& shape, const Point& p) {
    return std::visit(
        overloaded{[&](const IntervalShape& s) {
                       double c = 0.5 * (s.a + s.b);
                       return std::abs(p.x - c) - 0.5 * (s.b - s.a);
                   },
                   [&](const DiskShape& s) { return std::hypot(p.x - s.cx, p.y - s.cy) - s.r; },
                   [&](const RectShape& s) {
                       double dx = std::abs(p.x - 0.5 * (s.x0 + s.x1)) - 0.5 * (s.x1 - s.x0);
                       double dy = std::abs(p.y - 0.5 * (s.y0 + s.y1)) - 0.5 * (s.y1 - s.y0);
                       double outside = std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
                       return outside + std::min(std::max(dx, dy), 0.0);
                   },
                   [&](const SignedDistanceShape& s) { return s.sdf(p); }},
        shape);
}

std::pair<Point, Point> bounding_box(const Shape& shape) {
    return std::visit(
        overloaded{[](const IntervalShape& s) { return std::pair{Point{s.a, 0.0}, Point{s.b, 0.0}}; },
                   [](const DiskShape& s) {
                       return std::pair{Point{s.cx - s.r, s.cy - s.r}, Point{s.cx + s.r, s.cy + s.r}};
                   },
                   [](const RectShape& s) { return std::pair{Point{s.x0, s.y0}, Point{s.x1, s.y1}}; },
                   [](const SignedDistanceShape& s) { return std::pair{s.lo, s.hi}; }},
        shape);
}

Shape parse_shape(std::string_view text) {
    std::size_t open = text.find('{');
    std::size_t close = text.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw GridError("shape '" + std::string(text) + "' must look like name{a,b,...}");
    }
    std::string name;
    for (char c : text.substr(0, open)) {
        if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(c);
    }
    for (char c : text.substr(close + 1)) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            throw GridError("trailing characters after shape '" + std::string(text) + "'");
        }
    }
    std::vector<double> v = parse_numbers(text.substr(open + 1, close - open - 1), text);
    auto need = [&](std::size_t n) {
        if (v.size() != n) {
            throw GridError("shape " + name + " expects " + std::to_string(n) + " numbers, got " +
                            std::to_string(v.size()));
        }
    };
    if (name == "interval") {
        need(2);
        if (!(v[0] < v[1])) throw GridError("interval{a,b} requires a < b");
        return IntervalShape{v[0], v[1]};
    }
    if (name == "disk") {
        need(3);
        if (!(v[2] > 0)) throw GridError("disk{cx,cy,r} requires r > 0");
        return DiskShape{v[0], v[1], v[2]};
    }
    if (name == "rect") {
        need(4);
        if (!(v[0] < v[2] && v[1] < v[3])) throw GridError("rect{x0,y0,x1,y1} requires x0 < x1 and y0 < y1");
        return RectShape{v[0], v[1], v[2], v[3]};
    }
    throw GridError("unknown shape '" + name + "' (expected interval, disk or rect)");
}

std::string format_shape(const Shape& shape) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{[&](const IntervalShape& s) { os << "interval{" << s.a << "," << s.b << "}"; },
                          [&](const DiskShape& s) { os << "disk{" << s.cx << "," << s.cy << "," << s.r << "}"; },
                          [&](const RectShape& s) {
                              os << "rect{" << s.x0 << "," << s.y0 << "," << s.x1 << "," << s.y1 << "}";
                          },
                          [&](const SignedDistanceShape& s) { os << s.label; }},
               shape);
    return os.str();
}

std::optional<NodeIndex> GridDomain::node_at(int ki, int kj) const {
    int a = ki - ki_min_;
    int b = kj - kj_min_;
    if (a < 0 || b < 0 || a >= nx_ || b >= ny_) return std::nullopt;
    std::int64_t v = lookup_[static_cast<std::size_t>(a) * ny_ + b];
    if (v < 0) return std::nullopt;
    return static_cast<NodeIndex>(v);
}

NodeIndex GridDomain::nearest_node(const Point& p) const {
    NodeIndex best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < points_.size(); ++i) {
        double d = distance(points_[i], p);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

GridPtr build_grid(const Shape& shape, double h, double gamma) {
    if (!(h > 0) || !std::isfinite(h)) {
        throw GridError("grid spacing h must be positive (h = " + std::to_string(h) + ")");
    }
    if (!(gamma > 0) || !std::isfinite(gamma)) {
        throw GridError("strip width gamma must be positive (gamma = " + std::to_string(gamma) + ")");
    }
    const int dim = shape_dimension(shape);
    if (dim != 1 && dim != 2) throw GridError("only dimensions 1 and 2 are supported");
    auto [lo, hi] = bounding_box(shape);
    if (!std::isfinite(lo.x) || !std::isfinite(hi.x) || !std::isfinite(lo.y) || !std::isfinite(hi.y)) {
        throw GridError("shape must be bounded");
    }

    auto grid = std::shared_ptr<GridDomain>(new GridDomain());
    grid->dimension_ = dim;
    grid->h_ = h;
    grid->gamma_ = gamma;
    grid->shape_ = shape;

    const double slack = kGeomSlack * h;
    auto kmin = [&](double v) { return static_cast<int>(std::ceil((v - gamma) / h - kGeomSlack)); };
    auto kmax = [&](double v) { return static_cast<int>(std::floor((v + gamma) / h + kGeomSlack)); };
    const int ki0 = kmin(lo.x), ki1 = kmax(hi.x);
    const int kj0 = dim == 2 ? kmin(lo.y) : 0;
    const int kj1 = dim == 2 ? kmax(hi.y) : 0;
    grid->ki_min_ = ki0;
    grid->kj_min_ = kj0;
    grid->nx_ = ki1 - ki0 + 1;
    grid->ny_ = kj1 - kj0 + 1;
    if (static_cast<double>(grid->nx_) * grid->ny_ > 5e7) {
        throw GridError("grid too large: h = " + std::to_string(h) + " gives " + std::to_string(grid->nx_) +
                        " x " + std::to_string(grid->ny_) + " lattice points");
    }
    grid->lookup_.assign(static_cast<std::size_t>(grid->nx_) * grid->ny_, -1);

    for (int ki = ki0; ki <= ki1; ++ki) {
        for (int kj = kj0; kj <= kj1; ++kj) {
            Point p{ki * h, dim == 2 ? kj * h : 0.0};
            double d = signed_distance(shape, p);
            bool interior = d < -slack;
            bool strip = !interior && d <= gamma + slack;
            if (!interior && !strip) continue;
            auto idx = static_cast<NodeIndex>(grid->points_.size());
            grid->lookup_[static_cast<std::size_t>(ki - ki0) * grid->ny_ + (kj - kj0)] = idx;
            grid->points_.push_back(p);
            grid->lattice_.emplace_back(ki, kj);
            grid->interior_.push_back(interior ? 1 : 0);
            (interior ? grid->interior_list_ : grid->strip_list_).push_back(idx);
        }
    }
    if (grid->interior_list_.empty()) {
        throw GridError("grid has no interior nodes: h = " + std::to_string(h) + " is too large for " +
                        format_shape(shape));
    }
    return grid;
}

NeighborhoodTable::NeighborhoodTable(const GridDomain& grid, double radius) : radius_(radius) {
    const double h = grid.spacing();
    const double r = radius / h;
    const double r2 = r * r * (1.0 + kGeomSlack) + kGeomSlack;
    const int reach = static_cast<int>(std::floor(r + kGeomSlack));
    std::vector<std::pair<int, int>> offsets;
    for (int di = -reach; di <= reach; ++di) {
        int rj = grid.dimension() == 2 ? reach : 0;
        for (int dj = -rj; dj <= rj; ++dj) {
            if (static_cast<double>(di) * di + static_cast<double>(dj) * dj <= r2) offsets.emplace_back(di, dj);
        }
    }
    // Lexicographic offsets over a lexicographically ordered lattice keep each row sorted.
    offsets_.reserve(grid.size() + 1);
    offsets_.push_back(0);
    members_.reserve(grid.size() * offsets.size());
    for (NodeIndex c = 0; c < grid.size(); ++c) {
        auto [ki, kj] = grid.lattice(c);
        for (auto [di, dj] : offsets) {
            if (auto m = grid.node_at(ki + di, kj + dj)) members_.push_back(*m);
        }
        offsets_.push_back(members_.size());
    }
}

bool NeighborhoodTable::contains(NodeIndex center, NodeIndex m) const {
    auto row = members(center);
    return std::binary_search(row.begin(), row.end(), m);
}

NeighborhoodTable neighborhoods(const GridDomain& grid, double eps) {
    const double slack = kGeomSlack * grid.spacing();
    if (!(eps >= grid.spacing() - slack)) {
        throw GridError("neighborhood degenerate: eps = " + std::to_string(eps) + " < h = " +
                        std::to_string(grid.spacing()));
    }
    if (eps > grid.strip_width() + slack) {
        throw GridError("strip thinner than step: eps = " + std::to_string(eps) + " > gamma = " +
                        std::to_string(grid.strip_width()));
    }
    return NeighborhoodTable(grid, eps);
}

NeighborhoodTable stencil(const GridDomain& grid, double radius) {
    if (!(radius >= grid.spacing() * (1.0 - kGeomSlack))) {
        throw GridError("stencil radius " + std::to_string(radius) + " is below the grid spacing " +
                        std::to_string(grid.spacing()));
    }
    return NeighborhoodTable(grid, radius);
}

double d_epsilon(const Point& x, const Point& y, double eps) {
    if (!(eps > 0)) throw ContractError("d_epsilon requires eps > 0");
    double q = distance(x, y) / eps;
    // Snap ratios that are integers up to rounding so lattice distances are exact.
    double k = std::ceil(q - kGeomSlack * std::max(1.0, q));
    return eps * std::max(k, 0.0);
}

bool strip_reachable(const GridDomain& grid, const NeighborhoodTable& table) {
    std::vector<std::uint8_t> seen(grid.size(), 0);
    std::deque<NodeIndex> queue;
    for (NodeIndex s : grid.strip_nodes()) {
        seen[s] = 1;
        queue.push_back(s);
    }
    // Balls are symmetric, so searching outward from the strip finds every node that can exit.
    while (!queue.empty()) {
        NodeIndex c = queue.front();
        queue.pop_front();
        for (NodeIndex m : table.members(c)) {
            if (!seen[m]) {
                seen[m] = 1;
                queue.push_back(m);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](std::uint8_t s) { return s != 0; });
}

}  // namespace infobs
