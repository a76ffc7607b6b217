#include "infoscout/world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace infoscout {

namespace {

// Canonical start location kept free by both generators.
constexpr double kProtectedX = 1.2;
constexpr double kProtectedY = 1.2;

GroundTruthMap blank_map(double width_m, double height_m, double resolution) {
    if (width_m < 4.0 || height_m < 4.0)
        throw std::invalid_argument("map dimensions must be at least 4 m on each side");
    if (resolution <= 0.0)
        throw std::invalid_argument("map resolution must be positive");
    GroundTruthMap map;
    map.geom.width_cells = static_cast<int>(std::llround(width_m / resolution));
    map.geom.height_cells = static_cast<int>(std::llround(height_m / resolution));
    map.geom.resolution = resolution;
    map.geom.origin_x = 0.0;
    map.geom.origin_y = 0.0;
    map.cells.assign(map.geom.cell_count(), Cell::Free);
    for (int cx = 0; cx < map.geom.width_cells; ++cx) {
        map.at(cx, 0) = Cell::Occupied;
        map.at(cx, map.geom.height_cells - 1) = Cell::Occupied;
    }
    for (int cy = 0; cy < map.geom.height_cells; ++cy) {
        map.at(0, cy) = Cell::Occupied;
        map.at(map.geom.width_cells - 1, cy) = Cell::Occupied;
    }
    return map;
}

struct ProtectedCell {
    int cx, cy;
    bool inside;
};

ProtectedCell protected_cell(const GridGeometry& geom) {
    ProtectedCell p;
    p.cx = geom.cell_x(kProtectedX);
    p.cy = geom.cell_y(kProtectedY);
    p.inside = geom.in_bounds(p.cx, p.cy);
    return p;
}

// Several axis-aligned walls forming an open maze: vertical walls anchored
// alternately to the bottom and top border with a wide passage at the free
// end, plus a few free-standing horizontal stubs inside the corridors.
struct WallLayout {
    GroundTruthMap& map;
    std::mt19937& rng;
    ProtectedCell prot;
    double width_m;
    double height_m;

    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

    int cells_of(double meters) const {
        return std::max(1, static_cast<int>(std::llround(meters / map.geom.resolution)));
    }

    void put(int cx, int cy) {
        const GridGeometry& g = map.geom;
        if (cx <= 0 || cy <= 0 || cx >= g.width_cells - 1 || cy >= g.height_cells - 1) return;
        if (std::hypot(g.center_x(cx) - kProtectedX, g.center_y(cy) - kProtectedY) < 1.0) return;
        map.at(cx, cy) = Cell::Occupied;
    }

    void build() {
        const GridGeometry& g = map.geom;
        const double margin = 3.0;
        const double spacing = 4.5;
        const double usable = width_m - 2.0 * margin;
        const int n_walls = usable < 0.0 ? 0 : static_cast<int>(usable / spacing) + 1;
        bool from_bottom = unit() < 0.5;
        std::vector<int> wall_xs;
        for (int k = 0; k < n_walls; ++k) {
            const double base =
                margin + (n_walls == 1 ? usable * 0.5
                                       : usable * static_cast<double>(k) / (n_walls - 1));
            const double x = base + 1.5 * (unit() - 0.5);
            const int wx = std::clamp(g.cell_x(x), 2, g.width_cells - 3);
            const int passage =
                std::max(cells_of(2.0), cells_of(height_m * (0.25 + 0.15 * unit())));
            const int y_lo = from_bottom ? 1 : passage + 1;
            const int y_hi = from_bottom ? g.height_cells - 2 - passage : g.height_cells - 2;
            for (int cy = y_lo; cy <= y_hi; ++cy) put(wx, cy);
            wall_xs.push_back(wx);
            from_bottom = !from_bottom;
        }
        // stubs keep at least 1.2 m of corridor open on every side
        const int clear = cells_of(1.2);
        const int min_len = cells_of(1.2);
        for (std::size_t i = 0; i + 1 < wall_xs.size(); ++i) {
            if (unit() < 0.25) continue;
            const int x0 = wall_xs[i] + 1 + clear;
            const int x1 = wall_xs[i + 1] - 1 - clear;
            const int band_lo = 1 + clear;
            const int band_hi = g.height_cells - 2 - clear;
            if (x1 - x0 + 1 < min_len || band_hi <= band_lo) continue;
            const int sy = band_lo + static_cast<int>((band_hi - band_lo) * unit());
            const int max_len = x1 - x0 + 1;
            const int len = min_len + static_cast<int>((max_len - min_len) * unit());
            const int sx = x0 + static_cast<int>((max_len - len + 1) * unit());
            for (int cx = sx; cx < sx + len; ++cx) put(cx, sy);
        }
    }
};

std::vector<int> free_component_labels(const GroundTruthMap& map, int& n_components) {
    const GridGeometry& g = map.geom;
    std::vector<int> label(g.cell_count(), -1);
    n_components = 0;
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < g.cell_count(); ++s) {
        if (map.cells[s] != Cell::Free || label[s] >= 0) continue;
        int id = n_components++;
        label[s] = id;
        queue.push_back(s);
        while (!queue.empty()) {
            std::size_t c = queue.front();
            queue.pop_front();
            int cx = static_cast<int>(c % g.width_cells);
            int cy = static_cast<int>(c / g.width_cells);
            const int nx[4] = {cx + 1, cx - 1, cx, cx};
            const int ny[4] = {cy, cy, cy + 1, cy - 1};
            for (int k = 0; k < 4; ++k) {
                if (!g.in_bounds(nx[k], ny[k])) continue;
                std::size_t n = g.index(nx[k], ny[k]);
                if (map.cells[n] == Cell::Free && label[n] < 0) {
                    label[n] = id;
                    queue.push_back(n);
                }
            }
        }
    }
    return label;
}

// Merges 4-connected free components until one remains. Each pass runs a BFS
// from one component across interior cells (occupied ones included) to the
// nearest cell of any other component and frees the occupied cells on that
// path, so every pass removes at least one component and the carve is a
// shortest one-cell-wide tunnel.
void repair_connectivity(GroundTruthMap& map) {
    const GridGeometry& g = map.geom;
    for (;;) {
        int n_components = 0;
        std::vector<int> label = free_component_labels(map, n_components);
        if (n_components <= 1) return;

        std::vector<std::int32_t> parent(g.cell_count(), -1);
        std::vector<char> seen(g.cell_count(), 0);
        std::deque<std::size_t> queue;
        for (std::size_t s = 0; s < g.cell_count(); ++s) {
            if (map.cells[s] == Cell::Free && label[s] == 0) {
                seen[s] = 1;
                queue.push_back(s);
            }
        }
        std::size_t hit = g.cell_count();
        while (!queue.empty() && hit == g.cell_count()) {
            std::size_t c = queue.front();
            queue.pop_front();
            int cx = static_cast<int>(c % g.width_cells);
            int cy = static_cast<int>(c / g.width_cells);
            const int nx[4] = {cx + 1, cx - 1, cx, cx};
            const int ny[4] = {cy, cy, cy + 1, cy - 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] <= 0 || ny[k] <= 0 || nx[k] >= g.width_cells - 1 ||
                    ny[k] >= g.height_cells - 1)
                    continue;
                std::size_t n = g.index(nx[k], ny[k]);
                if (seen[n]) continue;
                seen[n] = 1;
                parent[n] = static_cast<std::int32_t>(c);
                if (map.cells[n] == Cell::Free && label[n] != 0) {
                    hit = n;
                    break;
                }
                queue.push_back(n);
            }
        }
        if (hit == g.cell_count()) return;  // no second component in the interior

        for (std::int32_t c = static_cast<std::int32_t>(hit); c >= 0;
             c = parent[static_cast<std::size_t>(c)]) {
            if (map.cells[static_cast<std::size_t>(c)] == Cell::Occupied)
                map.cells[static_cast<std::size_t>(c)] = Cell::Free;
        }
    }
}

}  // namespace

GroundTruthMap generate_structured(double width_m, double height_m, double resolution,
                                   std::uint32_t seed) {
    GroundTruthMap map = blank_map(width_m, height_m, resolution);
    std::mt19937 rng(seed);
    ProtectedCell prot = protected_cell(map.geom);
    WallLayout layout{map, rng, prot, width_m, height_m};
    layout.build();
    if (prot.inside) map.at(prot.cx, prot.cy) = Cell::Free;
    repair_connectivity(map);
    return map;
}

GroundTruthMap generate_unstructured(double width_m, double height_m, double resolution,
                                     int n_obstacles, std::uint32_t seed) {
    if (n_obstacles < 0) throw std::invalid_argument("n_obstacles must be non-negative");
    GroundTruthMap map = blank_map(width_m, height_m, resolution);
    std::mt19937 rng(seed);
    ProtectedCell prot = protected_cell(map.geom);
    std::uniform_real_distribution<double> ux(0.5, width_m - 0.5);
    std::uniform_real_distribution<double> uy(0.5, height_m - 0.5);
    std::uniform_real_distribution<double> uaxis(0.4, 1.6);
    std::uniform_real_distribution<double> uphi(0.0, M_PI);
    for (int i = 0; i < n_obstacles; ++i) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            double cx = ux(rng), cy = uy(rng);
            double a = uaxis(rng), b = uaxis(rng);
            double phi = uphi(rng);
            double cphi = std::cos(phi), sphi = std::sin(phi);
            auto inside = [&](double wx, double wy) {
                double dx = wx - cx, dy = wy - cy;
                double u = (dx * cphi + dy * sphi) / a;
                double v = (-dx * sphi + dy * cphi) / b;
                return u * u + v * v <= 1.0;
            };
            // Keep the canonical start area clear.
            double pd = std::hypot(cx - kProtectedX, cy - kProtectedY);
            if (pd < std::max(a, b) + 0.5) continue;
            int x0 = std::max(1, map.geom.cell_x(cx - std::max(a, b)));
            int x1 = std::min(map.geom.width_cells - 2, map.geom.cell_x(cx + std::max(a, b)));
            int y0 = std::max(1, map.geom.cell_y(cy - std::max(a, b)));
            int y1 = std::min(map.geom.height_cells - 2, map.geom.cell_y(cy + std::max(a, b)));
            for (int gy = y0; gy <= y1; ++gy)
                for (int gx = x0; gx <= x1; ++gx)
                    if (inside(map.geom.center_x(gx), map.geom.center_y(gy)))
                        map.at(gx, gy) = Cell::Occupied;
            break;
        }
    }
    if (prot.inside) map.at(prot.cx, prot.cy) = Cell::Free;
    repair_connectivity(map);
    return map;
}

GroundTruthMap load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };

    if (!next_line() || line.substr(0, 6) != "ISMAP1")
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": missing ISMAP1 magic line");
    if (!next_line())
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": missing dimensions");
    GroundTruthMap map;
    {
        std::istringstream hdr(line);
        if (!(hdr >> map.geom.width_cells >> map.geom.height_cells) ||
            map.geom.width_cells <= 0 || map.geom.height_cells <= 0)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad dimensions");
    }
    if (!next_line())
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": missing resolution");
    {
        std::istringstream hdr(line);
        if (!(hdr >> map.geom.resolution) || map.geom.resolution <= 0.0)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad resolution");
    }
    map.cells.reserve(map.geom.cell_count());
    while (map.cells.size() < map.geom.cell_count() && next_line()) {
        std::istringstream row(line);
        long value;
        while (row >> value) {
            if (value < 0 || value > 255)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": pixel out of range [0,255]");
            map.cells.push_back(value >= 128 ? Cell::Free : Cell::Occupied);
        }
        if (!row.eof())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric pixel");
    }
    if (map.cells.size() != map.geom.cell_count())
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": pixel count does not match declared dimensions");
    return map;
}

void save_map(const GroundTruthMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write map file: " + path);
    out << "ISMAP1\n" << map.geom.width_cells << ' ' << map.geom.height_cells << '\n';
    out << map.geom.resolution << '\n';
    for (int cy = 0; cy < map.geom.height_cells; ++cy) {
        for (int cx = 0; cx < map.geom.width_cells; ++cx) {
            out << (map.at(cx, cy) == Cell::Free ? 255 : 0);
            out << (cx + 1 == map.geom.width_cells ? '\n' : ' ');
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

bool is_free(const GroundTruthMap& map, const Pose& pose) {
    int cx = map.geom.cell_x(pose.x);
    int cy = map.geom.cell_y(pose.y);
    return map.geom.in_bounds(cx, cy) && map.at(cx, cy) == Cell::Free;
}

int count_free_components(const GroundTruthMap& map) {
    int n = 0;
    free_component_labels(map, n);
    return n;
}

}  // namespace infoscout
