#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "infoscout/world.hpp"

using namespace infoscout;

namespace {

std::string temp_path(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "infoscout_world_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

// Independent flood fill from the canonical start cell.
int reachable_free_cells(const GroundTruthMap& map, double sx, double sy) {
    const GridGeometry& g = map.geom;
    std::vector<char> seen(g.cell_count(), 0);
    std::vector<std::size_t> stack;
    std::size_t s = g.index(g.cell_x(sx), g.cell_y(sy));
    if (map.cells[s] != Cell::Free) return 0;
    seen[s] = 1;
    stack.push_back(s);
    int count = 0;
    while (!stack.empty()) {
        std::size_t c = stack.back();
        stack.pop_back();
        ++count;
        int cx = static_cast<int>(c % g.width_cells);
        int cy = static_cast<int>(c / g.width_cells);
        const int nx[4] = {cx + 1, cx - 1, cx, cx};
        const int ny[4] = {cy, cy, cy + 1, cy - 1};
        for (int k = 0; k < 4; ++k) {
            if (!g.in_bounds(nx[k], ny[k])) continue;
            std::size_t n = g.index(nx[k], ny[k]);
            if (map.cells[n] == Cell::Free && !seen[n]) {
                seen[n] = 1;
                stack.push_back(n);
            }
        }
    }
    return count;
}

int total_free_cells(const GroundTruthMap& map) {
    int n = 0;
    for (Cell c : map.cells)
        if (c == Cell::Free) ++n;
    return n;
}

}  // namespace

TEST_CASE("structured generator produces the documented grid size") {
    GroundTruthMap map = generate_structured(24.0, 14.0, 0.2, 1);
    CHECK(map.geom.width_cells == 120);
    CHECK(map.geom.height_cells == 70);
    CHECK(map.cells.size() == 120u * 70u);
    CHECK(map.geom.resolution == doctest::Approx(0.2));
}

TEST_CASE("structured generator is deterministic under a fixed seed") {
    GroundTruthMap a = generate_structured(24.0, 14.0, 0.2, 7);
    GroundTruthMap b = generate_structured(24.0, 14.0, 0.2, 7);
    REQUIRE(a.cells.size() == b.cells.size());
    CHECK(a.cells == b.cells);
    GroundTruthMap c = generate_structured(24.0, 14.0, 0.2, 8);
    CHECK(a.cells != c.cells);
}

TEST_CASE("structured maps keep the border occupied and the start free") {
    for (std::uint32_t seed : {1u, 2u, 3u, 11u}) {
        GroundTruthMap map = generate_structured(24.0, 14.0, 0.2, seed);
        for (int cx = 0; cx < map.geom.width_cells; ++cx) {
            CHECK(map.at(cx, 0) == Cell::Occupied);
            CHECK(map.at(cx, map.geom.height_cells - 1) == Cell::Occupied);
        }
        for (int cy = 0; cy < map.geom.height_cells; ++cy) {
            CHECK(map.at(0, cy) == Cell::Occupied);
            CHECK(map.at(map.geom.width_cells - 1, cy) == Cell::Occupied);
        }
        CHECK(is_free(map, Pose{1.2, 1.2, 0.0}));
    }
}

TEST_CASE("structured free space is one 4-connected component") {
    for (std::uint32_t seed : {1u, 5u, 9u}) {
        GroundTruthMap map = generate_structured(24.0, 14.0, 0.2, seed);
        CHECK(count_free_components(map) == 1);
        CHECK(reachable_free_cells(map, 1.2, 1.2) == total_free_cells(map));
    }
}

TEST_CASE("unstructured generator connectivity and determinism") {
    GroundTruthMap map = generate_unstructured(24.0, 14.0, 0.2, 12, 3);
    CHECK(count_free_components(map) == 1);
    CHECK(reachable_free_cells(map, 1.2, 1.2) == total_free_cells(map));
    CHECK(is_free(map, Pose{1.2, 1.2, 0.0}));
    GroundTruthMap again = generate_unstructured(24.0, 14.0, 0.2, 12, 3);
    CHECK(map.cells == again.cells);
}

TEST_CASE("generators terminate and stay connected across a seed sweep") {
    // overlapping thick obstacles can seal free pockets; the connectivity
    // repair must tunnel them open instead of spinning
    for (std::uint32_t seed = 1; seed <= 25; ++seed) {
        GroundTruthMap u = generate_unstructured(24.0, 14.0, 0.2, 12, seed);
        CHECK(count_free_components(u) == 1);
        GroundTruthMap s = generate_structured(24.0, 14.0, 0.2, seed);
        CHECK(count_free_components(s) == 1);
    }
}

TEST_CASE("unstructured with zero obstacles leaves only the border occupied") {
    GroundTruthMap map = generate_unstructured(4.0, 4.0, 1.0, 0, 0);
    REQUIRE(map.geom.width_cells == 4);
    REQUIRE(map.geom.height_cells == 4);
    int occupied = 0;
    for (Cell c : map.cells)
        if (c == Cell::Occupied) ++occupied;
    CHECK(occupied == 12);
    CHECK(map.at(1, 1) == Cell::Free);
    CHECK(map.at(2, 2) == Cell::Free);
}

TEST_CASE("generator argument validation") {
    CHECK_THROWS_AS(generate_structured(2.0, 14.0, 0.2, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_structured(24.0, 14.0, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_unstructured(24.0, 14.0, 0.2, -1, 1), std::invalid_argument);
}

TEST_CASE("map file round-trip preserves a generated maze") {
    GroundTruthMap map = generate_structured(24.0, 14.0, 0.2, 4);
    std::string path = temp_path("roundtrip.ismap");
    save_map(map, path);
    GroundTruthMap back = load_map(path);
    CHECK(back.geom.width_cells == map.geom.width_cells);
    CHECK(back.geom.height_cells == map.geom.height_cells);
    CHECK(back.geom.resolution == doctest::Approx(map.geom.resolution));
    CHECK(back.cells == map.cells);
}

TEST_CASE("map file threshold rule") {
    std::string path = temp_path("tiny.ismap");
    {
        std::ofstream out(path);
        out << "ISMAP1\n2 2\n0.5\n0 255\n0 255\n";
    }
    GroundTruthMap map = load_map(path);
    REQUIRE(map.geom.width_cells == 2);
    REQUIRE(map.geom.height_cells == 2);
    CHECK(map.at(0, 0) == Cell::Occupied);
    CHECK(map.at(1, 0) == Cell::Free);
    CHECK(map.at(0, 1) == Cell::Occupied);
    CHECK(map.at(1, 1) == Cell::Free);
    // 128 sits exactly on the free side of the threshold
    {
        std::ofstream out(path);
        out << "ISMAP1\n1 1\n0.5\n128\n";
    }
    CHECK(load_map(path).at(0, 0) == Cell::Free);
}

TEST_CASE("map file parse failures name the offending line") {
    std::string path = temp_path("bad.ismap");
    {
        std::ofstream out(path);
        out << "NOTISMAP\n2 2\n0.5\n0 0\n0 0\n";
    }
    CHECK_THROWS_WITH_AS(load_map(path), doctest::Contains(":1:"), std::runtime_error);
    {
        std::ofstream out(path);
        out << "ISMAP1\n2 2\n0.5\n0 0 0\n";
    }
    CHECK_THROWS_AS(load_map(path), std::runtime_error);
    {
        std::ofstream out(path);
        out << "ISMAP1\n2 2\n0.5\n0 0\n0 300\n";
    }
    CHECK_THROWS_WITH_AS(load_map(path), doctest::Contains("[0,255]"), std::runtime_error);
    {
        std::ofstream out(path);
        out << "ISMAP1\n2 2\n0.5\n0 0\n0 x\n";
    }
    CHECK_THROWS_AS(load_map(path), std::runtime_error);
    CHECK_THROWS_AS(load_map(temp_path("does_not_exist.ismap")), std::runtime_error);
}

TEST_CASE("is_free covers bounds, border and the canonical start") {
    GroundTruthMap map = generate_structured(24.0, 14.0, 0.2, 1);
    CHECK_FALSE(is_free(map, Pose{-1.0, 5.0, 0.0}));
    CHECK_FALSE(is_free(map, Pose{25.0, 5.0, 0.0}));
    CHECK_FALSE(is_free(map, Pose{0.1, 0.1, 0.0}));
    CHECK(is_free(map, Pose{1.2, 1.2, 0.0}));
}
