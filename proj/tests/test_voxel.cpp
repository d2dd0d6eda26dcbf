#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "isocube/rng.hpp"
#include "isocube/voxel.hpp"

using namespace isocube;

namespace {

struct GoldenRow {
  int k;
  long faces;
  long optima;
};

std::vector<GoldenRow> load_golden() {
  std::ifstream is(std::string(ISOCUBE_TEST_DATA_DIR) + "/oracle_d2_n4_golden.txt");
  REQUIRE(is.good());
  std::vector<GoldenRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    GoldenRow r{};
    ls >> r.k >> r.faces >> r.optima;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("incremental face bookkeeping matches recomputation") {
  VoxelSet v(3, 3);
  CounterRng rng(99);
  long filled = 0;
  std::vector<int> state(v.cells(), 0);
  for (int step = 0; step < 10000; ++step) {
    const long i = static_cast<long>(rng.next_u64() % v.cells());
    v.flip(i);
    state[i] = 1 - state[i];
    filled += state[i] ? 1 : -1;
    CHECK(v.interior_faces() == v.recompute_faces());
    CHECK(v.filled() == filled);
  }
  CHECK_THROWS_AS(v.flip(-1), std::out_of_range);
  CHECK_THROWS_AS(v.flip(v.cells()), std::out_of_range);
}

TEST_CASE("geometry scaling") {
  VoxelSet v(2, 4);
  CHECK(v.cell_volume() == doctest::Approx(1.0 / 16.0));
  CHECK(v.face_area() == doctest::Approx(0.25));
  v.flip(0);  // corner cell: two interior faces
  CHECK(v.interior_faces() == 2);
  CHECK(v.perimeter() == doctest::Approx(0.5));
  CHECK(v.volume() == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("exhaustive table matches the golden file") {
  for (const auto& row : load_golden()) {
    const ExhaustiveResult r = exhaustive_min(2, 4, row.k);
    CHECK(r.min_faces == row.faces);
    CHECK(static_cast<long>(r.optima.size()) == row.optima);
    long binom = 1;
    for (int i = 0; i < row.k; ++i) binom = binom * (16 - i) / (i + 1);
    CHECK(r.subsets_scanned == binom);
  }
}

TEST_CASE("single-cell optima are exactly the corners") {
  const ExhaustiveResult r = exhaustive_min(2, 4, 1);
  CHECK(r.min_perimeter == doctest::Approx(0.5));
  std::set<long> cells;
  for (const auto& ind : r.optima)
    for (long i = 0; i < 16; ++i)
      if (ind[i]) cells.insert(i);
  CHECK(cells == std::set<long>{0, 3, 12, 15});
}

TEST_CASE("half-filled minimum is the slab") {
  const ExhaustiveResult r = exhaustive_min(2, 4, 8);
  CHECK(r.min_perimeter == doctest::Approx(1.0));
  CHECK(r.optima.size() == 4);  // two horizontal and two vertical slabs
}

TEST_CASE("complement symmetry of the discrete perimeter") {
  for (int k = 0; k <= 16; ++k) {
    const ExhaustiveResult a = exhaustive_min(2, 4, k);
    const ExhaustiveResult b = exhaustive_min(2, 4, 16 - k);
    CHECK(a.min_faces == b.min_faces);
    CHECK(a.optima.size() == b.optima.size());
  }
}

TEST_CASE("symmetry reduction keeps one representative per orbit") {
  for (int k : {1, 3, 8}) {
    const ExhaustiveResult full = exhaustive_min(2, 4, k);
    const ExhaustiveResult reduced = exhaustive_min(2, 4, k, true);
    CHECK(reduced.min_faces == full.min_faces);
    CHECK(reduced.optima.size() <= full.optima.size());
    CHECK(reduced.optima.size() >= 1);
    // Orbits of the representatives regenerate the full optima list.
    const auto perms = detail::grid_symmetries(2, 4);
    std::set<std::vector<std::uint8_t>> regen;
    for (const auto& rep : reduced.optima) {
      for (const auto& p : perms) {
        std::vector<std::uint8_t> img(rep.size());
        for (std::size_t i = 0; i < rep.size(); ++i) img[p[i]] = rep[i];
        regen.insert(std::move(img));
      }
    }
    std::set<std::vector<std::uint8_t>> full_set(full.optima.begin(),
                                                 full.optima.end());
    CHECK(regen == full_set);
  }
  CHECK(exhaustive_min(2, 4, 1, true).optima.size() == 1);
}

TEST_CASE("size caps and argument validation") {
  CHECK_THROWS_AS(exhaustive_min(3, 3, 1), std::domain_error);       // 27 > 25
  CHECK_NOTHROW(exhaustive_min(3, 3, 1, true));                      // 27 <= 30
  CHECK_THROWS_AS(exhaustive_min(2, 6, 1, true), std::domain_error); // 36 > 30
  CHECK_THROWS_AS(exhaustive_min(2, 4, -1), std::domain_error);
  CHECK_THROWS_AS(exhaustive_min(2, 4, 17), std::domain_error);
  const ExhaustiveResult empty = exhaustive_min(2, 4, 0);
  CHECK(empty.min_perimeter == 0.0);
  CHECK(empty.optima.size() == 1);
}

TEST_CASE("bit-matrix text form") {
  VoxelSet v(2, 2);
  v.flip(0);
  CHECK(v.to_text() == "10\n00\n");
  v.flip(3);
  CHECK(v.to_text() == "10\n01\n");
  VoxelSet w(3, 2);
  w.flip(0);
  w.flip(7);
  CHECK(w.to_text() == "10\n00\n\n00\n01\n");
}
