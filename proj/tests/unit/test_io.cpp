#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "monotone/catalog.hpp"
#include "monotone/config.hpp"
#include "monotone/error.hpp"
#include "monotone/field_io.hpp"
#include "monotone/format.hpp"
#include "monotone/parallel.hpp"

using namespace monotone;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(0.3) == "0.3");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  for (double v : {1.0 / 3.0, std::acos(-1.0), 6.02214076e23, 5e-324}) CHECK(parse_double(format_double(v), "v") == v);
  CHECK_THROWS_AS(parse_double("1.5x", "v"), ParseError);
  CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(trim("  x y \t") == "x y");
}

TEST_CASE("config access and overrides") {
  Config cfg = Config::parse_string("[grid]\ndim = 2\nlo = -1.0\nnodes = [3, 5]\n[model]\nkind = \"zero\"\n");
  CHECK(cfg.get_int("grid.dim") == 2);
  CHECK(cfg.get_double("grid.lo") == -1.0);
  CHECK(cfg.get_doubles("grid.nodes") == std::vector<double>{3, 5});
  CHECK(cfg.get_double("grid.hi", 4.0) == 4.0);
  CHECK_THROWS_AS(cfg.get_string("model.missing"), ParseError);
  CHECK(cfg.unused_keys() == std::vector<std::string>{"model.kind"});
  CHECK_THROWS_AS(cfg.require_all_used(), ParseError);
  CHECK(cfg.get_string("model.kind") == "zero");
  CHECK_NOTHROW(cfg.require_all_used());
  CHECK(cfg.resolved()["grid.hi"] == 4.0);

  cfg.set_override("grid.lo=-2.5");
  cfg.set_override("model.kind=helmholtz");
  CHECK(cfg.get_double("grid.lo") == -2.5);
  CHECK(cfg.get_string("model.kind") == "helmholtz");
  CHECK_THROWS_AS(cfg.set_override("novalue"), ParseError);
  CHECK_THROWS_AS(Config::parse_string("[grid\n"), ParseError);
  CHECK_THROWS_AS(cfg.get_int("model.kind"), ParseError);
}

TEST_CASE("field files round-trip exactly") {
  const auto g = CartesianGrid({Axis{-1, 1, 5}, Axis{0, 2, 4}});
  Field f = noise_field(g, 2, 42, 3.0);
  f.meta().model = "zero";
  std::stringstream ss;
  write_field(f, ss);
  const Field back = read_field(ss);
  CHECK(back.grid() == g);
  CHECK(back.values() == f.values());
  CHECK(back.meta().model == "zero");

  std::stringstream csv;
  write_field_csv(f, csv);
  const Field from_csv = read_field_csv(csv);
  CHECK(from_csv.grid() == g);
  CHECK(from_csv.values() == f.values());

  const SpaceTimeField st = noise_spacetime(SpaceTimeGrid(CartesianGrid::cube(1, 0, 1, 4), 0, 1, 3), 1, 7);
  std::stringstream sts;
  write_spacetime_field(st, sts);
  const SpaceTimeField st_back = read_spacetime_field(sts);
  CHECK(st_back.slices() == 3);
  for (int k = 0; k < 3; ++k) CHECK(st_back.slice(k).values() == st.slice(k).values());
}

TEST_CASE("malformed CSV is rejected") {
  std::stringstream gap("x1,u1\n0,1\n1,2\n3,4\n");
  CHECK_THROWS_AS(read_field_csv(gap), ParseError);
  std::stringstream bad("x1,u1\n0,1\n1,oops\n");
  CHECK_THROWS_AS(read_field_csv(bad), ParseError);
  std::stringstream nan("x1,u1\n0,1\n1,nan\n");
  CHECK_THROWS(read_field_csv(nan));
}

TEST_CASE("file conversion") {
  const auto dir = std::filesystem::temp_directory_path() / "monotone_unit_io";
  std::filesystem::create_directories(dir);
  const Field f = exact_field("x1x2", CartesianGrid::cube(2, -1, 1, 5));
  save_field(f, (dir / "a.field").string());
  convert_field_file((dir / "a.field").string(), (dir / "a.csv").string(), "csv");
  convert_field_file((dir / "a.csv").string(), (dir / "b.field").string(), "field");
  CHECK(load_field((dir / "b.field").string()).values() == f.values());
  CHECK_THROWS(load_field((dir / "missing.field").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("parallel loop") {
  std::vector<int> out(1000, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i % 17); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i % 17));
  CHECK(worker_count() >= 1);
  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error("at " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "at 7");
  }
  std::atomic<int> calls{0};
  parallel_for(0, [&](std::size_t) { ++calls; });
  CHECK(calls == 0);
}
