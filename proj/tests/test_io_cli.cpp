#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "support.hpp"
#include "varorder/error.hpp"
#include "varorder/io.hpp"
#include "varorder/sampling.hpp"

using namespace varorder;
using namespace testing;
using io::Json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("varorder_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const Json& j) const { return write(name, j.dump()); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "varorder");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string diag_file(const TempDir& dir, const std::string& name, std::vector<double> d) {
  return dir.write(name, io::observable_to_json(diag(std::move(d))));
}

}  // namespace

TEST_CASE("matrix JSON accepts nested and flat layouts") {
  const Json nested = Json::parse(R"({"dim": 2, "matrix": [[[1,0],[0,1]],[[0,-1],2]]})");
  const auto a = io::observable_from_json(nested);
  CHECK(a.matrix()(0, 1) == Complex(0.0, 1.0));
  CHECK(a.matrix()(1, 1) == Complex(2.0, 0.0));
  const Json flat = Json::parse(R"({"dim": 2, "matrix": [[1,0],[0,1],[0,-1],[2,0]]})");
  CHECK((io::observable_from_json(flat).matrix() - a.matrix()).norm() == 0.0);

  CHECK_THROWS_AS(io::observable_from_json(Json::parse(R"({"matrix": [1]})")), InputError);
  CHECK_THROWS_AS(io::observable_from_json(Json::parse(R"({"dim": 2, "matrix": [1, 2, 3]})")),
                  InputError);
  CHECK_THROWS_AS(io::observable_from_json(Json::parse(R"({"dim": 2, "matrix": [[1,[0,1]],[[0,1],1]]})")),
                  InputError);
  CHECK_THROWS_AS(io::parse_json("{\"dim\": 2, "), InputError);
}

TEST_CASE("observable JSON round trip is exact") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_hermitian(1 + static_cast<std::size_t>(trial) % 6, rng);
    const Json j = io::observable_to_json(a);
    const auto back = io::observable_from_json(io::parse_json(j.dump()));
    CHECK((back.matrix() - a.matrix()).norm() == 0.0);
  }
}

TEST_CASE("state and spectrum parsing") {
  const auto s = io::state_from_json(Json::parse(R"({"dim": 2, "vector": [[0.6,0],[0,0.8]]})"));
  REQUIRE(std::holds_alternative<PureState>(s));
  const auto r = io::state_from_json(Json::parse(R"({"dim": 2, "density": [[0.5,0],[0,0.5]]})"));
  REQUIRE(std::holds_alternative<DensityState>(r));
  CHECK_THROWS_AS(io::state_from_json(Json::parse(R"({"dim": 2})")), InputError);
  CHECK_THROWS_AS(io::state_from_json(Json::parse(R"({"dim": 2, "vector": [1, 1]})")), InputError);

  CHECK(io::spectrum_from_text("0,1,3,7") == std::vector<double>{0, 1, 3, 7});
  CHECK(io::spectrum_from_text(" 0.5, -2") == std::vector<double>{0.5, -2});
  CHECK_THROWS_AS(io::spectrum_from_text("0,x"), InputError);
  CHECK_THROWS_AS(io::spectrum_from_text("0,1y"), InputError);
  CHECK(io::spectrum_from_json(Json::parse("[1, 2.5]")) == std::vector<double>{1, 2.5});
  CHECK_THROWS_AS(io::spectrum_from_json(Json::parse("[1, \"a\"]")), InputError);
}

TEST_CASE("q-matrix and table JSON round trips") {
  const auto q = q_matrix({0.0, 1.0, 3.0, 7.0});
  const auto back = io::qmatrix_from_json(io::parse_json(io::qmatrix_to_json(q).dump()));
  CHECK(back.q == q.q);
  CHECK_THROWS_AS(io::qmatrix_from_json(Json::parse(R"({"n": 4})")), InputError);

  const FunctionTable f({{0.0, 0.0}, {1.0, 1.0}, {3.0, 2.0}});
  const auto g = io::table_from_json(io::parse_json(io::table_to_json(f).dump()));
  REQUIRE(g.size() == 3);
  CHECK(g.points()[2].value == 2.0);
}

TEST_CASE("check-order exit codes and report") {
  TempDir dir;
  const auto a = diag_file(dir, "a.json", {0.0, 1.0, 2.0});
  const auto b = diag_file(dir, "b.json", {0.0, 1.0, 3.0});
  const auto c = diag_file(dir, "c.json", {0.0, 2.0, 3.0});

  const Run holds = run({"check-order", a, b});
  CHECK(holds.code == 0);
  const Json hj = holds.json();
  CHECK(hj["tool"] == "varorder");
  CHECK(hj["holds"] == true);
  CHECK(hj["certificate"].size() == 3);
  CHECK(hj["certificate"][2][1] == 2.0);
  CHECK(hj["witness"].is_null());
  CHECK(hj.contains("tolerances"));

  const Run fails = run({"check-order", c, b, "--oracle-trials", "4", "--seed", "7"});
  CHECK(fails.code == 1);
  const Json fj = fails.json();
  CHECK(fj["holds"] == false);
  CHECK(fj["margin"].get<double>() == doctest::Approx(0.75));
  CHECK(fj["witness"].size() == 3);
  CHECK(fj["consistency"]["agree"] == true);
  CHECK(fj["oracle"]["restarts"] == 4);

  const auto bad = dir.write("bad.json", std::string("{\"dim\": 3, \"matrix\": [[[0"));
  const Run broken = run({"check-order", bad, b});
  CHECK(broken.code == 2);
  CHECK(broken.err.find("malformed JSON") != std::string::npos);

  const auto two = diag_file(dir, "two.json", {0.0, 1.0});
  CHECK(run({"check-order", two, b}).code == 2);

  const auto nonherm = dir.write("nh.json", std::string(R"({"dim": 2, "matrix": [[0,1],[0,0]]})"));
  CHECK(run({"check-order", nonherm, two}).code == 2);
  CHECK(run({"check-order", a}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reports are deterministic and re-parse") {
  TempDir dir;
  Rng rng(2);
  const auto a = dir.write("a.json", io::observable_to_json(random_hermitian(3, rng)));
  const auto b = dir.write("b.json", io::observable_to_json(random_hermitian(3, rng)));
  const Run r1 = run({"check-order", a, b, "--oracle-trials", "3", "--seed", "5"});
  const Run r2 = run({"check-order", a, b, "--oracle-trials", "3", "--seed", "5"});
  CHECK(r1.out == r2.out);
  const Json j = r1.json();
  const Json w = j["witness"];
  Json state;
  state["dim"] = 3;
  state["vector"] = w;
  const auto parsed = io::state_from_json(state);
  const auto& x = std::get<PureState>(parsed);
  CHECK(j["margin"].get<double>() ==
        doctest::Approx(oracle_variance(io::observable_from_json(io::read_json_file(a)).matrix(), x.vector()) -
                        oracle_variance(io::observable_from_json(io::read_json_file(b)).matrix(), x.vector())));
}

TEST_CASE("misc subcommands") {
  TempDir dir;
  const auto a = diag_file(dir, "a.json", {0.0, 1.0, 2.0});
  const auto b = diag_file(dir, "b.json", {0.0, 1.0, 3.0});
  const auto c = diag_file(dir, "c.json", {0.0, 2.0, 3.0});

  SUBCASE("extract-function") {
    const Run r = run({"extract-function", a, b});
    CHECK(r.code == 0);
    CHECK(r.json()["function"][2][1] == 2.0);
    CHECK(run({"extract-function", c, b}).code == 1);
  }
  SUBCASE("variance") {
    const auto d01 = diag_file(dir, "d01.json", {0.0, 1.0});
    const auto x = dir.write("x.json", std::string(R"({"dim": 2, "vector": [[1,0],[1,0]]})"));
    CHECK(run({"variance", d01, x}).code == 2);
    const auto y = dir.write("y.json", std::string(R"({"dim": 2, "vector": [[0.7071067811865476,0],[0.7071067811865476,0]]})"));
    const Run r = run({"variance", d01, y});
    CHECK(r.code == 0);
    CHECK(r.json()["variance"].get<double>() == doctest::Approx(0.25));
    CHECK(r.json()["defect"].get<double>() == doctest::Approx(0.25));
    const auto rho = dir.write("rho.json", std::string(R"({"dim": 2, "density": [[0.5,0],[0,0.5]]})"));
    const Run m = run({"variance", d01, rho});
    CHECK(m.code == 0);
    CHECK(m.json()["expectation"].get<double>() == doctest::Approx(0.5));
    CHECK_FALSE(m.json().contains("defect"));
    CHECK(run({"variance", a, y}).code == 2);
  }
  SUBCASE("joint-upper-bound") {
    const auto p = diag_file(dir, "p.json", {1.0, 1.0, 5.0});
    const auto q = diag_file(dir, "q.json", {2.0, 0.0, 3.0});
    const Run r = run({"joint-upper-bound", p, q});
    CHECK(r.code == 0);
    CHECK(r.json()["beta"].get<double>() == doctest::Approx(17.0));
    CHECK(r.json()["bound"]["matrix"][2][2][0].get<double>() == doctest::Approx(37.0));
    const auto x = dir.write("x.json", io::observable_to_json(pauli_x()));
    const auto z = dir.write("z.json", io::observable_to_json(pauli_z()));
    const Run nc = run({"joint-upper-bound", x, z});
    CHECK(nc.code == 1);
    CHECK(nc.json()["exists"] == false);
  }
  SUBCASE("lower-set") {
    const Run r = run({"lower-set", b});
    CHECK(r.code == 0);
    CHECK(r.json()["families"].size() == 3);
    CHECK(r.json()["families"][2]["threshold"].get<double>() == doctest::Approx(2.0));
    const auto s = diag_file(dir, "s.json", {1.0, 1.0});
    CHECK(run({"lower-set", s}).code == 2);
  }
  SUBCASE("q-matrix and reconstruct-metric") {
    const Run r = run({"q-matrix", "0,1,3,7"});
    CHECK(r.code == 0);
    const Json j = r.json();
    CHECK(j["q"][0][3] == 6.0);
    CHECK(j["pairs"].size() == 6);
    CHECK(j["max_attainment_count"] == 2);
    const auto spec = dir.write("spec.json", std::string("[0, 1, 5, 6]"));
    CHECK(run({"q-matrix", spec}).json()["max_attainment_count"] == 3);
    CHECK(run({"q-matrix", "0,1,2"}).code == 2);

    const auto qf = dir.write("q.json", j);
    const Run rec = run({"reconstruct-metric", qf});
    CHECK(rec.code == 0);
    CHECK(rec.json()["spectrum"][3].get<double>() == doctest::Approx(7.0));
    const auto badq = dir.write("badq.json", std::string("[[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]"));
    CHECK(run({"reconstruct-metric", badq}).code == 2);
  }
  SUBCASE("verify-automorphism") {
    const Run r = run({"verify-automorphism", "--alpha", "2", "--trials", "50"});
    CHECK(r.code == 0);
    CHECK(r.json()["passed"] == true);
    Rng rng(3);
    const auto u = dir.write("u.json", Json{{"dim", 3}, {"matrix", io::matrix_to_json(random_unitary(3, rng))}});
    CHECK(run({"verify-automorphism", "--unitary", u, "--antiunitary", "--trials", "10"}).code == 0);
    const auto nu = dir.write("nu.json", io::observable_to_json(diag({2.0, 1.0, 1.0})));
    CHECK(run({"verify-automorphism", "--unitary", nu}).code == 2);
    CHECK(run({"verify-automorphism", "--alpha", "0"}).code == 2);
  }
  SUBCASE("canonical and max-deviation") {
    const auto d = diag_file(dir, "d.json", {1.0, 2.0, 4.0});
    const Run r = run({"canonical", d});
    CHECK(r.code == 0);
    const auto can = io::observable_from_json(r.json()["canonical"]);
    CHECK((can.matrix() - diag_matrix({0.0, 1.0, 3.0})).norm() < 1e-12);
    const Run m = run({"max-deviation", b});
    CHECK(m.json()["max_deviation"].get<double>() == doctest::Approx(1.5));
  }
}
