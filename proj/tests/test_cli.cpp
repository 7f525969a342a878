#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "bcov/borcherds.hpp"
#include "bcov/scalar.hpp"
#include "cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
  json j() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bcov::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("bcovkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const json& j) {
  const auto p = scratch() / name;
  std::ofstream(p) << j.dump();
  return p.string();
}

}  // namespace

TEST_CASE("eta at i to requested digits") {
  const auto r = run({"eta", "--tau", "0,1", "--prec", "25"});
  REQUIRE(r.code == 0);
  const auto v = r.j()["values"];
  CHECK(v["eta"][0].get<double>() == doctest::Approx(0.768225422326056659).epsilon(1e-15));
  CHECK(v["eta"][1].get<double>() == 0.0);
  // Gamma(1/4) / (2 pi^{3/4})
  CHECK(v["eta_digits"][0].get<std::string>().rfind("7.682254223260566590025941", 0) == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"eta", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"eta", "--tau", "1"}).code == 2);
  CHECK(run({"eta", "--tau", "a,b"}).code == 2);
  CHECK(run({"flambda", "--lattice", "/nonexistent.json"}).code == 2);
  CHECK(run({"euler-orb"}).code == 2);
  CHECK(run({"bcov-rhs", "--sample", "4"}).code == 2);
  CHECK(run({"accept", "--only", "14"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("computation failures exit 1 with a structured error") {
  const auto r = run({"eta", "--tau", "0,-1"});
  CHECK(r.code == 1);
  CHECK(r.j()["error"]["code"] == "NotUpperHalf");
  CHECK(r.j()["command"] == "eta");

  const auto c = run({"covolume", "--m-builtin", "U", "--pairings", "1,1", "--norm", "78.95683520871486", "--vol", "1"});
  CHECK(c.code == 1);
  CHECK(c.j()["error"]["code"] == "InconsistentKaehler");

  const auto e = run({"epsilon", "--gen", "1,0,0,2"});
  CHECK(e.code == 1);
  CHECK(e.j()["error"]["code"] == "NotDetOne");
}

TEST_CASE("byte-identical output for identical inputs") {
  const auto a = run({"tau-ell", "--tau", "0.1,0.9"}), b = run({"tau-ell", "--tau", "0.1,0.9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto p = run({"accept", "--only", "3"}), q = run({"accept", "--only", "3"});
  CHECK(p.code == 0);
  CHECK(p.out == q.out);
  CHECK(run({"tau-ell", "--tau", "0.1,0.9", "--pretty"}).out.find("values.relative_difference") != std::string::npos);
}

TEST_CASE("rationals as [num, den]") {
  const auto r = run({"epsilon", "--gen", "1,1,1,3"});
  REQUIRE(r.code == 0);
  const auto v = r.j()["values"];
  CHECK(v["order"] == 3);
  for (int k = 0; k < 3; ++k) CHECK(v["epsilon"][k] == json::array({-2, 9}));
  CHECK(v["epsilon_closed"] == json::array({-2, 9}));

  const auto g = write("klein.json", {{"generators", {{1, 1, 0, 2}, {1, 0, 1, 2}}}});
  const auto k = run({"epsilon", "--group", g});
  REQUIRE(k.code == 0);
  CHECK(k.j()["values"]["epsilon_closed"] == json::array({-1, 8}));
  CHECK(k.j()["values"]["gamma0_size"] == 0);
}

TEST_CASE("lattice descriptors") {
  const auto a = run({"lattice", "--builtin", "U(2)+E8(2)"});
  REQUIRE(a.code == 0);
  const auto te = a.j()["values"]["two_elementary"];
  CHECK(te["r"] == 10);
  CHECK(te["l"] == 10);
  CHECK(te["exceptional"] == "Enriques");

  const auto f = write("lat.json", {{"sum", {{{"builtin", "U"}}, {{"builtin", "E8"}, {"rescale", 2}}}}});
  const auto b = run({"lattice", "--lattice", f});
  REQUIRE(b.code == 0);
  CHECK(b.j()["values"]["two_elementary"]["g"] == 2);

  const auto g = write("gram.json", {{"gram", {{2, 1}, {1, 2}}}});
  CHECK(run({"lattice", "--lattice", g}).j()["values"]["determinant"] == 3);
  CHECK(run({"lattice", "--lattice", write("odd.json", {{"gram", {{1}}}})}).code == 1);
}

TEST_CASE("flambda table round-trips into borcherds") {
  const auto table = (scratch() / "uu.json").string();
  const auto f = run({"flambda", "--builtin", "U+U", "--out", table});
  REQUIRE(f.code == 0);
  CHECK(f.j()["values"]["alpha"] == 2);
  CHECK(f.j()["values"]["c0_0"].get<double>() == doctest::Approx(120));

  const auto w = write("w.json", {{"weyl", {5, 4}}, {"chamber", {2, 1}}});
  const auto z = write("z.json", {{"x", {0.17, -0.31}}, {"y", {2.7, 2.3}}});
  const auto b = run({"borcherds", "--table", table, "--weyl", w, "--z", z, "--trunc", "5.5"});
  REQUIRE(b.code == 0);

  bcov::ProductSpec s;
  s.L = bcov::standard("U");
  s.table = bcov::f_lambda_table(bcov::direct_sum(bcov::standard("U"), bcov::standard("U")));
  s.weylVector = Eigen::Vector2d(5, 4);
  s.chamberRef = Eigen::Vector2d(2, 1);
  s.truncation = 5.5;
  const bcov::TubePoint tp(s.L, Eigen::Vector2d(0.17, -0.31), Eigen::Vector2d(2.7, 2.3));
  const auto lib = bcov::borcherds_log_product(s, tp);
  CHECK(b.j()["values"]["log_abs"].get<double>() == doctest::Approx(lib.logAbs).epsilon(1e-12));
}

TEST_CASE("euler-orb from data and fixtures") {
  const auto bv = run({"euler-orb", "--bv", "18,4,1"});
  REQUIRE(bv.code == 0);
  CHECK(bv.j()["values"]["chi_orb"] == json::array({96, 1}));
  CHECK(run({"euler-orb", "--bv", "5,5,0"}).j()["error"]["code"] == "InvalidTriple");

  const json data = {{"group_order", 3}, {"chi_ambient", 12}, {"points", {{{"stabilizer", {{"generators", {{1, 1, 1, 3}}}}}}}}};
  const auto r = run({"euler-orb", "--data", write("pt.json", data)});
  REQUIRE(r.code == 0);
  CHECK(r.j()["values"]["chi_orb"] == json::array({20, 3}));
  CHECK(r.j()["values"]["roan_chi"] == json::array({20, 3}));
}

TEST_CASE("kronecker, spectra-identity and covolume assertions") {
  const auto k = run({"kronecker", "--tau", "0.1,0.9", "--tol", "1e-8"});
  CHECK(k.code == 0);
  CHECK(k.j()["pass"] == true);
  // an impossible tolerance is an assertion failure, not an error
  const auto t = run({"kronecker", "--tau", "0.1,0.9", "--tol", "1e-30"});
  CHECK(t.code == 1);
  CHECK(t.j()["pass"] == false);

  const auto s = run({"spectra-identity", "--seed", "5", "--trials", "20"});
  CHECK(s.code == 0);
  CHECK(s.j()["values"]["multiset_identities"] == 20);

  const auto c = run({"covolume", "--m-builtin", "U+E8(2)", "--coeffs", "3,2,0,0,0,0,0,0,0,0"});
  CHECK(c.code == 0);
  CHECK(c.j()["values"]["rho"] == 11);
}

TEST_CASE("theta-const") {
  const auto om = write("om.json", json::array({json::array({json::array({0.1, 1.2}), json::array({0.3, 0.2})}),
                                                 json::array({json::array({0.3, 0.2}), json::array({-0.2, 1.5})})}));
  const auto all = run({"theta-const", "--genus", "2", "--omega", om});
  REQUIRE(all.code == 0);
  CHECK(all.j()["values"]["count"] == 10);
  const auto one = run({"theta-const", "--genus", "2", "--omega", om, "--char", "01,10"});
  REQUIRE(one.code == 0);
  CHECK(one.j()["values"]["even"] == true);
  CHECK(run({"theta-const", "--genus", "2", "--omega", om, "--char", "10,10"}).j()["error"]["code"] == "OddCharacteristic");
  CHECK(run({"theta-const", "--genus", "3", "--omega", om}).code == 1);
  CHECK(run({"theta-const", "--genus", "2", "--omega", om, "--char", "0,1"}).code == 2);
}

TEST_CASE("bcov-rhs") {
  const auto r = run({"bcov-rhs", "--sample", "2", "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto v = r.j()["values"];
  CHECK(v["case"] == 2);
  CHECK(v["exponents"]["siegel_factor"] == "Upsilon_g");
  CHECK(v["exponents"]["tau_m"] == 4);
  CHECK(std::abs(v["ratio_log"].get<double>()) < 1e-10);
  CHECK(run({"bcov-rhs", "--sample", "1", "--case", "3"}).j()["error"]["code"] == "UnknownCase");
  CHECK(run({"bcov-rhs", "--m-builtin", "U"}).code == 2);
}

TEST_CASE("BCOV_KIT_THREADS caps parallelism without changing output") {
  ::setenv("BCOV_KIT_THREADS", "1", 1);
  CHECK(bcov::thread_count() == 1);
  const auto one = run({"flambda", "--builtin", "U+U(4)", "--kmax", "3"});
  ::setenv("BCOV_KIT_THREADS", "4", 1);
  CHECK(bcov::thread_count() <= 4);
  const auto four = run({"flambda", "--builtin", "U+U(4)", "--kmax", "3"});
  ::unsetenv("BCOV_KIT_THREADS");
  CHECK(one.code == 0);
  CHECK(one.out == four.out);
}
