#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using Json = nlohmann::json;
using widthlab::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<Json> lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(Json::parse(l));
  return out;
}

Json strip_elapsed(Json j) {
  j.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST_CASE("info on the trivial group") {
  auto r = invoke({"info", "Cyclic(1)"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["order"] == 1);
  CHECK(j[0]["command"] == "info");
  CHECK(j[0]["inputs"]["seed"] == 1);
  CHECK(j[0].contains("version"));
  CHECK(j[0].contains("elapsed_ms"));
}

TEST_CASE("info batches one report per group") {
  auto r = invoke({"info", "Sym(4)", "SL(2,5)", "--seed", "3"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["order"] == 24);
  CHECK(j[0]["soluble"] == true);
  CHECK(j[1]["order"] == 120);
  CHECK(j[1]["centre_order"] == 2);
  CHECK(j[1]["perfect"] == true);
  CHECK(j[1]["seed"] == 3);
}

TEST_CASE("width of the commutator word on Alt(5)") {
  auto r = invoke({"width", "Alt(5)", "--word", "[x1,x2]"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["width"] == 1);
  CHECK(j["order"] == 60);
  CHECK(j["word"] == "[x1,x2]");
  CHECK(j["sampled"] == false);
  for (const char* key : {"command", "group", "order", "word", "width", "frontiers", "verbal_order", "sampled",
                          "seed", "elapsed_ms", "version"})
    CHECK(j.contains(key));
}

TEST_CASE("runs are deterministic apart from timing") {
  std::vector<std::string> args{"width", "Alt(5)", "Sym(4)", "--word", "x1^2", "--seed", "9"};
  auto a = lines(invoke(args).out);
  auto b = lines(invoke(args).out);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(strip_elapsed(a[i]) == strip_elapsed(b[i]));
}

TEST_CASE("tsv output has a header and one row per report") {
  auto r = invoke({"width", "Alt(5)", "Alt(4)", "--word", "[x1,x2]", "--format", "tsv"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row1, row2, extra;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(header.rfind("command\t", 0) == 0);
  CHECK(header.find("\twidth\t") != std::string::npos);
  CHECK(row1.find("Alt(5)") != std::string::npos);
  CHECK(row2.find("Alt(4)") != std::string::npos);
}

TEST_CASE("verify through the hamidoune alias") {
  auto r = invoke({"verify", "hamidoune", "--trials", "100", "--seed", "7"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["suite"] == "lemma-2.2");
  CHECK(j["checked"] == 100);
  CHECK(j["passed"] == 100);
  CHECK(j["pass"] == true);
  CHECK(j["seed"] == 7);
}

TEST_CASE("zero trials is a vacuous pass with a warning") {
  auto r = invoke({"verify", "lemma-4.4", "--trials", "0"});
  CHECK(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["vacuous"] == true);
  CHECK(j["pass"] == true);
  CHECK(r.err.find("vacuous") != std::string::npos);
}

TEST_CASE("usage errors exit with 64") {
  SUBCASE("unknown flag") {
    auto r = invoke({"info", "Alt(5)", "--no-such-flag"});
    CHECK(r.code == 64);
  }
  SUBCASE("unknown suite lists the registered ones") {
    auto r = invoke({"verify", "no-such-suite"});
    CHECK(r.code == 64);
    CHECK(r.err.find("lemma-2.2") != std::string::npos);
    CHECK(lines(r.out).at(0)["error"]["type"] == "usage");
  }
  SUBCASE("missing subcommand") { CHECK(invoke({}).code == 64); }
  SUBCASE("bad format") { CHECK(invoke({"info", "Alt(4)", "--format", "xml"}).code == 64); }
}

TEST_CASE("malformed inputs give structured errors") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"info", "Sym(4"}, {"info", "Frobnicate(3)"}, {"width", "Alt(5)", "--word", "[x1,"},
        {"reduce", "x1#0 ^"}, {"solve", "commutator", "Alt(5)", "--copies", "2", "--kappa", "1"}}) {
    auto r = invoke(args);
    CHECK(r.code == 1);
    auto j = lines(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0].contains("error"));
    CHECK(j[0]["error"]["message"].get<std::string>().size() > 0);
  }
}

TEST_CASE("capacity limit is reported as an error") {
  auto r = invoke({"info", "Sym(7)", "--limit-elements", "1000"});
  CHECK(r.code == 1);
  CHECK(lines(r.out).at(0)["error"]["type"] == "capacity");
}

TEST_CASE("config file supplies global options") {
  auto dir = std::filesystem::temp_directory_path() / "widthlab_cli_test";
  std::filesystem::create_directories(dir);
  auto cfg = dir / "lab.ini";
  std::ofstream(cfg) << "seed=42\nformat=json\n";
  auto r = invoke({"info", "Alt(4)", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).at(0)["seed"] == 42);
}

TEST_CASE("element table cache round trip") {
  auto dir = std::filesystem::temp_directory_path() / "widthlab_cli_cache";
  std::filesystem::remove_all(dir);
  setenv("WIDTHLAB_CACHE_DIR", dir.c_str(), 1);
  auto first = invoke({"info", "Sym(5)"});
  auto second = invoke({"info", "Sym( 5 )"});
  unsetenv("WIDTHLAB_CACHE_DIR");
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  std::size_t files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".wlt";
  CHECK(files == 1);
  CHECK(lines(first.out).at(0)["classes"] == lines(second.out).at(0)["classes"]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve commutator equations in Alt(5)^2") {
  auto r = invoke({"solve", "commutator", "Alt(5)", "--copies", "2", "--actor", "0,1", "--actor", "1,0",
                   "--actor", "1,0;(0 1);(0 1)", "--slots", "1,1,2,1,2,1,0", "--trials", "20", "--seed", "5"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["kappas"] == 20);
  CHECK(j["verified"] == 20);
  CHECK(j["pass"] == true);

  auto few = invoke({"solve", "commutator", "Alt(5)", "--copies", "2", "--actor", "1,0", "--slots", "0"});
  CHECK(few.code == 1);
  CHECK(lines(few.out).at(0)["error"]["type"] == "precondition");
}

TEST_CASE("reduce extracts and certifies") {
  const std::string word =
      "x1 x4#2 x2^{g2} x4#2^{-g1} x5#2^{-g1} x6#2^-1 x3 x5#2^{g2^-1} k1 x2^-1 k2^{-g1} x3^-1 x1^-1 x6#2^{g2^-1*g1}";
  auto r = invoke({"reduce", word, "--m", "2", "--n", "4", "--k", "1"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["balanced"] == true);
  CHECK(j["below_L"] == true);
  CHECK(j["support"] == 6);
  CHECK(j["rest_support"] == 4);
  CHECK(j["steps"].size() == 1);
  CHECK(j["identity_verified"] == true);
  CHECK(j["certificate_verified"] == true);

  auto unbalanced = invoke({"reduce", "x1 x2 x1^-1", "--m", "2", "--n", "1"});
  REQUIRE(unbalanced.code == 0);
  CHECK(lines(unbalanced.out).at(0)["balanced"] == false);
}

TEST_CASE("solve power equations in Alt(5)^2") {
  auto r = invoke({"solve", "power", "Alt(5)", "--copies", "2", "--actor", "0,1", "--actor", "1,0", "--actor",
                   "1,0;(0 1);(0 1)", "--slots", "1*32,2*32,0*32", "--q", "2", "--trials", "5"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["verified"] == 5);
  CHECK(j["z"] == 96);
  CHECK(invoke({"solve", "power", "Alt(5)", "--slots", "0*-3"}).code == 1);
}

TEST_CASE("output file receives the reports") {
  auto path = std::filesystem::temp_directory_path() / "widthlab_cli_out.jsonl";
  auto r = invoke({"info", "Alt(4)", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(Json::parse(line)["order"] == 12);
  std::filesystem::remove(path);
}

TEST_CASE("time budget truncates a suite without claiming a pass") {
  auto r = invoke({"verify", "lemma-10.3", "--time-budget", "0.000001"});
  CHECK(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["truncated"] == true);
  CHECK(j["pass"] == false);
  CHECK(j["failed"] == 0);
  CHECK(r.err.find("time budget") != std::string::npos);
}

TEST_CASE("power-cover reports the measured cover size") {
  auto r = invoke({"power-cover", "Alt(5)", "--q", "2"});
  REQUIRE(r.code == 0);
  auto j = lines(r.out).at(0);
  CHECK(j["found"] == true);
  CHECK(j["M"] == 2);
}
