#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using nwdag::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(cell);
  return v;
}

// Scratch directory removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("nwdag_cli_" + std::to_string(::getpid()) + "_" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("CSV headers match the golden schema file") {
  std::ifstream golden(std::string(NWDAG_GOLDEN_DIR) + "/schemas.txt");
  REQUIRE(golden);
  std::map<std::string, std::string> expected;
  for (std::string line; std::getline(golden, line);) {
    const auto colon = line.find(": ");
    REQUIRE(colon != std::string::npos);
    expected[line.substr(0, colon)] = line.substr(colon + 2);
  }
  std::map<std::string, std::string> actual;
  for (const auto& [name, header] : nwdag::cli::csv_schemas()) actual[name] = header;
  CHECK(actual == expected);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"bounds", "--apriori", "--d", "8", "--n", "256", "--nnon", "12", "--bogus"}).code == 2);
  CHECK(call({"bounds", "--d", "8", "--n", "256"}).code == 2);
  CHECK(call({"bounds", "--apriori", "--aposteriori", "--d", "8", "--n", "256", "--nnon", "12", "--pathnorm", "1"}).code == 2);
  CHECK(call({"--help"}).code == 0);
  // Below the lambda_0 threshold is a domain error, not a usage error.
  const auto low = call({"bounds", "--apriori", "--d", "8", "--n", "256", "--nnon", "12", "--barron", "1", "--lambda0", "1.0"});
  CHECK(low.code == 1);
  CHECK(low.err.find("error:") != std::string::npos);
  CHECK(call({"pathnorm", "--in", "/nonexistent/file.dag"}).code == 1);
}

TEST_CASE("bounds rows") {
  const auto pri = call({"bounds", "--apriori", "--d", "8", "--n", "256", "--nnon", "12", "--barron", "1.0", "--lambda0", "auto", "--delta", "0.1"});
  REQUIRE(pri.code == 0);
  const auto rows = lines(pri.out);
  REQUIRE(rows.size() == 2);
  const auto cells = split(rows[1]);
  REQUIRE(cells.size() == 9);
  CHECK(cells[0] == "apriori");
  CHECK(std::stod(cells[8]) == doctest::Approx(12.887590741323263975).epsilon(1e-11));

  const auto post = call({"bounds", "--aposteriori", "--d", "8", "--n", "256", "--pathnorm", "1", "--delta", "0.1"});
  REQUIRE(post.code == 0);
  CHECK(std::stod(split(lines(post.out)[1]).back()) == doctest::Approx(1.8516102684192445648).epsilon(1e-11));
}

TEST_CASE("build, validate, pathnorm and forward through files") {
  TempDir tmp;
  const std::string dag = tmp.file("net.dag");
  REQUIRE(call({"build", "--arch", "densenet", "--d", "2", "--k0", "3", "--k", "1", "--m", "3", "--L", "2", "--seed", "4", "--out", dag}).code == 0);

  const auto v = call({"validate", "--in", dag});
  CHECK(v.code == 0);
  CHECK(v.out.rfind("valid\n", 0) == 0);
  CHECK(v.out.find("input_assumption: yes") != std::string::npos);
  CHECK(v.out.find("(satisfied)") != std::string::npos);

  const auto p = call({"pathnorm", "--in", dag});
  REQUIRE(p.code == 0);
  const auto row = split(lines(p.out)[1]);
  REQUIRE(row.size() == 6);
  CHECK(std::stod(row[1]) == doctest::Approx(std::stod(row[2])).epsilon(1e-9));

  const auto f = call({"forward", "--in", dag, "--x", "0.25,0.75"});
  REQUIRE(f.code == 0);
  const auto frow = split(lines(f.out)[1]);
  CHECK(frow[2] == frow[3]);
  CHECK(std::stoul(frow[4]) <= std::stoul(frow[5]));

  // Building to stdout yields the same bytes as the file.
  const auto stdout_build = call({"build", "--arch", "densenet", "--d", "2", "--k0", "3", "--k", "1", "--m", "3", "--L", "2", "--seed", "4"});
  std::ifstream in(dag);
  std::stringstream file;
  file << in.rdbuf();
  CHECK(stdout_build.out == file.str());
}

TEST_CASE("invalid and malformed files") {
  TempDir tmp;
  const std::string bad = tmp.file("bad.dag");
  {
    std::ofstream(bad) << "nwdag v1 N=3 d=1\n2 3 param 1\n3 1 param 1\n";
  }
  const auto v = call({"validate", "--in", bad});
  CHECK(v.code == 1);
  CHECK(v.out.find("ordering:") != std::string::npos);

  const std::string truncated = tmp.file("truncated.dag");
  {
    std::ofstream(truncated) << "nwdag v1 N=5 d=2\n3 1 param 0.5\n3 2 param";
  }
  const auto t = call({"pathnorm", "--in", truncated});
  CHECK(t.code == 1);
  CHECK(t.err.find("line 3") != std::string::npos);
}

TEST_CASE("seeded subcommands are byte-for-byte reproducible") {
  const std::vector<std::string> approx{"approx", "--seed", "3", "--d", "3", "--atoms", "3", "--sparsity", "2", "--widths", "4,8", "--mc", "500"};
  CHECK(call(approx).out == call(approx).out);
  const std::vector<std::string> rad{"rademacher", "--seed", "5", "--cells", "2:16", "--q", "1", "--m", "4", "--trials", "4", "--steps", "5"};
  CHECK(call(rad).out == call(rad).out);
  const std::vector<std::string> train{"train",   "--arch",  "two-layer", "--d",         "2",    "--m",     "3",  "--n", "16", "--steps",
                                       "10",      "--holdout", "200",     "--trials",    "2",    "--seed",  "9"};
  const auto a = call(train), b = call(train);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 3);
}

TEST_CASE("train appends to its ledger with a single header") {
  TempDir tmp;
  const std::string ledger = tmp.file("runs.csv");
  const std::vector<std::string> train{"train", "--arch", "two-layer", "--d", "2", "--m", "3", "--n", "16", "--steps", "5", "--holdout", "100", "--out", ledger};
  REQUIRE(call(train).code == 0);
  REQUIRE(call(train).code == 0);
  std::ifstream in(ledger);
  std::stringstream text;
  text << in.rdbuf();
  const auto rows = lines(text.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("seed,trial,arch", 0) == 0);
  CHECK(rows[1] == rows[2]);
}
