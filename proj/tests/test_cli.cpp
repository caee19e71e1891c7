#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "cli.hpp"

using padyn::cli::run;
using nlohmann::json;

static json doc(const padyn::cli::Outcome& o) { return json::parse(o.out); }

TEST_CASE("census count") {
  auto o = run({"census", "count", "--map", "flow(2,1,1)", "--circle", "3"});
  CHECK(o.exit_code == 0);
  auto d = doc(o);
  CHECK(d["count"] == 4);
  CHECK(d["command"] == "census count");
  CHECK(d["version"] == "0.1.0");
  CHECK(d["precision"] == 64);
  CHECK(d["invocation"] == "census count --map flow(2,1,1) --circle 3");
}

TEST_CASE("multiplier exponent") {
  auto d = doc(run({"multiplier", "exponent", "--p", "5", "--a", "2", "--b", "4"}));
  CHECK(d["alpha"] == "1/2");
  CHECK(d["swapped"] == false);
  CHECK(doc(run({"multiplier", "count", "--p", "2", "--a", "3", "--check-digits", "10"}))["N"] == 2);
  CHECK(doc(run({"multiplier", "classify", "--p", "5", "--a", "-1"}))["order"] == 2);
}

TEST_CASE("conjugacy holder slope") {
  auto o = run({"conjugacy", "holder", "--from", "flow(5,1,1)", "--to", "flow(5,2,1)", "--depth", "12"});
  CHECK(o.exit_code == 0);
  auto d = doc(o);
  CHECK(std::abs(d["slope"].get<double>() - 0.5) <= 0.05);
  CHECK(d["exponent"] == "1/2");
}

TEST_CASE("determinism") {
  std::vector<std::string> args = {"--seed", "9", "conjugacy", "verify", "--from", "flow(3,1,1)", "--to", "flow(3,2,1)",
                                   "--depth", "6", "--samples", "50"};
  auto a = run(args), b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  args.insert(args.begin(), {"--jobs", "3"});
  CHECK(doc(run(args))["samples"] == doc(a)["samples"]);
}

TEST_CASE("exit codes") {
  CHECK(run({"census", "count", "--map", "flow(4,1,1)", "--circle", "3"}).exit_code == 1);
  auto u = run({"census", "count", "--bogus"});
  CHECK(u.exit_code == 1);
  CHECK_FALSE(u.err.empty());
  CHECK(run({}).exit_code == 1);
  CHECK(run({"--format", "dot", "census", "count", "--map", "flow(2,1,1)", "--circle", "1"}).exit_code == 1);
  CHECK(run({"flow", "iterate", "--map", "flow(3,x,1)", "--x", "3"}).exit_code == 1);
  // A conjugacy whose stored anchor is corrupted fails verification with exit 2.
  auto built = doc(run({"conjugacy", "build", "--from", "flow(3,1,1)", "--to", "flow(3,1,1)", "--depth", "4"}));
  auto c = built["conjugacy"];
  c["anchor_overrides"] = json::array({{{"ring", 2}, {"index", "1"}, {"source", "3:2:2,0,0,0,0,0"}, {"target", "3:2:1,0,0,0,0,0"}}});
  const std::string path = "corrupt_conjugacy.json";
  std::ofstream(path) << c.dump();
  auto v = run({"conjugacy", "verify", "--replay", path, "--samples", "400"});
  CHECK(v.exit_code == 2);
  CHECK(doc(v)["failures"].get<long>() > 0);
  std::remove(path.c_str());
}

TEST_CASE("other subcommands") {
  auto s = doc(run({"padic", "show", "--x", "-1/2", "--p", "3", "--precision", "4"}));
  CHECK(s["digits"] == json::array({1, 1, 1, 1}));
  CHECK(doc(run({"flow", "deviation", "--map", "flow(3,1,1)", "--x", "3", "--z", "1"}))["norm"] == "1/9");
  CHECK(doc(run({"flow", "contains", "--map", "flow(2,1,1)", "--x", "2", "--y", "10"}))["contains"] == true);
  CHECK(doc(run({"flow", "return", "--map", "flow(3,1,1)", "--x", "3", "--q", "2", "--n", "3"}))["norms"] ==
        json::array({"1/9", "1/9", "1/9", "1/9"}));
  CHECK(doc(run({"bullseye", "mu", "--x", "const(3)", "--y", "const(2)", "--depth", "5"}))["mu"][4] == 6);
  CHECK(doc(run({"bullseye", "exponent", "--x", "const(1)", "--y", "geom(1/2,2,1)"}))["kind"] == "no_alpha");
  CHECK(run({"bullseye", "match", "--x", "const(3)", "--y", "const(2)", "--depth", "50"}).exit_code == 0);
  CHECK(doc(run({"bullseye", "alpha", "--x", "const(3)", "--y", "const(2)", "--depth", "100", "--alpha", "2"}))["holds"] == false);
  CHECK(run({"census", "oracle", "--map", "flow(3,2,1)", "--circle", "1"}).exit_code == 0);
  auto diag = run({"--format", "dot", "census", "diagram", "--map", "flow(2,1,1)", "--max-circle", "3"});
  CHECK(diag.out.rfind("graph orbits", 0) == 0);
  auto t = run({"--format", "table", "census", "reps", "--map", "flow(2,1,1)", "--circle", "2"});
  CHECK(t.out.find("count\t2") != std::string::npos);
  auto h = doc(run({"infinity", "hhat", "--germ", "germ(2,1,1,1)", "--depth", "32"}));
  CHECK(h["failures"] == 0);
  auto tr = doc(run({"infinity", "transport", "--germ", "flow(3,1,1)", "--x", "9"}));
  CHECK(tr["G"]["norm"] == "0");
  auto iv = run({"infinity", "verify", "--germ", "germ(3,1,1,1)", "--samples", "20", "--pairs", "20"});
  CHECK(iv.exit_code == 0);
  CHECK(doc(iv)["passed"] == true);
  auto e = doc(run({"conjugacy", "eval", "--from", "flow(5,1,1)", "--to", "flow(5,2,1)", "--depth", "4", "--x", "5"}));
  CHECK(e["value"]["valuation"] == 1);
}
