#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "crosswitch/classify.hpp"
#include "crosswitch/io.hpp"
#include "support.hpp"

using namespace crosswitch;
using namespace testsupport;

namespace {

struct Run {
  int rc = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" CROSSWITCH_CLI_PATH "' " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) { return std::string(CROSSWITCH_TEST_TMP) + "/" + name; }

std::string signs_arg(const Signs& s) {
  std::string out;
  auto add = [&](const char* k, const std::optional<int>& v) {
    if (!v) return;
    if (!out.empty()) out += ',';
    out += std::string(k) + "=" + std::to_string(*v);
  };
  add("a", s.a);
  add("b", s.b);
  add("c", s.c);
  add("c1", s.c1);
  add("c2", s.c2);
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("classify golden inputs") {
  auto verdict = [](const std::string& file) {
    const auto r = run("classify '" + data_path(file) + "'");
    REQUIRE(r.rc == 0);
    return Json::parse(r.out);
  };
  CHECK(verdict("crossing.json")["verdict"] == "Stable_C1");
  CHECK(verdict("double_pseudo_eq_0.json")["verdict"] == "Codim1_DoublePseudoEq");
  CHECK(verdict("double_pseudo_eq_p01.json")["verdict"] == "Stable_C2");
  CHECK(verdict("double_pseudo_eq_m01.json")["verdict"] == "Stable_C2");
  const auto hc = verdict("constant_beta_zero.json");
  CHECK(hc["verdict"] == "HigherCodimension");
  const auto& reasons = hc["reasons"];
  CHECK(std::find(reasons.begin(), reasons.end(), "beta_Z=0") != reasons.end());
  CHECK(verdict("c32.json")["schema"] == 1);
}

TEST_CASE("exit codes") {
  CHECK(run("classify '" + data_path("crossing.json") + "'").rc == 0);
  CHECK(run("classify '" + data_path("bad_syntax.json") + "'").rc == 2);
  CHECK(run("classify '" + data_path("bad_missing_f2.json") + "'").rc == 2);
  CHECK(run("classify '" + data_path("does_not_exist.json") + "'").rc == 2);
  CHECK(run("classify '" + data_path("bad_nan.json") + "'").rc == 3);
  CHECK(run("frobnicate").rc == 2);
  CHECK(run("").rc == 2);
  CHECK(run("normal-form Stable_C1 --signs a=1").rc == 2);
  CHECK(run("normal-form Stable_C9 --signs a=1,b=1").rc == 2);
  CHECK(run("sweep RegularFold --signs a=1,b=1 --delta 0.1:0.2:3").rc == 2);
  CHECK(run("integrate '" + data_path("crossing.json") + "' --from 1 --time 1").rc == 2);
  CHECK(run("classify '" + data_path("crossing.json") + "'", "CROSSWITCH_TOL=abc").rc == 2);
  CHECK(run("sweep RegularFold --signs a=1,b=1 --delta=-0.1:0.1:3").rc == 0);
  // a band wider than |delta| makes the perturbed members look degenerate
  CHECK(run("sweep RegularFold --signs a=1,b=1 --delta=-0.1:0.1:3", "CROSSWITCH_TOL=0.5").rc == 4);
  CHECK(run("--version").rc == 0);
}

TEST_CASE("degeneracy band override") {
  // every origin quantity of the C32 form has magnitude <= 3; a band of 2 swallows most of them
  const auto narrow = Json::parse(run("classify '" + data_path("c32.json") + "'").out);
  const auto wide = Json::parse(run("classify '" + data_path("c32.json") + "'", "CROSSWITCH_TOL=2").out);
  CHECK(narrow["verdict"] == "Stable_C32");
  CHECK(wide["verdict"] == "HigherCodimension");
}

TEST_CASE("normal-form and return-map on the C32 anchor") {
  const auto path = tmp("cli_c32.json");
  REQUIRE(run("normal-form Stable_C32 --signs a=1,b=1,c=1 --out '" + path + "'").rc == 0);
  const auto z = parse_system(slurp(path)).system;
  CHECK(z.X() == FieldSpec::constant(1, -1));
  CHECK(z.Y() == FieldSpec::constant(2, 1));
  const auto r = run("return-map '" + path + "' --samples 5");
  REQUIRE(r.rc == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["alpha"].get<double>() == -0.5);
  CHECK(j["samples"].size() == 5);
  CHECK(run("return-map '" + data_path("crossing.json") + "'").rc == 1);  // not transient
}

TEST_CASE("normal-form output classifies back to its class for every sign combination") {
  for (Verdict v : kNormalFormClasses) {
    for (const auto& s : sign_combinations(v)) {
      const auto nf = run("normal-form " + std::string(to_string(v)) + " --signs " + signs_arg(s));
      REQUIRE(nf.rc == 0);
      const auto path = tmp("roundtrip.json");
      std::ofstream(path, std::ios::binary) << nf.out;
      const auto c = run("classify '" + path + "'");
      REQUIRE(c.rc == 0);
      const auto j = Json::parse(c.out);
      CHECK(j["verdict"] == std::string(to_string(v)));
      CHECK(j["signs"] == signs_to_json(s));
    }
  }
}

TEST_CASE("integrate the crossing form into quadrant I") {
  const auto r = run("integrate '" + data_path("crossing.json") + "' --from=-1,-1 --time 3");
  REQUIRE(r.rc == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() > 2);
  CHECK(rows.front() == std::vector<std::string>{"t", "x1", "x2", "mode"});
  const auto& end = rows.back();
  CHECK(std::stod(end[0]) == doctest::Approx(3.0));
  CHECK(std::stod(end[1]) > 0);
  CHECK(std::stod(end[2]) > 0);
  const auto back = run("integrate '" + data_path("crossing.json") + "' --from=2,2 --time=-3");
  REQUIRE(back.rc == 0);
  CHECK(std::stod(csv_rows(back.out).back()[1]) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("sweep examples") {
  auto column = [](const std::string& csv, std::size_t col) {
    std::vector<std::string> out;
    const auto rows = csv_rows(csv);
    for (std::size_t k = 1; k < rows.size(); ++k) out.push_back(rows[k].at(col));
    return out;
  };
  const auto rf = run("sweep RegularFold --signs a=1,b=1 --delta=-0.1:0.1:3");
  REQUIRE(rf.rc == 0);
  CHECK(column(rf.out, 1) == std::vector<std::string>{"Stable_C1", "Codim1_RegularFold", "Stable_C32"});

  const auto ph = run("sweep PseudoHopf --signs a=1,b=1,c=1 --delta=-0.1:0.1:3");
  REQUIRE(ph.rc == 0);
  const auto fps = column(ph.out, 7);
  CHECK(fps[0].empty());
  CHECK(fps[1].empty());
  CHECK(std::count(fps[2].begin(), fps[2].end(), ';') == 1);  // two entries

  const auto dpe = run("sweep DoublePseudoEq --signs a=1,b=1,c1=1,c2=1 --delta=-0.1:0.1:3");
  REQUIRE(dpe.rc == 0);
  const auto pes = column(dpe.out, 5);
  // branch:location:stability for both branches, with the location sign flipping across 0
  CHECK(pes[0].find(":9.99") != std::string::npos);
  CHECK(pes[2].find(":-9.99") != std::string::npos);
  for (const auto& c : column(dpe.out, 8)) CHECK(c == "ok");
}

TEST_CASE("portrait honours the defaults block and both formats") {
  const auto csv = tmp("portrait.csv");
  REQUIRE(run("portrait '" + data_path("crossing_defaults.json") + "' --out '" + csv + "'").rc == 0);
  // defaults: seeds 3 -> 9 lattice seeds + 4 x 3 branch seeds, forward and backward
  std::set<std::string> ids;
  const auto rows = csv_rows(slurp(csv));
  for (std::size_t k = 1; k < rows.size(); ++k) ids.insert(rows[k][0]);
  CHECK(ids.size() == 2 * (9 + 12));
  const auto svg = tmp("portrait.svg");
  REQUIRE(run("portrait '" + data_path("double_pseudo_eq_p01.json") + "' --box 1 --seeds 3 --out '" + svg + "'").rc ==
          0);
  const auto text = slurp(svg);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("#2ca02c") != std::string::npos);  // sliding drawn
  CHECK(run("portrait '" + data_path("crossing.json") + "' --out '" + tmp("portrait.png") + "'").rc == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::vector<std::string> cmds = {
      "classify '" + data_path("pseudo_hopf.json") + "'",
      "return-map '" + data_path("pseudo_hopf.json") + "'",
      "integrate '" + data_path("double_pseudo_eq_p01.json") + "' --from 0.3,-0.2 --time 5",
      "sweep PseudoHopf --signs a=1,b=-1,c=1 --delta=-0.2:0.2:5",
  };
  for (const auto& c : cmds) {
    const auto a = run(c), b = run(c);
    CHECK(a.rc == b.rc);
    CHECK(a.out == b.out);
  }
  const std::string portrait = "portrait '" + data_path("regular_fold.json") + "' --box 1 --seeds 3 --out ";
  REQUIRE(run(portrait + "'" + tmp("det_a.svg") + "'").rc == 0);
  REQUIRE(run(portrait + "'" + tmp("det_b.svg") + "'").rc == 0);
  CHECK(slurp(tmp("det_a.svg")) == slurp(tmp("det_b.svg")));
}
