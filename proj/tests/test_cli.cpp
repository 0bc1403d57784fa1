#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dagfoci/dagfoci.hpp"

using namespace dagfoci;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "dagfoci_cli_tests";

struct CmdResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

CmdResult run_cli(const std::string& args) {
  fs::create_directories(kDir);
  fs::path out_file = kDir / "stdout.txt";
  fs::path err_file = kDir / "stderr.txt";
  std::string cmd = std::string("\"") + DAGFOCI_CLI_PATH + "\" " + args +
                    " >" + out_file.string() + " 2>" + err_file.string();
  int status = std::system(cmd.c_str());
  CmdResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

// everything after the "# dagfoci ..." banner line
std::string after_banner(const std::string& out) {
  auto nl = out.find('\n');
  REQUIRE(nl != std::string::npos);
  CHECK(out.starts_with("# dagfoci "));
  return out.substr(nl + 1);
}

const char* kColliderSpec =
    "spec collider\n"
    "node X1 noise=1 eq=eps\n"
    "node X2 noise=1 eq=eps\n"
    "node Y noise=0.3 eq=(+ X1 X2 eps)\n"
    "edge X1 Y\n"
    "edge X2 Y\n";

// weak S -> C edge: the {S, C} pair survives the marginal independence
// screen, leaving two multi-vertex candidates and an undetectable verdict
const char* kWeakForkSpec =
    "spec weakfork\n"
    "node A noise=1 eq=eps\n"
    "node B noise=1 eq=eps\n"
    "node S noise=1 eq=eps\n"
    "node Y noise=0.4 eq=(+ A B eps)\n"
    "node C noise=0.4 eq=(+ Y (* 0.15 S) eps)\n"
    "edge A Y\n"
    "edge B Y\n"
    "edge S C\n"
    "edge Y C\n";

const char* kChainSpec =
    "spec chain\n"
    "node X1 noise=1 eq=eps\n"
    "node Y noise=0.4 eq=(+ X1 eps)\n"
    "node X2 noise=0.4 eq=(+ Y eps)\n"
    "edge X1 Y\n"
    "edge Y X2\n";

fs::path spec_file(const char* name, const char* text) {
  fs::create_directories(kDir);
  fs::path p = kDir / name;
  spill(p, text);
  return p;
}

fs::path collider_csv() {
  static fs::path csv = [] {
    fs::path spec = spec_file("collider.spec", kColliderSpec);
    fs::path out = kDir / "collider.csv";
    CmdResult r = run_cli("simulate --spec " + spec.string() +
                          " --n 1500 --seed 1 --out " + out.string());
    REQUIRE(r.code == 0);
    return out;
  }();
  return csv;
}

}  // namespace

TEST_CASE("simulate writes the same csv the library produces", "[cli]") {
  fs::path csv = collider_csv();
  sem::DagSpec spec = sem::parse_dag_spec(kColliderSpec);
  CHECK(slurp(csv) == to_csv(sem::sample(spec, 1500, 1)));

  Dataset d = load_csv(csv.string());
  CHECK(d.names == std::vector<std::string>{"X1", "X2", "Y"});
  CHECK(d.n_rows() == 1500);
}

TEST_CASE("simulate is deterministic in the seed", "[cli]") {
  fs::path spec = spec_file("collider.spec", kColliderSpec);
  fs::path a = kDir / "sim_a.csv";
  fs::path b = kDir / "sim_b.csv";
  std::string base = "simulate --spec " + spec.string() + " --n 100 ";
  REQUIRE(run_cli(base + "--seed 4 --out " + a.string()).code == 0);
  REQUIRE(run_cli(base + "--seed 4 --out " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  REQUIRE(run_cli(base + "--seed 5 --out " + b.string()).code == 0);
  CHECK(slurp(a) != slurp(b));
}

TEST_CASE("simulate composes an intervention before printing the spec",
          "[cli]") {
  CmdResult r = run_cli(
      "simulate --builtin example1 --do X9 --do-shift 2 --do-scale 3 "
      "--print-spec");
  REQUIRE(r.code == 0);
  sem::DagSpec cut =
      sem::do_intervene(sem::builtin_example1(), "X9", {2.0, 3.0});
  CHECK(after_banner(r.out) == sem::print_dag_spec(cut));
}

TEST_CASE("every command prints a reproducibility banner first", "[cli]") {
  fs::path csv = collider_csv();
  CmdResult r = run_cli("codec " + csv.string() +
                        " --target Y --z X1 --seed 11 --n-perms 7");
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("# dagfoci codec seed=11 alpha=0.05 n_perms=7 "));
}

TEST_CASE("codec values match the library exactly", "[cli]") {
  fs::path csv = collider_csv();
  fs::path rep = kDir / "codec.json";
  CmdResult r = run_cli("codec " + csv.string() +
                        " --target Y --z X1,X2 --seed 11 --out " +
                        rep.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\nt = ") != std::string::npos);

  Dataset d = load_csv(csv.string());
  ColumnView x1 = d.column(0), x2 = d.column(1), y = d.column(2);
  std::vector<ColumnView> z{x1, x2};
  CodecValue v = codec_unconditional(y, MatrixView(z), 11);

  json doc = json::parse(slurp(rep));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["command"] == "codec");
  CHECK(doc["config"]["seed"] == 11);
  CHECK(doc["target"] == "Y");
  CHECK(doc["z"] == json::array({"X1", "X2"}));
  CHECK(doc["codec"]["t"].get<double>() == v.t);
  CHECK(doc["codec"]["n_used"] == v.n_used);
  CHECK(doc["codec"]["conditioning_size"] == 0);

  // conditional variant through --given
  fs::path rep2 = kDir / "codec2.json";
  r = run_cli("codec " + csv.string() +
              " --target X1 --z X2 --given Y --seed 12 --out " +
              rep2.string());
  REQUIRE(r.code == 0);
  std::vector<ColumnView> z2{x2}, given{y};
  CodecValue c = codec_conditional(x1, MatrixView(z2), MatrixView(given), 12);
  json doc2 = json::parse(slurp(rep2));
  CHECK(doc2["codec"]["t"].get<double>() == c.t);
  CHECK(doc2["codec"]["conditioning_size"] == 1);
  CHECK(c.t > 0.3);  // conditioning on the collider opens the path
}

TEST_CASE("errors go to stderr with a nonzero exit", "[cli]") {
  fs::path csv = collider_csv();
  CmdResult r = run_cli("codec " + csv.string() + " --target NOPE --z X1");
  CHECK(r.code == 1);
  CHECK(r.err == "error: unknown column 'NOPE'\n");

  r = run_cli("dagfoci " + csv.string() + " --target Y --alpha 1.5");
  CHECK(r.code == 1);
  CHECK(r.err == "error: alpha must be in (0, 1)\n");

  r = run_cli("codec " + csv.string() + " --z X1");  // missing --target
  CHECK(r.code != 0);
  CHECK(!r.err.empty());

  r = run_cli("dagfoci " + csv.string() + " --target Y --n-perms 0");
  CHECK(r.code == 1);
  CHECK(r.err == "error: need at least 1 permutation\n");
}

TEST_CASE("foci prints the selection trajectory in order", "[cli]") {
  fs::path csv = collider_csv();
  CmdResult r = run_cli("foci " + csv.string() + " --target Y --seed 5");
  REQUIRE(r.code == 0);
  std::string body = after_banner(r.out);
  CHECK(body.find("step 1: + X2 (T = ") != std::string::npos);
  CHECK(body.find("step 2: + X1 (T = ") != std::string::npos);
  CHECK(body.find("boundary(Y) = {X2, X1}\n") != std::string::npos);

  r = run_cli("foci " + csv.string() + " --target Y --seed 5 --max-boundary 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("step 2") == std::string::npos);
  CHECK(r.out.find("boundary(Y) = {X2}\n") != std::string::npos);
}

TEST_CASE("dagfoci reports a unique parental set", "[cli]") {
  fs::path csv = collider_csv();
  fs::path rep = kDir / "dag.json";
  CmdResult r = run_cli("dagfoci " + csv.string() +
                        " --target Y --n-perms 99 --seed 0 --out " +
                        rep.string());
  REQUIRE(r.code == 0);
  CHECK(after_banner(r.out) ==
        "verdict: unique\n"
        "parents(Y) = {X1, X2}\n");

  json doc = json::parse(slurp(rep));
  CHECK(doc["command"] == "dagfoci");
  CHECK(doc["result"]["verdict"] == "unique");
  CHECK(doc["result"]["sets"] == json::array({json::array({"X1", "X2"})}));
  CHECK(doc["result"]["cluster_graph"]["components"] ==
        json::array({json::array({"X1", "X2"})}));
  CHECK(!doc["result"].contains("message"));
}

TEST_CASE("dagfoci reports the undetectable verdict verbatim", "[cli]") {
  fs::path spec = spec_file("weakfork.spec", kWeakForkSpec);
  fs::path csv = kDir / "weakfork.csv";
  REQUIRE(run_cli("simulate --spec " + spec.string() +
                  " --n 1500 --seed 7 --out " + csv.string())
              .code == 0);

  fs::path rep = kDir / "weakfork.json";
  CmdResult r = run_cli("dagfoci " + csv.string() +
                        " --target Y --n-perms 99 --seed 0 --out " +
                        rep.string());
  REQUIRE(r.code == 0);
  CHECK(after_banner(r.out) ==
        "verdict: undetectable\n"
        "DAG-FOCI is not able to detect the parents\n");

  json doc = json::parse(slurp(rep));
  CHECK(doc["result"]["verdict"] == "undetectable");
  CHECK(doc["result"]["message"] ==
        "DAG-FOCI is not able to detect the parents");
  CHECK(doc["result"]["sets"] == json::array());
  CHECK(doc["result"]["candidate_sets"] ==
        json::array({json::array(), json::array({"A", "B"}),
                     json::array({"S", "C"})}));
}

TEST_CASE("intervene demotes candidates found after the intervention",
          "[cli]") {
  fs::path spec = spec_file("chain.spec", kChainSpec);
  fs::path obs = kDir / "chain_obs.csv";
  fs::path intv = kDir / "chain_int.csv";
  REQUIRE(run_cli("simulate --spec " + spec.string() +
                  " --n 1500 --seed 1 --out " + obs.string())
              .code == 0);
  REQUIRE(run_cli("simulate --spec " + spec.string() +
                  " --do Y --n 1500 --seed 205 --out " + intv.string())
              .code == 0);

  CmdResult r = run_cli("intervene --obs " + obs.string() + " --int " +
                        intv.string() + " --target Y --n-perms 99 --seed 0");
  REQUIRE(r.code == 0);
  CHECK(after_banner(r.out) ==
        "verdict: singletons\n"
        "candidate sets: {} {X1} {X2}\n"
        "interventional boundary = {X2}\n"
        "refined parental sets: {} {X1}\n"
        "children: {X2}\n");

  // the same rows routed through one tagged csv give the same answer
  Dataset d_obs = load_csv(obs.string());
  Dataset d_int = load_csv(intv.string());
  Dataset merged;
  merged.names = d_obs.names;
  merged.columns = d_obs.columns;
  for (std::size_t c = 0; c < merged.columns.size(); ++c)
    merged.columns[c].insert(merged.columns[c].end(),
                             d_int.columns[c].begin(),
                             d_int.columns[c].end());
  merged.environments.assign(d_obs.n_rows(), "obs");
  merged.environments.insert(merged.environments.end(), d_int.n_rows(), "do");
  fs::path both = kDir / "chain_both.csv";
  spill(both, to_csv(merged));

  CmdResult r2 = run_cli("intervene " + both.string() +
                         " --env-column env --obs-env obs --int-env do "
                         "--target Y --n-perms 99 --seed 0");
  REQUIRE(r2.code == 0);
  CHECK(r2.out == r.out);

  CmdResult bad = run_cli("intervene " + both.string() +
                          " --env-column env --obs-env nope --int-env do "
                          "--target Y");
  CHECK(bad.code == 1);
  CHECK(bad.err == "error: unknown environment 'nope'\n");

  CmdResult half = run_cli("intervene --obs " + obs.string() + " --target Y");
  CHECK(half.code == 1);
  CHECK(half.err == "error: need both --obs and --int\n");
}

TEST_CASE("benchmark writes a report and a plot table", "[cli]") {
  fs::path spec = spec_file("collider.spec", kColliderSpec);
  fs::path prefix = kDir / "bench";
  CmdResult r = run_cli("benchmark --spec " + spec.string() +
                        " --target Y --n-grid 200,300 --runs 2 --n-perms 19 "
                        "--seed 3 --out " +
                        prefix.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("true parents: {X1, X2}\n") != std::string::npos);

  json doc = json::parse(slurp(prefix.string() + ".json"));
  CHECK(doc["command"] == "benchmark");
  CHECK(doc["benchmark"]["true_parents"] == json::array({"X1", "X2"}));
  REQUIRE(doc["benchmark"]["by_n"].size() == 2);
  CHECK(doc["benchmark"]["by_n"][0]["n"] == 200);
  CHECK(doc["benchmark"]["by_n"][1]["n"] == 300);
  CHECK(doc["benchmark"]["by_n"][0]["per_run"].size() == 2);

  std::string plot = slurp(prefix.string() + "_plot.csv");
  CHECK(plot.starts_with(
      "n,exact_count,non_unique_count,false_positive_runs,mean_false,"
      "mean_missing,mean_jaccard\n"));

  CmdResult bad = run_cli("benchmark --spec " + spec.string() + " --target Y");
  CHECK(bad.code == 1);
  CHECK(bad.err == "error: benchmark needs --n-grid\n");
}

TEST_CASE("benchmark sweep matches the library sweep", "[cli]") {
  fs::path prefix = kDir / "sweep";
  CmdResult r = run_cli(
      "benchmark --sweep codec-gap --alphas 0,0.5 --sweep-n 400 --seed 9 "
      "--out " +
      prefix.string());
  REQUIRE(r.code == 0);

  std::array<double, 2> alphas{0.0, 0.5};
  std::vector<GapPoint> pts = codec_gap_sweep(alphas, 400, 9);
  json doc = json::parse(slurp(prefix.string() + ".json"));
  REQUIRE(doc["points"].size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(doc["points"][i]["alpha"].get<double>() == pts[i].alpha);
    CHECK(doc["points"][i]["t_grandparent"].get<double>() ==
          pts[i].t_grandparent);
    CHECK(doc["points"][i]["t_parent_max"].get<double>() ==
          pts[i].t_parent_max);
  }
  std::string plot = slurp(prefix.string() + "_plot.csv");
  CHECK(plot.starts_with("alpha,t_grandparent,t_parent_max\n"));

  CmdResult bad = run_cli("benchmark --sweep nope");
  CHECK(bad.code == 1);
  CHECK(bad.err == "error: unknown sweep 'nope'\n");
}
