#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ggclf/ggclf.hpp"
#include "test_util.hpp"

#ifndef GGCLF_CLI_PATH
#error "GGCLF_CLI_PATH must point at the ggclf binary"
#endif
#ifndef GGCLF_TEST_DATA_DIR
#define GGCLF_TEST_DATA_DIR "tests/data"
#endif

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const tu::TempDir& tmp, const std::string& args) {
  const std::string out_path = tmp.file("run_stdout.txt");
  const std::string err_path = tmp.file("run_stderr.txt");
  const std::string cmd =
      std::string("\"") + GGCLF_CLI_PATH + "\" " + args + " >" + out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = tu::read_file(out_path);
  r.err = tu::read_file(err_path);
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string write_blob_csv(const tu::TempDir& tmp, const std::string& name, double var,
                           std::size_t n_per_class, std::uint64_t seed) {
  const auto ds = ggclf::gen_gaussian_pair({0.0, 0.0}, {6.0, 6.0}, var, n_per_class, seed);
  const std::string path = tmp.file(name);
  ggclf::save_csv(ds, path);
  return path;
}

constexpr const char* kFivePointCsv =
    "x,y,label\n"
    "0,0,a\n"
    "0.5,1,b\n"
    "2,0.3,a\n"
    "1.5,1.3,b\n"
    "1.2,-0.3,a\n";

}  // namespace

TEST_CASE("usage errors exit 2") {
  tu::TempDir tmp;
  CHECK(run_cli(tmp, "").code == 2);
  CHECK(run_cli(tmp, "frobnicate").code == 2);
  CHECK(run_cli(tmp, "graph").code == 2);  // --data is required
  const auto r = run_cli(tmp, "train --data x.csv --positive a");
  CHECK(r.code == 2);  // --out is required
  CHECK(r.err.find("--out") != std::string::npos);
}

TEST_CASE("help exits 0") {
  tu::TempDir tmp;
  const auto top = run_cli(tmp, "--help");
  CHECK(top.code == 0);
  CHECK(top.out.find("toolkit") != std::string::npos);
  const auto sub = run_cli(tmp, "train --help");
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--rule") != std::string::npos);
}

TEST_CASE("data errors exit 1 with a message on stderr") {
  tu::TempDir tmp;
  const auto r = run_cli(tmp, "graph --data " + tmp.file("absent.csv") + " --positive a");
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(r.err.find("cannot open") != std::string::npos);

  const auto m = run_cli(tmp, "predict --model " + tmp.file("absent.json") + " --data " +
                                  tmp.file("absent.csv"));
  CHECK(m.code == 1);
  CHECK(m.err.find("cannot open model file") != std::string::npos);
}

TEST_CASE("graph subcommand emits the edge list and adjacency") {
  tu::TempDir tmp;
  const auto csv = tu::write_file(tmp.file("five.csv"), kFivePointCsv);
  const auto edges_path = tmp.file("edges.tsv");
  const auto adj_path = tmp.file("adj.json");
  const auto r = run_cli(tmp, "graph --data " + csv + " --positive a --edges " + edges_path +
                                  " --adjacency " + adj_path);
  REQUIRE(r.code == 0);

  CHECK(tu::read_file(edges_path) ==
        "# schema: ggclf/edges/v1\n"
        "# n: 5\n"
        "0\t1\n0\t4\n1\t3\n1\t4\n2\t3\n2\t4\n");

  const auto j = ggclf::Json::parse(tu::read_file(adj_path));
  CHECK(j["schema"] == "ggclf/graph/v1");
  CHECK(j["n"] == 5);
  CHECK(j["edge_count"] == 6);
  CHECK(j["neighbors"][1] == ggclf::Json::array({0, 3, 4}));
  CHECK(j["dataset_hash"].is_string());
}

TEST_CASE("quality subcommand reports q, thresholds, removals") {
  tu::TempDir tmp;
  const auto csv = tu::write_file(tmp.file("line.csv"), "x,label\n0,p\n1,p\n2,n\n3,n\n");
  const auto out = tmp.file("quality.tsv");
  const auto r =
      run_cli(tmp, "quality --data " + csv + " --positive p --no-normalize --out " + out);
  REQUIRE(r.code == 0);
  CHECK(tu::read_file(out) ==
        "# schema: ggclf/quality/v1\n"
        "# theta_pos: 0.75\n"
        "# theta_neg: 0.75\n"
        "# h_pos: 1\n"
        "# h_neg: 1\n"
        "index\tlabel\tq\ttheta\tremoved\n"
        "0\tp\t1\t0.75\t0\n"
        "1\tp\t0.5\t0.75\t1\n"
        "2\tn\t0.5\t0.75\t1\n"
        "3\tn\t1\t0.75\t0\n");
}

TEST_CASE("train then predict round trip") {
  tu::TempDir tmp;
  const auto csv = write_blob_csv(tmp, "blobs.csv", 0.25, 12, 3);
  const std::string data_args = " --data " + csv + " --label 2 --positive +1 --header no";

  const auto model_path = tmp.file("model.json");
  const auto t1 = run_cli(tmp, "train" + data_args + " --out " + model_path);
  REQUIRE(t1.code == 0);
  CHECK(t1.err.find("support edges") != std::string::npos);
  const auto j = ggclf::Json::parse(tu::read_file(model_path));
  CHECK(j["schema"] == "ggclf/model/v1");
  CHECK(j["dimension"] == 2);

  SECTION("retraining writes a byte-identical model") {
    const auto model2 = tmp.file("model2.json");
    REQUIRE(run_cli(tmp, "train" + data_args + " --out " + model2).code == 0);
    CHECK(tu::read_file(model2) == tu::read_file(model_path));
  }

  SECTION("labeled prediction reports AUC") {
    const auto pred = tmp.file("pred.tsv");
    const auto p = run_cli(tmp, "predict --model " + model_path + data_args + " --out " + pred);
    REQUIRE(p.code == 0);
    const auto lines = lines_of(tu::read_file(pred));
    REQUIRE(lines.size() == 3 + 24);
    CHECK(lines[0] == "# schema: ggclf/predictions/v1");
    double auc_value = -1.0;
    REQUIRE(std::sscanf(lines[1].c_str(), "# auc: %lf", &auc_value) == 1);
    CHECK(auc_value >= 0.99);
    CHECK(lines[2] == "index\tp_positive\tprediction\tlabel");
  }

  SECTION("unlabeled prediction omits the label column") {
    const auto feats = tu::write_file(tmp.file("feats.csv"), "x1,x2\n0,0\n6,6\n");
    const auto pred = tmp.file("pred_unlabeled.tsv");
    const auto p = run_cli(tmp, "predict --model " + model_path + " --data " + feats + " --out " + pred);
    REQUIRE(p.code == 0);
    const auto lines = lines_of(tu::read_file(pred));
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "index\tp_positive\tprediction");
    CHECK(lines[2].ends_with("\t-1"));
    CHECK(lines[3].ends_with("\t+1"));
  }

  SECTION("dimension mismatch is a data error") {
    const auto feats = tu::write_file(tmp.file("wide.csv"), "a,b,c\n1,2,3\n");
    const auto p = run_cli(tmp, "predict --model " + model_path + " --data " + feats);
    CHECK(p.code == 1);
    CHECK(p.err.find("dimension mismatch") != std::string::npos);
  }
}

TEST_CASE("tune writes a JSONL trial history") {
  tu::TempDir tmp;
  const auto csv = write_blob_csv(tmp, "blobs.csv", 0.4, 10, 5);
  const auto hist = tmp.file("history.jsonl");
  const auto r = run_cli(tmp, "tune --data " + csv +
                                  " --label 2 --positive +1 --header no"
                                  " --budget 4 --inner-k 2 --seed 1 --history " +
                                  hist);
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("best\ttrial=", 0) == 0);

  const auto lines = lines_of(tu::read_file(hist));
  REQUIRE(lines.size() == 4);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto j = ggclf::Json::parse(lines[i]);
    CHECK(j["schema"] == "ggclf/trial/v1");
    CHECK(j["trial"] == i + 1);
    CHECK(j["params"].contains("h_pos"));
    CHECK(j["params"].contains("h_neg"));
  }
  const auto first = ggclf::Json::parse(lines[0]);
  CHECK(first["params"]["h_pos"] == 1.0);
  CHECK(first["params"]["h_neg"] == 1.0);
  CHECK(first["valid"] == true);
}

TEST_CASE("bench writes the nested cross-validation report") {
  tu::TempDir tmp;
  const auto csv = write_blob_csv(tmp, "blobs.csv", 0.4, 10, 5);
  const std::string args = "bench --data " + csv +
                           " --label 2 --positive +1 --header no"
                           " --outer-k 2 --inner-k 2 --budget 2 --seed 0 --out ";
  const auto out1 = tmp.file("bench1.json");
  const auto r = run_cli(tmp, args + out1);
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("mean_auc\ttuned=", 0) == 0);

  const auto j = ggclf::Json::parse(tu::read_file(out1));
  CHECK(j["schema"] == "ggclf/bench/v1");
  CHECK(j["per_fold"].size() == 2);
  CHECK(j["chosen_h"].size() == 2);
  CHECK(j["fixed_baseline"]["per_fold"].size() == 2);
  CHECK(j["config"]["outer_k"] == 2);
  CHECK(j["dataset_hash"].is_string());

  const auto out2 = tmp.file("bench2.json");
  REQUIRE(run_cli(tmp, args + out2).code == 0);
  CHECK(tu::read_file(out2) == tu::read_file(out1));
}

TEST_CASE("stats reproduces the bundled rank analysis") {
  tu::TempDir tmp;
  const std::string table = std::string(GGCLF_TEST_DATA_DIR) + "/benchmark_scores.csv";
  const auto json_path = tmp.file("stats.json");
  const auto r = run_cli(tmp, "stats --table " + table + " --f-critical 2.01 --json " + json_path);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("friedman chi2 = 22.7608") != std::string::npos);
  CHECK(r.out.find("friedman F = 3.2160") != std::string::npos);
  CHECK(r.out.find("q_alpha = 2.7240") != std::string::npos);
  CHECK(r.out.find("CD = 2.5588") != std::string::npos);
  CHECK(r.out.find("rejected at F critical 2.0100") != std::string::npos);
  CHECK(r.out.find("yes (best)") != std::string::npos);

  const auto j = ggclf::Json::parse(tu::read_file(json_path));
  CHECK(j["schema"] == "ggclf/stats/v1");
  CHECK(j["best"] == "Random Forest");
  CHECK(j["reject_null"] == true);
  CHECK(j["within_cd_of_best"].get<std::vector<bool>>() ==
        std::vector<bool>{false, true, true, false, true, true, true, true, true});
  CHECK(std::abs(j["friedman_chi2"].get<double>() - 22.7608) < 1e-3);
}

TEST_CASE("margin-curve emits one row per variance") {
  tu::TempDir tmp;
  const auto out = tmp.file("curve.tsv");
  const auto r = run_cli(tmp, "margin-curve --var 0:0.2:0.2 --n 25 --seed 3 --out " + out);
  REQUIRE(r.code == 0);
  const auto lines = lines_of(tu::read_file(out));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# schema: ggclf/margin-curve/v1");
  CHECK(lines[3] == "variance\tmean_margin\tmean_margin_filtered\tmean_quality");
  // zero variance: duplicates give margin exactly 1, no usable graph statistics
  CHECK(lines[4] == "0\t1\tnan\tnan");
  double var = -1, margin = -1, filtered = -1, quality = -1;
  REQUIRE(std::sscanf(lines[5].c_str(), "%lf %lf %lf %lf", &var, &margin, &filtered, &quality) == 4);
  CHECK(var == 0.2);
  CHECK(margin < 1.0);
  CHECK(quality > 0.0);
  CHECK(quality <= 1.0);
}

TEST_CASE("margin-surface output is deterministic and covers the grid") {
  tu::TempDir tmp;
  const std::string args =
      "margin-surface --gauss-var 0.3 --n 12 --seed 2 --steps 3 --h-lo 0.5 --h-hi 2 --out ";
  const auto out1 = tmp.file("surface1.tsv");
  const auto out2 = tmp.file("surface2.tsv");
  REQUIRE(run_cli(tmp, args + out1).code == 0);
  REQUIRE(run_cli(tmp, args + out2).code == 0);
  const auto text = tu::read_file(out1);
  CHECK(text == tu::read_file(out2));

  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 2 + 9);
  CHECK(lines[0] == "# schema: ggclf/margin-surface/v1");
  CHECK(lines[1] == "h_pos\th_neg\tmean_margin\tkept_count");
  bool center_seen = false;
  for (std::size_t i = 2; i < lines.size(); ++i)
    if (lines[i].rfind("1\t1\t", 0) == 0) center_seen = true;
  CHECK(center_seen);
}

TEST_CASE("margin-surface with a data file requires the positive label") {
  tu::TempDir tmp;
  const auto csv = tu::write_file(tmp.file("five.csv"), kFivePointCsv);
  CHECK(run_cli(tmp, "margin-surface --data " + csv).code == 2);
}
