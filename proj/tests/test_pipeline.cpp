// Copyright 2026 The Glassbox Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glassbox/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "glassbox/frame.hpp"
#include "glassbox/gbdt.hpp"
#include "glassbox/svg.hpp"
#include "test_util.hpp"

using namespace glassbox;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Small end-to-end run shared by the pipeline tests: synth -> ingest ->
// cluster -> ingest with clusters -> train -> explain.
void run_mini_pipeline(const std::string& root, int threads) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%d", threads);
  setenv("GLASSBOX_THREADS", buf, 1);

  json synth_cfg = {{"out_dir", root + "/data"}, {"seed", 5},     {"n_users", 900},
                    {"n_skus", 250},             {"buyer_fraction", 0.5}};
  run_command("synth", synth_cfg);

  json cluster_cfg = {{"out_dir", root + "/cluster"},
                      {"skus", root + "/data/skus.csv"},
                      {"seed", 5}};
  run_command("cluster", cluster_cfg);

  json ingest_cfg = {{"out_dir", root + "/frames"},
                     {"users", root + "/data/users.csv"},
                     {"clicks", root + "/data/clicks.csv"},
                     {"orders", root + "/data/orders.csv"},
                     {"skus", root + "/data/skus.csv"},
                     {"clusters", root + "/cluster/clusters.csv"}};
  run_command("ingest", ingest_cfg);

  json train_cfg = {{"out_dir", root + "/model"},
                    {"frame", root + "/frames/sales_frame.csv"},
                    {"schema", root + "/frames/sales_frame.schema.json"},
                    {"model", "gbdt"},
                    {"seed", 5},
                    {"params", {{"num_rounds", 25}, {"max_leaves", 15}}}};
  run_command("train", train_cfg);

  json explain_cfg = {{"out_dir", root + "/explain"},
                      {"model", root + "/model/model.json"},
                      {"frame", root + "/frames/sales_frame.csv"},
                      {"schema", root + "/frames/sales_frame.schema.json"},
                      {"rows", 40},
                      {"h_sample", 60},
                      {"seed", 5}};
  run_command("explain", explain_cfg);

  unsetenv("GLASSBOX_THREADS");
}

}  // namespace

TEST_CASE("pipeline: full run produces every artifact and snapshot") {
  testutil::TempDir dir("pipe_full");
  run_mini_pipeline(dir.str(), 2);

  namespace fs = std::filesystem;
  for (const char* p :
       {"/data/users.csv", "/data/ground_truth.json", "/data/run_config.json",
        "/cluster/clusters.csv", "/cluster/cluster.json", "/cluster/elbow.csv",
        "/frames/sales_frame.csv", "/frames/sales_frame.schema.json",
        "/frames/choice_frame.csv", "/frames/ingest_report.json", "/model/model.json",
        "/model/train_report.json", "/explain/explanations.csv", "/explain/explanations.json",
        "/explain/importance.csv", "/explain/values.csv", "/explain/run_config.json"}) {
    CHECK_MESSAGE(fs::exists(dir.str() + p), p);
  }

  // choice frame is a 4-class classification frame without the attributes
  Frame choice = Frame::load(dir.str() + "/frames/choice_frame.csv",
                             dir.str() + "/frames/choice_frame.schema.json");
  CHECK(choice.classification);
  CHECK(choice.cols() == 18);
  CHECK(choice.feature_index("attribute1") == -1);
}

TEST_CASE("pipeline: decision plot terminal value equals the model margin") {
  testutil::TempDir dir("pipe_decision");
  run_mini_pipeline(dir.str(), 1);

  // locate the decision plot json + csv
  namespace fs = std::filesystem;
  std::string stem;
  for (const auto& e : fs::directory_iterator(dir.str() + "/explain")) {
    auto name = e.path().filename().string();
    if (name.rfind("decision_", 0) == 0 && name.ends_with(".json")) {
      stem = e.path().string().substr(0, e.path().string().size() - 5);
    }
  }
  REQUIRE(!stem.empty());
  json meta = json::parse(slurp(stem + ".json"));
  CsvTable data = read_csv(stem + ".csv");
  double cumulative = parse_double(data.rows.back()[data.column("cumulative")]);
  CHECK(cumulative == doctest::Approx(meta["model_output"].get<double>()).epsilon(1e-9));

  // cross-check against a fresh prediction from the saved model
  Ensemble ens = Ensemble::load(dir.str() + "/model/model.json");
  Frame frame = Frame::load(dir.str() + "/frames/sales_frame.csv",
                            dir.str() + "/frames/sales_frame.schema.json");
  const std::string row_id = meta["row_id"].get<std::string>();
  for (int64_t r = 0; r < frame.rows(); ++r) {
    if (frame.row_ids[r] == row_id) {
      CHECK(ens.predict_value(frame.row(r)) ==
            doctest::Approx(meta["model_output"].get<double>()).epsilon(1e-9));
    }
  }
}

TEST_CASE("pipeline: rerun with the same snapshot is byte-identical across thread counts") {
  testutil::TempDir d1("pipe_det1");
  testutil::TempDir d2("pipe_det2");
  run_mini_pipeline(d1.str(), 1);
  run_mini_pipeline(d2.str(), 4);

  namespace fs = std::filesystem;
  std::vector<std::string> rel_files;
  for (auto& e : fs::recursive_directory_iterator(d1.str())) {
    if (e.is_regular_file()) {
      auto rel = fs::relative(e.path(), d1.str()).string();
      rel_files.push_back(rel);
    }
  }
  REQUIRE(!rel_files.empty());
  for (const auto& rel : rel_files) {
    if (rel.find("run_config") != std::string::npos) continue;  // holds absolute paths
    CAPTURE(rel);
    CHECK(slurp(d1.str() + "/" + rel) == slurp(d2.str() + "/" + rel));
  }
}

TEST_CASE("pipeline: bench runs every model on one split and records row ids") {
  testutil::TempDir dir("pipe_bench");
  // small planted regression frame
  Rng rng(33);
  Frame f = testutil::random_mixed_frame(rng, 5, 260);
  for (int64_t r = 0; r < f.rows(); ++r) {
    f.target[r] = (f.at(r, 0) > 2.5 && f.at(r, 1) > 2.5 ? 3.0 : 0.0) + 0.4 * f.at(r, 3) +
                  0.3 * rng.normal();
  }
  f.save(dir.file("f.csv"), dir.file("f.schema.json"));

  json cfg = {{"out_dir", dir.str() + "/bench"},
              {"frame", dir.file("f.csv")},
              {"schema", dir.file("f.schema.json")},
              {"seed", 3},
              {"params", {{"num_rounds", 40}, {"max_leaves", 8}}}};
  run_command("bench", cfg);

  json bench = json::parse(slurp(dir.str() + "/bench/bench.json"));
  CHECK(bench["metric"] == "rmse");
  CHECK(bench["results"].size() == 4);  // gbdt, lasso, ridge, knn
  REQUIRE(bench["splits"].size() == 1);
  auto train_ids = bench["splits"][0]["train_row_ids"];
  auto test_ids = bench["splits"][0]["test_row_ids"];
  CHECK(train_ids.size() + test_ids.size() == static_cast<size_t>(f.rows()));
}

TEST_CASE("pipeline: stats command emits tables, grids and span distributions") {
  testutil::TempDir dir("pipe_stats");
  json synth_cfg = {{"out_dir", dir.str() + "/data"}, {"seed", 9}, {"n_users", 700},
                    {"n_skus", 200}, {"buyer_fraction", 0.5}};
  run_command("synth", synth_cfg);
  json stats_cfg = {{"out_dir", dir.str() + "/stats"},
                    {"users", dir.str() + "/data/users.csv"},
                    {"clicks", dir.str() + "/data/clicks.csv"},
                    {"orders", dir.str() + "/data/orders.csv"},
                    {"skus", dir.str() + "/data/skus.csv"}};
  run_command("stats", stats_cfg);

  namespace fs = std::filesystem;
  for (const char* p : {"/stats/order_count_table.csv", "/stats/spend_hist.csv",
                        "/stats/spend_cdf.csv", "/stats/interaction_time_buyers.csv",
                        "/stats/interaction_time_non_buyers.csv",
                        "/stats/grid_age_total_spend.csv", "/stats/grid_user_level_units_per_order.csv"}) {
    CHECK_MESSAGE(fs::exists(dir.str() + p), p);
  }

  // row-normalization holds in the exported grid
  CsvTable grid = read_csv(dir.str() + "/stats/grid_gender_total_spend.csv");
  int lc = grid.column("level");
  int pc = grid.column("probability");
  std::map<std::string, double> sums;
  for (const auto& r : grid.rows) sums[r[lc]] += parse_double(r[pc]);
  for (const auto& [level, total] : sums) {
    if (total == 0.0) continue;  // flagged empty level
    CAPTURE(level);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pipeline: plot renders every product kind emitted by the run") {
  testutil::TempDir dir("pipe_plot");
  run_mini_pipeline(dir.str(), 2);

  namespace fs = std::filesystem;
  int rendered = 0;
  for (const auto& e : fs::directory_iterator(dir.str() + "/explain")) {
    auto path = e.path().string();
    if (!path.ends_with(".json")) continue;
    auto stem = path.substr(0, path.size() - 5);
    if (!fs::exists(stem + ".csv")) continue;
    if (json::parse(slurp(path)).contains("plot_kind") == false) continue;
    json cfg = {{"out_dir", dir.str() + "/plots"},
                {"input", stem + ".csv"},
                {"meta", stem + ".json"},
                {"name", fs::path(stem).filename().string()}};
    run_command("plot", cfg);
    auto svg = slurp(dir.str() + "/plots/" + fs::path(stem).filename().string() + ".svg");
    CHECK(svg.find("<svg") == 0);
    ++rendered;
  }
  CHECK(rendered >= 4);  // importance, values, dependence, decision at least

  // plots are pure functions of their inputs
  json cfg = {{"out_dir", dir.str() + "/plots2"},
              {"input", dir.str() + "/explain/importance.csv"},
              {"meta", dir.str() + "/explain/importance.json"}};
  run_command("plot", cfg);
  run_command("plot", cfg);
  CHECK(slurp(dir.str() + "/plots2/importance.svg") ==
        render_svg_files(dir.str() + "/explain/importance.csv",
                         dir.str() + "/explain/importance.json"));
}

TEST_CASE("pipeline: unknown command and missing config keys raise validation errors") {
  CHECK_THROWS_AS(run_command("frobnicate", json::object()), ValidationError);
  CHECK_THROWS_AS(run_command("synth", json::object()), ValidationError);
}

TEST_CASE("pipeline: explain refuses a model/frame schema mismatch naming both hashes") {
  testutil::TempDir dir("pipe_mismatch");
  run_mini_pipeline(dir.str(), 1);
  json cfg = {{"out_dir", dir.str() + "/bad"},
              {"model", dir.str() + "/model/model.json"},
              {"frame", dir.str() + "/frames/choice_frame.csv"},
              {"schema", dir.str() + "/frames/choice_frame.schema.json"}};
  try {
    run_command("explain", cfg);
    FAIL("expected schema mismatch");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("mismatch") != std::string::npos);
  }
}
