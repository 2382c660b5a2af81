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

// Command-line front end. All work happens behind the shared library's C
// API; this binary only turns flags into the JSON configuration documents
// the library consumes.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glassbox/c_api.h"

namespace {

using nlohmann::json;

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot open config file %s\n", path.c_str());
    std::exit(GBX_ERR_VALIDATION);
  }
  return json::parse(in, nullptr, true);
}

int run(const std::string& command, const json& config) {
  int rc = gbx_run_command(command.c_str(), config.dump().c_str());
  if (rc != GBX_OK) {
    std::fprintf(stderr, "error: %s\n", gbx_last_error());
  }
  return rc;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--out", c.out_dir, "output directory")->required();
}

struct TableOpts {
  std::string users, clicks, orders, skus, month;
  bool lenient = false;
};

void add_tables(CLI::App* cmd, TableOpts& t) {
  cmd->add_option("--users", t.users, "users.csv path")->required();
  cmd->add_option("--clicks", t.clicks, "clicks.csv path")->required();
  cmd->add_option("--orders", t.orders, "orders.csv path")->required();
  cmd->add_option("--skus", t.skus, "skus.csv path")->required();
  cmd->add_option("--month", t.month, "month window, YYYY-MM (default 2018-03)");
  cmd->add_flag("--lenient", t.lenient, "skip malformed rows with diagnostics");
}

void merge_tables(json& cfg, const TableOpts& t) {
  cfg["users"] = t.users;
  cfg["clicks"] = t.clicks;
  cfg["orders"] = t.orders;
  cfg["skus"] = t.skus;
  if (!t.month.empty()) cfg["month"] = t.month;
  if (t.lenient) cfg["lenient"] = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("glassbox ") + gbx_version() +
               " - transaction analytics, boosted trees and Shapley explanations"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic transaction month");
  CommonOpts synth_c;
  add_common(synth, synth_c);
  int64_t users = -1, skus = -1;
  double buyer_fraction = -1.0;
  std::string synth_month;
  int64_t synth_seed = -1;
  synth->add_option("--seed", synth_seed, "generator seed (required here or in --config)");
  synth->add_option("--n-users", users, "number of users");
  synth->add_option("--n-skus", skus, "number of SKUs");
  synth->add_option("--buyer-fraction", buyer_fraction, "fraction of users who order");
  synth->add_option("--month", synth_month, "month to generate, YYYY-MM");
  synth->callback([&] {
    json cfg = load_config_file(synth_c.config_path);
    cfg["out_dir"] = synth_c.out_dir;
    if (synth_seed >= 0) cfg["seed"] = synth_seed;
    if (users >= 0) cfg["n_users"] = users;
    if (skus >= 0) cfg["n_skus"] = skus;
    if (buyer_fraction >= 0.0) cfg["buyer_fraction"] = buyer_fraction;
    if (!synth_month.empty()) cfg["month"] = synth_month;
    std::exit(run("synth", cfg));
  });

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "parse tables and build model-ready frames");
  CommonOpts ingest_c;
  TableOpts ingest_t;
  std::string clusters;
  add_common(ingest, ingest_c);
  add_tables(ingest, ingest_t);
  ingest->add_option("--clusters", clusters,
                     "clusters.csv from the cluster command; adds the choice frame");
  ingest->callback([&] {
    json cfg = load_config_file(ingest_c.config_path);
    cfg["out_dir"] = ingest_c.out_dir;
    merge_tables(cfg, ingest_t);
    if (!clusters.empty()) cfg["clusters"] = clusters;
    std::exit(run("ingest", cfg));
  });

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "descriptive statistics and distribution grids");
  CommonOpts stats_c;
  TableOpts stats_t;
  double bin_width = -1.0, clip = -1.0;
  int bin_minutes = -1;
  add_common(stats, stats_c);
  add_tables(stats, stats_t);
  stats->add_option("--bin-width", bin_width, "spend/discount bin width (default 10)");
  stats->add_option("--clip", clip, "spend/discount clip with overflow bucket (default 500)");
  stats->add_option("--bin-minutes", bin_minutes, "interaction span bin (default 10)");
  stats->callback([&] {
    json cfg = load_config_file(stats_c.config_path);
    cfg["out_dir"] = stats_c.out_dir;
    merge_tables(cfg, stats_t);
    if (bin_width > 0) cfg["bin_width"] = bin_width;
    if (clip > 0) cfg["clip"] = clip;
    if (bin_minutes > 0) cfg["bin_minutes"] = bin_minutes;
    std::exit(run("stats", cfg));
  });

  // ---- cluster ----
  auto* cluster = app.add_subcommand("cluster", "k-means over SKU attributes with elbow selection");
  CommonOpts cluster_c;
  add_common(cluster, cluster_c);
  std::string cluster_skus;
  int k = -1, k_min = -1, k_max = -1;
  int64_t cluster_seed = -1;
  bool no_standardize = false;
  cluster->add_option("--skus", cluster_skus, "skus.csv path")->required();
  cluster->add_option("--k", k, "cluster count; omit to pick by the elbow method");
  cluster->add_option("--k-min", k_min, "elbow range start (default 1)");
  cluster->add_option("--k-max", k_max, "elbow range end (default 8)");
  cluster->add_option("--seed", cluster_seed, "seeding RNG");
  cluster->add_flag("--no-standardize", no_standardize, "cluster on raw attribute scales");
  cluster->callback([&] {
    json cfg = load_config_file(cluster_c.config_path);
    cfg["out_dir"] = cluster_c.out_dir;
    cfg["skus"] = cluster_skus;
    if (k > 0) cfg["k"] = k;
    if (k_min > 0) cfg["k_min"] = k_min;
    if (k_max > 0) cfg["k_max"] = k_max;
    if (cluster_seed >= 0) cfg["seed"] = cluster_seed;
    if (no_standardize) cfg["standardize"] = false;
    std::exit(run("cluster", cfg));
  });

  // ---- train ----
  auto* train = app.add_subcommand("train", "fit a model on a frame");
  CommonOpts train_c;
  add_common(train, train_c);
  std::string frame, schema, model = "gbdt", weighting;
  int64_t train_seed = -1;
  double lambda = -1.0, alpha = -1.0;
  int knn_k = -1;
  bool log1p = false;
  int rounds = -1, max_leaves = -1, max_bins = -1;
  double lr = -1.0, mcw = -1.0, ff = -1.0, bf = -1.0, l2 = -1.0;
  train->add_option("--frame", frame, "frame csv")->required();
  train->add_option("--schema", schema, "frame schema json")->required();
  train->add_option("--model", model, "gbdt|lasso|ridge|knn|nb (default gbdt)");
  train->add_option("--seed", train_seed, "training seed");
  train->add_option("--lambda", lambda, "linear model penalty; omit for 5-fold CV");
  train->add_option("--k", knn_k, "knn neighbor count; omit for 5-fold CV");
  train->add_option("--weighting", weighting, "knn weighting: uniform|inverse_distance");
  train->add_option("--alpha", alpha, "naive bayes smoothing (default 1)");
  train->add_flag("--log1p-target", log1p, "train the sales model on log1p(quantity)");
  train->add_option("--rounds", rounds, "gbdt boosting rounds (default 200)");
  train->add_option("--learning-rate", lr, "gbdt learning rate (default 0.1)");
  train->add_option("--max-leaves", max_leaves, "gbdt leaves per tree (default 31)");
  train->add_option("--min-child-weight", mcw, "gbdt minimum child hessian (default 1)");
  train->add_option("--max-bins", max_bins, "gbdt histogram bins (default 255)");
  train->add_option("--feature-fraction", ff, "gbdt per-tree feature fraction");
  train->add_option("--bagging-fraction", bf, "gbdt per-round row fraction");
  train->add_option("--l2", l2, "gbdt leaf l2 penalty (default 1)");
  train->callback([&] {
    json cfg = load_config_file(train_c.config_path);
    cfg["out_dir"] = train_c.out_dir;
    cfg["frame"] = frame;
    cfg["schema"] = schema;
    cfg["model"] = model;
    if (train_seed >= 0) cfg["seed"] = train_seed;
    if (lambda >= 0.0) cfg["lambda"] = lambda;
    if (knn_k > 0) cfg["k"] = knn_k;
    if (!weighting.empty()) cfg["weighting"] = weighting;
    if (alpha > 0.0) cfg["alpha"] = alpha;
    if (log1p) cfg["log1p_target"] = true;
    json params = cfg.contains("params") ? cfg["params"] : json::object();
    if (rounds > 0) params["num_rounds"] = rounds;
    if (lr > 0) params["learning_rate"] = lr;
    if (max_leaves > 0) params["max_leaves"] = max_leaves;
    if (mcw > 0) params["min_child_weight"] = mcw;
    if (max_bins > 0) params["max_bins"] = max_bins;
    if (ff > 0) params["feature_fraction"] = ff;
    if (bf > 0) params["bagging_fraction"] = bf;
    if (l2 >= 0) params["l2"] = l2;
    if (!params.empty()) cfg["params"] = params;
    std::exit(run("train", cfg));
  });

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "benchmark models on one seeded split");
  CommonOpts bench_c;
  add_common(bench, bench_c);
  std::string bench_frame, bench_schema;
  std::vector<uint64_t> seeds;
  std::vector<std::string> models;
  double test_fraction = -1.0;
  bool bench_log1p = false;
  int bench_rounds = -1;
  double bench_lr = -1.0;
  bench->add_option("--frame", bench_frame, "frame csv")->required();
  bench->add_option("--schema", bench_schema, "frame schema json")->required();
  bench->add_option("--seeds", seeds, "split seeds (repeatable)");
  bench->add_option("--models", models, "models to run (default per task)");
  bench->add_option("--test-fraction", test_fraction, "holdout fraction (default 0.2)");
  bench->add_flag("--log1p-target", bench_log1p, "train regressions on log1p(quantity)");
  bench->add_option("--rounds", bench_rounds, "gbdt boosting rounds");
  bench->add_option("--learning-rate", bench_lr, "gbdt learning rate");
  bench->callback([&] {
    json cfg = load_config_file(bench_c.config_path);
    cfg["out_dir"] = bench_c.out_dir;
    cfg["frame"] = bench_frame;
    cfg["schema"] = bench_schema;
    if (!seeds.empty()) cfg["seeds"] = seeds;
    if (!models.empty()) cfg["models"] = models;
    if (test_fraction > 0) cfg["test_fraction"] = test_fraction;
    if (bench_log1p) cfg["log1p_target"] = true;
    json params = cfg.contains("params") ? cfg["params"] : json::object();
    if (bench_rounds > 0) params["num_rounds"] = bench_rounds;
    if (bench_lr > 0) params["learning_rate"] = bench_lr;
    if (!params.empty()) cfg["params"] = params;
    std::exit(run("bench", cfg));
  });

  // ---- explain ----
  auto* explain = app.add_subcommand("explain", "SHAP explanations and plot products");
  CommonOpts explain_c;
  add_common(explain, explain_c);
  std::string model_path, explain_frame, explain_schema;
  int64_t rows = -1, h_sample = -1, explain_seed = -1;
  std::vector<std::string> row_ids, products, dep_features, decision_rows;
  explain->add_option("--model", model_path, "gbdt model json")->required();
  explain->add_option("--frame", explain_frame, "frame csv")->required();
  explain->add_option("--schema", explain_schema, "frame schema json")->required();
  explain->add_option("--rows", rows, "explain only the first N rows");
  explain->add_option("--row", row_ids, "explain these row ids (repeatable)");
  explain->add_option("--products", products,
                      "subset of importance,values,dependence,decision");
  explain->add_option("--dependence-features", dep_features,
                      "features for dependence plots (default top 3 by importance)");
  explain->add_option("--decision-rows", decision_rows,
                      "row ids for decision plots (default first explained row)");
  explain->add_option("--h-sample", h_sample, "H-statistic sample cap (default 500)");
  explain->add_option("--seed", explain_seed, "H-statistic sampling seed");
  explain->callback([&] {
    json cfg = load_config_file(explain_c.config_path);
    cfg["out_dir"] = explain_c.out_dir;
    cfg["model"] = model_path;
    cfg["frame"] = explain_frame;
    cfg["schema"] = explain_schema;
    if (!row_ids.empty()) {
      cfg["rows"] = row_ids;
    } else if (rows > 0) {
      cfg["rows"] = rows;
    }
    if (!products.empty()) cfg["products"] = products;
    if (!dep_features.empty()) cfg["dependence_features"] = dep_features;
    if (!decision_rows.empty()) cfg["decision_rows"] = decision_rows;
    if (h_sample > 0) cfg["h_sample"] = h_sample;
    if (explain_seed >= 0) cfg["seed"] = explain_seed;
    std::exit(run("explain", cfg));
  });

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "render a product CSV+JSON to static SVG");
  CommonOpts plot_c;
  add_common(plot, plot_c);
  std::string input, meta, name;
  plot->add_option("--input", input, "product data csv")->required();
  plot->add_option("--meta", meta, "product metadata json")->required();
  plot->add_option("--name", name, "output stem (default: input stem)");
  plot->callback([&] {
    json cfg = load_config_file(plot_c.config_path);
    cfg["out_dir"] = plot_c.out_dir;
    cfg["input"] = input;
    cfg["meta"] = meta;
    if (!name.empty()) cfg["name"] = name;
    std::exit(run("plot", cfg));
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
