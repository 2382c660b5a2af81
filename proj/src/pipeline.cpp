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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "glassbox/common.hpp"
#include "glassbox/csv.hpp"
#include "glassbox/design.hpp"
#include "glassbox/frame.hpp"
#include "glassbox/gbdt.hpp"
#include "glassbox/kmeans.hpp"
#include "glassbox/knn.hpp"
#include "glassbox/linear.hpp"
#include "glassbox/metrics.hpp"
#include "glassbox/model_select.hpp"
#include "glassbox/naive_bayes.hpp"
#include "glassbox/shap.hpp"
#include "glassbox/stats.hpp"
#include "glassbox/svg.hpp"
#include "glassbox/synth.hpp"
#include "glassbox/tables.hpp"

namespace glassbox {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string require_str(const json& cfg, const char* key) {
  if (!cfg.contains(key) || !cfg[key].is_string() || cfg[key].get<std::string>().empty()) {
    throw ValidationError(std::string("config: '") + key + "' (string) is required");
  }
  return cfg[key].get<std::string>();
}

template <typename T>
T get_or(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  return cfg[key].get<T>();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_snapshot(const std::string& dir, const std::string& command, const json& resolved) {
  json snap;
  snap["command"] = command;
  snap["version"] = version_string();
  snap["config"] = resolved;
  write_text(dir + "/run_config.json", snap.dump(2) + "\n");
}

std::string out_dir_of(const json& cfg) {
  std::string dir = require_str(cfg, "out_dir");
  fs::create_directories(dir);
  return dir;
}

json diagnostics_json(const Diagnostics& diags) {
  json out = json::array();
  for (const auto& d : diags) {
    out.push_back({{"table", d.table}, {"line", d.line}, {"message", d.message}});
  }
  return out;
}

TablePaths table_paths(const json& cfg) {
  return {require_str(cfg, "users"), require_str(cfg, "clicks"), require_str(cfg, "orders"),
          require_str(cfg, "skus")};
}

json counts_json(const TableCounts& c) {
  return {{"users", c.users}, {"clicks", c.clicks}, {"orders", c.orders}, {"skus", c.skus}};
}

}  // namespace

void cmd_synth(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  json body = cfg;
  body.erase("out_dir");
  SynthConfig sc = SynthConfig::from_json(body.dump());

  SynthResult result = generate(sc);
  write_synth(result, dir);

  json resolved = json::parse(sc.to_json());
  resolved["out_dir"] = dir;
  write_snapshot(dir, "synth", resolved);
}

void cmd_ingest(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  TablePaths paths = table_paths(cfg);
  ParseOptions opts;
  opts.lenient = get_or(cfg, "lenient", false);
  opts.month = get_or<std::string>(cfg, "month", "2018-03");
  const std::string clusters_path = get_or<std::string>(cfg, "clusters", "");

  ParseReport report;
  RawTables raw = parse_tables(paths, opts, &report);
  auto deduped = dedup_clicks(raw);
  GiftReport gifts;
  RawTables tables = count_gifts(raw, &gifts);

  Diagnostics frame_diags;
  Frame sales = build_sales_frame(tables, deduped, &frame_diags);
  sales.save(dir + "/sales_frame.csv", dir + "/sales_frame.schema.json");

  int64_t choice_rows = -1;
  if (!clusters_path.empty()) {
    CsvTable ct = read_csv(clusters_path);
    int sc = ct.column("sku_id");
    int cc = ct.column("cluster");
    if (sc < 0 || cc < 0) {
      throw DataError("clusters file needs sku_id and cluster columns: " + clusters_path);
    }
    std::unordered_map<std::string, int> labels;
    int num_classes = 0;
    for (const auto& r : ct.rows) {
      bool ok = false;
      int lab = static_cast<int>(parse_int(r[cc], &ok));
      if (!ok || lab < 0) throw DataError("bad cluster label for sku " + r[sc]);
      labels[r[sc]] = lab;
      num_classes = std::max(num_classes, lab + 1);
    }
    Frame choice = build_choice_frame(tables, labels, num_classes, deduped, &frame_diags);
    choice.save(dir + "/choice_frame.csv", dir + "/choice_frame.schema.json");
    choice_rows = choice.rows();
  }

  json rep;
  rep["accepted"] = counts_json(report.accepted);
  rep["rejected"] = counts_json(report.rejected);
  rep["gift_only_orders_removed"] = gifts.gift_only_orders_removed;
  rep["gift_units_attached"] = gifts.gift_units_attached;
  rep["sales_rows"] = sales.rows();
  if (choice_rows >= 0) rep["choice_rows"] = choice_rows;
  Diagnostics all = report.diagnostics;
  all.insert(all.end(), gifts.diagnostics.begin(), gifts.diagnostics.end());
  all.insert(all.end(), frame_diags.begin(), frame_diags.end());
  rep["diagnostics"] = diagnostics_json(all);
  write_text(dir + "/ingest_report.json", rep.dump(2) + "\n");

  json resolved = cfg;
  resolved["lenient"] = opts.lenient;
  resolved["month"] = opts.month;
  write_snapshot(dir, "ingest", resolved);
}

namespace {

void export_histogram(const std::string& stem, const Histogram1D& h, const json& extra_meta) {
  CsvWriter w(stem + ".csv");
  w.write_row({"bin_lo", "bin_hi", "probability"});
  for (size_t b = 0; b < h.counts.size(); ++b) {
    w.write_row({format_double(h.bin_edges[b]), format_double(h.bin_edges[b + 1]),
                 format_double(h.counts[b])});
  }
  json meta = extra_meta;
  meta["plot_kind"] = "histogram1d";
  meta["normalization"] =
      h.normalization == Normalization::kProbability ? "probability" : "count";
  write_text(stem + ".json", meta.dump(2) + "\n");
}

void export_cdf(const std::string& stem, const Cdf& cdf, const json& extra_meta) {
  CsvWriter w(stem + ".csv");
  w.write_row({"x", "cum"});
  for (size_t i = 0; i < cdf.xs.size(); ++i) {
    w.write_row({format_double(cdf.xs[i]), format_double(cdf.cum[i])});
  }
  json meta = extra_meta;
  meta["plot_kind"] = "cdf";
  write_text(stem + ".json", meta.dump(2) + "\n");
}

}  // namespace

void cmd_stats(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  TablePaths paths = table_paths(cfg);
  ParseOptions opts;
  opts.lenient = get_or(cfg, "lenient", false);
  opts.month = get_or<std::string>(cfg, "month", "2018-03");
  const double bin_width = get_or(cfg, "bin_width", 10.0);
  const double clip = get_or(cfg, "clip", 500.0);
  const int bin_minutes = get_or(cfg, "bin_minutes", 10);

  ParseReport report;
  RawTables tables = parse_tables(paths, opts, &report);

  {
    OrderCountTable t = order_count_table(tables);
    CsvWriter w(dir + "/order_count_table.csv");
    w.write_row({"bucket", "buyers", "percentage"});
    for (int b = 0; b < 10; ++b) {
      w.write_row({OrderCountTable::bucket_labels()[b], std::to_string(t.counts[b]),
                   format_fixed(t.percentages[b], 2)});
    }
    json meta;
    meta["total_buyers"] = t.total_buyers;
    json counts = json::array();
    json pcts = json::array();
    for (int b = 0; b < 10; ++b) {
      counts.push_back(t.counts[b]);
      pcts.push_back(t.percentages[b]);
    }
    meta["counts"] = counts;
    meta["percentages"] = pcts;
    write_text(dir + "/order_count_table.json", meta.dump(2) + "\n");
  }

  {
    SpendDistribution s = spend_distribution(tables, bin_width, clip);
    json meta;
    meta["title"] = "Total spend per buyer";
    meta["x_label"] = "RMB";
    meta["buyers"] = s.buyers;
    if (s.median.has_value()) meta["median"] = *s.median;
    if (s.p90.has_value()) meta["p90"] = *s.p90;
    export_histogram(dir + "/spend_hist", s.hist, meta);
    export_cdf(dir + "/spend_cdf", s.cdf, meta);
  }

  {
    auto histories = raw_histories(tables);
    InteractionTime it = interaction_time_distribution(histories, bin_minutes);
    auto dump_cohort = [&](const char* name, const SpanDistribution& d) {
      json meta;
      meta["title"] = std::string("Interaction span, ") + name;
      meta["x_label"] = "minutes";
      meta["x_scale"] = "log";
      meta["bin_minutes"] = bin_minutes;
      meta["users"] = d.users;
      meta["cdf_1h"] = d.cdf_1h;
      meta["cdf_1d"] = d.cdf_1d;
      meta["cdf_1w"] = d.cdf_1w;
      export_histogram(dir + "/interaction_time_" + name, d.pdf, meta);
      export_cdf(dir + "/interaction_cdf_" + name, d.cdf, meta);
    };
    dump_cohort("buyers", it.buyers);
    dump_cohort("non_buyers", it.non_buyers);
  }

  for (const auto& feature : grid_features()) {
    for (auto metric : {GridMetric::kTotalSpend, GridMetric::kTotalDiscount,
                        GridMetric::kUnitsPerOrder}) {
      HistogramGrid g = conditional_2d_histogram(tables, feature, metric, bin_width, clip);
      std::string stem = dir + "/grid_" + feature + "_" + g.metric;
      CsvWriter w(stem + ".csv");
      w.write_row({"level", "bin", "bin_lo", "bin_hi", "probability"});
      for (size_t r = 0; r < g.row_labels.size(); ++r) {
        for (size_t b = 0; b < g.col_labels.size(); ++b) {
          w.write_row({g.row_labels[r], g.col_labels[b], format_double(g.col_edges[b]),
                       format_double(g.col_edges[b + 1]), format_double(g.values[r][b])});
        }
      }
      json meta;
      meta["plot_kind"] = "heatmap";
      meta["title"] = g.metric + " by " + feature;
      meta["feature"] = feature;
      meta["metric"] = g.metric;
      meta["row_labels"] = g.row_labels;
      json empty = json::array();
      for (bool e : g.empty_rows) empty.push_back(e);
      meta["empty_rows"] = empty;
      write_text(stem + ".json", meta.dump(2) + "\n");
    }
  }

  json resolved = cfg;
  resolved["lenient"] = opts.lenient;
  resolved["month"] = opts.month;
  resolved["bin_width"] = bin_width;
  resolved["clip"] = clip;
  resolved["bin_minutes"] = bin_minutes;
  write_snapshot(dir, "stats", resolved);
}

void cmd_cluster(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  const std::string skus_path = require_str(cfg, "skus");
  KmeansOptions opts;
  opts.seed = get_or<uint64_t>(cfg, "seed", 0);
  opts.standardize = get_or(cfg, "standardize", true);
  opts.max_iter = get_or(cfg, "max_iter", 100);
  opts.tol = get_or(cfg, "tol", 1e-7);
  int k = get_or(cfg, "k", 0);
  const int k_min = get_or(cfg, "k_min", 1);
  const int k_max = get_or(cfg, "k_max", 8);

  CsvTable t = read_csv(skus_path);
  int sid = t.column("sku_id"), a1 = t.column("attribute1"), a2 = t.column("attribute2");
  if (sid < 0 || a1 < 0 || a2 < 0) {
    throw DataError("skus file needs sku_id, attribute1, attribute2 columns");
  }
  std::vector<std::string> ids;
  std::vector<double> points;
  int64_t dropped = 0;
  for (const auto& r : t.rows) {
    bool ok1 = false, ok2 = false;
    double v1 = parse_double(r[a1], &ok1);
    double v2 = parse_double(r[a2], &ok2);
    if (!ok1 || !ok2 || r[a1].empty() || r[a2].empty()) {
      ++dropped;
      continue;  // no imputation: both attributes must be recorded
    }
    ids.push_back(r[sid]);
    points.push_back(v1);
    points.push_back(v2);
  }
  if (ids.empty()) throw DataError("no SKUs with both attributes recorded");

  json resolved = cfg;
  ElbowResult elbow;
  bool ran_elbow = false;
  if (k <= 0) {
    std::vector<int> range;
    for (int kk = k_min; kk <= k_max; ++kk) range.push_back(kk);
    elbow = elbow_select(points, static_cast<int64_t>(ids.size()), 2, range, opts);
    k = elbow.chosen_k;
    ran_elbow = true;
  }
  ClusterModel model = kmeans(points, static_cast<int64_t>(ids.size()), 2, k, opts);

  {
    CsvWriter w(dir + "/clusters.csv");
    w.write_row({"sku_id", "cluster"});
    for (size_t i = 0; i < ids.size(); ++i) {
      w.write_row({ids[i], std::to_string(model.assignments[i])});
    }
  }
  {
    json js;
    js["k"] = model.k;
    js["seed"] = model.seed;
    js["standardize"] = model.standardized;
    js["iterations"] = model.iterations;
    js["inertia"] = model.inertia;
    js["inertia_trace"] = model.inertia_trace;
    json cents = json::array();
    for (int c = 0; c < model.k; ++c) {
      cents.push_back({{"attribute1", model.centroids[c * 2]},
                       {"attribute2", model.centroids[c * 2 + 1]}});
    }
    js["centroids"] = cents;
    auto sizes = model.sizes();
    js["sizes"] = sizes;
    js["dropped_skus"] = dropped;
    if (ran_elbow) {
      js["elbow"] = {{"k_values", elbow.k_values},
                     {"inertias", elbow.inertias},
                     {"chosen_k", elbow.chosen_k},
                     {"degenerate", elbow.degenerate}};
    }
    write_text(dir + "/cluster.json", js.dump(2) + "\n");
  }
  if (ran_elbow) {
    CsvWriter w(dir + "/elbow.csv");
    w.write_row({"k", "inertia"});
    for (size_t i = 0; i < elbow.k_values.size(); ++i) {
      w.write_row({std::to_string(elbow.k_values[i]), format_double(elbow.inertias[i])});
    }
    json meta;
    meta["plot_kind"] = "elbow";
    meta["chosen_k"] = k;
    meta["degenerate"] = elbow.degenerate;
    write_text(dir + "/elbow.json", meta.dump(2) + "\n");
  }

  resolved["k"] = k;
  resolved["k_min"] = k_min;
  resolved["k_max"] = k_max;
  resolved["seed"] = opts.seed;
  resolved["standardize"] = opts.standardize;
  write_snapshot(dir, "cluster", resolved);
}

namespace {

Frame load_frame_cfg(const json& cfg) {
  return Frame::load(require_str(cfg, "frame"), require_str(cfg, "schema"));
}

Frame with_log1p_target(const Frame& frame) {
  Frame out = frame;
  for (double& t : out.target) t = std::log1p(t);
  out.target_name = frame.target_name + "_log1p";
  return out;
}

TrainParams gbdt_params_from(const json& cfg, uint64_t seed) {
  TrainParams p;
  p.seed = seed;
  if (!cfg.contains("params")) return p;
  const json& j = cfg["params"];
  p.num_rounds = get_or(j, "num_rounds", p.num_rounds);
  p.learning_rate = get_or(j, "learning_rate", p.learning_rate);
  p.max_leaves = get_or(j, "max_leaves", p.max_leaves);
  p.min_child_weight = get_or(j, "min_child_weight", p.min_child_weight);
  p.max_bins = get_or(j, "max_bins", p.max_bins);
  p.feature_fraction = get_or(j, "feature_fraction", p.feature_fraction);
  p.bagging_fraction = get_or(j, "bagging_fraction", p.bagging_fraction);
  p.l2 = get_or(j, "l2", p.l2);
  return p;
}

json linear_model_json(const LinearModel& m, const std::string& name) {
  json js;
  js["format_version"] = 1;
  js["model"] = name;
  js["lambda"] = m.lambda;
  js["intercept"] = m.intercept;
  js["coefficients"] = m.coefficients;
  js["column_names"] = m.column_names;
  js["schema_hash"] = m.schema_hash;
  js["converged"] = m.converged;
  return js;
}

json nb_model_json(const NBModel& m) {
  json js;
  js["format_version"] = 1;
  js["model"] = "nb";
  js["alpha"] = m.alpha;
  js["num_classes"] = m.num_classes;
  js["log_priors"] = m.log_priors;
  js["schema_hash"] = m.schema_hash;
  json feats = json::array();
  for (size_t fi = 0; fi < m.feature_cols.size(); ++fi) {
    json jf;
    jf["col"] = m.feature_cols[fi];
    if (m.cat_slot[fi] >= 0) {
      jf["kind"] = "categorical";
      jf["log_prob"] = m.cats[m.cat_slot[fi]].log_prob;
    } else {
      jf["kind"] = "numeric";
      jf["mean"] = m.nums[m.num_slot[fi]].mean;
      jf["var"] = m.nums[m.num_slot[fi]].var;
    }
    feats.push_back(std::move(jf));
  }
  js["features"] = feats;
  return js;
}

}  // namespace

void cmd_train(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  const std::string model_kind = get_or<std::string>(cfg, "model", "gbdt");
  const uint64_t seed = get_or<uint64_t>(cfg, "seed", 0);
  const bool log1p = get_or(cfg, "log1p_target", false);
  const int folds = get_or(cfg, "folds", 5);

  Frame frame = load_frame_cfg(cfg);
  if (log1p && frame.classification) {
    throw ValidationError("log1p_target applies to regression frames only");
  }
  Frame train = log1p ? with_log1p_target(frame) : frame;

  json report;
  report["model"] = model_kind;
  report["rows"] = train.rows();
  report["classification"] = train.classification;
  json resolved = cfg;
  resolved["model"] = model_kind;
  resolved["seed"] = seed;
  resolved["log1p_target"] = log1p;

  if (model_kind == "gbdt") {
    TrainParams p = gbdt_params_from(cfg, seed);
    Ensemble ens = fit_gbdt(train, p);
    if (log1p) ens.target_transform = "log1p";
    ens.save(dir + "/model.json");
    report["train_loss_first"] = ens.train_loss.front();
    report["train_loss_last"] = ens.train_loss.back();
    report["num_trees"] = ens.trees.size();
  } else if (model_kind == "lasso" || model_kind == "ridge") {
    if (train.classification) {
      throw ValidationError(model_kind + " applies to regression frames only");
    }
    double lambda;
    if (cfg.contains("lambda")) {
      lambda = cfg["lambda"].get<double>();
    } else {
      lambda = cv_select_lambda(train, model_kind == "lasso" ? '1' : '2',
                                default_lambda_grid(), folds, seed);
      report["lambda_cv"] = true;
    }
    LinearModel m =
        model_kind == "lasso" ? fit_lasso(train, lambda) : fit_ridge(train, lambda);
    write_text(dir + "/model.json", linear_model_json(m, model_kind).dump(1) + "\n");
    report["lambda"] = lambda;
    resolved["lambda"] = lambda;
  } else if (model_kind == "knn") {
    KnnTask task = train.classification ? KnnTask::kClassification : KnnTask::kRegression;
    int k;
    if (cfg.contains("k")) {
      k = cfg["k"].get<int>();
    } else {
      k = cv_select_knn_k(train, task, default_k_grid(), folds, seed);
      report["k_cv"] = true;
    }
    std::string weighting = get_or<std::string>(
        cfg, "weighting", train.classification ? "uniform" : "inverse_distance");
    KnnModel m(train, k, task,
               weighting == "uniform" ? KnnWeighting::kUniform
                                      : KnnWeighting::kInverseDistance);
    json js;
    js["format_version"] = 1;
    js["model"] = "knn";
    js["k"] = k;
    js["task"] = train.classification ? "classification" : "regression";
    js["weighting"] = weighting;
    js["train_csv"] = require_str(cfg, "frame");
    js["train_schema"] = require_str(cfg, "schema");
    js["schema_hash"] = m.schema_hash();
    write_text(dir + "/model.json", js.dump(1) + "\n");
    report["k"] = k;
    resolved["k"] = k;
    resolved["weighting"] = weighting;
  } else if (model_kind == "nb") {
    double alpha = get_or(cfg, "alpha", 1.0);
    NBModel m = fit_nb(train, alpha);
    write_text(dir + "/model.json", nb_model_json(m).dump(1) + "\n");
    report["alpha"] = alpha;
    resolved["alpha"] = alpha;
  } else {
    throw ValidationError("unknown model '" + model_kind +
                          "' (expected gbdt, lasso, ridge, knn or nb)");
  }

  write_text(dir + "/train_report.json", report.dump(2) + "\n");
  write_snapshot(dir, "train", resolved);
}

namespace {

struct BenchRow {
  uint64_t seed;
  std::string model;
  double value;
  std::string detail;
};

}  // namespace

void cmd_bench(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  Frame frame = load_frame_cfg(cfg);
  const bool choice = frame.classification;
  const double test_fraction = get_or(cfg, "test_fraction", 0.2);
  const int folds = get_or(cfg, "folds", 5);
  const bool log1p = get_or(cfg, "log1p_target", false) && !choice;

  std::vector<uint64_t> seeds;
  if (cfg.contains("seeds")) {
    seeds = cfg["seeds"].get<std::vector<uint64_t>>();
  } else {
    seeds = {get_or<uint64_t>(cfg, "seed", 0)};
  }
  std::vector<std::string> models;
  if (cfg.contains("models")) {
    models = cfg["models"].get<std::vector<std::string>>();
  } else if (choice) {
    models = {"gbdt", "nb", "knn"};
  } else {
    models = {"gbdt", "lasso", "ridge", "knn"};
  }

  std::vector<BenchRow> rows;
  json split_log = json::array();

  for (uint64_t seed : seeds) {
    Split split = train_test_split(frame.rows(), test_fraction, seed);
    Frame train = subset_frame(frame, split.train);
    Frame test = subset_frame(frame, split.test);
    Frame train_t = log1p ? with_log1p_target(train) : train;

    json seed_split;
    seed_split["seed"] = seed;
    json train_ids = json::array(), test_ids = json::array();
    for (int64_t i : split.train) train_ids.push_back(frame.row_ids[i]);
    for (int64_t i : split.test) test_ids.push_back(frame.row_ids[i]);
    seed_split["train_row_ids"] = std::move(train_ids);
    seed_split["test_row_ids"] = std::move(test_ids);
    split_log.push_back(std::move(seed_split));

    auto eval_regression = [&](std::vector<double> pred, const std::string& name,
                               const std::string& detail) {
      if (log1p) {
        for (double& p : pred) p = std::expm1(p);
      }
      rows.push_back({seed, name, rmse(pred, test.target), detail});
    };
    auto eval_classification = [&](const std::vector<double>& pred, const std::string& name,
                                   const std::string& detail) {
      auto res = precision(pred, test.target, frame.num_classes);
      rows.push_back({seed, name, res.value, detail});
    };

    for (const auto& name : models) {
      if (name == "gbdt") {
        TrainParams p = gbdt_params_from(cfg, seed);
        Ensemble ens = fit_gbdt(train_t, p);
        std::vector<double> pred(test.rows());
        if (choice) {
          for (int64_t r = 0; r < test.rows(); ++r) {
            auto proba = ens.predict_proba(test.row(r));
            pred[r] = static_cast<double>(
                std::max_element(proba.begin(), proba.end()) - proba.begin());
          }
          eval_classification(pred, name, "rounds=" + std::to_string(p.num_rounds));
        } else {
          for (int64_t r = 0; r < test.rows(); ++r) pred[r] = ens.predict_value(test.row(r));
          eval_regression(std::move(pred), name, "rounds=" + std::to_string(p.num_rounds));
        }
      } else if (name == "lasso" || name == "ridge") {
        if (choice) throw ValidationError(name + " is a regression baseline");
        double lambda = cfg.contains("lambda")
                            ? cfg["lambda"].get<double>()
                            : cv_select_lambda(train_t, name == "lasso" ? '1' : '2',
                                               default_lambda_grid(), folds, seed);
        LinearModel m = name == "lasso" ? fit_lasso(train_t, lambda) : fit_ridge(train_t, lambda);
        eval_regression(m.predict_frame(test), name, "lambda=" + format_double(lambda));
      } else if (name == "knn") {
        KnnTask task = choice ? KnnTask::kClassification : KnnTask::kRegression;
        int k = cfg.contains("k") ? cfg["k"].get<int>()
                                  : cv_select_knn_k(train_t, task, default_k_grid(), folds, seed);
        KnnModel m(train_t, k, task,
                   choice ? KnnWeighting::kUniform : KnnWeighting::kInverseDistance);
        auto pred = m.predict_frame(test);
        if (choice) {
          eval_classification(pred, name, "k=" + std::to_string(k));
        } else {
          eval_regression(std::move(pred), name, "k=" + std::to_string(k));
        }
      } else if (name == "nb") {
        if (!choice) throw ValidationError("nb is a classification baseline");
        NBModel m = fit_nb(train_t, get_or(cfg, "alpha", 1.0));
        eval_classification(m.predict_frame(test), name, "alpha=1");
      } else {
        throw ValidationError("unknown bench model '" + name + "'");
      }
    }
  }

  const std::string metric = choice ? "macro_precision" : "rmse";
  {
    CsvWriter w(dir + "/bench.csv");
    w.write_row({"seed", "model", "metric", "value", "detail"});
    for (const auto& r : rows) {
      w.write_row({std::to_string(r.seed), r.model, metric, format_double(r.value), r.detail});
    }
  }
  {
    json js;
    js["task"] = choice ? "choice" : "sales";
    js["metric"] = metric;
    js["protocol"] = "seeded " + format_double((1.0 - test_fraction) * 100) + "/" +
                     format_double(test_fraction * 100) +
                     " holdout; hyperparameters 5-fold CV on the training split";
    js["log1p_target"] = log1p;
    json results = json::array();
    for (const auto& r : rows) {
      results.push_back({{"seed", r.seed}, {"model", r.model}, {"value", r.value},
                         {"detail", r.detail}});
    }
    js["results"] = results;
    js["splits"] = split_log;
    write_text(dir + "/bench.json", js.dump(2) + "\n");
  }

  json resolved = cfg;
  resolved["test_fraction"] = test_fraction;
  resolved["models"] = models;
  json jseeds = json::array();
  for (uint64_t s : seeds) jseeds.push_back(s);
  resolved["seeds"] = jseeds;
  write_snapshot(dir, "bench", resolved);
}

void cmd_explain(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  Ensemble ens = Ensemble::load(require_str(cfg, "model"));
  Frame frame = load_frame_cfg(cfg);
  ens.check_frame(frame);

  // Row selection: explicit id list, or a row cap, or everything.
  Frame subset = frame;
  if (cfg.contains("rows")) {
    if (cfg["rows"].is_number()) {
      int64_t cap = cfg["rows"].get<int64_t>();
      if (cap < frame.rows()) {
        std::vector<int64_t> idx(cap);
        std::iota(idx.begin(), idx.end(), 0);
        subset = subset_frame(frame, idx);
      }
    } else {
      std::set<std::string> wanted;
      for (const auto& id : cfg["rows"]) wanted.insert(id.get<std::string>());
      std::vector<int64_t> idx;
      for (int64_t r = 0; r < frame.rows(); ++r) {
        if (wanted.count(frame.row_ids[r])) idx.push_back(r);
      }
      if (idx.empty()) throw ValidationError("none of the requested row ids are in the frame");
      subset = subset_frame(frame, idx);
    }
  }

  auto explanations = explain_frame(ens, subset);
  const int K = ens.num_class;
  const int F = ens.num_features();

  {
    CsvWriter w(dir + "/explanations.csv");
    std::vector<std::string> header = {"row_id", "class", "base_value", "margin"};
    for (const auto& f : ens.schema) header.push_back("phi_" + f.name);
    w.write_row(header);
    std::vector<std::string> fields(header.size());
    for (const auto& ex : explanations) {
      for (int k = 0; k < K; ++k) {
        fields[0] = ex.row_id;
        fields[1] = std::to_string(k);
        fields[2] = format_double(ex.base[k]);
        fields[3] = format_double(ex.margin[k]);
        for (int f = 0; f < F; ++f) fields[4 + f] = format_double(ex.phi[k][f]);
        w.write_row(fields);
      }
    }
  }
  {
    json js;
    js["margin_space"] = ens.target_transform;
    js["target_name"] = ens.target_name;
    js["num_classes"] = K;
    js["schema_hash"] = ens.schema_hash;
    json jrows = json::array();
    for (const auto& ex : explanations) {
      json jr;
      jr["row_id"] = ex.row_id;
      jr["base"] = ex.base;
      jr["margin"] = ex.margin;
      json per_class = json::array();
      for (int k = 0; k < K; ++k) {
        json jphi;
        for (int f = 0; f < F; ++f) jphi[ens.schema[f].name] = ex.phi[k][f];
        per_class.push_back(std::move(jphi));
      }
      jr["phi"] = std::move(per_class);
      jrows.push_back(std::move(jr));
    }
    js["rows"] = std::move(jrows);
    write_text(dir + "/explanations.json", js.dump(1) + "\n");
  }

  std::vector<std::string> products =
      get_or<std::vector<std::string>>(cfg, "products",
                                       {"importance", "values", "dependence", "decision"});
  const std::set<std::string> product_set(products.begin(), products.end());
  const int64_t h_sample = get_or<int64_t>(cfg, "h_sample", 500);
  const uint64_t seed = get_or<uint64_t>(cfg, "seed", 0);

  auto class_suffix = [K](int k) { return K > 1 ? "_c" + std::to_string(k) : std::string(); };

  std::vector<ImportanceEntry> agg_importance = importance(explanations, ens, -1);
  if (product_set.count("importance")) {
    auto dump_importance = [&](const std::vector<ImportanceEntry>& imp,
                               const std::string& stem, int k) {
      CsvWriter w(stem + ".csv");
      w.write_row({"rank", "feature", "mean_abs_shap"});
      for (size_t i = 0; i < imp.size(); ++i) {
        w.write_row({std::to_string(i + 1), imp[i].feature, format_double(imp[i].mean_abs_shap)});
      }
      json meta;
      meta["plot_kind"] = "importance";
      meta["title"] = k < 0 ? "Variable importance (all classes)"
                            : "Variable importance, class " + std::to_string(k);
      meta["class"] = k;
      write_text(stem + ".json", meta.dump(2) + "\n");
    };
    dump_importance(agg_importance, dir + "/importance", -1);
    if (K > 1) {
      for (int k = 0; k < K; ++k) {
        dump_importance(importance(explanations, ens, k), dir + "/importance" + class_suffix(k),
                        k);
      }
    }
  }

  if (product_set.count("values")) {
    for (int k = 0; k < K; ++k) {
      auto recs = value_plot_data(explanations, subset, ens, k);
      std::string stem = dir + "/values" + class_suffix(k);
      CsvWriter w(stem + ".csv");
      w.write_row({"feature", "row_id", "shap_value", "raw_value", "color_value", "missing"});
      // feature-major ordering in importance rank order
      for (const auto& ie : agg_importance) {
        for (const auto& r : recs) {
          if (r.feature != ie.feature_index) continue;
          w.write_row({ens.schema[r.feature].name, r.row_id, format_double(r.shap),
                       format_double(r.raw), format_double(r.color), r.missing ? "1" : "0"});
        }
      }
      json meta;
      meta["plot_kind"] = "beeswarm";
      meta["title"] = K > 1 ? "SHAP value plot, class " + std::to_string(k) : "SHAP value plot";
      meta["class"] = k;
      meta["color"] = "per-feature min-max of raw values; -1 marks missing";
      write_text(stem + ".json", meta.dump(2) + "\n");
    }
  }

  if (product_set.count("dependence")) {
    std::vector<std::string> dep_features;
    if (cfg.contains("dependence_features")) {
      dep_features = cfg["dependence_features"].get<std::vector<std::string>>();
    } else {
      for (size_t i = 0; i < std::min<size_t>(3, agg_importance.size()); ++i) {
        dep_features.push_back(agg_importance[i].feature);
      }
    }
    for (int k = 0; k < K; ++k) {
      for (const auto& fname : dep_features) {
        DependenceData d = dependence_data(ens, explanations, subset, fname, k, h_sample, seed);
        std::string stem = dir + "/dependence_" + fname + class_suffix(k);
        CsvWriter w(stem + ".csv");
        w.write_row({"row_id", "x", "shap_value", "partner_value", "partner_missing"});
        for (const auto& r : d.records) {
          w.write_row({r.row_id, format_double(r.x), format_double(r.shap),
                       format_double(r.partner_value), r.partner_missing ? "1" : "0"});
        }
        json meta;
        meta["plot_kind"] = "dependence";
        meta["feature"] = d.feature;
        meta["partner"] = d.partner;
        meta["h_statistic"] = d.h;
        meta["h_degenerate"] = d.h_degenerate;
        meta["h_sample"] = h_sample;
        meta["class"] = k;
        write_text(stem + ".json", meta.dump(2) + "\n");
      }
    }
  }

  if (product_set.count("decision")) {
    std::vector<std::string> decision_rows;
    if (cfg.contains("decision_rows")) {
      decision_rows = cfg["decision_rows"].get<std::vector<std::string>>();
    } else if (subset.rows() > 0) {
      decision_rows = {subset.row_ids[0]};
    }
    for (const auto& rid : decision_rows) {
      int64_t r = -1;
      for (int64_t i = 0; i < subset.rows(); ++i) {
        if (subset.row_ids[i] == rid) {
          r = i;
          break;
        }
      }
      if (r < 0) throw ValidationError("decision row id '" + rid + "' not in explained set");
      for (int k = 0; k < K; ++k) {
        DecisionPath p = decision_plot_data(explanations[r], subset.row(r), ens, k);
        std::string safe = rid;
        for (char& c : safe) {
          if (c == '/' || c == ':') c = '_';
        }
        std::string stem = dir + "/decision_" + safe + class_suffix(k);
        CsvWriter w(stem + ".csv");
        w.write_row({"step", "feature", "raw_value", "shap_value", "cumulative"});
        for (size_t i = 0; i < p.steps.size(); ++i) {
          const auto& s = p.steps[i];
          w.write_row({std::to_string(i + 1), s.feature, format_double(s.raw),
                       format_double(s.shap), format_double(s.cumulative)});
        }
        json meta;
        meta["plot_kind"] = "decision";
        meta["title"] = "Decision plot, row " + rid;
        meta["row_id"] = rid;
        meta["class"] = k;
        meta["base_value"] = p.base;
        meta["model_output"] = p.output;
        meta["margin_space"] = ens.target_transform;
        write_text(stem + ".json", meta.dump(2) + "\n");
      }
    }
  }

  json resolved = cfg;
  resolved["h_sample"] = h_sample;
  resolved["seed"] = seed;
  resolved["products"] = products;
  write_snapshot(dir, "explain", resolved);
}

void cmd_plot(const json& cfg) {
  std::string dir = out_dir_of(cfg);
  const std::string input = require_str(cfg, "input");
  const std::string meta = require_str(cfg, "meta");
  std::string name = get_or<std::string>(cfg, "name", "");
  if (name.empty()) {
    name = fs::path(input).stem().string();
  }
  std::string svg = render_svg_files(input, meta);
  write_text(dir + "/" + name + ".svg", svg);
  json resolved = cfg;
  resolved["name"] = name;
  write_snapshot(dir, "plot", resolved);
}

void run_command(const std::string& command, const json& config) {
  if (command == "synth") return cmd_synth(config);
  if (command == "ingest") return cmd_ingest(config);
  if (command == "stats") return cmd_stats(config);
  if (command == "cluster") return cmd_cluster(config);
  if (command == "train") return cmd_train(config);
  if (command == "bench") return cmd_bench(config);
  if (command == "explain") return cmd_explain(config);
  if (command == "plot") return cmd_plot(config);
  throw ValidationError("unknown command '" + command +
                        "' (expected synth, ingest, stats, cluster, train, bench, explain or "
                        "plot)");
}

}  // namespace glassbox
