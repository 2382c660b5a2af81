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

#include "glassbox/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>

#include <json.hpp>

#include "glassbox/common.hpp"
#include "glassbox/rng.hpp"

namespace glassbox {

using nlohmann::json;

namespace {
constexpr double kMinGain = 1e-10;
constexpr double kMinHessian = 1e-16;
constexpr double kCatSmooth = 10.0;
}  // namespace

void TrainParams::validate() const {
  if (num_rounds < 1) throw ValidationError("num_rounds must be positive");
  if (learning_rate <= 0.0) throw ValidationError("learning_rate must be positive");
  if (max_leaves < 1) throw ValidationError("max_leaves must be positive");
  if (min_child_weight <= 0.0) throw ValidationError("min_child_weight must be positive");
  if (max_bins < 2 || max_bins > 255) throw ValidationError("max_bins must lie in [2, 255]");
  if (feature_fraction <= 0.0 || feature_fraction > 1.0) {
    throw ValidationError("feature_fraction must lie in (0, 1]");
  }
  if (bagging_fraction <= 0.0 || bagging_fraction > 1.0) {
    throw ValidationError("bagging_fraction must lie in (0, 1]");
  }
  if (l2 < 0.0) throw ValidationError("l2 penalty must be non-negative");
}

int Tree::route(std::span<const double> row, std::span<const double> missing_codes) const {
  int n = 0;
  while (!nodes[n].is_leaf()) {
    const TreeNode& nd = nodes[n];
    const double v = row[nd.feature];
    bool left;
    if (v == missing_codes[nd.feature]) {
      left = nd.default_left;
    } else if (nd.categorical) {
      left = std::binary_search(nd.left_levels.begin(), nd.left_levels.end(),
                                static_cast<int>(v));
    } else {
      left = v <= nd.threshold;
    }
    n = left ? nd.left : nd.right;
  }
  return n;
}

double Tree::predict(std::span<const double> row, std::span<const double> missing_codes) const {
  return nodes[route(row, missing_codes)].value;
}

int Tree::max_depth() const {
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int depth = 0;
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    depth = std::max(depth, d);
    if (!nodes[n].is_leaf()) {
      stack.push_back({nodes[n].left, d + 1});
      stack.push_back({nodes[n].right, d + 1});
    }
  }
  return depth;
}

int FeatureBins::bin_for(double value, double missing_code) const {
  if (value == missing_code) return 0;
  if (categorical) {
    int lev = static_cast<int>(value);
    if (lev < 0 || lev >= num_levels) return 0;  // out-of-dictionary behaves as missing
    return lev + 1;
  }
  auto it = std::lower_bound(upper_edges.begin(), upper_edges.end(), value);
  int idx = static_cast<int>(it - upper_edges.begin());
  if (idx >= static_cast<int>(upper_edges.size())) idx = static_cast<int>(upper_edges.size()) - 1;
  return idx + 1;
}

BinnedFrame bin_features(const Frame& frame, int max_bins) {
  if (max_bins < 2 || max_bins > 255) throw ValidationError("max_bins must lie in [2, 255]");
  BinnedFrame out;
  out.rows = frame.rows();
  out.features.resize(frame.cols());
  out.codes.resize(static_cast<size_t>(frame.cols()) * frame.rows());

  for (int f = 0; f < frame.cols(); ++f) {
    FeatureBins& fb = out.features[f];
    const auto& desc = frame.schema[f];
    if (desc.kind == FeatureKind::kCategorical) {
      fb.categorical = true;
      fb.num_levels = static_cast<int>(desc.levels.size());
      if (fb.num_levels + 1 > 65535) throw ValidationError("too many levels: " + desc.name);
    } else {
      std::vector<double> vals;
      vals.reserve(frame.rows());
      for (int64_t r = 0; r < frame.rows(); ++r) {
        double v = frame.at(r, f);
        if (v != desc.missing_code) vals.push_back(v);
      }
      std::sort(vals.begin(), vals.end());
      fb.categorical = false;
      if (vals.empty()) {
        fb.upper_edges = {0.0};
      } else {
        const int64_t n = static_cast<int64_t>(vals.size());
        std::vector<double> edges;
        // Rank-based quantile cuts; duplicate cut points collapse.
        for (int b = 1; b < max_bins; ++b) {
          int64_t r = n * b / max_bins;
          if (r <= 0 || r >= n) continue;
          if (vals[r - 1] == vals[r]) continue;
          edges.push_back(0.5 * (vals[r - 1] + vals[r]));
        }
        edges.push_back(vals.back());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        fb.upper_edges = std::move(edges);
      }
    }
    uint16_t* codes = out.codes.data() + static_cast<size_t>(f) * frame.rows();
    for (int64_t r = 0; r < frame.rows(); ++r) {
      codes[r] = static_cast<uint16_t>(fb.bin_for(frame.at(r, f), desc.missing_code));
    }
  }
  return out;
}

double Ensemble::margin(std::span<const double> row, int k) const {
  double acc = base_score[k];
  const int K = num_class;
  for (size_t t = k; t < trees.size(); t += K) {
    acc += learning_rate * trees[t].predict(row, missing_codes);
  }
  return acc;
}

std::vector<double> Ensemble::margins(std::span<const double> row) const {
  std::vector<double> out(num_class);
  for (int k = 0; k < num_class; ++k) out[k] = margin(row, k);
  return out;
}

double Ensemble::predict_value(std::span<const double> row) const {
  if (objective != Objective::kSquaredError) {
    throw ValidationError("predict_value requires a regression ensemble");
  }
  return margin(row, 0);
}

std::vector<double> Ensemble::predict_proba(std::span<const double> row) const {
  if (objective != Objective::kSoftmax) {
    throw ValidationError("predict_proba requires a softmax ensemble");
  }
  auto m = margins(row);
  double mx = *std::max_element(m.begin(), m.end());
  double total = 0.0;
  for (double& v : m) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : m) v /= total;
  return m;
}

void Ensemble::check_frame(const Frame& frame) const {
  if (frame.schema_hash() == schema_hash) return;
  std::string offender = "(column count)";
  const size_t n = std::min(schema.size(), frame.schema.size());
  for (size_t i = 0; i < n; ++i) {
    const auto& a = schema[i];
    const auto& b = frame.schema[i];
    if (a.name != b.name || a.kind != b.kind || a.levels != b.levels) {
      offender = a.name != b.name ? a.name + "/" + b.name : a.name;
      break;
    }
  }
  throw ValidationError("schema hash mismatch: model " + std::to_string(schema_hash) +
                        " vs frame " + std::to_string(frame.schema_hash()) +
                        ", first differing feature: " + offender);
}

namespace {

struct SplitSpec {
  double gain = -1.0;
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<int> left_levels;
  bool default_left = false;
  // Stats of the left side, used to derive child covers exactly.
  double gl = 0.0, hl = 0.0;
};

struct LeafState {
  int node = -1;
  std::vector<int32_t> rows;
  double g = 0.0, h = 0.0;
  std::vector<double> hist_g, hist_h;  // flattened over feature bins
  SplitSpec best;
};

struct HistLayout {
  std::vector<int> offset;  // per feature
  int total = 0;
};

// One histogram-based leaf split search. Missing bins try both directions;
// ties keep the earlier feature and the missing-right variant.
void find_best_split(const BinnedFrame& binned, const HistLayout& lay, LeafState& leaf,
                     const std::vector<int>& features, double l2, double mcw) {
  SplitSpec best;
  for (int f : features) {
    const FeatureBins& fb = binned.features[f];
    const int nb = fb.bin_count();
    const double* hg = leaf.hist_g.data() + lay.offset[f];
    const double* hh = leaf.hist_h.data() + lay.offset[f];
    const double G = leaf.g, H = leaf.h;

    auto gain_of = [&](double gl, double hl) {
      const double gr = G - gl, hr = H - hl;
      if (hl < mcw || hr < mcw) return -1.0;
      return 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - G * G / (H + l2));
    };

    if (!fb.categorical) {
      const double gm = hg[0], hm = hh[0];
      double gl = 0.0, hl = 0.0;
      for (int s = 1; s + 1 < nb; ++s) {
        gl += hg[s];
        hl += hh[s];
        // missing right
        double gain = gain_of(gl, hl);
        if (gain > best.gain) {
          best = {gain, f, false, fb.upper_edges[s - 1], {}, false, gl, hl};
        }
        // missing left
        if (hm > 0.0) {
          gain = gain_of(gl + gm, hl + hm);
          if (gain > best.gain) {
            best = {gain, f, false, fb.upper_edges[s - 1], {}, true, gl + gm, hl + hm};
          }
        }
      }
    } else {
      // Present bins sorted by gradient statistic, then prefix scan.
      std::vector<int> present;
      for (int b = 0; b < nb; ++b) {
        if (hh[b] > 0.0) present.push_back(b);
      }
      if (present.size() < 2) continue;
      std::sort(present.begin(), present.end(), [&](int a, int b) {
        double sa = hg[a] / (hh[a] + kCatSmooth);
        double sb = hg[b] / (hh[b] + kCatSmooth);
        if (sa != sb) return sa < sb;
        return a < b;
      });
      double gl = 0.0, hl = 0.0;
      for (size_t t = 0; t + 1 < present.size(); ++t) {
        gl += hg[present[t]];
        hl += hh[present[t]];
        double gain = gain_of(gl, hl);
        if (gain > best.gain) {
          best = {gain, f, true, 0.0, {}, false, gl, hl};
          best.left_levels.clear();
          bool missing_left = false;
          for (size_t u = 0; u <= t; ++u) {
            if (present[u] == 0) {
              missing_left = true;
            } else {
              best.left_levels.push_back(present[u] - 1);
            }
          }
          std::sort(best.left_levels.begin(), best.left_levels.end());
          best.default_left = missing_left;
        }
      }
    }
  }
  leaf.best = best;
}

void build_hist(const BinnedFrame& binned, const HistLayout& lay,
                const std::vector<int32_t>& rows, const std::vector<double>& g,
                const std::vector<double>& h, std::vector<double>& hist_g,
                std::vector<double>& hist_h) {
  hist_g.assign(lay.total, 0.0);
  hist_h.assign(lay.total, 0.0);
  const int nf = static_cast<int>(binned.features.size());
  parallel_for(nf, [&](int64_t flo, int64_t fhi) {
    for (int64_t f = flo; f < fhi; ++f) {
      const uint16_t* codes = binned.codes.data() + static_cast<size_t>(f) * binned.rows;
      double* cg = hist_g.data() + lay.offset[f];
      double* ch = hist_h.data() + lay.offset[f];
      for (int32_t r : rows) {
        cg[codes[r]] += g[r];
        ch[codes[r]] += h[r];
      }
    }
  }, 1);
}

Tree grow_tree(const BinnedFrame& binned, const std::vector<double>& g,
               const std::vector<double>& h, const std::vector<int32_t>& bag,
               const std::vector<int>& features, const TrainParams& params) {
  HistLayout lay;
  lay.offset.resize(binned.features.size());
  for (size_t f = 0; f < binned.features.size(); ++f) {
    lay.offset[f] = lay.total;
    lay.total += binned.features[f].bin_count();
  }

  Tree tree;
  std::vector<LeafState> leaves;

  LeafState root;
  root.node = 0;
  root.rows = bag;
  for (int32_t r : bag) {
    root.g += g[r];
    root.h += h[r];
  }
  tree.nodes.push_back(TreeNode{});
  tree.nodes[0].cover = root.h;
  tree.nodes[0].value = -root.g / (root.h + params.l2);
  build_hist(binned, lay, root.rows, g, h, root.hist_g, root.hist_h);
  find_best_split(binned, lay, root, features, params.l2, params.min_child_weight);
  leaves.push_back(std::move(root));

  // Max-heap of splittable leaves; ties resolve by smaller node id.
  auto cmp = [&leaves](int a, int b) {
    if (leaves[a].best.gain != leaves[b].best.gain) {
      return leaves[a].best.gain < leaves[b].best.gain;
    }
    return leaves[a].node > leaves[b].node;
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
  heap.push(0);

  int num_leaves = 1;
  while (num_leaves < params.max_leaves && !heap.empty()) {
    int li = heap.top();
    heap.pop();
    if (leaves[li].best.gain <= kMinGain) continue;
    LeafState leaf = std::move(leaves[li]);
    const SplitSpec& sp = leaf.best;

    const int node_id = leaf.node;
    TreeNode& nd = tree.nodes[node_id];
    nd.feature = sp.feature;
    nd.categorical = sp.categorical;
    nd.threshold = sp.threshold;
    nd.left_levels = sp.left_levels;
    nd.default_left = sp.default_left;

    LeafState lchild, rchild;
    lchild.node = static_cast<int>(tree.nodes.size());
    rchild.node = lchild.node + 1;
    nd.left = lchild.node;
    nd.right = rchild.node;

    const FeatureBins& fb = binned.features[sp.feature];
    const uint16_t* codes = binned.codes.data() + static_cast<size_t>(sp.feature) * binned.rows;
    auto goes_left = [&](int32_t r) {
      const int b = codes[r];
      if (b == 0) return sp.default_left;
      if (sp.categorical) {
        return std::binary_search(sp.left_levels.begin(), sp.left_levels.end(), b - 1);
      }
      return fb.upper_edges[b - 1] <= sp.threshold;
    };
    for (int32_t r : leaf.rows) {
      (goes_left(r) ? lchild.rows : rchild.rows).push_back(r);
    }

    lchild.g = sp.gl;
    lchild.h = sp.hl;
    rchild.g = leaf.g - sp.gl;
    rchild.h = leaf.h - sp.hl;

    tree.nodes.push_back(TreeNode{});
    tree.nodes.push_back(TreeNode{});
    tree.nodes[nd.left].cover = lchild.h;
    tree.nodes[nd.left].value = -lchild.g / (lchild.h + params.l2);
    tree.nodes[nd.right].cover = rchild.h;
    tree.nodes[nd.right].value = -rchild.g / (rchild.h + params.l2);

    // Smaller child builds its histogram; the sibling takes the difference.
    LeafState* small = lchild.rows.size() <= rchild.rows.size() ? &lchild : &rchild;
    LeafState* large = small == &lchild ? &rchild : &lchild;
    build_hist(binned, lay, small->rows, g, h, small->hist_g, small->hist_h);
    large->hist_g.resize(lay.total);
    large->hist_h.resize(lay.total);
    for (int i = 0; i < lay.total; ++i) {
      large->hist_g[i] = leaf.hist_g[i] - small->hist_g[i];
      large->hist_h[i] = leaf.hist_h[i] - small->hist_h[i];
    }
    leaf.hist_g.clear();
    leaf.hist_g.shrink_to_fit();
    leaf.hist_h.clear();
    leaf.hist_h.shrink_to_fit();

    find_best_split(binned, lay, lchild, features, params.l2, params.min_child_weight);
    find_best_split(binned, lay, rchild, features, params.l2, params.min_child_weight);

    leaves[li] = LeafState{};  // slot retired
    int lidx = static_cast<int>(leaves.size());
    leaves.push_back(std::move(lchild));
    leaves.push_back(std::move(rchild));
    heap.push(lidx);
    heap.push(lidx + 1);
    ++num_leaves;
  }
  return tree;
}

std::vector<int> pick_features(int total, double fraction, Rng& rng) {
  std::vector<int> all(total);
  std::iota(all.begin(), all.end(), 0);
  if (fraction >= 1.0) return all;
  int keep = std::max(1, static_cast<int>(std::floor(total * fraction)));
  rng.shuffle(all);
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<int32_t> pick_bag(int64_t rows, double fraction, Rng& rng) {
  std::vector<int32_t> all(rows);
  std::iota(all.begin(), all.end(), 0);
  if (fraction >= 1.0) return all;
  int64_t keep = std::max<int64_t>(1, static_cast<int64_t>(std::floor(rows * fraction)));
  rng.shuffle(all);
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

Ensemble fit_gbdt(const Frame& frame, const TrainParams& params) {
  params.validate();
  if (frame.rows() == 0) throw ValidationError("cannot fit on an empty frame");
  frame.validate();

  Ensemble ens;
  ens.objective = frame.classification ? Objective::kSoftmax : Objective::kSquaredError;
  ens.num_class = frame.classification ? frame.num_classes : 1;
  ens.learning_rate = params.learning_rate;
  ens.params = params;
  ens.schema = frame.schema;
  ens.schema_hash = frame.schema_hash();
  ens.target_name = frame.target_name;
  if (ens.objective == Objective::kSoftmax) ens.target_transform = "log-odds";
  ens.missing_codes.reserve(frame.cols());
  for (const auto& f : frame.schema) ens.missing_codes.push_back(f.missing_code);

  BinnedFrame binned = bin_features(frame, params.max_bins);
  ens.bins = binned.features;

  const int64_t n = frame.rows();
  const int K = ens.num_class;

  ens.base_score.resize(K);
  if (ens.objective == Objective::kSquaredError) {
    double mean = 0.0;
    for (double t : frame.target) mean += t;
    ens.base_score[0] = mean / static_cast<double>(n);
  } else {
    std::vector<int64_t> counts(K, 0);
    for (double t : frame.target) ++counts[static_cast<int>(t)];
    for (int k = 0; k < K; ++k) {
      ens.base_score[k] = std::log((counts[k] + 1.0) / static_cast<double>(n + K));
    }
  }

  // margins[k * n + r]
  std::vector<double> margins(static_cast<size_t>(K) * n);
  for (int k = 0; k < K; ++k) {
    std::fill(margins.begin() + static_cast<size_t>(k) * n,
              margins.begin() + static_cast<size_t>(k + 1) * n, ens.base_score[k]);
  }

  std::vector<double> g(n), h(n);
  std::vector<double> probs;  // softmax scratch, n x K row-major
  if (ens.objective == Objective::kSoftmax) probs.resize(static_cast<size_t>(n) * K);

  Rng bag_rng(params.seed ^ 0xba99u);
  Rng feat_rng(params.seed ^ 0xfea7u);

  for (int round = 0; round < params.num_rounds; ++round) {
    if (ens.objective == Objective::kSoftmax) {
      parallel_for(n, [&](int64_t lo, int64_t hi) {
        for (int64_t r = lo; r < hi; ++r) {
          double mx = margins[r];
          for (int k = 1; k < K; ++k) mx = std::max(mx, margins[k * n + r]);
          double total = 0.0;
          for (int k = 0; k < K; ++k) {
            double e = std::exp(margins[k * n + r] - mx);
            probs[r * K + k] = e;
            total += e;
          }
          for (int k = 0; k < K; ++k) probs[r * K + k] /= total;
        }
      });
    }

    std::vector<int32_t> bag = pick_bag(n, params.bagging_fraction, bag_rng);

    for (int k = 0; k < K; ++k) {
      if (ens.objective == Objective::kSquaredError) {
        for (int64_t r = 0; r < n; ++r) {
          g[r] = margins[r] - frame.target[r];
          h[r] = 1.0;
        }
      } else {
        for (int64_t r = 0; r < n; ++r) {
          double p = probs[r * K + k];
          g[r] = p - (static_cast<int>(frame.target[r]) == k ? 1.0 : 0.0);
          h[r] = std::max(p * (1.0 - p), kMinHessian);
        }
      }
      std::vector<int> feats = pick_features(frame.cols(), params.feature_fraction, feat_rng);
      Tree tree = grow_tree(binned, g, h, bag, feats, params);

      parallel_for(n, [&](int64_t lo, int64_t hi) {
        for (int64_t r = lo; r < hi; ++r) {
          margins[k * n + r] +=
              params.learning_rate * tree.predict(frame.row(r), ens.missing_codes);
        }
      });
      ens.trees.push_back(std::move(tree));
    }

    double loss = 0.0;
    if (ens.objective == Objective::kSquaredError) {
      for (int64_t r = 0; r < n; ++r) {
        double e = margins[r] - frame.target[r];
        loss += e * e;
      }
      loss /= static_cast<double>(n);
    } else {
      for (int64_t r = 0; r < n; ++r) {
        double mx = margins[r];
        for (int k = 1; k < K; ++k) mx = std::max(mx, margins[k * n + r]);
        double total = 0.0;
        for (int k = 0; k < K; ++k) total += std::exp(margins[k * n + r] - mx);
        int y = static_cast<int>(frame.target[r]);
        loss -= margins[y * n + r] - mx - std::log(total);
      }
      loss /= static_cast<double>(n);
    }
    ens.train_loss.push_back(loss);
  }
  return ens;
}

namespace {

json tree_to_json(const Tree& t) {
  json nodes = json::array();
  for (const auto& nd : t.nodes) {
    json jn;
    jn["feature"] = nd.feature;
    jn["cover"] = nd.cover;
    if (nd.is_leaf()) {
      jn["value"] = nd.value;
    } else {
      jn["left"] = nd.left;
      jn["right"] = nd.right;
      jn["default_left"] = nd.default_left;
      if (nd.categorical) {
        jn["left_levels"] = nd.left_levels;
      } else {
        jn["threshold"] = nd.threshold;
      }
      jn["value"] = nd.value;
    }
    nodes.push_back(std::move(jn));
  }
  return json{{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& jt) {
  Tree t;
  for (const auto& jn : jt.at("nodes")) {
    TreeNode nd;
    nd.feature = jn.at("feature").get<int>();
    nd.cover = jn.at("cover").get<double>();
    nd.value = jn.at("value").get<double>();
    if (nd.feature >= 0) {
      nd.left = jn.at("left").get<int>();
      nd.right = jn.at("right").get<int>();
      nd.default_left = jn.at("default_left").get<bool>();
      if (jn.contains("left_levels")) {
        nd.categorical = true;
        nd.left_levels = jn.at("left_levels").get<std::vector<int>>();
      } else {
        nd.threshold = jn.at("threshold").get<double>();
      }
    }
    t.nodes.push_back(std::move(nd));
  }
  return t;
}

json schema_to_json(const std::vector<FeatureDesc>& schema) {
  json out = json::array();
  for (const auto& f : schema) {
    json jf;
    jf["name"] = f.name;
    jf["kind"] = f.kind == FeatureKind::kCategorical ? "categorical" : "numeric";
    jf["missing_code"] = f.missing_code;
    if (f.kind == FeatureKind::kCategorical) jf["levels"] = f.levels;
    out.push_back(std::move(jf));
  }
  return out;
}

std::vector<FeatureDesc> schema_from_json(const json& js) {
  std::vector<FeatureDesc> out;
  for (const auto& jf : js) {
    FeatureDesc d;
    d.name = jf.at("name").get<std::string>();
    d.kind = jf.at("kind").get<std::string>() == "categorical" ? FeatureKind::kCategorical
                                                               : FeatureKind::kNumeric;
    d.missing_code = jf.at("missing_code").get<double>();
    if (jf.contains("levels")) d.levels = jf.at("levels").get<std::vector<std::string>>();
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

std::string Ensemble::to_json() const {
  json js;
  js["format_version"] = 1;
  js["model"] = "gbdt";
  js["objective"] = objective == Objective::kSoftmax ? "softmax" : "squared_error";
  js["num_class"] = num_class;
  js["base_score"] = base_score;
  js["learning_rate"] = learning_rate;
  js["schema_hash"] = schema_hash;
  js["schema"] = schema_to_json(schema);
  js["target_name"] = target_name;
  js["target_transform"] = target_transform;
  js["missing_codes"] = missing_codes;
  js["params"] = {{"num_rounds", params.num_rounds},
                  {"learning_rate", params.learning_rate},
                  {"max_leaves", params.max_leaves},
                  {"min_child_weight", params.min_child_weight},
                  {"max_bins", params.max_bins},
                  {"feature_fraction", params.feature_fraction},
                  {"bagging_fraction", params.bagging_fraction},
                  {"seed", params.seed},
                  {"l2", params.l2}};
  json jbins = json::array();
  for (const auto& fb : bins) {
    json jb;
    if (fb.categorical) {
      jb["levels"] = fb.num_levels;
    } else {
      jb["edges"] = fb.upper_edges;
    }
    jbins.push_back(std::move(jb));
  }
  js["bins"] = std::move(jbins);
  json jtrees = json::array();
  for (const auto& t : trees) jtrees.push_back(tree_to_json(t));
  js["trees"] = std::move(jtrees);
  return js.dump(1);
}

Ensemble Ensemble::from_json(const std::string& text) {
  json js = json::parse(text);
  if (js.at("model").get<std::string>() != "gbdt") {
    throw DataError("not a gbdt model document");
  }
  Ensemble e;
  e.objective = js.at("objective").get<std::string>() == "softmax" ? Objective::kSoftmax
                                                                   : Objective::kSquaredError;
  e.num_class = js.at("num_class").get<int>();
  e.base_score = js.at("base_score").get<std::vector<double>>();
  e.learning_rate = js.at("learning_rate").get<double>();
  e.schema_hash = js.at("schema_hash").get<uint64_t>();
  e.schema = schema_from_json(js.at("schema"));
  e.target_name = js.at("target_name").get<std::string>();
  e.target_transform = js.at("target_transform").get<std::string>();
  e.missing_codes = js.at("missing_codes").get<std::vector<double>>();
  const auto& jp = js.at("params");
  e.params.num_rounds = jp.at("num_rounds").get<int>();
  e.params.learning_rate = jp.at("learning_rate").get<double>();
  e.params.max_leaves = jp.at("max_leaves").get<int>();
  e.params.min_child_weight = jp.at("min_child_weight").get<double>();
  e.params.max_bins = jp.at("max_bins").get<int>();
  e.params.feature_fraction = jp.at("feature_fraction").get<double>();
  e.params.bagging_fraction = jp.at("bagging_fraction").get<double>();
  e.params.seed = jp.at("seed").get<uint64_t>();
  e.params.l2 = jp.at("l2").get<double>();
  for (const auto& jb : js.at("bins")) {
    FeatureBins fb;
    if (jb.contains("levels")) {
      fb.categorical = true;
      fb.num_levels = jb.at("levels").get<int>();
    } else {
      fb.upper_edges = jb.at("edges").get<std::vector<double>>();
    }
    e.bins.push_back(std::move(fb));
  }
  for (const auto& jt : js.at("trees")) e.trees.push_back(tree_from_json(jt));
  return e;
}

void Ensemble::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << to_json() << "\n";
}

Ensemble Ensemble::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace glassbox
