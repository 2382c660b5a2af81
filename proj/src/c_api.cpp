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

#include "glassbox/c_api.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "glassbox/common.hpp"
#include "glassbox/frame.hpp"
#include "glassbox/gbdt.hpp"
#include "glassbox/pipeline.hpp"
#include "glassbox/shap.hpp"

namespace {

thread_local std::string g_last_error;

int guard(const std::function<void()>& fn) {
  try {
    fn();
    g_last_error.clear();
    return GBX_OK;
  } catch (const glassbox::ValidationError& e) {
    g_last_error = e.what();
    return GBX_ERR_VALIDATION;
  } catch (const glassbox::DataError& e) {
    g_last_error = e.what();
    return GBX_ERR_DATA;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("bad json: ") + e.what();
    return GBX_ERR_VALIDATION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GBX_ERR_INTERNAL;
  }
}

std::string g_version;

}  // namespace

struct gbx_frame {
  glassbox::Frame frame;
};

struct gbx_model {
  glassbox::Ensemble ensemble;
};

extern "C" {

const char* gbx_version(void) {
  g_version = glassbox::version_string();
  return g_version.c_str();
}

const char* gbx_last_error(void) { return g_last_error.c_str(); }

int gbx_run_command(const char* command, const char* config_json) {
  return guard([&] {
    if (command == nullptr || config_json == nullptr) {
      throw glassbox::ValidationError("command and config_json must be non-null");
    }
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    glassbox::run_command(command, cfg);
  });
}

int gbx_frame_load(const char* csv_path, const char* schema_path, gbx_frame** out) {
  return guard([&] {
    if (csv_path == nullptr || schema_path == nullptr || out == nullptr) {
      throw glassbox::ValidationError("null argument");
    }
    auto* handle = new gbx_frame{glassbox::Frame::load(csv_path, schema_path)};
    *out = handle;
  });
}

int gbx_frame_rows(const gbx_frame* frame, int64_t* out) {
  return guard([&] {
    if (frame == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    *out = frame->frame.rows();
  });
}

int gbx_frame_features(const gbx_frame* frame, int64_t* out) {
  return guard([&] {
    if (frame == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    *out = frame->frame.cols();
  });
}

int gbx_frame_row(const gbx_frame* frame, int64_t r, double* out, int64_t out_len) {
  return guard([&] {
    if (frame == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    if (r < 0 || r >= frame->frame.rows()) {
      throw glassbox::ValidationError("row index out of range");
    }
    if (out_len < frame->frame.cols()) {
      throw glassbox::ValidationError("output buffer too small");
    }
    auto row = frame->frame.row(r);
    std::memcpy(out, row.data(), sizeof(double) * row.size());
  });
}

void gbx_frame_free(gbx_frame* frame) { delete frame; }

int gbx_model_load(const char* path, gbx_model** out) {
  return guard([&] {
    if (path == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    auto* handle = new gbx_model{glassbox::Ensemble::load(path)};
    *out = handle;
  });
}

int gbx_model_features(const gbx_model* model, int64_t* out) {
  return guard([&] {
    if (model == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    *out = model->ensemble.num_features();
  });
}

int gbx_model_outputs(const gbx_model* model, int64_t* out) {
  return guard([&] {
    if (model == nullptr || out == nullptr) throw glassbox::ValidationError("null argument");
    *out = model->ensemble.num_outputs();
  });
}

int gbx_model_predict(const gbx_model* model, const double* row, int64_t row_len, double* out,
                      int64_t out_len) {
  return guard([&] {
    if (model == nullptr || row == nullptr || out == nullptr) {
      throw glassbox::ValidationError("null argument");
    }
    const auto& ens = model->ensemble;
    if (row_len != ens.num_features()) {
      throw glassbox::ValidationError("row length " + std::to_string(row_len) +
                                      " does not match model features " +
                                      std::to_string(ens.num_features()));
    }
    if (out_len < ens.num_outputs()) throw glassbox::ValidationError("output buffer too small");
    std::span<const double> r{row, static_cast<size_t>(row_len)};
    if (ens.objective == glassbox::Objective::kSoftmax) {
      auto p = ens.predict_proba(r);
      std::memcpy(out, p.data(), sizeof(double) * p.size());
    } else {
      out[0] = ens.predict_value(r);
    }
  });
}

int gbx_model_explain(const gbx_model* model, const double* row, int64_t row_len,
                      int64_t class_id, double* phi, int64_t phi_len, double* base,
                      double* margin) {
  return guard([&] {
    if (model == nullptr || row == nullptr || phi == nullptr) {
      throw glassbox::ValidationError("null argument");
    }
    const auto& ens = model->ensemble;
    if (row_len != ens.num_features()) {
      throw glassbox::ValidationError("row length does not match model features");
    }
    if (class_id < 0 || class_id >= ens.num_outputs()) {
      throw glassbox::ValidationError("class index out of range");
    }
    if (phi_len < ens.num_features()) {
      throw glassbox::ValidationError("phi buffer too small");
    }
    auto ex = glassbox::tree_shap(ens, {row, static_cast<size_t>(row_len)});
    const auto& p = ex.phi[class_id];
    std::memcpy(phi, p.data(), sizeof(double) * p.size());
    if (base != nullptr) *base = ex.base[class_id];
    if (margin != nullptr) *margin = ex.margin[class_id];
  });
}

void gbx_model_free(gbx_model* model) { delete model; }

}  // extern "C"
