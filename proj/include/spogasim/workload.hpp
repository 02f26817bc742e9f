/*
 * Copyright 2026 The spogasim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "spogasim/mapper.hpp"

namespace spogasim {

// Ingestion of DNN layer manifests (the line-oriented format documented in
// README.md) and their lowering to ordered GEMM job lists. Manifests for
// mobilenet_v2, shufflenet_v2, resnet50, and googlenet are bundled under
// data/manifests/.

struct ConvRecord {
  std::string name;
  ConvLayer geometry;
  int groups = 1;  // grouped/depthwise convolutions lower to one job per group
};

struct FcRecord {
  std::string name;
  int in_features = 1;
  int out_features = 1;
};

struct LayerRecord {
  std::variant<ConvRecord, FcRecord> record;

  bool is_conv() const { return std::holds_alternative<ConvRecord>(record); }
  const std::string& name() const;
};

struct LayerManifest {
  std::string model;
  std::vector<LayerRecord> layers;
};

/// Parse and validate a manifest file. Throws ParseError with file:line
/// context, ShapeError for invalid layer geometry.
LayerManifest load_manifest(const std::filesystem::path& file);

/// Serialize in the canonical manifest format (round-trips through
/// load_manifest to an identical job list).
std::string serialize_manifest(const LayerManifest& manifest);

/// One manifest layer lowered to GEMM: `job` repeated `replication` times
/// (grouped convolutions yield one job per group, all the same shape).
struct LayerJobs {
  std::string name;
  GemmJob job;
  std::int64_t replication = 1;
};

/// Ordered per-layer jobs. Conv layers lower via im2col with
/// in_c = channels/groups; fc layers become (1 x in) * (in x out).
std::vector<LayerJobs> to_layer_jobs(const LayerManifest& manifest);

/// Flat ordered job list (group replicas expanded), the lowering contract
/// used by the MAC-count cross-checks.
std::vector<GemmJob> to_jobs(const LayerManifest& manifest);

/// Resolve a model argument: an existing path is loaded directly, otherwise
/// it is treated as a bundled manifest name under <data_dir>/manifests/.
std::filesystem::path resolve_manifest_path(const std::string& model_arg,
                                            const std::filesystem::path& data_dir);

}  // namespace spogasim
