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

#include "spogasim/workload.hpp"

#include <sstream>

#include "spogasim/errors.hpp"
#include "spogasim/textio.hpp"

namespace spogasim {

const std::string& LayerRecord::name() const {
  if (const auto* conv = std::get_if<ConvRecord>(&record)) return conv->name;
  return std::get<FcRecord>(record).name;
}

namespace {

// key=value field list after the record kind token.
std::map<std::string, std::string> parse_fields(const std::vector<std::string>& tokens,
                                                const std::string& ctx) {
  std::map<std::string, std::string> fields;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tokens[i].size()) {
      throw ParseError(ctx + ": expected key=value, got '" + tokens[i] + "'");
    }
    fields[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return fields;
}

std::string take(std::map<std::string, std::string>& fields, const std::string& key,
                 const std::string& ctx) {
  const auto it = fields.find(key);
  if (it == fields.end()) {
    throw ParseError(ctx + ": missing required field '" + key + "'");
  }
  std::string value = it->second;
  fields.erase(it);
  return value;
}

int take_int(std::map<std::string, std::string>& fields, const std::string& key,
             const std::string& ctx) {
  return static_cast<int>(parse_int(take(fields, key, ctx), ctx + " field " + key));
}

// "AxB" pairs (kernel) and "HxWxC" triples (input geometry).
std::vector<int> split_dims(const std::string& value, std::size_t count, const std::string& ctx) {
  std::vector<int> dims;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, 'x')) {
    dims.push_back(static_cast<int>(parse_int(token, ctx)));
  }
  if (dims.size() != count) {
    throw ParseError(ctx + ": expected " + std::to_string(count) + " 'x'-separated values, got '" +
                     value + "'");
  }
  return dims;
}

ConvRecord parse_conv(std::map<std::string, std::string> fields, const std::string& ctx) {
  ConvRecord conv;
  conv.name = take(fields, "name", ctx);
  const auto in = split_dims(take(fields, "in", ctx), 3, ctx + " field in");
  const auto kernel = split_dims(take(fields, "kernel", ctx), 2, ctx + " field kernel");
  conv.geometry.in_h = in[0];
  conv.geometry.in_w = in[1];
  conv.geometry.in_c = in[2];
  conv.geometry.kernel_h = kernel[0];
  conv.geometry.kernel_w = kernel[1];
  conv.geometry.out_c = take_int(fields, "out_c", ctx);
  conv.geometry.stride = take_int(fields, "stride", ctx);
  conv.geometry.padding = take_int(fields, "pad", ctx);
  if (fields.count("groups")) {
    conv.groups = take_int(fields, "groups", ctx);
  }
  if (!fields.empty()) {
    throw ParseError(ctx + ": unknown field '" + fields.begin()->first + "'");
  }
  if (conv.groups < 1 || conv.geometry.in_c % conv.groups != 0 ||
      conv.geometry.out_c % conv.groups != 0) {
    throw ShapeError(ctx + ": groups must divide in_c and out_c");
  }
  // Validate geometry eagerly so bad manifests fail at load time.
  ConvLayer per_group = conv.geometry;
  per_group.in_c /= conv.groups;
  per_group.out_c /= conv.groups;
  im2col(per_group);
  return conv;
}

FcRecord parse_fc(std::map<std::string, std::string> fields, const std::string& ctx) {
  FcRecord fc;
  fc.name = take(fields, "name", ctx);
  fc.in_features = take_int(fields, "in_features", ctx);
  fc.out_features = take_int(fields, "out_features", ctx);
  if (!fields.empty()) {
    throw ParseError(ctx + ": unknown field '" + fields.begin()->first + "'");
  }
  if (fc.in_features < 1 || fc.out_features < 1) {
    throw ShapeError(ctx + ": fc dimensions must be positive");
  }
  return fc;
}

}  // namespace

LayerManifest load_manifest(const std::filesystem::path& file) {
  const auto lines = read_data_lines(file);
  if (lines.empty()) {
    throw ParseError(file.string() + ": empty manifest");
  }
  LayerManifest manifest;
  for (const TextLine& line : lines) {
    const std::string ctx = file.string() + ":" + std::to_string(line.number);
    const auto tokens = split_fields(line.text);
    if (tokens[0] == "model") {
      if (tokens.size() != 2) throw ParseError(ctx + ": expected 'model <name>'");
      manifest.model = tokens[1];
    } else if (tokens[0] == "conv") {
      manifest.layers.push_back({parse_conv(parse_fields(tokens, ctx), ctx)});
    } else if (tokens[0] == "fc") {
      manifest.layers.push_back({parse_fc(parse_fields(tokens, ctx), ctx)});
    } else {
      throw ParseError(ctx + ": unknown record kind '" + tokens[0] + "'");
    }
  }
  if (manifest.model.empty()) {
    throw ParseError(file.string() + ": missing 'model <name>' record");
  }
  if (manifest.layers.empty()) {
    throw ParseError(file.string() + ": manifest has no layers");
  }
  return manifest;
}

std::string serialize_manifest(const LayerManifest& manifest) {
  std::ostringstream out;
  out << "# spogasim layer manifest v1\n";
  out << "model " << manifest.model << "\n";
  for (const LayerRecord& layer : manifest.layers) {
    if (const auto* conv = std::get_if<ConvRecord>(&layer.record)) {
      const ConvLayer& g = conv->geometry;
      out << "conv name=" << conv->name << " in=" << g.in_h << "x" << g.in_w << "x" << g.in_c
          << " out_c=" << g.out_c << " kernel=" << g.kernel_h << "x" << g.kernel_w
          << " stride=" << g.stride << " pad=" << g.padding;
      if (conv->groups != 1) out << " groups=" << conv->groups;
      out << "\n";
    } else {
      const auto& fc = std::get<FcRecord>(layer.record);
      out << "fc name=" << fc.name << " in_features=" << fc.in_features
          << " out_features=" << fc.out_features << "\n";
    }
  }
  return out.str();
}

std::vector<LayerJobs> to_layer_jobs(const LayerManifest& manifest) {
  std::vector<LayerJobs> jobs;
  jobs.reserve(manifest.layers.size());
  for (const LayerRecord& layer : manifest.layers) {
    LayerJobs entry;
    entry.name = layer.name();
    if (const auto* conv = std::get_if<ConvRecord>(&layer.record)) {
      ConvLayer per_group = conv->geometry;
      per_group.in_c /= conv->groups;
      per_group.out_c /= conv->groups;
      entry.job = im2col(per_group);
      entry.replication = conv->groups;
    } else {
      const auto& fc = std::get<FcRecord>(layer.record);
      entry.job = GemmJob{1, fc.in_features, fc.out_features};
      entry.replication = 1;
    }
    jobs.push_back(std::move(entry));
  }
  return jobs;
}

std::vector<GemmJob> to_jobs(const LayerManifest& manifest) {
  std::vector<GemmJob> flat;
  for (const LayerJobs& layer : to_layer_jobs(manifest)) {
    for (std::int64_t i = 0; i < layer.replication; ++i) {
      flat.push_back(layer.job);
    }
  }
  return flat;
}

std::filesystem::path resolve_manifest_path(const std::string& model_arg,
                                            const std::filesystem::path& data_dir) {
  const std::filesystem::path direct(model_arg);
  if (std::filesystem::exists(direct)) {
    return direct;
  }
  const std::filesystem::path bundled = data_dir / "manifests" / (model_arg + ".manifest");
  if (std::filesystem::exists(bundled)) {
    return bundled;
  }
  std::string known;
  if (std::filesystem::is_directory(data_dir / "manifests")) {
    for (const auto& entry : std::filesystem::directory_iterator(data_dir / "manifests")) {
      if (entry.path().extension() == ".manifest") {
        if (!known.empty()) known += ", ";
        known += entry.path().stem().string();
      }
    }
  }
  throw IoError("no manifest file or bundled model named '" + model_arg +
                "'; bundled models: " + (known.empty() ? "(none found)" : known));
}

}  // namespace spogasim
