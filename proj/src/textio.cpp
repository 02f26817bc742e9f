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

#include "spogasim/textio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spogasim/errors.hpp"

namespace spogasim {

namespace {

std::string strip(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<TextLine> read_data_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw IoError("cannot open " + file.string());
  }
  std::vector<TextLine> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = strip(raw);
    if (!text.empty()) lines.push_back({number, text});
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) fields.push_back(tok);
  return fields;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& file) {
  std::map<std::string, std::string> kv;
  for (const TextLine& line : read_data_lines(file)) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) {
      throw ParseError(file.string() + ":" + std::to_string(line.number) +
                       ": expected 'key = value', got '" + line.text + "'");
    }
    const std::string key = strip(line.text.substr(0, eq));
    const std::string value = strip(line.text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParseError(file.string() + ":" + std::to_string(line.number) +
                       ": empty key or value");
    }
    kv[key] = value;
  }
  return kv;
}

std::int64_t parse_int(const std::string& token, const std::string& context) {
  std::int64_t value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(context + ": expected integer, got '" + token + "'");
  }
  return value;
}

double parse_double(const std::string& token, const std::string& context) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(token, &consumed);
    if (consumed != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw ParseError(context + ": expected number, got '" + token + "'");
  }
}

std::string format_double(double v) {
  // %.17g always round-trips but prints noise; try ascending precision.
  char buf[64];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + file.string());
  }
  out << content;
  if (!out) {
    throw IoError("write failed for " + file.string());
  }
}

}  // namespace spogasim
