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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace spogasim {

// Helpers for the line-oriented text formats used by the bundled datasets,
// cost tables, manifests, and config files. '#' starts a comment; blank
// lines are ignored.

/// One non-empty, comment-stripped line with its 1-based source line number.
struct TextLine {
  int number = 0;
  std::string text;
};

/// Read a file and return its meaningful lines. Throws IoError if the file
/// cannot be opened.
std::vector<TextLine> read_data_lines(const std::filesystem::path& file);

/// Split on runs of whitespace.
std::vector<std::string> split_fields(const std::string& line);

/// Parse "key = value" lines into an ordered map. Duplicate keys keep the
/// last value. Throws ParseError (with file:line context) on lines without
/// '='.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& file);

/// Strict integer / double parsing with file:line diagnostics.
std::int64_t parse_int(const std::string& token, const std::string& context);
double parse_double(const std::string& token, const std::string& context);

/// Shortest round-trippable decimal form; used everywhere a double is
/// written to CSV/SVG so reruns are byte-identical.
std::string format_double(double v);

/// Write a whole file atomically-ish (temp + rename not needed here; plain
/// truncating write). Throws IoError on failure.
void write_text_file(const std::filesystem::path& file, const std::string& content);

}  // namespace spogasim
