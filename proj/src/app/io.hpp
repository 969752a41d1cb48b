// Copyright 2026 The qmetric Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMETRIC_APP_IO_HPP
#define QMETRIC_APP_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qmetric {

// SHA-1 of "blob <size>\0<bytes>", as git hashes file contents.
std::string git_blob_sha1(const std::string& bytes);

// Writes to a sibling temp file, then renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Shortest decimal that round-trips; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& cell(const std::string& s);
  CsvTable& cell(const char* s) { return cell(std::string(s)); }
  CsvTable& cell(double v) { return cell(format_double(v)); }
  CsvTable& cell(std::int64_t v) { return cell(std::to_string(v)); }
  CsvTable& cell(std::uint64_t v) { return cell(std::to_string(v)); }
  CsvTable& cell(int v) { return cell(std::to_string(v)); }
  CsvTable& cell(bool v) { return cell(std::string(v ? "true" : "false")); }
  template <class T>
  CsvTable& cell(const std::optional<T>& v) {
    return v ? cell(*v) : cell(std::string());
  }

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qmetric

#endif  // QMETRIC_APP_IO_HPP
