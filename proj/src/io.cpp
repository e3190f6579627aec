// Copyright 2026 The qfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfilter/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "qfilter/numfmt.hpp"

namespace qfilter {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw std::invalid_argument("record line " + std::to_string(line_no) + ": " +
                              what);
}

}  // namespace

std::string emit_record(const ObservationRecord& record) {
  validate_record(record);
  const bool counting = record.detection == Detection::kCounting;
  std::ostringstream os;
  os << "# detection=" << (counting ? "counting" : "homodyne") << '\n';
  os << "# t0=" << format_double(record.grid.t0) << '\n';
  os << "# dt=" << format_double(record.grid.dt) << '\n';
  os << "# n_steps=" << record.grid.n_steps << '\n';
  if (record.seed_provenance) {
    os << "# master_seed=" << record.seed_provenance->master_seed << '\n';
    os << "# traj_index=" << record.seed_provenance->trajectory_index << '\n';
  }
  os << (counting ? "k,dN" : "k,dy") << '\n';
  for (std::size_t k = 0; k < record.increments.size(); ++k) {
    os << k << ',' << format_double(record.increments[k]) << '\n';
  }
  return os.str();
}

ObservationRecord parse_record(const std::string& text) {
  std::map<std::string, std::string> headers;
  ObservationRecord record;
  bool saw_columns = false;
  std::size_t expected = 0;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line[0] == '#') {
      if (saw_columns) fail(line_no, "header line after data rows");
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      body = start == std::string::npos ? "" : body.substr(start);
      const auto eq = body.find('=');
      if (eq == std::string::npos) fail(line_no, "expected '# key=value'");
      headers[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }

    if (!saw_columns) {
      // Column line: binds detection and grid from the headers seen so far.
      auto need = [&](const char* key) -> const std::string& {
        auto it = headers.find(key);
        if (it == headers.end()) {
          fail(line_no, std::string("missing header '") + key + "'");
        }
        return it->second;
      };
      try {
        if (line == "k,dy") {
          record.detection = Detection::kHomodyne;
        } else if (line == "k,dN") {
          record.detection = Detection::kCounting;
        } else {
          fail(line_no, "expected column line 'k,dy' or 'k,dN', got '" + line +
                            "'");
        }
        const std::string& det = need("detection");
        if (det != (record.detection == Detection::kCounting ? "counting"
                                                             : "homodyne")) {
          fail(line_no, "column line does not match declared detection '" +
                            det + "'");
        }
        record.grid.t0 = parse_double(need("t0"));
        record.grid.dt = parse_double(need("dt"));
        expected = static_cast<std::size_t>(parse_u64(need("n_steps")));
        record.grid.n_steps = expected;
        if (headers.count("master_seed") != headers.count("traj_index")) {
          fail(line_no, "master_seed and traj_index must appear together");
        }
        if (headers.count("master_seed") != 0) {
          record.seed_provenance =
              SeedProvenance{parse_u64(headers.at("master_seed")),
                             parse_u64(headers.at("traj_index"))};
        }
      } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).rfind("record line", 0) == 0) throw;
        fail(line_no, e.what());
      }
      record.increments.reserve(expected);
      saw_columns = true;
      continue;
    }

    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(line_no, "expected 'k,value'");
    try {
      const std::uint64_t k = parse_u64(line.substr(0, comma));
      if (k != record.increments.size()) {
        fail(line_no, "row index " + std::to_string(k) + " out of order");
      }
      record.increments.push_back(parse_double(line.substr(comma + 1)));
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("record line", 0) == 0) throw;
      fail(line_no, e.what());
    }
  }

  if (!saw_columns) {
    throw std::invalid_argument("record: no column line found");
  }
  if (record.increments.size() != expected) {
    throw std::invalid_argument(
        "record: expected " + std::to_string(expected) + " increments, found " +
        std::to_string(record.increments.size()));
  }
  validate_record(record);
  return record;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) {
    throw std::runtime_error("error while reading '" + path + "'");
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  out.flush();
  if (!out) {
    throw std::runtime_error("error while writing '" + path + "'");
  }
}

}  // namespace qfilter
