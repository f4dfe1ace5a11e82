// Copyright 2026 The BanditLab Authors.
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

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "banditlab/analysis.hpp"
#include "banditlab/cli.hpp"
#include "banditlab/errors.hpp"

namespace banditlab::cli {

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_raw_csv(std::ostream& out, const InstanceResult& result,
                   RegretKind kind) {
  out << "policy,repetition,checkpoint,t,"
      << (kind == RegretKind::Realized ? "realized_regret" : "pseudo_regret")
      << '\n';
  for (const auto& policy : result.policies) {
    for (std::size_t r = 0; r < policy.traces.size(); ++r) {
      const RegretTrace& trace = policy.traces[r];
      for (std::size_t c = 0; c < trace.checkpoints.size(); ++c) {
        out << policy.label << ',' << r << ',' << c << ','
            << trace.checkpoints[c] << ','
            << format_double(trace.cumulative_regret[c]) << '\n';
      }
    }
  }
}

void write_aggregate_csv(std::ostream& out, const InstanceResult& result) {
  out << "policy,t,mean_regret,stderr,reps\n";
  for (const auto& policy : result.policies) {
    const AggregateCurve curve = aggregate(policy.traces);
    for (std::size_t c = 0; c < curve.checkpoints.size(); ++c) {
      out << policy.label << ',' << curve.checkpoints[c] << ','
          << format_double(curve.mean[c]) << ','
          << format_double(curve.std_error[c]) << ',' << curve.repetitions
          << '\n';
    }
  }
}

namespace {

template <typename T>
T parse_field(const std::string& field, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw IoError("aggregate CSV line " + std::to_string(line) +
                  ": cannot parse '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "policy,t,mean_regret,stderr,reps") {
    throw IoError("aggregate CSV: unexpected header");
  }
  std::vector<AggregateRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw IoError("aggregate CSV line " + std::to_string(line_no) +
                    ": expected 5 fields");
    }
    rows.push_back({fields[0], parse_field<std::uint64_t>(fields[1], line_no),
                    parse_field<double>(fields[2], line_no),
                    parse_field<double>(fields[3], line_no),
                    parse_field<std::size_t>(fields[4], line_no)});
  }
  return rows;
}

}  // namespace banditlab::cli
