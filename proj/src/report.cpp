// Copyright 2026 The padlab Authors. All Rights Reserved.
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

#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <string>

#include "padlab/harness.hpp"

namespace padlab {
namespace {

// Round-trips the shared text form so JSON carries the same value as CSV.
double as_emitted(double v) { return std::stod(format_value(v)); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  if (report.experiment == "richness") {
    out << "image,k,embedder,S\n";
    for (const auto& r : report.richness) {
      out << csv_field(r.image) << ',' << r.k << ',' << csv_field(r.embedder) << ','
          << format_value(r.score) << '\n';
    }
    return out.str();
  }
  out << "experiment,label,size,region,seed_count,loss_mean,loss_std\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.label) << ',' << r.size << ','
        << csv_field(r.region) << ',' << r.seed_count << ',' << format_value(r.loss_mean) << ','
        << format_value(r.loss_std) << '\n';
  }
  return out.str();
}

std::string to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.meta) meta[k] = v;
  if (!report.errors.empty()) meta["errors"] = report.errors;
  doc["meta"] = meta;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (report.experiment == "richness") {
    for (const auto& r : report.richness) {
      nlohmann::ordered_json row{{"image", r.image},
                                 {"k", r.k},
                                 {"embedder", r.embedder},
                                 {"S", as_emitted(r.score)}};
      if (!r.pairwise.empty()) {
        nlohmann::ordered_json m = nlohmann::ordered_json::array();
        for (double v : r.pairwise) m.push_back(as_emitted(v));
        row["pairwise"] = m;
      }
      rows.push_back(row);
    }
  } else {
    for (const auto& r : report.rows) {
      rows.push_back({{"experiment", r.experiment},
                      {"label", r.label},
                      {"size", r.size},
                      {"region", r.region},
                      {"seed_count", r.seed_count},
                      {"loss_mean", as_emitted(r.loss_mean)},
                      {"loss_std", as_emitted(r.loss_std)}});
    }
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

}  // namespace padlab
