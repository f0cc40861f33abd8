// Copyright 2026 The epstein-lab authors.
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

#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"

namespace epstein_lab::harness {

using nlohmann::json;

bool ExperimentReport::all_pass() const {
  for (const auto& row : rows) {
    if (!row.pass) return false;
  }
  return !rows.empty();
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"criterion", r.criterion},
                    {"statistic", r.statistic},
                    {"target", r.target},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass}});
  }
  json doc = {{"name", report.name},
              {"master_seed", report.master_seed},
              {"parameters", json::parse(report.parameters_json)},
              {"rows", rows},
              {"all_pass", report.all_pass()},
              {"wall_time_seconds", report.wall_time_seconds}};
  return doc.dump(2) + "\n";
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment,master_seed,criterion,statistic,target,tolerance,pass\r\n";
  for (const auto& r : report.rows) {
    out << csv_field(report.name) << ',' << report.master_seed << ',' << csv_field(r.criterion) << ','
        << format_double(r.statistic) << ',' << format_double(r.target) << ',' << format_double(r.tolerance)
        << ',' << (r.pass ? "true" : "false") << "\r\n";
  }
  return out.str();
}

namespace {

ExperimentConfig config_from_object(const json& obj) {
  if (!obj.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig cfg;
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return v.get<double>();
  };
  auto positive_int = [](const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() < 1)
      throw ConfigError("config: '" + key + "' must be a positive integer");
    return v.get<long long>();
  };
  for (const auto& [key, v] : obj.items()) {
    if (key == "n") {
      std::vector<int> ns;
      if (v.is_array()) {
        for (const auto& e : v) ns.push_back(static_cast<int>(positive_int(e, key)));
      } else {
        ns.push_back(static_cast<int>(positive_int(v, key)));
      }
      if (ns.empty()) throw ConfigError("config: 'n' must not be empty");
      cfg.n = ns;
    } else if (key == "p") {
      cfg.p = static_cast<std::uint64_t>(positive_int(v, key));
    } else if (key == "trials") {
      cfg.trials = static_cast<std::size_t>(positive_int(v, key));
    } else if (key == "A") {
      cfg.A = number(v, key);
    } else if (key == "c_grid") {
      if (!v.is_array() || v.empty()) throw ConfigError("config: 'c_grid' must be a non-empty list");
      std::vector<double> cs;
      for (const auto& e : v) cs.push_back(number(e, key));
      cfg.c_grid = cs;
    } else if (key == "grid_step") {
      cfg.grid_step = number(v, key);
    } else if (key == "tol") {
      cfg.tol = number(v, key);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) { return config_from_object(parse_text(json_text)); }

ExperimentConfig parse_config_for(const std::string& json_text, const std::string& experiment) {
  const json doc = parse_text(json_text);
  if (doc.is_object() && doc.contains(experiment)) return config_from_object(doc.at(experiment));
  for (const auto& name : experiment_names()) {
    // Keyed by other experiments only: nothing applies to this one.
    if (doc.is_object() && doc.contains(name)) return {};
  }
  return config_from_object(doc);
}

}  // namespace epstein_lab::harness
