// Copyright 2026 The JPSRO Toolkit Authors. All rights reserved.
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

#include "jpsro/trace.h"

#include <sstream>

#include "json.hpp"

namespace jpsro {

using nlohmann::json;

std::string TraceToJsonl(const Trace& trace) {
  std::string out;
  for (const IterationRecord& r : trace.records) {
    json j;
    j["schema"] = kTraceSchema;
    j["mode"] = trace.mode;
    j["seed"] = trace.seed;
    j["game"] = trace.game;
    j["iteration"] = r.iteration;
    j["deviation_gains"] = r.deviation_gains;
    j["cce_gap"] = r.cce_gap;
    j["values"] = r.values;
    j["population_sizes"] = r.population_sizes;
    j["restricted_deviation"] = r.restricted_deviation;
    j["solver"] = {{"method", r.solver_method},
                   {"iterations", r.solver_iterations},
                   {"repaired", r.solver_repaired}};
    j["extras"] = json::object();
    for (const auto& [k, v] : r.extras) j["extras"][k] = v;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Trace TraceFromJsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("corrupt trace line: ") + e.what());
    }
    try {
      if (j.at("schema").get<std::string>() != kTraceSchema) {
        throw InvalidArgument("unsupported trace schema");
      }
      if (first) {
        trace.mode = j.at("mode").get<std::string>();
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.game = j.at("game").get<std::string>();
        first = false;
      }
      IterationRecord r;
      r.iteration = j.at("iteration").get<int>();
      r.deviation_gains = j.at("deviation_gains").get<std::vector<double>>();
      r.cce_gap = j.at("cce_gap").get<double>();
      r.values = j.at("values").get<std::vector<double>>();
      r.population_sizes = j.at("population_sizes").get<std::vector<int>>();
      r.restricted_deviation = j.at("restricted_deviation").get<double>();
      r.solver_method = j.at("solver").at("method").get<std::string>();
      r.solver_iterations = j.at("solver").at("iterations").get<int>();
      r.solver_repaired = j.at("solver").at("repaired").get<bool>();
      for (const auto& [k, v] : j.at("extras").items()) {
        r.extras[k] = v.get<double>();
      }
      trace.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw InvalidArgument(std::string("corrupt trace record: ") + e.what());
    }
  }
  return trace;
}

std::string TraceToCsv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  const size_t n = records.empty() ? 0 : records.front().values.size();
  out << "iteration,cce_gap";
  for (size_t p = 0; p < n; ++p) out << ",delta_" << p;
  for (size_t p = 0; p < n; ++p) out << ",value_" << p;
  for (size_t p = 0; p < n; ++p) out << ",size_" << p;
  out << '\n';
  for (const IterationRecord& r : records) {
    out << r.iteration << ',' << FormatDouble(r.cce_gap);
    for (double d : r.deviation_gains) out << ',' << FormatDouble(d);
    for (double v : r.values) out << ',' << FormatDouble(v);
    for (int s : r.population_sizes) out << ',' << s;
    out << '\n';
  }
  return out.str();
}

std::string TimingCsv(const std::vector<IterationRecord>& records) {
  std::ostringstream out;
  out << "iteration,wall_time_seconds\n";
  for (const IterationRecord& r : records) {
    out << r.iteration << ',' << FormatDouble(r.wall_time_seconds) << '\n';
  }
  return out.str();
}

}  // namespace jpsro
