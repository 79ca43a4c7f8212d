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

#ifndef JPSRO_TRACE_H_
#define JPSRO_TRACE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "jpsro/jpsro.h"

namespace jpsro {

inline constexpr const char* kTraceSchema = "jpsro-trace/1";

struct Trace {
  std::string mode;  // jpsro | neupl-tabular | neupl-parametric
  std::uint64_t seed = 0;
  std::string game;
  std::vector<IterationRecord> records;
};

// JSON lines, one record per line, each tagged with schema, mode, seed and
// game. Wall time is not part of the trace.
std::string TraceToJsonl(const Trace& trace);
Trace TraceFromJsonl(const std::string& text);

// Plot-ready CSV: iteration, cce_gap, delta_<p>, value_<p>, size_<p>.
std::string TraceToCsv(const std::vector<IterationRecord>& records);

// iteration,wall_time_seconds
std::string TimingCsv(const std::vector<IterationRecord>& records);

}  // namespace jpsro

#endif  // JPSRO_TRACE_H_
