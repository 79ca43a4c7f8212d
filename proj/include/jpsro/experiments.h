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

#ifndef JPSRO_EXPERIMENTS_H_
#define JPSRO_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "jpsro/neupl.h"
#include "jpsro/payoff_estimator.h"
#include "jpsro/trace.h"

namespace jpsro {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Algo { kJpsro, kNeuplTabular, kNeuplParametric };

Algo ParseAlgo(const std::string& name);
std::string AlgoName(Algo algo);

struct ExperimentConfig {
  Algo algo = Algo::kJpsro;
  NeuplConfig neupl;  // neupl.run holds the shared run settings
  int num_seeds = 1;  // seeds 0 .. num_seeds - 1

  void Validate() const;
  // Deterministic JSON echo (no timestamps or host data).
  std::string ToJson() const;
};

struct SeedRun {
  std::uint64_t seed = 0;
  RunResult run;
  std::string checkpoint;  // serialized population, NeuPL modes only
};

// Runs one seed.
SeedRun RunSeed(const ExperimentConfig& config, std::uint64_t seed);

// Writes config.json, trace-<seed>.jsonl, timing-<seed>.csv,
// sigma-<seed>.jsonl, policies-<seed>.txt, model-<seed>.bin (NeuPL modes)
// and aggregate.csv into `dir` (created if missing).
void WriteBundle(const ExperimentConfig& config,
                 const std::vector<SeedRun>& runs, const std::string& dir);

// Per-seed traces of a bundle, in ascending seed order.
std::vector<Trace> ReadBundleTraces(const std::string& dir);
// Per-seed sigma snapshots of a bundle, in ascending seed order.
std::vector<std::vector<JointDistribution>> ReadBundleSigmas(
    const std::string& dir);

// Mean and sample stdev across seeds, per iteration. Runs that stopped early
// hold their final record. Columns: iteration, active, then mean/std of
// cce_gap, delta_<p> and value_<p>.
std::string AggregateCsv(const std::vector<Trace>& traces);

// Two-panel SVG: CCE gap (log scale) and per-player values against
// iteration, mean curves with a one-stdev band.
std::string PlotSvg(const std::vector<Trace>& traces, const std::string& title);

// Writes <out>.svg and <out>.csv (the aggregate). Throws InvalidArgument and
// writes nothing when the bundle has no records.
void PlotBundle(const std::string& dir, const std::string& out);

inline const std::vector<double> kSupportThresholds{1e-3, 5e-3, 1e-2};

// Joint actions with probability above each threshold.
std::vector<int> SupportCounts(const JointDistribution& sigma);

// Per-seed, per-iteration counts followed by mean and stdev rows.
std::string SupportStatsCsv(
    const std::vector<std::vector<JointDistribution>>& sigmas);

struct MeanStd {
  double mean = 0.0;
  double stdev = 0.0;
};
MeanStd Summarize(const std::vector<double>& xs);

// Fits the payoff estimator to exact expected payoffs of a fixed population
// and tracks its accuracy over training.
struct EstimatorStudyConfig {
  GameSpec game = GameSpec::Parse("rps");
  int strategies = 3;  // strategy k plays action k mod |A| everywhere
  int embedding_dim = 8;
  int steps = 3000;
  int report_every = 500;
  EstimatorOptions estimator;

  void Validate() const;
};

struct EstimatorStudyRow {
  int steps = 0;
  double loss = 0.0;
  double max_abs_error = 0.0;
  double seconds = 0.0;  // cumulative training time
};

std::vector<EstimatorStudyRow> RunEstimatorStudy(
    const EstimatorStudyConfig& config);
std::string EstimatorStudyCsv(const std::vector<EstimatorStudyRow>& rows);

}  // namespace jpsro

#endif  // JPSRO_EXPERIMENTS_H_
