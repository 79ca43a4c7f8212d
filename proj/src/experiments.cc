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

#include "jpsro/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"

namespace jpsro {

namespace fs = std::filesystem;
using nlohmann::json;

Algo ParseAlgo(const std::string& name) {
  if (name == "jpsro") return Algo::kJpsro;
  if (name == "neupl-tabular") return Algo::kNeuplTabular;
  if (name == "neupl-parametric") return Algo::kNeuplParametric;
  throw InvalidArgument("unknown algorithm: " + name);
}

std::string AlgoName(Algo algo) {
  switch (algo) {
    case Algo::kJpsro:
      return "jpsro";
    case Algo::kNeuplTabular:
      return "neupl-tabular";
    case Algo::kNeuplParametric:
      return "neupl-parametric";
  }
  return "unknown";
}

void ExperimentConfig::Validate() const {
  if (num_seeds < 1) throw InvalidArgument("need at least one seed");
  if (algo == Algo::kJpsro) {
    neupl.run.Validate();
  } else {
    neupl.Validate();
  }
  BuildGame(neupl.run.game);
}

std::string ExperimentConfig::ToJson() const {
  const RunConfig& r = neupl.run;
  json j;
  j["version"] = kToolkitVersion;
  j["algo"] = AlgoName(algo);
  j["game"] = r.game.ToString();
  j["objective"] = CceObjectiveName(r.objective);
  j["solver_epsilon"] = r.solver_epsilon;
  j["termination_epsilon"] = r.termination_epsilon;
  j["max_iterations"] = r.max_iterations;
  j["initial_policy"] = InitialPolicyName(r.initial_policy);
  j["evaluation"] =
      r.evaluation == EvaluationOptions::Mode::kExact ? "exact" : "simulated";
  j["episodes"] = r.episodes;
  std::vector<int> seeds(num_seeds);
  for (int s = 0; s < num_seeds; ++s) seeds[s] = s;
  j["seeds"] = seeds;
  if (algo != Algo::kJpsro) {
    const ParametricOptions& m = neupl.model;
    j["neupl"] = {{"top_k", neupl.top_k},
                  {"use_estimator", neupl.use_estimator},
                  {"estimator_steps", neupl.estimator_steps},
                  {"estimator_episodes_per_entry",
                   neupl.estimator_episodes_per_entry},
                  {"embedding_dim", m.embedding_dim},
                  {"hash_buckets", m.hash_buckets},
                  {"hash_features", m.hash_features},
                  {"weight_scale", m.weight_scale},
                  {"regularize", neupl.regularize},
                  {"sample_priors", neupl.sample_priors},
                  {"episodes_per_iteration", neupl.episodes_per_iteration},
                  {"episode_rounds", neupl.episode_rounds},
                  {"max_train_steps", neupl.max_train_steps},
                  {"learning_rate", neupl.learning_rate},
                  {"distill_weight", neupl.distill_weight},
                  {"regularize_weight", neupl.regularize_weight},
                  {"distill_threshold", neupl.distill_threshold},
                  {"regularize_tolerance", neupl.regularize_tolerance}};
  }
  return j.dump(2) + "\n";
}

SeedRun RunSeed(const ExperimentConfig& config, std::uint64_t seed) {
  SeedRun out;
  out.seed = seed;
  NeuplConfig c = config.neupl;
  c.run.seed = seed;
  if (config.algo == Algo::kJpsro) {
    out.run = JpsroRun(c.run);
    return out;
  }
  c.mode = config.algo == Algo::kNeuplTabular
               ? PopulationMode::kTabularExact
               : PopulationMode::kSharedParametric;
  NeuplResult r = NeuplJpsroRun(c);
  std::ostringstream buf;
  r.model.Save(buf);
  out.checkpoint = buf.str();
  out.run = std::move(r.run);
  return out;
}

namespace {

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Files named <prefix><seed><suffix>, ordered by seed.
std::vector<std::pair<std::uint64_t, fs::path>> SeedFiles(
    const std::string& dir, const std::string& prefix,
    const std::string& suffix) {
  if (!fs::is_directory(dir)) throw InvalidArgument("no bundle at " + dir);
  std::vector<std::pair<std::uint64_t, fs::path>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() <= prefix.size() + suffix.size() ||
        name.compare(0, prefix.size(), prefix) != 0 ||
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    const std::string mid =
        name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (mid.empty() ||
        !std::all_of(mid.begin(), mid.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    out.emplace_back(std::stoull(mid), entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw InvalidArgument("bundle " + dir + " has no " + prefix + "*" + suffix);
  }
  return out;
}

}  // namespace

void WriteBundle(const ExperimentConfig& config,
                 const std::vector<SeedRun>& runs, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path root(dir);
  WriteFile(root / "config.json", config.ToJson());
  std::vector<Trace> traces;
  for (const SeedRun& r : runs) {
    const std::string s = std::to_string(r.seed);
    Trace trace{AlgoName(config.algo), r.seed, config.neupl.run.game.ToString(),
                r.run.records};
    WriteFile(root / ("trace-" + s + ".jsonl"), TraceToJsonl(trace));
    WriteFile(root / ("timing-" + s + ".csv"), TimingCsv(r.run.records));
    std::string sigmas;
    for (const JointDistribution& sigma : r.run.sigmas) {
      sigmas += sigma.ToJson();
      sigmas += '\n';
    }
    WriteFile(root / ("sigma-" + s + ".jsonl"), sigmas);
    std::ostringstream pol;
    for (size_t p = 0; p < r.run.policies.size(); ++p) {
      for (size_t k = 0; k < r.run.policies[p].size(); ++k) {
        pol << "# player " << p << " strategy " << k << '\n';
        WritePolicy(*r.run.game, r.run.policies[p][k], pol);
      }
    }
    WriteFile(root / ("policies-" + s + ".txt"), pol.str());
    if (!r.checkpoint.empty()) {
      WriteFile(root / ("model-" + s + ".bin"), r.checkpoint);
    }
    traces.push_back(std::move(trace));
  }
  WriteFile(root / "aggregate.csv", AggregateCsv(traces));
}

std::vector<Trace> ReadBundleTraces(const std::string& dir) {
  std::vector<Trace> traces;
  for (const auto& [seed, path] : SeedFiles(dir, "trace-", ".jsonl")) {
    traces.push_back(TraceFromJsonl(ReadFile(path)));
    if (traces.back().records.empty()) {
      throw InvalidArgument("empty trace in " + path.string());
    }
    if (traces.back().seed != seed) {
      throw InvalidArgument("trace seed does not match its file name");
    }
  }
  return traces;
}

std::vector<std::vector<JointDistribution>> ReadBundleSigmas(
    const std::string& dir) {
  std::vector<std::vector<JointDistribution>> out;
  for (const auto& [seed, path] : SeedFiles(dir, "sigma-", ".jsonl")) {
    std::istringstream in(ReadFile(path));
    std::string line;
    std::vector<JointDistribution> sigmas;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        sigmas.push_back(JointDistribution::FromJson(line));
      } catch (const json::exception& e) {
        throw InvalidArgument("corrupt sigma snapshot: " + std::string(e.what()));
      }
    }
    if (sigmas.empty()) throw InvalidArgument("no sigma snapshots in " + path.string());
    out.push_back(std::move(sigmas));
  }
  return out;
}

MeanStd Summarize(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stdev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

namespace {

struct Series {
  std::vector<int> iterations;
  std::vector<int> active;
  std::vector<MeanStd> gap;
  std::vector<std::vector<MeanStd>> delta;  // [player][iteration]
  std::vector<std::vector<MeanStd>> value;
};

Series Aggregate(const std::vector<Trace>& traces) {
  size_t longest = 0;
  size_t n = 0;
  for (const Trace& t : traces) {
    if (t.records.empty()) throw InvalidArgument("empty trace");
    longest = std::max(longest, t.records.size());
    if (n == 0) n = t.records.front().values.size();
    if (t.records.front().values.size() != n) {
      throw InvalidArgument("traces disagree on the player count");
    }
  }
  if (longest == 0) throw InvalidArgument("no records to aggregate");
  Series s;
  s.delta.resize(n);
  s.value.resize(n);
  for (size_t i = 0; i < longest; ++i) {
    std::vector<double> gap;
    std::vector<std::vector<double>> delta(n), value(n);
    int active = 0;
    for (const Trace& t : traces) {
      const IterationRecord& r = t.records[std::min(i, t.records.size() - 1)];
      if (i < t.records.size()) ++active;
      gap.push_back(r.cce_gap);
      for (size_t p = 0; p < n; ++p) {
        delta[p].push_back(r.deviation_gains[p]);
        value[p].push_back(r.values[p]);
      }
    }
    s.iterations.push_back(static_cast<int>(i) + 1);
    s.active.push_back(active);
    s.gap.push_back(Summarize(gap));
    for (size_t p = 0; p < n; ++p) {
      s.delta[p].push_back(Summarize(delta[p]));
      s.value[p].push_back(Summarize(value[p]));
    }
  }
  return s;
}

}  // namespace

std::string AggregateCsv(const std::vector<Trace>& traces) {
  const Series s = Aggregate(traces);
  const size_t n = s.delta.size();
  std::ostringstream out;
  out << "iteration,active,cce_gap_mean,cce_gap_std";
  for (size_t p = 0; p < n; ++p) out << ",delta_" << p << "_mean,delta_" << p << "_std";
  for (size_t p = 0; p < n; ++p) out << ",value_" << p << "_mean,value_" << p << "_std";
  out << '\n';
  for (size_t i = 0; i < s.iterations.size(); ++i) {
    out << s.iterations[i] << ',' << s.active[i] << ','
        << FormatDouble(s.gap[i].mean) << ',' << FormatDouble(s.gap[i].stdev);
    for (size_t p = 0; p < n; ++p) {
      out << ',' << FormatDouble(s.delta[p][i].mean) << ','
          << FormatDouble(s.delta[p][i].stdev);
    }
    for (size_t p = 0; p < n; ++p) {
      out << ',' << FormatDouble(s.value[p][i].mean) << ','
          << FormatDouble(s.value[p][i].stdev);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};

std::string Num(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

std::string Label(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

struct Panel {
  double x0, y0, w, h;
  double xmin, xmax, ymin, ymax;
  double X(double x) const {
    return xmax > xmin ? x0 + (x - xmin) / (xmax - xmin) * w : x0 + w / 2;
  }
  double Y(double y) const {
    return ymax > ymin ? y0 + h - (y - ymin) / (ymax - ymin) * h : y0 + h / 2;
  }
};

void Frame(std::ostringstream& svg, const Panel& p, const std::string& title,
           const std::string& ylabel, bool log_y) {
  svg << "<rect x=\"" << Num(p.x0) << "\" y=\"" << Num(p.y0) << "\" width=\""
      << Num(p.w) << "\" height=\"" << Num(p.h)
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<text x=\"" << Num(p.x0 + p.w / 2) << "\" y=\"" << Num(p.y0 - 8)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << title << "</text>\n";
  svg << "<text x=\"" << Num(p.x0 + p.w / 2) << "\" y=\"" << Num(p.y0 + p.h + 32)
      << "\" text-anchor=\"middle\" font-size=\"11\">iteration</text>\n";
  svg << "<text x=\"" << Num(p.x0 - 46) << "\" y=\"" << Num(p.y0 + p.h / 2)
      << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 "
      << Num(p.x0 - 46) << ' ' << Num(p.y0 + p.h / 2) << ")\">" << ylabel
      << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = p.xmin + (p.xmax - p.xmin) * k / 4.0;
    const double fy = p.ymin + (p.ymax - p.ymin) * k / 4.0;
    svg << "<text x=\"" << Num(p.X(fx)) << "\" y=\"" << Num(p.y0 + p.h + 14)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << Label(std::round(fx))
        << "</text>\n";
    svg << "<text x=\"" << Num(p.x0 - 4) << "\" y=\"" << Num(p.Y(fy) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">"
        << (log_y ? "1e" + Label(std::round(fy * 10) / 10) : Label(fy))
        << "</text>\n";
  }
}

void Curve(std::ostringstream& svg, const Panel& p, const std::vector<int>& xs,
           const std::vector<double>& lo, const std::vector<double>& mid,
           const std::vector<double>& hi, const char* color) {
  svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    svg << Num(p.X(xs[i])) << ',' << Num(p.Y(hi[i])) << ' ';
  }
  for (size_t i = xs.size(); i-- > 0;) {
    svg << Num(p.X(xs[i])) << ',' << Num(p.Y(lo[i])) << ' ';
  }
  svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < xs.size(); ++i) {
    svg << Num(p.X(xs[i])) << ',' << Num(p.Y(mid[i])) << ' ';
  }
  svg << "\"/>\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    svg << "<circle cx=\"" << Num(p.X(xs[i])) << "\" cy=\"" << Num(p.Y(mid[i]))
        << "\" r=\"2\" fill=\"" << color << "\"/>\n";
  }
}

}  // namespace

std::string PlotSvg(const std::vector<Trace>& traces, const std::string& title) {
  const Series s = Aggregate(traces);
  const double kFloor = 1e-8;
  auto lg = [kFloor](double v) { return std::log10(std::max(v, kFloor)); };
  std::vector<double> glo, gmid, ghi;
  for (const MeanStd& m : s.gap) {
    glo.push_back(lg(m.mean - m.stdev));
    gmid.push_back(lg(m.mean));
    ghi.push_back(lg(m.mean + m.stdev));
  }
  const double xmin = s.iterations.front();
  const double xmax = s.iterations.back();
  Panel gap{70, 50, 360, 260, xmin, xmax,
            *std::min_element(glo.begin(), glo.end()),
            *std::max_element(ghi.begin(), ghi.end())};
  if (gap.ymax - gap.ymin < 1e-9) {
    gap.ymin -= 1;
    gap.ymax += 1;
  }
  double vmin = 1e300, vmax = -1e300;
  for (const auto& series : s.value) {
    for (const MeanStd& m : series) {
      vmin = std::min(vmin, m.mean - m.stdev);
      vmax = std::max(vmax, m.mean + m.stdev);
    }
  }
  if (vmax - vmin < 1e-9) {
    vmin -= 0.5;
    vmax += 0.5;
  }
  Panel val{530, 50, 360, 260, xmin, xmax, vmin, vmax};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"380\" "
         "font-family=\"sans-serif\">\n";
  svg << "<rect width=\"940\" height=\"380\" fill=\"white\"/>\n";
  svg << "<text x=\"470\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  Frame(svg, gap, "CCE gap", "log10 gap", true);
  Curve(svg, gap, s.iterations, glo, gmid, ghi, kColors[0]);
  Frame(svg, val, "CCE values", "value", false);
  for (size_t p = 0; p < s.value.size(); ++p) {
    std::vector<double> lo, mid, hi;
    for (const MeanStd& m : s.value[p]) {
      lo.push_back(m.mean - m.stdev);
      mid.push_back(m.mean);
      hi.push_back(m.mean + m.stdev);
    }
    const char* color = kColors[p % 6];
    Curve(svg, val, s.iterations, lo, mid, hi, color);
    svg << "<text x=\"" << Num(val.x0 + val.w - 6) << "\" y=\""
        << Num(val.y0 + 14 + 13 * p) << "\" text-anchor=\"end\" font-size=\"10\" "
        << "fill=\"" << color << "\">player " << p << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void PlotBundle(const std::string& dir, const std::string& out) {
  const std::vector<Trace> traces = ReadBundleTraces(dir);
  std::string title = traces.front().game + " (" + traces.front().mode + ", " +
                      std::to_string(traces.size()) + " seeds)";
  const std::string svg = PlotSvg(traces, title);
  const std::string csv = AggregateCsv(traces);
  const fs::path base(out);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  WriteFile(base.string() + ".svg", svg);
  WriteFile(base.string() + ".csv", csv);
}

std::vector<int> SupportCounts(const JointDistribution& sigma) {
  std::vector<int> counts(kSupportThresholds.size(), 0);
  for (double p : sigma.probs) {
    for (size_t k = 0; k < kSupportThresholds.size(); ++k) {
      if (p > kSupportThresholds[k]) ++counts[k];
    }
  }
  return counts;
}

std::string SupportStatsCsv(
    const std::vector<std::vector<JointDistribution>>& sigmas) {
  std::ostringstream out;
  out << "seed,iteration,support_gt_1e-3,support_gt_5e-3,support_gt_1e-2\n";
  std::vector<std::vector<double>> columns(kSupportThresholds.size());
  for (size_t s = 0; s < sigmas.size(); ++s) {
    for (size_t k = 0; k < sigmas[s].size(); ++k) {
      const std::vector<int> c = SupportCounts(sigmas[s][k]);
      out << s << ',' << k;
      for (size_t i = 0; i < c.size(); ++i) {
        out << ',' << c[i];
        columns[i].push_back(c[i]);
      }
      out << '\n';
    }
  }
  std::vector<MeanStd> m;
  for (const auto& col : columns) m.push_back(Summarize(col));
  out << "mean,";
  for (const MeanStd& x : m) out << ',' << FormatDouble(x.mean);
  out << "\nstdev,";
  for (const MeanStd& x : m) out << ',' << FormatDouble(x.stdev);
  out << '\n';
  return out.str();
}

void EstimatorStudyConfig::Validate() const {
  if (strategies < 1) throw InvalidArgument("strategies must be positive");
  if (embedding_dim < 1) throw InvalidArgument("embedding_dim must be positive");
  if (steps < 0) throw InvalidArgument("steps must be nonnegative");
  if (report_every < 1) throw InvalidArgument("report_every must be positive");
  if (estimator.hidden < 1) throw InvalidArgument("hidden must be positive");
  if (!(estimator.learning_rate > 0.0)) {
    throw InvalidArgument("learning_rate must be positive");
  }
}

std::vector<EstimatorStudyRow> RunEstimatorStudy(
    const EstimatorStudyConfig& config) {
  config.Validate();
  GamePtr g = BuildGame(config.game);
  const int n = g->num_players();
  PolicyLists lists(n);
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k < config.strategies; ++k) {
      std::vector<int> actions;
      for (const Infoset& s : g->infosets(p)) actions.push_back(k % s.num_actions());
      lists[p].push_back(PurePolicy(*g, p, actions));
    }
  }
  const PayoffTensor exact = EvaluatePayoffTensor(*g, lists);
  std::vector<PayoffEstimator::Sample> data;
  for (std::int64_t j = 0; j < exact.size(); ++j) {
    const std::vector<int> joint = exact.indexer().Unflatten(j);
    const auto payoffs = exact.payoffs(j);
    data.push_back({joint, {payoffs.begin(), payoffs.end()}});
  }
  std::mt19937_64 rng(config.estimator.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  EmbeddingSets v(n);
  for (auto& list : v) {
    for (int k = 0; k < config.strategies; ++k) {
      Embedding e(config.embedding_dim);
      for (double& x : e) x = normal(rng);
      list.push_back(std::move(e));
    }
  }
  PayoffEstimator est(n, config.embedding_dim, g->symmetric_player_groups(),
                      config.estimator);
  auto row = [&](int steps, double seconds) {
    EstimatorStudyRow r;
    r.steps = steps;
    r.loss = est.Loss(v, data);
    r.seconds = seconds;
    for (const auto& s : data) {
      const auto y = est.Predict(v, s.joint);
      for (int p = 0; p < n; ++p) {
        r.max_abs_error = std::max(r.max_abs_error, std::abs(y[p] - s.returns[p]));
      }
    }
    return r;
  };
  std::vector<EstimatorStudyRow> rows{row(0, 0.0)};
  double seconds = 0.0;
  int done = 0;
  while (done < config.steps) {
    const int chunk = std::min(config.report_every, config.steps - done);
    const auto start = std::chrono::steady_clock::now();
    est.Train(v, data, chunk);
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                   .count();
    done += chunk;
    rows.push_back(row(done, seconds));
  }
  return rows;
}

std::string EstimatorStudyCsv(const std::vector<EstimatorStudyRow>& rows) {
  std::ostringstream out;
  out << "steps,loss,max_abs_error,seconds\n";
  for (const auto& r : rows) {
    out << r.steps << ',' << FormatDouble(r.loss) << ','
        << FormatDouble(r.max_abs_error) << ',' << FormatDouble(r.seconds) << '\n';
  }
  return out.str();
}

}  // namespace jpsro
