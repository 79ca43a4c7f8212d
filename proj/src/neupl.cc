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

#include "jpsro/neupl.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "jpsro/best_response.h"
#include "neupl_training.h"

namespace jpsro {

double BrProbability(int tau, int t, int max_iterations) {
  if (max_iterations < 1 || t < 1 || tau < 0 || tau >= t) {
    throw InvalidArgument("schedule index out of range");
  }
  if (t == 1) return 1.0;
  if (tau == t - 1) {
    return std::min(0.5, std::max(0.2, static_cast<double>(t) /
                                           static_cast<double>(max_iterations)));
  }
  return 0.0;
}

void NeuplConfig::Validate() const {
  run.Validate();
  model.Validate();
  if (top_k < 1) throw InvalidArgument("top-K must be >= 1");
  if (episodes_per_iteration < 1 || episode_rounds < 1 ||
      episode_rounds > episodes_per_iteration) {
    throw InvalidArgument("episode budget must cover at least one round");
  }
  if (max_train_steps < 1) throw InvalidArgument("training budget must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (!(distill_weight > 0.0) || !(regularize_weight >= 0.0)) {
    throw InvalidArgument("loss weights must be positive");
  }
  if (!(distill_threshold > 0.0) || !(regularize_tolerance > 0.0)) {
    throw InvalidArgument("distillation thresholds must be positive");
  }
  if (use_estimator &&
      (estimator_steps < 1 || estimator_episodes_per_entry < 1)) {
    throw InvalidArgument("estimator budget must be positive");
  }
  if (sample_priors && prior_samples < 1) {
    throw InvalidArgument("prior_samples must be >= 1");
  }
}

namespace {

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

std::vector<double> Normalized(const std::vector<double>& counts,
                               std::vector<int>* support) {
  double total = 0.0;
  for (double c : counts) total += c;
  std::vector<double> w;
  support->clear();
  for (size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] > 0.0) {
      support->push_back(static_cast<int>(s));
      w.push_back(counts[s] / total);
    }
  }
  return w;
}

class Runner {
 public:
  Runner(const NeuplConfig& config, const IterationObserver& observer)
      : config_(config),
        observer_(observer),
        game_(BuildGame(config.run.game)),
        model_(game_, config.mode, config.model, config.run.seed),
        pooling_(game_->num_players(), config.model.embedding_dim,
                 game_->symmetric_player_groups()),
        estimator_(game_->num_players(), config.model.embedding_dim,
                   game_->symmetric_player_groups(), EstimatorFor(config)),
        rng_(config.run.seed ^ 0x9e3779b97f4a7c15ULL) {
    eval_.mode = config.run.evaluation;
    eval_.episodes = config.run.episodes;
    eval_.seed = config.run.seed;
    eval_.max_joint_entries = config.run.max_joint_entries;
  }

  NeuplResult Run();

 private:
  static EstimatorOptions EstimatorFor(const NeuplConfig& c) {
    EstimatorOptions o = c.estimator;
    o.seed ^= c.run.seed;
    return o;
  }
  bool parametric() const {
    return config_.mode == PopulationMode::kSharedParametric;
  }
  int n() const { return game_->num_players(); }

  void InitPopulation();
  PayoffTensor Evaluate(const PayoffTensor* previous, IterationRecord* record);
  void TabularIteration(const PolicyLists& ref, IterationRecord& record,
                        std::vector<double>& estimated, bool& gate_ok);
  void ParametricIteration(int t, const PolicyLists& ref,
                           IterationRecord& record,
                           std::vector<double>& estimated, bool& gate_ok);
  void GenerateEpisodes(int t, int count, const PolicyLists& ref,
                        const std::vector<TabularPolicy>& br_tables);
  training::MatchOptions Options(double tolerance) const {
    training::MatchOptions o;
    o.max_steps = config_.max_train_steps;
    o.learning_rate = config_.learning_rate;
    o.gate = config_.distill_threshold;
    o.tolerance = tolerance;
    return o;
  }

  const NeuplConfig& config_;
  const IterationObserver& observer_;
  GamePtr game_;
  PopulationModel model_;
  SlotPooling pooling_;
  PayoffEstimator estimator_;
  std::mt19937_64 rng_;
  EvaluationOptions eval_;
  PayoffTensor tensor_;
  JointDistribution sigma_;
  CceSolveInfo info_;
  std::vector<JointDistribution> sigmas_;
  IterationVisits visits_;
  std::vector<std::vector<double>> seen_;
};

void Runner::InitPopulation() {
  for (int p = 0; p < n(); ++p) {
    TabularPolicy init = InitialPolicyFor(*game_, p, config_.run);
    if (!parametric()) {
      model_.AddStrategy(p, std::move(init));
      continue;
    }
    const int k = model_.AddStrategy(p);
    training::MatchTask task;
    task.strategy = k;
    task.gated = true;
    const int ns = game_->num_infosets(p);
    for (int s = 0; s < ns; ++s) {
      // Smoothed so that deterministic starts have a finite reverse KL.
      std::vector<double> target = init.probs[s];
      const double na = static_cast<double>(target.size());
      for (double& v : target) v = (1.0 - 1e-4) * v + 1e-4 / na;
      task.infosets.push_back(s);
      task.weights.push_back(1.0 / ns);
      task.targets.push_back(std::move(target));
    }
    training::TrainToMatch(model_.net(p), model_.mutable_embeddings()[p],
                           {task}, Options(config_.regularize_tolerance));
  }
  model_.Snapshot();
  if (parametric()) model_.InitBrHeads(pooling_.output_size());
  seen_.resize(n());
  for (int p = 0; p < n(); ++p) seen_[p].assign(game_->num_infosets(p), 0.0);
}

PayoffTensor Runner::Evaluate(const PayoffTensor* previous,
                              IterationRecord* record) {
  const PolicyLists policies = model_.Policies();
  if (!config_.use_estimator) {
    if (previous != nullptr && !parametric()) {
      return ExtendPayoffTensor(*game_, policies, *previous, eval_);
    }
    return EvaluatePayoffTensor(*game_, policies, eval_);
  }
  std::vector<int> shape;
  for (const auto& list : policies) shape.push_back(static_cast<int>(list.size()));
  const JointIndexer indexer(shape);
  std::vector<PayoffEstimator::Sample> samples;
  JointPolicyProfile profile(n());
  for (std::int64_t j = 0; j < indexer.size(); ++j) {
    const std::vector<int> joint = indexer.Unflatten(j);
    for (int p = 0; p < n(); ++p) profile[p] = policies[p][joint[p]];
    std::vector<double> mean(n(), 0.0);
    const PolicyLookup lookup = [&](int p, int s) -> std::span<const double> {
      return profile[p].probs[s];
    };
    for (int e = 0; e < config_.estimator_episodes_per_entry; ++e) {
      const std::vector<double> r = SampleEpisode(*game_, lookup, rng_);
      for (int p = 0; p < n(); ++p) mean[p] += r[p];
    }
    for (double& v : mean) v /= config_.estimator_episodes_per_entry;
    samples.push_back({joint, std::move(mean)});
  }
  const double loss = estimator_.Train(model_.embeddings(), samples,
                                       config_.estimator_steps);
  if (record != nullptr) record->extras["estimator_mse"] = loss;
  return estimator_.EstimateTensor(model_.embeddings(), shape);
}

void Runner::TabularIteration(const PolicyLists& ref, IterationRecord& record,
                              std::vector<double>& estimated, bool& gate_ok) {
  const bool exact_tensor = tensor_.provenance() != Provenance::kEstimated;
  for (int p = 0; p < n(); ++p) {
    BestResponseResult br = ExactMaxEntBestResponse(
        *game_, ref, MixtureFromDistribution(sigma_, p), record.values[p]);
    estimated.push_back(br.deviation_gain);
    model_.AddStrategy(p, std::move(br.policy));
  }
  if (exact_tensor) {
    record.deviation_gains = estimated;
  } else {
    for (int p = 0; p < n(); ++p) {
      record.extras["estimated_value_" + std::to_string(p)] = record.values[p];
      record.extras["estimated_gain_" + std::to_string(p)] = estimated[p];
      record.values[p] = BaselineByTraversal(*game_, ref, sigma_, p);
      record.deviation_gains.push_back(DeviationGain(*game_, ref, sigma_, p));
    }
  }
  for (double g : record.deviation_gains) record.cce_gap += g;
  gate_ok = true;
}

void Runner::GenerateEpisodes(int t, int count, const PolicyLists& ref,
                              const std::vector<TabularPolicy>& br_tables) {
  std::vector<const TabularPolicy*> acting(n());
  const PolicyLookup lookup = [&](int p, int s) -> std::span<const double> {
    return acting[p]->probs[s];
  };
  int br_player = -1;
  const VisitCallback on_visit = [&](int p, int s, int) {
    visits_.any[p][s] += 1.0;
    if (p == br_player) visits_.br[p][s] += 1.0;
  };
  for (int e = 0; e < count; ++e) {
    int tau = t - 1;
    if (t > 1 && UniformDouble(rng_) >= 0.5) {
      tau = static_cast<int>(rng_() % static_cast<std::uint64_t>(t - 1));
    }
    const JointDistribution& sigma = sigmas_[tau];
    const int j = SampleIndex(sigma.probs, rng_);
    br_player = -1;
    if (UniformDouble(rng_) < BrProbability(tau, t, config_.run.max_iterations)) {
      br_player = static_cast<int>(rng_() % static_cast<std::uint64_t>(n()));
    }
    for (int p = 0; p < n(); ++p) {
      acting[p] = p == br_player ? &br_tables[p]
                                 : &ref[p][sigma.indexer.Component(j, p)];
    }
    SampleEpisode(*game_, lookup, rng_, on_visit);
  }
}

void Runner::ParametricIteration(int t, const PolicyLists& ref,
                                 IterationRecord& record,
                                 std::vector<double>& estimated,
                                 bool& gate_ok) {
  const std::vector<double> baseline = record.values;
  const PayoffTensor* exact =
      tensor_.provenance() == Provenance::kExact ? &tensor_ : nullptr;
  for (int p = 0; p < n(); ++p) {
    if (exact == nullptr) {
      record.extras["estimated_value_" + std::to_string(p)] = baseline[p];
      record.values[p] = BaselineByTraversal(*game_, ref, sigma_, p);
    }
    record.deviation_gains.push_back(
        DeviationGain(*game_, ref, sigma_, p, exact));
    record.cce_gap += record.deviation_gains.back();
  }

  const EmbeddingSets v_hat = model_.reference_embeddings();
  std::vector<std::vector<double>> g(n());
  std::vector<CoPlayerMixture> mixtures;
  std::vector<TabularPolicy> targets;
  double truncated = 0.0;
  for (int p = 0; p < n(); ++p) {
    EncodeInfo info;
    g[p] = EncodeCoPlayers(v_hat, sigma_, p, config_.top_k, pooling_, &info);
    truncated = std::max(truncated, info.dropped_mass);
    mixtures.push_back(MixtureFromDistribution(sigma_, p));
    targets.push_back(
        ExactMaxEntBestResponse(*game_, ref, mixtures.back()).policy);
  }
  record.extras["truncated_mass"] = truncated;

  // Optional extra conditioning inputs: co-player priors ~ Dirichlet(1).
  std::vector<std::vector<training::HeadTask>> prior_tasks(n());
  if (config_.sample_priors) {
    std::gamma_distribution<double> gamma(1.0, 1.0);
    for (int p = 0; p < n(); ++p) {
      const std::int64_t size = sigma_.indexer.CoPlayerSize(p);
      if (size > 4096) continue;
      for (int k = 0; k < config_.prior_samples; ++k) {
        JointDistribution prior = sigma_;
        std::fill(prior.probs.begin(), prior.probs.end(), 0.0);
        std::vector<double> w(size);
        double total = 0.0;
        for (double& x : w) total += (x = gamma(rng_));
        for (std::int64_t c = 0; c < size; ++c) {
          prior.probs[sigma_.indexer.WithFocal(c, p, 0)] = w[c] / total;
        }
        training::HeadTask task;
        task.input = EncodeCoPlayers(v_hat, prior, p, config_.top_k, pooling_);
        const TabularPolicy target =
            ExactMaxEntBestResponse(*game_, ref,
                                    MixtureFromDistribution(prior, p))
                .policy;
        const int ns = game_->num_infosets(p);
        for (int s = 0; s < ns; ++s) {
          task.infosets.push_back(s);
          task.weights.push_back(1.0 / ns);
          task.targets.push_back(target.probs[s]);
        }
        prior_tasks[p].push_back(std::move(task));
      }
    }
  }

  std::vector<int> fresh(n());
  for (int p = 0; p < n(); ++p) fresh[p] = model_.AddStrategy(p);

  visits_.any.assign(n(), {});
  visits_.br.assign(n(), {});
  for (int p = 0; p < n(); ++p) {
    visits_.any[p].assign(game_->num_infosets(p), 0.0);
    visits_.br[p].assign(game_->num_infosets(p), 0.0);
  }
  std::vector<double> head_kl(n(), 0.0);
  for (int round = 0; round < config_.episode_rounds; ++round) {
    std::vector<TabularPolicy> br_tables;
    for (int p = 0; p < n(); ++p) {
      br_tables.push_back(model_.br_head(p).Extract(g[p]));
    }
    const int count = config_.episodes_per_iteration / config_.episode_rounds +
                      (round < config_.episodes_per_iteration %
                                   config_.episode_rounds
                           ? 1
                           : 0);
    GenerateEpisodes(t, count, ref, br_tables);
    for (int p = 0; p < n(); ++p) {
      std::vector<training::HeadTask> tasks = prior_tasks[p];
      training::HeadTask task;
      task.input = g[p];
      task.weights = Normalized(visits_.br[p], &task.infosets);
      for (int s : task.infosets) task.targets.push_back(targets[p].probs[s]);
      tasks.push_back(std::move(task));
      head_kl[p] = training::TrainHead(model_.br_head(p), tasks,
                                       Options(config_.distill_threshold));
    }
  }

  for (int p = 0; p < n(); ++p) {
    const std::string tag = "_" + std::to_string(p);
    const TabularPolicy pi = model_.br_head(p).Extract(g[p]);
    const double value = ValueAgainstMixture(*game_, ref, mixtures[p], pi);
    estimated.push_back(std::max(value - baseline[p], 0.0));

    std::vector<training::MatchTask> tasks;
    training::MatchTask distill;
    distill.strategy = fresh[p];
    distill.gated = true;
    distill.weights = Normalized(visits_.br[p], &distill.infosets);
    for (double& w : distill.weights) w *= config_.distill_weight;
    for (int s : distill.infosets) distill.targets.push_back(pi.probs[s]);
    tasks.push_back(std::move(distill));
    // Prior strategies are pinned on every infoset visited so far, weighted
    // by this iteration's visit frequency plus a uniform floor.
    std::vector<int> reach;
    std::vector<double> freq;
    std::vector<int> now;
    const std::vector<double> current = Normalized(visits_.any[p], &now);
    for (int s = 0; s < game_->num_infosets(p); ++s) {
      seen_[p][s] += visits_.any[p][s];
      if (seen_[p][s] > 0.0) reach.push_back(s);
    }
    for (int s : reach) {
      const auto it = std::find(now.begin(), now.end(), s);
      const double w = it == now.end() ? 0.0 : current[it - now.begin()];
      freq.push_back(0.5 * w + 0.5 / static_cast<double>(reach.size()));
    }
    std::vector<training::MatchTask> priors;
    for (int k = 0; k < fresh[p]; ++k) {
      training::MatchTask task;
      task.strategy = k;
      task.infosets = reach;
      for (double w : freq) task.weights.push_back(w * config_.regularize_weight);
      for (int s : reach) task.targets.push_back(ref[p][k].probs[s]);
      priors.push_back(std::move(task));
    }
    if (config_.regularize) {
      tasks.insert(tasks.end(), priors.begin(), priors.end());
    }
    const training::MatchOutcome out = training::TrainToMatch(
        model_.net(p), model_.mutable_embeddings()[p], tasks,
        Options(config_.regularize
                    ? config_.regularize_tolerance
                    : std::numeric_limits<double>::infinity()));
    const training::MatchOutcome drift = training::EvaluateMatch(
        model_.net(p), model_.embeddings()[p], priors);
    if (out.gated_kl > config_.distill_threshold) gate_ok = false;
    record.extras["estimated_gain" + tag] = estimated.back();
    record.extras["br_head_kl" + tag] = head_kl[p];
    record.extras["distill_kl" + tag] = out.gated_kl;
    record.extras["prior_drift" + tag] = drift.ungated_kl;
    record.extras["train_steps" + tag] = out.steps;
  }
}

NeuplResult Runner::Run() {
  config_.Validate();
  InitPopulation();
  tensor_ = Evaluate(nullptr, nullptr);
  sigma_ = SolveCce(tensor_, config_.run.objective, config_.run.solver_epsilon,
                    config_.run.solver, &info_);
  sigmas_.push_back(sigma_);

  RunResult result;
  result.game = game_;
  const int max_t = config_.run.max_iterations;
  for (int t = 1; t <= max_t; ++t) {
    const auto start = std::chrono::steady_clock::now();
    model_.set_iteration(t);
    model_.Snapshot();
    const PolicyLists ref = model_.ReferencePolicies();
    IterationRecord record;
    record.iteration = t;
    record.values = ExpectedValues(tensor_, sigma_);
    record.restricted_deviation = MaxRestrictedDeviation(tensor_, sigma_);
    record.solver_method = info_.method;
    record.solver_iterations = info_.iterations;
    record.solver_repaired = info_.repaired;
    for (int p = 0; p < n(); ++p) {
      record.population_sizes.push_back(static_cast<int>(ref[p].size()));
    }
    std::vector<double> estimated;
    bool gate_ok = true;
    if (parametric()) {
      ParametricIteration(t, ref, record, estimated, gate_ok);
    } else {
      visits_ = {};
      TabularIteration(ref, record, estimated, gate_ok);
    }
    if (observer_) observer_(t, model_, visits_);
    const double max_gain = *std::max_element(estimated.begin(), estimated.end());
    const bool done = gate_ok && max_gain < config_.run.termination_epsilon &&
                      !config_.run_all_iterations;
    if (!done && t < max_t) {
      tensor_ = Evaluate(&tensor_, &record);
      sigma_ = SolveCce(tensor_, config_.run.objective,
                        config_.run.solver_epsilon, config_.run.solver, &info_);
      sigmas_.push_back(sigma_);
    } else {
      model_.RestoreReference();
    }
    record.wall_time_seconds = Seconds(start);
    result.records.push_back(std::move(record));
    if (done) {
      result.terminated = true;
      result.stop_reason = "converged";
      break;
    }
  }
  if (!result.terminated) result.stop_reason = "iteration_limit";
  result.policies = model_.Policies();
  result.sigma = sigma_;
  result.sigmas = sigmas_;
  return NeuplResult{std::move(result), std::move(model_)};
}

}  // namespace

NeuplResult NeuplJpsroRun(const NeuplConfig& config,
                          const IterationObserver& observer) {
  config.Validate();
  Runner runner(config, observer);
  return runner.Run();
}

}  // namespace jpsro
