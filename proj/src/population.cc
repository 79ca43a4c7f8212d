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

#include "jpsro/population.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace jpsro {

PopulationMode ParsePopulationMode(const std::string& name) {
  if (name == "tabular_exact") return PopulationMode::kTabularExact;
  if (name == "shared_parametric") return PopulationMode::kSharedParametric;
  throw InvalidArgument("unknown population mode: " + name);
}

std::string PopulationModeName(PopulationMode mode) {
  return mode == PopulationMode::kTabularExact ? "tabular_exact"
                                               : "shared_parametric";
}

void ParametricOptions::Validate() const {
  if (embedding_dim < 1) throw InvalidArgument("embedding_dim must be >= 1");
  if (hash_buckets < 0) throw InvalidArgument("hash_buckets must be >= 0");
  if (hash_buckets > 0 && hash_features < 1) {
    throw InvalidArgument("hash_features must be >= 1");
  }
  if (!(weight_scale >= 0.0) || !std::isfinite(weight_scale)) {
    throw InvalidArgument("weight_scale must be finite and nonnegative");
  }
}

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> Softmax(const std::vector<double>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (size_t a = 0; a < logits.size(); ++a) {
    p[a] = std::exp(logits[a] - m);
    z += p[a];
  }
  for (double& v : p) v /= z;
  return p;
}

ConditionalPolicyNet::ConditionalPolicyNet(const ExtensiveGame& game,
                                           int player, int input_dim,
                                           const ParametricOptions& options,
                                           std::mt19937_64& rng)
    : player_(player),
      input_dim_(input_dim),
      max_actions_(game.max_actions(player)) {
  options.Validate();
  const int ns = game.num_infosets(player);
  num_buckets_ = options.hash_buckets > 0 ? options.hash_buckets : ns;
  for (int s = 0; s < ns; ++s) {
    const Infoset& info = game.infoset(player, s);
    num_actions_.push_back(info.num_actions());
    std::vector<std::pair<int, double>> f;
    if (options.hash_buckets == 0) {
      f.emplace_back(s, 1.0);
    } else {
      for (int j = 0; j < options.hash_features; ++j) {
        const std::uint64_t h = Fnv1a(std::to_string(j) + "#" + info.key);
        f.emplace_back(static_cast<int>(h % options.hash_buckets),
                       (h >> 63) != 0 ? -1.0 : 1.0);
      }
    }
    features_.push_back(std::move(f));
  }
  const int block = max_actions_ * (input_dim_ + 1);
  params_.assign(static_cast<size_t>(num_buckets_) * block, 0.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int b = 0; b < num_buckets_; ++b) {
    for (int a = 0; a < max_actions_; ++a) {
      for (int i = 0; i < input_dim_; ++i) {
        params_[b * block + a * input_dim_ + i] =
            options.weight_scale * normal(rng);
      }
    }
  }
}

std::vector<double> ConditionalPolicyNet::Logits(
    int infoset, const std::vector<double>& x) const {
  const int na = num_actions_[infoset];
  const int block = max_actions_ * (input_dim_ + 1);
  std::vector<double> z(na, 0.0);
  for (const auto& [b, sign] : features_[infoset]) {
    const double* w = params_.data() + b * block;
    const double* c = w + max_actions_ * input_dim_;
    for (int a = 0; a < na; ++a) {
      double v = c[a];
      for (int i = 0; i < input_dim_; ++i) v += w[a * input_dim_ + i] * x[i];
      z[a] += sign * v;
    }
  }
  return z;
}

std::vector<double> ConditionalPolicyNet::Probs(
    int infoset, const std::vector<double>& x) const {
  return Softmax(Logits(infoset, x));
}

void ConditionalPolicyNet::Backward(int infoset, const std::vector<double>& x,
                                    const std::vector<double>& dlogits,
                                    std::vector<double>& dparams,
                                    std::vector<double>* dx) const {
  const int na = num_actions_[infoset];
  const int block = max_actions_ * (input_dim_ + 1);
  for (const auto& [b, sign] : features_[infoset]) {
    const double* w = params_.data() + b * block;
    double* dw = dparams.data() + b * block;
    double* dc = dw + max_actions_ * input_dim_;
    for (int a = 0; a < na; ++a) {
      const double g = sign * dlogits[a];
      if (g == 0.0) continue;
      dc[a] += g;
      for (int i = 0; i < input_dim_; ++i) {
        dw[a * input_dim_ + i] += g * x[i];
        if (dx != nullptr) (*dx)[i] += g * w[a * input_dim_ + i];
      }
    }
  }
}

TabularPolicy ConditionalPolicyNet::Extract(const std::vector<double>& x) const {
  TabularPolicy pi;
  pi.player = player_;
  for (size_t s = 0; s < num_actions_.size(); ++s) {
    pi.probs.push_back(Probs(static_cast<int>(s), x));
  }
  return pi;
}

PopulationModel::PopulationModel(GamePtr game, PopulationMode mode,
                                 const ParametricOptions& options,
                                 std::uint64_t seed)
    : game_(std::move(game)),
      mode_(mode),
      options_(options),
      seed_(seed),
      rng_(seed) {
  if (!game_) throw InvalidArgument("population needs a game");
  options_.Validate();
  const int n = game_->num_players();
  embeddings_.resize(n);
  tables_.resize(n);
  if (mode_ == PopulationMode::kSharedParametric) {
    for (int p = 0; p < n; ++p) {
      nets_.emplace_back(*game_, p, options_.embedding_dim, options_, rng_);
    }
  }
  Snapshot();
}

int PopulationModel::AddStrategy(int player, TabularPolicy table) {
  if (player < 0 || player >= num_players()) {
    throw InvalidArgument("player out of range");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Embedding e(options_.embedding_dim);
  for (double& v : e) v = normal(rng_);
  embeddings_[player].push_back(std::move(e));
  if (mode_ == PopulationMode::kTabularExact) {
    ValidatePolicy(*game_, table);
    tables_[player].push_back(std::move(table));
  }
  return num_strategies(player) - 1;
}

void PopulationModel::InitBrHeads(int input_dim) {
  if (mode_ != PopulationMode::kSharedParametric) {
    throw InvalidArgument("best-response heads require shared_parametric mode");
  }
  br_heads_.clear();
  ParametricOptions head = options_;
  for (int p = 0; p < num_players(); ++p) {
    br_heads_.emplace_back(*game_, p, input_dim, head, rng_);
  }
}

void PopulationModel::RestoreReference() {
  embeddings_ = ref_embeddings_;
  tables_ = ref_tables_;
  nets_ = ref_nets_;
}

void PopulationModel::SetTable(int player, int strategy, TabularPolicy table) {
  if (mode_ != PopulationMode::kTabularExact) {
    throw InvalidArgument("SetTable requires tabular_exact mode");
  }
  ValidatePolicy(*game_, table);
  tables_.at(player).at(strategy) = std::move(table);
}

TabularPolicy PopulationModel::Policy(int player, int strategy) const {
  if (strategy < 0 || strategy >= num_strategies(player)) {
    throw InvalidArgument("unknown strategy index");
  }
  if (mode_ == PopulationMode::kTabularExact) return tables_[player][strategy];
  return nets_[player].Extract(embeddings_[player][strategy]);
}

TabularPolicy PopulationModel::ReferencePolicy(int player, int strategy) const {
  if (strategy < 0 ||
      strategy >= static_cast<int>(ref_embeddings_[player].size())) {
    throw InvalidArgument("unknown reference strategy index");
  }
  if (mode_ == PopulationMode::kTabularExact) {
    return ref_tables_[player][strategy];
  }
  return ref_nets_[player].Extract(ref_embeddings_[player][strategy]);
}

PolicyLists PopulationModel::Policies() const {
  PolicyLists out(num_players());
  for (int p = 0; p < num_players(); ++p) {
    for (int k = 0; k < num_strategies(p); ++k) out[p].push_back(Policy(p, k));
  }
  return out;
}

PolicyLists PopulationModel::ReferencePolicies() const {
  PolicyLists out(num_players());
  for (int p = 0; p < num_players(); ++p) {
    for (size_t k = 0; k < ref_embeddings_[p].size(); ++k) {
      out[p].push_back(ReferencePolicy(p, static_cast<int>(k)));
    }
  }
  return out;
}

void PopulationModel::Snapshot() {
  ref_embeddings_ = embeddings_;
  ref_tables_ = tables_;
  ref_nets_ = nets_;
}

bool PopulationModel::operator==(const PopulationModel& o) const {
  return game_->StructurallyEqual(*o.game_) && mode_ == o.mode_ &&
         options_ == o.options_ && seed_ == o.seed_ && rng_ == o.rng_ &&
         iteration_ == o.iteration_ && embeddings_ == o.embeddings_ &&
         ref_embeddings_ == o.ref_embeddings_ && tables_ == o.tables_ &&
         ref_tables_ == o.ref_tables_ && nets_ == o.nets_ &&
         ref_nets_ == o.ref_nets_ && br_heads_ == o.br_heads_;
}

namespace {

constexpr char kMagic[8] = {'J', 'P', 'S', 'R', 'O', 'P', 'O', 'P'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void U64(std::uint64_t v) { Raw(&v, sizeof v); }
  void I64(std::int64_t v) { Raw(&v, sizeof v); }
  void F64(double v) { Raw(&v, sizeof v); }
  void Str(const std::string& s) {
    U64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void Vec(const std::vector<double>& v) {
    U64(v.size());
    for (double x : v) F64(x);
  }
  void Sets(const EmbeddingSets& sets) {
    U64(sets.size());
    for (const auto& list : sets) {
      U64(list.size());
      for (const auto& e : list) Vec(e);
    }
  }
  void Tables(const PolicyLists& lists) {
    U64(lists.size());
    for (const auto& list : lists) {
      U64(list.size());
      for (const auto& pi : list) {
        I64(pi.player);
        U64(pi.probs.size());
        for (const auto& d : pi.probs) Vec(d);
      }
    }
  }

 private:
  void Raw(const void* p, size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  std::uint64_t U64() {
    std::uint64_t v;
    Raw(&v, sizeof v);
    return v;
  }
  std::int64_t I64() {
    std::int64_t v;
    Raw(&v, sizeof v);
    return v;
  }
  double F64() {
    double v;
    Raw(&v, sizeof v);
    return v;
  }
  std::uint64_t Count() {
    const std::uint64_t n = U64();
    if (n > (1ULL << 32)) throw InvalidArgument("corrupt checkpoint length");
    return n;
  }
  std::string Str() {
    std::string s(Count(), '\0');
    Raw(s.data(), s.size());
    return s;
  }
  std::vector<double> Vec() {
    std::vector<double> v(Count());
    for (double& x : v) x = F64();
    return v;
  }
  EmbeddingSets Sets() {
    EmbeddingSets sets(Count());
    for (auto& list : sets) {
      list.resize(Count());
      for (auto& e : list) e = Vec();
    }
    return sets;
  }
  PolicyLists Tables() {
    PolicyLists lists(Count());
    for (auto& list : lists) {
      list.resize(Count());
      for (auto& pi : list) {
        pi.player = static_cast<int>(I64());
        pi.probs.resize(Count());
        for (auto& d : pi.probs) d = Vec();
      }
    }
    return lists;
  }
  void Raw(void* p, size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) {
      throw InvalidArgument("truncated checkpoint");
    }
  }

 private:
  std::istream& in_;
};

}  // namespace

void PopulationModel::Save(std::ostream& out) const {
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.U64(kVersion);
  w.Str(game_->spec().ToString());
  w.U64(mode_ == PopulationMode::kTabularExact ? 0 : 1);
  w.I64(options_.embedding_dim);
  w.I64(options_.hash_buckets);
  w.I64(options_.hash_features);
  w.F64(options_.weight_scale);
  w.U64(seed_);
  std::ostringstream rng_state;
  rng_state << rng_;
  w.Str(rng_state.str());
  w.I64(iteration_);
  w.Sets(embeddings_);
  w.Sets(ref_embeddings_);
  w.Tables(tables_);
  w.Tables(ref_tables_);
  w.U64(nets_.size());
  for (size_t p = 0; p < nets_.size(); ++p) {
    w.Vec(nets_[p].params());
    w.Vec(ref_nets_[p].params());
  }
  w.U64(br_heads_.size());
  for (const ConditionalPolicyNet& head : br_heads_) {
    w.I64(head.input_dim());
    w.Vec(head.params());
  }
}

PopulationModel PopulationModel::Load(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic ||
      std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw InvalidArgument("not a population checkpoint");
  }
  Reader r(in);
  if (r.U64() != kVersion) {
    throw InvalidArgument("unsupported checkpoint version");
  }
  GamePtr game = BuildGame(r.Str());
  const std::uint64_t mode = r.U64();
  if (mode > 1) throw InvalidArgument("corrupt checkpoint mode");
  ParametricOptions options;
  options.embedding_dim = static_cast<int>(r.I64());
  options.hash_buckets = static_cast<int>(r.I64());
  options.hash_features = static_cast<int>(r.I64());
  options.weight_scale = r.F64();
  const std::uint64_t seed = r.U64();
  PopulationModel model(game,
                        mode == 0 ? PopulationMode::kTabularExact
                                  : PopulationMode::kSharedParametric,
                        options, seed);
  std::istringstream rng_state(r.Str());
  rng_state >> model.rng_;
  if (!rng_state) throw InvalidArgument("corrupt checkpoint rng state");
  model.iteration_ = static_cast<int>(r.I64());
  model.embeddings_ = r.Sets();
  model.ref_embeddings_ = r.Sets();
  model.tables_ = r.Tables();
  model.ref_tables_ = r.Tables();
  const int n = game->num_players();
  if (static_cast<int>(model.embeddings_.size()) != n ||
      static_cast<int>(model.ref_embeddings_.size()) != n ||
      static_cast<int>(model.tables_.size()) != n ||
      static_cast<int>(model.ref_tables_.size()) != n) {
    throw InvalidArgument("checkpoint arity does not match the game");
  }
  for (int p = 0; p < n; ++p) {
    for (const auto* sets : {&model.embeddings_, &model.ref_embeddings_}) {
      for (const Embedding& e : (*sets)[p]) {
        if (static_cast<int>(e.size()) != options.embedding_dim) {
          throw InvalidArgument("checkpoint embedding has the wrong size");
        }
      }
    }
    if (model.mode_ == PopulationMode::kTabularExact) {
      for (const auto* lists : {&model.tables_, &model.ref_tables_}) {
        for (const auto& pi : (*lists)[p]) ValidatePolicy(*game, pi);
      }
    }
  }
  const std::uint64_t nets = r.U64();
  if (nets != model.nets_.size()) {
    throw InvalidArgument("checkpoint network count mismatch");
  }
  for (size_t p = 0; p < nets; ++p) {
    std::vector<double> live = r.Vec();
    std::vector<double> ref = r.Vec();
    if (live.size() != model.nets_[p].params().size() ||
        ref.size() != live.size()) {
      throw InvalidArgument("checkpoint parameter size mismatch");
    }
    model.nets_[p].params() = std::move(live);
    model.ref_nets_[p].params() = std::move(ref);
  }
  const std::uint64_t heads = r.U64();
  if (heads != 0 && (heads != static_cast<std::uint64_t>(n) ||
                     model.mode_ != PopulationMode::kSharedParametric)) {
    throw InvalidArgument("checkpoint head count mismatch");
  }
  for (std::uint64_t p = 0; p < heads; ++p) {
    const std::int64_t dim = r.I64();
    if (dim < 1 || dim > (1 << 20)) {
      throw InvalidArgument("corrupt checkpoint head dimension");
    }
    std::mt19937_64 unused(0);
    ConditionalPolicyNet head(*game, static_cast<int>(p),
                              static_cast<int>(dim), options, unused);
    std::vector<double> params = r.Vec();
    if (params.size() != head.params().size()) {
      throw InvalidArgument("checkpoint head size mismatch");
    }
    head.params() = std::move(params);
    model.br_heads_.push_back(std::move(head));
  }
  return model;
}

}  // namespace jpsro
