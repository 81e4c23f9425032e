#ifndef LEXDECOMP_MODEL_HPP
#define LEXDECOMP_MODEL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lexdecomp/composer.hpp"
#include "lexdecomp/decomposer.hpp"
#include "lexdecomp/embeddings.hpp"
#include "lexdecomp/matcher.hpp"
#include "lexdecomp/numerics.hpp"

namespace lexdecomp {

// Everything a run needs to be reproduced; serialized verbatim into
// checkpoints. Defaults follow the configuration selected by the ablations:
// local-3 matching, orthogonal decomposition, win-3 filters with 500 each.
struct ModelConfig {
  MatchStrategy match;
  DecompStrategy decomp;
  std::vector<FilterGroup> filter_groups = {{1, 500}, {2, 500}, {3, 500}};
  std::size_t dim = 300;
  OovPolicy oov = OovPolicy::hash_random;
  bool lowercase = true;
  std::uint64_t seed = 42;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;

  void validate() const;
  std::size_t total_filters() const;
  std::size_t feature_length() const;  // concatenated [S; T] length

  // count' = max(1, round(count * factor)) per group
  void scale_filters(double factor);

  std::string serialize() const;
  // Unknown keys are an error unless an extras map is supplied to collect
  // them (checkpoints append bookkeeping keys after the config).
  static ModelConfig deserialize(
      const std::string& text,
      std::map<std::string, std::string>* extras = nullptr);
};

struct Model {
  FilterBank bank;
  std::vector<double> output_weights;  // length = feature_length
  double output_bias = 0.0;
  ModelConfig config;

  // Filters seeded from config.seed; the output layer starts at zero, so a
  // fresh model scores 0.5 everywhere.
  static Model init(const ModelConfig& config);
  void validate() const;

  std::size_t param_count() const;
  // Flat parameter order matches the checkpoint layout: filter weights in
  // group order, then biases, output weights, output bias.
  std::vector<double> pack_params() const;
  void unpack_params(std::span<const double> flat);
};

struct TrainingInstance {
  std::vector<std::string> s_tokens;
  std::vector<std::string> t_tokens;
  int label = 0;  // 1 = similar / correct answer
};

// Fixed per-instance feature map: with frozen embeddings the whole pipeline
// ahead of the CNN is constant, so it is computed once per instance.
struct PairFeatures {
  Matrix s_plus, s_minus;
  Matrix t_plus, t_minus;
};

// All pipeline intermediates for one pair; the inspect command prints these.
struct PairAnalysis {
  SentenceMatrix s, t;
  SimilarityMatrix a;
  MatchResult s_match, t_match;
  DecomposedPair decomposed;
};

PairAnalysis analyze_pair(const ModelConfig& config, const EmbeddingStore& store,
                          const std::vector<std::string>& s_tokens,
                          const std::vector<std::string>& t_tokens);

PairFeatures pair_features(const ModelConfig& config, const EmbeddingStore& store,
                           const std::vector<std::string>& s_tokens,
                           const std::vector<std::string>& t_tokens);

double sigmoid(double x);

// sim(S, T) through the full pipeline; strictly inside (0, 1).
double score(const Model& model, const EmbeddingStore& store,
             const std::vector<std::string>& s_tokens,
             const std::vector<std::string>& t_tokens);
double score_features(const Model& model, const PairFeatures& features);

// Negative log-likelihood, summed over instances; predictions are clipped
// to [eps, 1-eps] before the logs.
inline constexpr double kPredictionClip = 1e-7;
double loss(const std::vector<double>& predictions,
            const std::vector<int>& labels);

struct ModelGrads {
  FilterBankGrad bank;
  std::vector<double> output_weights;
  double output_bias = 0.0;

  static ModelGrads zeros_like(const Model& model);
  std::vector<double> pack() const;  // same order as Model::pack_params
};

// Analytic gradients of the summed loss over a batch w.r.t. every trainable
// parameter (filters, filter biases, output layer). Embeddings and the
// matching/decomposition stages carry no trainable parameters.
ModelGrads gradients(const Model& model, const EmbeddingStore& store,
                     const std::vector<TrainingInstance>& batch);

struct BatchResult {
  ModelGrads grads;
  double total_loss = 0.0;
};
BatchResult eval_batch(const Model& model,
                       const std::vector<PairFeatures>& features,
                       const std::vector<int>& labels);

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double wall_time_s = 0.0;
  std::optional<double> dev_metric;
};

struct TrainResult {
  Model model;       // after the last epoch
  Model best_model;  // best dev metric (== model when no dev evaluation)
  std::size_t best_epoch = 0;  // 1-based
  std::vector<EpochLog> log;
};

// Called after each epoch with the current model; returns the dev metric
// used for best-epoch selection (higher is better).
using DevEval = std::function<double(const Model&)>;

// Adam over shuffled mini-batches for config.epochs epochs. The embedding
// store is read-only throughout. Deterministic given (seed, config, data).
TrainResult train(const Model& initial, const EmbeddingStore& store,
                  const std::vector<TrainingInstance>& data,
                  const ModelConfig& config, const DevEval& dev_eval = nullptr,
                  std::ostream* progress = nullptr);

// Stable sub-seed for independent random streams (init vs shuffling).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace lexdecomp

#endif
