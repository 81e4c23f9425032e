#include "lexdecomp/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  fail(ErrorKind::config, "bad boolean '" + value + "' for " + key);
}

}  // namespace

void ModelConfig::validate() const {
  match.validate();
  if (decomp.kind == DecompKind::rigid && match.kind != MatchKind::max) {
    fail(ErrorKind::config,
         "rigid decomposition requires the max matching function (got " +
             match.to_string() + ")");
  }
  if (dim < 1) fail(ErrorKind::config, "embedding dim must be >= 1");
  if (filter_groups.empty()) {
    fail(ErrorKind::config, "at least one filter group is required");
  }
  for (const auto& g : filter_groups) {
    if (g.window < 1 || g.count < 1) {
      fail(ErrorKind::config, "filter groups need window >= 1 and count >= 1");
    }
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorKind::config, "learning rate must be positive and finite");
  }
  if (batch_size < 1) fail(ErrorKind::config, "batch size must be >= 1");
}

std::size_t ModelConfig::total_filters() const {
  std::size_t n = 0;
  for (const auto& g : filter_groups) n += g.count;
  return n;
}

std::size_t ModelConfig::feature_length() const { return 2 * total_filters(); }

void ModelConfig::scale_filters(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    fail(ErrorKind::config, "scale factor must be positive and finite");
  }
  for (auto& g : filter_groups) {
    auto scaled = static_cast<long long>(
        std::llround(static_cast<double>(g.count) * factor));
    g.count = static_cast<std::size_t>(std::max(1LL, scaled));
  }
}

std::string ModelConfig::serialize() const {
  std::ostringstream out;
  out << "match = " << match_kind_name(match.kind) << "\n";
  out << "window = " << match.window << "\n";
  out << "decomp = " << decomp_kind_name(decomp.kind) << "\n";
  out << "clamp_alpha = " << (decomp.clamp_alpha ? "true" : "false") << "\n";
  out << "filters = " << filter_groups_to_string(filter_groups) << "\n";
  out << "dim = " << dim << "\n";
  out << "oov = " << oov_policy_name(oov) << "\n";
  out << "lowercase = " << (lowercase ? "true" : "false") << "\n";
  out << "seed = " << seed << "\n";
  out << "learning_rate = " << format_double(learning_rate) << "\n";
  out << "batch_size = " << batch_size << "\n";
  out << "epochs = " << epochs << "\n";
  return out.str();
}

ModelConfig ModelConfig::deserialize(
    const std::string& text, std::map<std::string, std::string>* extras) {
  ModelConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::config, "config line " + std::to_string(line_no) +
                                  " is not 'key = value': " + stripped);
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "match") config.match.kind = match_kind_from_string(value);
      else if (key == "window") config.match.window = std::stoull(value);
      else if (key == "decomp") config.decomp.kind = decomp_kind_from_string(value);
      else if (key == "clamp_alpha") config.decomp.clamp_alpha = parse_bool(value, key);
      else if (key == "filters") config.filter_groups = parse_filter_groups(value);
      else if (key == "dim") config.dim = std::stoull(value);
      else if (key == "oov") config.oov = oov_policy_from_string(value);
      else if (key == "lowercase") config.lowercase = parse_bool(value, key);
      else if (key == "seed") config.seed = std::stoull(value);
      else if (key == "learning_rate") config.learning_rate = std::stod(value);
      else if (key == "batch_size") config.batch_size = std::stoull(value);
      else if (key == "epochs") config.epochs = std::stoull(value);
      else if (extras) (*extras)[key] = value;
      else fail(ErrorKind::config, "unknown config key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorKind::config, "bad value '" + value + "' for " + key);
    }
  }
  return config;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  unsigned char bytes[16];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(seed >> (8 * i));
  for (int i = 0; i < 8; ++i) bytes[8 + i] = static_cast<unsigned char>(stream >> (8 * i));
  return fnv1a(std::span<const unsigned char>(bytes, 16));
}

Model Model::init(const ModelConfig& config) {
  config.validate();
  Model model;
  model.config = config;
  Rng rng(derive_seed(config.seed, 0));
  model.bank = FilterBank::init(config.dim, config.filter_groups, rng);
  model.output_weights.assign(config.feature_length(), 0.0);
  model.output_bias = 0.0;
  return model;
}

void Model::validate() const {
  config.validate();
  bank.validate();
  if (bank.dim != config.dim || bank.total_filters() != config.total_filters()) {
    fail(ErrorKind::dimension_mismatch,
         "filter bank does not match the configuration");
  }
  if (output_weights.size() != config.feature_length()) {
    fail(ErrorKind::dimension_mismatch,
         "output weights have length " + std::to_string(output_weights.size()) +
             ", expected " + std::to_string(config.feature_length()));
  }
  for (double w : output_weights) {
    if (!std::isfinite(w)) {
      fail(ErrorKind::invalid_argument, "output weights contain non-finite values");
    }
  }
  if (!std::isfinite(output_bias)) {
    fail(ErrorKind::invalid_argument, "output bias is non-finite");
  }
}

std::size_t Model::param_count() const {
  return bank.weight_count() + bank.biases.size() + output_weights.size() + 1;
}

std::vector<double> Model::pack_params() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (const auto& w : bank.weights) {
    flat.insert(flat.end(), w.data().begin(), w.data().end());
  }
  flat.insert(flat.end(), bank.biases.begin(), bank.biases.end());
  flat.insert(flat.end(), output_weights.begin(), output_weights.end());
  flat.push_back(output_bias);
  return flat;
}

void Model::unpack_params(std::span<const double> flat) {
  if (flat.size() != param_count()) {
    fail(ErrorKind::dimension_mismatch,
         "flat parameter vector has length " + std::to_string(flat.size()) +
             ", expected " + std::to_string(param_count()));
  }
  std::size_t pos = 0;
  for (auto& w : bank.weights) {
    std::copy(flat.begin() + pos, flat.begin() + pos + w.size(), w.data().begin());
    pos += w.size();
  }
  std::copy(flat.begin() + pos, flat.begin() + pos + bank.biases.size(),
            bank.biases.begin());
  pos += bank.biases.size();
  std::copy(flat.begin() + pos, flat.begin() + pos + output_weights.size(),
            output_weights.begin());
  pos += output_weights.size();
  output_bias = flat[pos];
}

PairAnalysis analyze_pair(const ModelConfig& config, const EmbeddingStore& store,
                          const std::vector<std::string>& s_tokens,
                          const std::vector<std::string>& t_tokens) {
  config.validate();
  PairAnalysis out;
  out.s = embed_sentence(store, s_tokens, config.lowercase);
  out.t = embed_sentence(store, t_tokens, config.lowercase);
  out.a = similarity_matrix(out.s, out.t);
  out.s_match = match(out.s, out.t, out.a, config.match);
  out.t_match = match(out.t, out.s, out.a.transposed(), config.match);
  auto s_parts = decompose(out.s, out.s_match, config.decomp);
  auto t_parts = decompose(out.t, out.t_match, config.decomp);
  out.decomposed = {std::move(s_parts.first), std::move(s_parts.second),
                    std::move(t_parts.first), std::move(t_parts.second)};
  return out;
}

PairFeatures pair_features(const ModelConfig& config, const EmbeddingStore& store,
                           const std::vector<std::string>& s_tokens,
                           const std::vector<std::string>& t_tokens) {
  PairAnalysis analysis = analyze_pair(config, store, s_tokens, t_tokens);
  return {std::move(analysis.decomposed.s_plus),
          std::move(analysis.decomposed.s_minus),
          std::move(analysis.decomposed.t_plus),
          std::move(analysis.decomposed.t_minus)};
}

double sigmoid(double x) {
  double p;
  if (x >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-x));
  } else {
    double e = std::exp(x);
    p = e / (1.0 + e);
  }
  // keep the open interval even where exp saturates
  if (p <= 0.0) p = std::numeric_limits<double>::min();
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  return p;
}

namespace {

double head_logit(const Model& model, std::span<const double> s_features,
                  std::span<const double> t_features) {
  const std::size_t f = s_features.size();
  double logit = model.output_bias;
  for (std::size_t i = 0; i < f; ++i) logit += model.output_weights[i] * s_features[i];
  for (std::size_t i = 0; i < f; ++i) logit += model.output_weights[f + i] * t_features[i];
  return logit;
}

}  // namespace

double score_features(const Model& model, const PairFeatures& features) {
  model.validate();
  FeatureVector s_vec = compose(features.s_plus, features.s_minus, model.bank);
  FeatureVector t_vec = compose(features.t_plus, features.t_minus, model.bank);
  return sigmoid(head_logit(model, s_vec.values, t_vec.values));
}

double score(const Model& model, const EmbeddingStore& store,
             const std::vector<std::string>& s_tokens,
             const std::vector<std::string>& t_tokens) {
  if (store.dim() != model.config.dim) {
    fail(ErrorKind::dimension_mismatch,
         "embedding store dim " + std::to_string(store.dim()) +
             " does not match model dim " + std::to_string(model.config.dim));
  }
  PairFeatures features = pair_features(model.config, store, s_tokens, t_tokens);
  return score_features(model, features);
}

double loss(const std::vector<double>& predictions,
            const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) {
    fail(ErrorKind::dimension_mismatch,
         "got " + std::to_string(predictions.size()) + " predictions for " +
             std::to_string(labels.size()) + " labels");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      fail(ErrorKind::invalid_argument,
           "label " + std::to_string(labels[i]) + " is not binary");
    }
    double p = std::clamp(predictions[i], kPredictionClip, 1.0 - kPredictionClip);
    total -= labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return total;
}

ModelGrads ModelGrads::zeros_like(const Model& model) {
  ModelGrads g;
  g.bank = FilterBankGrad::zeros_like(model.bank);
  g.output_weights.assign(model.output_weights.size(), 0.0);
  g.output_bias = 0.0;
  return g;
}

std::vector<double> ModelGrads::pack() const {
  std::vector<double> flat;
  for (const auto& w : bank.weights) {
    flat.insert(flat.end(), w.data().begin(), w.data().end());
  }
  flat.insert(flat.end(), bank.biases.begin(), bank.biases.end());
  flat.insert(flat.end(), output_weights.begin(), output_weights.end());
  flat.push_back(output_bias);
  return flat;
}

BatchResult eval_batch(const Model& model,
                       const std::vector<PairFeatures>& features,
                       const std::vector<int>& labels) {
  if (features.size() != labels.size()) {
    fail(ErrorKind::dimension_mismatch, "feature/label counts differ");
  }
  if (features.empty()) {
    fail(ErrorKind::invalid_argument, "batch is empty");
  }

  BatchResult result;
  result.grads = ModelGrads::zeros_like(model);
  const std::size_t f = model.bank.total_filters();
  std::vector<double> d_features(f);

  for (std::size_t i = 0; i < features.size(); ++i) {
    ComposeCache s_cache, t_cache;
    FeatureVector s_vec =
        compose(features[i].s_plus, features[i].s_minus, model.bank, &s_cache);
    FeatureVector t_vec =
        compose(features[i].t_plus, features[i].t_minus, model.bank, &t_cache);
    double p = sigmoid(head_logit(model, s_vec.values, t_vec.values));

    double clipped = std::clamp(p, kPredictionClip, 1.0 - kPredictionClip);
    result.total_loss -= labels[i] == 1 ? std::log(clipped) : std::log(1.0 - clipped);

    // d(loss)/d(logit) of the sigmoid cross-entropy
    double d_logit = p - static_cast<double>(labels[i]);
    result.grads.output_bias += d_logit;
    for (std::size_t j = 0; j < f; ++j) {
      result.grads.output_weights[j] += d_logit * s_vec.values[j];
      result.grads.output_weights[f + j] += d_logit * t_vec.values[j];
    }

    for (std::size_t j = 0; j < f; ++j) d_features[j] = d_logit * model.output_weights[j];
    compose_backward(d_features, s_cache, model.bank, result.grads.bank);
    for (std::size_t j = 0; j < f; ++j) d_features[j] = d_logit * model.output_weights[f + j];
    compose_backward(d_features, t_cache, model.bank, result.grads.bank);
  }
  return result;
}

ModelGrads gradients(const Model& model, const EmbeddingStore& store,
                     const std::vector<TrainingInstance>& batch) {
  if (batch.empty()) fail(ErrorKind::invalid_argument, "batch is empty");
  model.validate();
  std::vector<PairFeatures> features;
  std::vector<int> labels;
  features.reserve(batch.size());
  labels.reserve(batch.size());
  for (const auto& instance : batch) {
    features.push_back(
        pair_features(model.config, store, instance.s_tokens, instance.t_tokens));
    labels.push_back(instance.label);
  }
  return eval_batch(model, features, labels).grads;
}

TrainResult train(const Model& initial, const EmbeddingStore& store,
                  const std::vector<TrainingInstance>& data,
                  const ModelConfig& config, const DevEval& dev_eval,
                  std::ostream* progress) {
  config.validate();
  initial.validate();
  if (data.empty()) {
    fail(ErrorKind::invalid_argument, "training data is empty");
  }
  for (const auto& instance : data) {
    if (instance.label != 0 && instance.label != 1) {
      fail(ErrorKind::invalid_argument, "training labels must be 0 or 1");
    }
    if (instance.s_tokens.empty() || instance.t_tokens.empty()) {
      fail(ErrorKind::invalid_argument, "training sentences must be nonempty");
    }
  }

  TrainResult result;
  result.model = initial;
  result.best_model = initial;
  result.best_epoch = 0;
  if (config.epochs == 0) return result;

  // frozen embeddings: the pre-CNN pipeline is a constant per-instance map
  std::vector<PairFeatures> features;
  std::vector<int> labels;
  features.reserve(data.size());
  labels.reserve(data.size());
  for (const auto& instance : data) {
    features.push_back(
        pair_features(config, store, instance.s_tokens, instance.t_tokens));
    labels.push_back(instance.label);
  }

  std::vector<double> params = result.model.pack_params();
  AdamState state(params.size(), config.learning_rate);
  Rng shuffle_rng(derive_seed(config.seed, 1));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  double best_metric = -std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    auto start = std::chrono::steady_clock::now();
    shuffle(order, shuffle_rng);
    double epoch_loss = 0.0;

    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      std::size_t end = std::min(begin + config.batch_size, order.size());
      std::vector<PairFeatures> batch_features;
      std::vector<int> batch_labels;
      batch_features.reserve(end - begin);
      batch_labels.reserve(end - begin);
      for (std::size_t k = begin; k < end; ++k) {
        batch_features.push_back(features[order[k]]);
        batch_labels.push_back(labels[order[k]]);
      }
      BatchResult batch = eval_batch(result.model, batch_features, batch_labels);
      epoch_loss += batch.total_loss;
      adam_step(params, batch.grads.pack(), state);
      result.model.unpack_params(params);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.mean_loss = epoch_loss / static_cast<double>(data.size());
    entry.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (dev_eval) {
      entry.dev_metric = dev_eval(result.model);
      if (*entry.dev_metric > best_metric) {
        best_metric = *entry.dev_metric;
        result.best_model = result.model;
        result.best_epoch = epoch;
      }
    }
    if (progress) {
      (*progress) << "epoch " << entry.epoch << " loss " << entry.mean_loss
                  << " wall_time_s " << entry.wall_time_s;
      if (entry.dev_metric) (*progress) << " dev_metric " << *entry.dev_metric;
      (*progress) << "\n";
    }
    result.log.push_back(std::move(entry));
  }

  if (!dev_eval) {
    result.best_model = result.model;
    result.best_epoch = config.epochs;
  }
  return result;
}

}  // namespace lexdecomp
