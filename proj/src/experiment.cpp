#include "lexdecomp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lexdecomp/error.hpp"
#include "lexdecomp/metrics.hpp"

namespace lexdecomp {

AblationAxis ablation_axis_from_string(const std::string& name) {
  if (name == "matching") return AblationAxis::matching;
  if (name == "decomposition") return AblationAxis::decomposition;
  if (name == "filters") return AblationAxis::filters;
  fail(ErrorKind::config, "unknown ablation axis '" + name + "'");
}

const char* ablation_axis_name(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::matching: return "matching";
    case AblationAxis::decomposition: return "decomposition";
    case AblationAxis::filters: return "filters";
  }
  return "unknown";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "map") return MetricKind::map;
  if (name == "mrr") return MetricKind::mrr;
  if (name == "acc") return MetricKind::acc;
  if (name == "f1") return MetricKind::f1;
  fail(ErrorKind::config, "unknown metric '" + name + "'");
}

const char* metric_kind_name(MetricKind metric) {
  switch (metric) {
    case MetricKind::map: return "map";
    case MetricKind::mrr: return "mrr";
    case MetricKind::acc: return "acc";
    case MetricKind::f1: return "f1";
  }
  return "unknown";
}

AblationSpec matching_sweep(const ModelConfig& base) {
  AblationSpec spec;
  spec.axis = AblationAxis::matching;
  spec.base_seed = base.seed;

  ModelConfig config = base;
  config.match = {MatchKind::max, base.match.window};
  spec.variants.push_back({"max", config});
  config.match = {MatchKind::global, base.match.window};
  spec.variants.push_back({"global", config});
  for (std::size_t w = 1; w <= 4; ++w) {
    config.match = {MatchKind::local, w};
    spec.variants.push_back({"local-" + std::to_string(w), config});
  }
  return spec;
}

AblationSpec decomposition_sweep(const ModelConfig& base) {
  AblationSpec spec;
  spec.axis = AblationAxis::decomposition;
  spec.base_seed = base.seed;

  // rigid is only defined for max matching
  ModelConfig rigid = base;
  rigid.decomp.kind = DecompKind::rigid;
  rigid.match = {MatchKind::max, base.match.window};
  spec.variants.push_back({"rigid", rigid});

  ModelConfig config = base;
  config.decomp.kind = DecompKind::linear;
  spec.variants.push_back({"linear", config});
  config.decomp.kind = DecompKind::orthogonal;
  spec.variants.push_back({"orthogonal", config});
  return spec;
}

AblationSpec filter_sweep(const ModelConfig& base) {
  AblationSpec spec;
  spec.axis = AblationAxis::filters;
  spec.base_seed = base.seed;

  // win-k = n-gram filters 1..k; per-type count taken from the base config
  std::size_t per_type = base.filter_groups.empty() ? 500 : base.filter_groups[0].count;
  for (std::size_t k = 1; k <= 5; ++k) {
    ModelConfig config = base;
    config.filter_groups.clear();
    for (std::size_t h = 1; h <= k; ++h) {
      config.filter_groups.push_back({h, per_type});
    }
    spec.variants.push_back({"win-" + std::to_string(k), config});
  }
  return spec;
}

double evaluate_metric(const Model& model, const EmbeddingStore& store,
                       const PairDataset& eval_data, MetricKind metric,
                       bool drop_no_positive) {
  bool wants_ranking = metric == MetricKind::map || metric == MetricKind::mrr;
  if (wants_ranking && eval_data.task != TaskKind::ranking) {
    fail(ErrorKind::config, std::string("metric '") + metric_kind_name(metric) +
                                "' needs a ranking dataset");
  }
  if (!wants_ranking && eval_data.task != TaskKind::classification) {
    fail(ErrorKind::config, std::string("metric '") + metric_kind_name(metric) +
                                "' needs a classification dataset");
  }

  if (wants_ranking) {
    RankedEvalSet evalset;
    std::map<std::string, std::size_t> group_pos;
    for (const auto& record : eval_data.records) {
      auto [it, inserted] = group_pos.try_emplace(record.group_id, evalset.groups.size());
      if (inserted) evalset.groups.push_back({record.group_id, {}});
      auto& group = evalset.groups[it->second];
      std::string doc_id =
          record.group_id + "-" + std::to_string(group.candidates.size());
      double s = score(model, store, record.s_tokens, record.t_tokens);
      group.candidates.push_back({doc_id, record.label, s});
    }
    MapMrr result = map_mrr(evalset, drop_no_positive);
    return metric == MetricKind::map ? result.map : result.mrr;
  }

  ClassificationEval evalset;
  for (const auto& record : eval_data.records) {
    double s = score(model, store, record.s_tokens, record.t_tokens);
    evalset.pairs.emplace_back(record.label, s);
  }
  AccF1 result = accuracy_f1(evalset);
  return metric == MetricKind::acc ? result.accuracy : result.f1;
}

std::string ablation_manifest(const AblationSpec& spec,
                              const PairDataset& train_data,
                              const PairDataset& eval_data,
                              const EmbeddingStore& store) {
  std::ostringstream out;
  out << "axis = " << ablation_axis_name(spec.axis) << "\n";
  out << "metric = " << metric_kind_name(spec.metric) << "\n";
  out << "repetitions = " << spec.repetitions << "\n";
  out << "base_seed = " << spec.base_seed << "\n";
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(dataset_content_hash(train_data)));
  out << "train_dataset_hash = " << hex << "\n";
  out << "train_dataset_records = " << train_data.size() << "\n";
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(dataset_content_hash(eval_data)));
  out << "eval_dataset_hash = " << hex << "\n";
  out << "eval_dataset_records = " << eval_data.size() << "\n";
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(store.file_fingerprint()));
  out << "embedding_fingerprint = " << hex << "\n";
  out << "embedding_dim = " << store.dim() << "\n";
  for (const auto& variant : spec.variants) {
    out << "\n[variant " << variant.name << "]\n";
    out << "feature_length = " << variant.config.feature_length() << "\n";
    out << variant.config.serialize();
  }
  return out.str();
}

AblationResult run_ablation(const AblationSpec& spec,
                            const PairDataset& train_data,
                            const PairDataset& eval_data,
                            const EmbeddingStore& store,
                            std::ostream* progress) {
  if (spec.variants.empty()) {
    fail(ErrorKind::config, "ablation spec has no variants");
  }
  if (spec.repetitions < 1) {
    fail(ErrorKind::config, "ablation needs at least one repetition");
  }
  // every variant must be valid before any training starts
  for (const auto& variant : spec.variants) {
    variant.config.validate();
    if (variant.config.dim != store.dim()) {
      fail(ErrorKind::config,
           "variant '" + variant.name + "' has dim " +
               std::to_string(variant.config.dim) +
               " but the embedding store has dim " +
               std::to_string(store.dim()));
    }
  }

  AblationResult result;
  result.spec = spec;
  result.manifest = ablation_manifest(spec, train_data, eval_data, store);
  std::vector<TrainingInstance> instances = to_instances(train_data);

  for (const auto& variant : spec.variants) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
      ModelConfig config = variant.config;
      config.seed = spec.base_seed + rep;
      auto start = std::chrono::steady_clock::now();
      Model model = Model::init(config);
      TrainResult trained = train(model, store, instances, config);
      double value = evaluate_metric(trained.model, store, eval_data, spec.metric);
      double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
      result.rows.push_back({variant.name, rep, config.seed, value, wall});
      sum += value;
      sum_sq += value * value;
      if (progress) {
        (*progress) << "variant " << variant.name << " rep " << rep << " "
                    << metric_kind_name(spec.metric) << " " << value << "\n";
      }
    }
    double n = static_cast<double>(spec.repetitions);
    double mean = sum / n;
    double var = spec.repetitions > 1 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
    result.summary.push_back(
        {variant.name, mean, std::sqrt(std::max(0.0, var)), spec.repetitions});
  }
  return result;
}

namespace {

std::string csv_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_ablation_csv(const AblationResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << "variant,rep,seed,metric,value,wall_time_s\n";
  for (const auto& row : result.rows) {
    out << row.variant << ',' << row.rep << ',' << row.seed << ','
        << metric_kind_name(result.spec.metric) << ',' << csv_double(row.value)
        << ',' << csv_double(row.wall_time_s) << '\n';
  }
}

void write_ablation_summary_csv(const AblationResult& result,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << "variant,metric,mean,sd,reps\n";
  for (const auto& row : result.summary) {
    out << row.variant << ',' << metric_kind_name(result.spec.metric) << ','
        << csv_double(row.mean) << ',' << csv_double(row.sd) << ',' << row.reps
        << '\n';
  }
}

void write_plot_data_csv(const AblationResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  out << "x,y,series\n";
  const char* metric = metric_kind_name(result.spec.metric);
  for (const auto& row : result.rows) {
    out << row.variant << ',' << csv_double(row.value) << ',' << metric
        << "-rep" << row.rep << '\n';
  }
  for (const auto& row : result.summary) {
    out << row.variant << ',' << csv_double(row.mean) << ',' << metric
        << "-mean\n";
  }
}

}  // namespace lexdecomp
