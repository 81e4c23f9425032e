#ifndef LEXDECOMP_EXPERIMENT_HPP
#define LEXDECOMP_EXPERIMENT_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "lexdecomp/data_io.hpp"
#include "lexdecomp/model.hpp"

namespace lexdecomp {

enum class AblationAxis { matching, decomposition, filters };
enum class MetricKind { map, mrr, acc, f1 };

AblationAxis ablation_axis_from_string(const std::string& name);
const char* ablation_axis_name(AblationAxis axis);
MetricKind metric_kind_from_string(const std::string& name);
const char* metric_kind_name(MetricKind metric);

struct AblationVariant {
  std::string name;
  ModelConfig config;
};

struct AblationSpec {
  AblationAxis axis = AblationAxis::matching;
  std::vector<AblationVariant> variants;
  MetricKind metric = MetricKind::map;
  std::size_t repetitions = 3;
  std::uint64_t base_seed = 42;
};

// Sweeps mirroring the model-property experiments: matching over
// {max, global, local-1..4}, decomposition over {rigid, linear, orthogonal}
// (rigid switches the matcher to max, the only configuration it is defined
// for), and filter groups win-1..win-5 (n-grams 1..k, 500 filters per type
// scaled by the base config's counts).
AblationSpec matching_sweep(const ModelConfig& base);
AblationSpec decomposition_sweep(const ModelConfig& base);
AblationSpec filter_sweep(const ModelConfig& base);

struct AblationRow {
  std::string variant;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double wall_time_s = 0.0;
};

struct AblationSummaryRow {
  std::string variant;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t reps = 0;
};

struct AblationResult {
  AblationSpec spec;
  std::vector<AblationRow> rows;  // |variants| x repetitions, in sweep order
  std::vector<AblationSummaryRow> summary;
  std::string manifest;
};

// Trains one model per (variant, repetition) with seeds base, base+1, ... and
// evaluates the requested metric on eval_data. Every variant is validated
// before any training starts.
AblationResult run_ablation(const AblationSpec& spec,
                            const PairDataset& train_data,
                            const PairDataset& eval_data,
                            const EmbeddingStore& store,
                            std::ostream* progress = nullptr);

// Run manifest: configs, seeds, feature lengths, dataset hashes.
std::string ablation_manifest(const AblationSpec& spec,
                              const PairDataset& train_data,
                              const PairDataset& eval_data,
                              const EmbeddingStore& store);

double evaluate_metric(const Model& model, const EmbeddingStore& store,
                       const PairDataset& eval_data, MetricKind metric,
                       bool drop_no_positive = true);

void write_ablation_csv(const AblationResult& result, const std::string& path);
void write_ablation_summary_csv(const AblationResult& result,
                                const std::string& path);
void write_plot_data_csv(const AblationResult& result, const std::string& path);

}  // namespace lexdecomp

#endif
