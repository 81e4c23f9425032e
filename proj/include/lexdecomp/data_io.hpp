#ifndef LEXDECOMP_DATA_IO_HPP
#define LEXDECOMP_DATA_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lexdecomp/model.hpp"

namespace lexdecomp {

enum class TaskKind { ranking, classification };

TaskKind task_kind_from_string(const std::string& name);
const char* task_kind_name(TaskKind task);

struct PairRecord {
  std::string group_id;  // set for ranking records
  std::vector<std::string> s_tokens;
  std::vector<std::string> t_tokens;
  int label = 0;
};

struct PairDataset {
  TaskKind task = TaskKind::classification;
  std::vector<PairRecord> records;

  std::size_t size() const { return records.size(); }
  std::size_t group_count() const;     // distinct group ids
  std::size_t positive_count() const;
  std::size_t negative_count() const;
};

// TSV formats:
//   ranking:        group_id <TAB> sentence_s <TAB> sentence_t <TAB> label
//   classification: label <TAB> sentence_s <TAB> sentence_t
// Sentences are split on single spaces. Malformed rows are errors with line
// numbers; nothing is skipped silently.
PairDataset load_dataset(const std::string& path, TaskKind task);
void save_dataset(const PairDataset& dataset, const std::string& path);
std::string serialize_dataset(const PairDataset& dataset);
std::uint64_t dataset_content_hash(const PairDataset& dataset);

struct SplitResult {
  PairDataset train;
  PairDataset dev;
};

// Moves exactly n_pos positives and n_neg negatives into the dev split,
// sampled without replacement by the seeded RNG; both splits keep the input
// order of their records.
SplitResult split_dev(const PairDataset& dataset, std::size_t n_pos,
                      std::size_t n_neg, std::uint64_t seed);

std::vector<TrainingInstance> to_instances(const PairDataset& dataset);

// Checkpoint binary layout: magic "LXDC", u32 version, length-prefixed
// config text (the ModelConfig plus bookkeeping keys), then the parameter
// arrays as little-endian f64 in pack_params order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Model& model, const std::string& path,
                     std::uint64_t embedding_fingerprint = 0);

struct LoadedCheckpoint {
  Model model;
  std::uint32_t version = 0;
  std::uint64_t embedding_fingerprint = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

std::uint64_t file_content_hash(const std::string& path);

}  // namespace lexdecomp

#endif
