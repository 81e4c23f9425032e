#include "lexdecomp/data_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

TaskKind task_kind_from_string(const std::string& name) {
  if (name == "ranking") return TaskKind::ranking;
  if (name == "classification") return TaskKind::classification;
  fail(ErrorKind::config, "unknown task '" + name + "'");
}

const char* task_kind_name(TaskKind task) {
  return task == TaskKind::ranking ? "ranking" : "classification";
}

std::size_t PairDataset::group_count() const {
  std::unordered_set<std::string> ids;
  for (const auto& r : records) ids.insert(r.group_id);
  return ids.size();
}

std::size_t PairDataset::positive_count() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(),
                    [](const PairRecord& r) { return r.label == 1; }));
}

std::size_t PairDataset::negative_count() const {
  return records.size() - positive_count();
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::vector<std::string> split_tokens(const std::string& text,
                                      const std::string& path,
                                      std::size_t line_no) {
  if (text.empty()) fail_parse(path, line_no, "empty sentence");
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    std::size_t space = text.find(' ', start);
    std::string token = space == std::string::npos
                            ? text.substr(start)
                            : text.substr(start, space - start);
    if (token.empty()) {
      fail_parse(path, line_no, "empty token (double or trailing space)");
    }
    tokens.push_back(std::move(token));
    if (space == std::string::npos) break;
    start = space + 1;
  }
  return tokens;
}

int parse_label(const std::string& text, const std::string& path,
                std::size_t line_no) {
  if (text == "0") return 0;
  if (text == "1") return 1;
  fail_parse(path, line_no, "bad label '" + text + "', expected 0 or 1");
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

PairDataset load_dataset(const std::string& path, TaskKind task) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open dataset '" + path + "'");

  PairDataset dataset;
  dataset.task = task;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    std::vector<std::string> fields = split_tabs(line);
    PairRecord record;
    if (task == TaskKind::ranking) {
      if (fields.size() != 4) {
        fail_parse(path, line_no,
                   "expected 4 tab-separated columns, got " +
                       std::to_string(fields.size()));
      }
      if (fields[0].empty()) fail_parse(path, line_no, "empty group id");
      record.group_id = fields[0];
      record.s_tokens = split_tokens(fields[1], path, line_no);
      record.t_tokens = split_tokens(fields[2], path, line_no);
      record.label = parse_label(fields[3], path, line_no);
    } else {
      if (fields.size() != 3) {
        fail_parse(path, line_no,
                   "expected 3 tab-separated columns, got " +
                       std::to_string(fields.size()));
      }
      record.label = parse_label(fields[0], path, line_no);
      record.s_tokens = split_tokens(fields[1], path, line_no);
      record.t_tokens = split_tokens(fields[2], path, line_no);
    }
    dataset.records.push_back(std::move(record));
  }
  if (dataset.records.empty()) {
    fail_parse(path, line_no == 0 ? 1 : line_no, "dataset has no records");
  }
  return dataset;
}

std::string serialize_dataset(const PairDataset& dataset) {
  std::ostringstream out;
  for (const auto& r : dataset.records) {
    if (dataset.task == TaskKind::ranking) {
      out << r.group_id << '\t' << join_tokens(r.s_tokens) << '\t'
          << join_tokens(r.t_tokens) << '\t' << r.label << '\n';
    } else {
      out << r.label << '\t' << join_tokens(r.s_tokens) << '\t'
          << join_tokens(r.t_tokens) << '\n';
    }
  }
  return out.str();
}

void save_dataset(const PairDataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write dataset '" + path + "'");
  out << serialize_dataset(dataset);
}

std::uint64_t dataset_content_hash(const PairDataset& dataset) {
  return fnv1a(serialize_dataset(dataset));
}

SplitResult split_dev(const PairDataset& dataset, std::size_t n_pos,
                      std::size_t n_neg, std::uint64_t seed) {
  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    (dataset.records[i].label == 1 ? positives : negatives).push_back(i);
  }
  if (positives.size() < n_pos || negatives.size() < n_neg) {
    fail(ErrorKind::invalid_argument,
         "dev split needs " + std::to_string(n_pos) + " positives and " +
             std::to_string(n_neg) + " negatives but the dataset has " +
             std::to_string(positives.size()) + " / " +
             std::to_string(negatives.size()));
  }

  Rng rng(seed);
  shuffle(positives, rng);
  shuffle(negatives, rng);
  std::vector<bool> in_dev(dataset.records.size(), false);
  for (std::size_t i = 0; i < n_pos; ++i) in_dev[positives[i]] = true;
  for (std::size_t i = 0; i < n_neg; ++i) in_dev[negatives[i]] = true;

  SplitResult result;
  result.train.task = dataset.task;
  result.dev.task = dataset.task;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    (in_dev[i] ? result.dev : result.train).records.push_back(dataset.records[i]);
  }
  return result;
}

std::vector<TrainingInstance> to_instances(const PairDataset& dataset) {
  std::vector<TrainingInstance> instances;
  instances.reserve(dataset.records.size());
  for (const auto& r : dataset.records) {
    instances.push_back({r.s_tokens, r.t_tokens, r.label});
  }
  return instances;
}

namespace {

constexpr char kCheckpointMagic[4] = {'L', 'X', 'D', 'C'};

void write_u32le(std::ostream& out, std::uint32_t x) {
  unsigned char buf[4] = {
      static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
      static_cast<unsigned char>(x >> 16), static_cast<unsigned char>(x >> 24)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32le(std::istream& in, const std::string& path,
                         const char* what) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    fail(ErrorKind::checkpoint,
         "truncated checkpoint '" + path + "' while reading " + what);
  }
  return static_cast<std::uint32_t>(buf[0]) |
         static_cast<std::uint32_t>(buf[1]) << 8 |
         static_cast<std::uint32_t>(buf[2]) << 16 |
         static_cast<std::uint32_t>(buf[3]) << 24;
}

void write_f64le_array(std::ostream& out, std::span<const double> values) {
  for (double x : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
  }
}

void read_f64le_array(std::istream& in, std::span<double> values,
                      const std::string& path, const std::string& tensor) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) {
      fail(ErrorKind::checkpoint,
           "truncated checkpoint '" + path + "' while reading tensor '" +
               tensor + "' (value " + std::to_string(i) + " of " +
               std::to_string(values.size()) + ")");
    }
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fingerprint));
  return buf;
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& path,
                     std::uint64_t embedding_fingerprint) {
  model.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write checkpoint '" + path + "'");

  std::string config_text = model.config.serialize();
  config_text += "embedding_fingerprint = " +
                 fingerprint_hex(embedding_fingerprint) + "\n";

  out.write(kCheckpointMagic, 4);
  write_u32le(out, kCheckpointVersion);
  write_u32le(out, static_cast<std::uint32_t>(config_text.size()));
  out.write(config_text.data(),
            static_cast<std::streamsize>(config_text.size()));

  for (std::size_t f = 0; f < model.bank.weights.size(); ++f) {
    write_f64le_array(out, model.bank.weights[f].data());
  }
  write_f64le_array(out, model.bank.biases);
  write_f64le_array(out, model.output_weights);
  double bias[1] = {model.output_bias};
  write_f64le_array(out, bias);
  if (!out) fail(ErrorKind::io, "failed writing checkpoint '" + path + "'");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open checkpoint '" + path + "'");

  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    fail(ErrorKind::checkpoint, "'" + path + "' is not a checkpoint file");
  }
  LoadedCheckpoint loaded;
  loaded.version = read_u32le(in, path, "version");
  if (loaded.version != kCheckpointVersion) {
    fail(ErrorKind::checkpoint,
         "unsupported checkpoint version " + std::to_string(loaded.version) +
             " (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  std::uint32_t config_len = read_u32le(in, path, "config length");
  std::string config_text(config_len, '\0');
  if (!in.read(config_text.data(), config_len)) {
    fail(ErrorKind::checkpoint,
         "truncated checkpoint '" + path + "' while reading config");
  }

  std::map<std::string, std::string> extras;
  ModelConfig config = ModelConfig::deserialize(config_text, &extras);
  config.validate();
  if (auto it = extras.find("embedding_fingerprint"); it != extras.end()) {
    loaded.embedding_fingerprint = std::stoull(it->second, nullptr, 16);
  }

  Model& model = loaded.model;
  model.config = config;
  model.bank.dim = config.dim;
  model.bank.groups = config.filter_groups;
  std::size_t f = 0;
  for (const auto& g : config.filter_groups) {
    for (std::size_t k = 0; k < g.count; ++k, ++f) {
      Matrix w(config.dim, g.window);
      read_f64le_array(in, w.data(), path,
                       "filter[" + std::to_string(f) + "].weights");
      model.bank.weights.push_back(std::move(w));
    }
  }
  model.bank.biases.resize(model.bank.weights.size());
  read_f64le_array(in, model.bank.biases, path, "filter_biases");
  model.output_weights.resize(config.feature_length());
  read_f64le_array(in, model.output_weights, path, "output_weights");
  double bias[1];
  read_f64le_array(in, bias, path, "output_bias");
  model.output_bias = bias[0];

  char extra;
  if (in.read(&extra, 1)) {
    fail(ErrorKind::checkpoint,
         "checkpoint '" + path +
             "' has trailing bytes after output_bias (shape mismatch with the "
             "declared config?)");
  }
  model.validate();
  return loaded;
}

std::uint64_t file_content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a(buf.str());
}

}  // namespace lexdecomp
