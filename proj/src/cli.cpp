#include "lexdecomp/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "lexdecomp/data_io.hpp"
#include "lexdecomp/error.hpp"
#include "lexdecomp/experiment.hpp"
#include "lexdecomp/metrics.hpp"
#include "lexdecomp/model.hpp"

namespace lexdecomp {

namespace {

namespace fs = std::filesystem;

struct CliOptions {
  std::optional<std::string> config_file;
  std::optional<std::string> train_path;
  std::optional<std::string> dev_path;
  std::optional<std::string> test_path;
  std::optional<std::string> embeddings_path;
  std::optional<std::string> checkpoint_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::string> match_name;
  std::optional<std::size_t> window;
  std::optional<std::string> decomp_name;
  std::optional<std::string> filters_text;
  std::optional<std::string> task_name;
  std::optional<double> scale;
  std::optional<std::string> oov_name;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<bool> lowercase;
  std::optional<bool> clamp_alpha;
  std::optional<std::string> metric_name;
  std::optional<bool> drop_no_positive;
  std::optional<std::string> trec_dump_prefix;
  std::optional<std::string> dev_split;  // "POS:NEG", train only

  std::optional<std::size_t> dim;  // config-file only; checked vs the store

  std::string axis = "all";
  std::optional<std::size_t> reps;
  std::string sentence_s;
  std::string sentence_t;
};

int verbosity() {
  const char* env = std::getenv("LEXDECOMP_LOG");
  if (!env) return 1;
  std::string v = env;
  if (v == "0" || v == "quiet") return 0;
  if (v == "2" || v == "debug") return 2;
  return 1;
}

bool parse_bool_value(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  fail(ErrorKind::config, "bad boolean '" + value + "' for " + key);
}

// key = value file; flags win, so only unset options are filled in.
void merge_config_file(CliOptions& opts) {
  if (!opts.config_file) return;
  std::ifstream in(*opts.config_file);
  if (!in) {
    fail(ErrorKind::config, "cannot open config file '" + *opts.config_file + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = line;
    auto b = stripped.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    auto e = stripped.find_last_not_of(" \t\r\n");
    stripped = stripped.substr(b, e - b + 1);
    if (stripped.empty() || stripped[0] == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(ErrorKind::config, *opts.config_file + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    auto trim = [](std::string s) {
      auto sb = s.find_first_not_of(" \t");
      if (sb == std::string::npos) return std::string();
      auto se = s.find_last_not_of(" \t");
      return s.substr(sb, se - sb + 1);
    };
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    try {
      if (key == "train") { if (!opts.train_path) opts.train_path = value; }
      else if (key == "dev") { if (!opts.dev_path) opts.dev_path = value; }
      else if (key == "test") { if (!opts.test_path) opts.test_path = value; }
      else if (key == "embeddings") { if (!opts.embeddings_path) opts.embeddings_path = value; }
      else if (key == "checkpoint") { if (!opts.checkpoint_path) opts.checkpoint_path = value; }
      else if (key == "out") { if (!opts.out_dir) opts.out_dir = value; }
      else if (key == "seed") { if (!opts.seed) opts.seed = std::stoull(value); }
      else if (key == "epochs") { if (!opts.epochs) opts.epochs = std::stoull(value); }
      else if (key == "match") { if (!opts.match_name) opts.match_name = value; }
      else if (key == "window") { if (!opts.window) opts.window = std::stoull(value); }
      else if (key == "decomp") { if (!opts.decomp_name) opts.decomp_name = value; }
      else if (key == "filters") { if (!opts.filters_text) opts.filters_text = value; }
      else if (key == "task") { if (!opts.task_name) opts.task_name = value; }
      else if (key == "scale") { if (!opts.scale) opts.scale = std::stod(value); }
      else if (key == "oov") { if (!opts.oov_name) opts.oov_name = value; }
      else if (key == "learning_rate") { if (!opts.learning_rate) opts.learning_rate = std::stod(value); }
      else if (key == "batch_size") { if (!opts.batch_size) opts.batch_size = std::stoull(value); }
      else if (key == "lowercase") { if (!opts.lowercase) opts.lowercase = parse_bool_value(value, key); }
      else if (key == "clamp_alpha") { if (!opts.clamp_alpha) opts.clamp_alpha = parse_bool_value(value, key); }
      else if (key == "metric") { if (!opts.metric_name) opts.metric_name = value; }
      else if (key == "drop_no_positive") { if (!opts.drop_no_positive) opts.drop_no_positive = parse_bool_value(value, key); }
      else if (key == "dev_split") { if (!opts.dev_split) opts.dev_split = value; }
      else if (key == "dim") { if (!opts.dim) opts.dim = std::stoull(value); }
      else fail(ErrorKind::config, *opts.config_file + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorKind::config, *opts.config_file + ":" + std::to_string(line_no) +
                                  ": bad value '" + value + "' for " + key);
    }
  }
}

void require_file(const std::optional<std::string>& path, const char* what) {
  if (!path) fail(ErrorKind::config, std::string("missing required --") + what);
  if (!fs::exists(*path)) {
    fail(ErrorKind::config,
         std::string(what) + " file '" + *path + "' does not exist");
  }
}

ModelConfig effective_config(const CliOptions& opts) {
  ModelConfig config;
  if (opts.match_name) config.match.kind = match_kind_from_string(*opts.match_name);
  if (opts.window) config.match.window = *opts.window;
  if (opts.decomp_name) config.decomp.kind = decomp_kind_from_string(*opts.decomp_name);
  if (opts.clamp_alpha) config.decomp.clamp_alpha = *opts.clamp_alpha;
  if (opts.filters_text) config.filter_groups = parse_filter_groups(*opts.filters_text);
  if (opts.oov_name) config.oov = oov_policy_from_string(*opts.oov_name);
  if (opts.lowercase) config.lowercase = *opts.lowercase;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.learning_rate) config.learning_rate = *opts.learning_rate;
  if (opts.batch_size) config.batch_size = *opts.batch_size;
  if (opts.epochs) config.epochs = *opts.epochs;
  if (opts.scale) config.scale_filters(*opts.scale);
  return config;
}

void fit_dim_to_store(const CliOptions& opts, ModelConfig& config,
                      const EmbeddingStore& store) {
  if (opts.dim && *opts.dim != store.dim()) {
    fail(ErrorKind::config,
         "configured dim " + std::to_string(*opts.dim) +
             " does not match embedding store dim " +
             std::to_string(store.dim()));
  }
  config.dim = store.dim();
}

EmbeddingStore load_store(const std::string& path, OovPolicy policy,
                          std::ostream& err) {
  EmbeddingStore store = EmbeddingStore::load(path, policy);
  if (store.duplicate_count() > 0 && verbosity() >= 1) {
    err << "warning: " << store.duplicate_count()
        << " duplicate embedding tokens ignored (first occurrence kept)\n";
  }
  return store;
}

std::string out_path(const CliOptions& opts, const std::string& name) {
  std::string dir = opts.out_dir.value_or(".");
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

MetricKind default_metric(TaskKind task) {
  return task == TaskKind::ranking ? MetricKind::map : MetricKind::acc;
}

void warn_fingerprint(std::uint64_t recorded, const EmbeddingStore& store,
                      std::ostream& err) {
  if (recorded != 0 && recorded != store.file_fingerprint()) {
    err << "warning: embedding file fingerprint does not match the one "
           "recorded in the checkpoint; scores may not be reproducible\n";
  }
}

std::string format4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

int cmd_train(CliOptions& opts, std::ostream& out, std::ostream& err) {
  require_file(opts.embeddings_path, "embeddings");
  require_file(opts.train_path, "train");
  if (!opts.task_name) fail(ErrorKind::config, "missing required --task");
  TaskKind task = task_kind_from_string(*opts.task_name);

  ModelConfig config = effective_config(opts);
  EmbeddingStore store = load_store(*opts.embeddings_path, config.oov, err);
  fit_dim_to_store(opts, config, store);
  config.validate();

  PairDataset train_data = load_dataset(*opts.train_path, task);
  std::optional<PairDataset> dev_data;
  if (opts.dev_path) {
    require_file(opts.dev_path, "dev");
    dev_data = load_dataset(*opts.dev_path, task);
  } else if (opts.dev_split) {
    auto colon = opts.dev_split->find(':');
    if (colon == std::string::npos) {
      fail(ErrorKind::config, "--dev-split expects POS:NEG");
    }
    std::size_t n_pos = std::stoull(opts.dev_split->substr(0, colon));
    std::size_t n_neg = std::stoull(opts.dev_split->substr(colon + 1));
    SplitResult split = split_dev(train_data, n_pos, n_neg, config.seed);
    train_data = std::move(split.train);
    dev_data = std::move(split.dev);
  }

  MetricKind metric = opts.metric_name
                          ? metric_kind_from_string(*opts.metric_name)
                          : default_metric(task);
  bool drop = opts.drop_no_positive.value_or(true);

  DevEval dev_eval;
  if (dev_data) {
    dev_eval = [&](const Model& m) {
      return evaluate_metric(m, store, *dev_data, metric, drop);
    };
  }

  Model model = Model::init(config);
  std::ostream* progress = verbosity() >= 1 ? &out : nullptr;
  TrainResult result =
      train(model, store, to_instances(train_data), config, dev_eval, progress);

  std::string ckpt = opts.checkpoint_path.value_or(out_path(opts, "model.ckpt"));
  save_checkpoint(result.best_model, ckpt, store.file_fingerprint());

  std::ofstream log(out_path(opts, "training_log.tsv"));
  log << "epoch\tmean_loss\twall_time_s";
  if (dev_data) log << "\tdev_" << metric_kind_name(metric);
  log << "\n";
  for (const auto& entry : result.log) {
    log << entry.epoch << '\t' << entry.mean_loss << '\t' << entry.wall_time_s;
    if (entry.dev_metric) log << '\t' << *entry.dev_metric;
    log << '\n';
  }

  if (dev_data && !result.log.empty()) {
    double best = 0.0;
    for (const auto& entry : result.log) {
      if (entry.epoch == result.best_epoch && entry.dev_metric) {
        best = *entry.dev_metric;
      }
    }
    out << "best_epoch " << result.best_epoch << " dev_"
        << metric_kind_name(metric) << " " << format4(best) << "\n";
  } else if (!result.log.empty()) {
    out << "final_train_loss " << format4(result.log.back().mean_loss) << "\n";
  }
  out << "checkpoint " << ckpt << "\n";
  return 0;
}

int cmd_eval(CliOptions& opts, std::ostream& out, std::ostream& err) {
  require_file(opts.checkpoint_path, "checkpoint");
  require_file(opts.test_path, "test");
  require_file(opts.embeddings_path, "embeddings");
  if (!opts.task_name) fail(ErrorKind::config, "missing required --task");
  TaskKind task = task_kind_from_string(*opts.task_name);

  LoadedCheckpoint loaded = load_checkpoint(*opts.checkpoint_path);
  EmbeddingStore store =
      load_store(*opts.embeddings_path, loaded.model.config.oov, err);
  warn_fingerprint(loaded.embedding_fingerprint, store, err);
  PairDataset test_data = load_dataset(*opts.test_path, task);

  if (task == TaskKind::ranking) {
    RankedEvalSet evalset;
    std::map<std::string, std::size_t> group_pos;
    for (const auto& record : test_data.records) {
      auto [it, inserted] =
          group_pos.try_emplace(record.group_id, evalset.groups.size());
      if (inserted) evalset.groups.push_back({record.group_id, {}});
      auto& group = evalset.groups[it->second];
      std::string doc_id =
          record.group_id + "-" + std::to_string(group.candidates.size());
      double s = score(loaded.model, store, record.s_tokens, record.t_tokens);
      group.candidates.push_back({doc_id, record.label, s});
    }
    bool drop = opts.drop_no_positive.value_or(true);
    MapMrr result = map_mrr(evalset, drop);
    out << "MAP " << format4(result.map) << " MRR " << format4(result.mrr)
        << "\n";
    if (opts.trec_dump_prefix) {
      write_trec_eval_files(evalset, *opts.trec_dump_prefix + ".qrels",
                            *opts.trec_dump_prefix + ".results", "lexdecomp");
    }
  } else {
    ClassificationEval evalset;
    for (const auto& record : test_data.records) {
      double s = score(loaded.model, store, record.s_tokens, record.t_tokens);
      evalset.pairs.emplace_back(record.label, s);
    }
    AccF1 result = accuracy_f1(evalset);
    out << "Acc " << format4(result.accuracy) << " F1 " << format4(result.f1)
        << "\n";
  }
  return 0;
}

int cmd_predict(CliOptions& opts, std::ostream& out, std::ostream& err) {
  require_file(opts.checkpoint_path, "checkpoint");
  require_file(opts.test_path, "test");
  require_file(opts.embeddings_path, "embeddings");
  if (!opts.task_name) fail(ErrorKind::config, "missing required --task");
  TaskKind task = task_kind_from_string(*opts.task_name);

  LoadedCheckpoint loaded = load_checkpoint(*opts.checkpoint_path);
  EmbeddingStore store =
      load_store(*opts.embeddings_path, loaded.model.config.oov, err);
  warn_fingerprint(loaded.embedding_fingerprint, store, err);
  PairDataset test_data = load_dataset(*opts.test_path, task);

  std::optional<std::ofstream> file;
  if (opts.out_dir) {
    file.emplace(out_path(opts, "predictions.tsv"));
    (*file) << "index\tgroup_id\tlabel\tscore\n";
  }
  char buf[32];
  for (std::size_t i = 0; i < test_data.records.size(); ++i) {
    const auto& record = test_data.records[i];
    double s = score(loaded.model, store, record.s_tokens, record.t_tokens);
    std::snprintf(buf, sizeof(buf), "%.6f", s);
    out << i << '\t' << buf << '\n';
    if (file) {
      (*file) << i << '\t' << record.group_id << '\t' << record.label << '\t'
              << buf << '\n';
    }
  }
  return 0;
}

void write_inspect_csvs(const CliOptions& opts, const PairAnalysis& analysis) {
  char buf[64];
  {
    std::ofstream f(out_path(opts, "a_matrix.csv"));
    const Matrix& a = analysis.a.a;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", a.at(i, j));
        f << (j ? "," : "") << buf;
      }
      f << '\n';
    }
  }
  {
    std::ofstream f(out_path(opts, "best_index.csv"));
    f << "direction,index,token,best_index,best_similarity\n";
    for (std::size_t i = 0; i < analysis.s.length(); ++i) {
      std::size_t k = analysis.s_match.best_index[i];
      std::snprintf(buf, sizeof(buf), "%.17g", analysis.a.a.at(i, k));
      f << "s," << i << ',' << analysis.s.tokens[i] << ',' << k << ',' << buf
        << '\n';
    }
    for (std::size_t j = 0; j < analysis.t.length(); ++j) {
      std::size_t k = analysis.t_match.best_index[j];
      std::snprintf(buf, sizeof(buf), "%.17g", analysis.a.a.at(k, j));
      f << "t," << j << ',' << analysis.t.tokens[j] << ',' << k << ',' << buf
        << '\n';
    }
  }
  {
    std::ofstream f(out_path(opts, "decomp_norms.csv"));
    f << "direction,index,token,plus_norm,minus_norm\n";
    auto emit = [&](const char* direction, const SentenceMatrix& sent,
                    const Matrix& plus, const Matrix& minus) {
      for (std::size_t i = 0; i < sent.length(); ++i) {
        char plus_buf[64], minus_buf[64];
        std::snprintf(plus_buf, sizeof(plus_buf), "%.17g", norm(plus.row(i)));
        std::snprintf(minus_buf, sizeof(minus_buf), "%.17g", norm(minus.row(i)));
        f << direction << ',' << i << ',' << sent.tokens[i] << ',' << plus_buf
          << ',' << minus_buf << '\n';
      }
    };
    emit("s", analysis.s, analysis.decomposed.s_plus, analysis.decomposed.s_minus);
    emit("t", analysis.t, analysis.decomposed.t_plus, analysis.decomposed.t_minus);
  }
}

int cmd_inspect(CliOptions& opts, std::ostream& out, std::ostream& err) {
  require_file(opts.embeddings_path, "embeddings");
  if (opts.sentence_s.empty() || opts.sentence_t.empty()) {
    fail(ErrorKind::config, "inspect needs two sentences");
  }

  Model model;
  EmbeddingStore store = [&] {
    if (opts.checkpoint_path) {
      require_file(opts.checkpoint_path, "checkpoint");
      LoadedCheckpoint loaded = load_checkpoint(*opts.checkpoint_path);
      model = std::move(loaded.model);
      EmbeddingStore s =
          load_store(*opts.embeddings_path, model.config.oov, err);
      warn_fingerprint(loaded.embedding_fingerprint, s, err);
      return s;
    }
    ModelConfig config = effective_config(opts);
    EmbeddingStore s = load_store(*opts.embeddings_path, config.oov, err);
    fit_dim_to_store(opts, config, s);
    model = Model::init(config);
    return s;
  }();

  std::vector<std::string> s_tokens = split_whitespace(opts.sentence_s);
  std::vector<std::string> t_tokens = split_whitespace(opts.sentence_t);

  if (model.config.oov == OovPolicy::zero) {
    auto all_oov = [&](const std::vector<std::string>& tokens) {
      for (const auto& token : tokens) {
        std::string key = model.config.lowercase ? lowercase_token(token) : token;
        if (store.contains(key)) return false;
      }
      return true;
    };
    if (all_oov(s_tokens) || all_oov(t_tokens)) {
      err << "warning: a sentence is entirely out of vocabulary under the "
             "zero OOV policy; similarities will be zero\n";
    }
  }

  PairAnalysis analysis =
      analyze_pair(model.config, store, s_tokens, t_tokens);
  write_inspect_csvs(opts, analysis);

  double s = score(model, store, s_tokens, t_tokens);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", s);
  out << "score " << buf << "\n";
  std::ofstream score_file(out_path(opts, "score.txt"));
  score_file << buf << "\n";
  return 0;
}

int cmd_ablate(CliOptions& opts, std::ostream& out, std::ostream& err) {
  require_file(opts.embeddings_path, "embeddings");
  require_file(opts.train_path, "train");
  require_file(opts.dev_path, "dev");
  if (!opts.task_name) fail(ErrorKind::config, "missing required --task");
  TaskKind task = task_kind_from_string(*opts.task_name);

  ModelConfig base = effective_config(opts);
  EmbeddingStore store = load_store(*opts.embeddings_path, base.oov, err);
  fit_dim_to_store(opts, base, store);
  base.validate();

  PairDataset train_data = load_dataset(*opts.train_path, task);
  PairDataset dev_data = load_dataset(*opts.dev_path, task);

  MetricKind metric = opts.metric_name
                          ? metric_kind_from_string(*opts.metric_name)
                          : default_metric(task);

  std::vector<AblationSpec> specs;
  if (opts.axis == "all" || opts.axis == "matching") {
    specs.push_back(matching_sweep(base));
  }
  if (opts.axis == "all" || opts.axis == "decomposition") {
    specs.push_back(decomposition_sweep(base));
  }
  if (opts.axis == "all" || opts.axis == "filters") {
    specs.push_back(filter_sweep(base));
  }
  if (specs.empty()) {
    fail(ErrorKind::config, "unknown ablation axis '" + opts.axis + "'");
  }

  std::ostream* progress = verbosity() >= 1 ? &out : nullptr;
  for (auto& spec : specs) {
    spec.metric = metric;
    spec.repetitions = opts.reps.value_or(3);
    spec.base_seed = base.seed;
    AblationResult result = run_ablation(spec, train_data, dev_data, store, progress);
    std::string axis = ablation_axis_name(spec.axis);
    write_ablation_csv(result, out_path(opts, "ablation_" + axis + ".csv"));
    write_ablation_summary_csv(
        result, out_path(opts, "ablation_" + axis + "_summary.csv"));
    write_plot_data_csv(result, out_path(opts, "ablation_" + axis + "_plot.csv"));
    std::ofstream manifest(out_path(opts, "ablation_" + axis + "_manifest.txt"));
    manifest << result.manifest;
    out << "ablation " << axis << " -> "
        << out_path(opts, "ablation_" + axis + ".csv") << "\n";
  }
  return 0;
}

void add_shared_options(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_file, "key = value config file");
  cmd->add_option("--train", opts.train_path, "training dataset (TSV)");
  cmd->add_option("--dev", opts.dev_path, "development dataset (TSV)");
  cmd->add_option("--test", opts.test_path, "test dataset (TSV)");
  cmd->add_option("--embeddings", opts.embeddings_path, "embedding file");
  cmd->add_option("--checkpoint", opts.checkpoint_path, "checkpoint path");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "run seed");
  cmd->add_option("--epochs", opts.epochs, "training epochs");
  cmd->add_option("--match", opts.match_name, "matching function: max|global|local");
  cmd->add_option("--window", opts.window, "local matching window");
  cmd->add_option("--decomp", opts.decomp_name,
                  "decomposition: rigid|linear|orthogonal");
  cmd->add_option("--filters", opts.filters_text,
                  "filter groups, e.g. 1:500,2:500,3:500");
  cmd->add_option("--task", opts.task_name, "task: ranking|classification");
  cmd->add_option("--scale", opts.scale, "filter count scale factor");
  cmd->add_option("--oov", opts.oov_name, "OOV policy: zero|hash-random");
  cmd->add_option("--lr", opts.learning_rate, "Adam learning rate");
  cmd->add_option("--batch-size", opts.batch_size, "mini-batch size");
  cmd->add_option("--lowercase", opts.lowercase, "lowercase tokens");
  cmd->add_option("--clamp-alpha", opts.clamp_alpha,
                  "clamp the linear split weight to [0,1]");
  cmd->add_option("--metric", opts.metric_name, "metric: map|mrr|acc|f1");
  cmd->add_option("--drop-no-positive", opts.drop_no_positive,
                  "drop ranking groups without a positive label");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CliOptions opts;

  CLI::App app{"Sentence similarity by decomposing and composing lexical semantics"};
  app.require_subcommand(1);

  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  add_shared_options(train_cmd, opts);
  train_cmd->add_option("--dev-split", opts.dev_split,
                        "carve a dev set from training data, POS:NEG");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  add_shared_options(eval_cmd, opts);
  eval_cmd->add_option("--dump-trec", opts.trec_dump_prefix,
                       "write trec_eval qrels/results with this prefix");

  CLI::App* predict_cmd = app.add_subcommand("predict", "score sentence pairs");
  add_shared_options(predict_cmd, opts);

  CLI::App* inspect_cmd =
      app.add_subcommand("inspect", "dump pipeline intermediates for one pair");
  add_shared_options(inspect_cmd, opts);
  inspect_cmd->add_option("sentence_s", opts.sentence_s, "first sentence")
      ->required();
  inspect_cmd->add_option("sentence_t", opts.sentence_t, "second sentence")
      ->required();

  CLI::App* ablate_cmd = app.add_subcommand("ablate", "run ablation sweeps");
  add_shared_options(ablate_cmd, opts);
  ablate_cmd->add_option("--axis", opts.axis,
                         "matching|decomposition|filters|all");
  ablate_cmd->add_option("--reps", opts.reps, "repetitions per variant");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    merge_config_file(opts);
    if (train_cmd->parsed()) return cmd_train(opts, out, err);
    if (eval_cmd->parsed()) return cmd_eval(opts, out, err);
    if (predict_cmd->parsed()) return cmd_predict(opts, out, err);
    if (inspect_cmd->parsed()) return cmd_inspect(opts, out, err);
    if (ablate_cmd->parsed()) return cmd_ablate(opts, out, err);
    err << "error: usage: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lexdecomp
