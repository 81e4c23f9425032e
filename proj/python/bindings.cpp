#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lexdecomp/data_io.hpp"
#include "lexdecomp/error.hpp"
#include "lexdecomp/experiment.hpp"
#include "lexdecomp/metrics.hpp"
#include "lexdecomp/model.hpp"

namespace py = pybind11;
using namespace lexdecomp;

namespace {

std::vector<std::vector<double>> matrix_to_lists(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    out[i].assign(row.begin(), row.end());
  }
  return out;
}

ModelConfig make_config(const std::string& match, std::size_t window,
                        const std::string& decomp, bool clamp_alpha,
                        const std::string& filters, const std::string& oov,
                        bool lowercase, std::uint64_t seed, double learning_rate,
                        std::size_t batch_size, std::size_t epochs,
                        std::size_t dim) {
  ModelConfig config;
  config.match.kind = match_kind_from_string(match);
  config.match.window = window;
  config.decomp.kind = decomp_kind_from_string(decomp);
  config.decomp.clamp_alpha = clamp_alpha;
  config.filter_groups = parse_filter_groups(filters);
  config.oov = oov_policy_from_string(oov);
  config.lowercase = lowercase;
  config.seed = seed;
  config.learning_rate = learning_rate;
  config.batch_size = batch_size;
  config.epochs = epochs;
  config.dim = dim;
  config.validate();
  return config;
}

RankedEvalSet evalset_from_python(
    const std::vector<std::pair<
        std::string, std::vector<std::tuple<std::string, int, double>>>>& groups) {
  RankedEvalSet evalset;
  for (const auto& [query_id, candidates] : groups) {
    RankedGroup group{query_id, {}};
    for (const auto& [doc_id, label, score] : candidates) {
      group.candidates.push_back({doc_id, label, score});
    }
    evalset.groups.push_back(std::move(group));
  }
  return evalset;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sentence similarity by decomposing and composing lexical semantics";

  py::register_exception<Error>(m, "LexdecompError");

  m.def("dot", [](const Vector& a, const Vector& b) { return dot(a, b); });
  m.def("cosine", [](const Vector& a, const Vector& b) { return cosine(a, b); });

  py::class_<EmbeddingStore>(m, "EmbeddingStore")
      .def_static(
          "load",
          [](const std::string& path, const std::string& oov) {
            return EmbeddingStore::load(path, oov_policy_from_string(oov));
          },
          py::arg("path"), py::arg("oov") = "hash-random")
      .def_property_readonly("dim", &EmbeddingStore::dim)
      .def_property_readonly("vocab_size", &EmbeddingStore::vocab_size)
      .def_property_readonly("duplicate_count", &EmbeddingStore::duplicate_count)
      .def("contains", &EmbeddingStore::contains)
      .def("lookup", &EmbeddingStore::lookup)
      .def("file_fingerprint", &EmbeddingStore::file_fingerprint);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init(&make_config), py::arg("match") = "local",
           py::arg("window") = 3, py::arg("decomp") = "orthogonal",
           py::arg("clamp_alpha") = false,
           py::arg("filters") = "1:500,2:500,3:500",
           py::arg("oov") = "hash-random", py::arg("lowercase") = true,
           py::arg("seed") = 42, py::arg("learning_rate") = 1e-3,
           py::arg("batch_size") = 32, py::arg("epochs") = 10,
           py::arg("dim") = 300)
      .def_property_readonly(
          "match", [](const ModelConfig& c) { return c.match.to_string(); })
      .def_property_readonly(
          "decomp",
          [](const ModelConfig& c) { return decomp_kind_name(c.decomp.kind); })
      .def_readwrite("dim", &ModelConfig::dim)
      .def_readwrite("seed", &ModelConfig::seed)
      .def_readwrite("learning_rate", &ModelConfig::learning_rate)
      .def_readwrite("batch_size", &ModelConfig::batch_size)
      .def_readwrite("epochs", &ModelConfig::epochs)
      .def_property_readonly("feature_length", &ModelConfig::feature_length)
      .def("scale_filters", &ModelConfig::scale_filters)
      .def("serialize", &ModelConfig::serialize);

  py::class_<Model>(m, "Model")
      .def_static("init", &Model::init)
      .def_readonly("config", &Model::config)
      .def_property_readonly("param_count", &Model::param_count);

  m.def("score", &score, py::arg("model"), py::arg("store"),
        py::arg("s_tokens"), py::arg("t_tokens"));

  m.def("loss", &loss, py::arg("predictions"), py::arg("labels"));

  m.def(
      "train",
      [](const Model& model, const EmbeddingStore& store,
         const std::vector<std::tuple<std::vector<std::string>,
                                      std::vector<std::string>, int>>& data,
         const ModelConfig& config) {
        std::vector<TrainingInstance> instances;
        instances.reserve(data.size());
        for (const auto& [s, t, label] : data) {
          instances.push_back({s, t, label});
        }
        TrainResult result = train(model, store, instances, config);
        std::vector<std::pair<std::size_t, double>> log;
        log.reserve(result.log.size());
        for (const auto& entry : result.log) {
          log.emplace_back(entry.epoch, entry.mean_loss);
        }
        return py::make_tuple(result.model, log);
      },
      py::arg("model"), py::arg("store"), py::arg("data"), py::arg("config"));

  m.def(
      "analyze_pair",
      [](const ModelConfig& config, const EmbeddingStore& store,
         const std::vector<std::string>& s_tokens,
         const std::vector<std::string>& t_tokens) {
        PairAnalysis analysis = analyze_pair(config, store, s_tokens, t_tokens);
        py::dict out;
        out["a"] = matrix_to_lists(analysis.a.a);
        out["s_best_index"] = analysis.s_match.best_index;
        out["t_best_index"] = analysis.t_match.best_index;
        out["s_plus"] = matrix_to_lists(analysis.decomposed.s_plus);
        out["s_minus"] = matrix_to_lists(analysis.decomposed.s_minus);
        out["t_plus"] = matrix_to_lists(analysis.decomposed.t_plus);
        out["t_minus"] = matrix_to_lists(analysis.decomposed.t_minus);
        return out;
      },
      py::arg("config"), py::arg("store"), py::arg("s_tokens"),
      py::arg("t_tokens"));

  m.def(
      "map_mrr",
      [](const std::vector<std::pair<
             std::string, std::vector<std::tuple<std::string, int, double>>>>&
             groups,
         bool drop_no_positive) {
        MapMrr result = map_mrr(evalset_from_python(groups), drop_no_positive);
        return py::make_tuple(result.map, result.mrr);
      },
      py::arg("groups"), py::arg("drop_no_positive") = true);

  m.def(
      "accuracy_f1",
      [](const std::vector<std::pair<int, double>>& pairs, double threshold) {
        AccF1 result = accuracy_f1({pairs, threshold});
        return py::make_tuple(result.accuracy, result.f1);
      },
      py::arg("pairs"), py::arg("threshold") = 0.5);

  m.def("save_checkpoint", &save_checkpoint, py::arg("model"), py::arg("path"),
        py::arg("embedding_fingerprint") = 0);

  m.def(
      "load_checkpoint",
      [](const std::string& path) {
        LoadedCheckpoint loaded = load_checkpoint(path);
        return py::make_tuple(loaded.model, loaded.embedding_fingerprint);
      },
      py::arg("path"));

  m.attr("__version__") = "0.1.0";
}
