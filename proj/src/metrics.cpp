#include "lexdecomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

namespace {

bool has_positive(const RankedGroup& group) {
  return std::any_of(group.candidates.begin(), group.candidates.end(),
                     [](const RankedCandidate& c) { return c.label == 1; });
}

void check_group(const RankedGroup& group) {
  if (group.candidates.empty()) {
    fail(ErrorKind::invalid_argument,
         "group '" + group.query_id + "' has no candidates");
  }
  for (const auto& c : group.candidates) {
    if (!std::isfinite(c.score)) {
      fail(ErrorKind::invalid_argument,
           "group '" + group.query_id + "' has a non-finite score");
    }
    if (c.label != 0 && c.label != 1) {
      fail(ErrorKind::invalid_argument,
           "group '" + group.query_id + "' has a non-binary label");
    }
  }
}

// indices of the candidates sorted by descending score, stable on ties
std::vector<std::size_t> ranking(const RankedGroup& group) {
  std::vector<std::size_t> idx(group.candidates.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return group.candidates[a].score > group.candidates[b].score;
  });
  return idx;
}

}  // namespace

MapMrr map_mrr(const RankedEvalSet& evalset, bool drop_no_positive) {
  double ap_sum = 0.0;
  double rr_sum = 0.0;
  std::size_t evaluated = 0;

  for (const auto& group : evalset.groups) {
    check_group(group);
    bool positive = has_positive(group);
    if (!positive && drop_no_positive) continue;
    ++evaluated;
    if (!positive) continue;  // kept group with no positive: AP = RR = 0

    std::vector<std::size_t> ranked = ranking(group);
    std::size_t positives_seen = 0;
    double precision_sum = 0.0;
    double rr = 0.0;
    for (std::size_t rank = 1; rank <= ranked.size(); ++rank) {
      if (group.candidates[ranked[rank - 1]].label == 1) {
        ++positives_seen;
        precision_sum += static_cast<double>(positives_seen) /
                         static_cast<double>(rank);
        if (positives_seen == 1) rr = 1.0 / static_cast<double>(rank);
      }
    }
    ap_sum += precision_sum / static_cast<double>(positives_seen);
    rr_sum += rr;
  }

  if (evaluated == 0) {
    fail(ErrorKind::eval, "no evaluable queries");
  }
  return {ap_sum / static_cast<double>(evaluated),
          rr_sum / static_cast<double>(evaluated)};
}

AccF1 accuracy_f1(const ClassificationEval& evalset) {
  if (evalset.pairs.empty()) {
    fail(ErrorKind::invalid_argument, "classification eval set is empty");
  }
  std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (const auto& [label, score] : evalset.pairs) {
    if (label != 0 && label != 1) {
      fail(ErrorKind::invalid_argument, "labels must be binary");
    }
    if (!std::isfinite(score)) {
      fail(ErrorKind::invalid_argument, "scores must be finite");
    }
    int predicted = score >= evalset.threshold ? 1 : 0;
    if (predicted == label) ++correct;
    if (predicted == 1 && label == 1) ++tp;
    if (predicted == 1 && label == 0) ++fp;
    if (predicted == 0 && label == 1) ++fn;
  }
  double accuracy =
      static_cast<double>(correct) / static_cast<double>(evalset.pairs.size());
  double precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  double recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  double f1 = precision + recall > 0.0
                  ? 2.0 * precision * recall / (precision + recall)
                  : 0.0;
  return {accuracy, f1};
}

void write_trec_eval_files(const RankedEvalSet& evalset,
                           const std::string& qrels_path,
                           const std::string& results_path,
                           const std::string& run_id) {
  std::ofstream qrels(qrels_path);
  if (!qrels) fail(ErrorKind::io, "cannot write '" + qrels_path + "'");
  std::ofstream results(results_path);
  if (!results) fail(ErrorKind::io, "cannot write '" + results_path + "'");

  char buf[64];
  for (const auto& group : evalset.groups) {
    check_group(group);
    for (const auto& c : group.candidates) {
      qrels << group.query_id << " 0 " << c.id << " " << c.label << "\n";
    }
    std::vector<std::size_t> ranked = ranking(group);
    for (std::size_t rank = 1; rank <= ranked.size(); ++rank) {
      const auto& c = group.candidates[ranked[rank - 1]];
      std::snprintf(buf, sizeof(buf), "%.6f", c.score);
      results << group.query_id << " Q0 " << c.id << " " << rank << " " << buf
              << " " << run_id << "\n";
    }
  }
}

}  // namespace lexdecomp
