#ifndef LEXDECOMP_METRICS_HPP
#define LEXDECOMP_METRICS_HPP

#include <string>
#include <utility>
#include <vector>

namespace lexdecomp {

struct RankedCandidate {
  std::string id;
  int label = 0;  // 1 = relevant
  double score = 0.0;
};

struct RankedGroup {
  std::string query_id;
  std::vector<RankedCandidate> candidates;
};

// Grouped query/candidate rankings for MAP and MRR.
struct RankedEvalSet {
  std::vector<RankedGroup> groups;
};

struct MapMrr {
  double map = 0.0;
  double mrr = 0.0;
};

// Candidates are ranked by descending score; ties keep the input order
// (stable sort, the usual trec_eval convention). Groups without a positive
// either drop out (drop_no_positive) or contribute AP = RR = 0.
MapMrr map_mrr(const RankedEvalSet& evalset, bool drop_no_positive);

struct ClassificationEval {
  std::vector<std::pair<int, double>> pairs;  // (label, score)
  double threshold = 0.5;
};

struct AccF1 {
  double accuracy = 0.0;
  double f1 = 0.0;  // positive class; 0 when precision+recall is 0
};

AccF1 accuracy_f1(const ClassificationEval& evalset);

// trec_eval cross-check files: qrels lines "qid 0 docid label" and results
// lines "qid Q0 docid rank score runid".
void write_trec_eval_files(const RankedEvalSet& evalset,
                           const std::string& qrels_path,
                           const std::string& results_path,
                           const std::string& run_id);

}  // namespace lexdecomp

#endif
