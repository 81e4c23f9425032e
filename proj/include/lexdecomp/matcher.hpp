#ifndef LEXDECOMP_MATCHER_HPP
#define LEXDECOMP_MATCHER_HPP

#include <string>
#include <vector>

#include "lexdecomp/embeddings.hpp"
#include "lexdecomp/numerics.hpp"

namespace lexdecomp {

// Word-by-word cosine similarities between two sentences; entry (i, j) is
// cosine(s_i, t_j).
struct SimilarityMatrix {
  Matrix a;  // m x n

  std::size_t source_len() const { return a.rows(); }
  std::size_t target_len() const { return a.cols(); }
  SimilarityMatrix transposed() const { return {a.transposed()}; }
};

enum class MatchKind { global, local, max };

MatchKind match_kind_from_string(const std::string& name);
const char* match_kind_name(MatchKind kind);

struct MatchStrategy {
  MatchKind kind = MatchKind::local;
  std::size_t window = 3;  // local only

  void validate() const;
  std::string to_string() const;  // "max", "global", "local-3"
};

// Semantic matching vectors for one direction: row i is the composition of
// the other sentence's vectors that covers word i.
struct MatchResult {
  Matrix matched;                  // m x d
  std::vector<std::size_t> best_index;  // argmax_j a(i, j), ties -> smallest j
};

SimilarityMatrix similarity_matrix(const SentenceMatrix& s,
                                   const SentenceMatrix& t);

// Computes matching vectors for every row of s against t, where a was built
// from (s, t). The reverse direction is match(t, s, a.transposed(), ...).
MatchResult match(const SentenceMatrix& s, const SentenceMatrix& t,
                  const SimilarityMatrix& a, const MatchStrategy& strategy);

// Weighted-average rows whose normalizer is smaller than this fall back to
// the max rule (cosine weights can be negative and cancel).
inline constexpr double kDenomEpsilon = 1e-6;

}  // namespace lexdecomp

#endif
