#include "lexdecomp/matcher.hpp"

#include <algorithm>
#include <cmath>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

MatchKind match_kind_from_string(const std::string& name) {
  if (name == "global") return MatchKind::global;
  if (name == "local") return MatchKind::local;
  if (name == "max") return MatchKind::max;
  fail(ErrorKind::config, "unknown matching function '" + name + "'");
}

const char* match_kind_name(MatchKind kind) {
  switch (kind) {
    case MatchKind::global: return "global";
    case MatchKind::local: return "local";
    case MatchKind::max: return "max";
  }
  return "unknown";
}

void MatchStrategy::validate() const {
  if (kind == MatchKind::local && window < 1) {
    fail(ErrorKind::config, "local matching requires window >= 1");
  }
}

std::string MatchStrategy::to_string() const {
  if (kind == MatchKind::local) {
    return "local-" + std::to_string(window);
  }
  return match_kind_name(kind);
}

SimilarityMatrix similarity_matrix(const SentenceMatrix& s,
                                   const SentenceMatrix& t) {
  if (s.dim() != t.dim()) {
    fail(ErrorKind::dimension_mismatch,
         "sentence dims differ: " + std::to_string(s.dim()) + " vs " +
             std::to_string(t.dim()));
  }
  Matrix a(s.length(), t.length());
  for (std::size_t i = 0; i < s.length(); ++i) {
    auto si = s.vectors.row(i);
    for (std::size_t j = 0; j < t.length(); ++j) {
      a.at(i, j) = cosine(si, t.vectors.row(j));
    }
  }
  return {std::move(a)};
}

namespace {

std::size_t argmax_row(const Matrix& a, std::size_t i) {
  std::size_t best = 0;
  double best_val = a.at(i, 0);
  for (std::size_t j = 1; j < a.cols(); ++j) {
    if (a.at(i, j) > best_val) {  // ties keep the smallest index
      best_val = a.at(i, j);
      best = j;
    }
  }
  return best;
}

void weighted_average(const Matrix& a, const SentenceMatrix& t, std::size_t i,
                      std::size_t j_begin, std::size_t j_end, std::size_t k,
                      std::span<double> out) {
  double denom = 0.0;
  for (std::size_t j = j_begin; j <= j_end; ++j) denom += a.at(i, j);
  if (std::abs(denom) < kDenomEpsilon) {
    // near-zero normalizer: fall back to the most similar word
    auto tk = t.vectors.row(k);
    std::copy(tk.begin(), tk.end(), out.begin());
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = j_begin; j <= j_end; ++j) {
    double w = a.at(i, j);
    auto tj = t.vectors.row(j);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * tj[c];
  }
  for (double& x : out) x /= denom;
}

}  // namespace

MatchResult match(const SentenceMatrix& s, const SentenceMatrix& t,
                  const SimilarityMatrix& sim, const MatchStrategy& strategy) {
  strategy.validate();
  const Matrix& a = sim.a;
  if (a.rows() != s.length() || a.cols() != t.length()) {
    fail(ErrorKind::dimension_mismatch,
         "similarity matrix is " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()) + " but sentences are " +
             std::to_string(s.length()) + " and " + std::to_string(t.length()));
  }
  if (s.dim() != t.dim()) {
    fail(ErrorKind::dimension_mismatch, "sentence dims differ");
  }

  const std::size_t n = t.length();
  MatchResult result;
  result.matched = Matrix(s.length(), t.dim());
  result.best_index.resize(s.length());

  for (std::size_t i = 0; i < s.length(); ++i) {
    std::size_t k = argmax_row(a, i);
    result.best_index[i] = k;
    auto out = result.matched.row(i);
    switch (strategy.kind) {
      case MatchKind::global:
        weighted_average(a, t, i, 0, n - 1, k, out);
        break;
      case MatchKind::local: {
        std::size_t w = strategy.window;
        std::size_t lo = k >= w ? k - w : 0;  // clip window to the sentence
        std::size_t hi = std::min(k + w, n - 1);
        weighted_average(a, t, i, lo, hi, k, out);
        break;
      }
      case MatchKind::max: {
        auto tk = t.vectors.row(k);
        std::copy(tk.begin(), tk.end(), out.begin());
        break;
      }
    }
  }
  return result;
}

}  // namespace lexdecomp
