#ifndef LEXDECOMP_DECOMPOSER_HPP
#define LEXDECOMP_DECOMPOSER_HPP

#include <string>
#include <utility>

#include "lexdecomp/embeddings.hpp"
#include "lexdecomp/matcher.hpp"
#include "lexdecomp/numerics.hpp"

namespace lexdecomp {

enum class DecompKind { rigid, linear, orthogonal };

DecompKind decomp_kind_from_string(const std::string& name);
const char* decomp_kind_name(DecompKind kind);

struct DecompStrategy {
  DecompKind kind = DecompKind::orthogonal;
  // Clamp the linear split's cosine weight to [0, 1]; off by default so
  // negative weights follow the formula literally.
  bool clamp_alpha = false;
};

// Per-row entry-wise tolerance for the rigid strategy's equality test.
inline constexpr double kRigidEqEpsilon = 1e-9;

// Similar/dissimilar component matrices for both sentences of a pair.
struct DecomposedPair {
  Matrix s_plus, s_minus;  // m x d
  Matrix t_plus, t_minus;  // n x d
};

// Splits every word vector of x into the part covered by its matching vector
// and the remainder. Returns (plus, minus), both shaped like x.vectors.
std::pair<Matrix, Matrix> decompose(const SentenceMatrix& x,
                                    const MatchResult& x_hat,
                                    const DecompStrategy& strategy);

}  // namespace lexdecomp

#endif
