#include "lexdecomp/decomposer.hpp"

#include <algorithm>
#include <cmath>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

DecompKind decomp_kind_from_string(const std::string& name) {
  if (name == "rigid") return DecompKind::rigid;
  if (name == "linear") return DecompKind::linear;
  if (name == "orthogonal") return DecompKind::orthogonal;
  fail(ErrorKind::config, "unknown decomposition '" + name + "'");
}

const char* decomp_kind_name(DecompKind kind) {
  switch (kind) {
    case DecompKind::rigid: return "rigid";
    case DecompKind::linear: return "linear";
    case DecompKind::orthogonal: return "orthogonal";
  }
  return "unknown";
}

namespace {

bool rows_equal(std::span<const double> a, std::span<const double> b) {
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (std::abs(a[c] - b[c]) > kRigidEqEpsilon) return false;
  }
  return true;
}

}  // namespace

std::pair<Matrix, Matrix> decompose(const SentenceMatrix& x,
                                    const MatchResult& x_hat,
                                    const DecompStrategy& strategy) {
  const Matrix& hat = x_hat.matched;
  if (hat.rows() != x.length() || hat.cols() != x.dim()) {
    fail(ErrorKind::dimension_mismatch,
         "matching vectors are " + std::to_string(hat.rows()) + "x" +
             std::to_string(hat.cols()) + " but sentence is " +
             std::to_string(x.length()) + "x" + std::to_string(x.dim()));
  }

  const std::size_t d = x.dim();
  Matrix plus(x.length(), d);
  Matrix minus(x.length(), d);

  for (std::size_t i = 0; i < x.length(); ++i) {
    auto xi = x.vectors.row(i);
    auto hi = hat.row(i);
    auto pi = plus.row(i);
    auto mi = minus.row(i);
    switch (strategy.kind) {
      case DecompKind::rigid: {
        if (rows_equal(xi, hi)) {
          std::copy(xi.begin(), xi.end(), pi.begin());
        } else {
          std::copy(xi.begin(), xi.end(), mi.begin());
        }
        break;
      }
      case DecompKind::linear: {
        double alpha = cosine(xi, hi);
        if (strategy.clamp_alpha) alpha = std::clamp(alpha, 0.0, 1.0);
        // minus as the residual keeps plus + minus == x exact
        for (std::size_t c = 0; c < d; ++c) {
          pi[c] = alpha * xi[c];
          mi[c] = xi[c] - pi[c];
        }
        break;
      }
      case DecompKind::orthogonal: {
        double denom = dot(hi, hi);
        if (std::sqrt(denom) < kNormEpsilon) {
          // projection onto ~0 is undefined; treat the word as uncovered
          std::copy(xi.begin(), xi.end(), mi.begin());
          break;
        }
        double scale = dot(xi, hi) / denom;
        for (std::size_t c = 0; c < d; ++c) {
          pi[c] = scale * hi[c];
          mi[c] = xi[c] - pi[c];
        }
        break;
      }
    }
  }
  return {std::move(plus), std::move(minus)};
}

}  // namespace lexdecomp
