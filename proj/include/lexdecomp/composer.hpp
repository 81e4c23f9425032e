#ifndef LEXDECOMP_COMPOSER_HPP
#define LEXDECOMP_COMPOSER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lexdecomp/numerics.hpp"

namespace lexdecomp {

struct FilterGroup {
  std::size_t window = 0;  // h
  std::size_t count = 0;   // filters of this width
};

// N-gram convolution filters over the decomposed channels. Each filter is a
// d x h weight matrix plus a bias; all filters of a group share the window.
struct FilterBank {
  std::size_t dim = 0;
  std::vector<FilterGroup> groups;
  std::vector<Matrix> weights;  // one d x h matrix per filter, group order
  std::vector<double> biases;   // one per filter

  std::size_t total_filters() const { return weights.size(); }
  std::size_t window_of(std::size_t filter) const;
  std::size_t weight_count() const;

  // Filters drawn uniformly from [-r, r], r = sqrt(6 / (d*h + 1)); biases 0.
  static FilterBank init(std::size_t dim, const std::vector<FilterGroup>& groups,
                         Rng& rng);
  void validate() const;
};

// One pooled feature per filter plus the patch index that won the pool
// (needed to route gradients).
struct FeatureVector {
  std::vector<double> values;
  std::vector<std::size_t> argmax_positions;
};

// Forward intermediates kept for compose_backward.
struct ComposeCache {
  Matrix combined;  // zero-padded plus + minus, patch source
  FeatureVector features;
  std::size_t dim = 0;
  std::size_t total_filters = 0;

  bool empty() const { return total_filters == 0; }
};

// Gradient accumulators shaped like a FilterBank's parameters.
struct FilterBankGrad {
  std::vector<Matrix> weights;
  std::vector<double> biases;

  static FilterBankGrad zeros_like(const FilterBank& bank);
};

// Applies every filter to aligned patches of both channels (weights shared,
// channels summed before tanh) and max-pools each filter's features. Inputs
// shorter than a filter's window are zero-padded up to one patch.
FeatureVector compose(const Matrix& plus, const Matrix& minus,
                      const FilterBank& bank, ComposeCache* cache = nullptr);

// Routes d(loss)/d(features) through the pooled argmax patches into the
// caller's accumulators. grad_out must match the bank's filter count and the
// cache must come from a compose() call against the same bank shape.
void compose_backward(std::span<const double> grad_out,
                      const ComposeCache& cache, const FilterBank& bank,
                      FilterBankGrad& acc);

std::vector<FilterGroup> parse_filter_groups(const std::string& text);
std::string filter_groups_to_string(const std::vector<FilterGroup>& groups);

}  // namespace lexdecomp

#endif
