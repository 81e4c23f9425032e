#include "lexdecomp/composer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

std::size_t FilterBank::window_of(std::size_t filter) const {
  std::size_t seen = 0;
  for (const auto& g : groups) {
    seen += g.count;
    if (filter < seen) return g.window;
  }
  fail(ErrorKind::invalid_argument,
       "filter index " + std::to_string(filter) + " out of range");
}

std::size_t FilterBank::weight_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  return n;
}

FilterBank FilterBank::init(std::size_t dim,
                            const std::vector<FilterGroup>& groups, Rng& rng) {
  FilterBank bank;
  bank.dim = dim;
  bank.groups = groups;
  for (const auto& g : groups) {
    double r = std::sqrt(6.0 / (static_cast<double>(dim * g.window) + 1.0));
    for (std::size_t f = 0; f < g.count; ++f) {
      Matrix w(dim, g.window);
      for (double& x : w.data()) x = uniform_real(rng, -r, r);
      bank.weights.push_back(std::move(w));
      bank.biases.push_back(0.0);
    }
  }
  bank.validate();
  return bank;
}

void FilterBank::validate() const {
  if (dim == 0) fail(ErrorKind::config, "filter bank dimension is 0");
  if (groups.empty()) fail(ErrorKind::config, "filter bank has no groups");
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.window < 1) fail(ErrorKind::config, "filter window must be >= 1");
    if (g.count < 1) fail(ErrorKind::config, "filter group count must be >= 1");
    total += g.count;
  }
  if (weights.size() != total || biases.size() != total) {
    fail(ErrorKind::dimension_mismatch,
         "filter bank holds " + std::to_string(weights.size()) + " weights / " +
             std::to_string(biases.size()) + " biases but groups declare " +
             std::to_string(total));
  }
  std::size_t f = 0;
  for (const auto& g : groups) {
    for (std::size_t k = 0; k < g.count; ++k, ++f) {
      if (weights[f].rows() != dim || weights[f].cols() != g.window) {
        fail(ErrorKind::dimension_mismatch,
             "filter " + std::to_string(f) + " is " +
                 std::to_string(weights[f].rows()) + "x" +
                 std::to_string(weights[f].cols()) + ", expected " +
                 std::to_string(dim) + "x" + std::to_string(g.window));
      }
      if (!weights[f].all_finite()) {
        fail(ErrorKind::invalid_argument,
             "filter " + std::to_string(f) + " contains non-finite weights");
      }
    }
  }
}

FilterBankGrad FilterBankGrad::zeros_like(const FilterBank& bank) {
  FilterBankGrad g;
  g.weights.reserve(bank.weights.size());
  for (const auto& w : bank.weights) g.weights.emplace_back(w.rows(), w.cols());
  g.biases.assign(bank.biases.size(), 0.0);
  return g;
}

namespace {

std::size_t max_window(const FilterBank& bank) {
  std::size_t h = 1;
  for (const auto& g : bank.groups) h = std::max(h, g.window);
  return h;
}

// w * patch per Eq-style elementwise sum: both channels share the weights,
// so the patch source is the precomputed plus+minus matrix.
double convolve_patch(const Matrix& w, const Matrix& combined,
                      std::size_t start) {
  double acc = 0.0;
  const std::size_t d = w.rows();
  const std::size_t h = w.cols();
  for (std::size_t l = 0; l < h; ++l) {
    auto row = combined.row(start + l);
    for (std::size_t c = 0; c < d; ++c) acc += w.at(c, l) * row[c];
  }
  return acc;
}

}  // namespace

FeatureVector compose(const Matrix& plus, const Matrix& minus,
                      const FilterBank& bank, ComposeCache* cache) {
  bank.validate();
  if (!plus.same_shape(minus)) {
    fail(ErrorKind::dimension_mismatch,
         "plus is " + std::to_string(plus.rows()) + "x" +
             std::to_string(plus.cols()) + " but minus is " +
             std::to_string(minus.rows()) + "x" + std::to_string(minus.cols()));
  }
  if (plus.cols() != bank.dim) {
    fail(ErrorKind::dimension_mismatch,
         "input dim " + std::to_string(plus.cols()) +
             " does not match filter bank dim " + std::to_string(bank.dim));
  }
  if (plus.rows() == 0) {
    fail(ErrorKind::invalid_argument, "compose input has no rows");
  }

  // Channels are summed under shared weights; pad with zero rows only when
  // the sentence is shorter than the widest filter.
  const std::size_t padded_len = std::max(plus.rows(), max_window(bank));
  Matrix combined(padded_len, bank.dim);
  for (std::size_t i = 0; i < plus.rows(); ++i) {
    auto out = combined.row(i);
    auto p = plus.row(i);
    auto m = minus.row(i);
    for (std::size_t c = 0; c < bank.dim; ++c) out[c] = p[c] + m[c];
  }

  FeatureVector features;
  features.values.resize(bank.total_filters());
  features.argmax_positions.resize(bank.total_filters());

  std::size_t f = 0;
  for (const auto& g : bank.groups) {
    const std::size_t patches = padded_len - g.window + 1;
    for (std::size_t k = 0; k < g.count; ++k, ++f) {
      const Matrix& w = bank.weights[f];
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_pos = 0;
      for (std::size_t i = 0; i < patches; ++i) {
        double c = std::tanh(convolve_patch(w, combined, i) + bank.biases[f]);
        if (c > best) {  // ties keep the smallest patch index
          best = c;
          best_pos = i;
        }
      }
      features.values[f] = best;
      features.argmax_positions[f] = best_pos;
    }
  }

  if (cache) {
    cache->combined = std::move(combined);
    cache->features = features;
    cache->dim = bank.dim;
    cache->total_filters = bank.total_filters();
  }
  return features;
}

void compose_backward(std::span<const double> grad_out,
                      const ComposeCache& cache, const FilterBank& bank,
                      FilterBankGrad& acc) {
  if (cache.empty()) {
    fail(ErrorKind::invalid_argument,
         "compose_backward called without a forward cache");
  }
  if (cache.total_filters != bank.total_filters() || cache.dim != bank.dim) {
    fail(ErrorKind::invalid_argument,
         "compose cache does not match the filter bank shape");
  }
  if (grad_out.size() != bank.total_filters()) {
    fail(ErrorKind::dimension_mismatch,
         "grad_out length " + std::to_string(grad_out.size()) +
             " does not equal filter count " +
             std::to_string(bank.total_filters()));
  }
  if (acc.weights.size() != bank.weights.size() ||
      acc.biases.size() != bank.biases.size()) {
    fail(ErrorKind::dimension_mismatch,
         "gradient accumulator does not match the filter bank");
  }

  std::size_t f = 0;
  for (const auto& g : bank.groups) {
    for (std::size_t k = 0; k < g.count; ++k, ++f) {
      if (grad_out[f] == 0.0) continue;
      const double c = cache.features.values[f];
      const double d_pre = grad_out[f] * (1.0 - c * c);  // tanh'
      const std::size_t start = cache.features.argmax_positions[f];
      Matrix& gw = acc.weights[f];
      for (std::size_t l = 0; l < g.window; ++l) {
        auto row = cache.combined.row(start + l);
        for (std::size_t cidx = 0; cidx < bank.dim; ++cidx) {
          gw.at(cidx, l) += d_pre * row[cidx];
        }
      }
      acc.biases[f] += d_pre;
    }
  }
}

std::vector<FilterGroup> parse_filter_groups(const std::string& text) {
  std::vector<FilterGroup> groups;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) {
      fail(ErrorKind::config,
           "bad filter group '" + item + "', expected 'window:count'");
    }
    try {
      long long h = std::stoll(item.substr(0, colon));
      long long n = std::stoll(item.substr(colon + 1));
      if (h < 1 || n < 1) throw std::out_of_range("nonpositive");
      groups.push_back({static_cast<std::size_t>(h), static_cast<std::size_t>(n)});
    } catch (const std::exception&) {
      fail(ErrorKind::config,
           "bad filter group '" + item + "', expected 'window:count'");
    }
  }
  if (groups.empty()) {
    fail(ErrorKind::config, "filter specification '" + text + "' is empty");
  }
  return groups;
}

std::string filter_groups_to_string(const std::vector<FilterGroup>& groups) {
  std::string out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(groups[i].window) + ":" +
           std::to_string(groups[i].count);
  }
  return out;
}

}  // namespace lexdecomp
