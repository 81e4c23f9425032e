#ifndef LEXDECOMP_NUMERICS_HPP
#define LEXDECOMP_NUMERICS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lexdecomp {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. All model math runs in 64-bit precision.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Guard below which a vector is treated as zero (cosine returns 0,
// projections fall back to the uncovered case).
inline constexpr double kNormEpsilon = 1e-12;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double cosine(std::span<const double> a, std::span<const double> b);

// Adam optimizer state for one flat parameter array.
struct AdamState {
  explicit AdamState(std::size_t size, double learning_rate = 1e-3,
                     double beta1 = 0.9, double beta2 = 0.999,
                     double epsilon = 1e-8)
      : m(size, 0.0),
        v(size, 0.0),
        step(0),
        learning_rate(learning_rate),
        beta1(beta1),
        beta2(beta2),
        epsilon(epsilon) {}

  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step;
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
};

// One bias-corrected Adam update, in place. params and grads must match the
// state's size; NaN gradients are rejected.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state);

// Deterministic random helpers. mt19937_64 output is fully specified by the
// standard; the std distributions are not, so sampling is done by hand to
// keep seeded runs bitwise reproducible across toolchains.
using Rng = std::mt19937_64;

double uniform_real(Rng& rng, double lo, double hi);
double normal(Rng& rng);
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);  // [0, bound)

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// FNV-1a 64-bit hash; used for OOV seeding and file fingerprints.
std::uint64_t fnv1a(std::span<const unsigned char> bytes);
std::uint64_t fnv1a(const std::string& text);

}  // namespace lexdecomp

#endif
