#include "lexdecomp/numerics.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    fail(ErrorKind::dimension_mismatch,
         "matrix data length " + std::to_string(data_.size()) +
             " does not equal " + std::to_string(rows_) + "x" +
             std::to_string(cols_));
  }
}

bool Matrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out.at(j, i) = at(i, j);
    }
  }
  return out;
}

namespace {

void require_same_dim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    fail(ErrorKind::dimension_mismatch,
         "vector dims differ: " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()));
  }
}

void require_finite(std::span<const double> a, const char* what) {
  for (double x : a) {
    if (!std::isfinite(x)) {
      fail(ErrorKind::invalid_argument,
           std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  require_finite(a, "dot input");
  require_finite(b, "dot input");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm(std::span<const double> a) {
  double acc = 0.0;
  for (double x : a) acc += x * x;
  return std::sqrt(acc);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a, b);
  require_finite(a, "cosine input");
  require_finite(b, "cosine input");
  double na = norm(a);
  double nb = norm(b);
  if (na < kNormEpsilon || nb < kNormEpsilon) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc / (na * nb);
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    fail(ErrorKind::dimension_mismatch,
         "adam_step shapes disagree: params " + std::to_string(params.size()) +
             ", grads " + std::to_string(grads.size()) + ", state " +
             std::to_string(state.m.size()));
  }
  require_finite(grads, "adam_step gradients");
  state.step += 1;
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * grads[i];
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * grads[i] * grads[i];
    double m_hat = state.m[i] / bias1;
    double v_hat = state.v[i] / bias2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

double uniform_real(Rng& rng, double lo, double hi) {
  // 53 random mantissa bits -> [0, 1)
  double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

double normal(Rng& rng) {
  // Box-Muller; u1 kept away from 0 so the log is finite.
  double u1 = uniform_real(rng, 0.0, 1.0);
  double u2 = uniform_real(rng, 0.0, 1.0);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::invalid_argument, "uniform_index bound is 0");
  // rejection sampling; no modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

std::uint64_t fnv1a(std::span<const unsigned char> bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a(const std::string& text) {
  return fnv1a(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

}  // namespace lexdecomp
