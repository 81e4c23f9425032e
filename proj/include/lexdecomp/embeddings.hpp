#ifndef LEXDECOMP_EMBEDDINGS_HPP
#define LEXDECOMP_EMBEDDINGS_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexdecomp/numerics.hpp"

namespace lexdecomp {

enum class OovPolicy { zero, hash_random };

OovPolicy oov_policy_from_string(const std::string& name);
const char* oov_policy_name(OovPolicy policy);

// Ordered word vectors for one sentence; rows follow the token order.
struct SentenceMatrix {
  std::vector<std::string> tokens;
  Matrix vectors;  // token count x dim

  std::size_t length() const { return tokens.size(); }
  std::size_t dim() const { return vectors.cols(); }
};

// Read-only vocabulary of pre-trained word vectors. Lookup is total: tokens
// missing from the vocabulary resolve through the OOV policy.
class EmbeddingStore {
 public:
  static EmbeddingStore load(const std::string& path, OovPolicy policy);

  std::size_t dim() const { return dim_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  OovPolicy oov_policy() const { return policy_; }
  std::size_t duplicate_count() const { return duplicates_; }
  std::uint64_t file_fingerprint() const { return fingerprint_; }

  bool contains(const std::string& token) const {
    return vocab_.count(token) > 0;
  }

  // Vector for a token; OOV tokens yield the policy vector (all-zero, or a
  // deterministic unit-norm vector seeded by the token's FNV hash).
  Vector lookup(const std::string& token) const;

  SentenceMatrix embed(const std::vector<std::string>& tokens,
                       bool lowercase = true) const;

  // Hash of the in-memory vector table; training must never change it.
  std::uint64_t table_checksum() const;

 private:
  EmbeddingStore() = default;

  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> vocab_;
  Matrix vectors_;
  OovPolicy policy_ = OovPolicy::hash_random;
  std::size_t duplicates_ = 0;
  std::uint64_t fingerprint_ = 0;
};

std::string lowercase_token(const std::string& token);

// Deterministic unit-norm vector for an out-of-vocabulary token.
Vector hash_random_vector(const std::string& token, std::size_t dim);

SentenceMatrix embed_sentence(const EmbeddingStore& store,
                              const std::vector<std::string>& tokens,
                              bool lowercase = true);

}  // namespace lexdecomp

#endif
