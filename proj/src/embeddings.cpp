#include "lexdecomp/embeddings.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lexdecomp/error.hpp"

namespace lexdecomp {

OovPolicy oov_policy_from_string(const std::string& name) {
  if (name == "zero") return OovPolicy::zero;
  if (name == "hash-random") return OovPolicy::hash_random;
  fail(ErrorKind::config, "unknown OOV policy '" + name + "'");
}

const char* oov_policy_name(OovPolicy policy) {
  return policy == OovPolicy::zero ? "zero" : "hash-random";
}

std::string lowercase_token(const std::string& token) {
  std::string out = token;
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

Vector hash_random_vector(const std::string& token, std::size_t dim) {
  Rng rng(fnv1a(token));
  Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = normal(rng);
  double n = norm(v);
  if (n < kNormEpsilon) {
    // astronomically unlikely; retry with a shifted seed
    Rng retry(fnv1a(token) ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < dim; ++i) v[i] = normal(retry);
    n = norm(v);
  }
  for (double& x : v) x /= n;
  return v;
}

namespace {

constexpr char kBinaryMagic[4] = {'E', 'M', 'B', '1'};

std::uint32_t read_u32le(std::istream& in, const std::string& path,
                         const char* what) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    fail(ErrorKind::parse, path + ": unexpected end of file reading " + what);
  }
  return static_cast<std::uint32_t>(buf[0]) |
         static_cast<std::uint32_t>(buf[1]) << 8 |
         static_cast<std::uint32_t>(buf[2]) << 16 |
         static_cast<std::uint32_t>(buf[3]) << 24;
}

float read_f32le(std::istream& in, const std::string& path, const char* what) {
  std::uint32_t bits = read_u32le(in, path, what);
  return std::bit_cast<float>(bits);
}

std::uint64_t hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (in.eof()) break;
  }
  return h;
}

}  // namespace

EmbeddingStore EmbeddingStore::load(const std::string& path, OovPolicy policy) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(ErrorKind::io, "cannot open embedding file '" + path + "'");
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  bool binary = probe.gcount() == 4 && std::memcmp(magic, kBinaryMagic, 4) == 0;
  probe.close();

  EmbeddingStore store;
  store.policy_ = policy;
  store.fingerprint_ = hash_file(path);

  std::vector<double> rows;
  std::size_t vocab_size = 0;

  if (binary) {
    std::ifstream in(path, std::ios::binary);
    in.ignore(4);
    vocab_size = read_u32le(in, path, "vocab size");
    store.dim_ = read_u32le(in, path, "dimension");
    if (store.dim_ == 0) fail(ErrorKind::parse, path + ": dimension is 0");
    rows.reserve(vocab_size * store.dim_);
    for (std::size_t r = 0; r < vocab_size; ++r) {
      std::uint32_t len = read_u32le(in, path, "token length");
      std::string token(len, '\0');
      if (!in.read(token.data(), len)) {
        fail(ErrorKind::parse, path + ": unexpected end of file reading token");
      }
      std::vector<double> vec(store.dim_);
      for (std::size_t c = 0; c < store.dim_; ++c) {
        vec[c] = static_cast<double>(read_f32le(in, path, "vector value"));
      }
      if (store.vocab_.count(token)) {
        store.duplicates_ += 1;  // first occurrence wins
        continue;
      }
      store.vocab_.emplace(std::move(token), rows.size() / store.dim_);
      rows.insert(rows.end(), vec.begin(), vec.end());
    }
  } else {
    std::ifstream in(path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
      fail_parse(path, 1, "empty embedding file");
    }
    ++line_no;
    {
      std::istringstream header(line);
      long long v = -1, d = -1;
      if (!(header >> v >> d) || v < 0 || d <= 0) {
        fail_parse(path, line_no, "malformed header, expected 'V D'");
      }
      std::string extra;
      if (header >> extra) {
        fail_parse(path, line_no, "malformed header, expected 'V D'");
      }
      vocab_size = static_cast<std::size_t>(v);
      store.dim_ = static_cast<std::size_t>(d);
    }
    rows.reserve(vocab_size * store.dim_);
    std::size_t parsed = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() && in.peek() == EOF) break;  // trailing newline
      std::istringstream fields(line);
      std::string token;
      if (!(fields >> token)) {
        fail_parse(path, line_no, "missing token");
      }
      std::vector<double> vec;
      vec.reserve(store.dim_);
      double x;
      while (fields >> x) vec.push_back(x);
      if (!fields.eof()) {
        fail_parse(path, line_no, "non-numeric vector value");
      }
      if (vec.size() != store.dim_) {
        fail_parse(path, line_no,
                   "row has " + std::to_string(vec.size()) +
                       " values, expected " + std::to_string(store.dim_));
      }
      ++parsed;
      if (parsed > vocab_size) {
        fail_parse(path, line_no,
                   "more rows than the declared vocab size " +
                       std::to_string(vocab_size));
      }
      if (store.vocab_.count(token)) {
        store.duplicates_ += 1;
        continue;
      }
      store.vocab_.emplace(std::move(token), rows.size() / store.dim_);
      rows.insert(rows.end(), vec.begin(), vec.end());
    }
    if (parsed < vocab_size) {
      fail_parse(path, line_no,
                 "declared vocab size " + std::to_string(vocab_size) +
                     " but file has " + std::to_string(parsed) + " rows");
    }
  }

  std::size_t kept = rows.size() / store.dim_;
  store.vectors_ = Matrix(kept, store.dim_, std::move(rows));
  if (!store.vectors_.all_finite()) {
    fail(ErrorKind::parse, path + ": embedding table contains non-finite values");
  }
  return store;
}

Vector EmbeddingStore::lookup(const std::string& token) const {
  auto it = vocab_.find(token);
  if (it != vocab_.end()) {
    auto row = vectors_.row(it->second);
    return Vector(row.begin(), row.end());
  }
  if (policy_ == OovPolicy::zero) return Vector(dim_, 0.0);
  return hash_random_vector(token, dim_);
}

SentenceMatrix EmbeddingStore::embed(const std::vector<std::string>& tokens,
                                     bool lowercase) const {
  return embed_sentence(*this, tokens, lowercase);
}

std::uint64_t EmbeddingStore::table_checksum() const {
  const auto& d = vectors_.data();
  return fnv1a(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(d.data()),
      d.size() * sizeof(double)));
}

SentenceMatrix embed_sentence(const EmbeddingStore& store,
                              const std::vector<std::string>& tokens,
                              bool lowercase) {
  if (tokens.empty()) {
    fail(ErrorKind::invalid_argument, "cannot embed an empty sentence");
  }
  SentenceMatrix out;
  out.tokens.reserve(tokens.size());
  out.vectors = Matrix(tokens.size(), store.dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string token = lowercase ? lowercase_token(tokens[i]) : tokens[i];
    Vector v = store.lookup(token);
    auto row = out.vectors.row(i);
    std::copy(v.begin(), v.end(), row.begin());
    out.tokens.push_back(std::move(token));
  }
  return out;
}

}  // namespace lexdecomp
