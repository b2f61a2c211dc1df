#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "depnet/corpus.hpp"

namespace depnet {

struct Summary {
  std::vector<std::string> tokens;           // length <= n_max
  std::vector<std::string> source_tweet_ids; // tweets the summary came from
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

class AbstractiveProvider {
 public:
  virtual ~AbstractiveProvider() = default;
  // Returns a condensed token sequence of length <= n_max.
  virtual std::vector<std::string> condense(const std::vector<std::string>& texts,
                                            int n_max) = 0;
};

// Feature-hashing bag of tokens with hash-derived signs. No model, no
// network; embeddings are deterministic per (dimension, seed).
class HashingEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(int dimension = 64, uint64_t seed = 0);
  int dimension() const override { return dim_; }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

 private:
  int dim_;
  uint64_t seed_;
};

// Concatenates the tweets' tokens in order and truncates to n_max.
class ConcatAbstractiveProvider : public AbstractiveProvider {
 public:
  std::vector<std::string> condense(const std::vector<std::string>& texts,
                                    int n_max) override;
};

struct HttpOptions {
  int timeout_ms = 5000;
  int retries = 2;
};

// POST {"texts": [...]} -> {"vectors": [[...]]}
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string endpoint, HttpOptions opts = {});
  int dimension() const override { return dim_; }
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

 private:
  std::string endpoint_;
  HttpOptions opts_;
  int dim_ = -1;  // learned from the first response
};

// POST {"texts": [...]} -> {"summary": "..."}
class HttpAbstractiveProvider : public AbstractiveProvider {
 public:
  HttpAbstractiveProvider(std::string endpoint, HttpOptions opts = {});
  std::vector<std::string> condense(const std::vector<std::string>& texts,
                                    int n_max) override;

 private:
  std::string endpoint_;
  HttpOptions opts_;
};

// Cluster the tweets' embeddings with k = m and keep the tweet nearest each
// centroid, deduplicated, in chronological order. m >= |tweets| returns all.
std::vector<Tweet> extract(const std::vector<Tweet>& tweets, EmbeddingProvider& provider,
                           int m, uint64_t seed, bool cosine = false);

// Condense the selected tweets; falls back to ordered concatenation when the
// provider fails or returns nothing.
Summary abstractive(const std::vector<Tweet>& selected, AbstractiveProvider& provider,
                    int n_max = 100);

// extract + abstractive in one call.
Summary summarize_user(const UserRecord& user, EmbeddingProvider& embedder,
                       AbstractiveProvider& condenser, int m = 20, int n_max = 100,
                       uint64_t seed = 0, bool cosine = false);

}  // namespace depnet
