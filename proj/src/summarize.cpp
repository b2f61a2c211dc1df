#include "depnet/summarize.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <set>

#include "depnet/error.hpp"
#include "depnet/kmeans.hpp"
#include "depnet/rng.hpp"
#include "depnet/text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace depnet {

HashingEmbeddingProvider::HashingEmbeddingProvider(int dimension, uint64_t seed)
    : dim_(dimension), seed_(seed) {
  if (dimension < 1) throw InvalidArgument("embedding dimension must be >= 1");
}

std::vector<std::vector<double>> HashingEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    std::vector<double> v(dim_, 0.0);
    for (const std::string& tok : tokenize(text)) {
      uint64_t h = fnv1a(tok, seed_ ^ 0xcbf29ce484222325ULL);
      size_t idx = static_cast<size_t>(h % static_cast<uint64_t>(dim_));
      double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
      v[idx] += sign;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::string> ConcatAbstractiveProvider::condense(
    const std::vector<std::string>& texts, int n_max) {
  std::vector<std::string> tokens;
  for (const std::string& t : texts) {
    for (std::string& tok : tokenize(t)) {
      if (static_cast<int>(tokens.size()) >= n_max) return tokens;
      tokens.push_back(std::move(tok));
    }
  }
  return tokens;
}

namespace {

// "http://host:port/path" -> (host:port, /path)
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  std::string rest = url;
  auto scheme = rest.find("://");
  std::string prefix = "http://";
  if (scheme != std::string::npos) {
    prefix = rest.substr(0, scheme + 3);
    rest = rest.substr(scheme + 3);
  }
  auto slash = rest.find('/');
  std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  return {prefix + host, path};
}

nlohmann::json post_json(const std::string& endpoint, const HttpOptions& opts,
                         const nlohmann::json& body, const char* what) {
  auto [host, path] = split_endpoint(endpoint);
  httplib::Client client(host);
  client.set_connection_timeout(0, opts.timeout_ms * 1000);
  client.set_read_timeout(0, opts.timeout_ms * 1000);
  std::string payload = body.dump();
  std::string last_error;
  for (int attempt = 0; attempt <= opts.retries; ++attempt) {
    auto res = client.Post(path, payload, "application/json");
    if (res && res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        last_error = std::string("bad JSON in response: ") + e.what();
        continue;
      }
    }
    last_error = res ? "HTTP status " + std::to_string(res->status)
                     : "connection failed";
  }
  throw Error(std::string(what) + " provider at '" + endpoint + "' failed: " + last_error);
}

}  // namespace

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string endpoint, HttpOptions opts)
    : endpoint_(std::move(endpoint)), opts_(opts) {}

std::vector<std::vector<double>> HttpEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
  nlohmann::json body;
  body["texts"] = texts;
  nlohmann::json res = post_json(endpoint_, opts_, body, "embedding");
  if (!res.contains("vectors") || !res["vectors"].is_array())
    throw Error("embedding provider response missing \"vectors\"");
  auto vectors = res["vectors"].get<std::vector<std::vector<double>>>();
  if (vectors.size() != texts.size())
    throw Error("embedding provider returned " + std::to_string(vectors.size()) +
                " vectors for " + std::to_string(texts.size()) + " texts");
  for (const auto& v : vectors) {
    if (dim_ < 0) dim_ = static_cast<int>(v.size());
    if (static_cast<int>(v.size()) != dim_)
      throw Error("embedding provider returned inconsistent dimensions");
  }
  return vectors;
}

HttpAbstractiveProvider::HttpAbstractiveProvider(std::string endpoint, HttpOptions opts)
    : endpoint_(std::move(endpoint)), opts_(opts) {}

std::vector<std::string> HttpAbstractiveProvider::condense(
    const std::vector<std::string>& texts, int n_max) {
  nlohmann::json body;
  body["texts"] = texts;
  nlohmann::json res = post_json(endpoint_, opts_, body, "abstractive");
  if (!res.contains("summary") || !res["summary"].is_string())
    throw Error("abstractive provider response missing \"summary\"");
  std::vector<std::string> tokens = tokenize(res["summary"].get<std::string>());
  if (static_cast<int>(tokens.size()) > n_max) tokens.resize(n_max);
  return tokens;
}

std::vector<Tweet> extract(const std::vector<Tweet>& tweets, EmbeddingProvider& provider,
                           int m, uint64_t seed, bool cosine) {
  if (tweets.empty()) throw InvalidArgument("extract: no tweets");
  if (m < 1) throw InvalidArgument("extract: m must be >= 1");
  if (m >= static_cast<int>(tweets.size())) return tweets;

  std::vector<std::string> texts;
  texts.reserve(tweets.size());
  for (const Tweet& t : tweets) texts.push_back(t.text);
  std::vector<std::vector<double>> points;
  try {
    points = provider.embed(texts);
  } catch (const Error& e) {
    throw Error("extract: embedding batch of " + std::to_string(texts.size()) +
                " tweets failed: " + e.what());
  }
  if (cosine) {
    for (auto& p : points) {
      double norm = 0;
      for (double x : p) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0)
        for (double& x : p) x /= norm;
    }
  }

  KMeansResult km = kmeans(points, m, derive_seed(seed, "extract.kmeans"));
  std::set<size_t> chosen;  // ordered -> chronological output
  for (int c = 0; c < m; ++c) {
    double best_d = std::numeric_limits<double>::infinity();
    size_t best_i = 0;
    bool any = false;
    for (size_t i = 0; i < points.size(); ++i) {
      if (km.assignments[i] != c) continue;
      double d = squared_distance(points[i], km.centroids[c]);
      if (d < best_d) {
        best_d = d;
        best_i = i;
        any = true;
      }
    }
    if (any) chosen.insert(best_i);
  }
  std::vector<Tweet> out;
  out.reserve(chosen.size());
  for (size_t i : chosen) out.push_back(tweets[i]);
  return out;
}

Summary abstractive(const std::vector<Tweet>& selected, AbstractiveProvider& provider,
                    int n_max) {
  if (selected.empty()) throw InvalidArgument("abstractive: no tweets selected");
  std::vector<std::string> texts;
  Summary s;
  for (const Tweet& t : selected) {
    texts.push_back(t.text);
    s.source_tweet_ids.push_back(t.id);
  }
  try {
    s.tokens = provider.condense(texts, n_max);
  } catch (const Error& e) {
    std::cerr << "warning: abstractive provider failed (" << e.what()
              << "); falling back to concatenation\n";
    s.tokens.clear();
  }
  if (s.tokens.empty()) {
    ConcatAbstractiveProvider fallback;
    s.tokens = fallback.condense(texts, n_max);
  }
  if (static_cast<int>(s.tokens.size()) > n_max) s.tokens.resize(n_max);
  return s;
}

Summary summarize_user(const UserRecord& user, EmbeddingProvider& embedder,
                       AbstractiveProvider& condenser, int m, int n_max, uint64_t seed,
                       bool cosine) {
  std::vector<Tweet> selected = extract(user.tweets, embedder, m, seed, cosine);
  return abstractive(selected, condenser, n_max);
}

}  // namespace depnet
