#include "depnet/lda.hpp"

#include <algorithm>
#include <cmath>

#include "depnet/error.hpp"
#include "depnet/rng.hpp"
#include "json.hpp"

namespace depnet {

namespace {

// Collapsed joint log p(w, z | alpha, beta); used only for the trend check.
double joint_log_likelihood(const std::vector<std::vector<long>>& n_kv,
                            const std::vector<long>& n_k,
                            const std::vector<std::vector<long>>& n_dk,
                            const std::vector<long>& n_d, double alpha, double beta) {
  const int K = static_cast<int>(n_k.size());
  const int V = static_cast<int>(n_kv.empty() ? 0 : n_kv[0].size());
  const int D = static_cast<int>(n_d.size());
  double ll = 0;
  for (int k = 0; k < K; ++k) {
    for (int v = 0; v < V; ++v) ll += std::lgamma(beta + n_kv[k][v]) - std::lgamma(beta);
    ll += std::lgamma(beta * V) - std::lgamma(beta * V + n_k[k]);
  }
  for (int d = 0; d < D; ++d) {
    ll += std::lgamma(alpha * K) - std::lgamma(alpha * K + n_d[d]);
    for (int k = 0; k < K; ++k) ll += std::lgamma(alpha + n_dk[d][k]) - std::lgamma(alpha);
  }
  return ll;
}

}  // namespace

TopicModel lda_fit(const std::vector<std::vector<std::string>>& docs, int k,
                   double alpha, double beta, int iters, uint64_t seed) {
  if (k < 1) throw InvalidArgument("lda_fit: k must be >= 1");
  if (docs.empty()) throw InvalidArgument("lda_fit: no documents");
  for (size_t d = 0; d < docs.size(); ++d)
    if (docs[d].empty())
      throw InvalidArgument("lda_fit: document " + std::to_string(d) +
                            " is empty after stop-word removal");

  TopicModel model;
  model.k = k;
  model.alpha = alpha;
  model.beta = beta;
  model.iters = iters;
  model.seed = seed;

  // vocab in first-appearance order
  std::vector<std::vector<int>> w_docs(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const std::string& w : docs[d]) {
      auto it = model.word_index.find(w);
      int id;
      if (it == model.word_index.end()) {
        id = static_cast<int>(model.vocab.size());
        model.word_index.emplace(w, id);
        model.vocab.push_back(w);
      } else {
        id = it->second;
      }
      w_docs[d].push_back(id);
    }
  }
  const int V = static_cast<int>(model.vocab.size());
  const int D = static_cast<int>(docs.size());
  if (V == 0) throw InvalidArgument("lda_fit: empty vocabulary");

  std::vector<std::vector<long>> n_kv(k, std::vector<long>(V, 0));
  std::vector<long> n_k(k, 0);
  std::vector<std::vector<long>> n_dk(D, std::vector<long>(k, 0));
  std::vector<long> n_d(D, 0);
  std::vector<std::vector<int>> z_docs(docs.size());

  Rng rng(derive_seed(seed, "lda.gibbs"));
  for (int d = 0; d < D; ++d) {
    z_docs[d].resize(w_docs[d].size());
    for (size_t i = 0; i < w_docs[d].size(); ++i) {
      int z = static_cast<int>(rng.next_below(static_cast<uint64_t>(k)));
      z_docs[d][i] = z;
      n_kv[z][w_docs[d][i]]++;
      n_k[z]++;
      n_dk[d][z]++;
      n_d[d]++;
    }
  }

  std::vector<double> p(k);
  for (int it = 0; it < iters; ++it) {
    for (int d = 0; d < D; ++d) {
      for (size_t i = 0; i < w_docs[d].size(); ++i) {
        const int w = w_docs[d][i];
        const int old_z = z_docs[d][i];
        n_kv[old_z][w]--;
        n_k[old_z]--;
        n_dk[d][old_z]--;

        double total = 0;
        for (int t = 0; t < k; ++t) {
          p[t] = (n_kv[t][w] + beta) / (n_k[t] + beta * V) * (n_dk[d][t] + alpha);
          total += p[t];
        }
        double u = rng.next_double() * total;
        int new_z = 0;
        for (; new_z < k - 1; ++new_z) {
          u -= p[new_z];
          if (u <= 0) break;
        }
        z_docs[d][i] = new_z;
        n_kv[new_z][w]++;
        n_k[new_z]++;
        n_dk[d][new_z]++;
      }
    }
    model.log_likelihood.push_back(
        joint_log_likelihood(n_kv, n_k, n_dk, n_d, alpha, beta));
  }

  model.phi.assign(k, std::vector<double>(V, 0));
  for (int t = 0; t < k; ++t)
    for (int v = 0; v < V; ++v)
      model.phi[t][v] = (n_kv[t][v] + beta) / (n_k[t] + beta * V);
  model.theta.assign(D, std::vector<double>(k, 0));
  for (int d = 0; d < D; ++d)
    for (int t = 0; t < k; ++t)
      model.theta[d][t] = (n_dk[d][t] + alpha) / (n_d[d] + alpha * k);
  return model;
}

std::vector<std::string> top_words(const TopicModel& model, int topic, int n) {
  if (topic < 0 || topic >= model.k)
    throw InvalidArgument("top_words: topic index " + std::to_string(topic) +
                          " out of range [0, " + std::to_string(model.k) + ")");
  const int V = static_cast<int>(model.vocab.size());
  if (n > V) throw InvalidArgument("top_words: n exceeds vocabulary size");
  std::vector<int> order(V);
  for (int v = 0; v < V; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (model.phi[topic][a] != model.phi[topic][b])
      return model.phi[topic][a] > model.phi[topic][b];
    return model.vocab[a] < model.vocab[b];
  });
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(model.vocab[order[i]]);
  return out;
}

std::vector<std::string> TopicModel::top_word_list(int n) const {
  std::vector<std::string> out;
  for (int t = 0; t < k; ++t)
    for (const std::string& w : top_words(*this, t, std::min(n, static_cast<int>(vocab.size()))))
      out.push_back(w);
  return out;
}

std::string TopicModel::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["alpha"] = alpha;
  j["beta"] = beta;
  j["iters"] = iters;
  j["seed"] = seed;
  j["vocab"] = vocab;
  j["phi"] = phi;
  j["theta"] = theta;
  return j.dump();
}

TopicModel TopicModel::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TopicModel m;
  m.k = j.at("k").get<int>();
  m.alpha = j.at("alpha").get<double>();
  m.beta = j.at("beta").get<double>();
  m.iters = j.at("iters").get<int>();
  m.seed = j.at("seed").get<uint64_t>();
  m.vocab = j.at("vocab").get<std::vector<std::string>>();
  m.phi = j.at("phi").get<std::vector<std::vector<double>>>();
  m.theta = j.at("theta").get<std::vector<std::vector<double>>>();
  for (size_t i = 0; i < m.vocab.size(); ++i) m.word_index[m.vocab[i]] = static_cast<int>(i);
  return m;
}

}  // namespace depnet
