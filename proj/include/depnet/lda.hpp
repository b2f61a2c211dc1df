#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace depnet {

struct TopicModel {
  int k = 0;
  std::vector<std::string> vocab;                   // index -> word
  std::unordered_map<std::string, int> word_index;  // word -> index
  std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
  std::vector<std::vector<double>> theta;  // D x K, rows sum to 1
  double alpha = 0.1;
  double beta = 0.01;
  int iters = 500;
  uint64_t seed = 0;
  std::vector<double> log_likelihood;  // one entry per Gibbs sweep

  std::string to_json() const;
  static TopicModel from_json(const std::string& text);

  // Across-topic top word list: topic 0's top n, then topic 1's, ...
  std::vector<std::string> top_word_list(int n = 5) const;
};

// Collapsed Gibbs sampling. Documents must already be stop-word filtered
// and non-empty. phi/theta come from the final sweep's counts with
// Dirichlet smoothing.
TopicModel lda_fit(const std::vector<std::vector<std::string>>& docs, int k = 5,
                   double alpha = 0.1, double beta = 0.01, int iters = 500,
                   uint64_t seed = 0);

// Words with the n largest phi[topic][.], ties broken lexicographically.
std::vector<std::string> top_words(const TopicModel& model, int topic, int n = 5);

}  // namespace depnet
