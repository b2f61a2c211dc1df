#pragma once

#include <string>

#include "depnet/harness.hpp"

namespace depnet {

struct ProviderConfig {
  std::string embedding_endpoint;    // empty: built-in hashing embedder
  std::string abstractive_endpoint;  // empty: built-in concat fallback
  int timeout_ms = 5000;
  int retries = 2;
};

struct PipelineConfig {
  std::string data_path;
  std::string lexicons_dir = "assets/lexicons";
  std::string stopwords_path;  // defaults to <lexicons_dir>/stopwords.txt
  std::string embeddings_path; // word2vec text format, optional
  std::string checkpoint_dir = "checkpoint";
  ProviderConfig provider;
  RunConfig run;
  double train_fraction = 0.8;
  int cv_k = 5;
  int jobs = 1;
  long min_posts = 10;
  long max_followers = 5000;
  bool keep_non_english = false;

  std::string resolved_stopwords() const {
    return stopwords_path.empty() ? lexicons_dir + "/stopwords.txt" : stopwords_path;
  }
};

// `key = value` lines, '#' comments. Unknown keys are rejected.
PipelineConfig load_config_file(const std::string& path);
void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value);
// DEPNET_EMBED_ENDPOINT / DEPNET_SUMMARY_ENDPOINT beat the config file.
void apply_env_overrides(PipelineConfig& cfg);

}  // namespace depnet
