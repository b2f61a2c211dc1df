#pragma once

#include <memory>
#include <string>

#include "depnet/config.hpp"
#include "depnet/harness.hpp"

namespace depnet {

// Owning provider pair built from the config (HTTP when endpoints are set,
// otherwise null so the built-in deterministic providers apply).
struct ProviderBundle {
  std::unique_ptr<EmbeddingProvider> embedder;
  std::unique_ptr<AbstractiveProvider> condenser;
};
ProviderBundle build_providers(const PipelineConfig& cfg);

// Owning asset bundle: lexicons + stopwords loaded from disk.
struct AssetBundle {
  Lexicons lexicons;
  std::vector<std::string> stopwords;
  Assets view(const ProviderBundle& providers) const;
};
AssetBundle load_assets(const PipelineConfig& cfg);

struct IngestStats {
  long total = 0;
  long kept = 0;
  long dropped_activity = 0;  // post-count / follower filters
  long dropped_language = 0;
  long kept_depressed = 0;
  long kept_non_depressed = 0;
  long kept_unlabeled = 0;

  std::string to_json() const;
};

IngestStats run_ingest(const PipelineConfig& cfg, const std::string& input,
                       const std::string& output);

TopicModel run_fit_topics(const PipelineConfig& cfg,
                          const std::vector<UserRecord>& users,
                          const std::vector<std::string>& stopwords);

// One JSON object per user with the four modality blocks; byte-stable.
std::string feature_record_json(const UserRecord& user, const Lexicons& lexicons,
                                const std::vector<std::string>& topic_words);
std::string features_jsonl(const std::vector<UserRecord>& users, const Lexicons& lexicons,
                           const std::vector<std::string>& topic_words);

// {"user_id":..., "tokens": [...], "source_tweet_ids": [...]} per user.
std::string summaries_jsonl(const PipelineConfig& cfg,
                            const std::vector<UserRecord>& users,
                            const ProviderBundle& providers);

struct TrainOutputs {
  TrainResult result;
  Metrics holdout;  // on the internal validation split
};

TrainOutputs run_train(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                       const AssetBundle& assets, const ProviderBundle& providers);

Metrics run_evaluate(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                     const AssetBundle& assets, const ProviderBundle& providers);

// user_id<TAB>label<TAB>score lines
std::string run_predict(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                        const AssetBundle& assets, const ProviderBundle& providers);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace depnet
