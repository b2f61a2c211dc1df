#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depnet/corpus.hpp"
#include "depnet/lda.hpp"
#include "depnet/lexicons.hpp"
#include "depnet/model.hpp"
#include "depnet/summarize.hpp"

namespace depnet {

struct Metrics {
  double precision = 0, recall = 0, f1 = 0, accuracy = 0;
  long tp = 0, fp = 0, fn = 0, tn = 0;
  bool zero_division = false;  // some denominator was empty and forced a 0

  static Metrics from_confusion(long tp, long fp, long fn, long tn);
};

enum class InputMode { summary, first_m, last_m, random_m };
std::string to_string(InputMode mode);
InputMode input_mode_from_string(const std::string& s);

struct RunConfig {
  ModelConfig model;
  int batch_size = 16;
  int epochs = 30;
  uint64_t seed = 42;
  InputMode input_mode = InputMode::summary;
  AblationFlags ablation;
  AdamConfig adam;  // beta1 0.9, beta2 0.999, eps 1e-7, lr 0.001
  bool cosine_distance = false;

  int topics_k = 5;
  double topics_alpha = 0.1;
  double topics_beta = 0.01;
  int topics_iters = 500;
  int topics_top_words = 5;

  void validate() const;
};

// Non-owning bundle of everything training reads besides the corpus.
// Null providers fall back to the built-in deterministic ones.
struct Assets {
  const Lexicons* lexicons = nullptr;
  std::vector<std::string> stopwords;
  std::string word2vec_path;                  // empty: seeded random embedding
  EmbeddingProvider* embedder = nullptr;      // default: feature hashing
  AbstractiveProvider* condenser = nullptr;   // default: concat + truncate
};

// Records which user ids each fitting stage touched, so tests can assert
// that held-out users never leak into scaler or topic-model fitting.
struct FitTrace {
  std::vector<std::string> topic_user_ids;
  std::vector<std::string> scaler_user_ids;
};

struct Example {
  std::string user_id;
  std::optional<Label> label;
  std::vector<std::string> summary_tokens;
  std::vector<double> std_features;
};

// Fitted preprocessing state: topic words, feature scaler and the summary
// vocabulary, all estimated from training users only.
class Preprocessor {
 public:
  void fit(const RunConfig& run, const std::vector<UserRecord>& train_users,
           const Assets& assets, FitTrace* trace = nullptr);

  Example prepare(const UserRecord& user, const Assets& assets) const;
  std::vector<Example> prepare_all(const std::vector<UserRecord>& users,
                                   const Assets& assets) const;

  // tweet selection for the current input mode, before any condensing
  std::vector<Tweet> select_tweets(const UserRecord& user, const Assets& assets) const;

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& topic_words() const { return topic_words_; }
  const Scaler& scaler() const { return scaler_; }
  const TopicModel& topic_model() const { return topics_; }
  bool fitted() const { return fitted_; }

  // checkpoint restore path; bypasses fitting
  void restore(std::vector<std::string> vocab, std::vector<std::string> topic_words,
               Scaler scaler, InputMode mode, int extract_m, int summary_max_tokens,
               uint64_t seed, bool cosine);

  InputMode input_mode() const { return input_mode_; }
  uint64_t seed() const { return seed_; }
  int extract_m() const { return extract_m_; }
  int summary_max_tokens() const { return summary_max_tokens_; }

 private:
  Example prepare_tokens_only(const UserRecord& user, const Assets& assets) const;

  TopicModel topics_;
  std::vector<std::string> topic_words_;
  Scaler scaler_;
  std::vector<std::string> vocab_;
  InputMode input_mode_ = InputMode::summary;
  int extract_m_ = 20;
  int summary_max_tokens_ = 100;
  uint64_t seed_ = 0;
  bool cosine_ = false;
  bool fitted_ = false;
};

// LDA corpus construction: one document per tweet, stop words and
// <url>/<user> sentinels removed, empty documents dropped.
std::vector<std::vector<std::string>> lda_documents(
    const std::vector<UserRecord>& users, const std::vector<std::string>& stopwords,
    std::vector<std::string>* touched_user_ids = nullptr);

// Tweet selection for one input mode. Null embedder: built-in hashing
// provider (only the summary mode embeds anything).
std::vector<Tweet> select_input_tweets(const UserRecord& user, InputMode mode, int m,
                                       uint64_t seed, EmbeddingProvider* embedder,
                                       bool cosine = false);

Summary summarize_selection(const UserRecord& user, InputMode mode, int m, int n_max,
                            uint64_t seed, EmbeddingProvider* embedder,
                            AbstractiveProvider* condenser, bool cosine = false);

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  double train_accuracy = 0;
  Metrics valid;
};

struct TrainResult {
  std::shared_ptr<FusionModel> model;  // best-validation-F1 parameters
  Preprocessor prep;
  std::vector<EpochStats> history;
  int best_epoch = -1;
  long adam_steps = 0;
};

// Mini-batch Adam over seeded shuffles. History carries loss and
// validation metrics per epoch; the best-validation-F1 parameters are the
// ones returned. Empty valid_users falls back to validating on the
// training set.
TrainResult train(const RunConfig& run, const std::vector<UserRecord>& train_users,
                  const std::vector<UserRecord>& valid_users, const Assets& assets,
                  FitTrace* trace = nullptr);

Metrics evaluate_examples(const FusionModel& model, const std::vector<Example>& examples,
                          const AblationFlags& ablation = {}, double threshold = 0.5);
Metrics evaluate(const TrainResult& result, const std::vector<UserRecord>& users,
                 const Assets& assets);

struct CvResult {
  std::vector<Metrics> per_fold;
  Metrics mean;
  Metrics stddev;
  FoldPlan plan;

  std::string to_csv() const;  // k fold rows + one aggregate row
};

CvResult cross_validate(const RunConfig& run, const std::vector<UserRecord>& users, int k,
                        const Assets& assets);

struct StudyRow {
  std::string name;
  Metrics metrics;
};

// Fig-style studies on a held-out split (same seed across all runs).
std::vector<StudyRow> input_mode_study(const RunConfig& run,
                                       const std::vector<UserRecord>& users,
                                       const Assets& assets);
std::vector<StudyRow> ablation_study(const RunConfig& run,
                                     const std::vector<UserRecord>& users,
                                     const Assets& assets);
std::string study_to_csv(const std::vector<StudyRow>& rows);

std::string history_to_json(const std::vector<EpochStats>& history);
std::string metrics_to_json(const Metrics& m);

// Deterministic two-class corpus with disjoint vocabularies, distinct
// posting hours and shifted profile counts; the fixture for overfit and
// study runs.
std::vector<UserRecord> synthetic_users(int n = 40, uint64_t seed = 20240401,
                                        int tweets_per_user = 24);

void save_checkpoint(const TrainResult& result, const std::string& dir);

struct LoadedPipeline {
  std::shared_ptr<FusionModel> model;
  Preprocessor prep;
  long step_count = 0;
};

LoadedPipeline load_checkpoint(const std::string& dir);

}  // namespace depnet
