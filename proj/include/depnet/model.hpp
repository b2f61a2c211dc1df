#pragma once

#include <memory>
#include <string>
#include <vector>

#include "depnet/behavior.hpp"
#include "depnet/corpus.hpp"
#include "depnet/layers.hpp"
#include "depnet/tensor.hpp"

namespace depnet {

struct ModelConfig {
  int embed_dim = 300;
  int conv_window = 3;
  int pool_width = 4;
  int conv_filters = 64;
  int summary_hidden = 32;      // summary-branch BiGRU
  int behavior_layers = 2;      // stacked BiGRU depth
  int behavior_hidden = 64;
  std::vector<int> fusion_widths = {64, 32};
  int classes = 2;
  int extract_m = 20;           // tweets kept by extractive selection
  int summary_max_tokens = 100; // N_max
  int modality_width = 32;      // common width the four modalities project to
  int behavior_fc_width = 64;
  int topic_dim = 25;           // K * W of the topic feature block
  bool learned_attention = false;
  bool scalar_timesteps = false;  // one timestep per scalar feature instead of per modality
  uint64_t seed = 42;

  void validate() const;
  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);

  int behavior_dim() const {
    return SocialVector::kDim + EmotionVector::kDim + DomainVector::kDim + topic_dim;
  }
};

struct AblationFlags {
  bool drop_social = false;
  bool drop_emotional = false;
  bool drop_domain = false;
  bool drop_topic = false;
  bool drop_behavior = false;
  bool drop_summary = false;
};

// Per-feature standardization, mean/std estimated on training data only.
class Scaler {
 public:
  void fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> transform(const std::vector<double>& row) const;
  bool fitted() const { return fitted_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stddev() const { return std_; }
  void set(std::vector<double> mean, std::vector<double> stddev);

 private:
  std::vector<double> mean_, std_;
  bool fitted_ = false;
};

struct Prediction {
  Label label;
  double score;  // probability of the depressed class
};

// Two branches fused late: summary tokens through embedding -> CNN ->
// BiGRU -> attention pooling; standardized behavior features through
// modality projections -> stacked BiGRU -> FC. Branch widths are
// reconciled by max-pooling the wider vector, then concat -> FC stack ->
// softmax over the two classes.
class FusionModel {
 public:
  FusionModel(ModelConfig cfg, std::vector<std::string> vocab);

  Tensor forward(Graph& g, const std::vector<std::string>& summary_tokens,
                 const std::vector<double>& std_features,
                 const AblationFlags& ablation = {}) const;
  Tensor loss(Graph& g, Tensor probs, Label label) const;
  Prediction predict(const std::vector<std::string>& summary_tokens,
                     const std::vector<double>& std_features,
                     const AblationFlags& ablation = {}, double threshold = 0.5) const;

  std::vector<Variable*> params() { return store_.all(); }
  ParamStore& store() { return store_; }
  const ModelConfig& config() const { return cfg_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  EmbeddingTable& embedding() { return embedding_; }

  // Overrides the seeded random embedding with vectors from a word2vec
  // text file (rows matched by word; missing words keep their random row).
  void load_pretrained_embeddings(const std::string& path);

 private:
  ModelConfig cfg_;
  std::vector<std::string> vocab_;
  ParamStore store_;
  EmbeddingTable embedding_;
  ConvBlock conv_;
  BiGru summary_rnn_;
  LearnedAttention learned_att_;  // only populated when cfg.learned_attention
  std::vector<Dense> modality_proj_;
  Dense scalar_proj_;  // used in scalar_timesteps mode
  StackedBiGru behavior_rnn_;
  Dense behavior_fc_;
  std::vector<Dense> fusion_;
  Dense head_;
};

std::vector<double> onehot(Label label, int classes = 2);

}  // namespace depnet
