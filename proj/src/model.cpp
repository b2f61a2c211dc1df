#include "depnet/model.hpp"

#include <cmath>

#include "depnet/error.hpp"
#include "json.hpp"

namespace depnet {

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw InvalidArgument(std::string("model config: ") + name + " must be positive");
  };
  positive(embed_dim, "embed_dim");
  positive(conv_window, "conv_window");
  positive(pool_width, "pool_width");
  positive(conv_filters, "conv_filters");
  positive(summary_hidden, "summary_hidden");
  positive(behavior_layers, "behavior_layers");
  positive(behavior_hidden, "behavior_hidden");
  positive(extract_m, "extract_m");
  positive(summary_max_tokens, "summary_max_tokens");
  positive(modality_width, "modality_width");
  positive(behavior_fc_width, "behavior_fc_width");
  positive(topic_dim, "topic_dim");
  for (int w : fusion_widths) positive(w, "fusion width");
  if (classes != 2) throw InvalidArgument("model config: classes must be 2");
}

std::string ModelConfig::to_json() const {
  nlohmann::ordered_json j;
  j["embed_dim"] = embed_dim;
  j["conv_window"] = conv_window;
  j["pool_width"] = pool_width;
  j["conv_filters"] = conv_filters;
  j["summary_hidden"] = summary_hidden;
  j["behavior_layers"] = behavior_layers;
  j["behavior_hidden"] = behavior_hidden;
  j["fusion_widths"] = fusion_widths;
  j["classes"] = classes;
  j["extract_m"] = extract_m;
  j["summary_max_tokens"] = summary_max_tokens;
  j["modality_width"] = modality_width;
  j["behavior_fc_width"] = behavior_fc_width;
  j["topic_dim"] = topic_dim;
  j["learned_attention"] = learned_attention;
  j["scalar_timesteps"] = scalar_timesteps;
  j["seed"] = seed;
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelConfig c;
  c.embed_dim = j.at("embed_dim").get<int>();
  c.conv_window = j.at("conv_window").get<int>();
  c.pool_width = j.at("pool_width").get<int>();
  c.conv_filters = j.at("conv_filters").get<int>();
  c.summary_hidden = j.at("summary_hidden").get<int>();
  c.behavior_layers = j.at("behavior_layers").get<int>();
  c.behavior_hidden = j.at("behavior_hidden").get<int>();
  c.fusion_widths = j.at("fusion_widths").get<std::vector<int>>();
  c.classes = j.at("classes").get<int>();
  c.extract_m = j.at("extract_m").get<int>();
  c.summary_max_tokens = j.at("summary_max_tokens").get<int>();
  c.modality_width = j.at("modality_width").get<int>();
  c.behavior_fc_width = j.at("behavior_fc_width").get<int>();
  c.topic_dim = j.at("topic_dim").get<int>();
  c.learned_attention = j.at("learned_attention").get<bool>();
  c.scalar_timesteps = j.at("scalar_timesteps").get<bool>();
  c.seed = j.at("seed").get<uint64_t>();
  c.validate();
  return c;
}

void Scaler::fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("scaler: no rows to fit");
  const size_t dim = rows[0].size();
  mean_.assign(dim, 0.0);
  std_.assign(dim, 0.0);
  for (const auto& r : rows) {
    if (r.size() != dim) throw InvalidArgument("scaler: inconsistent row widths");
    for (size_t i = 0; i < dim; ++i) mean_[i] += r[i];
  }
  for (double& m : mean_) m /= static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (size_t i = 0; i < dim; ++i) {
      double d = r[i] - mean_[i];
      std_[i] += d * d;
    }
  for (double& s : std_) s = std::max(std::sqrt(s / static_cast<double>(rows.size())), 1e-8);
  fitted_ = true;
}

std::vector<double> Scaler::transform(const std::vector<double>& row) const {
  if (!fitted_) throw Error("scaler used before fit");
  if (row.size() != mean_.size())
    throw InvalidArgument("scaler: row width " + std::to_string(row.size()) +
                          " != fitted width " + std::to_string(mean_.size()));
  std::vector<double> out(row.size());
  for (size_t i = 0; i < row.size(); ++i) out[i] = (row[i] - mean_[i]) / std_[i];
  return out;
}

void Scaler::set(std::vector<double> mean, std::vector<double> stddev) {
  mean_ = std::move(mean);
  std_ = std::move(stddev);
  fitted_ = true;
}

std::vector<double> onehot(Label label, int classes) {
  std::vector<double> v(classes, 0.0);
  v[label == Label::depressed ? 1 : 0] = 1.0;
  return v;
}

FusionModel::FusionModel(ModelConfig cfg, std::vector<std::string> vocab)
    : cfg_(std::move(cfg)), vocab_(std::move(vocab)) {
  cfg_.validate();
  Rng rng(derive_seed(cfg_.seed, "model.init"));
  embedding_ = EmbeddingTable::random(vocab_, cfg_.embed_dim, store_, rng, "embedding");
  conv_ = ConvBlock::make("summary.cnn", cfg_.embed_dim, cfg_.conv_window, cfg_.pool_width,
                          cfg_.conv_filters, store_, rng);
  summary_rnn_ = BiGru::make("summary.rnn", cfg_.conv_filters, cfg_.summary_hidden, store_, rng);
  if (cfg_.learned_attention)
    learned_att_ = LearnedAttention::make("summary.att", 2 * cfg_.summary_hidden, store_, rng);

  if (cfg_.scalar_timesteps) {
    scalar_proj_ = Dense::make("behavior.scalar_proj", 1, cfg_.modality_width, store_, rng);
  } else {
    const int dims[4] = {SocialVector::kDim, EmotionVector::kDim, DomainVector::kDim,
                         cfg_.topic_dim};
    const char* names[4] = {"behavior.proj_social", "behavior.proj_emotional",
                            "behavior.proj_domain", "behavior.proj_topic"};
    for (int i = 0; i < 4; ++i)
      modality_proj_.push_back(Dense::make(names[i], dims[i], cfg_.modality_width, store_, rng));
  }
  behavior_rnn_ = StackedBiGru::make("behavior.rnn", cfg_.modality_width,
                                     cfg_.behavior_layers, cfg_.behavior_hidden, store_, rng);
  behavior_fc_ = Dense::make("behavior.fc", behavior_rnn_.output_width(),
                             cfg_.behavior_fc_width, store_, rng);

  int fused_width = std::min(2 * cfg_.summary_hidden, cfg_.behavior_fc_width) * 2;
  int width = fused_width;
  for (size_t i = 0; i < cfg_.fusion_widths.size(); ++i) {
    fusion_.push_back(Dense::make("fusion.fc" + std::to_string(i), width,
                                  cfg_.fusion_widths[i], store_, rng));
    width = cfg_.fusion_widths[i];
  }
  head_ = Dense::make("fusion.head", width, cfg_.classes, store_, rng);
}

Tensor FusionModel::forward(Graph& g, const std::vector<std::string>& summary_tokens,
                            const std::vector<double>& std_features,
                            const AblationFlags& ablation) const {
  if (static_cast<int>(std_features.size()) != cfg_.behavior_dim())
    throw InvalidArgument("forward: feature vector of size " +
                          std::to_string(std_features.size()) + ", expected " +
                          std::to_string(cfg_.behavior_dim()));

  // summary branch
  Tensor pooled;
  if (ablation.drop_summary) {
    pooled = g.zeros({2 * cfg_.summary_hidden});
  } else {
    Tensor x = embed_tokens(g, embedding_, summary_tokens, conv_.min_input_length());
    Tensor features = conv_.apply(g, x);
    Tensor states = summary_rnn_.apply(g, features);
    pooled = cfg_.learned_attention ? learned_att_.apply(g, states).first
                                    : attention_pool(g, states).first;
  }

  // behavior branch
  Tensor behavior_out;
  if (ablation.drop_behavior) {
    behavior_out = g.zeros({cfg_.behavior_fc_width});
  } else {
    std::vector<Tensor> steps;
    if (cfg_.scalar_timesteps) {
      for (double v : std_features)
        steps.push_back(scalar_proj_.apply(g, g.input({v}, {1})));
    } else {
      const bool dropped[4] = {ablation.drop_social, ablation.drop_emotional,
                               ablation.drop_domain, ablation.drop_topic};
      const int dims[4] = {SocialVector::kDim, EmotionVector::kDim, DomainVector::kDim,
                           cfg_.topic_dim};
      size_t off = 0;
      for (int i = 0; i < 4; ++i) {
        if (dropped[i]) {
          steps.push_back(g.zeros({cfg_.modality_width}));
        } else {
          std::vector<double> part(std_features.begin() + off,
                                   std_features.begin() + off + dims[i]);
          steps.push_back(modality_proj_[i].apply(g, g.input(std::move(part), {dims[i]})));
        }
        off += dims[i];
      }
    }
    Tensor seq = g.stack_rows(steps);
    Tensor states = behavior_rnn_.apply(g, seq);
    Tensor last = g.slice_row(states, states.shape()[0] - 1);
    behavior_out = g.relu(behavior_fc_.apply(g, last));
  }

  // width reconciliation: max-pool the wider branch down to the narrower
  int wa = pooled.shape()[0], wb = behavior_out.shape()[0];
  int target = std::min(wa, wb);
  if (wa > target) pooled = g.adaptive_maxpool1d(pooled, target);
  if (wb > target) behavior_out = g.adaptive_maxpool1d(behavior_out, target);

  Tensor fused = g.concat({pooled, behavior_out}, 0);
  for (const Dense& fc : fusion_) fused = g.relu(fc.apply(g, fused));
  return g.softmax(head_.apply(g, fused), 0);
}

Tensor FusionModel::loss(Graph& g, Tensor probs, Label label) const {
  return g.cross_entropy(probs, onehot(label, cfg_.classes));
}

Prediction FusionModel::predict(const std::vector<std::string>& summary_tokens,
                                const std::vector<double>& std_features,
                                const AblationFlags& ablation, double threshold) const {
  Graph g;
  Tensor probs = forward(g, summary_tokens, std_features, ablation);
  double p_dep = probs.value()[1];
  return {p_dep >= threshold ? Label::depressed : Label::non_depressed, p_dep};
}

void FusionModel::load_pretrained_embeddings(const std::string& path) {
  ParamStore tmp;
  EmbeddingTable file = EmbeddingTable::from_word2vec(path, tmp, "tmp");
  if (file.dim != cfg_.embed_dim)
    throw InvalidArgument("embedding file dimension " + std::to_string(file.dim) +
                          " != model embed_dim " + std::to_string(cfg_.embed_dim));
  for (size_t i = 0; i < vocab_.size(); ++i) {
    auto it = file.index.find(vocab_[i]);
    if (it == file.index.end()) continue;
    for (int c = 0; c < cfg_.embed_dim; ++c)
      embedding_.table->value[i * cfg_.embed_dim + c] =
          file.table->value[static_cast<size_t>(it->second) * cfg_.embed_dim + c];
  }
}

}  // namespace depnet
