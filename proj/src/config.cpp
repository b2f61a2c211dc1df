#include "depnet/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "depnet/error.hpp"

namespace depnet {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

long to_long(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    long out = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument("config: '" + key + "' expects an integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::istringstream ss(v);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(static_cast<int>(to_long(key, part)));
  }
  if (out.empty()) throw InvalidArgument("config: '" + key + "' expects a comma list");
  return out;
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "data.path") cfg.data_path = value;
  else if (key == "data.lexicons") cfg.lexicons_dir = value;
  else if (key == "data.stopwords") cfg.stopwords_path = value;
  else if (key == "data.embeddings") cfg.embeddings_path = value;
  else if (key == "checkpoint.dir") cfg.checkpoint_dir = value;
  else if (key == "provider.embedding_endpoint") cfg.provider.embedding_endpoint = value;
  else if (key == "provider.abstractive_endpoint") cfg.provider.abstractive_endpoint = value;
  else if (key == "provider.timeout_ms") cfg.provider.timeout_ms = static_cast<int>(to_long(key, value));
  else if (key == "provider.retries") cfg.provider.retries = static_cast<int>(to_long(key, value));
  else if (key == "run.batch_size") cfg.run.batch_size = static_cast<int>(to_long(key, value));
  else if (key == "run.epochs") cfg.run.epochs = static_cast<int>(to_long(key, value));
  else if (key == "run.seed") cfg.run.seed = static_cast<uint64_t>(to_long(key, value));
  else if (key == "run.input_mode") cfg.run.input_mode = input_mode_from_string(value);
  else if (key == "run.cosine_distance") cfg.run.cosine_distance = to_bool(key, value);
  else if (key == "run.drop_social") cfg.run.ablation.drop_social = to_bool(key, value);
  else if (key == "run.drop_emotional") cfg.run.ablation.drop_emotional = to_bool(key, value);
  else if (key == "run.drop_domain") cfg.run.ablation.drop_domain = to_bool(key, value);
  else if (key == "run.drop_topic") cfg.run.ablation.drop_topic = to_bool(key, value);
  else if (key == "run.drop_behavior") cfg.run.ablation.drop_behavior = to_bool(key, value);
  else if (key == "run.drop_summary") cfg.run.ablation.drop_summary = to_bool(key, value);
  else if (key == "adam.lr") cfg.run.adam.lr = to_double(key, value);
  else if (key == "adam.beta1") cfg.run.adam.beta1 = to_double(key, value);
  else if (key == "adam.beta2") cfg.run.adam.beta2 = to_double(key, value);
  else if (key == "adam.epsilon") cfg.run.adam.epsilon = to_double(key, value);
  else if (key == "model.embed_dim") cfg.run.model.embed_dim = static_cast<int>(to_long(key, value));
  else if (key == "model.conv_window") cfg.run.model.conv_window = static_cast<int>(to_long(key, value));
  else if (key == "model.pool_width") cfg.run.model.pool_width = static_cast<int>(to_long(key, value));
  else if (key == "model.conv_filters") cfg.run.model.conv_filters = static_cast<int>(to_long(key, value));
  else if (key == "model.summary_hidden") cfg.run.model.summary_hidden = static_cast<int>(to_long(key, value));
  else if (key == "model.behavior_layers") cfg.run.model.behavior_layers = static_cast<int>(to_long(key, value));
  else if (key == "model.behavior_hidden") cfg.run.model.behavior_hidden = static_cast<int>(to_long(key, value));
  else if (key == "model.fusion_widths") cfg.run.model.fusion_widths = to_int_list(key, value);
  else if (key == "model.classes") cfg.run.model.classes = static_cast<int>(to_long(key, value));
  else if (key == "model.extract_m") cfg.run.model.extract_m = static_cast<int>(to_long(key, value));
  else if (key == "model.summary_max_tokens") cfg.run.model.summary_max_tokens = static_cast<int>(to_long(key, value));
  else if (key == "model.modality_width") cfg.run.model.modality_width = static_cast<int>(to_long(key, value));
  else if (key == "model.behavior_fc_width") cfg.run.model.behavior_fc_width = static_cast<int>(to_long(key, value));
  else if (key == "model.learned_attention") cfg.run.model.learned_attention = to_bool(key, value);
  else if (key == "model.scalar_timesteps") cfg.run.model.scalar_timesteps = to_bool(key, value);
  else if (key == "topics.k") cfg.run.topics_k = static_cast<int>(to_long(key, value));
  else if (key == "topics.alpha") cfg.run.topics_alpha = to_double(key, value);
  else if (key == "topics.beta") cfg.run.topics_beta = to_double(key, value);
  else if (key == "topics.iters") cfg.run.topics_iters = static_cast<int>(to_long(key, value));
  else if (key == "topics.top_words") cfg.run.topics_top_words = static_cast<int>(to_long(key, value));
  else if (key == "split.train_fraction") cfg.train_fraction = to_double(key, value);
  else if (key == "cv.k") cfg.cv_k = static_cast<int>(to_long(key, value));
  else if (key == "jobs") cfg.jobs = static_cast<int>(to_long(key, value));
  else if (key == "filter.min_posts") cfg.min_posts = to_long(key, value);
  else if (key == "filter.max_followers") cfg.max_followers = to_long(key, value);
  else if (key == "filter.keep_non_english") cfg.keep_non_english = to_bool(key, value);
  else throw InvalidArgument("config: unknown key '" + key + "'");
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  PipelineConfig cfg;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config file '" + path + "' line " + std::to_string(lineno) +
                            ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    try {
      apply_config_entry(cfg, key, value);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config file '" + path + "' line " + std::to_string(lineno) +
                            ": " + e.what());
    }
  }
  return cfg;
}

void apply_env_overrides(PipelineConfig& cfg) {
  if (const char* v = std::getenv("DEPNET_EMBED_ENDPOINT"))
    cfg.provider.embedding_endpoint = v;
  if (const char* v = std::getenv("DEPNET_SUMMARY_ENDPOINT"))
    cfg.provider.abstractive_endpoint = v;
}

}  // namespace depnet
