#include "depnet/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "depnet/error.hpp"
#include "depnet/text.hpp"
#include "json.hpp"

namespace depnet {

ProviderBundle build_providers(const PipelineConfig& cfg) {
  ProviderBundle b;
  HttpOptions opts{cfg.provider.timeout_ms, cfg.provider.retries};
  if (!cfg.provider.embedding_endpoint.empty())
    b.embedder = std::make_unique<HttpEmbeddingProvider>(cfg.provider.embedding_endpoint, opts);
  if (!cfg.provider.abstractive_endpoint.empty())
    b.condenser =
        std::make_unique<HttpAbstractiveProvider>(cfg.provider.abstractive_endpoint, opts);
  return b;
}

Assets AssetBundle::view(const ProviderBundle& providers) const {
  Assets a;
  a.lexicons = &lexicons;
  a.stopwords = stopwords;
  a.embedder = providers.embedder.get();
  a.condenser = providers.condenser.get();
  return a;
}

AssetBundle load_assets(const PipelineConfig& cfg) {
  AssetBundle b;
  b.lexicons = load_lexicons(cfg.lexicons_dir);
  b.stopwords = load_stopwords(cfg.resolved_stopwords());
  return b;
}

std::string IngestStats::to_json() const {
  nlohmann::ordered_json j;
  j["total"] = total;
  j["kept"] = kept;
  j["dropped_activity"] = dropped_activity;
  j["dropped_language"] = dropped_language;
  j["kept_depressed"] = kept_depressed;
  j["kept_non_depressed"] = kept_non_depressed;
  j["kept_unlabeled"] = kept_unlabeled;
  return j.dump(2);
}

IngestStats run_ingest(const PipelineConfig& cfg, const std::string& input,
                       const std::string& output) {
  std::vector<UserRecord> users = load_timelines(input);
  IngestStats stats;
  stats.total = static_cast<long>(users.size());

  std::vector<UserRecord> active = filter_users(users, cfg.min_posts, cfg.max_followers);
  stats.dropped_activity = stats.total - static_cast<long>(active.size());

  std::vector<UserRecord> kept;
  if (cfg.keep_non_english) {
    kept = std::move(active);
  } else {
    kept = filter_language(active);
    stats.dropped_language = static_cast<long>(active.size() - kept.size());
  }
  stats.kept = static_cast<long>(kept.size());
  for (const UserRecord& u : kept) {
    if (!u.label) ++stats.kept_unlabeled;
    else if (u.label == Label::depressed) ++stats.kept_depressed;
    else ++stats.kept_non_depressed;
  }
  save_timelines(kept, output);
  write_text_file(output + ".stats.json", stats.to_json() + "\n");
  return stats;
}

TopicModel run_fit_topics(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                          const std::vector<std::string>& stopwords) {
  std::vector<UserRecord> depressed;
  for (const UserRecord& u : users)
    if (u.label == Label::depressed) depressed.push_back(u);
  if (depressed.empty())
    throw InvalidArgument("fit-topics: corpus has no users labeled depressed");
  auto docs = lda_documents(depressed, stopwords);
  return lda_fit(docs, cfg.run.topics_k, cfg.run.topics_alpha, cfg.run.topics_beta,
                 cfg.run.topics_iters, derive_seed(cfg.run.seed, "topics"));
}

std::string feature_record_json(const UserRecord& user, const Lexicons& lexicons,
                                const std::vector<std::string>& topic_words) {
  BehaviorFeatures f = behavior_features(user, lexicons, topic_words);
  nlohmann::ordered_json j;
  j["user_id"] = user.user_id;
  j["social"] = {{"posting_time_hist", f.social.posting_time_hist},
                 {"followers", f.social.followers},
                 {"friends", f.social.friends},
                 {"n_tweets", f.social.n_tweets},
                 {"n_retweets", f.social.n_retweets},
                 {"mean_tweet_len", f.social.mean_tweet_len}};
  j["emotional"] = {{"vad_sum", f.emotional.vad_sum},
                    {"emoji_counts", f.emotional.emoji_counts},
                    {"fp_singular", f.emotional.fp_singular},
                    {"fp_plural", f.emotional.fp_plural}};
  j["domain"] = {{"symptom_counts", f.domain.symptom_counts},
                 {"antidepressant_count", f.domain.antidepressant_count}};
  j["topic"] = {{"word_counts", f.topic.word_counts}};
  return j.dump();
}

std::string features_jsonl(const std::vector<UserRecord>& users, const Lexicons& lexicons,
                           const std::vector<std::string>& topic_words) {
  std::string out;
  for (const UserRecord& u : users) out += feature_record_json(u, lexicons, topic_words) + "\n";
  return out;
}

std::string summaries_jsonl(const PipelineConfig& cfg,
                            const std::vector<UserRecord>& users,
                            const ProviderBundle& providers) {
  std::string out;
  for (const UserRecord& u : users) {
    Summary s = summarize_selection(u, cfg.run.input_mode, cfg.run.model.extract_m,
                                    cfg.run.model.summary_max_tokens, cfg.run.seed,
                                    providers.embedder.get(), providers.condenser.get(),
                                    cfg.run.cosine_distance);
    nlohmann::ordered_json j;
    j["user_id"] = u.user_id;
    j["tokens"] = s.tokens;
    j["source_tweet_ids"] = s.source_tweet_ids;
    out += j.dump() + "\n";
  }
  return out;
}

TrainOutputs run_train(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                       const AssetBundle& assets, const ProviderBundle& providers) {
  Assets view = assets.view(providers);
  view.word2vec_path = cfg.embeddings_path;
  auto [train_users, valid_users] = split(users, cfg.train_fraction, cfg.run.seed);
  TrainOutputs out{train(cfg.run, train_users, valid_users, view), {}};
  out.holdout = valid_users.empty()
                    ? evaluate_examples(*out.result.model,
                                        out.result.prep.prepare_all(train_users, view))
                    : evaluate_examples(*out.result.model,
                                        out.result.prep.prepare_all(valid_users, view));
  return out;
}

Metrics run_evaluate(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                     const AssetBundle& assets, const ProviderBundle& providers) {
  LoadedPipeline lp = load_checkpoint(cfg.checkpoint_dir);
  Assets view = assets.view(providers);
  return evaluate_examples(*lp.model, lp.prep.prepare_all(users, view));
}

std::string run_predict(const PipelineConfig& cfg, const std::vector<UserRecord>& users,
                        const AssetBundle& assets, const ProviderBundle& providers) {
  LoadedPipeline lp = load_checkpoint(cfg.checkpoint_dir);
  Assets view = assets.view(providers);
  std::string out;
  for (const UserRecord& u : users) {
    Example ex = lp.prep.prepare(u, view);
    Prediction p = lp.model->predict(ex.summary_tokens, ex.std_features);
    char line[256];
    std::snprintf(line, sizeof(line), "%s\t%s\t%.6f\n", u.user_id.c_str(),
                  p.label == Label::depressed ? "depressed" : "non_depressed", p.score);
    out += line;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace depnet
