#include "depnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "depnet/error.hpp"
#include "depnet/rng.hpp"
#include "depnet/text.hpp"
#include "json.hpp"

namespace depnet {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

Metrics Metrics::from_confusion(long tp, long fp, long fn, long tn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / (tp + fp);
  else m.zero_division = true;
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / (tp + fn);
  else m.zero_division = true;
  if (m.precision + m.recall > 0)
    m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  long n = tp + fp + fn + tn;
  if (n > 0) m.accuracy = static_cast<double>(tp + tn) / n;
  else m.zero_division = true;
  return m;
}

std::string to_string(InputMode mode) {
  switch (mode) {
    case InputMode::summary: return "summary";
    case InputMode::first_m: return "first_m";
    case InputMode::last_m: return "last_m";
    case InputMode::random_m: return "random_m";
  }
  return "summary";
}

InputMode input_mode_from_string(const std::string& s) {
  if (s == "summary") return InputMode::summary;
  if (s == "first_m") return InputMode::first_m;
  if (s == "last_m") return InputMode::last_m;
  if (s == "random_m") return InputMode::random_m;
  throw InvalidArgument("unknown input mode '" + s +
                        "' (expected summary|first_m|last_m|random_m)");
}

void RunConfig::validate() const {
  model.validate();
  if (batch_size < 1) throw InvalidArgument("run config: batch_size must be >= 1");
  if (epochs < 0) throw InvalidArgument("run config: epochs must be >= 0");
  if (topics_k < 1) throw InvalidArgument("run config: topics_k must be >= 1");
  if (topics_top_words < 1) throw InvalidArgument("run config: topics_top_words must be >= 1");
  if (topics_iters < 1) throw InvalidArgument("run config: topics_iters must be >= 1");
}

std::vector<std::vector<std::string>> lda_documents(
    const std::vector<UserRecord>& users, const std::vector<std::string>& stopwords,
    std::vector<std::string>* touched_user_ids) {
  std::unordered_set<std::string> stop(stopwords.begin(), stopwords.end());
  stop.insert("<url>");
  stop.insert("<user>");
  std::vector<std::vector<std::string>> docs;
  for (const UserRecord& u : users) {
    if (touched_user_ids) touched_user_ids->push_back(u.user_id);
    for (const Tweet& t : u.tweets) {
      std::vector<std::string> doc;
      for (std::string& tok : tokenize(t.text))
        if (!stop.count(tok)) doc.push_back(std::move(tok));
      if (!doc.empty()) docs.push_back(std::move(doc));
    }
  }
  return docs;
}

void Preprocessor::fit(const RunConfig& run, const std::vector<UserRecord>& train_users,
                       const Assets& assets, FitTrace* trace) {
  if (!assets.lexicons) throw InvalidArgument("preprocessor: assets.lexicons is null");
  if (train_users.empty()) throw InvalidArgument("preprocessor: empty training set");
  input_mode_ = run.input_mode;
  extract_m_ = run.model.extract_m;
  summary_max_tokens_ = run.model.summary_max_tokens;
  seed_ = run.seed;
  cosine_ = run.cosine_distance;

  // topic model on the depressed training users only
  std::vector<UserRecord> depressed;
  for (const UserRecord& u : train_users)
    if (u.label == Label::depressed) depressed.push_back(u);
  if (depressed.empty())
    throw InvalidArgument("preprocessor: no depressed users in the training set");
  std::vector<std::string> touched;
  auto docs = lda_documents(depressed, assets.stopwords, &touched);
  if (trace) trace->topic_user_ids = touched;
  topics_ = lda_fit(docs, run.topics_k, run.topics_alpha, run.topics_beta,
                    run.topics_iters, derive_seed(run.seed, "topics"));
  topic_words_ = topics_.top_word_list(run.topics_top_words);

  // feature scaler on all training users
  std::vector<std::vector<double>> rows;
  rows.reserve(train_users.size());
  for (const UserRecord& u : train_users) {
    if (trace) trace->scaler_user_ids.push_back(u.user_id);
    rows.push_back(
        behavior_features(u, *assets.lexicons, topic_words_).flatten());
  }
  scaler_.fit(rows);

  fitted_ = true;  // summaries below go through prepare()

  // summary vocabulary, in first-appearance order over training summaries
  vocab_.clear();
  std::unordered_set<std::string> seen;
  for (const UserRecord& u : train_users) {
    Example ex = prepare_tokens_only(u, assets);
    for (const std::string& tok : ex.summary_tokens)
      if (seen.insert(tok).second) vocab_.push_back(tok);
  }
}

std::vector<Tweet> select_input_tweets(const UserRecord& user, InputMode mode, int m,
                                       uint64_t seed, EmbeddingProvider* embedder,
                                       bool cosine) {
  const auto& tweets = user.tweets;
  if (tweets.empty()) throw InvalidArgument("no tweets for user '" + user.user_id + "'");
  switch (mode) {
    case InputMode::summary: {
      HashingEmbeddingProvider default_embedder(64, derive_seed(seed, "hash_embed"));
      EmbeddingProvider& e = embedder ? *embedder : default_embedder;
      return extract(tweets, e, m, derive_seed(seed, "extract", fnv1a(user.user_id)),
                     cosine);
    }
    case InputMode::first_m: {
      return std::vector<Tweet>(tweets.begin(),
                                tweets.begin() + std::min<size_t>(m, tweets.size()));
    }
    case InputMode::last_m: {
      size_t n = tweets.size();
      size_t start = n > static_cast<size_t>(m) ? n - m : 0;
      return std::vector<Tweet>(tweets.begin() + start, tweets.end());
    }
    case InputMode::random_m: {
      size_t n = tweets.size();
      if (n <= static_cast<size_t>(m)) return tweets;
      std::vector<size_t> idx(n);
      for (size_t i = 0; i < n; ++i) idx[i] = i;
      Rng rng(derive_seed(seed, "random_m", fnv1a(user.user_id)));
      rng.shuffle(idx);
      idx.resize(m);
      std::sort(idx.begin(), idx.end());  // back to chronological order
      std::vector<Tweet> out;
      for (size_t i : idx) out.push_back(tweets[i]);
      return out;
    }
  }
  return tweets;
}

Summary summarize_selection(const UserRecord& user, InputMode mode, int m, int n_max,
                            uint64_t seed, EmbeddingProvider* embedder,
                            AbstractiveProvider* condenser, bool cosine) {
  std::vector<Tweet> selected = select_input_tweets(user, mode, m, seed, embedder, cosine);
  ConcatAbstractiveProvider fallback;
  // non-summary modes feed the raw selection forward, concatenated
  AbstractiveProvider& c =
      (mode == InputMode::summary && condenser) ? *condenser : fallback;
  return abstractive(selected, c, n_max);
}

std::vector<Tweet> Preprocessor::select_tweets(const UserRecord& user,
                                               const Assets& assets) const {
  return select_input_tweets(user, input_mode_, extract_m_, seed_, assets.embedder,
                             cosine_);
}

Example Preprocessor::prepare_tokens_only(const UserRecord& user,
                                          const Assets& assets) const {
  Example ex;
  ex.user_id = user.user_id;
  ex.label = user.label;
  ex.summary_tokens =
      summarize_selection(user, input_mode_, extract_m_, summary_max_tokens_, seed_,
                          assets.embedder, assets.condenser, cosine_)
          .tokens;
  return ex;
}

Example Preprocessor::prepare(const UserRecord& user, const Assets& assets) const {
  if (!fitted_) throw Error("preprocessor used before fit");
  if (!assets.lexicons) throw InvalidArgument("preprocessor: assets.lexicons is null");
  Example ex = prepare_tokens_only(user, assets);
  ex.std_features =
      scaler_.transform(behavior_features(user, *assets.lexicons, topic_words_).flatten());
  return ex;
}

std::vector<Example> Preprocessor::prepare_all(const std::vector<UserRecord>& users,
                                               const Assets& assets) const {
  std::vector<Example> out;
  out.reserve(users.size());
  for (const UserRecord& u : users) out.push_back(prepare(u, assets));
  return out;
}

void Preprocessor::restore(std::vector<std::string> vocab,
                           std::vector<std::string> topic_words, Scaler scaler,
                           InputMode mode, int extract_m, int summary_max_tokens,
                           uint64_t seed, bool cosine) {
  vocab_ = std::move(vocab);
  topic_words_ = std::move(topic_words);
  scaler_ = std::move(scaler);
  input_mode_ = mode;
  extract_m_ = extract_m;
  summary_max_tokens_ = summary_max_tokens;
  seed_ = seed;
  cosine_ = cosine;
  fitted_ = true;
}

namespace {

struct Snapshot {
  std::vector<std::vector<double>> values;

  static Snapshot take(const std::vector<Variable*>& params) {
    Snapshot s;
    for (const Variable* p : params) s.values.push_back(p->value);
    return s;
  }
  void restore(const std::vector<Variable*>& params) const {
    for (size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
  }
};

}  // namespace

Metrics evaluate_examples(const FusionModel& model, const std::vector<Example>& examples,
                          const AblationFlags& ablation, double threshold) {
  if (examples.empty()) throw InvalidArgument("evaluate: empty example set");
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (const Example& ex : examples) {
    if (!ex.label) throw InvalidArgument("evaluate: unlabeled user '" + ex.user_id + "'");
    Prediction pred =
        model.predict(ex.summary_tokens, ex.std_features, ablation, threshold);
    bool truth = ex.label == Label::depressed;
    bool hat = pred.label == Label::depressed;
    if (truth && hat) ++tp;
    else if (!truth && hat) ++fp;
    else if (truth && !hat) ++fn;
    else ++tn;
  }
  return Metrics::from_confusion(tp, fp, fn, tn);
}

TrainResult train(const RunConfig& run, const std::vector<UserRecord>& train_users,
                  const std::vector<UserRecord>& valid_users, const Assets& assets,
                  FitTrace* trace) {
  run.validate();
  if (train_users.empty()) throw InvalidArgument("train: empty training set");
  for (const UserRecord& u : train_users)
    if (!u.label) throw InvalidArgument("train: unlabeled user '" + u.user_id + "'");

  TrainResult result;
  result.prep.fit(run, train_users, assets, trace);

  ModelConfig cfg = run.model;
  cfg.topic_dim = run.topics_k * run.topics_top_words;
  cfg.seed = run.seed;
  result.model = std::make_shared<FusionModel>(cfg, result.prep.vocab());
  if (!assets.word2vec_path.empty())
    result.model->load_pretrained_embeddings(assets.word2vec_path);

  std::vector<Example> train_ex = result.prep.prepare_all(train_users, assets);
  std::vector<Example> valid_ex = valid_users.empty()
                                      ? train_ex
                                      : result.prep.prepare_all(valid_users, assets);

  if (run.epochs == 0) return result;

  std::vector<Variable*> params = result.model->params();
  Adam adam(run.adam);
  result.model->store().zero_grads();

  double best_f1 = -1;
  Snapshot best;
  for (int epoch = 1; epoch <= run.epochs; ++epoch) {
    std::vector<size_t> order(train_ex.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(run.seed, "epoch", static_cast<uint64_t>(epoch)));
    rng.shuffle(order);

    double loss_sum = 0;
    size_t pos = 0;
    while (pos < order.size()) {
      size_t batch_end = std::min(pos + static_cast<size_t>(run.batch_size), order.size());
      size_t batch_n = batch_end - pos;
      for (size_t i = pos; i < batch_end; ++i) {
        const Example& ex = train_ex[order[i]];
        Graph g;
        Tensor probs = result.model->forward(g, ex.summary_tokens, ex.std_features,
                                             run.ablation);
        Tensor loss = result.model->loss(g, probs, *ex.label);
        loss_sum += loss.scalar();
        g.backward(loss);
      }
      result.model->store().scale_grads(1.0 / static_cast<double>(batch_n));
      adam.step(params);
      result.model->store().zero_grads();
      pos = batch_end;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train_ex.size());
    stats.train_accuracy = evaluate_examples(*result.model, train_ex, run.ablation).accuracy;
    stats.valid = evaluate_examples(*result.model, valid_ex, run.ablation);
    result.history.push_back(stats);
    if (stats.valid.f1 > best_f1) {
      best_f1 = stats.valid.f1;
      best = Snapshot::take(params);
      result.best_epoch = epoch;
    }
  }
  best.restore(params);
  result.adam_steps = adam.step_count();
  return result;
}

Metrics evaluate(const TrainResult& result, const std::vector<UserRecord>& users,
                 const Assets& assets) {
  if (users.empty()) throw InvalidArgument("evaluate: empty user set");
  return evaluate_examples(*result.model, result.prep.prepare_all(users, assets),
                           AblationFlags{});
}

namespace {

Metrics metrics_mean(const std::vector<Metrics>& ms) {
  Metrics m;
  for (const Metrics& x : ms) {
    m.precision += x.precision;
    m.recall += x.recall;
    m.f1 += x.f1;
    m.accuracy += x.accuracy;
    m.tp += x.tp;
    m.fp += x.fp;
    m.fn += x.fn;
    m.tn += x.tn;
  }
  double n = static_cast<double>(ms.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  m.accuracy /= n;
  return m;
}

Metrics metrics_std(const std::vector<Metrics>& ms, const Metrics& mean) {
  Metrics s;
  for (const Metrics& x : ms) {
    s.precision += (x.precision - mean.precision) * (x.precision - mean.precision);
    s.recall += (x.recall - mean.recall) * (x.recall - mean.recall);
    s.f1 += (x.f1 - mean.f1) * (x.f1 - mean.f1);
    s.accuracy += (x.accuracy - mean.accuracy) * (x.accuracy - mean.accuracy);
  }
  double n = static_cast<double>(ms.size());
  s.precision = std::sqrt(s.precision / n);
  s.recall = std::sqrt(s.recall / n);
  s.f1 = std::sqrt(s.f1 / n);
  s.accuracy = std::sqrt(s.accuracy / n);
  return s;
}

}  // namespace

CvResult cross_validate(const RunConfig& run, const std::vector<UserRecord>& users, int k,
                        const Assets& assets) {
  CvResult cv;
  cv.plan = kfold(users, k, run.seed);
  for (int f = 0; f < k; ++f) {
    std::unordered_set<std::string> held(cv.plan.folds[f].begin(), cv.plan.folds[f].end());
    std::vector<UserRecord> fold_train, fold_test;
    for (const UserRecord& u : users)
      (held.count(u.user_id) ? fold_test : fold_train).push_back(u);
    TrainResult tr = train(run, fold_train, {}, assets);
    cv.per_fold.push_back(
        evaluate_examples(*tr.model, tr.prep.prepare_all(fold_test, assets), run.ablation));
  }
  cv.mean = metrics_mean(cv.per_fold);
  cv.stddev = metrics_std(cv.per_fold, cv.mean);
  return cv;
}

std::string CvResult::to_csv() const {
  std::string out = "fold,precision,recall,f1,accuracy,tp,fp,fn,tn\n";
  for (size_t f = 0; f < per_fold.size(); ++f) {
    const Metrics& m = per_fold[f];
    out += std::to_string(f + 1) + "," + fmt(m.precision) + "," + fmt(m.recall) + "," +
           fmt(m.f1) + "," + fmt(m.accuracy) + "," + std::to_string(m.tp) + "," +
           std::to_string(m.fp) + "," + std::to_string(m.fn) + "," + std::to_string(m.tn) +
           "\n";
  }
  out += "aggregate," + fmt(mean.precision) + "±" + fmt(stddev.precision) + "," +
         fmt(mean.recall) + "±" + fmt(stddev.recall) + "," + fmt(mean.f1) + "±" +
         fmt(stddev.f1) + "," + fmt(mean.accuracy) + "±" + fmt(stddev.accuracy) + "," +
         std::to_string(mean.tp) + "," + std::to_string(mean.fp) + "," +
         std::to_string(mean.fn) + "," + std::to_string(mean.tn) + "\n";
  return out;
}

std::vector<StudyRow> input_mode_study(const RunConfig& run,
                                       const std::vector<UserRecord>& users,
                                       const Assets& assets) {
  auto [train_users, test_users] = split(users, 0.8, run.seed);
  std::vector<StudyRow> rows;
  for (InputMode mode : {InputMode::summary, InputMode::first_m, InputMode::last_m,
                         InputMode::random_m}) {
    RunConfig r = run;
    r.input_mode = mode;
    TrainResult tr = train(r, train_users, {}, assets);
    rows.push_back({to_string(mode),
                    evaluate_examples(*tr.model, tr.prep.prepare_all(test_users, assets),
                                      r.ablation)});
  }
  return rows;
}

std::vector<StudyRow> ablation_study(const RunConfig& run,
                                     const std::vector<UserRecord>& users,
                                     const Assets& assets) {
  auto [train_users, test_users] = split(users, 0.8, run.seed);
  struct Case {
    const char* name;
    AblationFlags flags;
  };
  const Case cases[] = {
      {"full", {}},
      {"-social", {.drop_social = true}},
      {"-emotional", {.drop_emotional = true}},
      {"-domain", {.drop_domain = true}},
      {"-topic", {.drop_topic = true}},
      {"-behavior", {.drop_behavior = true}},
      {"-summary", {.drop_summary = true}},
  };
  std::vector<StudyRow> rows;
  for (const Case& c : cases) {
    RunConfig r = run;
    r.ablation = c.flags;
    TrainResult tr = train(r, train_users, {}, assets);
    rows.push_back({c.name,
                    evaluate_examples(*tr.model, tr.prep.prepare_all(test_users, assets),
                                      r.ablation)});
  }
  return rows;
}

std::string study_to_csv(const std::vector<StudyRow>& rows) {
  std::string out = "run,precision,recall,f1,accuracy,tp,fp,fn,tn\n";
  for (const StudyRow& r : rows) {
    const Metrics& m = r.metrics;
    out += r.name + "," + fmt(m.precision) + "," + fmt(m.recall) + "," + fmt(m.f1) + "," +
           fmt(m.accuracy) + "," + std::to_string(m.tp) + "," + std::to_string(m.fp) + "," +
           std::to_string(m.fn) + "," + std::to_string(m.tn) + "\n";
  }
  return out;
}

std::string metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"tn", m.tn}};
  j["zero_division"] = m.zero_division;
  return j.dump(2);
}

std::string history_to_json(const std::vector<EpochStats>& history) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const EpochStats& e : history) {
    nlohmann::ordered_json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["train_accuracy"] = e.train_accuracy;
    j["valid"] = nlohmann::ordered_json::parse(metrics_to_json(e.valid));
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::vector<UserRecord> synthetic_users(int n, uint64_t seed, int tweets_per_user) {
  const std::vector<std::string> dep_words = {
      "sad",   "tired",    "insomnia", "hopeless",  "crying", "worthless",
      "empty", "numb",     "exhausted", "guilty",   "alone",  "darkness"};
  const std::vector<std::string> non_words = {
      "happy",  "fun",     "soccer", "sunshine", "party", "coffee",
      "friends", "awesome", "weekend", "beach",   "music", "training"};
  Rng rng(derive_seed(seed, "synthetic"));
  std::vector<UserRecord> users;
  const int64_t base = parse_iso8601("2021-01-01T00:00:00Z");
  for (int i = 0; i < n; ++i) {
    bool dep = i % 2 == 0;
    UserRecord u;
    char idbuf[32];
    std::snprintf(idbuf, sizeof(idbuf), "%s%03d", dep ? "dep" : "non", i);
    u.user_id = idbuf;
    u.label = dep ? Label::depressed : Label::non_depressed;
    u.followers_count = dep ? 50 + static_cast<long>(rng.next_below(400))
                            : 900 + static_cast<long>(rng.next_below(2000));
    u.friends_count = 20 + static_cast<long>(rng.next_below(300));
    const auto& words = dep ? dep_words : non_words;
    for (int t = 0; t < tweets_per_user; ++t) {
      Tweet tw;
      tw.id = u.user_id + "-t" + std::to_string(t);
      std::string text = dep ? "i feel" : "we love";
      int len = 3 + static_cast<int>(rng.next_below(3));
      for (int w = 0; w < len; ++w)
        text += " " + words[rng.next_below(words.size())];
      if (dep && rng.next_below(4) == 0) text += " prozac";
      if (rng.next_below(3) == 0) text += dep ? " \xF0\x9F\x98\xA2" : " \xF0\x9F\x98\x80";
      tw.text = text;
      int hour = dep ? static_cast<int>(rng.next_below(5))
                     : 9 + static_cast<int>(rng.next_below(9));
      tw.created_at = base + static_cast<int64_t>(t) * 86400 + hour * 3600 +
                      static_cast<int64_t>(rng.next_below(3600));
      tw.is_retweet = rng.next_below(10) < (dep ? 3u : 1u);
      u.tweets.push_back(std::move(tw));
    }
    std::stable_sort(u.tweets.begin(), u.tweets.end(),
                     [](const Tweet& a, const Tweet& b) {
                       if (a.created_at != b.created_at) return a.created_at < b.created_at;
                       return a.id < b.id;
                     });
    users.push_back(std::move(u));
  }
  return users;
}

void save_checkpoint(const TrainResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<Variable*> params = result.model->params();
  save_params_binary(params, dir + "/params.bin");

  nlohmann::ordered_json j;
  j["format"] = "depnet-checkpoint-v1";
  j["seed"] = result.prep.seed();
  j["step_count"] = result.adam_steps;
  j["input_mode"] = to_string(result.prep.input_mode());
  j["model"] = nlohmann::ordered_json::parse(result.model->config().to_json());
  j["vocab"] = result.model->vocab();
  j["topic_words"] = result.prep.topic_words();
  j["scaler"] = {{"mean", result.prep.scaler().mean()},
                 {"std", result.prep.scaler().stddev()}};
  nlohmann::ordered_json plist = nlohmann::ordered_json::array();
  for (const Variable* p : params)
    plist.push_back({{"name", p->name}, {"shape", p->shape}});
  j["params"] = std::move(plist);

  std::ofstream out(dir + "/manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write '" + dir + "/manifest.json'");
  out << j.dump(2) << "\n";
}

LoadedPipeline load_checkpoint(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw IoError("cannot open '" + dir + "/manifest.json'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "depnet-checkpoint-v1")
    throw IoError("'" + dir + "' is not a depnet checkpoint");

  LoadedPipeline lp;
  ModelConfig cfg = ModelConfig::from_json(j.at("model").dump());
  auto vocab = j.at("vocab").get<std::vector<std::string>>();
  lp.model = std::make_shared<FusionModel>(cfg, vocab);
  lp.step_count = j.at("step_count").get<long>();

  std::vector<Variable*> params = lp.model->params();
  auto plist = j.at("params");
  if (plist.size() != params.size())
    throw IoError("checkpoint manifest lists " + std::to_string(plist.size()) +
                  " parameters, model has " + std::to_string(params.size()));
  for (size_t i = 0; i < params.size(); ++i) {
    if (plist[i].at("name").get<std::string>() != params[i]->name ||
        plist[i].at("shape").get<Shape>() != params[i]->shape)
      throw IoError("checkpoint manifest mismatch at parameter '" + params[i]->name + "'");
  }
  load_params_binary(params, dir + "/params.bin");

  Scaler scaler;
  scaler.set(j.at("scaler").at("mean").get<std::vector<double>>(),
             j.at("scaler").at("std").get<std::vector<double>>());
  lp.prep.restore(vocab, j.at("topic_words").get<std::vector<std::string>>(),
                  std::move(scaler), input_mode_from_string(j.at("input_mode")),
                  cfg.extract_m, cfg.summary_max_tokens, j.at("seed").get<uint64_t>(),
                  false);
  return lp;
}

}  // namespace depnet
