#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "depnet/config.hpp"
#include "depnet/error.hpp"
#include "depnet/pipeline.hpp"

using namespace depnet;

namespace {

struct GlobalFlags {
  std::string config_path;
  long seed = -1;
  int jobs = -1;
};

PipelineConfig resolve_config(const GlobalFlags& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) cfg = load_config_file(g.config_path);
  apply_env_overrides(cfg);
  if (g.seed >= 0) cfg.run.seed = static_cast<uint64_t>(g.seed);
  if (g.jobs >= 1) cfg.jobs = g.jobs;
  return cfg;
}

std::vector<UserRecord> load_corpus(const std::string& path) {
  return load_timelines(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depression classification over tweet timelines"};
  app.require_subcommand(1);

  GlobalFlags global;
  app.add_option("--config", global.config_path, "key = value config file");
  app.add_option("--seed", global.seed, "root seed (overrides config)");
  app.add_option("--jobs", global.jobs, "parallelism bound (default 1)");

  // ingest
  std::string in_path, out_path, stats_path;
  long min_posts = -1, max_followers = -1;
  bool keep_non_english = false;
  auto* ingest = app.add_subcommand("ingest", "filter a raw JSONL corpus");
  ingest->add_option("input", in_path)->required();
  ingest->add_option("-o,--output", out_path)->required();
  ingest->add_option("--min-posts", min_posts, "minimum tweet count (default 10)");
  ingest->add_option("--max-followers", max_followers, "maximum follower count (default 5000)");
  ingest->add_flag("--keep-non-english", keep_non_english, "skip the language filter");

  // fit-topics
  std::string lexicons_dir, topics_out;
  int topics_k = -1, topics_iters = -1;
  auto* fit_topics = app.add_subcommand("fit-topics", "LDA over depressed users' tweets");
  fit_topics->add_option("input", in_path)->required();
  fit_topics->add_option("-o,--output", topics_out)->required();
  fit_topics->add_option("--lexicons", lexicons_dir, "lexicon directory (for stopwords.txt)");
  fit_topics->add_option("--k", topics_k, "topic count (default 5)");
  fit_topics->add_option("--iters", topics_iters, "Gibbs sweeps (default 500)");

  // features
  std::string topics_path;
  bool fit_topics_flag = false;
  auto* features = app.add_subcommand("features", "behavior feature vectors per user");
  features->add_option("input", in_path)->required();
  features->add_option("-o,--output", out_path)->required();
  features->add_option("--lexicons", lexicons_dir, "lexicon directory");
  features->add_option("--topics", topics_path, "fitted topic model JSON");
  features->add_flag("--fit-topics", fit_topics_flag, "fit the topic model on this corpus");
  features->add_option("--topics-out", topics_out, "where to write the fitted model");

  // summarize
  auto* summarize_cmd = app.add_subcommand("summarize", "summary token sequences per user");
  summarize_cmd->add_option("input", in_path)->required();
  summarize_cmd->add_option("-o,--output", out_path)->required();
  std::string mode_flag, embed_endpoint, summary_endpoint;
  int m_flag = -1, nmax_flag = -1;
  summarize_cmd->add_option("--mode", mode_flag, "summary|first_m|last_m|random_m");
  summarize_cmd->add_option("--m", m_flag, "tweets kept by selection (default 20)");
  summarize_cmd->add_option("--n-max", nmax_flag, "summary token cap (default 100)");
  app.add_option("--embed-endpoint", embed_endpoint, "HTTP embedding provider URL");
  app.add_option("--summary-endpoint", summary_endpoint, "HTTP abstractive provider URL");

  // train
  std::string checkpoint_dir;
  int epochs_flag = -1, batch_flag = -1;
  std::string embeddings_path;
  auto* train_cmd = app.add_subcommand("train", "train and checkpoint a model");
  train_cmd->add_option("input", in_path)->required();
  train_cmd->add_option("-o,--checkpoint", checkpoint_dir, "checkpoint directory");
  train_cmd->add_option("--lexicons", lexicons_dir, "lexicon directory");
  train_cmd->add_option("--epochs", epochs_flag, "training epochs");
  train_cmd->add_option("--batch-size", batch_flag, "mini-batch size (default 16)");
  train_cmd->add_option("--mode", mode_flag, "input mode (default summary)");
  train_cmd->add_option("--embeddings", embeddings_path, "word2vec text file");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "metrics for a checkpoint");
  evaluate_cmd->add_option("input", in_path)->required();
  evaluate_cmd->add_option("--checkpoint", checkpoint_dir, "checkpoint directory");
  evaluate_cmd->add_option("--lexicons", lexicons_dir, "lexicon directory");
  evaluate_cmd->add_option("-o,--output", out_path, "metrics JSON path");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "label users with a checkpoint");
  predict_cmd->add_option("input", in_path)->required();
  predict_cmd->add_option("--checkpoint", checkpoint_dir, "checkpoint directory");
  predict_cmd->add_option("--lexicons", lexicons_dir, "lexicon directory");

  // cv
  int cv_k = -1;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation");
  cv_cmd->add_option("input", in_path)->required();
  cv_cmd->add_option("-o,--output", out_path, "metrics CSV path");
  cv_cmd->add_option("--lexicons", lexicons_dir, "lexicon directory");
  cv_cmd->add_option("--k", cv_k, "fold count (default 5)");
  cv_cmd->add_option("--epochs", epochs_flag, "training epochs");
  cv_cmd->add_option("--batch-size", batch_flag, "mini-batch size");
  cv_cmd->add_option("--mode", mode_flag, "input mode");

  // study
  std::string study_dir;
  auto* study_cmd = app.add_subcommand("study", "ablation and input-mode studies");
  study_cmd->add_option("input", in_path)->required();
  study_cmd->add_option("-o,--output", study_dir, "output directory for the CSV tables");
  study_cmd->add_option("--lexicons", lexicons_dir, "lexicon directory");
  study_cmd->add_option("--epochs", epochs_flag, "training epochs per run");
  study_cmd->add_option("--batch-size", batch_flag, "mini-batch size");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig cfg = resolve_config(global);
    if (!embed_endpoint.empty()) cfg.provider.embedding_endpoint = embed_endpoint;
    if (!summary_endpoint.empty()) cfg.provider.abstractive_endpoint = summary_endpoint;
    if (!lexicons_dir.empty()) cfg.lexicons_dir = lexicons_dir;
    if (!embeddings_path.empty()) cfg.embeddings_path = embeddings_path;
    if (!checkpoint_dir.empty()) cfg.checkpoint_dir = checkpoint_dir;
    if (min_posts >= 0) cfg.min_posts = min_posts;
    if (max_followers >= 0) cfg.max_followers = max_followers;
    if (keep_non_english) cfg.keep_non_english = true;
    if (!mode_flag.empty()) cfg.run.input_mode = input_mode_from_string(mode_flag);
    if (m_flag >= 1) cfg.run.model.extract_m = m_flag;
    if (nmax_flag >= 1) cfg.run.model.summary_max_tokens = nmax_flag;
    if (epochs_flag >= 0) cfg.run.epochs = epochs_flag;
    if (batch_flag >= 1) cfg.run.batch_size = batch_flag;
    if (topics_k >= 1) cfg.run.topics_k = topics_k;
    if (topics_iters >= 1) cfg.run.topics_iters = topics_iters;
    if (cv_k >= 2) cfg.cv_k = cv_k;

    if (*ingest) {
      IngestStats stats = run_ingest(cfg, in_path, out_path);
      std::cout << stats.to_json() << "\n";
    } else if (*fit_topics) {
      auto users = load_corpus(in_path);
      auto stopwords = load_stopwords(cfg.resolved_stopwords());
      TopicModel model = run_fit_topics(cfg, users, stopwords);
      write_text_file(topics_out, model.to_json() + "\n");
      std::cout << "topics: " << model.k << ", vocabulary: " << model.vocab.size() << "\n";
    } else if (*features) {
      auto users = load_corpus(in_path);
      Lexicons lex = load_lexicons(cfg.lexicons_dir);
      TopicModel model;
      if (fit_topics_flag) {
        auto stopwords = load_stopwords(cfg.resolved_stopwords());
        model = run_fit_topics(cfg, users, stopwords);
        if (!topics_out.empty()) write_text_file(topics_out, model.to_json() + "\n");
      } else if (!topics_path.empty()) {
        model = TopicModel::from_json(read_text_file(topics_path));
      } else {
        throw InvalidArgument("features: pass --topics <model.json> or --fit-topics");
      }
      write_text_file(out_path,
                      features_jsonl(users, lex, model.top_word_list(cfg.run.topics_top_words)));
    } else if (*summarize_cmd) {
      auto users = load_corpus(in_path);
      ProviderBundle providers = build_providers(cfg);
      write_text_file(out_path, summaries_jsonl(cfg, users, providers));
    } else if (*train_cmd) {
      auto users = load_corpus(in_path);
      AssetBundle assets = load_assets(cfg);
      ProviderBundle providers = build_providers(cfg);
      TrainOutputs outputs = run_train(cfg, users, assets, providers);
      save_checkpoint(outputs.result, cfg.checkpoint_dir);
      write_text_file(cfg.checkpoint_dir + "/history.json",
                      history_to_json(outputs.result.history) + "\n");
      write_text_file(cfg.checkpoint_dir + "/metrics.json",
                      metrics_to_json(outputs.holdout) + "\n");
      std::cout << metrics_to_json(outputs.holdout) << "\n";
    } else if (*evaluate_cmd) {
      auto users = load_corpus(in_path);
      AssetBundle assets = load_assets(cfg);
      ProviderBundle providers = build_providers(cfg);
      Metrics m = run_evaluate(cfg, users, assets, providers);
      if (!out_path.empty()) write_text_file(out_path, metrics_to_json(m) + "\n");
      std::cout << metrics_to_json(m) << "\n";
    } else if (*predict_cmd) {
      auto users = load_corpus(in_path);
      AssetBundle assets = load_assets(cfg);
      ProviderBundle providers = build_providers(cfg);
      std::cout << run_predict(cfg, users, assets, providers);
    } else if (*cv_cmd) {
      auto users = load_corpus(in_path);
      AssetBundle assets = load_assets(cfg);
      ProviderBundle providers = build_providers(cfg);
      CvResult cv = cross_validate(cfg.run, users, cfg.cv_k, assets.view(providers));
      std::string csv = cv.to_csv();
      if (!out_path.empty()) write_text_file(out_path, csv);
      std::cout << csv;
    } else if (*study_cmd) {
      auto users = load_corpus(in_path);
      AssetBundle assets = load_assets(cfg);
      ProviderBundle providers = build_providers(cfg);
      Assets view = assets.view(providers);
      std::vector<StudyRow> modes = input_mode_study(cfg.run, users, view);
      std::vector<StudyRow> ablations = ablation_study(cfg.run, users, view);
      if (!study_dir.empty()) {
        std::filesystem::create_directories(study_dir);
        write_text_file(study_dir + "/input_modes.csv", study_to_csv(modes));
        write_text_file(study_dir + "/ablations.csv", study_to_csv(ablations));
      }
      std::cout << "input modes:\n" << study_to_csv(modes) << "ablations:\n"
                << study_to_csv(ablations);
    }
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
