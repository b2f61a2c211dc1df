#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace depnet {

enum class Label { non_depressed = 0, depressed = 1 };

struct Tweet {
  std::string id;
  std::string text;
  int64_t created_at = 0;  // epoch seconds, UTC
  bool is_retweet = false;
};

struct UserRecord {
  std::string user_id;
  std::optional<Label> label;
  long followers_count = 0;
  long friends_count = 0;
  std::vector<Tweet> tweets;  // ascending by created_at, ties by id
};

struct FoldPlan {
  uint64_t seed = 0;
  std::vector<std::vector<std::string>> folds;  // disjoint user-id sets
};

// "2021-03-04T05:06:07Z", fractional seconds and +HH:MM offsets accepted.
int64_t parse_iso8601(const std::string& s);
std::string format_iso8601(int64_t epoch_seconds);

// JSON Lines, one user per line. Tweets are re-sorted ascending by
// created_at (ties by tweet id). Malformed lines, duplicate user ids and
// schema violations raise IoError naming the line.
std::vector<UserRecord> load_timelines(const std::string& path);
void save_timelines(const std::vector<UserRecord>& users, const std::string& path);
std::string user_to_jsonl(const UserRecord& user);

std::vector<UserRecord> filter_users(const std::vector<UserRecord>& users,
                                     long min_posts = 10, long max_followers = 5000);

// Aggregate ASCII-letter fraction over all tweets >= threshold. A crude
// replaceable stand-in for proper language identification.
bool is_mostly_english(const UserRecord& user, double threshold = 0.6);

std::vector<UserRecord> filter_language(
    const std::vector<UserRecord>& users,
    const std::function<bool(const UserRecord&)>& predicate = [](const UserRecord& u) {
      return is_mostly_english(u);
    });

// Deterministic shuffled split; |train| = round(train_fraction * N).
// Relative input order is preserved within each part.
std::pair<std::vector<UserRecord>, std::vector<UserRecord>> split(
    const std::vector<UserRecord>& users, double train_fraction, uint64_t seed);

FoldPlan kfold(const std::vector<UserRecord>& users, int k, uint64_t seed);

std::string fold_plan_to_json(const FoldPlan& plan);
FoldPlan fold_plan_from_json(const std::string& text);

}  // namespace depnet
