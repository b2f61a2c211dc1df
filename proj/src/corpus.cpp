#include "depnet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "depnet/error.hpp"
#include "depnet/rng.hpp"
#include "depnet/text.hpp"
#include "json.hpp"

namespace depnet {

namespace {

// Howard Hinnant's days-from-civil; no locale, no timezone database.
int64_t days_from_civil(int64_t y, int64_t m, int64_t d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(int64_t z, int64_t& y, int64_t& m, int64_t& d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int64_t doe = z - era * 146097;
  const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = yoe + era * 400;
  const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int64_t mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

int parse_digits(const std::string& s, size_t pos, size_t count) {
  int v = 0;
  for (size_t i = pos; i < pos + count; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9')
      throw IoError("bad ISO-8601 timestamp: '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

int64_t parse_iso8601(const std::string& s) {
  // YYYY-MM-DD[T ]HH:MM:SS[.fff][Z|+HH:MM|+HHMM|-...]
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw IoError("bad ISO-8601 timestamp: '" + s + "'");
  int year = parse_digits(s, 0, 4);
  int month = parse_digits(s, 5, 2);
  int day = parse_digits(s, 8, 2);
  int hour = parse_digits(s, 11, 2);
  int minute = parse_digits(s, 14, 2);
  int second = parse_digits(s, 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second > 60)
    throw IoError("bad ISO-8601 timestamp: '" + s + "'");
  size_t i = 19;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;  // fraction dropped
  }
  int64_t offset = 0;
  if (i < s.size()) {
    char c = s[i];
    if (c == 'Z' || c == 'z') {
      ++i;
    } else if (c == '+' || c == '-') {
      int oh = parse_digits(s, i + 1, 2);
      size_t j = i + 3;
      if (j < s.size() && s[j] == ':') ++j;
      int om = (j + 1 < s.size()) ? parse_digits(s, j, 2) : 0;
      if (j + 2 <= s.size()) j += 2;
      offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
      i = j;
    }
  }
  if (i != s.size()) throw IoError("bad ISO-8601 timestamp: '" + s + "'");
  int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_iso8601(int64_t t) {
  int64_t days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  int64_t sod = t - days * 86400;
  int64_t y, m, d;
  civil_from_days(days, y, m, d);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lldT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), static_cast<long long>(m),
                static_cast<long long>(d), static_cast<long long>(sod / 3600),
                static_cast<long long>((sod % 3600) / 60),
                static_cast<long long>(sod % 60));
  return buf;
}

namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

UserRecord parse_user_line(const std::string& line, long lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw IoError("line " + std::to_string(lineno) + ": malformed JSON: " + e.what());
  }
  auto fail = [&](const std::string& what) -> IoError {
    return IoError("line " + std::to_string(lineno) + ": " + what);
  };
  if (!j.is_object()) throw fail("expected a JSON object");
  for (const char* key : {"user_id", "followers_count", "friends_count", "tweets"})
    if (!j.contains(key)) throw fail(std::string("missing required field \"") + key + "\"");

  UserRecord u;
  if (!j["user_id"].is_string()) throw fail("\"user_id\" must be a string");
  u.user_id = j["user_id"].get<std::string>();
  if (j.contains("label") && !j["label"].is_null()) {
    long lv = j["label"].get<long>();
    if (lv != 0 && lv != 1) throw fail("\"label\" must be 0, 1 or null");
    u.label = lv == 1 ? Label::depressed : Label::non_depressed;
  }
  u.followers_count = j["followers_count"].get<long>();
  u.friends_count = j["friends_count"].get<long>();
  if (u.followers_count < 0 || u.friends_count < 0)
    throw fail("follower/friend counts must be non-negative");
  if (!j["tweets"].is_array()) throw fail("\"tweets\" must be an array");
  for (const auto& tj : j["tweets"]) {
    for (const char* key : {"id", "text", "created_at", "is_retweet"})
      if (!tj.contains(key))
        throw fail(std::string("tweet missing required field \"") + key + "\"");
    Tweet t;
    t.id = tj["id"].get<std::string>();
    t.text = tj["text"].get<std::string>();
    if (trimmed(t.text).empty()) throw fail("tweet \"" + t.id + "\" has empty text");
    try {
      t.created_at = parse_iso8601(tj["created_at"].get<std::string>());
    } catch (const Error& e) {
      throw fail(e.what());
    }
    t.is_retweet = tj["is_retweet"].get<bool>();
    u.tweets.push_back(std::move(t));
  }
  std::stable_sort(u.tweets.begin(), u.tweets.end(), [](const Tweet& a, const Tweet& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
  });
  return u;
}

}  // namespace

std::vector<UserRecord> load_timelines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<UserRecord> users;
  std::unordered_set<std::string> seen;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    UserRecord u = parse_user_line(line, lineno);
    if (!seen.insert(u.user_id).second)
      throw IoError("line " + std::to_string(lineno) + ": duplicate user_id \"" +
                    u.user_id + "\"");
    users.push_back(std::move(u));
  }
  return users;
}

std::string user_to_jsonl(const UserRecord& user) {
  nlohmann::ordered_json j;
  j["user_id"] = user.user_id;
  if (user.label)
    j["label"] = user.label == Label::depressed ? 1 : 0;
  else
    j["label"] = nullptr;
  j["followers_count"] = user.followers_count;
  j["friends_count"] = user.friends_count;
  j["tweets"] = nlohmann::ordered_json::array();
  for (const Tweet& t : user.tweets) {
    nlohmann::ordered_json tj;
    tj["id"] = t.id;
    tj["text"] = t.text;
    tj["created_at"] = format_iso8601(t.created_at);
    tj["is_retweet"] = t.is_retweet;
    j["tweets"].push_back(std::move(tj));
  }
  return j.dump();
}

void save_timelines(const std::vector<UserRecord>& users, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const UserRecord& u : users) out << user_to_jsonl(u) << "\n";
}

std::vector<UserRecord> filter_users(const std::vector<UserRecord>& users,
                                     long min_posts, long max_followers) {
  std::vector<UserRecord> kept;
  for (const UserRecord& u : users) {
    if (static_cast<long>(u.tweets.size()) >= min_posts &&
        u.followers_count <= max_followers)
      kept.push_back(u);
  }
  return kept;
}

bool is_mostly_english(const UserRecord& user, double threshold) {
  long letters = 0, foreign = 0;
  for (const Tweet& t : user.tweets) ascii_letter_counts(t.text, letters, foreign);
  if (letters + foreign == 0) return true;
  return static_cast<double>(letters) / static_cast<double>(letters + foreign) >=
         threshold;
}

std::vector<UserRecord> filter_language(
    const std::vector<UserRecord>& users,
    const std::function<bool(const UserRecord&)>& predicate) {
  std::vector<UserRecord> kept;
  for (const UserRecord& u : users)
    if (predicate(u)) kept.push_back(u);
  return kept;
}

std::pair<std::vector<UserRecord>, std::vector<UserRecord>> split(
    const std::vector<UserRecord>& users, double train_fraction, uint64_t seed) {
  if (users.size() < 2) throw InvalidArgument("split needs at least 2 users");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidArgument("train_fraction must be in (0, 1)");
  const size_t n = users.size();
  const size_t n_train = static_cast<size_t>(
      std::lround(train_fraction * static_cast<double>(n)));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, "corpus.split"));
  rng.shuffle(order);
  std::vector<bool> in_train(n, false);
  for (size_t i = 0; i < n_train && i < n; ++i) in_train[order[i]] = true;
  std::vector<UserRecord> train, test;
  for (size_t i = 0; i < n; ++i) (in_train[i] ? train : test).push_back(users[i]);
  return {std::move(train), std::move(test)};
}

FoldPlan kfold(const std::vector<UserRecord>& users, int k, uint64_t seed) {
  if (k < 2) throw InvalidArgument("kfold needs k >= 2");
  if (static_cast<int>(users.size()) < k)
    throw InvalidArgument("kfold needs at least k users (" + std::to_string(users.size()) +
                          " < " + std::to_string(k) + ")");
  std::vector<std::string> ids;
  ids.reserve(users.size());
  for (const UserRecord& u : users) ids.push_back(u.user_id);
  Rng rng(derive_seed(seed, "corpus.kfold"));
  rng.shuffle(ids);
  FoldPlan plan;
  plan.seed = seed;
  plan.folds.resize(k);
  const size_t n = ids.size();
  const size_t base = n / k, extra = n % k;
  size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    size_t take = base + (static_cast<size_t>(f) < extra ? 1 : 0);
    for (size_t i = 0; i < take; ++i) plan.folds[f].push_back(ids[pos++]);
  }
  return plan;
}

std::string fold_plan_to_json(const FoldPlan& plan) {
  nlohmann::ordered_json j;
  j["seed"] = plan.seed;
  j["folds"] = plan.folds;
  return j.dump(2);
}

FoldPlan fold_plan_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FoldPlan plan;
  plan.seed = j.at("seed").get<uint64_t>();
  plan.folds = j.at("folds").get<std::vector<std::vector<std::string>>>();
  return plan;
}

}  // namespace depnet
