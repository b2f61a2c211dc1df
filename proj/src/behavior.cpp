#include "depnet/behavior.hpp"

#include <unordered_map>

#include "depnet/error.hpp"
#include "depnet/text.hpp"

namespace depnet {

std::vector<double> SocialVector::flatten() const {
  std::vector<double> v;
  v.reserve(kDim);
  for (long c : posting_time_hist) v.push_back(static_cast<double>(c));
  v.push_back(static_cast<double>(followers));
  v.push_back(static_cast<double>(friends));
  v.push_back(static_cast<double>(n_tweets));
  v.push_back(static_cast<double>(n_retweets));
  v.push_back(mean_tweet_len);
  return v;
}

std::vector<double> EmotionVector::flatten() const {
  return {vad_sum[0],
          vad_sum[1],
          vad_sum[2],
          static_cast<double>(emoji_counts[0]),
          static_cast<double>(emoji_counts[1]),
          static_cast<double>(emoji_counts[2]),
          static_cast<double>(fp_singular),
          static_cast<double>(fp_plural)};
}

std::vector<double> DomainVector::flatten() const {
  std::vector<double> v;
  v.reserve(kDim);
  for (long c : symptom_counts) v.push_back(static_cast<double>(c));
  v.push_back(static_cast<double>(antidepressant_count));
  return v;
}

std::vector<double> TopicVector::flatten() const {
  std::vector<double> v;
  v.reserve(word_counts.size());
  for (long c : word_counts) v.push_back(static_cast<double>(c));
  return v;
}

std::vector<double> BehaviorFeatures::flatten() const {
  std::vector<double> v = social.flatten();
  for (double x : emotional.flatten()) v.push_back(x);
  for (double x : domain.flatten()) v.push_back(x);
  for (double x : topic.flatten()) v.push_back(x);
  return v;
}

SocialVector social_features(const UserRecord& user) {
  if (user.tweets.empty())
    throw InvalidArgument("social_features: user '" + user.user_id + "' has no tweets");
  SocialVector s;
  s.followers = user.followers_count;
  s.friends = user.friends_count;
  s.n_tweets = static_cast<long>(user.tweets.size());
  long total_tokens = 0;
  for (const Tweet& t : user.tweets) {
    int64_t sod = ((t.created_at % 86400) + 86400) % 86400;
    s.posting_time_hist[static_cast<size_t>(sod / 3600)]++;
    if (t.is_retweet) s.n_retweets++;
    total_tokens += static_cast<long>(tokenize(t.text).size());
  }
  s.mean_tweet_len = static_cast<double>(total_tokens) / static_cast<double>(s.n_tweets);
  return s;
}

EmotionVector emotional_features(const UserRecord& user, const Lexicons& lex) {
  EmotionVector e;
  for (const Tweet& t : user.tweets) {
    for (const std::string& tok : tokenize(t.text)) {
      auto it = lex.vad.find(tok);
      if (it != lex.vad.end()) {
        e.vad_sum[0] += it->second.valence;
        e.vad_sum[1] += it->second.arousal;
        e.vad_sum[2] += it->second.dominance;
      }
      auto eit = lex.emoji_polarity.find(tok);
      if (eit == lex.emoji_polarity.end() && tok.size() > 3 &&
          tok.compare(tok.size() - 3, 3, "\xEF\xB8\x8F") == 0) {
        // retry without a trailing variation selector (U+FE0F)
        eit = lex.emoji_polarity.find(tok.substr(0, tok.size() - 3));
      }
      if (eit != lex.emoji_polarity.end())
        e.emoji_counts[static_cast<size_t>(eit->second)]++;
      if (lex.fp_singular.count(tok)) e.fp_singular++;
      if (lex.fp_plural.count(tok)) e.fp_plural++;
    }
  }
  return e;
}

DomainVector domain_features(const UserRecord& user, const Lexicons& lex) {
  DomainVector d;
  for (const Tweet& t : user.tweets) {
    std::vector<std::string> toks = tokenize(t.text);
    for (size_t j = 0; j < 9; ++j)
      d.symptom_counts[j] += count_matches(toks, lex.symptoms[j]);
    d.antidepressant_count += count_matches(toks, lex.antidepressants);
  }
  return d;
}

TopicVector topic_features(const UserRecord& user,
                           const std::vector<std::string>& topic_words) {
  if (topic_words.empty())
    throw InvalidArgument("topic_features: topic word list is empty");
  std::unordered_map<std::string, long> counts;
  for (const Tweet& t : user.tweets)
    for (const std::string& tok : tokenize(t.text)) counts[tok]++;
  TopicVector tv;
  tv.word_counts.reserve(topic_words.size());
  for (const std::string& w : topic_words) {
    auto it = counts.find(w);
    tv.word_counts.push_back(it == counts.end() ? 0 : it->second);
  }
  return tv;
}

BehaviorFeatures behavior_features(const UserRecord& user, const Lexicons& lex,
                                   const std::vector<std::string>& topic_words) {
  return {social_features(user), emotional_features(user, lex),
          domain_features(user, lex), topic_features(user, topic_words)};
}

}  // namespace depnet
