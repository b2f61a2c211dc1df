#pragma once

#include <array>
#include <string>
#include <vector>

#include "depnet/corpus.hpp"
#include "depnet/lexicons.hpp"

namespace depnet {

struct SocialVector {
  std::array<long, 24> posting_time_hist{};  // tweets per UTC hour of day
  long followers = 0;
  long friends = 0;
  long n_tweets = 0;
  long n_retweets = 0;
  double mean_tweet_len = 0;  // tokens

  static constexpr int kDim = 29;
  std::vector<double> flatten() const;
};

struct EmotionVector {
  std::array<double, 3> vad_sum{};    // valence, arousal, dominance
  std::array<long, 3> emoji_counts{}; // positive, neutral, negative
  long fp_singular = 0;
  long fp_plural = 0;

  static constexpr int kDim = 8;
  std::vector<double> flatten() const;
};

struct DomainVector {
  std::array<long, 9> symptom_counts{};
  long antidepressant_count = 0;

  static constexpr int kDim = 10;
  std::vector<double> flatten() const;
};

struct TopicVector {
  std::vector<long> word_counts;  // K*W entries, aligned with the topic word list

  std::vector<double> flatten() const;
};

struct BehaviorFeatures {
  SocialVector social;
  EmotionVector emotional;
  DomainVector domain;
  TopicVector topic;

  // social ++ emotional ++ domain ++ topic, in that order
  std::vector<double> flatten() const;
};

SocialVector social_features(const UserRecord& user);
EmotionVector emotional_features(const UserRecord& user, const Lexicons& lex);
DomainVector domain_features(const UserRecord& user, const Lexicons& lex);
TopicVector topic_features(const UserRecord& user,
                           const std::vector<std::string>& topic_words);

BehaviorFeatures behavior_features(const UserRecord& user, const Lexicons& lex,
                                   const std::vector<std::string>& topic_words);

}  // namespace depnet
