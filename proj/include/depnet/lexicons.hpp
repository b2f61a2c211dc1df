#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace depnet {

enum class EmojiPolarity { positive = 0, neutral = 1, negative = 2 };

struct Vad {
  double valence = 0, arousal = 0, dominance = 0;
};

struct Lexicons {
  std::unordered_map<std::string, Vad> vad;
  // keyed by the UTF-8 emoji sequence (decoded from the hex form in the file)
  std::unordered_map<std::string, EmojiPolarity> emoji_polarity;
  std::array<std::unordered_set<std::string>, 9> symptoms;
  std::vector<std::string> symptom_names;
  std::unordered_set<std::string> antidepressants;
  std::unordered_set<std::string> fp_singular{"i", "me", "my", "mine", "myself"};
  std::unordered_set<std::string> fp_plural{"we", "us", "our", "ours", "ourselves"};
};

// Layout under `dir`:
//   vad.tsv              word<TAB>v<TAB>a<TAB>d
//   emoji.tsv            hex-codepoints (dash-joined)<TAB>pos|neu|neg
//   antidepressants.txt  one name per line
//   symptoms/NN_*.txt    exactly nine files, one word/phrase per line
//                        (multi-word phrases written hyphen-joined)
Lexicons load_lexicons(const std::string& dir);

std::unordered_set<std::string> load_wordlist(const std::string& path);
std::vector<std::string> load_stopwords(const std::string& path);

}  // namespace depnet
