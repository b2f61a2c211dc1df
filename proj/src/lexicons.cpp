#include "depnet/lexicons.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "depnet/error.hpp"
#include "depnet/text.hpp"

namespace fs = std::filesystem;

namespace depnet {

namespace {

std::string lower_trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(a, b - a + 1);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing lexicon file '" + path + "'");
  return in;
}

uint32_t parse_hex_cp(const std::string& s) {
  uint32_t v = 0;
  if (s.empty()) throw IoError("empty codepoint in emoji lexicon");
  for (char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= c - '0';
    else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
    else throw IoError("bad codepoint '" + s + "' in emoji lexicon");
  }
  return v;
}

}  // namespace

std::unordered_set<std::string> load_wordlist(const std::string& path) {
  auto in = open_or_throw(path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = lower_trim(line);
    if (!w.empty() && w[0] != '#') words.insert(w);
  }
  return words;
}

std::vector<std::string> load_stopwords(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string w = lower_trim(line);
    if (!w.empty() && w[0] != '#') words.push_back(w);
  }
  return words;
}

Lexicons load_lexicons(const std::string& dir) {
  Lexicons lex;

  {
    auto in = open_or_throw(dir + "/vad.tsv");
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string word;
      Vad v;
      if (!(ss >> word >> v.valence >> v.arousal >> v.dominance))
        throw IoError(dir + "/vad.tsv line " + std::to_string(lineno) + ": expected word<TAB>v<TAB>a<TAB>d");
      lex.vad[lower_trim(word)] = v;
    }
  }

  {
    auto in = open_or_throw(dir + "/emoji.tsv");
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      line = lower_trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string cps, pol;
      if (!(ss >> cps >> pol))
        throw IoError(dir + "/emoji.tsv line " + std::to_string(lineno) + ": expected codepoints<TAB>polarity");
      std::string key;
      std::string part;
      std::istringstream cs(cps);
      while (std::getline(cs, part, '-')) key += utf8_encode(parse_hex_cp(part));
      EmojiPolarity p;
      if (pol == "pos") p = EmojiPolarity::positive;
      else if (pol == "neu") p = EmojiPolarity::neutral;
      else if (pol == "neg") p = EmojiPolarity::negative;
      else throw IoError(dir + "/emoji.tsv line " + std::to_string(lineno) + ": polarity must be pos|neu|neg");
      lex.emoji_polarity[key] = p;
    }
  }

  lex.antidepressants = load_wordlist(dir + "/antidepressants.txt");

  {
    const std::string sd = dir + "/symptoms";
    std::vector<std::string> files;
    if (fs::is_directory(sd))
      for (const auto& e : fs::directory_iterator(sd))
        if (e.is_regular_file() && e.path().extension() == ".txt")
          files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.size() != 9) {
      std::string msg = "expected exactly 9 symptom lists in '" + sd + "', found " +
                        std::to_string(files.size()) + " (one .txt per DSM symptom)";
      throw IoError(msg);
    }
    for (size_t i = 0; i < 9; ++i) {
      lex.symptoms[i] = load_wordlist(files[i]);
      if (lex.symptoms[i].empty())
        throw IoError("symptom list '" + files[i] + "' is empty");
      lex.symptom_names.push_back(fs::path(files[i]).stem().string());
    }
  }

  return lex;
}

}  // namespace depnet
