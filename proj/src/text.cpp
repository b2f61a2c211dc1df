#include "depnet/text.hpp"

#include <cctype>

namespace depnet {

std::vector<uint32_t> utf8_decode(const std::string& s) {
  std::vector<uint32_t> out;
  out.reserve(s.size());
  size_t i = 0;
  const size_t n = s.size();
  while (i < n) {
    unsigned char c = s[i];
    uint32_t cp = 0xFFFD;
    size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0 && i + 1 < n && (s[i + 1] & 0xC0) == 0x80) {
      cp = (c & 0x1F) << 6 | (s[i + 1] & 0x3F);
      len = 2;
    } else if ((c & 0xF0) == 0xE0 && i + 2 < n && (s[i + 1] & 0xC0) == 0x80 &&
               (s[i + 2] & 0xC0) == 0x80) {
      cp = (c & 0x0F) << 12 | (s[i + 1] & 0x3F) << 6 | (s[i + 2] & 0x3F);
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && i + 3 < n && (s[i + 1] & 0xC0) == 0x80 &&
               (s[i + 2] & 0xC0) == 0x80 && (s[i + 3] & 0xC0) == 0x80) {
      cp = (c & 0x07) << 18 | (s[i + 1] & 0x3F) << 12 | (s[i + 2] & 0x3F) << 6 |
           (s[i + 3] & 0x3F);
      len = 4;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

std::string utf8_encode(const std::vector<uint32_t>& cps) {
  std::string out;
  for (uint32_t cp : cps) out += utf8_encode(cp);
  return out;
}

bool is_emoji(uint32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // pictographs, faces, symbols ext.
         (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
         (cp >= 0x2B00 && cp <= 0x2BFF) ||    // arrows, stars
         cp == 0x2764;
}

bool is_emoji_extender(uint32_t cp) {
  return cp == 0xFE0E || cp == 0xFE0F || cp == 0x200D ||
         (cp >= 0x1F3FB && cp <= 0x1F3FF);
}

namespace {

bool is_space_cp(uint32_t cp) {
  if (cp < 0x80) return std::isspace(static_cast<int>(cp)) != 0;
  return cp == 0x00A0 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x3000;
}

bool is_word_cp(uint32_t cp) {
  if (cp < 0x80) {
    return std::isalnum(static_cast<int>(cp)) != 0 || cp == '_';
  }
  // Non-ASCII letters stay word characters so "café" survives intact.
  return !is_emoji(cp) && !is_emoji_extender(cp) && !is_space_cp(cp);
}

bool starts_with_ci(const std::string& s, const char* prefix) {
  size_t i = 0;
  for (; prefix[i]; ++i) {
    if (i >= s.size()) return false;
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  // Rough whitespace split first so URL/mention prefixes stay detectable.
  std::vector<std::string> chunks;
  {
    std::string cur;
    for (uint32_t cp : utf8_decode(text)) {
      if (is_space_cp(cp)) {
        if (!cur.empty()) chunks.push_back(std::move(cur)), cur.clear();
      } else {
        cur += utf8_encode(cp);
      }
    }
    if (!cur.empty()) chunks.push_back(std::move(cur));
  }

  for (const std::string& chunk : chunks) {
    if (starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
        starts_with_ci(chunk, "www.")) {
      tokens.push_back("<url>");
      continue;
    }
    if (chunk.size() > 1 && chunk[0] == '@' &&
        is_word_cp(utf8_decode(chunk.substr(1)).front())) {
      tokens.push_back("<user>");
      continue;
    }
    std::string cur;
    bool cur_is_emoji = false;
    auto flush = [&] {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
      cur_is_emoji = false;
    };
    for (uint32_t cp : utf8_decode(chunk)) {
      if (is_emoji_extender(cp) && cur_is_emoji) {
        cur += utf8_encode(cp);
      } else if (is_emoji(cp)) {
        if (!cur_is_emoji) flush();
        if (cur_is_emoji && !cur.empty()) {
          // consecutive emoji without ZWJ are separate tokens
          bool glued = cur.size() >= 3 && cur.compare(cur.size() - 3, 3, "\xE2\x80\x8D") == 0;
          if (!glued) flush();
        }
        cur += utf8_encode(cp);
        cur_is_emoji = true;
      } else if (is_word_cp(cp)) {
        if (cur_is_emoji) flush();
        if (cp < 0x80) cp = static_cast<uint32_t>(std::tolower(static_cast<int>(cp)));
        cur += utf8_encode(cp);
      } else {
        flush();  // punctuation acts as a separator
      }
    }
    flush();
  }
  return tokens;
}

long count_matches(const std::vector<std::string>& tokens,
                   const std::unordered_set<std::string>& entries) {
  long hits = 0;
  for (const auto& t : tokens) {
    if (entries.count(t)) ++hits;
  }
  bool any_hyphen = false;
  for (const auto& e : entries) {
    if (e.find('-') != std::string::npos) {
      any_hyphen = true;
      break;
    }
  }
  if (any_hyphen) {
    for (size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (entries.count(tokens[i] + "-" + tokens[i + 1])) ++hits;
    }
  }
  return hits;
}

void ascii_letter_counts(const std::string& text, long& ascii_letters, long& foreign) {
  for (uint32_t cp : utf8_decode(text)) {
    if (cp < 0x80) {
      if (std::isalpha(static_cast<int>(cp))) ++ascii_letters;
    } else if (!is_emoji(cp) && !is_emoji_extender(cp) && !is_space_cp(cp)) {
      ++foreign;
    }
  }
}

double ascii_letter_fraction(const std::string& text) {
  long ascii_letters = 0, foreign = 0;
  ascii_letter_counts(text, ascii_letters, foreign);
  if (ascii_letters + foreign == 0) return 1.0;
  return static_cast<double>(ascii_letters) / static_cast<double>(ascii_letters + foreign);
}

}  // namespace depnet
