#include "taxalign/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace taxalign {

namespace {

constexpr const char* kEnglishStopwords[] = {
    "a",     "an",    "the",   "and",   "or",    "but",   "nor",   "of",    "in",    "on",
    "at",    "to",    "for",   "from",  "by",    "with",  "without", "as", "into",  "onto",
    "upon",  "about", "than",  "that",  "this",  "these", "those", "which", "who",   "whom",
    "whose", "what",  "it",    "its",   "is",    "are",   "was",   "were",  "be",    "been",
    "being", "has",   "have",  "had",   "do",    "does",  "did",   "not",   "no",    "so",
    "such",  "some",  "any",   "all",   "each",  "other", "one",   "etc",
    "especially", "usually", "something", "someone", "very",
};

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c >= 0x80;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string normalize_word(std::string_view word) {
  word = trim(word);
  std::string out;
  out.reserve(word.size());
  bool pending_space = false;
  for (char c : word) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back('_');
      pending_space = false;
    }
    out.push_back(ascii_lower(c));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_token_char(static_cast<unsigned char>(c))) {
      cur.push_back(ascii_lower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  // hyphens only join words; strip them at token edges
  for (auto& t : out) {
    while (!t.empty() && t.front() == '-') t.erase(t.begin());
    while (!t.empty() && t.back() == '-') t.pop_back();
  }
  std::erase_if(out, [](const std::string& t) { return t.empty(); });
  return out;
}

Stoplist Stoplist::english() {
  Stoplist s;
  for (const char* w : kEnglishStopwords) s.words_.emplace(w);
  return s;
}

Stoplist Stoplist::from_text(std::string_view text) {
  Stoplist s;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    for (auto& tok : tokenize(line)) s.words_.insert(std::move(tok));
  }
  return s;
}

Stoplist Stoplist::from_file(const std::string& path) { return from_text(read_file(path)); }

std::vector<std::string> content_words(std::string_view gloss, const Stoplist& stoplist) {
  auto tokens = tokenize(gloss);
  std::erase_if(tokens, [&](const std::string& t) { return stoplist.contains(t); });
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace taxalign
