#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taxalign {

/// Lowercases ASCII letters, trims, and joins internal whitespace runs with
/// a single '_'. No stemming.
std::string normalize_word(std::string_view word);

/// Lowercased alphanumeric tokens of a gloss; punctuation separates tokens.
/// Bytes >= 0x80 are kept as token characters so UTF-8 text is not split.
std::vector<std::string> tokenize(std::string_view text);

class Stoplist {
 public:
  /// Bundled English function-word list.
  static Stoplist english();
  static Stoplist from_text(std::string_view text);
  static Stoplist from_file(const std::string& path);

  bool contains(std::string_view token) const { return words_.find(token) != words_.end(); }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

/// Distinct gloss tokens that are not stopwords, sorted.
std::vector<std::string> content_words(std::string_view gloss, const Stoplist& stoplist);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
std::string read_file(const std::string& path);

}  // namespace taxalign
