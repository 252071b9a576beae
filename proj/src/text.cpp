#include "semcom/text.hpp"

#include <algorithm>
#include <cctype>

namespace semcom::text {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : s) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

std::vector<std::string> fold_candidates(const std::string& token) {
  std::string t = to_lower(token);
  std::vector<std::string> out{t};
  auto add = [&out](std::string s) {
    if (!s.empty() && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  std::size_t n = t.size();
  if (n > 3 && t.compare(n - 3, 3, "ies") == 0) add(t.substr(0, n - 3) + "y");
  if (n > 3 && t.compare(n - 2, 2, "es") == 0) add(t.substr(0, n - 2));
  if (n > 2 && t.back() == 's') add(t.substr(0, n - 1));
  // Agentive suffixes: "cyclists" -> "cycle", "motorcyclist" -> "motorcycle".
  for (const char* suffix : {"ists", "ist"}) {
    std::size_t len = std::char_traits<char>::length(suffix);
    if (n > len + 2 && t.compare(n - len, len, suffix) == 0) {
      add(t.substr(0, n - len));
      add(t.substr(0, n - len) + "e");
    }
  }
  return out;
}

bool words_match(const std::string& token, const std::string& term) {
  auto a = fold_candidates(token);
  auto b = fold_candidates(term);
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y) return true;
  return false;
}

namespace {

std::vector<std::string> phrase_words(const std::string& phrase) { return tokenize(phrase); }

bool phrase_match_at(const std::vector<std::string>& tokens, std::size_t pos,
                     const std::vector<std::string>& words) {
  if (words.empty() || pos + words.size() > tokens.size()) return false;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (!words_match(tokens[pos + i], words[i])) return false;
  return true;
}

}  // namespace

bool phrase_match(const std::vector<std::string>& tokens, const std::string& phrase) {
  auto words = phrase_words(phrase);
  if (words.empty()) return false;
  for (std::size_t pos = 0; pos + words.size() <= tokens.size(); ++pos)
    if (phrase_match_at(tokens, pos, words)) return true;
  return false;
}

int match_count(const std::vector<std::string>& tokens, const std::vector<std::string>& terms) {
  int count = 0;
  for (const auto& term : terms)
    if (phrase_match(tokens, term)) ++count;
  return count;
}

}  // namespace semcom::text
