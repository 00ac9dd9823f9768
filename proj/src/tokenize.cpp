#include <cctype>

#include "semmatch/matcher.hpp"

namespace semmatch {

std::vector<std::string> tokenize_label(std::string_view label) {
  enum class Cls { other, lower, upper, digit };
  auto cls = [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    if (std::islower(c)) return Cls::lower;
    if (std::isupper(c)) return Cls::upper;
    if (std::isdigit(c)) return Cls::digit;
    return Cls::other;
  };

  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < label.size(); ++i) {
    Cls c = cls(label[i]);
    if (c == Cls::other) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      Cls prev = cls(label[i - 1]);
      bool boundary = (prev == Cls::digit) != (c == Cls::digit);
      if (prev == Cls::lower && c == Cls::upper) boundary = true;
      // "ISBNNumber": split before the last capital of an upper-case run.
      if (prev == Cls::upper && c == Cls::upper && i + 1 < label.size() &&
          cls(label[i + 1]) == Cls::lower)
        boundary = true;
      if (boundary) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(label[i]))));
  }
  flush();
  return tokens;
}

}  // namespace semmatch
