#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semmatch/error.hpp"

namespace semmatch {

enum class Measure { wup, path };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view s);

struct Synset {
  std::string id;
  std::vector<std::string> lemmas;
  std::vector<std::string> hypernyms;
  std::string gloss;
};

struct SenseSimilarity {
  double value = 0.0;
  Measure measure = Measure::wup;
};

// How lemma_similarity handles words missing from the taxonomy.
struct LemmaOptions {
  Measure measure = Measure::wup;
  // When set, an OOV pair scores 1 - levenshtein/max(len) instead of 0.
  bool edit_distance_fallback = false;
};

// Immutable WordNet-style lexical taxonomy: synsets linked by hypernym
// edges, plus a lemma -> senses index. Roots have depth 1; the depth of any
// other synset is one more than its shallowest hypernym.
class Taxonomy {
 public:
  // Line-based format, see docs/formats.md. Throws ParseError for grammar
  // problems and ValidationError for duplicate ids, dangling hypernyms and
  // hypernym cycles.
  static Taxonomy load(std::istream& in);
  static Taxonomy parse(std::string_view text);
  static Taxonomy load_file(const std::string& path);

  std::size_t size() const { return synsets_.size(); }
  int max_depth() const { return max_depth_; }

  bool contains(std::string_view id) const;
  const Synset& synset(std::string_view id) const;
  int depth(std::string_view id) const;

  // Synset ids in id order.
  std::vector<std::string> synset_ids() const;
  std::vector<std::string> lemmas() const;

  // Exact lookup after lowercasing. Empty when out of vocabulary.
  const std::vector<std::string>& senses_of(std::string_view lemma) const;

  // Every ancestor of id (including id itself at distance 0) with its
  // shortest hypernym-edge distance.
  std::unordered_map<std::string, int> ancestors(std::string_view id) const;

  // Deepest common subsumer, ties broken by smallest id. Empty string when
  // the two synsets live in disjoint trees.
  std::string lowest_common_subsumer(std::string_view a,
                                     std::string_view b) const;

  SenseSimilarity wup(std::string_view a, std::string_view b) const;
  SenseSimilarity path(std::string_view a, std::string_view b) const;
  SenseSimilarity similarity(std::string_view a, std::string_view b,
                             Measure m) const;

  // Max over all sense pairs; OOV words fall back to case-insensitive
  // equality (or edit distance when enabled).
  double lemma_similarity(std::string_view w1, std::string_view w2,
                          const LemmaOptions& opts = {}) const;

 private:
  Taxonomy() = default;
  void index_and_validate();
  const std::string* deepest_shared(
      const std::unordered_map<std::string, int>& up_a,
      const std::unordered_map<std::string, int>& up_b) const;

  std::map<std::string, Synset, std::less<>> synsets_;
  std::unordered_map<std::string, std::vector<std::string>> lemma_index_;
  std::unordered_map<std::string, int> depth_;
  int max_depth_ = 0;
};

// Normalized Levenshtein similarity, 1 - distance / max(len).
double edit_similarity(std::string_view a, std::string_view b);

std::string to_lower(std::string_view s);

// The mini-taxonomy compiled into the library.
std::string_view bundled_taxonomy_text();
const Taxonomy& bundled_taxonomy();

}  // namespace semmatch
