#include "semmatch/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace semmatch {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

const std::vector<std::string> kNoSenses;

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view to_string(Measure m) {
  return m == Measure::wup ? "wup" : "path";
}

Measure parse_measure(std::string_view s) {
  if (s == "wup") return Measure::wup;
  if (s == "path") return Measure::path;
  throw ValidationError("unknown similarity measure '" + std::string(s) +
                        "' (expected wup or path)");
}

Taxonomy Taxonomy::load(std::istream& in) {
  Taxonomy tax;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    constexpr std::string_view kKeyword = "synset";
    if (line.substr(0, kKeyword.size()) != kKeyword ||
        line.size() == kKeyword.size() ||
        !std::isspace(static_cast<unsigned char>(line[kKeyword.size()])))
      throw ParseError(line_no, "expected 'synset <id> | <lemmas> | <hypernyms> | <gloss>'");
    line.remove_prefix(kKeyword.size());

    // id | lemmas | hypernyms [| gloss]; the gloss may itself contain '|'.
    std::vector<std::string_view> fields;
    for (int i = 0; i < 3; ++i) {
      auto bar = line.find('|');
      if (bar == std::string_view::npos) break;
      fields.push_back(trim(line.substr(0, bar)));
      line.remove_prefix(bar + 1);
    }
    fields.push_back(trim(line));
    if (fields.size() < 3)
      throw ParseError(line_no, "synset line needs at least id, lemma and hypernym fields");

    Synset s;
    s.id = std::string(fields[0]);
    if (s.id.empty() || s.id.find_first_of(" \t,") != std::string::npos)
      throw ParseError(line_no, "invalid synset id '" + s.id + "'");
    for (auto& lemma : split_list(fields[1])) {
      if (lemma.empty()) throw ParseError(line_no, "empty lemma in synset " + s.id);
      if (lemma.find_first_of(" \t") != std::string::npos)
        throw ParseError(line_no, "lemma '" + lemma + "' contains whitespace (use '_')");
      s.lemmas.push_back(to_lower(lemma));
    }
    if (s.lemmas.empty()) throw ParseError(line_no, "synset " + s.id + " has no lemmas");
    for (auto& h : split_list(fields[2])) {
      if (h.empty()) throw ParseError(line_no, "empty hypernym id in synset " + s.id);
      s.hypernyms.push_back(std::move(h));
    }
    if (fields.size() == 4) s.gloss = std::string(fields[3]);

    if (tax.synsets_.count(s.id))
      throw ValidationError("line " + std::to_string(line_no) +
                            ": duplicate synset id '" + s.id + "'");
    auto id = s.id;
    tax.synsets_.emplace(std::move(id), std::move(s));
  }
  if (in.bad()) throw IoError("error reading taxonomy stream");
  tax.index_and_validate();
  return tax;
}

Taxonomy Taxonomy::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load(in);
}

Taxonomy Taxonomy::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open taxonomy file '" + path + "'");
  return load(in);
}

void Taxonomy::index_and_validate() {
  for (const auto& [id, s] : synsets_) {
    for (const auto& h : s.hypernyms)
      if (!synsets_.count(h))
        throw ValidationError("synset '" + id + "' has dangling hypernym '" + h + "'");
  }

  // Iterative DFS with three colors; a grey hit is a back edge.
  enum class Mark { white, grey, black };
  std::unordered_map<std::string_view, Mark> mark;
  for (const auto& [id, s] : synsets_) mark[id] = Mark::white;
  for (const auto& [root_id, root] : synsets_) {
    if (mark[root_id] != Mark::white) continue;
    std::vector<std::pair<const Synset*, std::size_t>> stack{{&root, 0}};
    mark[root_id] = Mark::grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == node->hypernyms.size()) {
        mark[node->id] = Mark::black;
        stack.pop_back();
        continue;
      }
      const auto& h = node->hypernyms[next++];
      auto& m = mark[h];
      if (m == Mark::grey)
        throw ValidationError("hypernym cycle through synset '" + h + "'");
      if (m == Mark::white) {
        m = Mark::grey;
        stack.emplace_back(&synsets_.find(h)->second, 0);
      }
    }
  }

  // Depth = shortest path to any root, roots at 1. Post-order over the DAG.
  for (const auto& [root_id, root] : synsets_) {
    if (depth_.count(root_id)) continue;
    std::vector<const Synset*> stack{&root};
    while (!stack.empty()) {
      const Synset* node = stack.back();
      if (depth_.count(node->id)) {
        stack.pop_back();
        continue;
      }
      bool ready = true;
      int best = std::numeric_limits<int>::max();
      for (const auto& h : node->hypernyms) {
        auto it = depth_.find(h);
        if (it == depth_.end()) {
          ready = false;
          stack.push_back(&synsets_.find(h)->second);
        } else {
          best = std::min(best, it->second);
        }
      }
      if (!ready) continue;
      depth_[node->id] = node->hypernyms.empty() ? 1 : best + 1;
      stack.pop_back();
    }
  }
  for (const auto& [id, d] : depth_) max_depth_ = std::max(max_depth_, d);

  for (const auto& [id, s] : synsets_) {
    for (const auto& lemma : s.lemmas) {
      auto& senses = lemma_index_[lemma];
      if (std::find(senses.begin(), senses.end(), id) == senses.end())
        senses.push_back(id);
    }
  }
}

bool Taxonomy::contains(std::string_view id) const {
  return synsets_.find(id) != synsets_.end();
}

const Synset& Taxonomy::synset(std::string_view id) const {
  auto it = synsets_.find(id);
  if (it == synsets_.end())
    throw ValidationError("unknown synset id '" + std::string(id) + "'");
  return it->second;
}

int Taxonomy::depth(std::string_view id) const {
  return depth_.at(synset(id).id);
}

std::vector<std::string> Taxonomy::synset_ids() const {
  std::vector<std::string> ids;
  ids.reserve(synsets_.size());
  for (const auto& [id, s] : synsets_) ids.push_back(id);
  return ids;
}

std::vector<std::string> Taxonomy::lemmas() const {
  std::vector<std::string> out;
  out.reserve(lemma_index_.size());
  for (const auto& [lemma, senses] : lemma_index_) out.push_back(lemma);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<std::string>& Taxonomy::senses_of(std::string_view lemma) const {
  auto it = lemma_index_.find(to_lower(lemma));
  return it == lemma_index_.end() ? kNoSenses : it->second;
}

std::unordered_map<std::string, int> Taxonomy::ancestors(std::string_view id) const {
  const Synset& start = synset(id);
  std::unordered_map<std::string, int> dist{{start.id, 0}};
  std::deque<const Synset*> queue{&start};
  while (!queue.empty()) {
    const Synset* node = queue.front();
    queue.pop_front();
    int d = dist[node->id];
    for (const auto& h : node->hypernyms) {
      if (dist.emplace(h, d + 1).second) queue.push_back(&synsets_.find(h)->second);
    }
  }
  return dist;
}

std::string Taxonomy::lowest_common_subsumer(std::string_view a,
                                             std::string_view b) const {
  auto up_a = ancestors(a);
  auto up_b = ancestors(b);
  const std::string* lcs = deepest_shared(up_a, up_b);
  return lcs ? *lcs : std::string();
}

const std::string* Taxonomy::deepest_shared(
    const std::unordered_map<std::string, int>& up_a,
    const std::unordered_map<std::string, int>& up_b) const {
  const std::string* best = nullptr;
  int best_depth = 0;
  for (const auto& [id, dist] : up_a) {
    if (!up_b.count(id)) continue;
    int d = depth_.at(id);
    if (!best || d > best_depth || (d == best_depth && id < *best)) {
      best = &id;
      best_depth = d;
    }
  }
  return best;
}

SenseSimilarity Taxonomy::wup(std::string_view a, std::string_view b) const {
  const Synset& sa = synset(a);
  const Synset& sb = synset(b);
  if (sa.id == sb.id) return {1.0, Measure::wup};
  auto up_a = ancestors(a);
  auto up_b = ancestors(b);
  const std::string* lcs = deepest_shared(up_a, up_b);
  if (!lcs) return {0.0, Measure::wup};
  double lcs_depth = depth_.at(*lcs);
  double value = 2.0 * lcs_depth / (depth_.at(sa.id) + depth_.at(sb.id));
  if (value >= 1.0) {
    // Shortest-path depths under multiple inheritance can put a subsumer
    // deeper than the synsets themselves. Measure depth along the
    // subsumer instead, which stays below 1 for distinct synsets.
    double la = lcs_depth + up_a.at(*lcs);
    double lb = lcs_depth + up_b.at(*lcs);
    value = 2.0 * lcs_depth / (la + lb);
  }
  return {value, Measure::wup};
}

SenseSimilarity Taxonomy::path(std::string_view a, std::string_view b) const {
  const Synset& sa = synset(a);
  const Synset& sb = synset(b);
  if (sa.id == sb.id) return {1.0, Measure::path};
  auto up_a = ancestors(a);
  auto up_b = ancestors(b);
  int best = -1;
  for (const auto& [id, dist] : up_a) {
    auto it = up_b.find(id);
    if (it == up_b.end()) continue;
    int edges = dist + it->second;
    if (best < 0 || edges < best) best = edges;
  }
  if (best < 0) return {0.0, Measure::path};
  return {1.0 / (1.0 + best), Measure::path};
}

SenseSimilarity Taxonomy::similarity(std::string_view a, std::string_view b,
                                     Measure m) const {
  return m == Measure::wup ? wup(a, b) : path(a, b);
}

double Taxonomy::lemma_similarity(std::string_view w1, std::string_view w2,
                                  const LemmaOptions& opts) const {
  const auto& s1 = senses_of(w1);
  const auto& s2 = senses_of(w2);
  if (s1.empty() || s2.empty()) {
    auto l1 = to_lower(w1);
    auto l2 = to_lower(w2);
    if (l1 == l2) return 1.0;
    return opts.edit_distance_fallback ? edit_similarity(l1, l2) : 0.0;
  }
  double best = 0.0;
  for (const auto& a : s1) {
    for (const auto& b : s2) {
      best = std::max(best, similarity(a, b, opts.measure).value);
      if (best == 1.0) return best;
    }
  }
  return best;
}

double edit_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[b.size()]) /
                   static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace semmatch
