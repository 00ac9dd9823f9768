#include "semmatch/p2psim.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace semmatch::sim {

using nlohmann::json;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::register_peer: return "register";
    case EventKind::publish: return "publish";
    case EventKind::requestCandidates: return "requestCandidates";
    case EventKind::candidateList: return "candidateList";
    case EventKind::halfAgreementBroadcast: return "halfAgreementBroadcast";
    case EventKind::matchResult: return "matchResult";
    case EventKind::bindRequest: return "bindRequest";
    case EventKind::fullAgreement: return "fullAgreement";
    case EventKind::peerLeave: return "peerLeave";
  }
  return "register";
}

void SimConfig::validate() const {
  if (latency_ticks < 0) throw ValidationError("latencyTicks must be non-negative");
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0))
    throw ValidationError("dropProbability must lie in [0,1]");
  if (max_ticks <= 0) throw ValidationError("maxTicks must be positive");
}

json SimEvent::to_json() const {
  return {{"tick", tick}, {"seq", seq},         {"kind", to_string(kind)}, {"from", from},
          {"to", to},     {"dropped", dropped}, {"payload", payload}};
}

// --- SuperPeer -------------------------------------------------------------

void SuperPeer::set_common_ontology(Schema co) {
  if (co.kind() != SchemaKind::commonOntology)
    throw ValidationError("schema '" + co.id() + "' is not a common ontology");
  common_ontology_ = std::move(co);
}

void SuperPeer::register_peer(const std::string& peer_id,
                              const std::vector<std::string>& metadata) {
  auto& entry = registry_[peer_id];
  if (entry.live) throw ProtocolError("peer '" + peer_id + "' is already registered");
  entry.live = true;
  entry.keywords.clear();
  for (const auto& kw : metadata) entry.keywords.insert(to_lower(kw));
}

void SuperPeer::add_keywords(const std::string& peer_id, const std::vector<std::string>& kws) {
  auto it = registry_.find(peer_id);
  if (it == registry_.end() || !it->second.live)
    throw ProtocolError("peer '" + peer_id + "' is not registered");
  for (const auto& kw : kws) it->second.keywords.insert(to_lower(kw));
}

void SuperPeer::leave(const std::string& peer_id) {
  auto it = registry_.find(peer_id);
  if (it == registry_.end() || !it->second.live)
    throw ProtocolError("peer '" + peer_id + "' is not registered");
  it->second.live = false;
}

bool SuperPeer::is_live(const std::string& peer_id) const {
  auto it = registry_.find(peer_id);
  return it != registry_.end() && it->second.live;
}

std::vector<std::string> SuperPeer::request_candidates(
    const std::string& requester_id, const std::vector<std::string>& query) const {
  if (!is_live(requester_id))
    throw ProtocolError("requester '" + requester_id + "' is not registered");
  std::set<std::string> wanted;
  for (const auto& q : query) wanted.insert(to_lower(q));

  std::vector<std::pair<std::size_t, std::string>> ranked;
  for (const auto& [id, entry] : registry_) {
    if (id == requester_id || !entry.live) continue;
    std::size_t shared = 0;
    for (const auto& kw : wanted) shared += entry.keywords.count(kw);
    if (shared > 0) ranked.emplace_back(shared, id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (auto& [n, id] : ranked) out.push_back(std::move(id));
  return out;
}

// --- World -----------------------------------------------------------------

bool World::Later::operator()(const Pending& a, const Pending& b) const {
  return std::tie(a.event.tick, a.event.from, a.event.seq) >
         std::tie(b.event.tick, b.event.from, b.event.seq);
}

World::World(const Taxonomy& tax, SimConfig sim, MatchConfig match, PhaseTwoConfig phase_two)
    : tax_(tax), sim_(sim), match_(match), phase_two_(phase_two), rng_(sim.seed) {
  sim_.validate();
  match_.validate();
  phase_two_.validate();
}

void World::set_common_ontology(Schema co) { super_.set_common_ontology(std::move(co)); }

void World::load_schema(const std::string& peer_id, Schema schema) {
  if (peer_id == kSuperPeerId) {
    set_common_ontology(std::move(schema));
    return;
  }
  if (schema.kind() != SchemaKind::exportSchema)
    throw ValidationError("schema '" + schema.id() + "' loaded for peer '" + peer_id +
                          "' is not an export schema");
  node(peer_id).schema = std::move(schema);
}

PeerNode& World::node(const std::string& peer_id) {
  if (peer_id == kSuperPeerId) throw ProtocolError("'super' is reserved for the super peer");
  auto [it, fresh] = peers_.try_emplace(peer_id);
  if (fresh) it->second.peer_id = peer_id;
  return it->second;
}

const PeerNode& World::peer(const std::string& peer_id) const {
  auto it = peers_.find(peer_id);
  if (it == peers_.end()) throw ProtocolError("unknown peer '" + peer_id + "'");
  return it->second;
}

void World::send(EventKind kind, const std::string& from, const std::string& to, json payload,
                 bool droppable) {
  SimEvent ev;
  ev.tick = now_ + sim_.latency_ticks;
  ev.seq = next_seq_++;
  ev.kind = kind;
  ev.from = from;
  ev.to = to;
  ev.payload = std::move(payload);
  queue_.push({std::move(ev), droppable});
}

bool World::draw_drop() {
  if (sim_.drop_probability <= 0.0) return false;
  if (sim_.drop_probability >= 1.0) return true;
  // 53 random bits -> [0,1); independent of the standard library's
  // distribution implementations.
  double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return u < sim_.drop_probability;
}

void World::run() {
  while (!queue_.empty()) {
    Pending next = queue_.top();
    queue_.pop();
    if (next.event.tick > sim_.max_ticks) {
      while (!queue_.empty()) queue_.pop();
      throw ProtocolError("maxTicks (" + std::to_string(sim_.max_ticks) + ") exceeded");
    }
    now_ = std::max(now_, next.event.tick);
    if (next.droppable && draw_drop()) next.event.dropped = true;
    trace_.push_back(next.event);
    if (!next.event.dropped) deliver(next.event);
  }
}

void World::deliver(SimEvent& ev) {
  if (ev.to != kSuperPeerId) node(ev.to).inbox.push_back(ev);

  switch (ev.kind) {
    case EventKind::register_peer:
      super_.register_peer(ev.from, ev.payload.at("keywords").get<std::vector<std::string>>());
      break;
    case EventKind::publish:
      super_.add_keywords(ev.from, ev.payload.at("keywords").get<std::vector<std::string>>());
      break;
    case EventKind::peerLeave:
      super_.leave(ev.from);
      break;
    case EventKind::requestCandidates: {
      auto query = ev.payload.at("keywords").get<std::vector<std::string>>();
      send(EventKind::candidateList, std::string(kSuperPeerId), ev.from,
           {{"candidates", super_.request_candidates(ev.from, query)}});
      break;
    }
    case EventKind::candidateList: {
      PeerNode& req = node(ev.to);
      json ha = req.half_agreement->to_json();
      for (const auto& c : ev.payload.at("candidates"))
        send(EventKind::halfAgreementBroadcast, ev.to, c.get<std::string>(),
             {{"halfAgreement", ha}}, true);
      break;
    }
    case EventKind::halfAgreementBroadcast: {
      // Phase-two matchmaking runs at the provider; the reply goes straight
      // back to the requester.
      PeerNode& prov = node(ev.to);
      if (!prov.provider || !prov.half_agreement) break;
      auto req_ha = HalfAgreement::from_json(ev.payload.at("halfAgreement"));
      auto result = compare_half_agreements(req_ha, *prov.half_agreement, phase_two_);
      send(EventKind::matchResult, ev.to, ev.from, {{"result", result.to_json()}}, true);
      break;
    }
    case EventKind::matchResult: {
      PeerNode& req = node(ev.to);
      auto result = PeerMatchResult::from_json(ev.payload.at("result"));
      if (result.verdict != PeerVerdict::nonSimilar) req.bindable.insert(ev.from);
      req.round_results.push_back(std::move(result));
      break;
    }
    case EventKind::bindRequest: {
      PeerNode& prov = node(ev.to);
      auto req_ha = HalfAgreement::from_json(ev.payload.at("halfAgreement"));
      auto full = compose(req_ha, *prov.half_agreement);
      send(EventKind::fullAgreement, ev.to, ev.from, {{"fullAgreement", full.to_json()}});
      break;
    }
    case EventKind::fullAgreement:
      node(ev.to).full_agreements.push_back(
          FullAgreement::from_json(ev.payload.at("fullAgreement")));
      break;
  }
}

void World::register_peer(const std::string& peer_id, const std::vector<std::string>& metadata) {
  node(peer_id);
  if (super_.is_live(peer_id))
    throw ProtocolError("peer '" + peer_id + "' is already registered");
  std::vector<std::string> kws;
  for (const auto& m : metadata) kws.push_back(to_lower(m));
  send(EventKind::register_peer, peer_id, std::string(kSuperPeerId), {{"keywords", kws}});
  run();
}

const HalfAgreement& World::publish(const std::string& peer_id) {
  PeerNode& p = node(peer_id);
  if (!super_.is_live(peer_id)) throw ProtocolError("peer '" + peer_id + "' is not registered");
  if (!p.schema) throw ProtocolError("peer '" + peer_id + "' has no schema loaded");
  if (!super_.common_ontology())
    throw ProtocolError("the super peer has no common ontology loaded");

  p.half_agreement =
      build_half_agreement(tax_, *p.schema, *super_.common_ontology(), match_, peer_id);
  std::set<std::string> refs;
  for (const auto& u : p.half_agreement->units) refs.insert(to_lower(u.target_ref));
  send(EventKind::publish, peer_id, std::string(kSuperPeerId),
       {{"halfAgreement", p.half_agreement->to_json()},
        {"keywords", std::vector<std::string>(refs.begin(), refs.end())}});
  run();
  return *p.half_agreement;
}

std::vector<std::string> World::request_candidates(const std::string& requester_id,
                                                   const std::vector<std::string>& query) const {
  return super_.request_candidates(requester_id, query);
}

std::vector<PeerMatchResult> World::run_request_round(const std::string& requester_id,
                                                      const std::vector<std::string>& query) {
  PeerNode& req = node(requester_id);
  if (!super_.is_live(requester_id))
    throw ProtocolError("requester '" + requester_id + "' is not registered");
  if (!req.half_agreement)
    throw ProtocolError("requester '" + requester_id + "' has not published");
  req.round_results.clear();
  std::vector<std::string> kws;
  for (const auto& q : query) kws.push_back(to_lower(q));
  send(EventKind::requestCandidates, requester_id, std::string(kSuperPeerId),
       {{"keywords", kws}});
  run();

  auto results = node(requester_id).round_results;
  std::stable_sort(results.begin(), results.end(),
                   [](const PeerMatchResult& a, const PeerMatchResult& b) {
                     return a.overlap_score > b.overlap_score;
                   });
  return results;
}

const FullAgreement& World::bind(const std::string& requester_id,
                                 const std::string& provider_id) {
  PeerNode& req = node(requester_id);
  if (!req.half_agreement)
    throw ProtocolError("requester '" + requester_id + "' has not published");
  auto it = peers_.find(provider_id);
  if (it == peers_.end() || !it->second.half_agreement)
    throw ProtocolError("provider '" + provider_id + "' has not published");
  if (!req.bindable.count(provider_id))
    throw ProtocolError("provider '" + provider_id + "' never answered '" + requester_id +
                        "' with a similar or exactAgree match");
  std::size_t before = req.full_agreements.size();
  send(EventKind::bindRequest, requester_id, provider_id,
       {{"halfAgreement", req.half_agreement->to_json()}});
  run();
  const PeerNode& after = node(requester_id);
  if (after.full_agreements.size() == before)
    throw ProtocolError("bind between '" + requester_id + "' and '" + provider_id +
                        "' produced no full agreement");
  return after.full_agreements.back();
}

void World::leave(const std::string& peer_id) {
  node(peer_id);
  if (!super_.is_live(peer_id)) throw ProtocolError("peer '" + peer_id + "' is not registered");
  send(EventKind::peerLeave, peer_id, std::string(kSuperPeerId), json::object());
  run();
}

void World::advance(std::int64_t ticks) {
  if (ticks < 0) throw ValidationError("tick count must be non-negative");
  now_ += ticks;
  if (now_ > sim_.max_ticks)
    throw ProtocolError("maxTicks (" + std::to_string(sim_.max_ticks) + ") exceeded");
}

std::string World::trace_jsonl() const {
  std::string out;
  for (const auto& ev : trace_) out += ev.to_json().dump() + "\n";
  return out;
}

// --- Scenarios -------------------------------------------------------------

std::string ScenarioResult::trace_jsonl() const {
  std::string out;
  for (const auto& ev : trace) out += ev.to_json().dump() + "\n";
  return out;
}

namespace {

struct Command {
  std::size_t line;
  std::string verb;
  std::vector<std::string> args;
};

std::vector<Command> parse_script(std::string_view script) {
  std::vector<Command> cmds;
  std::istringstream in{std::string(script)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Command c{line_no, {}, {}};
    if (!(words >> c.verb)) continue;
    for (std::string w; words >> w;) c.args.push_back(std::move(w));

    auto need = [&](std::size_t lo, bool open_ended) {
      if (c.args.size() < lo || (!open_ended && c.args.size() != lo))
        throw ParseError(line_no, "wrong number of arguments for '" + c.verb + "'");
    };
    if (c.verb == "register" || c.verb == "request") {
      need(1, true);
    } else if (c.verb == "load" || c.verb == "bind") {
      need(2, false);
    } else if (c.verb == "publish" || c.verb == "leave") {
      need(1, false);
    } else if (c.verb == "tick") {
      need(1, false);
      const auto& n = c.args[0];
      if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line_no, "tick expects a non-negative integer");
    } else {
      throw ParseError(line_no, "unknown command '" + c.verb + "'");
    }
    cmds.push_back(std::move(c));
  }
  return cmds;
}

}  // namespace

ScenarioResult run_scenario(std::string_view script, const std::filesystem::path& base_dir,
                            const Taxonomy& tax, const SimConfig& sim, const MatchConfig& match,
                            const PhaseTwoConfig& phase_two) {
  auto cmds = parse_script(script);
  ScenarioResult result;
  result.world = std::make_unique<World>(tax, sim, match, phase_two);
  World& w = *result.world;
  for (const auto& c : cmds) {
    try {
      std::vector<std::string> rest(c.args.begin() + 1, c.args.end());
      if (c.verb == "register") {
        w.register_peer(c.args[0], rest);
      } else if (c.verb == "load") {
        std::filesystem::path p(c.args[1]);
        if (p.is_relative()) p = base_dir / p;
        w.load_schema(c.args[0], Schema::load_file(p.string()));
      } else if (c.verb == "publish") {
        w.publish(c.args[0]);
      } else if (c.verb == "request") {
        w.run_request_round(c.args[0], rest);
      } else if (c.verb == "bind") {
        w.bind(c.args[0], c.args[1]);
      } else if (c.verb == "leave") {
        w.leave(c.args[0]);
      } else if (c.verb == "tick") {
        w.advance(std::stoll(c.args[0]));
      }
    } catch (const Error& e) {
      result.error = ScenarioError{c.line, e.what()};
      break;
    }
  }
  result.trace = w.trace();
  return result;
}

ScenarioResult run_scenario_file(const std::string& path, const Taxonomy& tax,
                                 const SimConfig& sim, const MatchConfig& match,
                                 const PhaseTwoConfig& phase_two) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return run_scenario(buf.str(), std::filesystem::path(path).parent_path(), tax, sim, match,
                        phase_two);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

}  // namespace semmatch::sim
