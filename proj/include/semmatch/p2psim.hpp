#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "semmatch/agreement.hpp"
#include "semmatch/matcher.hpp"
#include "semmatch/schema.hpp"
#include "semmatch/taxonomy.hpp"

namespace semmatch::sim {

inline constexpr std::string_view kSuperPeerId = "super";

enum class EventKind {
  register_peer,
  publish,
  requestCandidates,
  candidateList,
  halfAgreementBroadcast,
  matchResult,
  bindRequest,
  fullAgreement,
  peerLeave,
};

std::string_view to_string(EventKind k);

struct SimConfig {
  std::uint64_t seed = 0;
  std::int64_t latency_ticks = 1;
  // Applies to peer-to-peer messages only (broadcasts and match results);
  // the super-peer channel is reliable.
  double drop_probability = 0.0;
  std::int64_t max_ticks = 1'000'000;

  void validate() const;
};

struct SimEvent {
  std::int64_t tick = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::register_peer;
  std::string from;
  std::string to;
  bool dropped = false;
  nlohmann::json payload;

  nlohmann::json to_json() const;
};

struct RegistryEntry {
  std::set<std::string> keywords;
  bool live = false;
};

// Registry half of the super peer. Holds metadata only and never runs
// matchmaking.
class SuperPeer {
 public:
  void set_common_ontology(Schema co);
  const std::optional<Schema>& common_ontology() const { return common_ontology_; }

  // Throws ProtocolError when peer_id is already live.
  void register_peer(const std::string& peer_id, const std::vector<std::string>& metadata);
  void add_keywords(const std::string& peer_id, const std::vector<std::string>& keywords);
  void leave(const std::string& peer_id);

  bool is_live(const std::string& peer_id) const;
  const std::map<std::string, RegistryEntry>& registry() const { return registry_; }

  // Live peers other than the requester sharing at least one keyword,
  // by descending overlap count then peer id.
  std::vector<std::string> request_candidates(const std::string& requester_id,
                                              const std::vector<std::string>& query) const;

 private:
  std::optional<Schema> common_ontology_;
  std::map<std::string, RegistryEntry> registry_;
};

struct PeerNode {
  std::string peer_id;
  bool provider = true;
  bool requester = true;
  std::optional<Schema> schema;
  std::optional<HalfAgreement> half_agreement;
  std::vector<SimEvent> inbox;
  // Results of the most recent request round, in arrival order.
  std::vector<PeerMatchResult> round_results;
  // Providers that answered some earlier round with a verdict other than
  // nonSimilar.
  std::set<std::string> bindable;
  std::vector<FullAgreement> full_agreements;
};

// The whole simulated network: one super peer, many peers, and a
// discrete-event queue ordered by (tick, sender, sequence). Every public
// operation enqueues its messages and runs the loop to quiescence.
class World {
 public:
  World(const Taxonomy& tax, SimConfig sim = {}, MatchConfig match = {},
        PhaseTwoConfig phase_two = {});

  void set_common_ontology(Schema co);
  void load_schema(const std::string& peer_id, Schema schema);

  void register_peer(const std::string& peer_id, const std::vector<std::string>& metadata);
  const HalfAgreement& publish(const std::string& peer_id);
  std::vector<std::string> request_candidates(const std::string& requester_id,
                                              const std::vector<std::string>& query) const;
  std::vector<PeerMatchResult> run_request_round(const std::string& requester_id,
                                                 const std::vector<std::string>& query);
  const FullAgreement& bind(const std::string& requester_id, const std::string& provider_id);
  void leave(const std::string& peer_id);
  void advance(std::int64_t ticks);

  std::int64_t now() const { return now_; }
  const SuperPeer& super_peer() const { return super_; }
  const PeerNode& peer(const std::string& peer_id) const;
  const std::map<std::string, PeerNode>& peers() const { return peers_; }
  const std::vector<SimEvent>& trace() const { return trace_; }
  std::string trace_jsonl() const;

 private:
  struct Pending {
    SimEvent event;
    bool droppable;
  };
  struct Later {
    bool operator()(const Pending& a, const Pending& b) const;
  };

  PeerNode& node(const std::string& peer_id);
  void send(EventKind kind, const std::string& from, const std::string& to,
            nlohmann::json payload, bool droppable = false);
  void run();
  void deliver(SimEvent& ev);
  bool draw_drop();

  const Taxonomy& tax_;
  SimConfig sim_;
  MatchConfig match_;
  PhaseTwoConfig phase_two_;
  SuperPeer super_;
  std::map<std::string, PeerNode> peers_;
  std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
  std::vector<SimEvent> trace_;
  std::int64_t now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::mt19937_64 rng_;
};

struct ScenarioError {
  std::size_t line = 0;
  std::string message;
};

struct ScenarioResult {
  std::vector<SimEvent> trace;
  std::unique_ptr<World> world;
  std::optional<ScenarioError> error;

  std::string trace_jsonl() const;
};

// Line-based scenario script; see docs/formats.md. Schema paths resolve
// against base_dir. Grammar errors throw ParseError before anything runs;
// protocol errors and maxTicks overruns come back in `error` alongside the
// partial trace.
ScenarioResult run_scenario(std::string_view script, const std::filesystem::path& base_dir,
                            const Taxonomy& tax, const SimConfig& sim = {},
                            const MatchConfig& match = {}, const PhaseTwoConfig& phase_two = {});
ScenarioResult run_scenario_file(const std::string& path, const Taxonomy& tax,
                                 const SimConfig& sim = {}, const MatchConfig& match = {},
                                 const PhaseTwoConfig& phase_two = {});

}  // namespace semmatch::sim
