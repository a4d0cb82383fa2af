#pragma once

// Deterministic in-process vehicular network running authentication sessions
// over a logical-tick message bus.
//
// Every message takes one tick to arrive. A round is: roster announcements,
// a wait of `roster_timeout` ticks, contribution broadcast, one tick, then
// local aggregation and verification at every participant. The bus keeps a
// transcript and exact byte counts per phase.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "v2xauth/drbg.hpp"
#include "v2xauth/scheme.hpp"
#include "v2xauth/wire.hpp"

namespace v2xauth::sim {

enum class Behavior { kHonest, kCorruptContribution, kSybilForge, kSilent };

inline std::string_view behavior_name(Behavior b) {
  switch (b) {
    case Behavior::kHonest: return "honest";
    case Behavior::kCorruptContribution: return "corrupt";
    case Behavior::kSybilForge: return "sybil";
    case Behavior::kSilent: return "silent";
  }
  return "unknown";
}

inline Behavior parse_behavior(std::string_view name) {
  if (name == "honest") return Behavior::kHonest;
  if (name == "corrupt" || name == "CorruptContribution") return Behavior::kCorruptContribution;
  if (name == "sybil" || name == "SybilForge") return Behavior::kSybilForge;
  if (name == "silent" || name == "Silent") return Behavior::kSilent;
  throw ConfigError("unknown behavior '" + std::string(name) + "' (honest|corrupt|sybil|silent)");
}

enum class Phase : std::uint8_t { kAssignment = 0, kRoster = 1, kContribution = 2 };

inline constexpr std::size_t kGroupManager = static_cast<std::size_t>(-1);

struct Message {
  std::uint64_t deliver_at = 0;
  std::uint32_t round = 0;
  Phase phase = Phase::kRoster;
  std::size_t sender = 0;
  Bytes payload;
};

struct Vehicle {
  Credential credential;
  Behavior behavior = Behavior::kHonest;
  std::deque<Message> inbox;
};

struct PhaseTraffic {
  std::uint64_t assignment = 0;
  std::uint64_t roster = 0;
  std::uint64_t contribution = 0;

  std::uint64_t total() const { return assignment + roster + contribution; }

  void add(Phase phase, std::uint64_t n) {
    switch (phase) {
      case Phase::kAssignment: assignment += n; break;
      case Phase::kRoster: roster += n; break;
      case Phase::kContribution: contribution += n; break;
    }
  }

  friend bool operator==(const PhaseTraffic&, const PhaseTraffic&) = default;
};

struct VehicleTiming {
  double computation_ms = 0;
  double verification_ms = 0;
};

enum class Verdict { kAuthenticated, kFailed, kPartitioned };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAuthenticated: return "authenticated";
    case Verdict::kFailed: return "failed";
    case Verdict::kPartitioned: return "partitioned";
  }
  return "unknown";
}

struct SessionConfig {
  std::size_t group_size = 0;  // 0: take it from the vehicle list
  std::map<std::size_t, Behavior> adversaries;
  std::uint64_t seed = 0;
  std::uint32_t roster_timeout = 2;
  std::uint32_t max_depth = 8;
  bool recovery = true;
  std::size_t workers = 1;
};

struct TranscriptEntry {
  std::uint64_t tick = 0;
  std::uint32_t round = 0;
  Phase phase = Phase::kRoster;
  std::size_t sender = 0;
  std::vector<std::size_t> recipients;
  Bytes payload;
};

struct SessionResult {
  Verdict verdict = Verdict::kFailed;
  // Vehicle slots (indices into the input list), in roster order.
  std::vector<std::vector<std::size_t>> authenticated_subgroups;
  std::vector<std::size_t> excluded;
  std::vector<BigInt> identifiers;  // per slot
  std::vector<Behavior> behaviors;  // per slot
  std::vector<bool> first_round_verified;  // per slot; silent vehicles false
  std::uint32_t rounds = 0;
  bool depth_exhausted = false;
  PhaseTraffic bytes_sent;
  std::vector<PhaseTraffic> bytes_received;  // per slot
  std::vector<VehicleTiming> wall_times;     // per slot
  std::vector<TranscriptEntry> transcript;

  Digest transcript_digest() const {
    Sha512 h;
    auto put = [&](std::uint64_t v, int width) {
      std::uint8_t buf[8];
      for (int i = 0; i < width; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * (width - 1 - i)));
      h.update({buf, static_cast<std::size_t>(width)});
    };
    for (const auto& e : transcript) {
      put(e.tick, 8);
      put(e.round, 4);
      put(static_cast<std::uint8_t>(e.phase), 1);
      put(e.sender, 8);
      put(e.recipients.size(), 4);
      for (auto r : e.recipients) put(r, 8);
      put(e.payload.size(), 4);
      h.update(e.payload);
    }
    return h.finish();
  }
};

// ---- message bus -------------------------------------------------------------

/// Delivers in send order after one tick. No loss, no reordering.
class MessageBus {
 public:
  explicit MessageBus(std::size_t slots) : received_(slots) {}

  void send(std::uint64_t now, std::uint32_t round, Phase phase, std::size_t sender,
            std::span<const std::size_t> recipients, const Bytes& payload) {
    for (std::size_t r : recipients) {
      in_flight_.push_back({r, Message{now + 1, round, phase, sender, payload}});
    }
    sent_.add(phase, payload.size());
    transcript_.push_back({now, round, phase, sender, {recipients.begin(), recipients.end()}, payload});
  }

  void deliver(std::uint64_t now, std::vector<Vehicle>& vehicles) {
    while (!in_flight_.empty() && in_flight_.front().second.deliver_at <= now) {
      auto [recipient, msg] = std::move(in_flight_.front());
      in_flight_.pop_front();
      received_[recipient].add(msg.phase, msg.payload.size());
      vehicles[recipient].inbox.push_back(std::move(msg));
    }
  }

  const PhaseTraffic& sent() const { return sent_; }
  const std::vector<PhaseTraffic>& received() const { return received_; }
  std::vector<TranscriptEntry> take_transcript() { return std::move(transcript_); }

 private:
  std::deque<std::pair<std::size_t, Message>> in_flight_;
  PhaseTraffic sent_;
  std::vector<PhaseTraffic> received_;
  std::vector<TranscriptEntry> transcript_;
};

namespace detail {

template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

// ---- session engine ----------------------------------------------------------

class SessionRunner {
 public:
  SessionRunner(std::vector<Vehicle>& vehicles, const GroupPublicParams& pub, const SessionConfig& config)
      : vehicles_(vehicles), pub_(pub), config_(config), bus_(vehicles.size()) {
    result_.wall_times.resize(vehicles.size());
    for (const auto& v : vehicles) {
      result_.identifiers.push_back(v.credential.identifier.value());
      result_.behaviors.push_back(v.behavior);
    }
  }

  /// Full session: group-manager assignment, one round over everyone, and
  /// recovery when that round fails.
  SessionResult run() {
    assignment_phase();
    std::vector<std::size_t> everyone(vehicles_.size());
    for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;
    const RoundOutcome first = authenticate(everyone);
    result_.first_round_verified.assign(vehicles_.size(), false);
    for (std::size_t i = 0; i < first.participants.size(); ++i)
      result_.first_round_verified[first.participants[i]] = first.verified[i] != 0;
    excluded_.insert(excluded_.end(), first.absent.begin(), first.absent.end());
    if (first.success) {
      subgroups_.push_back(first.participants);
      return finish(Verdict::kAuthenticated);
    }
    if (!config_.recovery) {
      excluded_.insert(excluded_.end(), first.participants.begin(), first.participants.end());
      return finish(Verdict::kFailed);
    }
    return recover(first.participants);
  }

  /// Bisection recovery over `group`, which has just failed together.
  SessionResult recover(const std::vector<std::size_t>& group) {
    std::vector<std::size_t> suspects;
    bisect(group, 1, suspects);
    cross_check(suspects);
    return finish(subgroups_.empty() ? Verdict::kFailed : Verdict::kPartitioned);
  }

 private:
  struct RoundOutcome {
    bool success = false;
    std::vector<std::size_t> participants;
    std::vector<std::size_t> absent;
    std::vector<char> verified;  // parallel to participants
  };

  void assignment_phase() {
    // Credential plus commitment, unicast from the group manager. Sybil
    // vehicles were never registered and get nothing.
    for (std::size_t i = 0; i < vehicles_.size(); ++i) {
      if (vehicles_[i].behavior == Behavior::kSybilForge) continue;
      Bytes payload = wire::encode(vehicles_[i].credential);
      payload.insert(payload.end(), pub_.commitment.begin(), pub_.commitment.end());
      const std::size_t to[] = {i};
      bus_.send(tick_, 0, Phase::kAssignment, kGroupManager, to, payload);
    }
    ++tick_;
    bus_.deliver(tick_, vehicles_);
    for (auto& v : vehicles_) v.inbox.clear();
  }

  static std::vector<std::size_t> others(std::span<const std::size_t> group, std::size_t self) {
    std::vector<std::size_t> out;
    out.reserve(group.size());
    for (std::size_t s : group)
      if (s != self) out.push_back(s);
    return out;
  }

  RoundOutcome authenticate(std::span<const std::size_t> group) {
    const std::uint32_t round = ++result_.rounds;
    const CurveGroup& curve = *pub_.params.group();

    // Roster phase.
    for (std::size_t s : group) {
      if (vehicles_[s].behavior == Behavior::kSilent) continue;
      bus_.send(tick_, round, Phase::kRoster, s, others(group, s), wire::encode(vehicles_[s].credential.identifier, curve));
    }
    tick_ += config_.roster_timeout;
    bus_.deliver(tick_, vehicles_);

    RoundOutcome outcome;
    for (std::size_t s : group) {
      (vehicles_[s].behavior == Behavior::kSilent ? outcome.absent : outcome.participants).push_back(s);
    }
    // Each participant's view of the roster, indexed by sender slot.
    std::vector<std::map<std::size_t, Scalar>> views(outcome.participants.size());
    for (std::size_t i = 0; i < outcome.participants.size(); ++i) {
      const std::size_t s = outcome.participants[i];
      views[i][s] = vehicles_[s].credential.identifier;
      for (const Message& m : vehicles_[s].inbox) {
        if (m.phase != Phase::kRoster || m.round != round) continue;
        try {
          views[i][m.sender] = wire::decode_identifier(m.payload, curve);
        } catch (const EncodingError&) {
        }
      }
      vehicles_[s].inbox.clear();
    }
    for (std::size_t s : outcome.absent) vehicles_[s].inbox.clear();
    if (outcome.participants.size() < 2) return outcome;

    // Contribution phase.
    std::vector<std::optional<Bytes>> broadcasts(outcome.participants.size());
    std::vector<std::optional<Point>> own(outcome.participants.size());
    detail::parallel_for(outcome.participants.size(), config_.workers, [&](std::size_t i) {
      const std::size_t s = outcome.participants[i];
      std::vector<Scalar> roster;
      for (const auto& [slot, id] : views[i]) roster.push_back(id);
      const auto start = std::chrono::steady_clock::now();
      std::optional<Point> c;
      try {
        c = compute_contribution(vehicles_[s].credential, roster).value;
      } catch (const ProtocolError&) {
      }
      result_.wall_times[s].computation_ms += detail::elapsed_ms(start);
      if (!c) return;
      if (vehicles_[s].behavior == Behavior::kCorruptContribution) c = perturb(*c);
      own[i] = *c;
      if (!c->is_infinity()) broadcasts[i] = serialize_point(*c);
    });
    for (std::size_t i = 0; i < outcome.participants.size(); ++i) {
      if (!broadcasts[i]) continue;
      const std::size_t s = outcome.participants[i];
      bus_.send(tick_, round, Phase::kContribution, s, others(outcome.participants, s), *broadcasts[i]);
    }
    ++tick_;
    bus_.deliver(tick_, vehicles_);

    // Verification at every participant.
    std::vector<char>& verified = outcome.verified;
    verified.assign(outcome.participants.size(), 0);
    std::vector<std::vector<Contribution>> inputs(outcome.participants.size());
    for (std::size_t i = 0; i < outcome.participants.size(); ++i) {
      const std::size_t s = outcome.participants[i];
      if (own[i]) inputs[i].push_back({vehicles_[s].credential.identifier, *own[i]});
      for (const Message& m : vehicles_[s].inbox) {
        if (m.phase != Phase::kContribution || m.round != round) continue;
        const auto it = views[i].find(m.sender);
        if (it == views[i].end()) continue;
        try {
          inputs[i].push_back({it->second, deserialize_point(m.payload, pub_.params)});
        } catch (const EncodingError&) {
        }
      }
      vehicles_[s].inbox.clear();
    }
    detail::parallel_for(outcome.participants.size(), config_.workers, [&](std::size_t i) {
      const std::size_t s = outcome.participants[i];
      const auto start = std::chrono::steady_clock::now();
      bool ok = false;
      if (inputs[i].size() == views[i].size()) {
        try {
          ok = verify(aggregate(inputs[i]), pub_);
        } catch (const ProtocolError&) {
        }
      }
      result_.wall_times[s].verification_ms += detail::elapsed_ms(start);
      verified[i] = ok ? 1 : 0;
    });
    outcome.success = std::all_of(verified.begin(), verified.end(), [](char v) { return v != 0; });
    return outcome;
  }

  Point perturb(const Point& honest) const {
    const Point& g = pub_.params.generator();
    Point bad = honest + g;
    if (bad.is_infinity()) bad = bad + g + g;
    return bad;
  }

  // Stable halving; halves that still fail are split again until pairs.
  void bisect(const std::vector<std::size_t>& group, std::uint32_t depth, std::vector<std::size_t>& suspects) {
    if (group.size() < 2) {
      suspects.insert(suspects.end(), group.begin(), group.end());
      return;
    }
    if (depth > config_.max_depth) {
      result_.depth_exhausted = true;
      excluded_.insert(excluded_.end(), group.begin(), group.end());
      return;
    }
    const std::size_t mid = (group.size() + 1) / 2;
    const std::vector<std::size_t> halves[2] = {{group.begin(), group.begin() + static_cast<std::ptrdiff_t>(mid)},
                                                {group.begin() + static_cast<std::ptrdiff_t>(mid), group.end()}};
    for (const auto& half : halves) {
      if (half.size() < 2) {
        suspects.insert(suspects.end(), half.begin(), half.end());
        continue;
      }
      if (authenticate(half).success) {
        subgroups_.push_back(half);
      } else if (half.size() == 2) {
        suspects.insert(suspects.end(), half.begin(), half.end());
      } else {
        bisect(half, depth + 1, suspects);
      }
    }
  }

  // Suspects join an authenticated subgroup after a pairwise check with its
  // first member and a re-run of the enlarged subgroup. Leftovers try each
  // other; anyone still unmatched is excluded.
  void cross_check(std::vector<std::size_t> pending) {
    std::sort(pending.begin(), pending.end());
    for (;;) {
      std::vector<std::size_t> unresolved;
      for (std::size_t s : pending) {
        bool placed = false;
        for (auto& sg : subgroups_) {
          const std::size_t pair[] = {std::min(sg.front(), s), std::max(sg.front(), s)};
          if (!authenticate(pair).success) continue;
          std::vector<std::size_t> merged = sg;
          merged.insert(std::upper_bound(merged.begin(), merged.end(), s), s);
          if (authenticate(merged).success) {
            sg = std::move(merged);
            placed = true;
            break;
          }
        }
        if (!placed) unresolved.push_back(s);
      }
      bool paired = false;
      for (std::size_t i = 0; i < unresolved.size() && !paired; ++i) {
        for (std::size_t j = i + 1; j < unresolved.size() && !paired; ++j) {
          const std::size_t pair[] = {unresolved[i], unresolved[j]};
          if (authenticate(pair).success) {
            subgroups_.push_back({unresolved[i], unresolved[j]});
            unresolved.erase(unresolved.begin() + static_cast<std::ptrdiff_t>(j));
            unresolved.erase(unresolved.begin() + static_cast<std::ptrdiff_t>(i));
            paired = true;
          }
        }
      }
      if (!paired) {
        excluded_.insert(excluded_.end(), unresolved.begin(), unresolved.end());
        return;
      }
      pending = std::move(unresolved);
    }
  }

  SessionResult finish(Verdict verdict) {
    result_.verdict = verdict;
    result_.authenticated_subgroups = subgroups_;
    std::sort(excluded_.begin(), excluded_.end());
    result_.excluded = excluded_;
    result_.bytes_sent = bus_.sent();
    result_.bytes_received = bus_.received();
    result_.transcript = bus_.take_transcript();
    return std::move(result_);
  }

  std::vector<Vehicle>& vehicles_;
  const GroupPublicParams& pub_;
  const SessionConfig& config_;
  MessageBus bus_;
  std::uint64_t tick_ = 0;
  SessionResult result_;
  std::vector<std::vector<std::size_t>> subgroups_;
  std::vector<std::size_t> excluded_;
};

namespace detail {

inline void validate_fleet(const std::vector<Vehicle>& vehicles, const GroupPublicParams& pub,
                           const SessionConfig& config) {
  if (vehicles.size() < 2) throw ConfigError("a session needs at least two vehicles");
  if (config.group_size != 0 && config.group_size != vehicles.size()) {
    throw ConfigError("group size " + std::to_string(config.group_size) + " does not match " +
                      std::to_string(vehicles.size()) + " vehicles");
  }
  if (config.roster_timeout == 0) throw ConfigError("roster timeout must be at least one tick");
  std::set<BigInt> ids;
  for (const auto& v : vehicles) {
    if (!same_group(v.credential.share.group(), pub.params.group())) {
      throw ConfigError("vehicle credential is on a different curve");
    }
    if (v.behavior == Behavior::kSybilForge) continue;
    if (!ids.insert(v.credential.identifier.value()).second) {
      throw ConfigError("duplicate credentialed identifier " + v.credential.identifier.value().get_str());
    }
  }
}

}  // namespace detail

/// Runs roster exchange, contribution broadcast, aggregation and verification
/// at every vehicle; on failure runs handle_failure's bisection when enabled.
inline SessionResult run_session(std::vector<Vehicle>& vehicles, const GroupPublicParams& pub,
                                 const SessionConfig& config) {
  detail::validate_fleet(vehicles, pub, config);
  return SessionRunner(vehicles, pub, config).run();
}

/// Recovery alone, for a group already known to have failed together.
inline SessionResult handle_failure(std::vector<Vehicle>& group, const GroupPublicParams& pub,
                                    const SessionConfig& config) {
  detail::validate_fleet(group, pub, config);
  std::vector<std::size_t> slots(group.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  return SessionRunner(group, pub, config).recover(slots);
}

inline std::vector<Vehicle> make_fleet(std::span<const Credential> credentials) {
  std::vector<Vehicle> out;
  out.reserve(credentials.size());
  for (const auto& c : credentials) out.push_back(Vehicle{c, Behavior::kHonest, {}});
  return out;
}

/// Switches one vehicle's behavior. A SybilForge vehicle discards its
/// credential and fabricates (x', r G) with a fresh identifier.
inline std::vector<Vehicle> inject_adversary(std::vector<Vehicle> vehicles, std::size_t index, Behavior behavior,
                                             const CurveParams& params, Drbg& rng) {
  if (index >= vehicles.size()) throw ConfigError("adversary index " + std::to_string(index) + " out of range");
  Vehicle& v = vehicles[index];
  if (behavior == Behavior::kSybilForge && v.behavior != Behavior::kSybilForge) {
    std::set<BigInt> taken;
    for (const auto& other : vehicles) taken.insert(other.credential.identifier.value());
    const BigInt upper = params.q() - 1;
    BigInt x;
    do {
      x = rng.in_range(1, upper);
    } while (taken.contains(x));
    v.credential = Credential{params.scalar(x), scalar_mul(rng.in_range(1, upper), params.generator())};
  }
  v.behavior = behavior;
  return vehicles;
}

// ---- scenarios -----------------------------------------------------------------

struct Scenario {
  std::string curve = "toy";
  std::size_t k = 0;
  std::map<std::size_t, Behavior> adversaries;
  std::uint64_t seed = 1;
  std::uint32_t max_depth = 8;
  std::uint32_t roster_timeout = 2;
  bool recovery = true;
  std::string setup_dir;  // optional: credentials from a prior setup run
};

inline std::map<std::size_t, Behavior> parse_adversary_list(std::string_view spec) {
  std::map<std::size_t, Behavior> out;
  while (!spec.empty()) {
    const auto comma = spec.find(',');
    const std::string_view item = spec.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError("adversary entry must be idx:kind, got '" + std::string(item) + "'");
    const std::string idx(item.substr(0, colon));
    if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("adversary index must be a non-negative integer, got '" + idx + "'");
    }
    out[std::stoul(idx)] = parse_behavior(item.substr(colon + 1));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return out;
}

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  try {
    Scenario s;
    s.curve = doc.value("curve", s.curve);
    if (!doc.contains("k")) throw ConfigError("scenario missing 'k'");
    const long k = doc.at("k").get<long>();
    if (k < 2) throw ConfigError("scenario k must be at least 2, got " + std::to_string(k));
    s.k = static_cast<std::size_t>(k);
    s.seed = doc.value("seed", s.seed);
    s.max_depth = doc.value("max_depth", s.max_depth);
    s.roster_timeout = doc.value("roster_timeout", s.roster_timeout);
    s.recovery = doc.value("recovery", s.recovery);
    s.setup_dir = doc.value("setup_dir", s.setup_dir);
    if (doc.contains("adversaries")) {
      for (const auto& [idx, kind] : doc.at("adversaries").items()) {
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) {
          throw ConfigError("adversary index must be a non-negative integer, got '" + idx + "'");
        }
        s.adversaries[std::stoul(idx)] = parse_behavior(kind.get<std::string>());
      }
    }
    for (const auto& [idx, kind] : s.adversaries) {
      if (idx >= s.k) throw ConfigError("adversary index " + std::to_string(idx) + " >= k");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json adv = nlohmann::json::object();
  for (const auto& [idx, kind] : s.adversaries) adv[std::to_string(idx)] = behavior_name(kind);
  nlohmann::json doc{{"curve", s.curve}, {"k", s.k}, {"adversaries", adv}, {"seed", s.seed},
                     {"max_depth", s.max_depth}, {"roster_timeout", s.roster_timeout}, {"recovery", s.recovery}};
  if (!s.setup_dir.empty()) doc["setup_dir"] = s.setup_dir;
  return doc;
}

inline SessionConfig session_config(const Scenario& s, std::size_t workers = 1) {
  SessionConfig c;
  c.group_size = s.k;
  c.adversaries = s.adversaries;
  c.seed = s.seed;
  c.max_depth = s.max_depth;
  c.roster_timeout = s.roster_timeout;
  c.recovery = s.recovery;
  c.workers = workers;
  return c;
}

/// Fresh group: setup and enrollment from the scenario seed, then the
/// adversary map, then the session.
inline SessionResult run_scenario(const Scenario& s, const CurveParams& params, std::size_t workers = 1) {
  Drbg rng(s.seed);
  if (s.k < 2) throw ConfigError("scenario k must be at least 2");
  auto [secret, pub] = setup(params, rng, Bytes{'s', 'i', 'm'});
  auto vehicles = make_fleet(enroll_members(secret, s.k, rng));
  for (const auto& [idx, kind] : s.adversaries) vehicles = inject_adversary(std::move(vehicles), idx, kind, params, rng);
  const SessionConfig config = session_config(s, workers);
  return run_session(vehicles, pub, config);
}

inline nlohmann::json to_json(const SessionResult& r, bool include_timings = true) {
  auto traffic = [](const PhaseTraffic& t) {
    return nlohmann::json{{"assignment", t.assignment}, {"roster", t.roster}, {"contribution", t.contribution},
                          {"total", t.total()}};
  };
  auto ids = [&](const std::vector<std::size_t>& slots) {
    nlohmann::json a = nlohmann::json::array();
    for (auto s : slots) a.push_back(r.identifiers[s].get_str());
    return a;
  };
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.authenticated_subgroups) groups.push_back(ids(g));

  std::vector<int> subgroup_of(r.identifiers.size(), -1);
  for (std::size_t g = 0; g < r.authenticated_subgroups.size(); ++g)
    for (auto s : r.authenticated_subgroups[g]) subgroup_of[s] = static_cast<int>(g);

  nlohmann::json vehicles = nlohmann::json::array();
  for (std::size_t s = 0; s < r.identifiers.size(); ++s) {
    nlohmann::json v{{"slot", s},
                     {"identifier", r.identifiers[s].get_str()},
                     {"behavior", behavior_name(r.behaviors[s])},
                     {"status", subgroup_of[s] >= 0 ? "authenticated" : "excluded"},
                     {"subgroup", subgroup_of[s]},
                     {"bytes_received", traffic(r.bytes_received[s])}};
    if (include_timings) {
      v["computation_ms"] = r.wall_times[s].computation_ms;
      v["verification_ms"] = r.wall_times[s].verification_ms;
    }
    vehicles.push_back(std::move(v));
  }
  return {{"verdict", verdict_name(r.verdict)},
          {"authenticated_subgroups", groups},
          {"excluded", ids(r.excluded)},
          {"rounds", r.rounds},
          {"depth_exhausted", r.depth_exhausted},
          {"bytes_sent", traffic(r.bytes_sent)},
          {"transcript", {{"messages", r.transcript.size()}, {"sha512", to_hex(r.transcript_digest())}}},
          {"vehicles", vehicles}};
}

// ---- scalability ----------------------------------------------------------------

struct ScalabilityRow {
  std::size_t k = 0;
  double total_comp_ms = 0;
  double avg_comp_ms = 0;
  double total_verif_ms = 0;
  double avg_verif_ms = 0;
  double total_auth_ms = 0;
  double avg_auth_ms = 0;
};

/// One honest session per k; sums each vehicle's contribution and
/// verification wall time and divides by k for the averages.
inline std::vector<ScalabilityRow> measure_scalability(std::span<const std::size_t> sizes, const CurveParams& profile,
                                                       std::uint64_t seed, std::size_t workers = 1) {
  std::vector<ScalabilityRow> rows;
  for (std::size_t k : sizes) {
    if (k < 2) throw ConfigError("scalability sizes must be at least 2");
    Drbg rng(seed + k);
    auto [secret, pub] = setup(profile, rng, Bytes{'b', 'e', 'n', 'c', 'h'});
    auto vehicles = make_fleet(enroll_members(secret, k, rng));
    SessionConfig config;
    config.seed = seed;
    config.workers = workers;
    config.recovery = false;
    const SessionResult r = run_session(vehicles, pub, config);
    if (r.verdict != Verdict::kAuthenticated) throw Error("honest benchmark session failed to authenticate");
    ScalabilityRow row;
    row.k = k;
    for (const auto& t : r.wall_times) {
      row.total_comp_ms += t.computation_ms;
      row.total_verif_ms += t.verification_ms;
    }
    row.total_auth_ms = row.total_comp_ms + row.total_verif_ms;
    const double n = static_cast<double>(k);
    row.avg_comp_ms = row.total_comp_ms / n;
    row.avg_verif_ms = row.total_verif_ms / n;
    row.avg_auth_ms = row.total_auth_ms / n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace v2xauth::sim
