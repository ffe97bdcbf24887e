#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "snsmq/network.hpp"
#include "snsmq/rng.hpp"

namespace snsmq {

/// Raised on out-of-domain numeric arguments (e.g. quality below q_min).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when per-agent arrays do not line up with the graph.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Behavior parameters of one agent: posting rate, comment rate, item quality.
struct StrategyParams {
  double b = 0.0;
  double l = 0.0;
  double q = 1.0;

  friend bool operator==(const StrategyParams&, const StrategyParams&) = default;
};

enum class Group : std::uint8_t { alpha, beta };

std::string_view to_string(Group g);

/// Agents with m_pref < 0.5 prefer psychological rewards (alpha), the rest
/// prefer money (beta).
constexpr Group group_for(double m_pref) { return m_pref < 0.5 ? Group::alpha : Group::beta; }

struct AgentProfile {
  NodeId id = 0;
  double m_pref = 0.0;
  Group group = Group::alpha;
};

enum class PreferenceMode : std::uint8_t {
  half_uniform,  // alpha ~ U[0, 0.5), beta ~ U[0.5, 1]
  fixed,         // alpha = 0.25, beta = 0.75
};

std::string_view to_string(PreferenceMode m);
PreferenceMode parse_preference_mode(std::string_view s);

/// Assigns exactly n_alpha agents to alpha by a random permutation of ids.
std::vector<AgentProfile> make_profiles(std::size_t n, std::size_t n_alpha, PreferenceMode mode, Rng& rng);

/// Monetary reward schemes: none, per post, per view received, per meta-comment made.
enum class Scheme : std::uint8_t { S0 = 0, S1 = 1, S2 = 2, S3 = 3 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct SchemeConfig {
  Scheme scheme = Scheme::S0;
  double pi = 0.0;

  /// Reward actually paid per trigger event; zero under S0.
  double payout() const { return scheme == Scheme::S0 ? 0.0 : pi; }
};

struct EconomyConfig {
  double c_ref = 1.0;
  double mu = 8.0;
  double delta = 0.5;
  double q_min = 0.125;

  void validate() const;
};

struct StageCosts {
  double c0, r0;  // post cost, view reward (quality dependent)
  double c1, r1;  // comment cost, comment reward
  double c2, r2;  // meta-comment cost, meta-comment reward
};

StageCosts stage_costs(const EconomyConfig& economy, double q);

/// Probability of posting in stage one: b * q_min / q.
double post_probability(double b, double q, double q_min);

/// Probability that a viewer with s_j posted items in its neighborhood views
/// one item of the given quality. Zero when s_j is zero.
double view_probability(double q_poster, std::size_t s_j);

/// Per-agent accumulators for one or more games.
struct AgentTally {
  double psych = 0.0;  // R
  double money = 0.0;  // K
  double cost = 0.0;   // C
  std::uint64_t posts = 0;
  std::uint64_t views_received = 0;  // view events on this agent's items
  std::uint64_t views_made = 0;      // items this agent viewed
  std::uint64_t comments_received = 0;
  std::uint64_t comments_made = 0;
  std::uint64_t metas_made = 0;
  std::uint64_t metas_received = 0;

  AgentTally& operator+=(const AgentTally& o);
  friend bool operator==(const AgentTally&, const AgentTally&) = default;
};

struct ActivityTotals {
  std::uint64_t items = 0;
  std::uint64_t views = 0;
  std::uint64_t comments = 0;
  std::uint64_t metas = 0;
  double money = 0.0;
};

struct GameTally {
  std::vector<AgentTally> agents;

  GameTally() = default;
  explicit GameTally(std::size_t n) : agents(n) {}

  void reset() { std::fill(agents.begin(), agents.end(), AgentTally{}); }
  GameTally& operator+=(const GameTally& o);
  ActivityTotals totals() const;
};

/// One successful view, with how far the exchange went.
struct ViewEvent {
  NodeId poster = 0;
  NodeId viewer = 0;
  bool commented = false;
  bool meta = false;
};

/// Plays one game (a round for every agent) and adds its events to `tally`.
///
/// Stage one resolves every post decision before any viewing. Then, for each
/// poster i in ascending id and each neighbor j in ascending id, three draws
/// are taken in order while they succeed: view (q_i / s_j), comment
/// (l_j * q_i), meta-comment (l_i * q_i). The viewer gains r0(q_i), the
/// poster gains r1 per comment, the commenter gains r2 per meta-comment.
/// When `events` is given, every successful view is appended to it.
void play_game_into(const Graph& graph, std::span<const StrategyParams> strategies, const SchemeConfig& scheme,
                    const EconomyConfig& economy, Rng& rng, GameTally& tally,
                    std::vector<ViewEvent>* events = nullptr);

GameTally play_game(const Graph& graph, std::span<const AgentProfile> profiles,
                    std::span<const StrategyParams> strategies, const SchemeConfig& scheme,
                    const EconomyConfig& economy, Rng& rng);

/// (1 - M) R + M K - C
constexpr double utility(double psych, double money, double cost, double m_pref) {
  return (1.0 - m_pref) * psych + m_pref * money - cost;
}

inline double utility(const AgentTally& t, double m_pref) { return utility(t.psych, t.money, t.cost, m_pref); }

}  // namespace snsmq
