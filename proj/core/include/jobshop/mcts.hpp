#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/env.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/rng.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

struct SearchConfig {
  double exploration_c = 0.7;  // UCB1 exploration constant
  int rollouts = 30;           // random playouts per simulation (k)
  int advance_period = 6;      // root advances after this many iterations
  std::optional<std::int64_t> max_iterations;
  std::optional<double> time_limit_seconds;
  std::uint64_t seed = 0;
  // Backpropagate the mean of the k rollouts once (default), or each
  // rollout reward individually.
  bool backprop_each_rollout = false;

  void validate() const;  // throws ValidationError: needs a stopping criterion
};

class SearchNode {
 public:
  SearchNode(EnvState state, std::int32_t action_index, SearchNode* parent,
             std::int32_t action_count);

  const EnvState& state() const { return state_; }
  std::int32_t action_index() const { return action_index_; }
  SearchNode* parent() const { return parent_; }
  const std::vector<std::unique_ptr<SearchNode>>& children() const {
    return children_;
  }

  bool terminal() const { return terminal_; }
  bool fully_expanded() const { return terminal_ || next_untried_ >= action_total_; }
  std::int32_t untried_count() const {
    return terminal_ ? 0 : action_total_ - next_untried_;
  }

  std::int64_t visits() const { return visits_; }
  double total_reward() const { return total_reward_; }
  double mean_reward() const {
    return visits_ == 0 ? 0.0 : total_reward_ / static_cast<double>(visits_);
  }

  void record(double reward) {
    visits_ += 1;
    total_reward_ += reward;
  }

 private:
  friend class SearchTree;

  EnvState state_;
  std::int32_t action_index_;  // action leading here; -1 at the root
  SearchNode* parent_;
  std::vector<std::unique_ptr<SearchNode>> children_;
  std::int32_t next_untried_ = 0;  // actions expand in legal_actions order
  std::int32_t action_total_ = 0;
  bool terminal_ = false;
  std::int64_t visits_ = 0;
  double total_reward_ = 0.0;
};

// UCB1: mean + C * sqrt(ln(parent_visits) / child_visits). Callers never
// rank unvisited children (selection stops at nodes with untried actions).
double ucb_value(const SearchNode& child, std::int64_t parent_visits, double c);

struct SimulationResult {
  double mean_reward = 0.0;
  Rational best_objective;
  std::vector<std::int64_t> best_completion;  // terminal times of best rollout
};

struct AdvanceRecord {
  EnvAction action;
  double mean_reward = 0.0;
};

struct SearchResult {
  Rational best_objective;
  AbsoluteSchedule best_schedule;
  double best_normalized_reward = 0.0;
  std::int64_t iterations = 0;
  std::int64_t nodes_created = 0;
  std::vector<AdvanceRecord> advance_trace;
  double wall_time_ms = 0.0;
};

// Owns the tree and the per-search RNG. The RNG is consumed in a fixed
// order (selection tie-breaks, then rollout actions), so equal seeds give
// equal searches.
class SearchTree {
 public:
  SearchTree(const Instance& inst, const EnvConfig& cfg, std::uint64_t seed);

  SearchNode& root() { return *root_; }
  const std::vector<EnvAction>& actions() const { return actions_; }
  Rng& rng() { return rng_; }

  // Descends by argmax UCB (equal values break uniformly at random)
  // through fully expanded nodes; stops at the first node with untried
  // actions or at a terminal node. Returns the path from the root.
  std::vector<SearchNode*> select(double exploration_c);

  // Creates the child for the node's next untried action (legal_actions
  // order). Throws ValidationError when nothing is untried.
  SearchNode& expand(SearchNode& node);

  // k uniform-random playouts to terminal; returns the mean normalized
  // reward and the best (minimum-objective) playout. A terminal input state
  // yields its exact reward with no sampling.
  SimulationResult simulate(const EnvState& state, int k);

  // visits += 1, total += reward for every node on the path.
  static void backpropagate(const std::vector<SearchNode*>& path,
                            double reward);

  // Promotes the child with the best mean reward (ties: most visits, then
  // action order) to be the new root, keeping its subtree statistics.
  // Throws ValidationError unless the root is fully expanded with every
  // child visited.
  std::pair<EnvAction, SearchNode*> advance_root();

  std::int64_t nodes_created() const { return nodes_created_; }

 private:
  const Instance* inst_;
  EnvConfig cfg_;
  std::vector<EnvAction> actions_;
  RewardBounds bounds_;
  std::unique_ptr<SearchNode> root_;
  Rng rng_;
  std::int64_t nodes_created_ = 1;
  EnvState scratch_;  // rollout workspace, reused across simulations
};

// Full search: repeat {select, expand, simulate, backpropagate}, advancing
// the root every advance_period iterations once it is ready; stops on the
// iteration budget, the time limit, or a terminal root. The incumbent is
// the best rollout terminal ever observed, including one mandatory
// simulation at the initial root (so even a zero-iteration budget returns a
// complete schedule).
SearchResult search(const Instance& inst, const EnvConfig& env_cfg,
                    const SearchConfig& search_cfg);

}  // namespace jobshop
