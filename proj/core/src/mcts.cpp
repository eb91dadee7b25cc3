#include "jobshop/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jobshop/error.hpp"

namespace jobshop {

void SearchConfig::validate() const {
  if (!max_iterations.has_value() && !time_limit_seconds.has_value())
    throw ValidationError(
        "search needs an iteration budget or a time limit (or both)");
  if (max_iterations.has_value() && *max_iterations < 0)
    throw ValidationError("iteration budget must be >= 0");
  if (time_limit_seconds.has_value() && *time_limit_seconds <= 0)
    throw ValidationError("time limit must be positive");
  // c == 0 is allowed: pure exploitation.
  if (exploration_c < 0) throw ValidationError("exploration constant must be >= 0");
  if (rollouts < 1) throw ValidationError("rollouts per simulation must be >= 1");
  if (advance_period < 1) throw ValidationError("advance period must be >= 1");
}

SearchNode::SearchNode(EnvState state, std::int32_t action_index,
                       SearchNode* parent, std::int32_t action_count)
    : state_(std::move(state)),
      action_index_(action_index),
      parent_(parent),
      action_total_(action_count),
      terminal_(is_terminal(state_)) {}

double ucb_value(const SearchNode& child, std::int64_t parent_visits,
                 double c) {
  return child.mean_reward() +
         c * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                       static_cast<double>(child.visits()));
}

SearchTree::SearchTree(const Instance& inst, const EnvConfig& cfg,
                       std::uint64_t seed)
    : inst_(&inst), cfg_(cfg), bounds_(reward_bounds(inst)), rng_(seed) {
  cfg_.validate();
  EnvState initial = make_initial_state(inst);
  if (!is_terminal(initial)) actions_ = legal_actions(initial, cfg_);
  root_ = std::make_unique<SearchNode>(std::move(initial), -1, nullptr,
                                       static_cast<std::int32_t>(actions_.size()));
}

std::vector<SearchNode*> SearchTree::select(double exploration_c) {
  std::vector<SearchNode*> path;
  SearchNode* node = root_.get();
  path.push_back(node);
  std::vector<SearchNode*> ties;
  while (node->fully_expanded() && !node->terminal()) {
    ties.clear();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& child : node->children_) {
      const double v = ucb_value(*child, node->visits(), exploration_c);
      if (v > best) {
        best = v;
        ties.clear();
        ties.push_back(child.get());
      } else if (v == best) {
        ties.push_back(child.get());
      }
    }
    // Equal UCB values: pick uniformly. The RNG is touched only on ties so
    // tie-free searches consume a predictable stream.
    node = ties.size() == 1
               ? ties.front()
               : ties[static_cast<size_t>(rng_.below(ties.size()))];
    path.push_back(node);
  }
  return path;
}

SearchNode& SearchTree::expand(SearchNode& node) {
  if (node.terminal() || node.untried_count() == 0)
    throw ValidationError("expand called without untried actions");
  const std::int32_t action_index = node.next_untried_++;
  EnvState child_state =
      step(node.state_, actions_[static_cast<size_t>(action_index)], cfg_, *inst_);
  node.children_.push_back(std::make_unique<SearchNode>(
      std::move(child_state), action_index, &node,
      static_cast<std::int32_t>(actions_.size())));
  ++nodes_created_;
  return *node.children_.back();
}

SimulationResult SearchTree::simulate(const EnvState& state, int k) {
  SimulationResult result;
  if (is_terminal(state)) {
    result.best_objective = terminal_objective(state, *inst_);
    result.best_completion = state.completion;
    result.mean_reward =
        to_double(normalized_reward(result.best_objective, bounds_));
    return result;
  }
  double total = 0.0;
  bool have_best = false;
  for (int i = 0; i < k; ++i) {
    scratch_ = state;
    while (!is_terminal(scratch_)) {
      const auto pick = static_cast<size_t>(rng_.below(actions_.size()));
      step_inplace(scratch_, actions_[pick], cfg_, *inst_);
    }
    const Rational objective = objective_weighted_completion(
        std::span<const std::int64_t>(scratch_.completion), *inst_);
    total += to_double(normalized_reward(objective, bounds_));
    if (!have_best || objective < result.best_objective) {
      have_best = true;
      result.best_objective = objective;
      result.best_completion = scratch_.completion;
    }
  }
  result.mean_reward = total / static_cast<double>(k);
  return result;
}

void SearchTree::backpropagate(const std::vector<SearchNode*>& path,
                               double reward) {
  if (reward < -1e-12 || reward > 1.0 + 1e-12)
    throw std::logic_error("backpropagated reward outside [0, 1]");
  const double clamped = std::clamp(reward, 0.0, 1.0);
  for (SearchNode* node : path) node->record(clamped);
}

std::pair<EnvAction, SearchNode*> SearchTree::advance_root() {
  if (root_->terminal())
    throw ValidationError("cannot advance a terminal root");
  if (!root_->fully_expanded())
    throw ValidationError("cannot advance before the root is fully expanded");
  size_t best = 0;
  for (size_t i = 0; i < root_->children_.size(); ++i) {
    const SearchNode& child = *root_->children_[i];
    if (child.visits() == 0)
      throw ValidationError("cannot advance with an unvisited child");
    if (i == 0) continue;
    const SearchNode& incumbent = *root_->children_[best];
    if (child.mean_reward() > incumbent.mean_reward() ||
        (child.mean_reward() == incumbent.mean_reward() &&
         child.visits() > incumbent.visits()))
      best = i;  // remaining ties keep the earlier action
  }
  std::unique_ptr<SearchNode> chosen = std::move(root_->children_[best]);
  const EnvAction action = actions_[static_cast<size_t>(chosen->action_index())];
  chosen->parent_ = nullptr;
  root_ = std::move(chosen);
  return {action, root_.get()};
}

SearchResult search(const Instance& inst, const EnvConfig& env_cfg,
                    const SearchConfig& search_cfg) {
  env_cfg.validate();
  search_cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed_s = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  SearchTree tree(inst, env_cfg, search_cfg.seed);
  const RewardBounds bounds = reward_bounds(inst);

  SearchResult result;
  bool have_incumbent = false;
  auto consider = [&](const SimulationResult& sim) {
    if (sim.best_completion.empty() && inst.op_count() > 0) return;
    if (!have_incumbent || sim.best_objective < result.best_objective) {
      have_incumbent = true;
      result.best_objective = sim.best_objective;
      result.best_schedule.completion = sim.best_completion;
    }
  };
  auto backprop = [&](const std::vector<SearchNode*>& path, double mean) {
    if (search_cfg.backprop_each_rollout) {
      // Credit every rollout separately; with only sums and counts stored
      // this is k pushes of the mean.
      for (int i = 0; i < search_cfg.rollouts; ++i)
        SearchTree::backpropagate(path, mean);
    } else {
      SearchTree::backpropagate(path, mean);
    }
  };

  // Mandatory first evaluation of the root: even with a zero budget the
  // result carries a complete schedule.
  {
    std::vector<SearchNode*> path{&tree.root()};
    const SimulationResult sim =
        tree.simulate(tree.root().state(), search_cfg.rollouts);
    backprop(path, sim.mean_reward);
    consider(sim);
  }

  std::int64_t iterations_at_root = 0;
  while (!tree.root().terminal()) {
    if (search_cfg.max_iterations.has_value() &&
        result.iterations >= *search_cfg.max_iterations)
      break;
    if (search_cfg.time_limit_seconds.has_value() &&
        elapsed_s() >= *search_cfg.time_limit_seconds)
      break;

    std::vector<SearchNode*> path = tree.select(search_cfg.exploration_c);
    SearchNode* node = path.back();
    if (!node->terminal() && node->untried_count() > 0)
      path.push_back(&tree.expand(*node));
    const SimulationResult sim =
        tree.simulate(path.back()->state(), search_cfg.rollouts);
    backprop(path, sim.mean_reward);
    consider(sim);

    ++result.iterations;
    ++iterations_at_root;
    if (iterations_at_root >= search_cfg.advance_period &&
        !tree.root().terminal() && tree.root().fully_expanded()) {
      const auto [action, new_root] = tree.advance_root();
      result.advance_trace.push_back(
          AdvanceRecord{action, new_root->mean_reward()});
      iterations_at_root = 0;
    }
  }

  if (inst.op_count() == 0) {
    // Vacuously complete; the objective of an empty schedule is zero.
    result.best_schedule.completion.clear();
    result.best_objective = Rational(0);
    have_incumbent = true;
  }
  result.best_normalized_reward =
      to_double(normalized_reward(result.best_objective, bounds));
  result.nodes_created = tree.nodes_created();
  result.wall_time_ms = elapsed_s() * 1000.0;
  return result;
}

}  // namespace jobshop
