#pragma once

// Task-tree retrieval over a FOON graph store.
//
// All three searches chain backward from the goal key. Iterative deepening
// commits to the first candidate unit at every object and sweeps the depth
// limit upward; greedy best-first keeps a FIFO queue of keys to satisfy and
// picks candidates by a heuristic, committing without backtracking. Trees
// come back in execution order, kitchen-first.

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "foon/core.hpp"
#include "foon/errors.hpp"
#include "foon/parser.hpp"

namespace foon {

enum class Algorithm { ids, gbfs_h1, gbfs_h2 };

inline std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::ids: return "ids";
        case Algorithm::gbfs_h1: return "gbfs-h1";
        case Algorithm::gbfs_h2: return "gbfs-h2";
    }
    return "?";
}

inline std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    if (name == "ids") return Algorithm::ids;
    if (name == "gbfs-h1") return Algorithm::gbfs_h1;
    if (name == "gbfs-h2") return Algorithm::gbfs_h2;
    return std::nullopt;
}

/// Heuristic for greedy best-first selection.
enum class Heuristic { motion_rate, input_count };

/// Pre-processed ingredient equivalence map: object key -> stand-in keys,
/// probed in order. Lookup is a single index probe.
struct SubstitutionMap {
    std::unordered_map<std::string, std::vector<std::string>> equivalents;

    const std::vector<std::string>& lookup(const std::string& key) const {
        static const std::vector<std::string> kEmpty;
        auto it = equivalents.find(key);
        return it == equivalents.end() ? kEmpty : it->second;
    }
};

struct Availability {
    enum class Kind { direct, via_substitute, unavailable };
    Kind kind = Kind::unavailable;
    std::string substitute;  // set for via_substitute

    bool ok() const noexcept { return kind != Kind::unavailable; }
};

/// Direct if the key is in the kitchen; otherwise the first equivalent (in
/// map order) present in the kitchen; otherwise unavailable.
inline Availability is_available(const std::string& key, const KitchenState& kitchen,
                                 const SubstitutionMap& subs) {
    if (kitchen.contains(key)) return {Availability::Kind::direct, {}};
    for (const auto& stand_in : subs.lookup(key)) {
        if (kitchen.contains(stand_in)) return {Availability::Kind::via_substitute, stand_in};
    }
    return {Availability::Kind::unavailable, {}};
}

/// Rebuilds key text ("name|states|ingredients", states and ingredients
/// comma-separated) into canonical form. Partial keys such as "ice|cube" are
/// completed with empty trailing segments.
inline std::string canonical_key(std::string_view text, const std::string& source = "<key>",
                                 std::size_t line = 0) {
    auto parts = detail::split(text, '|');
    if (parts.size() > 3) throw MalformedLine(source, line, "too many '|' in key");
    ObjectNode node;
    node.name = detail::checked_token(parts[0], source, line);
    if (node.name.empty()) throw MalformedLine(source, line, "key needs an object name");
    if (parts.size() >= 2) node.states = detail::csv_tokens(parts[1], source, line);
    if (parts.size() >= 3) node.ingredients = detail::csv_tokens(parts[2], source, line);
    return object_key(node);
}

/// Parses a substitution-map file: one "key = key1, key2, ..." record per
/// line, '#' comments. Keys on the right side must be written in full
/// "name|states|ingredients" form so that commas inside state lists stay
/// unambiguous.
inline SubstitutionMap parse_substitutions(std::string_view text,
                                           const std::string& source = "<substitutions>") {
    SubstitutionMap subs;
    detail::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') return;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw MalformedLine(source, lineno, "expected 'key = key1, key2, ...'");

        auto key = canonical_key(std::string_view(trimmed).substr(0, eq), source, lineno);
        std::vector<std::string> values;
        std::string token;
        for (const auto& piece : detail::split(std::string_view(trimmed).substr(eq + 1), ',')) {
            token = token.empty() ? piece : token + "," + piece;
            if (std::count(token.begin(), token.end(), '|') >= 2) {
                values.push_back(canonical_key(token, source, lineno));
                token.clear();
            }
        }
        if (!detail::trim(token).empty() || values.empty())
            throw MalformedLine(source, lineno, "malformed substitution list");
        for (const auto& v : values) {
            if (v == key) throw MalformedLine(source, lineno, "key maps to itself");
        }
        if (!subs.equivalents.emplace(key, std::move(values)).second)
            throw MalformedLine(source, lineno, "duplicate substitution key '" + key + "'");
    });
    return subs;
}

inline SubstitutionMap parse_substitutions_file(const std::filesystem::path& path) {
    return parse_substitutions(detail::read_file(path), path.string());
}

/// An extracted task tree: steps in execution order, kitchen-first.
struct TaskTree {
    std::vector<FunctionalUnit> steps;
    std::string goal;
    Algorithm algorithm = Algorithm::ids;
};

struct RetrievalStats {
    std::size_t units_in_tree = 0;
    std::size_t units_expanded = 0;
    std::size_t max_depth_reached = 0;  // ids only
};

struct RetrievalResult {
    TaskTree tree;
    RetrievalStats stats;
};

/// One candidate-selection event, reported to the observer hook.
/// The spans are only valid for the duration of the callback.
struct Expansion {
    const std::string& key;
    std::span<const FunctionalUnit* const> candidates;
    const FunctionalUnit& chosen;
    std::size_t chosen_position;
};

struct RetrievalOptions {
    std::function<void(const Expansion&)> observer;
    /// Called with a motion label that has no entry in the success table.
    std::function<void(const std::string&)> warn;
};

/// The units producing the goal key, in insertion order.
inline std::vector<const FunctionalUnit*> find_goal(const Foon& foon,
                                                    const std::string& goal_key) {
    auto candidates = foon.candidate_units(goal_key);
    if (candidates.empty()) throw GoalNotFound(goal_key);
    return candidates;
}

namespace detail {

inline std::size_t best_by_rate(std::span<const FunctionalUnit* const> candidates,
                                const MotionSuccessTable& table,
                                const std::function<void(const std::string&)>& warn) {
    std::size_t best = 0;
    double best_rate = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto label = normalize_token(candidates[i]->motion.label);
        auto rate = table.rate(label);
        if (!rate && warn) warn(label);
        double score = rate.value_or(0.0);
        if (score > best_rate) {  // strict: ties keep the earliest candidate
            best_rate = score;
            best = i;
        }
    }
    return best;
}

inline std::size_t best_by_input_count(std::span<const FunctionalUnit* const> candidates) {
    std::size_t best = 0;
    std::size_t best_count = candidates[0]->inputs.size();
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i]->inputs.size() < best_count) {
            best_count = candidates[i]->inputs.size();
            best = i;
        }
    }
    return best;
}

}  // namespace detail

/// Candidate with the highest motion success rate; ties break to the earliest
/// position. A motion absent from the table scores 0.0 (reported via `warn`).
inline const FunctionalUnit& select_best_h1(std::span<const FunctionalUnit* const> candidates,
                                            const MotionSuccessTable& table,
                                            const std::function<void(const std::string&)>& warn = {}) {
    if (candidates.empty()) throw std::invalid_argument("select_best_h1: no candidates");
    return *candidates[detail::best_by_rate(candidates, table, warn)];
}

/// Candidate with the fewest input nodes; ties break to the earliest position.
inline const FunctionalUnit& select_best_h2(std::span<const FunctionalUnit* const> candidates) {
    if (candidates.empty()) throw std::invalid_argument("select_best_h2: no candidates");
    return *candidates[detail::best_by_input_count(candidates)];
}

/// Turns goal-first discovery order into execution order. Plain reversal is
/// used when it already respects producer-before-consumer; otherwise a stable
/// topological sort keyed by reversed position. A unit never depends on
/// itself; a key with several in-tree producers needs only one to precede.
inline std::vector<FunctionalUnit> reverse_to_execution_order(
    std::vector<FunctionalUnit> discovered) {
    std::vector<FunctionalUnit> reversed(discovered.rbegin(), discovered.rend());
    const std::size_t n = reversed.size();

    std::vector<std::vector<std::string>> in_keys(n);
    std::unordered_map<std::string, std::vector<std::size_t>> produced_at;
    for (std::size_t i = 0; i < n; ++i) {
        in_keys[i] = input_keys(reversed[i]);
        for (const auto& key : output_keys(reversed[i])) produced_at[key].push_back(i);
    }

    auto satisfied = [&](std::size_t pos, const std::vector<bool>& emitted) {
        for (const auto& key : in_keys[pos]) {
            auto it = produced_at.find(key);
            if (it == produced_at.end()) continue;
            bool has_other = false, met = false;
            for (auto p : it->second) {
                if (p == pos) continue;
                has_other = true;
                if (emitted[p]) met = true;
            }
            if (has_other && !met) return false;
        }
        return true;
    };

    // Verification pass over the plain reversal.
    {
        std::vector<bool> emitted(n, false);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            ok = satisfied(i, emitted);
            emitted[i] = true;
        }
        if (ok) return reversed;
    }

    std::vector<FunctionalUnit> order;
    order.reserve(n);
    std::vector<bool> emitted(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!emitted[i] && satisfied(i, emitted)) {
                pick = i;
                break;
            }
        }
        if (pick == n) throw CyclicDependency();
        emitted[pick] = true;
        order.push_back(reversed[pick]);
    }
    return order;
}

struct TreeVerdict {
    bool valid = false;
    std::size_t failed_step = 0;   // steps.size() means the goal never appeared
    std::string missing_key;
};

/// Simulates execution front-to-back: every step's inputs must be in the
/// working set (kitchen plus everything produced so far) or substitutable
/// from it, and the goal must be available once the walk ends. Deliberately
/// shares no code with the search algorithms.
inline TreeVerdict validate_tree(const TaskTree& tree, const KitchenState& kitchen,
                                 const SubstitutionMap& subs) {
    std::unordered_set<std::string> working = kitchen.items;
    auto covered = [&](const std::string& key) {
        if (working.count(key)) return true;
        auto it = subs.equivalents.find(key);
        if (it == subs.equivalents.end()) return false;
        for (const auto& stand_in : it->second) {
            if (working.count(stand_in)) return true;
        }
        return false;
    };

    for (std::size_t i = 0; i < tree.steps.size(); ++i) {
        for (const auto& node : tree.steps[i].inputs) {
            auto key = object_key(node);
            if (!covered(key)) return {false, i, key};
        }
        for (const auto& node : tree.steps[i].outputs) working.insert(object_key(node));
    }
    if (!covered(tree.goal)) return {false, tree.steps.size(), tree.goal};
    return {true, 0, {}};
}

/// Iterative deepening retrieval. For each depth limit d = 1..depth_ceiling,
/// runs a depth-limited backward search that always commits to the first
/// candidate unit; a unit's depth is 1 + the deepest of its producing
/// sub-searches. Keys already being expanded on the current path are dead
/// branches. Returns the tree found at the smallest successful limit.
inline RetrievalResult ids_retrieve(const Foon& foon, const std::string& goal_key,
                                    const KitchenState& kitchen, const SubstitutionMap& subs,
                                    std::size_t depth_ceiling = 100,
                                    const RetrievalOptions& options = {}) {
    if (depth_ceiling < 1) throw std::invalid_argument("depth_ceiling must be >= 1");

    RetrievalResult result;
    result.tree.goal = goal_key;
    result.tree.algorithm = Algorithm::ids;
    if (is_available(goal_key, kitchen, subs).ok()) return result;
    if (foon.producer_indices(goal_key).empty()) throw GoalNotFound(goal_key);

    enum class Status { success, cutoff, dead_end };
    struct Outcome {
        Status status;
        std::size_t depth = 0;
        std::string blocking;
    };

    std::vector<std::uint32_t> discovered;
    std::unordered_set<std::string> path;

    std::function<Outcome(const std::string&, std::size_t)> dls =
        [&](const std::string& key, std::size_t budget) -> Outcome {
        const auto& candidates = foon.producer_indices(key);
        if (candidates.empty()) return {Status::dead_end, 0, key};
        if (path.count(key)) return {Status::cutoff};
        if (budget < 1) return {Status::cutoff};

        auto unit_index = candidates.front();
        const auto& unit = foon.units()[unit_index];
        ++result.stats.units_expanded;
        if (options.observer) {
            auto ptrs = foon.candidate_units(key);
            options.observer({key, ptrs, unit, 0});
        }

        auto rollback_mark = discovered.size();
        discovered.push_back(unit_index);
        path.insert(key);
        std::size_t depth = 1;
        for (const auto& input : input_keys(unit)) {
            if (is_available(input, kitchen, subs).ok()) continue;
            auto sub = dls(input, budget - 1);
            if (sub.status != Status::success) {
                path.erase(key);
                discovered.resize(rollback_mark);
                return sub;
            }
            depth = std::max(depth, 1 + sub.depth);
        }
        path.erase(key);
        return {Status::success, depth};
    };

    for (std::size_t limit = 1; limit <= depth_ceiling; ++limit) {
        discovered.clear();
        path.clear();
        auto outcome = dls(goal_key, limit);
        if (outcome.status == Status::dead_end) throw UnreachableGoal(outcome.blocking);
        if (outcome.status == Status::cutoff) continue;

        std::vector<FunctionalUnit> tree_units;
        std::unordered_set<std::uint32_t> seen;
        for (auto index : discovered) {
            if (seen.insert(index).second) tree_units.push_back(foon.units()[index]);
        }
        result.tree.steps = reverse_to_execution_order(std::move(tree_units));
        result.stats.units_in_tree = result.tree.steps.size();
        result.stats.max_depth_reached = outcome.depth;
        return result;
    }
    throw NoSolutionWithinDepth(depth_ceiling);
}

/// Greedy best-first retrieval. A FIFO queue of object keys to satisfy is
/// seeded with the goal; each popped unavailable key commits to the best
/// candidate by the heuristic, with no backtracking. Keys already satisfied
/// or enqueued are never re-enqueued.
inline RetrievalResult gbfs_retrieve(const Foon& foon, const std::string& goal_key,
                                     const KitchenState& kitchen, const SubstitutionMap& subs,
                                     Heuristic heuristic,
                                     const MotionSuccessTable* table = nullptr,
                                     const RetrievalOptions& options = {}) {
    if (heuristic == Heuristic::motion_rate && table == nullptr)
        throw std::invalid_argument("gbfs with the motion-rate heuristic needs a success table");

    RetrievalResult result;
    result.tree.goal = goal_key;
    result.tree.algorithm =
        heuristic == Heuristic::motion_rate ? Algorithm::gbfs_h1 : Algorithm::gbfs_h2;
    if (is_available(goal_key, kitchen, subs).ok()) return result;
    if (foon.producer_indices(goal_key).empty()) throw GoalNotFound(goal_key);

    std::unordered_set<std::string> warned;
    auto warn_once = [&](const std::string& label) {
        if (options.warn && warned.insert(label).second) options.warn(label);
    };

    std::deque<std::string> queue{goal_key};
    std::unordered_set<std::string> enqueued{goal_key};
    std::vector<std::uint32_t> discovered;
    std::unordered_set<std::uint32_t> in_tree;

    while (!queue.empty()) {
        auto key = std::move(queue.front());
        queue.pop_front();
        if (is_available(key, kitchen, subs).ok()) continue;

        const auto& candidates = foon.producer_indices(key);
        if (candidates.empty()) throw UnreachableGoal(key);

        auto ptrs = foon.candidate_units(key);
        auto position = heuristic == Heuristic::motion_rate
                            ? detail::best_by_rate(ptrs, *table, warn_once)
                            : detail::best_by_input_count(ptrs);
        auto unit_index = candidates[position];
        const auto& unit = foon.units()[unit_index];
        ++result.stats.units_expanded;
        if (options.observer) options.observer({key, ptrs, unit, position});

        if (in_tree.insert(unit_index).second) discovered.push_back(unit_index);
        for (const auto& input : input_keys(unit)) {
            if (is_available(input, kitchen, subs).ok()) continue;
            if (!enqueued.insert(input).second) continue;
            queue.push_back(input);
        }
    }

    std::vector<FunctionalUnit> tree_units;
    tree_units.reserve(discovered.size());
    for (auto index : discovered) tree_units.push_back(foon.units()[index]);
    result.tree.steps = reverse_to_execution_order(std::move(tree_units));
    result.stats.units_in_tree = result.tree.steps.size();
    return result;
}

}  // namespace foon
