#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "foon/core.hpp"
#include "foon/dot.hpp"
#include "foon/errors.hpp"
#include "foon/parser.hpp"
#include "foon/retrieval.hpp"

namespace foon::cli {

// Stable exit codes, documented in the tool's --help.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_parse_error = 2;
inline constexpr int exit_goal_not_found = 3;
inline constexpr int exit_unreachable_goal = 4;
inline constexpr int exit_no_solution_within_depth = 5;
inline constexpr int exit_cyclic_dependency = 6;
inline constexpr int exit_ambiguous_goal = 7;

struct RunConfig {
    std::vector<std::string> foon_paths;
    std::string kitchen_path;
    std::optional<std::string> motions_path;
    std::optional<std::string> subs_path;
    std::string goal;
    bool goal_by_name = false;
    std::string algorithm = "ids";  // ids | gbfs-h1 | gbfs-h2 | all
    std::size_t depth_ceiling = 100;
    std::optional<std::string> out_path;
    std::optional<std::string> dot_path;
    std::optional<std::string> stats_path;
};

struct MergeConfig {
    std::vector<std::string> inputs;
    std::string output;
};

struct StatsConfig {
    std::vector<std::string> foon_paths;
    std::string kitchen_path;
    std::optional<std::string> motions_path;
    std::optional<std::string> subs_path;
    std::vector<std::string> goals;
    std::size_t depth_ceiling = 100;
    std::optional<std::string> stats_path;
};

namespace detail {

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const GoalNotFound*>(&e)) return exit_goal_not_found;
    if (dynamic_cast<const UnreachableGoal*>(&e)) return exit_unreachable_goal;
    if (dynamic_cast<const NoSolutionWithinDepth*>(&e)) return exit_no_solution_within_depth;
    if (dynamic_cast<const CyclicDependency*>(&e)) return exit_cyclic_dependency;
    if (dynamic_cast<const AmbiguousGoal*>(&e)) return exit_ambiguous_goal;
    if (dynamic_cast<const ParseError*>(&e)) return exit_parse_error;
    return exit_usage;
}

inline std::string error_name(const std::exception& e) {
    if (dynamic_cast<const GoalNotFound*>(&e)) return "GoalNotFound";
    if (dynamic_cast<const UnreachableGoal*>(&e)) return "UnreachableGoal";
    if (dynamic_cast<const NoSolutionWithinDepth*>(&e)) return "NoSolutionWithinDepth";
    if (dynamic_cast<const CyclicDependency*>(&e)) return "CyclicDependency";
    if (dynamic_cast<const AmbiguousGoal*>(&e)) return "AmbiguousGoal";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    return "Error";
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

struct Universe {
    Foon foon;
    KitchenState kitchen;
    MotionSuccessTable motions;
    bool have_motions = false;
    SubstitutionMap subs;
};

inline Universe load_inputs(const std::vector<std::string>& foon_paths,
                            const std::string& kitchen_path,
                            const std::optional<std::string>& motions_path,
                            const std::optional<std::string>& subs_path) {
    Universe u;
    for (const auto& path : foon_paths) {
        for (const auto& unit : parse_subgraph_file(path)) u.foon.add_unit(unit);
    }
    u.kitchen = parse_kitchen_file(kitchen_path);
    if (motions_path) {
        u.motions = parse_motions_file(*motions_path);
        u.have_motions = true;
    }
    if (subs_path) u.subs = parse_substitutions_file(*subs_path);
    return u;
}

/// Exact-key goals are re-canonicalized; name-only lookup scans produced and
/// kitchen keys and insists on a unique state variant.
inline std::string resolve_goal(const Universe& u, const std::string& text, bool by_name) {
    if (!by_name) return canonical_key(text, "--goal");
    auto name = foon::detail::normalize_token(text);
    if (name.empty()) throw MalformedLine("--goal", 0, "goal name is empty");

    auto name_of = [](const std::string& key) { return key.substr(0, key.find('|')); };
    std::vector<std::string> matches;
    for (const auto& [key, _] : u.foon.producers()) {
        if (name_of(key) == name) matches.push_back(key);
    }
    for (const auto& key : u.kitchen.items) {
        if (name_of(key) == name) matches.push_back(key);
    }
    std::sort(matches.begin(), matches.end());
    matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
    if (matches.empty()) throw GoalNotFound(name);
    if (matches.size() > 1) throw AmbiguousGoal(name, matches);
    return matches.front();
}

inline RetrievalResult run_algorithm(const Universe& u, Algorithm algorithm,
                                     const std::string& goal_key, std::size_t depth_ceiling,
                                     std::ostream& err) {
    RetrievalOptions options;
    options.warn = [&err](const std::string& label) {
        err << "warning: motion '" << label << "' has no success rate; scoring 0\n";
    };
    switch (algorithm) {
        case Algorithm::ids:
            return ids_retrieve(u.foon, goal_key, u.kitchen, u.subs, depth_ceiling, options);
        case Algorithm::gbfs_h1:
            return gbfs_retrieve(u.foon, goal_key, u.kitchen, u.subs, Heuristic::motion_rate,
                                 &u.motions, options);
        case Algorithm::gbfs_h2:
            return gbfs_retrieve(u.foon, goal_key, u.kitchen, u.subs, Heuristic::input_count,
                                 nullptr, options);
    }
    throw std::logic_error("unknown algorithm");
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError(path);
    out << content;
    if (!out) throw FileError(path);
}

/// "tree.foon" -> "tree.ids.foon" when several algorithms share one flag.
inline std::string path_for_algorithm(const std::string& path, Algorithm algorithm) {
    std::filesystem::path p(path);
    auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + "." + std::string(algorithm_name(algorithm)) + ext;
}

inline std::string stats_header() { return "goal,algorithm,units_in_tree,units_expanded\n"; }

inline std::string stats_row(const std::string& goal, std::string_view algorithm,
                             const std::string& in_tree, const std::string& expanded) {
    return csv_field(goal) + "," + std::string(algorithm) + "," + in_tree + "," + expanded + "\n";
}

}  // namespace detail

inline int cmd_retrieve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<Algorithm> algorithms;
    if (config.algorithm == "all") {
        algorithms = {Algorithm::ids, Algorithm::gbfs_h1, Algorithm::gbfs_h2};
    } else if (auto a = algorithm_from_name(config.algorithm)) {
        algorithms = {*a};
    } else {
        err << "error: unknown algorithm '" << config.algorithm << "'\n";
        return exit_usage;
    }
    bool needs_motions = std::find(algorithms.begin(), algorithms.end(), Algorithm::gbfs_h1) !=
                         algorithms.end();
    if (needs_motions && !config.motions_path) {
        err << "error: gbfs-h1 requires --motions\n";
        return exit_usage;
    }
    if (config.foon_paths.empty()) {
        err << "error: at least one --foon file is required\n";
        return exit_usage;
    }
    if (config.depth_ceiling < 1) {
        err << "error: --depth-ceiling must be >= 1\n";
        return exit_usage;
    }

    try {
        auto universe = detail::load_inputs(config.foon_paths, config.kitchen_path,
                                            config.motions_path, config.subs_path);
        auto goal_key = detail::resolve_goal(universe, config.goal, config.goal_by_name);

        std::vector<RetrievalResult> results;
        results.reserve(algorithms.size());
        for (auto algorithm : algorithms)
            results.push_back(
                detail::run_algorithm(universe, algorithm, goal_key, config.depth_ceiling, err));

        bool suffixed = algorithms.size() > 1;
        for (const auto& result : results) {
            auto name = algorithm_name(result.tree.algorithm);
            out << name << ": goal=" << goal_key
                << " units_in_tree=" << result.stats.units_in_tree
                << " units_expanded=" << result.stats.units_expanded;
            if (result.tree.algorithm == Algorithm::ids)
                out << " max_depth_reached=" << result.stats.max_depth_reached;
            out << "\n";

            if (config.out_path) {
                auto path = suffixed ? detail::path_for_algorithm(*config.out_path,
                                                                  result.tree.algorithm)
                                     : *config.out_path;
                detail::write_file(path, serialize_subgraph(result.tree.steps));
                out << "wrote task tree: " << path << "\n";
            }
            if (config.dot_path) {
                auto path = suffixed ? detail::path_for_algorithm(*config.dot_path,
                                                                  result.tree.algorithm)
                                     : *config.dot_path;
                detail::write_file(path, export_dot(result.tree));
                out << "wrote dot: " << path << "\n";
            }
        }
        if (config.stats_path) {
            std::string csv = detail::stats_header();
            for (const auto& result : results)
                csv += detail::stats_row(goal_key, algorithm_name(result.tree.algorithm),
                                         std::to_string(result.stats.units_in_tree),
                                         std::to_string(result.stats.units_expanded));
            detail::write_file(*config.stats_path, csv);
            out << "wrote stats: " << *config.stats_path << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return detail::exit_code_for(e);
    }
}

inline int cmd_merge(const MergeConfig& config, std::ostream& out, std::ostream& err) {
    if (config.inputs.empty()) {
        err << "error: at least one input subgraph file is required\n";
        return exit_usage;
    }
    if (config.output.empty()) {
        err << "error: an output path is required\n";
        return exit_usage;
    }
    try {
        std::size_t parsed = 0;
        Foon merged;
        for (const auto& path : config.inputs) {
            auto units = parse_subgraph_file(path);
            parsed += units.size();
            for (const auto& unit : units) merged.add_unit(unit);
        }
        detail::write_file(config.output, serialize_subgraph(merged.units()));
        out << "parsed " << parsed << " units from " << config.inputs.size()
            << " file(s); kept " << merged.size() << " after dedupe\n";
        out << "wrote merged subgraph: " << config.output << "\n";
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return detail::exit_code_for(e);
    }
}

inline int cmd_stats(const StatsConfig& config, std::ostream& out, std::ostream& err) {
    if (config.foon_paths.empty()) {
        err << "error: at least one --foon file is required\n";
        return exit_usage;
    }
    if (!config.motions_path) {
        err << "error: stats runs gbfs-h1 and requires --motions\n";
        return exit_usage;
    }

    constexpr Algorithm kAlgorithms[] = {Algorithm::ids, Algorithm::gbfs_h1, Algorithm::gbfs_h2};
    try {
        auto universe = detail::load_inputs(config.foon_paths, config.kitchen_path,
                                            config.motions_path, config.subs_path);

        std::string csv = detail::stats_header();
        // goal -> one cell per algorithm for the human table
        std::vector<std::pair<std::string, std::vector<std::string>>> table;
        for (const auto& goal_text : config.goals) {
            std::vector<std::string> cells;
            std::string goal_key = goal_text;
            std::optional<std::string> bad_key;
            try {
                goal_key = detail::resolve_goal(universe, goal_text, false);
            } catch (const std::exception& e) {
                bad_key = detail::error_name(e);
            }
            for (auto algorithm : kAlgorithms) {
                std::string cell;
                if (bad_key) {
                    cell = *bad_key;
                    csv += detail::stats_row(goal_key, algorithm_name(algorithm), cell, "-");
                } else {
                    try {
                        auto result = detail::run_algorithm(universe, algorithm, goal_key,
                                                            config.depth_ceiling, err);
                        auto verdict = validate_tree(result.tree, universe.kitchen, universe.subs);
                        if (!verdict.valid) {
                            cell = "InvalidTree";
                            csv += detail::stats_row(goal_key, algorithm_name(algorithm), cell, "-");
                        } else {
                            cell = std::to_string(result.stats.units_in_tree);
                            csv += detail::stats_row(goal_key, algorithm_name(algorithm), cell,
                                                     std::to_string(result.stats.units_expanded));
                        }
                    } catch (const std::exception& e) {
                        cell = detail::error_name(e);
                        csv += detail::stats_row(goal_key, algorithm_name(algorithm), cell, "-");
                    }
                }
                cells.push_back(cell);
            }
            table.emplace_back(goal_key, cells);
        }

        out << csv;
        if (config.stats_path) detail::write_file(*config.stats_path, csv);

        std::size_t goal_width = 4;
        for (const auto& [goal, _] : table) goal_width = std::max(goal_width, goal.size());
        out << "\n" << std::string(goal_width, ' ') << "  ids        gbfs-h1    gbfs-h2\n";
        for (const auto& [goal, cells] : table) {
            out << goal << std::string(goal_width - goal.size(), ' ');
            for (const auto& cell : cells)
                out << "  " << cell << std::string(cell.size() < 9 ? 9 - cell.size() : 0, ' ');
            out << "\n";
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return detail::exit_code_for(e);
    }
}

}  // namespace foon::cli
