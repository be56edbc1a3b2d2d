#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "foon/cli.hpp"

namespace {

constexpr const char* kExitCodeHelp = R"(Exit codes:
  0  success
  1  usage error
  2  parse error (unreadable or malformed input file)
  3  goal not found
  4  unreachable goal (reported with the blocking object key)
  5  no solution within the depth ceiling
  6  cyclically dependent task tree
  7  ambiguous goal name (--goal-by-name matched several state variants)
)";

std::optional<std::string> opt(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FOON task-tree retrieval: load subgraphs, merge them into a "
                 "universal graph, and extract executable task trees"};
    app.require_subcommand(1);
    app.footer(kExitCodeHelp);

    // retrieve
    auto* retrieve = app.add_subcommand("retrieve", "Retrieve a task tree for a goal");
    foon::cli::RunConfig run;
    std::string run_motions, run_subs, run_out, run_dot, run_stats;
    retrieve->add_option("--foon", run.foon_paths, "Subgraph file (repeatable; merged in order)")
        ->required();
    retrieve->add_option("--kitchen", run.kitchen_path, "Kitchen JSON file")->required();
    retrieve->add_option("--motions", run_motions, "Motion success-rate file (needed by gbfs-h1)");
    retrieve->add_option("--subs", run_subs, "Ingredient substitution map file");
    retrieve->add_option("--goal", run.goal, "Goal object key, e.g. 'ice|cube|'")->required();
    retrieve->add_flag("--goal-by-name", run.goal_by_name,
                       "Treat --goal as a bare object name; errors if several state variants match");
    retrieve->add_option("--algo", run.algorithm, "ids | gbfs-h1 | gbfs-h2 | all")
        ->default_val("ids");
    retrieve->add_option("--depth-ceiling", run.depth_ceiling, "Depth ceiling for ids")
        ->default_val(100);
    retrieve->add_option("--out", run_out, "Write the task tree here (subgraph grammar)");
    retrieve->add_option("--dot", run_dot, "Write a DOT rendering here");
    retrieve->add_option("--stats", run_stats, "Write a stats CSV here");

    // merge
    auto* merge = app.add_subcommand("merge", "Merge subgraph files into one deduplicated file");
    foon::cli::MergeConfig merge_config;
    merge->add_option("inputs", merge_config.inputs, "Subgraph files, merged in order")
        ->required();
    merge->add_option("--out", merge_config.output, "Output path")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "Compare algorithms across goals");
    foon::cli::StatsConfig stats_config;
    std::string stats_motions, stats_subs, stats_out;
    stats->add_option("--foon", stats_config.foon_paths, "Subgraph file (repeatable)")->required();
    stats->add_option("--kitchen", stats_config.kitchen_path, "Kitchen JSON file")->required();
    stats->add_option("--motions", stats_motions, "Motion success-rate file")->required();
    stats->add_option("--subs", stats_subs, "Ingredient substitution map file");
    stats->add_option("--goal", stats_config.goals, "Goal object key (repeatable)");
    stats->add_option("--depth-ceiling", stats_config.depth_ceiling, "Depth ceiling for ids")
        ->default_val(100);
    stats->add_option("--stats", stats_out, "Also write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return foon::cli::exit_usage;
    }

    if (retrieve->parsed()) {
        run.motions_path = opt(run_motions);
        run.subs_path = opt(run_subs);
        run.out_path = opt(run_out);
        run.dot_path = opt(run_dot);
        run.stats_path = opt(run_stats);
        return foon::cli::cmd_retrieve(run, std::cout, std::cerr);
    }
    if (merge->parsed()) return foon::cli::cmd_merge(merge_config, std::cout, std::cerr);
    if (stats->parsed()) {
        stats_config.motions_path = opt(stats_motions);
        stats_config.subs_path = opt(stats_subs);
        stats_config.stats_path = opt(stats_out);
        return foon::cli::cmd_stats(stats_config, std::cout, std::cerr);
    }
    return foon::cli::exit_usage;
}
