#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "foon/foon.hpp"

namespace testutil {

inline std::filesystem::path fixture_dir() { return std::filesystem::path(FOON_FIXTURE_DIR); }

inline std::string fixture(const std::string& name) { return (fixture_dir() / name).string(); }

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

// Minimal RFC-4180 field splitter; the manifest has no embedded newlines.
inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

struct Manifest {
    std::map<std::string, std::size_t> file_units;
    struct UnitRow {
        std::size_t index;
        std::string inputs, motion, outputs;
    };
    std::vector<UnitRow> units;  // corpus file only
    std::size_t kitchen_entries = 0;
    std::vector<std::string> kitchen_keys;
    std::size_t merged_count = 0;
    struct AvailRow {
        std::string key, verdict, substitute;
    };
    std::vector<AvailRow> avail;
    std::vector<std::string> goals;                      // manifest order
    std::map<std::string, bool> solvable;                // goal -> has a valid tree
    std::map<std::string, std::size_t> fork_h1, fork_h2; // fork key -> chosen unit index
    struct AlgoRow {
        std::string goal, algo;
        std::size_t size;
        std::vector<std::uint32_t> indices;
    };
    std::vector<AlgoRow> algo_rows;
    std::map<std::string, std::set<std::vector<std::uint32_t>>> valid_sets;
    std::map<std::string, std::size_t> ids_depth;
    std::map<std::pair<std::string, std::string>, std::string> errors;  // (goal, algo)
};

inline std::vector<std::uint32_t> parse_index_list(const std::string& cell) {
    std::vector<std::uint32_t> indices;
    std::istringstream in(cell);
    std::string piece;
    while (std::getline(in, piece, ';'))
        if (!piece.empty()) indices.push_back(static_cast<std::uint32_t>(std::stoul(piece)));
    return indices;
}

inline const Manifest& manifest() {
    static const Manifest m = [] {
        Manifest m;
        std::istringstream in(read_file(fixture_dir() / "manifest.csv"));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto f = split_csv(line);
            const auto& tag = f[0];
            if (tag == "file") {
                m.file_units[f[1]] = std::stoul(f[2]);
            } else if (tag == "unit") {
                m.units.push_back({std::stoul(f[2]), f[3], f[4], f[5]});
            } else if (tag == "kitchen") {
                m.kitchen_entries = std::stoul(f[2]);
            } else if (tag == "kitchenkey") {
                m.kitchen_keys.push_back(f[1]);
            } else if (tag == "mergedcount") {
                m.merged_count = std::stoul(f[3]);
            } else if (tag == "avail") {
                m.avail.push_back({f[1], f[2], f[3]});
            } else if (tag == "goal") {
                m.goals.push_back(f[1]);
                m.solvable[f[1]] = f[2] == "1";
            } else if (tag == "fork") {
                (f[2] == "h1" ? m.fork_h1 : m.fork_h2)[f[1]] = std::stoul(f[3]);
            } else if (tag == "algo") {
                m.algo_rows.push_back({f[1], f[2], std::stoul(f[3]), parse_index_list(f[4])});
            } else if (tag == "validset") {
                m.valid_sets[f[1]].insert(parse_index_list(f[2]));
            } else if (tag == "idsdepth") {
                m.ids_depth[f[1]] = std::stoul(f[2]);
            } else if (tag == "error") {
                m.errors[{f[1], f[2]}] = f[3];
            }
        }
        return m;
    }();
    return m;
}

struct Universe {
    foon::Foon foon;
    foon::KitchenState kitchen;
    foon::MotionSuccessTable motions;
    foon::SubstitutionMap subs;
    std::vector<foon::FunctionalUnit> corpus_units;  // corpus file order
};

inline const Universe& universe() {
    static const Universe u = [] {
        Universe u;
        u.corpus_units = foon::parse_subgraph_file(fixture("recipes.foon"));
        for (const auto& unit : u.corpus_units) u.foon.add_unit(unit);
        u.kitchen = foon::parse_kitchen_file(fixture("kitchen.json"));
        u.motions = foon::parse_motions_file(fixture("motions.txt"));
        u.subs = foon::parse_substitutions_file(fixture("substitutions.txt"));
        return u;
    }();
    return u;
}

/// Corpus-order indices of the tree's units, sorted, for manifest comparison.
inline std::vector<std::uint32_t> tree_indices(const std::vector<foon::FunctionalUnit>& steps) {
    std::unordered_map<std::string, std::uint32_t> by_form;
    const auto& corpus = universe().corpus_units;
    for (std::uint32_t i = 0; i < corpus.size(); ++i)
        by_form[foon::canonical_form(corpus[i])] = i;
    std::vector<std::uint32_t> indices;
    for (const auto& step : steps) {
        auto it = by_form.find(foon::canonical_form(step));
        REQUIRE(it != by_form.end());
        indices.push_back(it->second);
    }
    std::sort(indices.begin(), indices.end());
    return indices;
}

inline std::string join_sorted(std::vector<std::string> keys) {
    std::sort(keys.begin(), keys.end());
    std::string out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) out += '&';
        out += keys[i];
    }
    return out;
}

// --- random well-formed subgraph files -------------------------------------

inline std::string random_token(std::mt19937& rng) {
    static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(letters.size()) - 1);
    std::string token;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (i > 0 && i + 1 < n && rng() % 7 == 0)
            token += ' ';  // inner spaces are legal in names
        token += letters[pick(rng)];
    }
    return token;
}

inline std::string maybe_shout(std::string s, std::mt19937& rng) {
    for (auto& c : s)
        if (rng() % 4 == 0) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

inline std::string random_object_line(std::mt19937& rng) {
    std::string line = "O\t" + maybe_shout(random_token(rng), rng);
    std::uniform_int_distribution<int> nstates(0, 3);
    int states = nstates(rng);
    bool ingredients = rng() % 4 == 0;
    if (states > 0 || ingredients) {
        line += '\t';
        for (int i = 0; i < states; ++i) {
            if (i) line += ',';
            if (rng() % 3 == 0) line += ' ';
            line += maybe_shout(random_token(rng), rng);
            if (rng() % 3 == 0) line += ' ';
        }
    }
    if (ingredients) {
        line += "\t[";
        int n = 1 + static_cast<int>(rng() % 2);
        for (int i = 0; i < n; ++i) {
            if (i) line += ',';
            line += random_token(rng);
        }
        line += ']';
    }
    return line;
}

inline std::string random_subgraph_text(std::mt19937& rng) {
    std::uniform_int_distribution<int> nunits(1, 6);
    std::uniform_int_distribution<int> nnodes(1, 3);
    std::string text;
    int units = nunits(rng);
    for (int u = 0; u < units; ++u) {
        int inputs = nnodes(rng);
        for (int i = 0; i < inputs; ++i) text += random_object_line(rng) + "\n";
        text += "M\t" + maybe_shout(random_token(rng), rng) + "\n";
        int outputs = nnodes(rng);
        for (int i = 0; i < outputs; ++i) text += random_object_line(rng) + "\n";
        text += "//\n";
        if (rng() % 3 == 0) text += "\n";
    }
    return text;
}

inline bool canonically_equal(const std::vector<foon::FunctionalUnit>& a,
                              const std::vector<foon::FunctionalUnit>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (foon::canonical_form(a[i]) != foon::canonical_form(b[i])) return false;
    return true;
}

// --- DOT structure checks ---------------------------------------------------

struct DotSummary {
    std::vector<std::string> node_ids;
    std::size_t edges = 0;
    bool well_formed = false;
    bool unique_ids = false;
};

inline DotSummary check_dot(const std::string& text) {
    DotSummary summary;
    std::istringstream in(text);
    std::string line;
    bool saw_open = false, saw_close = false;
    std::set<std::string> declared;
    std::vector<std::pair<std::string, std::string>> edges;
    while (std::getline(in, line)) {
        if (line.rfind("digraph", 0) == 0 && line.find('{') != std::string::npos) {
            saw_open = true;
            continue;
        }
        if (line == "}") {
            saw_close = true;
            continue;
        }
        auto arrow = line.find(" -> ");
        if (arrow != std::string::npos) {
            auto from = line.substr(2, arrow - 2);
            auto to = line.substr(arrow + 4);
            if (!to.empty() && to.back() == ';') to.pop_back();
            edges.emplace_back(from, to);
            continue;
        }
        auto bracket = line.find(" [");
        if (bracket != std::string::npos && line.rfind("  ", 0) == 0) {
            auto id = line.substr(2, bracket - 2);
            summary.node_ids.push_back(id);
            declared.insert(id);
        }
    }
    summary.edges = edges.size();
    summary.unique_ids = declared.size() == summary.node_ids.size();
    summary.well_formed = saw_open && saw_close;
    for (const auto& [from, to] : edges)
        if (!declared.count(from) || !declared.count(to)) summary.well_formed = false;
    return summary;
}

// --- subprocess helper for the installed CLI --------------------------------

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

inline CommandResult run_cli(const std::string& args) {
    auto out_path = std::filesystem::temp_directory_path() /
                    ("foon_cli_out_" + std::to_string(::getpid()) + ".txt");
    std::string command = std::string(FOON_CLI_PATH) + " " + args + " > " + out_path.string() +
                          " 2>&1";
    int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(out_path);
    std::filesystem::remove(out_path);
    return result;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testutil
