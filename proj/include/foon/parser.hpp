#pragma once

// File formats.
//
// Subgraph files are UTF-8 text, one record per line, fields separated by
// single tabs:
//
//   O<TAB>name[<TAB>comma-separated states[<TAB>[comma-separated ingredients]]]
//   M<TAB>label
//   //
//
// Object lines before the M line are the unit's inputs, lines after it are
// outputs; "//" terminates the unit (end of file also finalizes a pending
// unit). Blank lines are ignored. Names, states, and ingredients are trimmed
// and case-folded; '|', '[', ']', ',' and control characters are reserved.
// Parsing is all-or-nothing: the first malformed line aborts the whole file.
//
// Kitchen files are JSON: a list of {"label": ..., "states": [...]} entries
// with an optional "ingredients" list.
//
// Motion success-rate files hold one "label<whitespace>rate" record per line;
// '#' starts a comment line.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "foon/core.hpp"
#include "foon/errors.hpp"

#include "json.hpp"

namespace foon {

/// Success rate per motion label, each in [0, 1]. Labels are lowercase.
struct MotionSuccessTable {
    std::unordered_map<std::string, double> rates;

    std::optional<double> rate(const std::string& label) const {
        auto it = rates.find(label);
        if (it == rates.end()) return std::nullopt;
        return it->second;
    }
};

namespace detail {

inline constexpr std::string_view kReserved = "|[],";

inline bool has_reserved_char(std::string_view token) {
    for (char c : token) {
        if (kReserved.find(c) != std::string_view::npos) return true;
        if (static_cast<unsigned char>(c) < 0x20) return true;
    }
    return false;
}

inline std::string checked_token(std::string_view raw, const std::string& source,
                                 std::size_t line) {
    auto token = normalize_token(raw);
    if (has_reserved_char(token))
        throw MalformedLine(source, line, "reserved character in token '" + token + "'");
    return token;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            return parts;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline std::vector<std::string> csv_tokens(std::string_view field, const std::string& source,
                                           std::size_t line) {
    std::vector<std::string> tokens;
    for (const auto& piece : split(field, ',')) {
        if (trim(piece).empty()) continue;
        tokens.push_back(checked_token(piece, source, line));
    }
    return tokens;
}

inline void for_each_line(std::string_view text,
                          const std::function<void(std::size_t, std::string_view)>& fn) {
    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        auto line = text.substr(start, pos == std::string_view::npos ? text.size() - start
                                                                     : pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++lineno;
        if (!(pos == std::string_view::npos && line.empty())) fn(lineno, line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError(path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace detail

/// Parses subgraph text into functional units in file order.
inline std::vector<FunctionalUnit> parse_subgraph(std::string_view text,
                                                  const std::string& source = "<subgraph>") {
    std::vector<FunctionalUnit> units;
    std::vector<ObjectNode> inputs;
    std::vector<ObjectNode> outputs;
    std::optional<MotionLabel> motion;
    std::size_t last_line = 0;

    auto finalize = [&](std::size_t line) {
        if (!motion && inputs.empty() && outputs.empty()) return;
        if (!motion) throw MalformedLine(source, line, "unit has no motion");
        if (inputs.empty()) throw MalformedLine(source, line, "unit has no input objects");
        if (outputs.empty()) throw MalformedLine(source, line, "unit has no output objects");
        units.push_back({std::move(inputs), *motion, std::move(outputs)});
        inputs.clear();
        outputs.clear();
        motion.reset();
    };

    detail::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        last_line = lineno;
        if (detail::trim(line).empty()) return;
        if (detail::trim(line) == "//") {
            finalize(lineno);
            return;
        }
        auto fields = detail::split(line, '\t');
        auto tag = detail::trim(fields[0]);
        if (tag == "O") {
            if (fields.size() < 2 || detail::trim(fields[1]).empty())
                throw MalformedLine(source, lineno, "object line needs a name");
            if (fields.size() > 4)
                throw MalformedLine(source, lineno, "too many fields on object line");
            ObjectNode node;
            node.name = detail::checked_token(fields[1], source, lineno);
            if (fields.size() >= 3)
                node.states = detail::sorted_unique(detail::csv_tokens(fields[2], source, lineno));
            if (fields.size() >= 4 && !detail::trim(fields[3]).empty()) {
                auto ing = detail::trim(fields[3]);
                if (ing.size() < 2 || ing.front() != '[' || ing.back() != ']')
                    throw MalformedLine(source, lineno, "ingredient list must be bracketed");
                node.ingredients =
                    detail::csv_tokens(ing.substr(1, ing.size() - 2), source, lineno);
            }
            (motion ? outputs : inputs).push_back(std::move(node));
        } else if (tag == "M") {
            if (motion) throw MalformedLine(source, lineno, "duplicate motion line");
            if (fields.size() < 2 || detail::trim(fields[1]).empty())
                throw MalformedLine(source, lineno, "motion line needs a label");
            if (fields.size() > 2)
                throw MalformedLine(source, lineno, "too many fields on motion line");
            motion = MotionLabel{detail::checked_token(fields[1], source, lineno)};
        } else {
            throw MalformedLine(source, lineno, "unknown line tag '" + tag + "'");
        }
    });
    finalize(last_line + 1);
    return units;
}

inline std::vector<FunctionalUnit> parse_subgraph_file(const std::filesystem::path& path) {
    return parse_subgraph(detail::read_file(path), path.string());
}

/// Parses a kitchen document into the set of available object keys.
/// Duplicate entries collapse.
inline KitchenState parse_kitchen(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedDocument(e.what());
    }
    if (!doc.is_array()) throw MalformedDocument("top level must be a list of entries");

    KitchenState kitchen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& entry = doc[i];
        auto where = "entry " + std::to_string(i);
        if (!entry.is_object()) throw MalformedDocument(where + " must be an object");
        if (!entry.contains("label") || !entry["label"].is_string())
            throw MalformedDocument(where + ": missing label field");
        if (!entry.contains("states") || !entry["states"].is_array())
            throw MalformedDocument(where + ": states must be a list");

        ObjectNode node;
        node.name = detail::normalize_token(entry["label"].get<std::string>());
        if (node.name.empty()) throw MalformedDocument(where + ": empty label");
        if (detail::has_reserved_char(node.name))
            throw MalformedDocument(where + ": reserved character in label");
        for (const auto& s : entry["states"]) {
            if (!s.is_string()) throw MalformedDocument(where + ": states must be strings");
            auto token = detail::normalize_token(s.get<std::string>());
            if (token.empty()) continue;
            if (detail::has_reserved_char(token))
                throw MalformedDocument(where + ": reserved character in state");
            node.states.push_back(std::move(token));
        }
        if (entry.contains("ingredients")) {
            if (!entry["ingredients"].is_array())
                throw MalformedDocument(where + ": ingredients must be a list");
            for (const auto& s : entry["ingredients"]) {
                if (!s.is_string())
                    throw MalformedDocument(where + ": ingredients must be strings");
                auto token = detail::normalize_token(s.get<std::string>());
                if (token.empty()) continue;
                if (detail::has_reserved_char(token))
                    throw MalformedDocument(where + ": reserved character in ingredient");
                node.ingredients.push_back(std::move(token));
            }
        }
        kitchen.items.insert(object_key(node));
    }
    return kitchen;
}

inline KitchenState parse_kitchen_file(const std::filesystem::path& path) {
    return parse_kitchen(detail::read_file(path));
}

/// Parses a motion success-rate file. Labels are lowercased and must be
/// unique; rates must lie in [0, 1].
inline MotionSuccessTable parse_motions(std::string_view text,
                                        const std::string& source = "<motions>") {
    MotionSuccessTable table;
    detail::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto trimmed = detail::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') return;

        std::istringstream fields(trimmed);
        std::string label_raw, rate_raw, extra;
        fields >> label_raw >> rate_raw;
        if (rate_raw.empty() || (fields >> extra))
            throw MalformedLine(source, lineno, "expected 'label rate'");

        auto label = detail::checked_token(label_raw, source, lineno);
        double rate = 0.0;
        auto [end, ec] = std::from_chars(rate_raw.data(), rate_raw.data() + rate_raw.size(), rate);
        if (ec != std::errc{} || end != rate_raw.data() + rate_raw.size())
            throw MalformedLine(source, lineno, "rate '" + rate_raw + "' is not a number");
        if (rate < 0.0 || rate > 1.0) throw RateOutOfRange(source, lineno, label, rate);
        if (!table.rates.emplace(label, rate).second)
            throw DuplicateLabel(source, lineno, label);
    });
    return table;
}

inline MotionSuccessTable parse_motions_file(const std::filesystem::path& path) {
    return parse_motions(detail::read_file(path), path.string());
}

/// Serializes units to the subgraph grammar in canonical form: tokens
/// case-folded, states sorted. parse_subgraph(serialize_subgraph(u)) is
/// canonically equal to u, and serialization is a fixpoint after one round.
inline std::string serialize_subgraph(std::span<const FunctionalUnit> units) {
    std::string out;
    auto write_node = [&](const ObjectNode& node) {
        out += "O\t";
        out += detail::normalize_token(node.name);
        std::vector<std::string> states;
        for (const auto& s : node.states) states.push_back(detail::normalize_token(s));
        states = detail::sorted_unique(std::move(states));
        if (!states.empty() || !node.ingredients.empty()) {
            out += '\t';
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (i) out += ',';
                out += states[i];
            }
        }
        if (!node.ingredients.empty()) {
            out += "\t[";
            for (std::size_t i = 0; i < node.ingredients.size(); ++i) {
                if (i) out += ',';
                out += detail::normalize_token(node.ingredients[i]);
            }
            out += ']';
        }
        out += '\n';
    };
    for (const auto& unit : units) {
        for (const auto& node : unit.inputs) write_node(node);
        out += "M\t";
        out += detail::normalize_token(unit.motion.label);
        out += '\n';
        for (const auto& node : unit.outputs) write_node(node);
        out += "//\n";
    }
    return out;
}

inline std::string serialize_subgraph(const std::vector<FunctionalUnit>& units) {
    return serialize_subgraph(std::span<const FunctionalUnit>(units));
}

}  // namespace foon
