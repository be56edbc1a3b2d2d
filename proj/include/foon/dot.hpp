#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "foon/core.hpp"
#include "foon/retrieval.hpp"

namespace foon {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string node_label(const ObjectNode& node) {
    std::string label = normalize_token(node.name);
    auto states = sorted_unique([&] {
        std::vector<std::string> s;
        for (const auto& st : node.states) s.push_back(normalize_token(st));
        return s;
    }());
    if (!states.empty()) {
        label += " (";
        for (std::size_t i = 0; i < states.size(); ++i) {
            if (i) label += ", ";
            label += states[i];
        }
        label += ")";
    }
    return label;
}

}  // namespace detail

/// Renders a task tree as a bipartite DOT digraph: object nodes (ellipses,
/// shared between steps) and one motion node per step (boxes), with edges
/// input -> motion -> output.
inline std::string export_dot(const TaskTree& tree) {
    std::string out = "digraph tasktree {\n";
    out += "  rankdir=LR;\n";

    std::unordered_map<std::string, std::string> object_ids;
    std::string edges;
    auto object_id = [&](const ObjectNode& node) {
        auto key = object_key(node);
        auto it = object_ids.find(key);
        if (it != object_ids.end()) return it->second;
        auto id = "o" + std::to_string(object_ids.size());
        object_ids.emplace(key, id);
        out += "  " + id + " [label=\"" + detail::dot_escape(detail::node_label(node)) +
               "\" shape=ellipse];\n";
        return id;
    };

    for (std::size_t i = 0; i < tree.steps.size(); ++i) {
        const auto& step = tree.steps[i];
        auto motion_id = "m" + std::to_string(i);
        std::string motion_line = "  " + motion_id + " [label=\"" +
                                  detail::dot_escape(detail::normalize_token(step.motion.label)) +
                                  "\" shape=box];\n";
        std::string step_edges;
        for (const auto& node : step.inputs) step_edges += "  " + object_id(node) + " -> " + motion_id + ";\n";
        for (const auto& node : step.outputs) step_edges += "  " + motion_id + " -> " + object_id(node) + ";\n";
        out += motion_line;
        edges += step_edges;
    }
    out += edges;
    out += "}\n";
    return out;
}

}  // namespace foon
