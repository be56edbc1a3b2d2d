#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace foon {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n\f\v";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(ws);
    return std::string(s.substr(begin, end - begin + 1));
}

inline std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Trimmed, case-folded form used for all identity decisions.
inline std::string normalize_token(std::string_view s) { return to_lower(trim(s)); }

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace detail

/// One motion label, e.g. "mix" or "pour". Lowercase by convention.
struct MotionLabel {
    std::string label;

    friend bool operator==(const MotionLabel&, const MotionLabel&) = default;
};

/// An object with its state set and, for container-like objects, the
/// ingredients it holds. Identity is the canonical key (see object_key):
/// name and states are case-folded, states deduplicated and order-free,
/// ingredients order-free.
struct ObjectNode {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> ingredients;
};

/// Canonical identity for an object node:
/// lowercased name + "|" + sorted states + "|" + sorted ingredients.
inline std::string object_key(const ObjectNode& node) {
    std::vector<std::string> states;
    states.reserve(node.states.size());
    for (const auto& s : node.states) states.push_back(detail::normalize_token(s));
    states = detail::sorted_unique(std::move(states));

    std::vector<std::string> ingredients;
    ingredients.reserve(node.ingredients.size());
    for (const auto& i : node.ingredients) ingredients.push_back(detail::normalize_token(i));
    std::sort(ingredients.begin(), ingredients.end());

    std::string key = detail::normalize_token(node.name);
    key += '|';
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) key += ',';
        key += states[i];
    }
    key += '|';
    for (std::size_t i = 0; i < ingredients.size(); ++i) {
        if (i) key += ',';
        key += ingredients[i];
    }
    return key;
}

inline bool operator==(const ObjectNode& a, const ObjectNode& b) {
    return object_key(a) == object_key(b);
}

/// The atomic action record: input objects, one motion, output objects.
struct FunctionalUnit {
    std::vector<ObjectNode> inputs;
    MotionLabel motion;
    std::vector<ObjectNode> outputs;
};

inline std::vector<std::string> input_keys(const FunctionalUnit& unit) {
    std::vector<std::string> keys;
    keys.reserve(unit.inputs.size());
    for (const auto& n : unit.inputs) keys.push_back(object_key(n));
    return keys;
}

inline std::vector<std::string> output_keys(const FunctionalUnit& unit) {
    std::vector<std::string> keys;
    keys.reserve(unit.outputs.size());
    for (const auto& n : unit.outputs) keys.push_back(object_key(n));
    return keys;
}

/// Unit identity: sorted input keys + motion + sorted output keys. Two units
/// with the same canonical form are the same unit.
inline std::string canonical_form(const FunctionalUnit& unit) {
    auto in = input_keys(unit);
    auto out = output_keys(unit);
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    std::string form;
    for (const auto& k : in) {
        form += k;
        form += '\x1f';
    }
    form += '\x1e';
    form += detail::normalize_token(unit.motion.label);
    form += '\x1e';
    for (const auto& k : out) {
        form += k;
        form += '\x1f';
    }
    return form;
}

inline bool operator==(const FunctionalUnit& a, const FunctionalUnit& b) {
    return canonical_form(a) == canonical_form(b);
}

/// The merged graph: deduplicated functional units in insertion order plus an
/// adjacency index from object key to the units producing that key. Immutable
/// once loading is done; concurrent readers are safe.
class Foon {
public:
    /// Appends the unit unless its canonical form is already present.
    /// Returns true when the unit was inserted.
    bool add_unit(const FunctionalUnit& unit) {
        auto form = canonical_form(unit);
        if (canon_.contains(form)) return false;
        auto index = static_cast<std::uint32_t>(units_.size());
        canon_.emplace(std::move(form), index);
        units_.push_back(unit);
        // Index each distinct output key once.
        std::unordered_set<std::string> seen;
        for (const auto& node : unit.outputs) {
            auto key = object_key(node);
            if (seen.insert(key).second) producers_[key].push_back(index);
        }
        return true;
    }

    const std::vector<FunctionalUnit>& units() const noexcept { return units_; }
    std::size_t size() const noexcept { return units_.size(); }

    /// Indices of the units producing `key`, in insertion order. Single index
    /// probe; an absent key yields an empty list.
    const std::vector<std::uint32_t>& producer_indices(const std::string& key) const {
        static const std::vector<std::uint32_t> kEmpty;
        auto it = producers_.find(key);
        return it == producers_.end() ? kEmpty : it->second;
    }

    /// The units whose outputs include `key`, in insertion order.
    std::vector<const FunctionalUnit*> candidate_units(const std::string& key) const {
        const auto& indices = producer_indices(key);
        std::vector<const FunctionalUnit*> result;
        result.reserve(indices.size());
        for (auto i : indices) result.push_back(&units_[i]);
        return result;
    }

    const std::unordered_map<std::string, std::vector<std::uint32_t>>& producers() const noexcept {
        return producers_;
    }

private:
    std::vector<FunctionalUnit> units_;
    std::unordered_map<std::string, std::vector<std::uint32_t>> producers_;
    std::unordered_map<std::string, std::uint32_t> canon_;
};

/// Union with dedup by canonical form: a's units keep their order, b's novel
/// units are appended in b's order.
inline Foon merge(const Foon& a, const Foon& b) {
    Foon merged = a;
    for (const auto& unit : b.units()) merged.add_unit(unit);
    return merged;
}

/// The set of object-state combinations available in the environment.
struct KitchenState {
    std::unordered_set<std::string> items;

    bool contains(const std::string& key) const { return items.count(key) > 0; }
};

}  // namespace foon
