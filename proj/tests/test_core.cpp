#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <unordered_set>

#include "foon/core.hpp"
#include "foon/parser.hpp"
#include "testutil.hpp"

using namespace foon;

TEST_CASE("object_key canonicalizes name, states, and ingredients") {
    CHECK(object_key({"egg", {"raw"}, {}}) == "egg|raw|");
    CHECK(object_key({"Egg", {"whole", "raw"}, {}}) == "egg|raw,whole|");
    CHECK(object_key({"bowl", {}, {"egg", "oil", "salt"}}) == "bowl||egg,oil,salt");

    SECTION("states deduplicate, everything trims") {
        CHECK(object_key({"  Egg ", {"raw", "RAW ", "raw"}, {}}) == "egg|raw|");
        CHECK(object_key({"bowl", {}, {"oil", "egg"}}) == "bowl||egg,oil");
    }
}

TEST_CASE("object_key is invariant under permutation and case, injective otherwise") {
    std::mt19937 rng(20240817);
    for (int round = 0; round < 200; ++round) {
        ObjectNode node{testutil::random_token(rng),
                        {testutil::random_token(rng), testutil::random_token(rng)},
                        {testutil::random_token(rng)}};
        ObjectNode shuffled{testutil::maybe_shout(node.name, rng),
                            {node.states[1], node.states[0]},
                            node.ingredients};
        CHECK(object_key(node) == object_key(shuffled));

        // A genuinely different state set must change the key.
        ObjectNode other = node;
        other.states.push_back(node.states[0] + "x");
        CHECK(object_key(node) != object_key(other));
    }
}

TEST_CASE("add_unit deduplicates by canonical form and indexes outputs") {
    Foon graph;
    FunctionalUnit crack{{{"egg", {"raw"}, {}}}, {"crack"}, {{"egg", {"cracked"}, {}}}};
    REQUIRE(graph.add_unit(crack));
    CHECK_FALSE(graph.add_unit(crack));
    CHECK(graph.size() == 1);

    // Same unit spelled differently is still the same unit.
    FunctionalUnit shouted{{{"EGG ", {"Raw"}, {}}}, {"CRACK"}, {{"Egg", {"cracked"}, {}}}};
    CHECK_FALSE(graph.add_unit(shouted));

    const auto& indices = graph.producer_indices("egg|cracked|");
    REQUIRE(indices.size() == 1);
    CHECK(indices[0] == 0);
}

TEST_CASE("corpus loads with every unit kept and every output key resolvable") {
    const auto& u = testutil::universe();
    CHECK(u.foon.size() == testutil::manifest().file_units.at("recipes.foon"));

    std::size_t previous = 0;
    Foon rebuilt;
    for (const auto& unit : u.corpus_units) {
        rebuilt.add_unit(unit);
        CHECK(rebuilt.size() >= previous);  // growth is monotone
        previous = rebuilt.size();
    }

    for (const auto& unit : u.foon.units()) {
        for (const auto& key : output_keys(unit)) {
            CHECK_FALSE(u.foon.candidate_units(key).empty());
        }
    }
}

TEST_CASE("candidate_units matches a brute-force scan for every key") {
    const auto& u = testutil::universe();

    CHECK(u.foon.candidate_units("nothing|produces,this|").empty());

    auto candidates = u.foon.candidate_units("scrambled egg|cooked|");
    REQUIRE(candidates.size() == 2);  // two recipes, file order
    CHECK(candidates[0]->inputs.size() == 4);
    CHECK(candidates[1]->inputs.size() == 3);

    // Exhaustive comparison against a scan over all units' outputs.
    std::set<std::string> keys;
    for (const auto& unit : u.foon.units()) {
        for (const auto& key : input_keys(unit)) keys.insert(key);
        for (const auto& key : output_keys(unit)) keys.insert(key);
    }
    keys.insert("absent|key|");
    for (const auto& key : keys) {
        std::vector<const FunctionalUnit*> brute;
        for (const auto& unit : u.foon.units()) {
            auto outs = output_keys(unit);
            if (std::find(outs.begin(), outs.end(), key) != outs.end()) brute.push_back(&unit);
        }
        CHECK(u.foon.candidate_units(key) == brute);
    }
}

TEST_CASE("merge dedupes by canonical form and keeps left-biased order") {
    auto a_units = parse_subgraph_file(testutil::fixture("merge_a.foon"));
    auto b_units = parse_subgraph_file(testutil::fixture("merge_b.foon"));
    Foon a, b;
    for (const auto& unit : a_units) a.add_unit(unit);
    for (const auto& unit : b_units) b.add_unit(unit);

    SECTION("identity and idempotence") {
        Foon empty;
        CHECK(testutil::canonically_equal(merge(a, empty).units(), a.units()));
        CHECK(testutil::canonically_equal(merge(empty, a).units(), a.units()));
        CHECK(testutil::canonically_equal(merge(a, a).units(), a.units()));
    }

    SECTION("two 6-unit files sharing 2 units merge to 10") {
        auto merged = merge(a, b);
        CHECK(merged.size() == testutil::manifest().merged_count);

        // a's units come first, in a's order.
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(canonical_form(merged.units()[i]) == canonical_form(a.units()[i]));

        // b's novel units follow in b's order.
        std::vector<std::string> novel;
        std::unordered_set<std::string> in_a;
        for (const auto& unit : a.units()) in_a.insert(canonical_form(unit));
        for (const auto& unit : b.units())
            if (!in_a.count(canonical_form(unit))) novel.push_back(canonical_form(unit));
        REQUIRE(merged.size() == a.size() + novel.size());
        for (std::size_t i = 0; i < novel.size(); ++i)
            CHECK(canonical_form(merged.units()[a.size() + i]) == novel[i]);

        // producers stay consistent after the rebuild.
        for (const auto& unit : merged.units())
            for (const auto& key : output_keys(unit)) {
                auto cands = merged.candidate_units(key);
                CHECK(std::find_if(cands.begin(), cands.end(), [&](const FunctionalUnit* c) {
                          return canonical_form(*c) == canonical_form(unit);
                      }) != cands.end());
            }
    }
}

TEST_CASE("kitchen state has set semantics") {
    KitchenState kitchen;
    kitchen.items.insert("egg|raw|");
    kitchen.items.insert("egg|raw|");
    CHECK(kitchen.items.size() == 1);
    CHECK(kitchen.contains("egg|raw|"));
    CHECK_FALSE(kitchen.contains("egg|cooked|"));
}
