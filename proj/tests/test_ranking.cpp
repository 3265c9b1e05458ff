#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wri/fixture.hpp"
#include "wri/ranking.hpp"

using namespace wri;
using Catch::Matchers::WithinAbs;

TEST_CASE("rank orders descending with slug tie-break") {
    auto r = rank(std::vector<ScoredEntity>{{"a", "A", 0.9}, {"b", "B", 0.1}});
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].rank == 1);
    CHECK(r.entries[0].slug == "a");
    CHECK(r.entries[1].rank == 2);
    CHECK(r.entries[1].slug == "b");

    auto tied = rank(std::vector<ScoredEntity>{{"b", "B", 0.5}, {"a", "A", 0.5}});
    CHECK(tied.entries[0].slug == "a");
    CHECK(tied.entries[1].slug == "b");
    CHECK(tied.entries[0].rank == 1);
    CHECK(tied.entries[1].rank == 2);
}

TEST_CASE("rank is a permutation of its input") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ScoredEntity> items;
    for (int i = 0; i < 40; ++i)
        items.push_back({"slug-" + std::to_string(i), "Name " + std::to_string(i), unit(rng)});
    auto r = rank(items);
    REQUIRE(r.entries.size() == items.size());
    std::set<std::string> seen;
    for (const auto& e : r.entries) seen.insert(e.slug);
    CHECK(seen.size() == items.size());
    for (std::size_t i = 1; i < r.entries.size(); ++i) {
        CHECK(r.entries[i - 1].value >= r.entries[i].value);
        CHECK(r.entries[i].rank == i + 1);
    }
}

TEST_CASE("fixture ranking reproduces the published top table") {
    auto r = rank(fixture_entities(), "fixture");
    REQUIRE(r.entries.size() == 170);
    CHECK(r.entries[0].name == "Anadolu Üniversitesi");
    CHECK(r.entries[0].value == 0.449508);

    const std::vector<std::pair<std::string, double>> expected_top{
        {"Anadolu", 0.449508},  {"İstanbul", 0.444084},      {"Gazi", 0.443798},
        {"Bilkent", 0.431946},  {"Sakarya", 0.42942},        {"Boğaziçi", 0.428301},
        {"Hacettepe", 0.411034}, {"Ankara", 0.398226},       {"Yıldız Teknik", 0.397495},
        {"Dokuz Eylül", 0.386229}};
    auto top = top_k(r, 10);
    REQUIRE(top.entries.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(short_display_name(top.entries[i].name) == expected_top[i].first);
        CHECK(top.entries[i].value == expected_top[i].second);
    }
}

TEST_CASE("fixture ranking reproduces the published bottom table, worst first") {
    auto r = rank(fixture_entities(), "fixture");
    const std::vector<std::pair<std::string, double>> expected_bottom{
        {"Deniz Harp Okulu", 0.150473}, {"Kara Harp Okulu", 0.151046}, {"Karatay", 0.188876},
        {"Ankara Bilge", 0.19034},      {"Karabük", 0.196542},         {"Tunceli", 0.197094},
        {"Şırnak", 0.197622},           {"K. Mehmetbey", 0.198129},    {"Avrasya", 0.200475},
        {"Ağrı İ. Çeçen", 0.205266}};
    auto bottom = bottom_k(r, 10);
    REQUIRE(bottom.entries.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(short_display_name(bottom.entries[i].name) == expected_bottom[i].first);
        CHECK(bottom.entries[i].value == expected_bottom[i].second);
    }
}

TEST_CASE("top_k and bottom_k bounds and partition") {
    auto r = rank(std::vector<ScoredEntity>{
        {"a", "A", 0.1}, {"b", "B", 0.2}, {"c", "C", 0.3}, {"d", "D", 0.4}, {"e", "E", 0.5}});

    CHECK_THROWS_AS(top_k(r, 0), KOutOfRangeError);
    CHECK_THROWS_AS(top_k(r, 6), KOutOfRangeError);
    CHECK_THROWS_AS(bottom_k(r, 0), KOutOfRangeError);

    auto full = top_k(r, 5);
    CHECK(full.entries == r.entries);

    auto top = top_k(r, 2);
    auto bottom = bottom_k(r, 3);
    std::set<std::string> all;
    for (const auto& e : top.entries) all.insert(e.slug);
    for (const auto& e : bottom.entries) all.insert(e.slug);
    CHECK(all.size() == 5);

    // bottom is printed worst-first and keeps original rank numbers
    CHECK(bottom.entries[0].slug == "a");
    CHECK(bottom.entries[0].rank == 5);
}

TEST_CASE("kendall_tau") {
    auto r = rank(std::vector<ScoredEntity>{
        {"a", "A", 0.4}, {"b", "B", 0.3}, {"c", "C", 0.2}, {"d", "D", 0.1}});

    SECTION("identity gives exactly 1") { CHECK(kendall_tau(r, r) == 1.0); }

    SECTION("full reversal gives exactly -1") {
        auto reversed = rank(std::vector<ScoredEntity>{
            {"a", "A", 0.1}, {"b", "B", 0.2}, {"c", "C", 0.3}, {"d", "D", 0.4}});
        CHECK(kendall_tau(r, reversed) == -1.0);
    }

    SECTION("one discordant pair out of six gives 2/3") {
        // b and a swap; all other 5 pairs stay concordant
        auto swapped = rank(std::vector<ScoredEntity>{
            {"a", "A", 0.3}, {"b", "B", 0.4}, {"c", "C", 0.2}, {"d", "D", 0.1}});
        CHECK_THAT(kendall_tau(r, swapped), WithinAbs((5.0 - 1.0) / 6.0, 1e-15));
    }

    SECTION("symmetry") {
        auto other = rank(std::vector<ScoredEntity>{
            {"a", "A", 0.2}, {"b", "B", 0.4}, {"c", "C", 0.1}, {"d", "D", 0.3}});
        CHECK(kendall_tau(r, other) == kendall_tau(other, r));
    }

    SECTION("mismatched universes are rejected") {
        auto other = rank(std::vector<ScoredEntity>{
            {"a", "A", 0.2}, {"b", "B", 0.4}, {"c", "C", 0.1}, {"x", "X", 0.3}});
        CHECK_THROWS_AS(kendall_tau(r, other), MismatchedUniverseError);
        auto smaller = rank(std::vector<ScoredEntity>{{"a", "A", 0.2}});
        CHECK_THROWS_AS(kendall_tau(r, smaller), MismatchedUniverseError);
    }
}

TEST_CASE("ranking is invariant under strictly increasing transforms") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<ScoredEntity> items;
        std::map<std::string, double> values;
        for (int i = 0; i < 12; ++i) {
            double v = unit(rng);
            items.push_back({"s" + std::to_string(i), "S" + std::to_string(i), v});
            values["s" + std::to_string(i)] = v;
        }
        auto base = rank(items);

        std::vector<ScoredEntity> affine = items;
        for (auto& it : affine) it.value = 2.0 * it.value + 1.0;
        auto transformed = rank(affine);

        std::vector<ScoredEntity> rescaled = items;
        auto fr = final_rescale(values);
        for (auto& it : rescaled) it.value = fr.at(it.slug);
        auto rescaled_rank = rank(rescaled);

        for (std::size_t i = 0; i < base.entries.size(); ++i) {
            CHECK(base.entries[i].slug == transformed.entries[i].slug);
            CHECK(base.entries[i].slug == rescaled_rank.entries[i].slug);
        }
        CHECK(kendall_tau(base, transformed) == 1.0);
        CHECK(kendall_tau(base, rescaled_rank) == 1.0);
    }
}
