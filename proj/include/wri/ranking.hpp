#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "wri/error.hpp"
#include "wri/index.hpp"

namespace wri {

struct RankedEntry {
    std::size_t rank = 0; // 1-based
    std::string slug;
    std::string name;
    double value = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct Ranking {
    std::vector<RankedEntry> entries;
    std::string label;
};

struct ScoredEntity {
    std::string slug;
    std::string name;
    double value = 0.0;
};

// Descending by value; exact ties broken by slug ascending so rankings are
// reproducible.
inline Ranking rank(std::vector<ScoredEntity> items, std::string label = {}) {
    if (items.empty()) throw EmptyInputError("nothing to rank");
    std::sort(items.begin(), items.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.slug < b.slug;
    });
    Ranking out;
    out.label = std::move(label);
    out.entries.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        out.entries.push_back(RankedEntry{i + 1, items[i].slug, items[i].name, items[i].value});
    return out;
}

inline Ranking rank(const std::vector<IndexResult>& results, std::string label = {}) {
    std::vector<ScoredEntity> items;
    items.reserve(results.size());
    for (const auto& r : results) items.push_back(ScoredEntity{r.slug, r.name, r.final_index});
    return rank(std::move(items), std::move(label));
}

inline Ranking top_k(const Ranking& r, std::size_t k) {
    if (k < 1 || k > r.entries.size())
        throw KOutOfRangeError("k=" + std::to_string(k) + " outside [1," +
                               std::to_string(r.entries.size()) + "]");
    Ranking out;
    out.label = r.label.empty() ? "top" : r.label + " top";
    out.entries.assign(r.entries.begin(), r.entries.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

// Last k entries, worst first, matching the print order used for
// least-reputable tables. Original rank numbers are kept.
inline Ranking bottom_k(const Ranking& r, std::size_t k) {
    if (k < 1 || k > r.entries.size())
        throw KOutOfRangeError("k=" + std::to_string(k) + " outside [1," +
                               std::to_string(r.entries.size()) + "]");
    Ranking out;
    out.label = r.label.empty() ? "bottom" : r.label + " bottom";
    out.entries.assign(r.entries.end() - static_cast<std::ptrdiff_t>(k), r.entries.end());
    std::reverse(out.entries.begin(), out.entries.end());
    return out;
}

// Kendall tau over two orderings of the same slug universe, by exhaustive
// pair enumeration. Rank positions are distinct, so no tie correction is
// needed: tau = (concordant - discordant) / C(n,2).
inline double kendall_tau(const Ranking& a, const Ranking& b) {
    if (a.entries.size() != b.entries.size())
        throw MismatchedUniverseError("rankings differ in size");

    std::map<std::string, std::size_t> pos_b;
    for (const auto& e : b.entries) pos_b.emplace(e.slug, e.rank);

    std::vector<std::size_t> b_order;
    b_order.reserve(a.entries.size());
    for (const auto& e : a.entries) {
        auto it = pos_b.find(e.slug);
        if (it == pos_b.end())
            throw MismatchedUniverseError("slug only present in one ranking: " + e.slug);
        b_order.push_back(it->second);
    }

    const std::size_t n = b_order.size();
    if (n < 2) return 1.0;

    long long concordant = 0;
    long long discordant = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (b_order[i] < b_order[j]) ++concordant;
            else ++discordant;
        }
    }
    const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(concordant - discordant) / total;
}

} // namespace wri
