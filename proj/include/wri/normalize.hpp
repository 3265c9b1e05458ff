#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "wri/error.hpp"
#include "wri/indicators.hpp"

namespace wri {

// One indicator series rescaled onto [0,1]. A constant input series is
// degenerate: every output is 0 and the flag is set, so the series cannot
// contribute anything downstream.
struct NormalizedSeries {
    std::string indicator_id;
    std::map<std::string, double> values; // slug -> [0,1]
    double source_min = 0.0;
    double source_max = 0.0;
    bool degenerate = false;
};

// A normalized series after polarity signing: positive indicators keep their
// [0,1] values, negative ones are mirrored into [-1,0].
struct SignedSeries {
    std::string indicator_id;
    Polarity polarity = Polarity::Positive;
    std::map<std::string, double> values;
    bool degenerate = false;
};

// (x - min) / (max - min) over the series. Keyed by entity slug so the input
// order is irrelevant.
inline NormalizedSeries min_max_normalize(const std::map<std::string, double>& series,
                                          std::string indicator_id = {}) {
    if (series.empty()) throw EmptySeriesError("cannot normalize an empty series");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [slug, x] : series) {
        if (!std::isfinite(x))
            throw NonFiniteError("non-finite value in series " + indicator_id + " for " + slug);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }

    NormalizedSeries out;
    out.indicator_id = std::move(indicator_id);
    out.source_min = lo;
    out.source_max = hi;
    out.degenerate = (lo == hi);
    const double span = hi - lo;
    for (const auto& [slug, x] : series)
        out.values.emplace(slug, out.degenerate ? 0.0 : (x - lo) / span);
    return out;
}

inline SignedSeries apply_polarity(const NormalizedSeries& n, Polarity polarity) {
    SignedSeries out;
    out.indicator_id = n.indicator_id;
    out.polarity = polarity;
    out.degenerate = n.degenerate;
    for (const auto& [slug, v] : n.values)
        out.values.emplace(slug, polarity == Polarity::Positive ? v : -v);
    return out;
}

// Min-max normalization of every indicator column in the snapshot. Missing
// values enter as 0, booleans as 0/1; an all-equal column (e.g. a boolean
// every entity shares) comes out degenerate.
inline std::map<std::string, NormalizedSeries> normalize_snapshot(const Snapshot& s) {
    if (s.entities().size() < 2)
        throw InvalidSnapshotError("pipeline needs at least 2 entities, got " +
                                   std::to_string(s.entities().size()));

    std::map<std::string, NormalizedSeries> out;
    for (const auto& spec : s.indicator_set().specs()) {
        std::map<std::string, double> series;
        for (const auto& e : s.entities()) {
            auto it = e.values.find(spec.id);
            series.emplace(e.slug, it == e.values.end() ? 0.0 : it->second.as_numeric());
        }
        out.emplace(spec.id, min_max_normalize(series, spec.id));
    }
    return out;
}

} // namespace wri
