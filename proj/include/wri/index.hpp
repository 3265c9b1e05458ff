#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wri/error.hpp"
#include "wri/indicators.hpp"
#include "wri/normalize.hpp"

namespace wri {

// Which reading of the population-normalization step to apply:
//   FormulaLiteral — divide by the raw student count, with 1 substituted for 0.
//   TextLiteral    — divide by the min-max normalized student count, with the
//                    smallest nonzero normalized count substituted for 0.
enum class PopulationMode { FormulaLiteral, TextLiteral };

enum class StdConvention { Population, Sample };

inline std::string_view to_string(PopulationMode m) {
    return m == PopulationMode::FormulaLiteral ? "formula" : "text";
}

inline std::string_view to_string(StdConvention c) {
    return c == StdConvention::Population ? "population" : "sample";
}

struct SeriesStats {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

// Non-nominal paths taken while computing one entity's index.
struct ResultFlags {
    bool wri_out_of_range = false;
    bool zero_population_guard = false;
    bool degenerate_indicators_excluded = false;

    bool any() const { return wri_out_of_range || zero_population_guard || degenerate_indicators_excluded; }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (wri_out_of_range) out.push_back("WriOutOfRange");
        if (zero_population_guard) out.push_back("ZeroPopulationGuard");
        if (degenerate_indicators_excluded) out.push_back("DegenerateIndicatorsExcluded");
        return out;
    }

    static ResultFlags from_names(const std::vector<std::string>& names) {
        ResultFlags f;
        for (const auto& n : names) {
            if (n == "WriOutOfRange") f.wri_out_of_range = true;
            else if (n == "ZeroPopulationGuard") f.zero_population_guard = true;
            else if (n == "DegenerateIndicatorsExcluded") f.degenerate_indicators_excluded = true;
            else throw ParseError("unknown result flag: " + n);
        }
        return f;
    }

    friend bool operator==(const ResultFlags&, const ResultFlags&) = default;
};

struct IndexResult {
    std::string slug;
    std::string name;
    double wri = 0.0;
    double pop_normalized = 0.0;
    double final_index = 0.0;
    ResultFlags flags;
};

struct WriValue {
    double value = 0.0;
    bool out_of_range = false;
};

// Aggregates one entity's signed normalized indicator values:
// (sum of positive values - sum of negative magnitudes) / C', where C' counts
// the non-degenerate positive indicators. Degenerate indicators are skipped
// on both sides. The result is never clamped; out-of-range values are flagged.
inline WriValue compute_wri(const std::map<std::string, double>& signed_values,
                            const IndicatorSet& set,
                            const std::set<std::string>& degenerate_ids = {}) {
    double positive_sum = 0.0;
    double negative_sum = 0.0;
    std::size_t positive_count = 0;
    for (const auto& spec : set.specs()) {
        if (degenerate_ids.count(spec.id)) continue;
        auto it = signed_values.find(spec.id);
        if (it == signed_values.end())
            throw EmptyInputError("no signed value for indicator " + spec.id);
        if (spec.polarity == Polarity::Positive) {
            positive_sum += it->second;
            ++positive_count;
        } else {
            negative_sum += -it->second; // signed negative values live in [-1,0]
        }
    }
    if (positive_count == 0)
        throw NoPositiveIndicatorsError("every positive indicator is degenerate");

    WriValue out;
    out.value = (positive_sum - negative_sum) / static_cast<double>(positive_count);
    out.out_of_range = out.value < 0.0 || out.value > 1.0;
    return out;
}

// Everything population_normalize needs to know about the snapshot's
// population column.
struct PopulationContext {
    double min_population = 0.0;
    double max_population = 0.0;
    // Smallest nonzero min-max-normalized population; 0 when the column is
    // constant and no such value exists.
    double smallest_nonzero_normalized = 0.0;

    static PopulationContext from_populations(const std::vector<std::uint64_t>& pops) {
        if (pops.empty()) throw EmptyInputError("no populations given");
        PopulationContext ctx;
        ctx.min_population = static_cast<double>(*std::min_element(pops.begin(), pops.end()));
        ctx.max_population = static_cast<double>(*std::max_element(pops.begin(), pops.end()));
        const double span = ctx.max_population - ctx.min_population;
        if (span > 0.0) {
            double smallest = std::numeric_limits<double>::infinity();
            for (std::uint64_t p : pops) {
                double n = (static_cast<double>(p) - ctx.min_population) / span;
                if (n > 0.0) smallest = std::min(smallest, n);
            }
            ctx.smallest_nonzero_normalized = std::isfinite(smallest) ? smallest : 0.0;
        }
        return ctx;
    }
};

struct PopNormValue {
    double value = 0.0;
    bool guard_fired = false;
};

// Divide the index by the population divisor for the selected mode. The
// divisor is never zero: FormulaLiteral substitutes 1 for an empty campus,
// TextLiteral substitutes the smallest nonzero normalized population (or 1.0
// when the population column is constant and none exists).
inline PopNormValue population_normalize(double wri_value, std::uint64_t population,
                                         PopulationMode mode, const PopulationContext& ctx) {
    PopNormValue out;
    double divisor = 1.0;
    if (mode == PopulationMode::FormulaLiteral) {
        out.guard_fired = (population == 0);
        divisor = out.guard_fired ? 1.0 : static_cast<double>(population);
    } else {
        const double span = ctx.max_population - ctx.min_population;
        double normalized = span > 0.0
            ? (static_cast<double>(population) - ctx.min_population) / span
            : 0.0;
        if (normalized > 0.0) {
            divisor = normalized;
        } else {
            out.guard_fired = true;
            divisor = ctx.smallest_nonzero_normalized > 0.0 ? ctx.smallest_nonzero_normalized : 1.0;
        }
    }
    out.value = wri_value / divisor;
    return out;
}

// Final min-max rescale of the population-normalized values back onto [0,1].
inline std::map<std::string, double> final_rescale(const std::map<std::string, double>& values) {
    if (values.size() < 2)
        throw EmptyInputError("final rescale needs at least 2 values");
    NormalizedSeries n = min_max_normalize(values, "final_index");
    if (n.degenerate)
        throw DegenerateIndexError("all population-normalized values are equal");
    return n.values;
}

inline SeriesStats descriptive_stats(const std::vector<double>& values,
                                     StdConvention convention = StdConvention::Population) {
    if (values.empty()) throw EmptyInputError("no values to describe");

    SeriesStats s;
    s.count = values.size();
    s.min = values.front();
    s.max = values.front();
    double sum = 0.0;
    for (double v : values) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(s.count);

    double sq = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        sq += d * d;
    }
    if (convention == StdConvention::Population)
        s.stddev = std::sqrt(sq / static_cast<double>(s.count));
    else
        s.stddev = s.count > 1 ? std::sqrt(sq / static_cast<double>(s.count - 1)) : 0.0;
    return s;
}

struct PipelineOutput {
    std::vector<IndexResult> results; // snapshot entity order
    SeriesStats stats;                // over the final indices
    std::set<std::string> degenerate_ids;
};

// The full chain: min-max normalize every indicator, sign by polarity,
// aggregate per entity, divide by the population divisor and rescale onto
// [0,1]. Deterministic: summation follows indicator-set order, results follow
// snapshot entity order.
inline PipelineOutput run_pipeline(const Snapshot& s,
                                   PopulationMode mode = PopulationMode::FormulaLiteral,
                                   StdConvention convention = StdConvention::Population) {
    PipelineOutput out;

    auto normalized = normalize_snapshot(s);
    std::map<std::string, SignedSeries> signed_series;
    for (const auto& spec : s.indicator_set().specs()) {
        const NormalizedSeries& n = normalized.at(spec.id);
        if (n.degenerate) out.degenerate_ids.insert(spec.id);
        signed_series.emplace(spec.id, apply_polarity(n, spec.polarity));
    }

    std::vector<std::uint64_t> populations;
    populations.reserve(s.entities().size());
    for (const auto& e : s.entities()) populations.push_back(e.population);
    const PopulationContext pop_ctx = PopulationContext::from_populations(populations);

    std::map<std::string, double> pop_normalized;
    out.results.reserve(s.entities().size());
    for (const auto& e : s.entities()) {
        std::map<std::string, double> signed_values;
        for (const auto& spec : s.indicator_set().specs())
            signed_values.emplace(spec.id, signed_series.at(spec.id).values.at(e.slug));

        IndexResult r;
        r.slug = e.slug;
        r.name = e.name;
        WriValue w = compute_wri(signed_values, s.indicator_set(), out.degenerate_ids);
        r.wri = w.value;
        r.flags.wri_out_of_range = w.out_of_range;
        r.flags.degenerate_indicators_excluded = !out.degenerate_ids.empty();

        PopNormValue p = population_normalize(r.wri, e.population, mode, pop_ctx);
        r.pop_normalized = p.value;
        r.flags.zero_population_guard = p.guard_fired;

        pop_normalized.emplace(e.slug, r.pop_normalized);
        out.results.push_back(std::move(r));
    }

    auto rescaled = final_rescale(pop_normalized);
    std::vector<double> finals;
    finals.reserve(out.results.size());
    for (auto& r : out.results) {
        r.final_index = rescaled.at(r.slug);
        finals.push_back(r.final_index);
    }
    out.stats = descriptive_stats(finals, convention);
    return out;
}

} // namespace wri
