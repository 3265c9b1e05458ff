// Builds a three-institution snapshot in code and walks it through the whole
// pipeline, showing how degenerate indicators and empty campuses surface as
// flags rather than errors.

#include <cstdio>

#include "wri/wri.hpp"

int main() {
    auto set = wri::build_default_indicator_set();

    struct Row {
        const char* name;
        std::uint64_t population;
        double strength; // drives every numeric indicator
    };
    const Row rows[] = {
        {"Büyük Üniversitesi", 52000, 0.9},
        {"Orta Üniversitesi", 8000, 0.5},
        {"Yeni Üniversitesi", 0, 0.2}, // founded this year, nobody enrolled yet
    };

    std::vector<wri::EntityRecord> entities;
    for (const auto& row : rows) {
        wri::EntityRecord e;
        e.name = row.name;
        e.slug = wri::slugify(row.name);
        e.population = row.population;
        for (const auto& spec : set.specs()) {
            if (spec.id == "dmoz_listed") {
                e.values[spec.id] = wri::RawValue::boolean(true); // everyone is listed
            } else if (spec.kind == wri::IndicatorKind::Boolean) {
                e.values[spec.id] = wri::RawValue::boolean(row.strength > 0.4);
            } else if (spec.polarity == wri::Polarity::Negative) {
                e.values[spec.id] = wri::RawValue::number(1000.0 * (1.0 - row.strength));
            } else {
                e.values[spec.id] = wri::RawValue::number(10000.0 * row.strength);
            }
        }
        entities.push_back(std::move(e));
    }

    wri::Snapshot snapshot(set, std::move(entities), 0, "synthetic demo");
    auto out = wri::run_pipeline(snapshot, wri::PopulationMode::FormulaLiteral);

    std::printf("degenerate indicators:");
    for (const auto& id : out.degenerate_ids) std::printf(" %s", id.c_str());
    std::printf("\n\n");

    for (const auto& r : out.results) {
        std::printf("%-22s wri=%8.5f  /pop=%11.8f  final=%.6f", r.slug.c_str(), r.wri,
                    r.pop_normalized, r.final_index);
        for (const auto& flag : r.flags.names()) std::printf("  [%s]", flag.c_str());
        std::printf("\n");
    }
    return 0;
}
