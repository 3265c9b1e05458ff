// Prints the bundled reference dataset the way the published tables slice it:
// descriptive statistics, the ten best and the ten worst entries.

#include <cstdio>

#include "wri/wri.hpp"

int main() {
    const auto& fixture = wri::load_appendix_fixture();
    std::vector<double> values;
    for (const auto& e : fixture.entries) values.push_back(e.normalized_index);

    auto stats = wri::descriptive_stats(values, wri::StdConvention::Population);
    std::printf("%zu institutions  mean=%.3f  stddev=%.3f  min=%.6f  max=%.6f\n\n",
                stats.count, stats.mean, stats.stddev, stats.min, stats.max);

    auto ranking = wri::rank(wri::fixture_entities(), "reference");

    std::printf("most reputable:\n");
    for (const auto& e : wri::top_k(ranking, 10).entries)
        std::printf("  %2zu. %-30s %.6f\n", e.rank, wri::short_display_name(e.name).c_str(), e.value);

    std::printf("\nleast reputable (worst first):\n");
    for (const auto& e : wri::bottom_k(ranking, 10).entries)
        std::printf("  %2zu. %-30s %.6f\n", e.rank, wri::short_display_name(e.name).c_str(), e.value);
    return 0;
}
