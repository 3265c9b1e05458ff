// wri — compute, rank and inspect web reputation indices.
//
// Data goes to --output (or stdout); diagnostics go to stderr.
// Exit codes: 0 success (warnings allowed), 1 I/O failure, 2 usage/parse.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wri/wri.hpp"

namespace {

struct CommonOpts {
    std::string input;
    std::string output;
    std::string format; // empty = infer per file
    bool from_fixture = false;
};

wri::FileFormat pick_format(const std::string& flag, const std::string& path,
                            wri::FileFormat fallback = wri::FileFormat::Csv) {
    if (!flag.empty()) return wri::format_from_string(flag);
    if (!path.empty()) return wri::format_for_path(path);
    return fallback;
}

void write_data(const std::string& output, const std::string& content) {
    if (output.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    wri::detail::write_file(output, content);
}

void print_stats_line(std::FILE* stream, const wri::SeriesStats& s) {
    std::fprintf(stream, "mean=%.6f stddev=%.6f min=%.6f max=%.6f count=%zu\n", s.mean, s.stddev,
                 s.min, s.max, s.count);
}

std::vector<wri::IndexResult> fixture_results() {
    std::vector<wri::IndexResult> out;
    for (const auto& e : wri::load_appendix_fixture().entries) {
        wri::IndexResult r;
        r.slug = wri::slugify(e.name);
        r.name = e.name;
        // the fixture publishes only the final index; earlier stages mirror it
        r.wri = r.pop_normalized = r.final_index = e.normalized_index;
        out.push_back(std::move(r));
    }
    return out;
}

wri::IndicatorSet load_indicator_set_or_default(const std::string& path) {
    if (path.empty()) return wri::build_default_indicator_set();
    try {
        auto j = nlohmann::json::parse(wri::detail::read_file(path));
        return wri::indicator_set_from_json(j);
    } catch (const nlohmann::json::exception& ex) {
        throw wri::ParseError(path + ": " + ex.what());
    }
}

void print_flag_summary(const std::vector<wri::IndexResult>& results,
                        const std::set<std::string>& degenerate_ids) {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : results)
        for (const auto& n : r.flags.names()) ++counts[n];
    for (const auto& [name, count] : counts) {
        std::fprintf(stderr, "flag %s: %zu entit%s", name.c_str(), count, count == 1 ? "y" : "ies");
        if (name == "DegenerateIndicatorsExcluded" && !degenerate_ids.empty()) {
            std::string ids;
            for (const auto& id : degenerate_ids) ids += (ids.empty() ? "" : ", ") + id;
            std::fprintf(stderr, " (%s)", ids.c_str());
        }
        std::fprintf(stderr, "\n");
    }
}

int cmd_compute(const CommonOpts& opts, const std::string& indicator_set_path,
                wri::PopulationMode mode, wri::StdConvention convention) {
    std::vector<wri::IndexResult> results;
    wri::SeriesStats stats;

    if (opts.from_fixture) {
        results = fixture_results();
        std::vector<double> vals;
        for (const auto& r : results) vals.push_back(r.final_index);
        stats = wri::descriptive_stats(vals, convention);
    } else {
        if (opts.input.empty()) throw wri::ParseError("compute needs --input or --from-fixture");
        auto set = load_indicator_set_or_default(indicator_set_path);
        auto snapshot = wri::load_snapshot(opts.input, pick_format(opts.format, opts.input), set);
        for (const auto& w : wri::validate_snapshot(snapshot))
            std::fprintf(stderr, "warning: %s/%s: %s\n", w.slug.c_str(), w.indicator_id.c_str(),
                         w.message.c_str());
        auto out = wri::run_pipeline(snapshot, mode, convention);
        results = std::move(out.results);
        stats = out.stats;
        print_flag_summary(results, out.degenerate_ids);
    }

    const auto out_format = pick_format(opts.format, opts.output);
    if (opts.output.empty()) {
        if (out_format == wri::FileFormat::Csv) write_data("", wri::results_to_csv(results));
        else write_data("", wri::results_to_json(results, stats).dump(2) + "\n");
    } else {
        wri::save_results(results, stats, opts.output, out_format);
    }
    std::fputs("stats: ", stderr);
    print_stats_line(stderr, stats);
    return 0;
}

int cmd_rank(const CommonOpts& opts, std::size_t top, std::size_t bottom) {
    if (top > 0 && bottom > 0) throw wri::KOutOfRangeError("--top and --bottom are exclusive");

    wri::Ranking ranking;
    if (opts.from_fixture) {
        ranking = wri::rank(wri::fixture_entities(), "fixture");
    } else {
        if (opts.input.empty()) throw wri::ParseError("rank needs --input or --from-fixture");
        auto loaded = wri::load_results(opts.input, pick_format(opts.format, opts.input));
        ranking = wri::rank(loaded.results, opts.input);
    }

    wri::Ranking view = ranking;
    if (top > 0) view = wri::top_k(ranking, top);
    if (bottom > 0) view = wri::bottom_k(ranking, bottom);

    std::string out;
    for (const auto& e : view.entries) {
        const std::string display = wri::short_display_name(e.name);
        std::size_t columns = 0; // count codepoints, not bytes
        for (unsigned char c : display)
            if ((c & 0xC0) != 0x80) ++columns;
        char rank_buf[16], value_buf[32];
        std::snprintf(rank_buf, sizeof(rank_buf), "%4zu", e.rank);
        std::snprintf(value_buf, sizeof(value_buf), "%.6f", e.value);
        out += rank_buf;
        out += "  ";
        out += display;
        out += std::string(columns < 45 ? 45 - columns : 1, ' ');
        out += value_buf;
        out += "\n";
    }
    write_data(opts.output, out);
    return 0;
}

int cmd_stats(const CommonOpts& opts, wri::StdConvention convention, std::size_t histogram_bins,
              bool scatter) {
    std::vector<double> values;
    if (opts.from_fixture) {
        for (const auto& e : wri::load_appendix_fixture().entries) values.push_back(e.normalized_index);
    } else {
        if (opts.input.empty()) throw wri::ParseError("stats needs --input or --from-fixture");
        const auto format = pick_format(opts.format, opts.input);
        switch (wri::detect_table_kind(opts.input, format)) {
        case wri::TableKind::Results:
            for (const auto& r : wri::load_results(opts.input, format).results)
                values.push_back(r.final_index);
            break;
        case wri::TableKind::FixtureExport:
            for (const auto& e : wri::load_fixture_export(opts.input, format))
                values.push_back(e.normalized_index);
            break;
        }
    }

    if (histogram_bins > 0) {
        write_data(opts.output, wri::histogram_to_csv(wri::emit_histogram(values, histogram_bins)));
        return 0;
    }
    if (scatter) {
        write_data(opts.output, wri::scatter_to_csv(wri::emit_scatter(values)));
        return 0;
    }
    auto stats = wri::descriptive_stats(values, convention);
    if (opts.output.empty()) {
        print_stats_line(stdout, stats);
    } else {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "mean=%.6f stddev=%.6f min=%.6f max=%.6f count=%zu\n",
                      stats.mean, stats.stddev, stats.min, stats.max, stats.count);
        write_data(opts.output, buf);
    }
    return 0;
}

int cmd_validate(const CommonOpts& opts, const std::string& indicator_set_path) {
    if (opts.input.empty()) throw wri::ParseError("validate needs --input");
    auto set = load_indicator_set_or_default(indicator_set_path);
    auto snapshot = wri::load_snapshot(opts.input, pick_format(opts.format, opts.input), set);
    auto warnings = wri::validate_snapshot(snapshot);
    std::string out;
    for (const auto& w : warnings)
        out += w.slug + "," + w.indicator_id + "," +
               (w.kind == wri::WarningKind::MissingValue ? "missing" : "out_of_range") + "," +
               w.message + "\n";
    write_data(opts.output, out);
    std::fprintf(stderr, "%zu warning(s) over %zu entities\n", warnings.size(),
                 snapshot.entities().size());
    return 0;
}

int cmd_collect(const CommonOpts& opts, const std::string& sources_path,
                const std::string& indicator_set_path, const std::string& cassette_dir, bool record,
                bool replay, std::size_t parallelism, const std::string& label,
                const std::vector<std::string>& probe_locations, int probe_attempts,
                std::int64_t probe_spacing_ms) {
    if (opts.input.empty()) throw wri::ParseError("collect needs --input (entity list)");
    if (sources_path.empty()) throw wri::ParseError("collect needs --sources");
    if (record && replay) throw wri::ParseError("--record and --replay are exclusive");
    if (!cassette_dir.empty() && !record && !replay)
        throw wri::ParseError("--cassette needs --record or --replay");

    auto set = load_indicator_set_or_default(indicator_set_path);
    auto entity_snapshot = wri::load_snapshot(opts.input, pick_format(opts.format, opts.input), set);
    auto sources = wri::load_sources(sources_path);

    wri::CollectOptions coll;
    coll.parallelism = parallelism;
    coll.label = label;
    wri::TcpConnectProber tcp_prober;
    wri::LatencyProber* prober = nullptr;
    if (!probe_locations.empty()) {
        wri::ProbePlan plan;
        plan.attempts_per_location = probe_attempts;
        plan.attempt_spacing_ms = probe_spacing_ms;
        for (const auto& spec : probe_locations) {
            auto colon = spec.rfind(':');
            if (colon == std::string::npos)
                throw wri::ParseError("--probe-location wants id:weight, got " + spec);
            plan.locations.push_back(wri::ProbeLocation{
                spec.substr(0, colon), wri::detail::parse_double(spec.substr(colon + 1), spec)});
        }
        plan.check();
        coll.probe_plan = plan;
        prober = &tcp_prober;
    }

    wri::HttpTransport live;
    wri::Cassette cassette;
    std::unique_ptr<wri::CassetteTransport> cassette_transport;
    wri::Transport* transport = &live;
    if (!cassette_dir.empty()) {
        const bool have_index =
            std::filesystem::exists(std::filesystem::path(cassette_dir) / "index.json");
        if (replay || have_index) cassette = wri::Cassette::load(cassette_dir);
        cassette_transport = std::make_unique<wri::CassetteTransport>(
            cassette, replay ? wri::CassetteMode::Replay : wri::CassetteMode::Record,
            replay ? nullptr : &live);
        transport = cassette_transport.get();
    }

    wri::CollectionReport report;
    auto snapshot = wri::collect_snapshot(set, entity_snapshot.entities(), sources, *transport, coll,
                                          prober, &report);
    if (record) cassette.save(cassette_dir);

    for (const auto& e : report.errors)
        std::fprintf(stderr, "collect error: %s/%s via %s: %s\n", e.slug.c_str(),
                     e.indicator_id.c_str(), e.source_id.c_str(), e.reason.c_str());
    std::fprintf(stderr, "snapshot hash: %s\n", wri::snapshot_hash_hex(snapshot).c_str());

    const auto out_format = pick_format(opts.format, opts.output);
    if (opts.output.empty()) {
        if (out_format == wri::FileFormat::Csv) write_data("", wri::snapshot_to_csv(snapshot));
        else write_data("", wri::snapshot_to_json(snapshot).dump(2) + "\n");
    } else {
        wri::save_snapshot(snapshot, opts.output, out_format);
    }
    return 0;
}

int cmd_fixture(const CommonOpts& opts) {
    const auto& f = wri::load_appendix_fixture();
    const auto format = pick_format(opts.format, opts.output);
    if (opts.output.empty()) {
        if (format == wri::FileFormat::Csv) write_data("", wri::fixture_to_csv(f));
        else write_data("", wri::fixture_to_json(f).dump(2) + "\n");
    } else {
        wri::save_fixture(f, opts.output, format);
    }
    std::fprintf(stderr, "%zu entries, declared count %zu (%s)\n", f.entries.size(),
                 f.declared_count, f.count_matches_declared ? "match" : "mismatch");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"web reputation index toolkit"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* cmd, CommonOpts& opts, bool with_fixture = true) {
        cmd->add_option("--input", opts.input, "input file");
        cmd->add_option("--output", opts.output, "output file (default: stdout)");
        cmd->add_option("--format", opts.format, "file format: csv or json (default: by extension)")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_fixture)
            cmd->add_flag("--from-fixture", opts.from_fixture, "use the bundled reference dataset");
    };

    // compute
    CommonOpts compute_opts;
    std::string compute_set_path;
    std::string population_mode = "formula";
    std::string std_convention = "population";
    auto* compute = app.add_subcommand("compute", "run the index pipeline over a snapshot");
    add_common(compute, compute_opts);
    compute->add_option("--indicator-set", compute_set_path, "indicator set override (JSON)");
    compute->add_option("--population-mode", population_mode, "population divisor: formula or text")
        ->check(CLI::IsMember({"formula", "text"}));
    compute->add_option("--std", std_convention, "stddev convention: population or sample")
        ->check(CLI::IsMember({"population", "sample"}));

    // rank
    CommonOpts rank_opts;
    std::size_t top = 0, bottom = 0;
    auto* rank_cmd = app.add_subcommand("rank", "print ranking tables");
    add_common(rank_cmd, rank_opts);
    rank_cmd->add_option("--top", top, "print only the best K entries");
    rank_cmd->add_option("--bottom", bottom, "print only the worst K entries, worst first");

    // stats
    CommonOpts stats_opts;
    std::string stats_convention = "population";
    std::size_t histogram_bins = 0;
    bool scatter = false;
    auto* stats_cmd = app.add_subcommand("stats", "descriptive statistics of an index table");
    add_common(stats_cmd, stats_opts);
    stats_cmd->add_option("--std", stats_convention, "stddev convention: population or sample")
        ->check(CLI::IsMember({"population", "sample"}));
    stats_cmd->add_option("--histogram", histogram_bins, "emit a histogram CSV with N bins");
    stats_cmd->add_flag("--scatter", scatter, "emit (ordinal, value) scatter CSV");

    // validate
    CommonOpts validate_opts;
    std::string validate_set_path;
    auto* validate_cmd = app.add_subcommand("validate", "plausibility-check a snapshot");
    add_common(validate_cmd, validate_opts, false);
    validate_cmd->add_option("--indicator-set", validate_set_path, "indicator set override (JSON)");

    // collect
    CommonOpts collect_opts;
    std::string sources_path, collect_set_path, cassette_dir, label;
    bool record = false, replay = false;
    std::size_t parallelism = 4;
    std::vector<std::string> probe_locations;
    int probe_attempts = 3;
    std::int64_t probe_spacing_ms = 0;
    auto* collect_cmd = app.add_subcommand("collect", "gather a snapshot from configured sources");
    add_common(collect_cmd, collect_opts, false);
    collect_cmd->add_option("--sources", sources_path, "source descriptors (JSON)");
    collect_cmd->add_option("--indicator-set", collect_set_path, "indicator set override (JSON)");
    collect_cmd->add_option("--cassette", cassette_dir, "cassette directory for record/replay");
    collect_cmd->add_flag("--record", record, "record live responses into the cassette");
    collect_cmd->add_flag("--replay", replay, "replay from the cassette, no live connections");
    collect_cmd->add_option("--parallelism", parallelism, "collection worker count")
        ->check(CLI::PositiveNumber);
    collect_cmd->add_option("--label", label, "snapshot label");
    collect_cmd->add_option("--probe-location", probe_locations,
                            "latency probe location id:weight (repeatable)");
    collect_cmd->add_option("--probe-attempts", probe_attempts, "probe attempts per location")
        ->check(CLI::PositiveNumber);
    collect_cmd->add_option("--probe-spacing", probe_spacing_ms,
                            "milliseconds between probe attempts")
        ->check(CLI::NonNegativeNumber);

    // fixture
    CommonOpts fixture_opts;
    auto* fixture_cmd = app.add_subcommand("fixture", "export the bundled reference dataset");
    add_common(fixture_cmd, fixture_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compute->parsed())
            return cmd_compute(compute_opts, compute_set_path,
                               population_mode == "formula" ? wri::PopulationMode::FormulaLiteral
                                                            : wri::PopulationMode::TextLiteral,
                               std_convention == "population" ? wri::StdConvention::Population
                                                              : wri::StdConvention::Sample);
        if (rank_cmd->parsed()) {
            if (rank_cmd->count("--top") && top == 0)
                throw wri::KOutOfRangeError("--top must be at least 1");
            if (rank_cmd->count("--bottom") && bottom == 0)
                throw wri::KOutOfRangeError("--bottom must be at least 1");
            return cmd_rank(rank_opts, top, bottom);
        }
        if (stats_cmd->parsed())
            return cmd_stats(stats_opts,
                             stats_convention == "population" ? wri::StdConvention::Population
                                                              : wri::StdConvention::Sample,
                             histogram_bins, scatter);
        if (validate_cmd->parsed()) return cmd_validate(validate_opts, validate_set_path);
        if (collect_cmd->parsed())
            return cmd_collect(collect_opts, sources_path, collect_set_path, cassette_dir, record,
                               replay, parallelism, label, probe_locations, probe_attempts,
                               probe_spacing_ms);
        if (fixture_cmd->parsed()) return cmd_fixture(fixture_opts);
    } catch (const wri::ParseError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const wri::SchemaError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const wri::InvalidSnapshotError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const wri::NonFiniteError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const wri::KOutOfRangeError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 2;
    } catch (const wri::IoError& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
