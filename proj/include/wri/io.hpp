#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wri/error.hpp"
#include "wri/fixture.hpp"
#include "wri/index.hpp"
#include "wri/indicators.hpp"
#include "wri/ranking.hpp"

namespace wri {

enum class FileFormat { Csv, Json };

// Picks the format from the file extension; defaults to CSV.
inline FileFormat format_for_path(const std::filesystem::path& p) {
    return p.extension() == ".json" ? FileFormat::Json : FileFormat::Csv;
}

inline FileFormat format_from_string(std::string_view s) {
    if (s == "csv") return FileFormat::Csv;
    if (s == "json") return FileFormat::Json;
    throw ParseError("unknown format: " + std::string(s));
}

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline double parse_double(std::string_view s, const std::string& context) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("bad number \"" + std::string(s) + "\" at " + context);
    if (!std::isfinite(v)) throw NonFiniteError("non-finite number at " + context);
    return v;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& context) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("bad non-negative integer \"" + std::string(s) + "\" at " + context);
    return v;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// Whole-file CSV parse with quoted-field support. Rows keep their 1-based
// line numbers for error reporting.
struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

inline std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line = 1;
    std::size_t row_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
        row_started = true;
    };
    auto end_row = [&] {
        if (row_started || !fields.empty()) {
            end_field();
            rows.push_back(CsvRow{row_line, std::move(fields)});
            fields.clear();
            row_started = false;
        }
        row_line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
            row_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r') {
            // swallowed; \n ends the row
        } else if (c == '\n') {
            ++line;
            if (row_started || !field.empty()) end_row();
            else row_line = line;
        } else {
            field += c;
            row_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quote at line " + std::to_string(row_line));
    if (row_started || !field.empty()) end_row();
    return rows;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path.string());
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Snapshot serialization

inline nlohmann::json provenance_to_json(const Provenance& p) {
    switch (p.kind) {
    case Provenance::Kind::Collected:
        return {{"kind", "collected"}, {"source_id", p.source_id}, {"timestamp_ms", p.timestamp_ms}};
    case Provenance::Kind::FileImport:
        return {{"kind", "file_import"}};
    case Provenance::Kind::Fixture:
        return {{"kind", "fixture"}};
    }
    return {{"kind", "file_import"}};
}

inline Provenance provenance_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "collected")
        return Provenance::collected(j.at("source_id").get<std::string>(),
                                     j.at("timestamp_ms").get<std::int64_t>());
    if (kind == "file_import") return Provenance::file_import();
    if (kind == "fixture") return Provenance::fixture();
    throw ParseError("unknown provenance kind: " + kind);
}

inline nlohmann::json raw_value_to_json(const RawValue& v) {
    nlohmann::json j;
    if (v.is_number()) {
        j["type"] = "number";
        j["value"] = v.number_value();
    } else if (v.is_boolean()) {
        j["type"] = "boolean";
        j["value"] = v.boolean_value();
    } else {
        j["type"] = "missing";
    }
    j["provenance"] = provenance_to_json(v.provenance());
    return j;
}

inline RawValue raw_value_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    Provenance p = provenance_from_json(j.at("provenance"));
    if (type == "number") return RawValue::number(j.at("value").get<double>(), std::move(p));
    if (type == "boolean") return RawValue::boolean(j.at("value").get<bool>(), std::move(p));
    if (type == "missing") return RawValue::missing(std::move(p));
    throw ParseError("unknown value type: " + type);
}

inline nlohmann::json snapshot_to_json(const Snapshot& s) {
    nlohmann::json j;
    j["label"] = s.label();
    j["collected_at_ms"] = s.collected_at_ms();
    j["indicator_set"] = nlohmann::json::array();
    for (const auto& spec : s.indicator_set().specs()) {
        j["indicator_set"].push_back({{"id", spec.id},
                                      {"name", spec.name},
                                      {"kind", std::string(to_string(spec.kind))},
                                      {"polarity", std::string(to_string(spec.polarity))},
                                      {"collector_hint", spec.collector_hint}});
    }
    j["entities"] = nlohmann::json::array();
    for (const auto& e : s.entities()) {
        nlohmann::json je{{"slug", e.slug}, {"name", e.name}, {"population", e.population}};
        if (!e.host.empty()) je["host"] = e.host;
        nlohmann::json values = nlohmann::json::object();
        for (const auto& [id, v] : e.values) values[id] = raw_value_to_json(v);
        je["values"] = values;
        j["entities"].push_back(je);
    }
    return j;
}

inline IndicatorSet indicator_set_from_json(const nlohmann::json& j) {
    std::vector<IndicatorSpec> specs;
    for (const auto& js : j) {
        IndicatorSpec spec;
        spec.id = js.at("id").get<std::string>();
        spec.name = js.at("name").get<std::string>();
        spec.kind = kind_from_string(js.at("kind").get<std::string>());
        spec.polarity = polarity_from_string(js.at("polarity").get<std::string>());
        if (js.contains("collector_hint")) spec.collector_hint = js.at("collector_hint").get<std::string>();
        specs.push_back(std::move(spec));
    }
    return IndicatorSet(std::move(specs));
}

inline Snapshot snapshot_from_json(const nlohmann::json& j) {
    IndicatorSet set = indicator_set_from_json(j.at("indicator_set"));
    std::vector<EntityRecord> entities;
    for (const auto& je : j.at("entities")) {
        EntityRecord e;
        e.slug = je.at("slug").get<std::string>();
        e.name = je.at("name").get<std::string>();
        e.population = je.at("population").get<std::uint64_t>();
        if (je.contains("host")) e.host = je.at("host").get<std::string>();
        for (const auto& [id, jv] : je.at("values").items()) e.values.emplace(id, raw_value_from_json(jv));
        entities.push_back(std::move(e));
    }
    return Snapshot(std::move(set), std::move(entities),
                    j.value("collected_at_ms", std::int64_t{0}), j.value("label", std::string{}));
}

inline std::string snapshot_to_csv(const Snapshot& s) {
    const bool with_host = std::any_of(s.entities().begin(), s.entities().end(),
                                       [](const EntityRecord& e) { return !e.host.empty(); });
    std::string out = "slug,name,population";
    if (with_host) out += ",host";
    for (const auto& spec : s.indicator_set().specs()) out += "," + spec.id;
    out += "\n";
    for (const auto& e : s.entities()) {
        out += detail::csv_escape(e.slug);
        out += ",";
        out += detail::csv_escape(e.name);
        out += ",";
        out += std::to_string(e.population);
        if (with_host) {
            out += ",";
            out += detail::csv_escape(e.host);
        }
        for (const auto& spec : s.indicator_set().specs()) {
            out += ",";
            auto it = e.values.find(spec.id);
            if (it == e.values.end() || it->second.is_missing()) continue;
            if (it->second.is_boolean()) out += it->second.boolean_value() ? "true" : "false";
            else out += detail::format_double(it->second.number_value());
        }
        out += "\n";
    }
    return out;
}

inline Snapshot snapshot_from_csv(const std::string& text, const IndicatorSet& set) {
    auto rows = detail::parse_csv(text);
    if (rows.empty()) throw ParseError("empty CSV");
    const auto& header = rows.front().fields;
    if (header.size() < 3 || header[0] != "slug" || header[1] != "name" || header[2] != "population")
        throw SchemaError("snapshot CSV must start with columns slug,name,population");

    std::size_t first_indicator = 3;
    bool with_host = false;
    if (header.size() > 3 && header[3] == "host") {
        with_host = true;
        first_indicator = 4;
    }
    std::vector<std::string> indicator_columns;
    for (std::size_t c = first_indicator; c < header.size(); ++c) {
        if (!set.contains(header[c]))
            throw SchemaError("unknown indicator column: " + header[c]);
        indicator_columns.push_back(header[c]);
    }

    std::vector<EntityRecord> entities;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::string where = "line " + std::to_string(row.line);
        if (row.fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                             std::to_string(row.fields.size()) + " at " + where);
        EntityRecord e;
        e.slug = row.fields[0];
        e.name = row.fields[1];
        e.population = detail::parse_uint(row.fields[2], where + " column population");
        if (with_host) e.host = row.fields[3];
        for (std::size_t c = 0; c < indicator_columns.size(); ++c) {
            const std::string& cell = row.fields[first_indicator + c];
            const std::string& id = indicator_columns[c];
            if (cell.empty()) {
                e.values.emplace(id, RawValue::missing());
            } else if (cell == "true" || cell == "false") {
                e.values.emplace(id, RawValue::boolean(cell == "true"));
            } else {
                e.values.emplace(id, RawValue::number(
                    detail::parse_double(cell, where + " column " + id)));
            }
        }
        entities.push_back(std::move(e));
    }
    return Snapshot(set, std::move(entities));
}

inline Snapshot load_snapshot(const std::filesystem::path& path, FileFormat format,
                              const IndicatorSet& set = build_default_indicator_set()) {
    const std::string text = detail::read_file(path);
    if (format == FileFormat::Csv) return snapshot_from_csv(text, set);
    try {
        return snapshot_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
}

inline void save_snapshot(const Snapshot& s, const std::filesystem::path& path, FileFormat format) {
    if (format == FileFormat::Csv) detail::write_file(path, snapshot_to_csv(s));
    else detail::write_file(path, snapshot_to_json(s).dump(2) + "\n");
}

// Canonical single-line JSON rendering; the basis for snapshot hashing.
inline std::string canonical_snapshot_json(const Snapshot& s) {
    return snapshot_to_json(s).dump();
}

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t snapshot_hash(const Snapshot& s) {
    return fnv1a64(canonical_snapshot_json(s));
}

inline std::string snapshot_hash_hex(const Snapshot& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(snapshot_hash(s)));
    return buf;
}

// ---------------------------------------------------------------------------
// Results serialization. Rows are written in rank order with 6-decimal
// values; reloading and re-saving reproduces the file byte for byte.

struct ResultsFile {
    std::vector<IndexResult> results; // rank order
    SeriesStats stats;
};

namespace detail {

inline std::string flags_to_string(const ResultFlags& f) {
    std::string out;
    for (const auto& n : f.names()) {
        if (!out.empty()) out += ";";
        out += n;
    }
    return out;
}

inline ResultFlags flags_from_string(const std::string& s) {
    std::vector<std::string> names;
    std::string cur;
    for (char c : s) {
        if (c == ';') {
            if (!cur.empty()) names.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) names.push_back(std::move(cur));
    return ResultFlags::from_names(names);
}

inline std::vector<IndexResult> rank_ordered(std::vector<IndexResult> results) {
    std::sort(results.begin(), results.end(), [](const IndexResult& a, const IndexResult& b) {
        if (a.final_index != b.final_index) return a.final_index > b.final_index;
        return a.slug < b.slug;
    });
    return results;
}

inline std::filesystem::path stats_sidecar_path(std::filesystem::path path) {
    path.replace_extension();
    path += ".stats.csv";
    return path;
}

inline std::string stats_to_csv(const SeriesStats& s) {
    std::string out = "mean,max,min,stddev,count\n";
    out += format_fixed6(s.mean) + "," + format_fixed6(s.max) + "," + format_fixed6(s.min) + "," +
           format_fixed6(s.stddev) + "," + std::to_string(s.count) + "\n";
    return out;
}

inline SeriesStats stats_from_csv(const std::string& text) {
    auto rows = parse_csv(text);
    if (rows.size() < 2 || rows[0].fields != std::vector<std::string>{"mean", "max", "min", "stddev", "count"})
        throw SchemaError("bad stats sidecar header");
    const auto& f = rows[1].fields;
    if (f.size() != 5) throw ParseError("stats sidecar needs 5 fields");
    SeriesStats s;
    s.mean = parse_double(f[0], "stats mean");
    s.max = parse_double(f[1], "stats max");
    s.min = parse_double(f[2], "stats min");
    s.stddev = parse_double(f[3], "stats stddev");
    s.count = parse_uint(f[4], "stats count");
    return s;
}

} // namespace detail

inline nlohmann::json stats_to_json(const SeriesStats& s) {
    return {{"mean", detail::round6(s.mean)},
            {"max", detail::round6(s.max)},
            {"min", detail::round6(s.min)},
            {"stddev", detail::round6(s.stddev)},
            {"count", s.count}};
}

inline SeriesStats stats_from_json(const nlohmann::json& j) {
    SeriesStats s;
    s.mean = j.at("mean").get<double>();
    s.max = j.at("max").get<double>();
    s.min = j.at("min").get<double>();
    s.stddev = j.at("stddev").get<double>();
    s.count = j.at("count").get<std::size_t>();
    return s;
}

inline std::string results_to_csv(const std::vector<IndexResult>& results) {
    if (results.empty()) throw EmptyInputError("no results to write");
    auto ordered = detail::rank_ordered(results);
    std::string out = "rank,slug,name,wri,pop_normalized,final_index,flags\n";
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& r = ordered[i];
        out += std::to_string(i + 1) + "," + detail::csv_escape(r.slug) + "," +
               detail::csv_escape(r.name) + "," + detail::format_fixed6(r.wri) + "," +
               detail::format_fixed6(r.pop_normalized) + "," + detail::format_fixed6(r.final_index) +
               "," + detail::flags_to_string(r.flags) + "\n";
    }
    return out;
}

inline nlohmann::json results_to_json(const std::vector<IndexResult>& results,
                                      const SeriesStats& stats) {
    if (results.empty()) throw EmptyInputError("no results to write");
    auto ordered = detail::rank_ordered(results);
    nlohmann::json j;
    j["results"] = nlohmann::json::array();
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const auto& r = ordered[i];
        j["results"].push_back({{"rank", i + 1},
                                {"slug", r.slug},
                                {"name", r.name},
                                {"wri", detail::round6(r.wri)},
                                {"pop_normalized", detail::round6(r.pop_normalized)},
                                {"final_index", detail::round6(r.final_index)},
                                {"flags", r.flags.names()}});
    }
    j["stats"] = stats_to_json(stats);
    return j;
}

inline void save_results(const std::vector<IndexResult>& results, const SeriesStats& stats,
                         const std::filesystem::path& path, FileFormat format) {
    if (format == FileFormat::Csv) {
        detail::write_file(path, results_to_csv(results));
        detail::write_file(detail::stats_sidecar_path(path), detail::stats_to_csv(stats));
        return;
    }
    detail::write_file(path, results_to_json(results, stats).dump(2) + "\n");
}

inline ResultsFile load_results(const std::filesystem::path& path, FileFormat format) {
    ResultsFile out;
    const std::string text = detail::read_file(path);

    if (format == FileFormat::Csv) {
        auto rows = detail::parse_csv(text);
        if (rows.empty()) throw ParseError("empty results CSV");
        const std::vector<std::string> expect{"rank", "slug", "name", "wri",
                                              "pop_normalized", "final_index", "flags"};
        if (rows[0].fields != expect) throw SchemaError("unexpected results CSV header");
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& row = rows[r];
            const std::string where = "line " + std::to_string(row.line);
            if (row.fields.size() != expect.size())
                throw ParseError("expected 7 columns at " + where);
            IndexResult res;
            res.slug = row.fields[1];
            res.name = row.fields[2];
            res.wri = detail::parse_double(row.fields[3], where + " wri");
            res.pop_normalized = detail::parse_double(row.fields[4], where + " pop_normalized");
            res.final_index = detail::parse_double(row.fields[5], where + " final_index");
            res.flags = detail::flags_from_string(row.fields[6]);
            out.results.push_back(std::move(res));
        }
        const auto sidecar = detail::stats_sidecar_path(path);
        if (std::filesystem::exists(sidecar)) {
            out.stats = detail::stats_from_csv(detail::read_file(sidecar));
        } else {
            std::vector<double> finals;
            for (const auto& r : out.results) finals.push_back(r.final_index);
            out.stats = descriptive_stats(finals);
        }
        return out;
    }

    try {
        nlohmann::json j = nlohmann::json::parse(text);
        for (const auto& jr : j.at("results")) {
            IndexResult res;
            res.slug = jr.at("slug").get<std::string>();
            res.name = jr.at("name").get<std::string>();
            res.wri = jr.at("wri").get<double>();
            res.pop_normalized = jr.at("pop_normalized").get<double>();
            res.final_index = jr.at("final_index").get<double>();
            res.flags = ResultFlags::from_names(jr.at("flags").get<std::vector<std::string>>());
            out.results.push_back(std::move(res));
        }
        out.stats = stats_from_json(j.at("stats"));
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixture export

inline std::string fixture_to_csv(const AppendixFixture& f) {
    std::string out = "name,normalized_index\n";
    for (const auto& e : f.entries)
        out += detail::csv_escape(e.name) + "," + detail::format_fixed6(e.normalized_index) + "\n";
    return out;
}

inline nlohmann::json fixture_to_json(const AppendixFixture& f) {
    nlohmann::json j;
    j["provenance"] = f.provenance;
    j["declared_count"] = f.declared_count;
    j["count_matches_declared"] = f.count_matches_declared;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : f.entries)
        j["entries"].push_back({{"name", e.name}, {"normalized_index", detail::round6(e.normalized_index)}});
    return j;
}

inline void save_fixture(const AppendixFixture& f, const std::filesystem::path& path,
                         FileFormat format) {
    if (format == FileFormat::Csv) detail::write_file(path, fixture_to_csv(f));
    else detail::write_file(path, fixture_to_json(f).dump(2) + "\n");
}

inline std::vector<FixtureEntry> load_fixture_export(const std::filesystem::path& path,
                                                     FileFormat format) {
    const std::string text = detail::read_file(path);
    std::vector<FixtureEntry> out;
    if (format == FileFormat::Csv) {
        auto rows = detail::parse_csv(text);
        if (rows.empty() || rows[0].fields != std::vector<std::string>{"name", "normalized_index"})
            throw SchemaError("unexpected fixture CSV header");
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].fields.size() != 2)
                throw ParseError("expected 2 columns at line " + std::to_string(rows[r].line));
            out.push_back(FixtureEntry{rows[r].fields[0],
                                       detail::parse_double(rows[r].fields[1],
                                                            "line " + std::to_string(rows[r].line))});
        }
        return out;
    }
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        for (const auto& je : j.at("entries"))
            out.push_back(FixtureEntry{je.at("name").get<std::string>(),
                                       je.at("normalized_index").get<double>()});
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    return out;
}

// What kind of table a file holds, judged by its header/shape.
enum class TableKind { Results, FixtureExport };

inline TableKind detect_table_kind(const std::filesystem::path& path, FileFormat format) {
    const std::string text = detail::read_file(path);
    if (format == FileFormat::Csv) {
        if (text.rfind("rank,", 0) == 0) return TableKind::Results;
        if (text.rfind("name,normalized_index", 0) == 0) return TableKind::FixtureExport;
        throw SchemaError("unrecognized CSV header in " + path.string());
    }
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        if (j.contains("results")) return TableKind::Results;
        if (j.contains("entries")) return TableKind::FixtureExport;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    throw SchemaError("unrecognized JSON shape in " + path.string());
}

// ---------------------------------------------------------------------------
// Distribution reports

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    std::size_t count = 0;
};

// Equal-width bins; by default the range spans [min, max] of the values. The
// final bin is closed so counts always sum to the input size.
inline std::vector<HistogramBin> emit_histogram(const std::vector<double>& values, std::size_t bins,
                                                std::optional<std::pair<double, double>> range = {}) {
    if (values.empty()) throw EmptyInputError("no values to bin");
    if (bins < 1) throw EmptyInputError("need at least one bin");

    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
    } else {
        lo = *std::min_element(values.begin(), values.end());
        hi = *std::max_element(values.begin(), values.end());
    }
    if (hi < lo) throw EmptyInputError("histogram range is inverted");

    std::vector<HistogramBin> out(bins);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].low = lo + width * static_cast<double>(b);
        out[b].high = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        std::size_t b;
        if (width == 0.0 || v >= hi) {
            b = bins - 1;
        } else if (v <= lo) {
            b = 0;
        } else {
            b = static_cast<std::size_t>((v - lo) / width);
            if (b >= bins) b = bins - 1;
        }
        ++out[b].count;
    }
    return out;
}

// (ordinal, value) pairs for distribution plots; ordinals follow input order.
inline std::vector<std::pair<std::size_t, double>> emit_scatter(const std::vector<double>& values) {
    if (values.empty()) throw EmptyInputError("no values to plot");
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(i + 1, values[i]);
    return out;
}

inline std::string histogram_to_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_low,bin_high,count\n";
    for (const auto& b : bins)
        out += detail::format_fixed6(b.low) + "," + detail::format_fixed6(b.high) + "," +
               std::to_string(b.count) + "\n";
    return out;
}

inline std::string scatter_to_csv(const std::vector<std::pair<std::size_t, double>>& points) {
    std::string out = "ordinal,value\n";
    for (const auto& [i, v] : points)
        out += std::to_string(i) + "," + detail::format_fixed6(v) + "\n";
    return out;
}

} // namespace wri
