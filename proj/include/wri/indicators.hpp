#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wri/error.hpp"

namespace wri {

// Whether a larger raw value raises (Positive) or lowers (Negative) reputation.
enum class Polarity { Positive, Negative };

enum class IndicatorKind {
    Count,
    Boolean,
    CurrencyUsd,
    Milliseconds,
    Percentage,
    Ratio,
};

inline std::string_view to_string(Polarity p) {
    return p == Polarity::Positive ? "positive" : "negative";
}

inline std::string_view to_string(IndicatorKind k) {
    switch (k) {
    case IndicatorKind::Count: return "count";
    case IndicatorKind::Boolean: return "boolean";
    case IndicatorKind::CurrencyUsd: return "currency_usd";
    case IndicatorKind::Milliseconds: return "milliseconds";
    case IndicatorKind::Percentage: return "percentage";
    case IndicatorKind::Ratio: return "ratio";
    }
    return "count";
}

inline Polarity polarity_from_string(std::string_view s) {
    if (s == "positive") return Polarity::Positive;
    if (s == "negative") return Polarity::Negative;
    throw ParseError("unknown polarity: " + std::string(s));
}

inline IndicatorKind kind_from_string(std::string_view s) {
    if (s == "count") return IndicatorKind::Count;
    if (s == "boolean") return IndicatorKind::Boolean;
    if (s == "currency_usd") return IndicatorKind::CurrencyUsd;
    if (s == "milliseconds") return IndicatorKind::Milliseconds;
    if (s == "percentage") return IndicatorKind::Percentage;
    if (s == "ratio") return IndicatorKind::Ratio;
    throw ParseError("unknown indicator kind: " + std::string(s));
}

// Identity, kind and polarity of a single web indicator.
struct IndicatorSpec {
    std::string id;
    std::string name;
    IndicatorKind kind = IndicatorKind::Count;
    Polarity polarity = Polarity::Positive;
    std::string collector_hint; // optional source identifier
};

// Ordered collection of indicator specs. Order is the canonical summation
// order for every aggregate computed downstream.
class IndicatorSet {
public:
    IndicatorSet() = default;

    explicit IndicatorSet(std::vector<IndicatorSpec> specs) : specs_(std::move(specs)) {
        for (std::size_t i = 0; i < specs_.size(); ++i) {
            for (std::size_t j = i + 1; j < specs_.size(); ++j) {
                if (specs_[i].id == specs_[j].id)
                    throw SchemaError("duplicate indicator id: " + specs_[i].id);
            }
        }
        if (positive_count() == 0 && !specs_.empty())
            throw SchemaError("indicator set has no positive indicators");
    }

    const std::vector<IndicatorSpec>& specs() const { return specs_; }

    std::size_t size() const { return specs_.size(); }

    std::size_t positive_count() const {
        return static_cast<std::size_t>(
            std::count_if(specs_.begin(), specs_.end(),
                          [](const IndicatorSpec& s) { return s.polarity == Polarity::Positive; }));
    }

    const IndicatorSpec* find(std::string_view id) const {
        for (const auto& s : specs_)
            if (s.id == id) return &s;
        return nullptr;
    }

    bool contains(std::string_view id) const { return find(id) != nullptr; }

private:
    std::vector<IndicatorSpec> specs_;
};

// The 16-indicator universe used by the default pipeline. Exactly
// alexa_rank and alexa_bounce carry negative polarity.
inline IndicatorSet build_default_indicator_set() {
    std::vector<IndicatorSpec> specs{
        {"fb_has_page", "Has a Facebook Page", IndicatorKind::Boolean, Polarity::Positive, "facebook"},
        {"fb_likes", "Facebook Like Count", IndicatorKind::Count, Polarity::Positive, "facebook"},
        {"site_value_usd", "Estimated Site Value (USD)", IndicatorKind::CurrencyUsd, Polarity::Positive, "site-value"},
        {"yahoo_backlinks", "Yahoo! Backlinks", IndicatorKind::Count, Polarity::Positive, "yahoo"},
        {"google_backlinks", "Google Backlinks", IndicatorKind::Count, Polarity::Positive, "google"},
        {"dmoz_listed", "DMOZ Listing", IndicatorKind::Boolean, Polarity::Positive, "dmoz"},
        {"google_indexed", "Google Indexed Pages", IndicatorKind::Count, Polarity::Positive, "google"},
        {"yahoo_indexed", "Yahoo Indexed Pages", IndicatorKind::Count, Polarity::Positive, "yahoo"},
        {"daily_unique_visitors", "Daily Unique Visitors", IndicatorKind::Count, Polarity::Positive, "alexa"},
        {"plagiarism_count", "Plagiarism Robot Hits", IndicatorKind::Count, Polarity::Positive, "plagiarism-robot"},
        {"speed_ping_ms", "Connect Latency", IndicatorKind::Milliseconds, Polarity::Positive, "probe"},
        {"alexa_rank", "Alexa Ranking", IndicatorKind::Count, Polarity::Negative, "alexa"},
        {"alexa_bounce", "Alexa Bounce Rate", IndicatorKind::Percentage, Polarity::Negative, "alexa"},
        {"pageviews_per_user", "Page Views Per User", IndicatorKind::Ratio, Polarity::Positive, "alexa"},
        {"time_on_site_s", "Time on Site (seconds)", IndicatorKind::Count, Polarity::Positive, "alexa"},
        {"sites_linking_in", "Sites Linking In", IndicatorKind::Count, Polarity::Positive, "alexa"},
    };
    return IndicatorSet(std::move(specs));
}

// Where a raw value came from.
struct Provenance {
    enum class Kind { Collected, FileImport, Fixture };

    Kind kind = Kind::FileImport;
    std::string source_id;        // Collected only
    std::int64_t timestamp_ms = 0; // Collected only

    static Provenance collected(std::string source, std::int64_t ts_ms) {
        return Provenance{Kind::Collected, std::move(source), ts_ms};
    }
    static Provenance file_import() { return Provenance{Kind::FileImport, {}, 0}; }
    static Provenance fixture() { return Provenance{Kind::Fixture, {}, 0}; }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// One raw indicator observation: a finite number, a boolean, or missing.
class RawValue {
public:
    RawValue() = default;

    static RawValue number(double v, Provenance p = Provenance::file_import()) {
        if (!std::isfinite(v)) throw NonFiniteError("raw value must be finite");
        RawValue r;
        r.value_ = v;
        r.provenance_ = std::move(p);
        return r;
    }

    static RawValue boolean(bool b, Provenance p = Provenance::file_import()) {
        RawValue r;
        r.value_ = b;
        r.provenance_ = std::move(p);
        return r;
    }

    static RawValue missing(Provenance p = Provenance::file_import()) {
        RawValue r;
        r.provenance_ = std::move(p);
        return r;
    }

    bool is_missing() const { return std::holds_alternative<std::monostate>(value_); }
    bool is_number() const { return std::holds_alternative<double>(value_); }
    bool is_boolean() const { return std::holds_alternative<bool>(value_); }

    double number_value() const { return std::get<double>(value_); }
    bool boolean_value() const { return std::get<bool>(value_); }

    // Numeric view entering the pipeline: booleans map to exactly 0.0/1.0,
    // missing values take the fill (absence is the worst observable outcome).
    double as_numeric(double missing_fill = 0.0) const {
        if (is_number()) return number_value();
        if (is_boolean()) return boolean_value() ? 1.0 : 0.0;
        return missing_fill;
    }

    const Provenance& provenance() const { return provenance_; }
    void set_provenance(Provenance p) { provenance_ = std::move(p); }

    friend bool operator==(const RawValue&, const RawValue&) = default;

private:
    std::variant<std::monostate, double, bool> value_;
    Provenance provenance_;
};

// One institution: display name, stable key, student population and the raw
// indicator observations. `host` optionally overrides the slug when resolving
// collector endpoint templates.
struct EntityRecord {
    std::string name;
    std::string slug;
    std::uint64_t population = 0;
    std::string host;
    std::map<std::string, RawValue> values;
};

// ASCII slug for an entity name: lowercased, Turkish diacritics folded,
// non-alphanumerics collapsed to single dashes.
inline std::string slugify(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    auto push = [&](char c) { out.push_back(c); };
    auto push_sep = [&] {
        if (!out.empty() && out.back() != '-') out.push_back('-');
    };

    std::size_t i = 0;
    const auto* bytes = reinterpret_cast<const unsigned char*>(name.data());
    while (i < name.size()) {
        unsigned char b = bytes[i];
        char32_t cp = 0;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b & 0xE0) == 0xC0 && i + 1 < name.size()) {
            cp = ((b & 0x1Fu) << 6) | (bytes[i + 1] & 0x3Fu);
            len = 2;
        } else if ((b & 0xF0) == 0xE0 && i + 2 < name.size()) {
            cp = ((b & 0x0Fu) << 12) | ((bytes[i + 1] & 0x3Fu) << 6) | (bytes[i + 2] & 0x3Fu);
            len = 3;
        } else if ((b & 0xF8) == 0xF0 && i + 3 < name.size()) {
            len = 4; // beyond the BMP; treated as a separator below
        }
        i += len;

        if (cp < 0x80) {
            char c = static_cast<char>(cp);
            if (c >= 'A' && c <= 'Z')
                push(static_cast<char>(c - 'A' + 'a'));
            else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
                push(c);
            else
                push_sep();
            continue;
        }
        switch (cp) {
        case 0x00C7: case 0x00E7: push('c'); break;             // Ç ç
        case 0x011E: case 0x011F: push('g'); break;             // Ğ ğ
        case 0x0130: case 0x0131: push('i'); break;             // İ ı
        case 0x00D6: case 0x00F6: push('o'); break;             // Ö ö
        case 0x015E: case 0x015F: push('s'); break;             // Ş ş
        case 0x00DC: case 0x00FC: push('u'); break;             // Ü ü
        case 0x00C2: case 0x00E2: push('a'); break;             // Â â
        case 0x00CE: case 0x00EE: push('i'); break;             // Î î
        case 0x00DB: case 0x00FB: push('u'); break;             // Û û
        default: push_sep(); break;
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

// A dated collection of entity records over one indicator universe.
// Immutable after construction; construction enforces key validity.
class Snapshot {
public:
    Snapshot() = default;

    Snapshot(IndicatorSet set, std::vector<EntityRecord> entities,
             std::int64_t collected_at_ms = 0, std::string label = {})
        : indicator_set_(std::move(set)), entities_(std::move(entities)),
          collected_at_ms_(collected_at_ms), label_(std::move(label)) {
        for (std::size_t i = 0; i < entities_.size(); ++i) {
            const auto& e = entities_[i];
            if (e.slug.empty())
                throw InvalidSnapshotError("entity \"" + e.name + "\" has an empty slug");
            for (std::size_t j = i + 1; j < entities_.size(); ++j) {
                if (e.slug == entities_[j].slug)
                    throw InvalidSnapshotError("duplicate entity slug: " + e.slug);
            }
            for (const auto& [id, value] : e.values) {
                if (!indicator_set_.contains(id))
                    throw SchemaError("entity " + e.slug + " has value for unknown indicator: " + id);
            }
        }
    }

    const IndicatorSet& indicator_set() const { return indicator_set_; }
    const std::vector<EntityRecord>& entities() const { return entities_; }
    std::int64_t collected_at_ms() const { return collected_at_ms_; }
    const std::string& label() const { return label_; }

private:
    IndicatorSet indicator_set_;
    std::vector<EntityRecord> entities_;
    std::int64_t collected_at_ms_ = 0;
    std::string label_;
};

enum class WarningKind { MissingValue, OutOfRange };

struct Warning {
    WarningKind kind;
    std::string slug;
    std::string indicator_id;
    std::string message;

    friend bool operator==(const Warning&, const Warning&) = default;
};

namespace detail {

inline void check_range(const IndicatorSpec& spec, double v, const EntityRecord& e,
                        std::vector<Warning>& out) {
    auto warn = [&](std::string msg) {
        out.push_back(Warning{WarningKind::OutOfRange, e.slug, spec.id, std::move(msg)});
    };
    switch (spec.kind) {
    case IndicatorKind::Count:
        if (v < 0.0) warn("negative count");
        break;
    case IndicatorKind::Boolean:
        if (v != 0.0 && v != 1.0) warn("boolean indicator outside {0,1}");
        break;
    case IndicatorKind::CurrencyUsd:
        if (v < 0.0) warn("negative currency amount");
        break;
    case IndicatorKind::Milliseconds:
        if (v < 0.0) warn("negative duration");
        else if (v > 60000.0) warn("latency above 60s looks implausible");
        break;
    case IndicatorKind::Percentage:
        if (v < 0.0 || v > 100.0) warn("percentage outside [0,100]");
        break;
    case IndicatorKind::Ratio:
        if (v < 0.0) warn("negative ratio");
        break;
    }
}

} // namespace detail

// Soft plausibility checks over a snapshot. Pure: same input, same warning
// list. Throws NonFiniteError if a numeric value is not finite.
inline std::vector<Warning> validate_snapshot(const Snapshot& s) {
    std::vector<Warning> out;
    for (const auto& e : s.entities()) {
        for (const auto& spec : s.indicator_set().specs()) {
            auto it = e.values.find(spec.id);
            if (it == e.values.end() || it->second.is_missing()) {
                out.push_back(Warning{WarningKind::MissingValue, e.slug, spec.id, "value missing"});
                continue;
            }
            const RawValue& rv = it->second;
            if (rv.is_number() && !std::isfinite(rv.number_value()))
                throw NonFiniteError("non-finite value for " + spec.id + " on " + e.slug);
            detail::check_range(spec, rv.as_numeric(), e, out);
        }
    }
    return out;
}

} // namespace wri
