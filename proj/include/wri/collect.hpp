#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "wri/error.hpp"
#include "wri/indicators.hpp"
#include "wri/io.hpp"

namespace wri {

// ---------------------------------------------------------------------------
// Clock

class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_ms(std::int64_t ms) = 0;
};

class SystemClock final : public Clock {
public:
    std::int64_t now_ms() override {
        using namespace std::chrono;
        return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
    }
    void sleep_ms(std::int64_t ms) override {
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
};

inline Clock& system_clock_instance() {
    static SystemClock clock;
    return clock;
}

// ---------------------------------------------------------------------------
// Rate limiting

// Sliding-window limiter: at most `limit` admissions in any windowful of
// time, which keeps any 1-second window at or under the configured
// requests-per-second. Safe for concurrent use.
class RateLimiter {
public:
    explicit RateLimiter(double max_per_second, Clock& clock = system_clock_instance())
        : clock_(clock) {
        if (!(max_per_second > 0.0)) throw Error("rate limit must be positive");
        if (max_per_second >= 1.0) {
            capacity_ = static_cast<std::size_t>(max_per_second);
            window_ms_ = 1000;
        } else {
            capacity_ = 1;
            window_ms_ = static_cast<std::int64_t>(std::ceil(1000.0 / max_per_second));
        }
    }

    void acquire() {
        for (;;) {
            std::int64_t wait_ms = 0;
            {
                std::lock_guard<std::mutex> lock(mutex_);
                const std::int64_t now = clock_.now_ms();
                while (!admitted_.empty() && admitted_.front() + window_ms_ <= now)
                    admitted_.pop_front();
                if (admitted_.size() < capacity_) {
                    admitted_.push_back(now);
                    return;
                }
                wait_ms = admitted_.front() + window_ms_ - now;
            }
            clock_.sleep_ms(std::max<std::int64_t>(wait_ms, 1));
        }
    }

    std::size_t capacity() const { return capacity_; }
    std::int64_t window_ms() const { return window_ms_; }

private:
    Clock& clock_;
    std::size_t capacity_ = 1;
    std::int64_t window_ms_ = 1000;
    std::mutex mutex_;
    std::deque<std::int64_t> admitted_;
};

// ---------------------------------------------------------------------------
// Transport

struct HttpRequest {
    std::string source_id;
    std::string url;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::int64_t recorded_at_ms = 0;
};

class Transport {
public:
    virtual ~Transport() = default;
    // Throws FetchError when no response could be obtained at all.
    virtual HttpResponse fetch(const HttpRequest& req) = 0;
};

namespace detail {

inline std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw FetchError("URL without scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace detail

// Plain HTTP GET client. Response timestamps come from the injected clock so
// cassette recordings replay with the timestamps of the original session.
class HttpTransport final : public Transport {
public:
    explicit HttpTransport(Clock& clock = system_clock_instance(), int timeout_ms = 10000)
        : clock_(clock), timeout_ms_(timeout_ms) {}

    HttpResponse fetch(const HttpRequest& req) override {
        if (req.url.rfind("https://", 0) == 0)
            throw FetchError("https not supported by this build: " + req.url);
        auto [base, path] = detail::split_url(req.url);
        httplib::Client client(base);
        client.set_connection_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
        auto res = client.Get(path);
        if (!res) throw FetchError("GET " + req.url + " failed: " + httplib::to_string(res.error()));
        return HttpResponse{res->status, res->body, clock_.now_ms()};
    }

private:
    Clock& clock_;
    int timeout_ms_;
};

// ---------------------------------------------------------------------------
// Cassettes

enum class CassetteMode { Record, Replay, Passthrough };

inline CassetteMode cassette_mode_from_string(std::string_view s) {
    if (s == "record") return CassetteMode::Record;
    if (s == "replay") return CassetteMode::Replay;
    if (s == "passthrough") return CassetteMode::Passthrough;
    throw ParseError("unknown cassette mode: " + std::string(s));
}

// Recorded request/response pairs keyed by (source id, resolved URL).
// On disk: one directory per cassette, one entry file per response (request
// line, header subset, blank line, byte-exact body) plus an index.json
// mapping keys to entry files.
class Cassette {
public:
    struct Entry {
        std::string source_id;
        std::string url;
        int status = 0;
        std::int64_t recorded_at_ms = 0;
        std::string body;
    };

    Cassette() = default;

    static std::string key_for(const std::string& source_id, const std::string& url) {
        return source_id + "\n" + url;
    }

    const Entry* find(const std::string& source_id, const std::string& url) const {
        auto it = entries_.find(key_for(source_id, url));
        return it == entries_.end() ? nullptr : &it->second;
    }

    void put(Entry entry) {
        std::string key = key_for(entry.source_id, entry.url);
        entries_.insert_or_assign(std::move(key), std::move(entry));
    }

    std::size_t size() const { return entries_.size(); }

    void save(const std::filesystem::path& dir) const {
        std::filesystem::create_directories(dir);
        nlohmann::json index;
        index["entries"] = nlohmann::json::array();
        std::size_t i = 0;
        for (const auto& [key, e] : entries_) {
            char name[32];
            std::snprintf(name, sizeof(name), "entry_%04zu.http", i++);
            std::string content = "GET " + e.url + " HTTP/1.1\r\n";
            content += "X-Source: " + e.source_id + "\r\n";
            content += "X-Recorded-At: " + std::to_string(e.recorded_at_ms) + "\r\n";
            content += "X-Status: " + std::to_string(e.status) + "\r\n";
            content += "\r\n";
            content += e.body;
            wri::detail::write_file(dir / name, content);
            index["entries"].push_back({{"source_id", e.source_id}, {"url", e.url}, {"file", name}});
        }
        wri::detail::write_file(dir / "index.json", index.dump(2) + "\n");
    }

    static Cassette load(const std::filesystem::path& dir) {
        Cassette c;
        nlohmann::json index;
        try {
            index = nlohmann::json::parse(wri::detail::read_file(dir / "index.json"));
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError((dir / "index.json").string() + ": " + ex.what());
        }
        for (const auto& je : index.at("entries")) {
            const std::string file = je.at("file").get<std::string>();
            const std::string content = wri::detail::read_file(dir / file);
            c.put(parse_entry(content, (dir / file).string()));
        }
        return c;
    }

private:
    static Cassette::Entry parse_entry(const std::string& content, const std::string& where) {
        auto header_end = content.find("\r\n\r\n");
        if (header_end == std::string::npos)
            throw ParseError("no header/body separator in " + where);
        Entry e;
        e.body = content.substr(header_end + 4);

        std::size_t pos = 0;
        bool first = true;
        while (pos < header_end) {
            auto eol = content.find("\r\n", pos);
            if (eol == std::string::npos || eol > header_end) eol = header_end;
            std::string line = content.substr(pos, eol - pos);
            pos = eol + 2;
            if (first) {
                first = false;
                if (line.rfind("GET ", 0) != 0) throw ParseError("bad request line in " + where);
                auto url_end = line.rfind(" HTTP/");
                if (url_end == std::string::npos || url_end <= 4)
                    throw ParseError("bad request line in " + where);
                e.url = line.substr(4, url_end - 4);
                continue;
            }
            auto colon = line.find(": ");
            if (colon == std::string::npos) continue;
            const std::string name = line.substr(0, colon);
            const std::string value = line.substr(colon + 2);
            try {
                if (name == "X-Source") e.source_id = value;
                else if (name == "X-Recorded-At") e.recorded_at_ms = std::stoll(value);
                else if (name == "X-Status") e.status = std::stoi(value);
            } catch (const std::exception&) {
                throw ParseError("bad header \"" + name + "\" in " + where);
            }
        }
        return e;
    }

    std::map<std::string, Entry> entries_;
};

// Record/replay layer over another transport. Replay mode never consults the
// live transport; a missing entry is a FetchError.
class CassetteTransport final : public Transport {
public:
    CassetteTransport(Cassette& cassette, CassetteMode mode, Transport* live = nullptr)
        : cassette_(cassette), mode_(mode), live_(live) {}

    HttpResponse fetch(const HttpRequest& req) override {
        if (mode_ == CassetteMode::Passthrough) return live_fetch(req);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (const Cassette::Entry* e = cassette_.find(req.source_id, req.url))
                return HttpResponse{e->status, e->body, e->recorded_at_ms};
        }
        if (mode_ == CassetteMode::Replay)
            throw FetchError("cassette has no entry for " + req.source_id + " " + req.url);

        HttpResponse live = live_fetch(req);
        std::lock_guard<std::mutex> lock(mutex_);
        if (const Cassette::Entry* e = cassette_.find(req.source_id, req.url))
            return HttpResponse{e->status, e->body, e->recorded_at_ms};
        cassette_.put(Cassette::Entry{req.source_id, req.url, live.status, live.recorded_at_ms, live.body});
        return live;
    }

private:
    HttpResponse live_fetch(const HttpRequest& req) {
        if (!live_) throw FetchError("no live transport behind the cassette");
        return live_->fetch(req);
    }

    Cassette& cassette_;
    CassetteMode mode_;
    Transport* live_;
    std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Sources and value extraction

// Where and how to fetch one indicator: an endpoint template with a single
// {host} placeholder and a named extraction rule for the response body.
struct SourceDescriptor {
    std::string source_id;
    std::string indicator_id;
    std::string endpoint_template;
    std::string extraction_rule;
    double rate_limit_per_sec = 1.0;

    void check() const {
        if (source_id.empty()) throw SchemaError("source without id");
        if (!(rate_limit_per_sec > 0.0))
            throw SchemaError("source " + source_id + ": rate limit must be positive");
        auto first = endpoint_template.find("{host}");
        if (first == std::string::npos ||
            endpoint_template.find("{host}", first + 1) != std::string::npos)
            throw SchemaError("source " + source_id +
                              ": endpoint template needs exactly one {host} placeholder");
    }
};

inline std::string resolve_endpoint(const SourceDescriptor& source, const EntityRecord& entity) {
    const std::string& host = entity.host.empty() ? entity.slug : entity.host;
    std::string url = source.endpoint_template;
    url.replace(url.find("{host}"), 6, host);
    return url;
}

// Applies a named extraction rule to a response. Rules:
//   exists        -> boolean from HTTP status (200 true, 404 false)
//   number        -> first numeric token in the body
//   json:<ptr>    -> number/boolean at a JSON pointer
//   regex:<pat>   -> first capture group (or whole match), parsed as a number
inline RawValue extract_value(const HttpResponse& response, const std::string& rule,
                              const Provenance& prov) {
    if (rule == "exists") {
        if (response.status == 200) return RawValue::boolean(true, prov);
        if (response.status == 404) return RawValue::boolean(false, prov);
        throw FetchError("http status " + std::to_string(response.status));
    }
    if (response.status != 200)
        throw FetchError("http status " + std::to_string(response.status));

    if (rule == "number") {
        static const std::regex number_re(R"([-+]?[0-9]+(\.[0-9]+)?([eE][-+]?[0-9]+)?)");
        std::smatch m;
        if (!std::regex_search(response.body, m, number_re))
            throw ExtractError("no numeric token in response body");
        try {
            return RawValue::number(std::stod(m.str(0)), prov);
        } catch (const std::out_of_range&) {
            throw ExtractError("numeric token out of double range: " + m.str(0));
        }
    }
    if (rule.rfind("json:", 0) == 0) {
        try {
            nlohmann::json j = nlohmann::json::parse(response.body);
            const nlohmann::json& v = j.at(nlohmann::json::json_pointer(rule.substr(5)));
            if (v.is_boolean()) return RawValue::boolean(v.get<bool>(), prov);
            if (v.is_number()) return RawValue::number(v.get<double>(), prov);
            if (v.is_string()) return RawValue::number(std::stod(v.get<std::string>()), prov);
            throw ExtractError("JSON pointer " + rule.substr(5) + " is not a scalar");
        } catch (const nlohmann::json::exception& ex) {
            throw ExtractError(std::string("JSON extraction failed: ") + ex.what());
        } catch (const std::invalid_argument&) {
            throw ExtractError("JSON string at " + rule.substr(5) + " is not numeric");
        } catch (const std::out_of_range&) {
            throw ExtractError("JSON number at " + rule.substr(5) + " is out of double range");
        }
    }
    if (rule.rfind("regex:", 0) == 0) {
        std::smatch m;
        try {
            std::regex re(rule.substr(6));
            if (!std::regex_search(response.body, m, re))
                throw ExtractError("regex matched nothing");
        } catch (const std::regex_error& ex) {
            throw ExtractError(std::string("bad extraction regex: ") + ex.what());
        }
        const std::string token = m.size() > 1 ? m.str(1) : m.str(0);
        try {
            return RawValue::number(std::stod(token), prov);
        } catch (const std::exception&) {
            throw ExtractError("regex capture \"" + token + "\" is not numeric");
        }
    }
    throw ExtractError("unknown extraction rule: " + rule);
}

struct CellError {
    std::string slug;
    std::string indicator_id;
    std::string source_id;
    std::string reason;
};

// Fetch and parse one (entity, source) cell. Network and extraction failures
// degrade to Missing with the reason recorded; they never abort a snapshot.
inline RawValue collect_value(const EntityRecord& entity, const SourceDescriptor& source,
                              Transport& transport, RateLimiter* limiter = nullptr,
                              std::vector<CellError>* errors = nullptr) {
    source.check();
    const std::string url = resolve_endpoint(source, entity);
    if (limiter) limiter->acquire();
    try {
        HttpResponse response = transport.fetch(HttpRequest{source.source_id, url});
        return extract_value(response, source.extraction_rule,
                             Provenance::collected(source.source_id, response.recorded_at_ms));
    } catch (const Error& ex) {
        if (errors)
            errors->push_back(CellError{entity.slug, source.indicator_id, source.source_id, ex.what()});
        return RawValue::missing(Provenance::collected(source.source_id, 0));
    }
}

// ---------------------------------------------------------------------------
// Latency probing

struct ProbeLocation {
    std::string probe_id;
    double weight = 0.0;
};

struct ProbePlan {
    std::vector<ProbeLocation> locations;
    int attempts_per_location = 3;
    // pause between attempts so measurements land at distinct times and a
    // momentary outage cannot poison every sample
    std::int64_t attempt_spacing_ms = 0;

    void check() const {
        if (locations.empty()) throw Error("probe plan has no locations");
        if (attempts_per_location < 1) throw Error("probe plan needs at least one attempt");
        if (attempt_spacing_ms < 0) throw Error("probe attempt spacing cannot be negative");
        double sum = 0.0;
        for (const auto& loc : locations) {
            if (loc.weight < 0.0) throw Error("probe weight must be non-negative");
            sum += loc.weight;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw Error("probe weights must sum to 1");
    }
};

// Home-weighted five-location plan: half the weight on the local vantage
// point, the rest spread evenly.
inline ProbePlan default_probe_plan() {
    return ProbePlan{{{"tr-istanbul", 0.5},
                      {"eu-central", 0.125},
                      {"us-east", 0.125},
                      {"us-west", 0.125},
                      {"ap-southeast", 0.125}},
                     3};
}

class LatencyProber {
public:
    virtual ~LatencyProber() = default;
    // One round-trip measurement in milliseconds; throws on failure.
    virtual double measure_ms(const std::string& probe_id, const std::string& host) = 0;
};

// Times an unprivileged TCP connect to host[:port] (default port 80). The
// probe id names the vantage point for reporting; this prober always measures
// from the local machine.
class TcpConnectProber final : public LatencyProber {
public:
    explicit TcpConnectProber(int timeout_ms = 5000) : timeout_ms_(timeout_ms) {}

    double measure_ms(const std::string& /*probe_id*/, const std::string& host) override {
        std::string node = host;
        std::string service = "80";
        if (auto colon = host.rfind(':'); colon != std::string::npos && colon > 0) {
            node = host.substr(0, colon);
            service = host.substr(colon + 1);
        }

        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* addrs = nullptr;
        if (::getaddrinfo(node.c_str(), service.c_str(), &hints, &addrs) != 0)
            throw FetchError("cannot resolve " + host);

        double elapsed = -1.0;
        for (addrinfo* ai = addrs; ai != nullptr && elapsed < 0.0; ai = ai->ai_next) {
            int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
            if (fd < 0) continue;
            ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL, 0) | O_NONBLOCK);

            const auto start = std::chrono::steady_clock::now();
            int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
            bool connected = (rc == 0);
            if (!connected && errno == EINPROGRESS) {
                pollfd pfd{fd, POLLOUT, 0};
                if (::poll(&pfd, 1, timeout_ms_) == 1) {
                    int err = 0;
                    socklen_t len = sizeof(err);
                    connected = ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) == 0 && err == 0;
                }
            }
            if (connected) {
                const auto end = std::chrono::steady_clock::now();
                elapsed = std::chrono::duration<double, std::milli>(end - start).count();
            }
            ::close(fd);
        }
        ::freeaddrinfo(addrs);
        if (elapsed < 0.0) throw FetchError("connect to " + host + " failed");
        return elapsed;
    }

private:
    int timeout_ms_;
};

// Weighted multi-location latency: per location the median of its attempts,
// then the weighted sum. Failed locations drop out and the remaining weights
// are renormalized; if every location fails, AllProbesFailedError.
inline double probe_latency(const std::string& host, const ProbePlan& plan, LatencyProber& prober,
                            Clock& clock = system_clock_instance()) {
    plan.check();

    struct Observation {
        double weight;
        double median;
    };
    std::vector<Observation> surviving;
    for (const auto& loc : plan.locations) {
        std::vector<double> samples;
        for (int a = 0; a < plan.attempts_per_location; ++a) {
            if (a > 0 && plan.attempt_spacing_ms > 0) clock.sleep_ms(plan.attempt_spacing_ms);
            try {
                samples.push_back(prober.measure_ms(loc.probe_id, host));
            } catch (const Error&) {
                // a failed attempt just thins the sample
            }
        }
        if (samples.empty()) continue;
        std::sort(samples.begin(), samples.end());
        const std::size_t n = samples.size();
        const double median = n % 2 == 1 ? samples[n / 2]
                                         : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
        surviving.push_back(Observation{loc.weight, median});
    }
    if (surviving.empty()) throw AllProbesFailedError("no probe location produced a measurement");

    double weight_sum = 0.0;
    for (const auto& o : surviving) weight_sum += o.weight;
    double result = 0.0;
    if (weight_sum > 0.0) {
        for (const auto& o : surviving) result += (o.weight / weight_sum) * o.median;
    } else {
        for (const auto& o : surviving) result += o.median / static_cast<double>(surviving.size());
    }
    return result;
}

// ---------------------------------------------------------------------------
// Snapshot collection

struct CollectOptions {
    std::size_t parallelism = 4;
    std::string label;
    // When set and no source targets it, the latency indicator is filled by
    // probing instead of fetching.
    std::optional<ProbePlan> probe_plan;
    std::string ping_indicator_id = "speed_ping_ms";
};

struct CollectionReport {
    std::vector<CellError> errors;
};

// Collects every (entity, indicator) cell concurrently with per-source rate
// limiting. Any pre-existing values on the input entities are discarded; all
// slots end up holding a RawValue, Missing where nothing could be collected.
// Assembly is deterministic: cells ordered by entity then indicator, snapshot
// timestamp = latest collected cell timestamp.
inline Snapshot collect_snapshot(const IndicatorSet& set, std::vector<EntityRecord> entities,
                                 const std::vector<SourceDescriptor>& sources, Transport& transport,
                                 const CollectOptions& opts = {}, LatencyProber* prober = nullptr,
                                 CollectionReport* report = nullptr,
                                 Clock& clock = system_clock_instance()) {
    if (entities.empty()) throw EmptyInputError("no entities to collect");
    if (sources.empty()) throw EmptyInputError("no sources to collect from");

    std::map<std::string, const SourceDescriptor*> source_by_indicator;
    for (const auto& src : sources) {
        src.check();
        if (!set.contains(src.indicator_id))
            throw SchemaError("source " + src.source_id + " targets unknown indicator " +
                              src.indicator_id);
        if (!source_by_indicator.emplace(src.indicator_id, &src).second)
            throw SchemaError("two sources target indicator " + src.indicator_id);
    }

    const bool probe_ping = opts.probe_plan && prober && set.contains(opts.ping_indicator_id) &&
                            !source_by_indicator.count(opts.ping_indicator_id);
    if (probe_ping) opts.probe_plan->check();

    std::map<std::string, std::unique_ptr<RateLimiter>> limiters;
    for (const auto& src : sources)
        if (!limiters.count(src.source_id))
            limiters.emplace(src.source_id,
                             std::make_unique<RateLimiter>(src.rate_limit_per_sec, clock));

    struct Task {
        std::size_t entity_index;
        const SourceDescriptor* source; // null for a probe task
        std::string indicator_id;
    };
    struct Cell {
        RawValue value;
        std::optional<CellError> error;
    };

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        for (const auto& src : sources) tasks.push_back(Task{i, &src, src.indicator_id});
        if (probe_ping) tasks.push_back(Task{i, nullptr, opts.ping_indicator_id});
    }

    std::vector<Cell> cells(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];
            const EntityRecord& entity = entities[task.entity_index];
            try {
                if (task.source) {
                    std::vector<CellError> errs;
                    cells[i].value = collect_value(entity, *task.source, transport,
                                                   limiters.at(task.source->source_id).get(), &errs);
                    if (!errs.empty()) cells[i].error = errs.front();
                } else {
                    const std::string& host = entity.host.empty() ? entity.slug : entity.host;
                    double ms = probe_latency(host, *opts.probe_plan, *prober, clock);
                    cells[i].value = RawValue::number(ms, Provenance::collected("probe", clock.now_ms()));
                }
            } catch (const std::exception& ex) {
                cells[i].value = RawValue::missing(Provenance::collected(
                    task.source ? task.source->source_id : "probe", 0));
                cells[i].error = CellError{entity.slug, task.indicator_id,
                                           task.source ? task.source->source_id : "probe", ex.what()};
            }
        }
    };

    const std::size_t thread_count = std::max<std::size_t>(1, std::min(opts.parallelism, tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::int64_t latest_ms = 0;
    for (std::size_t i = 0; i < entities.size(); ++i) entities[i].values.clear();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        entities[tasks[i].entity_index].values[tasks[i].indicator_id] = cells[i].value;
        const Provenance& p = cells[i].value.provenance();
        if (p.kind == Provenance::Kind::Collected) latest_ms = std::max(latest_ms, p.timestamp_ms);
        if (report && cells[i].error) report->errors.push_back(*cells[i].error);
    }
    for (auto& e : entities) {
        for (const auto& spec : set.specs())
            if (!e.values.count(spec.id))
                e.values.emplace(spec.id, RawValue::missing(Provenance::collected("", 0)));
    }

    return Snapshot(set, std::move(entities), latest_ms, opts.label);
}

// Descriptor examples for the 2013-era sources. The hosts are placeholders
// (.invalid); these are meant to be exercised through cassettes.
inline std::vector<SourceDescriptor> example_source_descriptors() {
    return {
        {"facebook-graph", "fb_likes", "http://graph.facebook.invalid/{host}", "json:/likes", 2.0},
        {"facebook-graph-page", "fb_has_page", "http://graph.facebook.invalid/page/{host}", "exists", 2.0},
        {"site-value-agent", "site_value_usd", "http://siteworth.invalid/appraise?site={host}", "number", 1.0},
        {"yahoo-siteexplorer", "yahoo_backlinks",
         "http://siteexplorer.search.yahoo.invalid/search?p=link:{host}", "number", 2.0},
        {"google-search", "google_backlinks", "http://google.invalid/search?q=link:{host}",
         "regex:about ([0-9]+) results", 1.0},
        {"dmoz-directory", "dmoz_listed", "http://dmoz.invalid/site/{host}", "exists", 2.0},
        {"google-index", "google_indexed", "http://google.invalid/search?q=site:{host}",
         "regex:about ([0-9]+) results", 1.0},
        {"yahoo-index", "yahoo_indexed", "http://search.yahoo.invalid/search?p=site:{host}", "number", 2.0},
        {"alexa-data", "daily_unique_visitors", "http://data.alexa.invalid/data?cli=10&url={host}",
         "json:/visitors", 2.0},
        {"plagiarism-robot", "plagiarism_count", "http://plagscan.invalid/scan?site={host}", "number", 1.0},
        {"alexa-rank", "alexa_rank", "http://data.alexa.invalid/rank?url={host}", "number", 2.0},
        {"alexa-bounce", "alexa_bounce", "http://data.alexa.invalid/bounce?url={host}", "number", 2.0},
        {"alexa-pageviews", "pageviews_per_user", "http://data.alexa.invalid/pv?url={host}", "number", 2.0},
        {"alexa-time", "time_on_site_s", "http://data.alexa.invalid/tos?url={host}", "number", 2.0},
        {"alexa-linksin", "sites_linking_in", "http://data.alexa.invalid/linksin?url={host}", "number", 2.0},
    };
}

inline std::vector<SourceDescriptor> load_sources(const std::filesystem::path& path) {
    std::vector<SourceDescriptor> out;
    try {
        nlohmann::json j = nlohmann::json::parse(wri::detail::read_file(path));
        for (const auto& js : j) {
            SourceDescriptor src;
            src.source_id = js.at("source_id").get<std::string>();
            src.indicator_id = js.at("indicator_id").get<std::string>();
            src.endpoint_template = js.at("endpoint_template").get<std::string>();
            src.extraction_rule = js.at("extraction_rule").get<std::string>();
            src.rate_limit_per_sec = js.value("rate_limit_per_sec", 1.0);
            src.check();
            out.push_back(std::move(src));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
    return out;
}

} // namespace wri
