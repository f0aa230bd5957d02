#include "pivotgrowth/ledger.hpp"

#include "pivotgrowth/errors.hpp"
#include "pivotgrowth/io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace pivotgrowth {

using nlohmann::json;
namespace fs = std::filesystem;

VerificationReport verify_certificate(const GrowthCertificate& cert) {
    VerificationReport r;
    r.n = cert.matrix.n();
    r.strategy = cert.strategy;
    r.stored_growth = cert.growth;
    if (r.n == 0) {
        r.diagnostic = "empty matrix";
        return r;
    }
    EliminationTrace trace;
    try {
        trace = eliminate(cert.matrix);
    } catch (const ZeroPivot& e) {
        r.failing_step = e.step();
        r.diagnostic = e.what();
        return r;
    }
    r.computed_growth = trace.growth;
    r.max_bits = std::max(trace.max_numerator_bits, trace.max_denominator_bits);
    const PivotCheck check = check_pivoted(trace, cert.strategy);
    if (!check.pivoted) {
        r.failing_step = check.failing_step;
        r.diagnostic = check.diagnostic;
        return r;
    }
    if (trace.growth != cert.growth) {
        r.diagnostic = "growth mismatch: stored " + to_string(cert.growth) + ", computed " + to_string(trace.growth);
        return r;
    }
    r.passed = true;
    r.diagnostic = "ok: " + std::string(to_string(cert.strategy)) + " pivoted, growth " + to_string(trace.growth);
    return r;
}

VerificationReport verify_certificate(const fs::path& path) {
    return verify_certificate(certificate_from_json(read_json_file(path)));
}

namespace {

std::string key_for(std::size_t n, PivotStrategy strategy) {
    return std::to_string(n) + ":" + std::string(to_string(strategy));
}

std::pair<std::size_t, PivotStrategy> parse_key(const std::string& key) {
    const auto colon = key.find(':');
    if (colon == std::string::npos) throw ParseError("bad ledger key '" + key + "'");
    return {std::stoul(key.substr(0, colon)), parse_strategy(key.substr(colon + 1))};
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& root) {
        fs::create_directories(root);
        const fs::path file = root / ".lock";
        fd_ = ::open(file.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) throw Error("cannot open lock file " + file.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error("cannot lock " + file.string());
        }
    }
    ~DirectoryLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    int fd_ = -1;
};

json read_object(const fs::path& path) {
    if (!fs::exists(path)) return json::object();
    json v = read_json_file(path);
    if (!v.is_object()) throw ParseError(path.string() + ": expected a JSON object");
    return v;
}

LedgerEntry entry_from(const std::string& key, const json& v) {
    LedgerEntry e;
    std::tie(e.n, e.strategy) = parse_key(key);
    e.growth = parse_rational(v.at("growth").get<std::string>());
    e.path = v.value("path", "");
    e.source = v.value("source", "");
    e.timestamp = v.value("timestamp", "");
    return e;
}

json entry_to(const LedgerEntry& e) {
    json v{{"growth", to_string(e.growth)}, {"source", e.source}, {"timestamp", e.timestamp}};
    if (!e.path.empty()) v["path"] = e.path;
    return v;
}

std::vector<LedgerEntry> entries_of(const json& index) {
    std::vector<LedgerEntry> out;
    for (const auto& [key, v] : index.items()) out.push_back(entry_from(key, v));
    std::sort(out.begin(), out.end(), [](const LedgerEntry& a, const LedgerEntry& b) {
        if (a.strategy != b.strategy) return a.strategy < b.strategy;
        return a.n < b.n;
    });
    return out;
}

void append_line(const fs::path& path, const json& line) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot append to " + path.string());
    out << line.dump() << "\n";
}

} // namespace

Ledger::Ledger(fs::path root) : root_(std::move(root)) {}

std::vector<LedgerEntry> Ledger::entries() const { return entries_of(read_object(root_ / "index.json")); }

std::vector<LedgerEntry> Ledger::paper_entries() const {
    return entries_of(read_object(root_ / "paper_reported.json"));
}

std::optional<LedgerEntry> Ledger::find(std::size_t n, PivotStrategy strategy) const {
    const json index = read_object(root_ / "index.json");
    const std::string key = key_for(n, strategy);
    if (!index.contains(key)) return std::nullopt;
    return entry_from(key, index.at(key));
}

LedgerDelta Ledger::update(const GrowthCertificate& cert, const std::string& source) {
    const VerificationReport report = verify_certificate(cert);
    if (!report.passed) throw VerificationFailed(report.diagnostic);

    DirectoryLock lock(root_);
    json index = read_object(root_ / "index.json");
    const std::string key = key_for(cert.matrix.n(), cert.strategy);
    LedgerDelta delta;
    if (index.contains(key)) delta.previous = entry_from(key, index.at(key));

    const std::string now = utc_now();
    json line{{"time", now}, {"key", key}, {"growth", to_string(cert.growth)}, {"source", source}};
    if (delta.previous && cert.growth <= delta.previous->growth) {
        line["action"] = "rejected";
        append_line(root_ / "history.jsonl", line);
        throw RejectedNotBetter("growth " + to_decimal(cert.growth, 8) + " does not exceed the stored " +
                                to_decimal(delta.previous->growth, 8) + " for " + key);
    }

    GrowthCertificate stored = cert;
    stored.verified_at_bits = report.max_bits;
    const std::string text = canonical_dump(certificate_to_json(stored));
    const std::string rel = "certs/" + std::to_string(cert.matrix.n()) + "-" +
                            std::string(to_string(cert.strategy)) + "-" + fnv1a_hex(text) + ".json";
    write_text_atomic(root_ / rel, text);

    delta.current = LedgerEntry{cert.matrix.n(), cert.strategy, rel, cert.growth, source, now};
    index[key] = entry_to(delta.current);
    write_text_atomic(root_ / "index.json", canonical_dump(index));
    line["action"] = "accepted";
    line["path"] = rel;
    append_line(root_ / "history.jsonl", line);
    return delta;
}

std::size_t Ledger::import_paper(const LowerBoundTable& table) {
    DirectoryLock lock(root_);
    json reported = read_object(root_ / "paper_reported.json");
    const std::string now = utc_now();
    std::size_t count = 0;
    for (const auto& [n, e] : table.entries) {
        LedgerEntry entry{n, table.strategy, "", e.value, kSourcePaper, now};
        reported[key_for(n, table.strategy)] = entry_to(entry);
        ++count;
    }
    write_text_atomic(root_ / "paper_reported.json", canonical_dump(reported));
    append_line(root_ / "history.jsonl", json{{"time", now},
                                              {"action", "import-paper"},
                                              {"strategy", std::string(to_string(table.strategy))},
                                              {"count", count}});
    return count;
}

LowerBoundTable Ledger::lower_bounds(PivotStrategy strategy, bool include_paper) const {
    LowerBoundTable table;
    table.strategy = strategy;
    for (const auto& e : entries())
        if (e.strategy == strategy) table.set(e.n, e.growth, e.source);
    if (include_paper)
        for (const auto& e : paper_entries()) {
            if (e.strategy != strategy) continue;
            const auto have = table.at(e.n);
            if (!have || e.growth > *have) table.set(e.n, e.growth, kSourcePaper);
        }
    return table;
}

std::vector<VerificationReport> Ledger::reverify(unsigned jobs) const {
    const std::vector<LedgerEntry> all = entries();
    std::vector<VerificationReport> out(all.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < all.size();) {
            const LedgerEntry& e = all[i];
            VerificationReport& r = out[i];
            try {
                r = verify_certificate(root_ / e.path);
                if (r.passed && (r.computed_growth != e.growth || r.n != e.n || r.strategy != e.strategy)) {
                    r.passed = false;
                    r.diagnostic = "index entry " + key_for(e.n, e.strategy) + " disagrees with " + e.path;
                }
            } catch (const Error& err) {
                r = VerificationReport{};
                r.n = e.n;
                r.strategy = e.strategy;
                r.diagnostic = e.path + ": " + err.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

std::vector<json> Ledger::history() const {
    std::vector<json> out;
    std::ifstream in(root_ / "history.jsonl");
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(json::parse(line));
    return out;
}

ReportTable report_table(const LowerBoundTable& table, std::size_t from, std::size_t to) {
    ReportTable out;
    out.json = json::array();
    std::ostringstream text;
    char head[128];
    std::snprintf(head, sizeof head, "%5s  %-24s  %14s  %8s  %s\n", "n", "g >= (exact)", "decimal", "g / n",
                  "source");
    text << head;
    for (const auto& [n, e] : table.entries) {
        if (n < from || n > to) continue;
        out.rows.push_back({n, e.value, e.source});
        const std::string exact = to_string(e.value);
        const Rational ratio = e.value / Rational(static_cast<unsigned long>(n));
        char line[256];
        std::snprintf(line, sizeof line, "%5zu  %-24s  %14s  %8s  %s\n", n,
                      exact.size() <= 24 ? exact.c_str() : "(long, see json)", to_decimal(e.value, 6).c_str(),
                      to_decimal(ratio, 4).c_str(), e.source.c_str());
        text << line;
        out.json.push_back(json{{"n", n},
                                {"strategy", std::string(to_string(table.strategy))},
                                {"lower_bound", exact},
                                {"decimal", to_decimal(e.value, 12)},
                                {"ratio", to_decimal(ratio, 12)},
                                {"source", e.source}});
    }
    out.text = out.rows.empty() ? std::string() : text.str();
    return out;
}

ReportTable report_table(const Ledger& ledger, PivotStrategy strategy, std::size_t from, std::size_t to,
                         bool include_paper) {
    return report_table(ledger.lower_bounds(strategy, include_paper), from, to);
}

} // namespace pivotgrowth
