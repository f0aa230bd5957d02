#pragma once

#include "pivotgrowth/bounds.hpp"
#include "pivotgrowth/repair.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pivotgrowth {

struct VerificationReport {
    bool passed = false;
    std::size_t n = 0;
    PivotStrategy strategy = PivotStrategy::Complete;
    Rational stored_growth;
    Rational computed_growth;
    std::optional<std::size_t> failing_step;  // 1-based, when the predicate fails
    std::size_t max_bits = 0;
    std::string diagnostic;
};

/// Recomputes everything from the matrix; the stored growth is only compared.
VerificationReport verify_certificate(const GrowthCertificate& cert);
/// Throws ParseError on malformed files.
VerificationReport verify_certificate(const std::filesystem::path& path);

struct LedgerEntry {
    std::size_t n = 0;
    PivotStrategy strategy = PivotStrategy::Complete;
    std::string path;  // relative to the ledger root; empty for paper-reported values
    Rational growth;
    std::string source;
    std::string timestamp;
};

struct LedgerDelta {
    std::optional<LedgerEntry> previous;
    LedgerEntry current;
};

/// Directory store:
///   index.json           "n:strategy" -> best certified entry
///   certs/*.json         canonical certificate files
///   history.jsonl        one line per accepted or rejected update
///   paper_reported.json  published values, kept apart from certified ones
/// Writers serialize through an exclusive lock on `.lock`.
class Ledger {
public:
    explicit Ledger(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    /// Certified entries (local-search and imported), sorted by strategy then n.
    std::vector<LedgerEntry> entries() const;
    std::vector<LedgerEntry> paper_entries() const;
    std::optional<LedgerEntry> find(std::size_t n, PivotStrategy strategy) const;

    /// Verifies, then stores the certificate iff its growth strictly exceeds
    /// the current entry. Throws VerificationFailed or RejectedNotBetter.
    LedgerDelta update(const GrowthCertificate& cert, const std::string& source = kSourceLocal);

    /// Records published values under the paper-reported tag.
    std::size_t import_paper(const LowerBoundTable& table);

    /// Certified values, plus paper-reported ones where they are larger if asked.
    LowerBoundTable lower_bounds(PivotStrategy strategy, bool include_paper = false) const;

    /// Re-verifies every certified entry against its certificate file.
    std::vector<VerificationReport> reverify(unsigned jobs = 1) const;

    std::vector<nlohmann::json> history() const;

private:
    std::filesystem::path root_;
};

struct TableRow {
    std::size_t n = 0;
    Rational value;
    std::string source;
};

struct ReportTable {
    std::vector<TableRow> rows;
    std::string text;
    nlohmann::json json;
};

/// Rows for n in [from, to] with n, bound (exact and decimal), bound / n and source.
ReportTable report_table(const LowerBoundTable& table, std::size_t from, std::size_t to);
ReportTable report_table(const Ledger& ledger, PivotStrategy strategy, std::size_t from, std::size_t to,
                         bool include_paper = true);

} // namespace pivotgrowth
