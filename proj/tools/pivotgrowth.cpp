// Command-line front end: search, verify, repair, bounds, construct, embed,
// floatsim, table.

#include "pivotgrowth/bounds.hpp"
#include "pivotgrowth/constructions.hpp"
#include "pivotgrowth/errors.hpp"
#include "pivotgrowth/floatsim.hpp"
#include "pivotgrowth/io.hpp"
#include "pivotgrowth/ledger.hpp"
#include "pivotgrowth/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace pivotgrowth;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Globals {
    unsigned jobs = 1;
    std::uint64_t seed = 1;
    unsigned precision = 128;
};

// Usage mistakes in values that CLI11 cannot validate on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PivotStrategy strategy_arg(const std::string& name) {
    try {
        return parse_strategy(name);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text_atomic(out, text);
}

// Accepts either a bare matrix or a certificate holding one.
RationalMatrix load_matrix(const std::string& path) {
    const json v = read_json_file(path);
    if (v.is_object() && v.contains("matrix")) return matrix_from_json(v.at("matrix"));
    return matrix_from_json(v);
}

void print_report(const std::string& label, const VerificationReport& r) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << label << ": n=" << r.n << " " << to_string(r.strategy);
    if (r.passed) std::cout << " growth " << to_string(r.computed_growth) << " (~" << to_decimal(r.computed_growth, 8) << ")";
    else std::cout << " " << r.diagnostic;
    std::cout << "\n";
}

GrowthModel model_arg(const std::string& name) {
    if (name == "3n" || name == "linear") return GrowthModel::linear();
    if (name == "n2/2" || name == "half-square") return GrowthModel::half_square();
    if (name == "wilkinson") return GrowthModel::wilkinson();
    throw UsageError("unknown growth model '" + name + "' (use 3n, n2/2 or wilkinson)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Growth factors of Gaussian elimination: search, exact certificates, bounds"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--jobs,-j", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--precision", g.precision, "MPFR precision in bits")->check(CLI::Range(32u, 1u << 20));

    std::function<int()> action;

    // search
    auto* search = app.add_subcommand("search", "multistart growth search with exact certification");
    SearchConfig scfg;
    std::string s_strategy = "cp", s_out, s_ledger;
    search->add_option("--n", scfg.n, "dimension")->required()->check(CLI::PositiveNumber);
    search->add_option("--strategy", s_strategy, "cp or rook");
    search->add_option("--restarts", scfg.restarts, "number of random starts")->check(CLI::PositiveNumber);
    search->add_option("--certify-top", scfg.certify_top, "float candidates sent to exact repair");
    search->add_option("--out", s_out, "certificate path (default stdout)");
    search->add_option("--ledger", s_ledger, "ledger directory to update");
    search->callback([&] {
        action = [&] {
            scfg.strategy = strategy_arg(s_strategy);
            if (scfg.strategy != PivotStrategy::Complete && scfg.strategy != PivotStrategy::Rook)
                throw UsageError("search supports cp and rook");
            scfg.seed = g.seed;
            scfg.parallelism = g.jobs;
            double best = 0;
            const SearchResult res = multistart_search(scfg, [&](const RestartRecord& r, std::size_t done, std::size_t total) {
                best = std::max(best, r.objective);
                std::cerr << "restart " << r.restart << " [" << done << "/" << total << "] objective " << r.objective
                          << " residual " << r.residual << " best " << best
                          << (r.diagnostic.empty() ? "" : " (" + r.diagnostic + ")") << "\n";
            });
            std::cerr << "certified growth " << to_decimal(res.certificate.growth, 10) << " from restart "
                      << res.best_restart << "\n";
            emit(s_out, canonical_dump(certificate_to_json(res.certificate)));
            if (!s_ledger.empty()) {
                try {
                    Ledger(s_ledger).update(res.certificate, kSourceLocal);
                    std::cerr << "ledger updated\n";
                } catch (const RejectedNotBetter& e) {
                    std::cerr << "ledger unchanged: " << e.what() << "\n";
                }
            }
            return kOk;
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "re-verify certificate files from scratch");
    std::vector<std::string> v_files;
    verify->add_option("files", v_files, "certificate JSON files")->required()->check(CLI::ExistingFile);
    verify->callback([&] {
        action = [&] {
            int rc = kOk;
            for (const auto& f : v_files) {
                const VerificationReport r = verify_certificate(std::filesystem::path(f));
                print_report(f, r);
                if (!r.passed) rc = kFailed;
            }
            return rc;
        };
    });

    // repair
    auto* repair = app.add_subcommand("repair", "turn a nearly pivoted matrix into an exact certificate");
    std::string r_input, r_out, r_strategy = "cp";
    repair->add_option("--input", r_input, "matrix or certificate JSON")->required()->check(CLI::ExistingFile);
    repair->add_option("--strategy", r_strategy, "cp or rook");
    repair->add_option("--out", r_out, "certificate path (default stdout)");
    repair->callback([&] {
        action = [&] {
            const PivotStrategy st = strategy_arg(r_strategy);
            RationalMatrix m = load_matrix(r_input);
            GrowthCertificate cert;
            if (st == PivotStrategy::Complete) cert = cp_repair(m);
            else if (st == PivotStrategy::Rook) cert = rook_repair(m);
            else throw UsageError("repair supports cp and rook");
            std::cerr << "repaired growth " << to_decimal(cert.growth, 10) << "\n";
            emit(r_out, canonical_dump(certificate_to_json(cert)));
            return kOk;
        };
    });

    // bounds
    auto* bounds = app.add_subcommand("bounds", "upper bounds, best known and extrapolated lower bounds");
    std::size_t b_n = 0;
    std::string b_strategy = "cp", b_ledger;
    bool b_paper = false;
    bounds->add_option("--n", b_n, "dimension")->check(CLI::PositiveNumber);
    bounds->add_option("--strategy", b_strategy, "cp or rook");
    bounds->add_option("--ledger", b_ledger, "ledger directory with certified lower bounds");
    bounds->add_flag("--include-paper", b_paper, "also use published values");
    auto* table4 = bounds->add_subcommand("table4", "largest n per mantissa length and growth model");
    auto* mantissa = bounds->add_subcommand("mantissa", "mantissa digits needed at dimension n");
    std::uint64_t m_n = 0;
    std::string m_model = "3n", m_c = "1/2";
    unsigned m_beta = 2;
    mantissa->add_option("--n", m_n, "dimension")->required()->check(CLI::PositiveNumber);
    mantissa->add_option("--model", m_model, "3n, n2/2 or wilkinson");
    mantissa->add_option("--C", m_c, "allowed relative loss, in (0,1)");
    mantissa->add_option("--beta", m_beta, "base")->check(CLI::Range(2u, 1u << 16));

    auto run_table4 = [&] {
        const Rational half(1, 2);
        std::cout << "    t  model        max n\n";
        for (std::uint64_t t : {52u, 112u})
            for (const auto& model : {GrowthModel::linear(), GrowthModel::half_square(), GrowthModel::wilkinson()})
                std::cout << std::setw(5) << t << "  " << std::setw(11) << std::left << model.name() << std::right
                          << "  " << max_n_for_mantissa(t, model, half, 2, g.precision) << "\n";
        return kOk;
    };
    table4->callback([&] { action = run_table4; });
    mantissa->callback([&] {
        action = [&] {
            const Rational c = parse_rational(m_c);
            if (c <= 0 || c >= 1) throw UsageError("--C must lie in (0,1)");
            std::cout << mantissa_requirement(m_n, model_arg(m_model), c, m_beta, g.precision) << "\n";
            return kOk;
        };
    });
    bounds->callback([&] {
        if (action) return;
        action = [&] {
            if (b_n == 0) throw UsageError("bounds needs --n or a subcommand");
            const PivotStrategy st = strategy_arg(b_strategy);
            LowerBoundTable table;
            table.strategy = st;
            if (!b_ledger.empty()) table = Ledger(b_ledger).lower_bounds(st, b_paper);
            else if (b_paper) table = st == PivotStrategy::Rook ? published_rook_table() : published_complete_table();
            const BoundReport r = bound_report(b_n, st, table, g.precision);
            std::cout << "n " << r.n << ", " << to_string(r.strategy) << "\n"
                      << "complete pivoting upper bound  " << r.wilkinson_upper.upper_string(12) << "\n"
                      << "rook pivoting upper bound      " << r.foster_upper.upper_string(12) << "\n";
            if (r.best_known_lower)
                std::cout << "best known lower bound         " << to_decimal(*r.best_known_lower, 8) << " ("
                          << r.best_known_source << ")\n";
            std::cout << "extrapolated lower bound       " << to_decimal(r.extrapolated_lower, 8) << "\n"
                      << "derivation                     " << r.derivation << "\n";
            return kOk;
        };
    });

    // construct
    auto* construct = app.add_subcommand("construct", "explicit matrices and closure operations");
    construct->require_subcommand(1);
    std::string c_out;
    construct->add_option("--out", c_out, "matrix path (default stdout)");
    auto* c_had = construct->add_subcommand("hadamard", "Sylvester Hadamard matrix of order 2^k");
    unsigned c_k = 1;
    c_had->add_option("--k", c_k, "exponent")->required()->check(CLI::Range(0u, 12u));
    c_had->callback([&] { action = [&] { emit(c_out, canonical_dump(matrix_to_json(sylvester_hadamard(c_k)))); return kOk; }; });
    auto* c_wil = construct->add_subcommand("wilkinson", "partial pivoting worst case");
    std::size_t c_n = 2;
    c_wil->add_option("--n", c_n, "dimension")->required()->check(CLI::PositiveNumber);
    c_wil->callback([&] { action = [&] { emit(c_out, canonical_dump(matrix_to_json(wilkinson_pp_matrix(c_n)))); return kOk; }; });
    std::string c_input, c_b;
    auto* c_kh = construct->add_subcommand("kron-h1", "double a completely pivoted matrix");
    c_kh->add_option("--input", c_input)->required()->check(CLI::ExistingFile);
    c_kh->callback([&] { action = [&] { emit(c_out, canonical_dump(matrix_to_json(cp_kron_h1(load_matrix(c_input))))); return kOk; }; });
    auto* c_rk = construct->add_subcommand("rook-kron", "Kronecker product of rook pivoted matrices");
    c_rk->add_option("--a", c_input)->required()->check(CLI::ExistingFile);
    c_rk->add_option("--b", c_b)->required()->check(CLI::ExistingFile);
    c_rk->callback([&] {
        action = [&] { emit(c_out, canonical_dump(matrix_to_json(rp_kron(load_matrix(c_input), load_matrix(c_b))))); return kOk; };
    });
    auto* c_border = construct->add_subcommand("border", "add a leading unit row and column");
    c_border->add_option("--input", c_input)->required()->check(CLI::ExistingFile);
    c_border->callback([&] { action = [&] { emit(c_out, canonical_dump(matrix_to_json(border(load_matrix(c_input))))); return kOk; }; });
    auto* c_tor = construct->add_subcommand("tornheim", "complex 3x3 example in MPFR arithmetic");
    c_tor->callback([&] {
        action = [&] {
            const ComplexEliminationReport r = tornheim_complex3(g.precision);
            std::cout << "growth " << r.growth << "\nerror vs 16/(3 sqrt 3) " << r.growth_error
                      << "\ncompletely pivoted " << (r.completely_pivoted ? "yes" : "no") << "\n";
            return kOk;
        };
    });

    // embed
    auto* embed = app.add_subcommand("embed", "0/1 matrix whose elimination approximates -A");
    std::string e_input, e_out;
    embed->add_option("--input", e_input, "completely pivoted matrix with a_11 = 1")->required()->check(CLI::ExistingFile);
    embed->add_option("--out", e_out, "matrix path (default stdout)");
    embed->callback([&] {
        action = [&] {
            const Embedding e = binary_embed(load_matrix(e_input));
            std::cerr << "size " << e.plan.m << ", gadgets " << e.plan.gadgets << ", bits " << e.plan.bit_depth
                      << ", trailing block after " << e.plan.prescribed_steps << " steps\n";
            json out = matrix_to_json(e.matrix);
            out["prescribed_steps"] = e.plan.prescribed_steps;
            emit(e_out, canonical_dump(out));
            return kOk;
        };
    });

    // floatsim
    auto* floatsim = app.add_subcommand("floatsim", "elimination in a base-beta, t-digit rounding model");
    floatsim->require_subcommand(1);
    auto* compare = floatsim->add_subcommand("compare", "float growth against exact growth");
    std::string f_input, f_strategy = "cp", f_c = "1/2";
    FloatFormat fmt;
    compare->add_option("--input", f_input)->required()->check(CLI::ExistingFile);
    compare->add_option("--beta", fmt.beta)->check(CLI::Range(2u, 1u << 16));
    compare->add_option("--t", fmt.t)->check(CLI::Range(1u, 1u << 16));
    compare->add_option("--strategy", f_strategy, "none, partial, rook or complete");
    compare->add_option("--C", f_c, "allowed relative loss");
    compare->callback([&] {
        action = [&] {
            const FloatComparison c =
                float_vs_exact_report(load_matrix(f_input), fmt, strategy_arg(f_strategy), parse_rational(f_c));
            std::cout << "exact growth " << to_decimal(c.exact_growth, 10) << "\nfloat growth "
                      << to_decimal(c.float_growth, 10) << "\nratio " << to_decimal(c.ratio, 10)
                      << (c.within ? " (within 1 + C)" : " (exceeds 1 + C)") << "\nenvelope "
                      << to_decimal(c.envelope_bound, 6) << (c.within_envelope ? " (holds)" : " (VIOLATED)") << "\n";
            if (!c.tie_steps.empty()) {
                std::cout << "pivot ties at steps";
                for (auto s : c.tie_steps) std::cout << " " << s;
                std::cout << "\n";
            }
            return c.within_envelope ? kOk : kFailed;
        };
    });
    auto* f_table4 = floatsim->add_subcommand("table4", "same as bounds table4");
    f_table4->callback([&] { action = run_table4; });

    // table
    auto* table = app.add_subcommand("table", "best-known lower bounds from a ledger");
    std::string t_ledger, t_strategy = "cp", t_json;
    std::size_t t_from = 1, t_to = 1000000;
    bool t_certified = false;
    table->add_option("--ledger", t_ledger, "ledger directory")->required();
    table->add_option("--strategy", t_strategy, "cp or rook");
    table->add_option("--from", t_from);
    table->add_option("--to", t_to);
    table->add_option("--json", t_json, "also write the rows as JSON");
    table->add_flag("--certified-only", t_certified, "hide paper-reported values");
    auto* t_import = table->add_subcommand("import-paper", "record the published tables, tagged paper-reported");
    auto* t_add = table->add_subcommand("add", "verify certificates and add improvements");
    std::vector<std::string> t_files;
    std::string t_source = kSourceImported;
    t_add->add_option("files", t_files)->required()->check(CLI::ExistingFile);
    t_add->add_option("--source", t_source, "local-search or imported");
    auto* t_reverify = table->add_subcommand("reverify", "re-verify every certified entry");
    t_import->callback([&] {
        action = [&] {
            Ledger l(t_ledger);
            const std::size_t a = l.import_paper(published_complete_table());
            const std::size_t b = l.import_paper(published_rook_table());
            std::cout << "imported " << a + b << " paper-reported values\n";
            return kOk;
        };
    });
    t_add->callback([&] {
        action = [&] {
            if (t_source != kSourceLocal && t_source != kSourceImported)
                throw UsageError("--source must be local-search or imported");
            Ledger l(t_ledger);
            int rc = kOk;
            for (const auto& f : t_files) {
                const GrowthCertificate cert = certificate_from_json(read_json_file(f));
                try {
                    const LedgerDelta d = l.update(cert, t_source);
                    std::cout << "accepted " << f << ": n=" << d.current.n << " growth "
                              << to_decimal(d.current.growth, 8) << "\n";
                } catch (const RejectedNotBetter& e) {
                    std::cout << "not better " << f << ": " << e.what() << "\n";
                } catch (const VerificationFailed& e) {
                    std::cout << "FAIL " << f << ": " << e.what() << "\n";
                    rc = kFailed;
                }
            }
            return rc;
        };
    });
    t_reverify->callback([&] {
        action = [&] {
            Ledger l(t_ledger);
            int rc = kOk;
            const auto entries = l.entries();
            const auto reports = l.reverify(g.jobs);
            for (std::size_t i = 0; i < reports.size(); ++i) {
                print_report(entries[i].path, reports[i]);
                if (!reports[i].passed) rc = kFailed;
            }
            return rc;
        };
    });
    table->callback([&] {
        if (action) return;
        action = [&] {
            const ReportTable r = report_table(Ledger(t_ledger), strategy_arg(t_strategy), t_from, t_to, !t_certified);
            std::cout << r.text;
            if (!t_json.empty()) write_text_atomic(t_json, canonical_dump(r.json));
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        return action ? action() : kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
}
