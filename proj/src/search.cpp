#include "pivotgrowth/search.hpp"

#include "pivotgrowth/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace pivotgrowth {

std::size_t PyramidCandidate::level_offset(std::size_t n, std::size_t k) {
    std::size_t off = 0;
    for (std::size_t l = 0; l < k; ++l) off += (n - l) * (n - l);
    return off;
}

std::vector<double> PyramidCandidate::matrix() const {
    return std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n * n));
}

PyramidCandidate pyramid_from_matrix(std::size_t n, const std::vector<double>& matrix) {
    if (n == 0 || matrix.size() != n * n) throw Error("pyramid_from_matrix: bad dimensions");
    PyramidCandidate c;
    c.n = n;
    c.x.assign(PyramidCandidate::size_for(n), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c.at(0, i, j) = matrix[i * n + j];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double p = c.at(k, k, k);
        if (p == 0) throw ZeroPivot(k + 1);
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                c.at(k + 1, i, j) = c.at(k, i, j) - c.at(k, i, k) * c.at(k, k, j) / p;
    }
    if (c.at(n - 1, n - 1, n - 1) == 0) throw ZeroPivot(n);
    double top = 0;
    for (double v : matrix) top = std::max(top, std::fabs(v));
    c.objective = std::fabs(c.at(n - 1, n - 1, n - 1)) / top;
    return c;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t restart, std::uint64_t attempt) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (restart * 0xD1B54A32D192ED03ULL);
    std::uint64_t b = splitmix64(s);
    s = b ^ (attempt * 0x8CB92BA72F3D8DD7ULL);
    return splitmix64(s);
}

// Reorders rows and columns of a double matrix so that elimination without
// pivoting follows the strategy. Returns false on a (numerically) zero pivot.
bool order_for_strategy(std::size_t n, std::vector<double>& a, PivotStrategy strategy) {
    std::vector<double> w = a;
    auto W = [&](std::size_t i, std::size_t j) -> double& { return w[i * n + j]; };
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        double best = 0;
        if (strategy == PivotStrategy::Complete) {
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (std::fabs(W(i, j)) > best) {
                        best = std::fabs(W(i, j));
                        pr = i;
                        pc = j;
                    }
        } else if (strategy == PivotStrategy::Rook) {
            // Alternate column and row maxima until stable.
            std::size_t r = k, c = k;
            for (std::size_t i = k; i < n; ++i)
                if (std::fabs(W(i, c)) > std::fabs(W(r, c))) r = i;
            for (int guard = 0; guard < 64; ++guard) {
                std::size_t c2 = c;
                for (std::size_t j = k; j < n; ++j)
                    if (std::fabs(W(r, j)) > std::fabs(W(r, c2))) c2 = j;
                std::size_t r2 = r;
                for (std::size_t i = k; i < n; ++i)
                    if (std::fabs(W(i, c2)) > std::fabs(W(r2, c2))) r2 = i;
                const bool stable = c2 == c && r2 == r;
                c = c2;
                r = r2;
                if (stable) break;
            }
            pr = r;
            pc = c;
            best = std::fabs(W(r, c));
        } else {
            for (std::size_t i = k; i < n; ++i)
                if (std::fabs(W(i, k)) > best) {
                    best = std::fabs(W(i, k));
                    pr = i;
                }
        }
        if (!(best > 1e-12)) return false;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(W(k, j), W(pr, j));
            std::swap(A(k, j), A(pr, j));
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(W(i, k), W(i, pc));
            std::swap(A(i, k), A(i, pc));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = W(i, k) / W(k, k);
            for (std::size_t j = k + 1; j < n; ++j) W(i, j) -= f * W(k, j);
        }
    }
    return true;
}

struct Equality {
    std::size_t next, cur, ik, kj, piv;
};

struct Inequality {
    std::size_t var, piv;  // sign * x[var] - x[piv] <= 0, or - 1 when bounded
    double sign;
    bool bounded = false;
};

class Problem {
public:
    Problem(std::size_t n, PivotStrategy strategy, double floor) : n_(n), floor_(floor) {
        fixed_corner_ = strategy == PivotStrategy::Complete;
        using PC = PyramidCandidate;
        auto idx = [&](std::size_t k, std::size_t i, std::size_t j) {
            return PC::level_offset(n, k) + (i - k) * (n - k) + (j - k);
        };
        size_ = PC::size_for(n);
        last_ = idx(n - 1, n - 1, n - 1);
        if (!fixed_corner_)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    ineqs_.push_back({idx(0, i, j), 0, 1.0, true});
                    ineqs_.push_back({idx(0, i, j), 0, -1.0, true});
                }
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t piv = idx(k, k, k);
            pivots_.push_back(piv);
            if (k + 1 < n)
                for (std::size_t i = k + 1; i < n; ++i)
                    for (std::size_t j = k + 1; j < n; ++j)
                        eqs_.push_back({idx(k + 1, i, j), idx(k, i, j), idx(k, i, k), idx(k, k, j), piv});
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    if (i == k && j == k) continue;
                    const bool constrained = strategy == PivotStrategy::Complete || i == k || j == k;
                    if (!constrained) continue;
                    ineqs_.push_back({idx(k, i, j), piv, 1.0});
                    ineqs_.push_back({idx(k, i, j), piv, -1.0});
                }
        }
        lambda_.assign(eqs_.size(), 0.0);
        mu_.assign(ineqs_.size() + pivots_.size(), 0.0);
    }

    std::size_t size() const { return size_; }
    double rho = 10;

    // Augmented Lagrangian value and gradient; +inf when a pivot collapses.
    double value(const std::vector<double>& x, std::vector<double>& g) const {
        std::fill(g.begin(), g.end(), 0.0);
        for (auto p : pivots_)
            if (!(x[p] > 1e-9)) return std::numeric_limits<double>::infinity();
        double f = -x[last_];
        g[last_] = -1;
        for (std::size_t e = 0; e < eqs_.size(); ++e) {
            const Equality& q = eqs_[e];
            const double p = x[q.piv], a = x[q.ik], b = x[q.kj];
            const double h = x[q.next] - x[q.cur] + a * b / p;
            const double c = lambda_[e] + rho * h;
            f += lambda_[e] * h + 0.5 * rho * h * h;
            g[q.next] += c;
            g[q.cur] -= c;
            g[q.ik] += c * b / p;
            g[q.kj] += c * a / p;
            g[q.piv] -= c * a * b / (p * p);
        }
        auto inequality = [&](std::size_t slot, double gv, std::size_t var, double dvar, std::size_t piv,
                              bool bounded) {
            const double t = mu_[slot] + rho * gv;
            if (t > 0) {
                f += (t * t - mu_[slot] * mu_[slot]) / (2 * rho);
                if (dvar != 0) g[var] += t * dvar;
                if (!bounded) g[piv] -= t;
            } else {
                f -= mu_[slot] * mu_[slot] / (2 * rho);
            }
        };
        for (std::size_t s = 0; s < ineqs_.size(); ++s) {
            const Inequality& q = ineqs_[s];
            inequality(s, gap(q, x), q.var, q.sign, q.piv, q.bounded);
        }
        for (std::size_t s = 0; s < pivots_.size(); ++s)
            inequality(ineqs_.size() + s, floor_ - x[pivots_[s]], pivots_[s], 0.0, pivots_[s], false);
        if (fixed_corner_) g[0] = 0;
        return f;
    }

    double violation(const std::vector<double>& x) const {
        double v = 0;
        for (const auto& q : eqs_) {
            const double h = x[q.next] - x[q.cur] + x[q.ik] * x[q.kj] / x[q.piv];
            v = std::max(v, std::fabs(h));
        }
        for (const auto& q : ineqs_) v = std::max(v, gap(q, x));
        for (auto p : pivots_) v = std::max(v, floor_ - x[p]);
        return v;
    }

    void update_multipliers(const std::vector<double>& x) {
        for (std::size_t e = 0; e < eqs_.size(); ++e) {
            const Equality& q = eqs_[e];
            lambda_[e] += rho * (x[q.next] - x[q.cur] + x[q.ik] * x[q.kj] / x[q.piv]);
        }
        for (std::size_t s = 0; s < ineqs_.size(); ++s) {
            const Inequality& q = ineqs_[s];
            mu_[s] = std::max(0.0, mu_[s] + rho * gap(q, x));
        }
        for (std::size_t s = 0; s < pivots_.size(); ++s) {
            const std::size_t slot = ineqs_.size() + s;
            mu_[slot] = std::max(0.0, mu_[slot] + rho * (floor_ - x[pivots_[s]]));
        }
    }

private:
    static double gap(const Inequality& q, const std::vector<double>& x) {
        return q.sign * x[q.var] - (q.bounded ? 1.0 : x[q.piv]);
    }

    std::size_t n_;
    double floor_;
    bool fixed_corner_ = true;
    std::size_t size_ = 0, last_ = 0;
    std::vector<std::size_t> pivots_;
    std::vector<Equality> eqs_;
    std::vector<Inequality> ineqs_;
    std::vector<double> lambda_, mu_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(const std::vector<double>& a) {
    double m = 0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

// Limited-memory BFGS with Armijo backtracking. Returns true on a small gradient.
bool lbfgs(const Problem& prob, std::vector<double>& x, int max_iter, double gtol, int memory) {
    const std::size_t dim = x.size();
    std::vector<double> g(dim), gn(dim), d(dim), xn(dim);
    std::vector<std::vector<double>> S, Y;
    std::vector<double> rhos;
    double f = prob.value(x, g);
    if (!std::isfinite(f)) return false;
    std::vector<double> alpha(memory);
    for (int it = 0; it < max_iter; ++it) {
        if (inf_norm(g) <= gtol) return true;
        // Two-loop recursion.
        d = g;
        const int m = static_cast<int>(S.size());
        for (int i = m - 1; i >= 0; --i) {
            alpha[i] = rhos[i] * dot(S[i], d);
            for (std::size_t t = 0; t < dim; ++t) d[t] -= alpha[i] * Y[i][t];
        }
        double gamma = 1.0;
        if (m > 0) gamma = dot(S[m - 1], Y[m - 1]) / dot(Y[m - 1], Y[m - 1]);
        for (auto& v : d) v *= gamma;
        for (int i = 0; i < m; ++i) {
            const double beta = rhos[i] * dot(Y[i], d);
            for (std::size_t t = 0; t < dim; ++t) d[t] += S[i][t] * (alpha[i] - beta);
        }
        for (auto& v : d) v = -v;
        double slope = dot(g, d);
        if (!(slope < 0)) {
            S.clear();
            Y.clear();
            rhos.clear();
            for (std::size_t t = 0; t < dim; ++t) d[t] = -g[t];
            slope = dot(g, d);
        }
        double step = 1.0;
        if (m == 0) step = std::min(1.0, 1.0 / std::max(inf_norm(g), 1e-12));
        double fn = 0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t t = 0; t < dim; ++t) xn[t] = x[t] + step * d[t];
            fn = prob.value(xn, gn);
            if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) return false;
        std::vector<double> s(dim), y(dim);
        for (std::size_t t = 0; t < dim; ++t) {
            s[t] = xn[t] - x[t];
            y[t] = gn[t] - g[t];
        }
        const double sy = dot(s, y);
        if (sy > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
            if (static_cast<int>(S.size()) == memory) {
                S.erase(S.begin());
                Y.erase(Y.begin());
                rhos.erase(rhos.begin());
            }
            S.push_back(std::move(s));
            Y.push_back(std::move(y));
            rhos.push_back(1.0 / sy);
        }
        const double df = f - fn;
        x.swap(xn);
        g.swap(gn);
        f = fn;
        if (df <= 1e-16 * std::max(1.0, std::fabs(f)) && inf_norm(g) <= 1e3 * gtol) return true;
    }
    return false;
}

} // namespace

PyramidCandidate random_start(std::size_t n, PivotStrategy strategy, std::uint64_t seed, std::uint64_t restart) {
    if (n == 0) throw Error("random_start needs n >= 1");
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        std::mt19937_64 rng(stream_seed(seed, restart, attempt));
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<double> a(n * n);
        for (auto& v : a) v = normal(rng);
        if (!order_for_strategy(n, a, strategy)) continue;
        // Rook starts are scaled so that max|a_ij| = 1 with a positive corner.
        double scale = a[0];
        if (strategy != PivotStrategy::Complete) {
            double top = 0;
            for (double v : a) top = std::max(top, std::fabs(v));
            scale = a[0] < 0 ? -top : top;
        }
        for (auto& v : a) v /= scale;
        PyramidCandidate c;
        try {
            c = pyramid_from_matrix(n, a);
        } catch (const ZeroPivot&) {
            continue;
        }
        // Flipping row k flips only the k-th pivot and its row.
        for (std::size_t k = 1; k < n; ++k)
            if (c.at(k, k, k) < 0)
                for (std::size_t j = 0; j < n; ++j) a[k * n + j] = -a[k * n + j];
        c = pyramid_from_matrix(n, a);
        bool degenerate = false;
        for (std::size_t k = 0; k < n; ++k)
            if (!(c.at(k, k, k) > 1e-9)) degenerate = true;
        if (degenerate) continue;
        c.residual = pyramid_residual(c, strategy);
        return c;
    }
    throw SearchFailed("random_start: every draw was degenerate");
}

double pyramid_residual(const PyramidCandidate& c, PivotStrategy strategy) {
    const std::size_t n = c.n;
    double r = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = c.at(k, k, k);
        if (k + 1 < n)
            for (std::size_t i = k + 1; i < n; ++i)
                for (std::size_t j = k + 1; j < n; ++j)
                    r = std::max(r, std::fabs(c.at(k + 1, i, j) - c.at(k, i, j) + c.at(k, i, k) * c.at(k, k, j) / p));
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                if (i == k && j == k) continue;
                const bool constrained = strategy == PivotStrategy::Complete ||
                                         (strategy == PivotStrategy::Rook && (i == k || j == k)) ||
                                         (strategy == PivotStrategy::Partial && j == k);
                if (constrained) r = std::max(r, std::fabs(c.at(k, i, j)) - std::fabs(p));
            }
    }
    return r;
}

OptimizeResult optimize_growth(const PyramidCandidate& start, PivotStrategy strategy,
                               const OptimizerOptions& options) {
    if (strategy != PivotStrategy::Complete && strategy != PivotStrategy::Rook)
        throw Error("optimize_growth supports complete and rook pivoting");
    OptimizeResult out;
    const std::size_t n = start.n;
    if (n == 1) {
        out.candidate = start;
        out.converged = true;
        return out;
    }
    if (pyramid_residual(start, strategy) > options.feasibility_start)
        throw Error("optimize_growth: start is not feasible");
    Problem prob(n, strategy, options.pivot_floor);
    prob.rho = options.initial_penalty;
    std::vector<double> x = start.x;
    double prev = std::numeric_limits<double>::infinity();
    double prev_objective = -std::numeric_limits<double>::infinity();
    for (int outer = 0; outer < options.max_outer; ++outer) {
        out.outer_iterations = outer + 1;
        const bool inner_ok = lbfgs(prob, x, options.max_inner, options.gradient_tol, options.lbfgs_memory);
        const double viol = prob.violation(x);
        const double objective = x.back();
        const bool settled = std::fabs(objective - prev_objective) <= 1e-12 * std::max(1.0, std::fabs(objective));
        prev_objective = objective;
        prob.update_multipliers(x);
        if (viol <= options.feasibility_tol && (inner_ok || settled)) {
            out.converged = true;
            break;
        }
        if (viol > 0.25 * prev) prob.rho = std::min(prob.rho * 10, options.max_penalty);
        prev = viol;
    }
    PyramidCandidate cand;
    cand.n = n;
    cand.x = x;
    // Recompute the pyramid from the level-0 matrix so the candidate is consistent.
    try {
        PyramidCandidate rebuilt = pyramid_from_matrix(n, cand.matrix());
        rebuilt.residual = pyramid_residual(rebuilt, strategy);
        out.candidate = std::move(rebuilt);
    } catch (const ZeroPivot& e) {
        cand.objective = x.back();
        cand.residual = std::numeric_limits<double>::infinity();
        out.candidate = std::move(cand);
        out.converged = false;
        out.diagnostic = e.what();
        return out;
    }
    if (out.candidate.objective < start.objective - 1e-8) {
        out.diagnostic = "stalled below the start";
        PyramidCandidate s = start;
        s.residual = pyramid_residual(s, strategy);
        out.candidate = std::move(s);
    }
    if (!out.converged && out.diagnostic.empty()) out.diagnostic = "outer iterations exhausted";
    return out;
}

GrowthCertificate certify_candidate(const PyramidCandidate& candidate, PivotStrategy strategy) {
    if (strategy != PivotStrategy::Complete && strategy != PivotStrategy::Rook)
        throw Error("certify_candidate supports complete and rook pivoting");
    const std::size_t n = candidate.n;
    const std::vector<double> m = candidate.matrix();
    RationalMatrix raw(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) raw(i, j) = from_double(m[i * n + j]);

    static const unsigned long denominators[] = {1,   2,   3,    4,    6,     8,       12,       16,        24,
                                                 32,  64,  128,  256,  1024,  4096,    65536,    1UL << 24, 1UL << 32};
    std::vector<std::pair<std::string, RationalMatrix>> variants;
    for (unsigned long d : denominators) {
        RationalMatrix s(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s(i, j) = best_rational_approximation(raw(i, j), Integer(d));
        variants.emplace_back("denominator<=" + std::to_string(d), std::move(s));
    }
    variants.emplace_back("exact-float", raw);

    std::optional<GrowthCertificate> best;
    for (auto& [label, mat] : variants) {
        try {
            RationalMatrix work = mat;
            bool reorder = false;
            try {
                for (const auto& e : pivot_slack(work, strategy))
                    if (e > Rational(1, 10000)) reorder = true;
            } catch (const ZeroPivot&) {
                reorder = true;
            }
            if (reorder) work = permute_for_strategy(work, strategy).matrix;
            GrowthCertificate cert = strategy == PivotStrategy::Rook ? rook_repair(work) : cp_repair(work);
            cert.source["rational_snap"] = label;
            if (reorder) cert.source["reordered"] = "true";
            if (!best || cert.growth > best->growth) best = std::move(cert);
        } catch (const Error&) {
            continue;
        }
    }
    if (!best) throw SearchFailed("no rational variant of the candidate could be certified");
    best->source["float_growth"] = std::to_string(candidate.objective);
    return *best;
}

SearchResult multistart_search(const SearchConfig& config, const ProgressCallback& progress) {
    if (config.n == 0) throw Error("search needs n >= 1");
    if (config.restarts == 0) throw Error("search needs at least one restart");
    const std::size_t total = config.restarts;
    std::vector<std::optional<OptimizeResult>> results(total);
    std::vector<RestartRecord> records(total);
    std::atomic<std::size_t> next{0}, done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= total) return;
            RestartRecord rec;
            rec.restart = r;
            try {
                PyramidCandidate start = random_start(config.n, config.strategy, config.seed, r);
                OptimizeResult res = optimize_growth(start, config.strategy, config.options);
                rec.objective = res.candidate.objective;
                rec.residual = res.candidate.residual;
                rec.converged = res.converged;
                rec.diagnostic = res.diagnostic;
                results[r] = std::move(res);
            } catch (const Error& e) {
                rec.diagnostic = e.what();
            }
            records[r] = rec;
            const std::size_t d = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(rec, d, total);
            }
        }
    };
    const unsigned jobs = std::max(1u, config.parallelism);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    // Certify the best few float candidates; lowest restart index wins ties.
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < total; ++r)
        if (results[r] && std::isfinite(results[r]->candidate.residual) && results[r]->candidate.residual < 1e-6)
            order.push_back(r);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return results[a]->candidate.objective > results[b]->candidate.objective;
    });
    SearchResult out;
    out.restarts = records;
    bool have = false;
    const std::size_t limit = std::min<std::size_t>(std::max<std::size_t>(config.certify_top, 1), order.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const std::size_t r = order[i];
        try {
            GrowthCertificate cert = certify_candidate(results[r]->candidate, config.strategy);
            if (!have || cert.growth > out.certificate.growth) {
                out.certificate = std::move(cert);
                out.best = results[r]->candidate;
                out.best_restart = r;
                have = true;
            }
        } catch (const Error&) {
            continue;
        }
    }
    if (!have) throw SearchFailed("all restarts failed to produce a certifiable candidate");
    out.certificate.source["seed"] = std::to_string(config.seed);
    out.certificate.source["restart"] = std::to_string(out.best_restart);
    out.certificate.source["restarts"] = std::to_string(config.restarts);
    return out;
}

} // namespace pivotgrowth
