#include "pivotgrowth/repair.hpp"

#include "pivotgrowth/errors.hpp"

namespace pivotgrowth {

namespace {

// levels[k](i, j) with both indices local to level k.
void add_to_earlier_levels(std::vector<RationalMatrix>& levels, std::size_t k, std::size_t i,
                           std::size_t j, const Rational& delta) {
    if (delta == 0) return;
    for (std::size_t l = 0; l < k; ++l) levels[l](i + k - l, j + k - l) += delta;
}

// Scales pivot by pivot_factor and the rest of its row and column by line_factor
// at level k, then carries the same additive change into every earlier level.
void scale_step(std::vector<RationalMatrix>& levels, std::size_t k, const Rational& pivot_factor,
                const Rational& line_factor) {
    RationalMatrix& level = levels[k];
    const std::size_t m = level.n();
    auto apply = [&](std::size_t i, std::size_t j, const Rational& factor) {
        const Rational old = level(i, j);
        if (old == 0) return;
        level(i, j) = old * factor;
        add_to_earlier_levels(levels, k, i, j, level(i, j) - old);
    };
    apply(0, 0, pivot_factor);
    for (std::size_t t = 1; t < m; ++t) {
        apply(0, t, line_factor);
        apply(t, 0, line_factor);
    }
}

Rational rook_line_max(const RationalMatrix& level) {
    Rational best = 0;
    for (std::size_t t = 1; t < level.n(); ++t) {
        if (abs(level(0, t)) > best) best = abs(level(0, t));
        if (abs(level(t, 0)) > best) best = abs(level(t, 0));
    }
    return best;
}

GrowthCertificate finish(EliminationTrace trace, PivotStrategy strategy, const EliminationTrace& input,
                         const std::vector<Rational>& input_slack) {
    const RationalMatrix repaired = trace.levels.front();
    GrowthCertificate cert = make_certificate(repaired, strategy);
    cert.source["input_growth"] = to_string(input.growth);
    cert.source["repair_inflation"] = to_string(repair_degradation_bound(input_slack, input.pivots()));
    return cert;
}

} // namespace

GrowthCertificate make_certificate(const RationalMatrix& matrix, PivotStrategy strategy,
                                   std::map<std::string, std::string> source) {
    const EliminationTrace trace = eliminate(matrix);
    const PivotCheck check = check_pivoted(trace, strategy);
    if (!check.pivoted) throw NotPivoted(check.diagnostic);
    GrowthCertificate cert;
    cert.matrix = matrix;
    cert.strategy = strategy;
    cert.growth = trace.growth;
    cert.source = std::move(source);
    cert.verified_at_bits = std::max(trace.max_numerator_bits, trace.max_denominator_bits);
    return cert;
}

GrowthCertificate cp_repair(const RationalMatrix& matrix) {
    const EliminationTrace input = eliminate(matrix);
    const auto slack = pivot_slack(input, PivotStrategy::Complete);
    for (std::size_t k = 0; k < slack.size(); ++k)
        if (slack[k] <= -1) throw SlackTooLarge("slack <= -1 at step " + std::to_string(k + 1));

    EliminationTrace work = input;
    auto& levels = work.levels;
    const std::size_t n = matrix.n();
    for (std::size_t k = n - 1; k-- > 0;) {
        const RationalMatrix& level = levels[k];
        const Rational p = abs(level(0, 0));
        const std::size_t m = level.n();
        Rational delta = 0;
        for (std::size_t t = 1; t < m; ++t) {
            const Rational r = abs(level(0, t)) / p;
            const Rational c = abs(level(t, 0)) / p;
            if (r * r > delta) delta = r * r;
            if (c * c > delta) delta = c * c;
        }
        for (std::size_t i = 1; i < m; ++i)
            for (std::size_t j = 1; j < m; ++j) {
                const Rational r = abs(level(i, j)) / p;
                if (r > delta) delta = r;
            }
        if (delta <= 1) continue;
        const Rational h = sqrt_round_up(delta);
        scale_step(levels, k, h * h, h);
    }
    return finish(std::move(work), PivotStrategy::Complete, input, slack);
}

GrowthCertificate rook_repair(const RationalMatrix& matrix) {
    const EliminationTrace input = eliminate(matrix);
    const auto slack = pivot_slack(input, PivotStrategy::Rook);
    for (std::size_t k = 0; k < slack.size(); ++k)
        if (slack[k] <= -1) throw SlackTooLarge("slack <= -1 at step " + std::to_string(k + 1));

    EliminationTrace work = input;
    auto& levels = work.levels;
    const std::size_t n = matrix.n();
    for (std::size_t k = n - 1; k-- > 0;) {
        const RationalMatrix& level = levels[k];
        const Rational s = rook_line_max(level) / abs(level(0, 0));
        if (s <= 1) continue;
        scale_step(levels, k, s * s, s);
    }
    return finish(std::move(work), PivotStrategy::Rook, input, slack);
}

Rational repair_degradation_bound(const std::vector<Rational>& slacks,
                                  const std::vector<Rational>& pivots) {
    Rational eps = 0;
    for (const auto& e : slacks)
        if (e > eps) eps = e;
    if (eps == 0 || pivots.empty()) return 1;
    const Rational first = abs(pivots.front());
    Rational gamma = 0;
    Rational prefix = 0;
    const std::size_t steps = pivots.size() > 1 ? pivots.size() - 1 : 1;
    for (std::size_t l = 0; l < steps; ++l) {
        const Rational term = eps * (2 + eps) * abs(pivots[l]) / first + eps * prefix / first;
        if (term > gamma) gamma = term;
        prefix += abs(pivots[l]);
    }
    return 1 + gamma;
}

Rational perturbation_margin(const RationalMatrix& matrix) {
    const EliminationTrace trace = eliminate(matrix);
    const PivotCheck check = check_pivoted(trace, PivotStrategy::Complete);
    if (!check.pivoted) throw NotPivoted(check.diagnostic);
    const std::size_t n = trace.n();
    if (n == 1) return abs(trace.pivot(0)) / 2;

    Rational best;
    bool first = true;
    Rational scale = 2;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const RationalMatrix& level = trace.levels[k];
        Rational off = 0;
        for (std::size_t i = 0; i < level.n(); ++i)
            for (std::size_t j = 0; j < level.n(); ++j)
                if ((i != 0 || j != 0) && abs(level(i, j)) > off) off = abs(level(i, j));
        const Rational margin = (abs(level(0, 0)) - off) / scale;
        if (first || margin < best) best = margin;
        first = false;
        scale *= 4;
    }
    if (best <= 0) return 0;
    // A perturbation must also keep the matrix nonsingular.
    const Rational guard = 1 / (2 * Rational(static_cast<unsigned long>(n)) * inverse_inf_norm(trace));
    return best < guard ? best : guard;
}

} // namespace pivotgrowth
