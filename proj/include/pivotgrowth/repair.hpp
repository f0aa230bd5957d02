#pragma once

#include "pivotgrowth/elimination.hpp"

#include <map>
#include <string>

namespace pivotgrowth {

/// An exactly pivoted rational matrix together with its exact growth.
struct GrowthCertificate {
    RationalMatrix matrix;
    PivotStrategy strategy = PivotStrategy::Complete;
    Rational growth;
    /// Provenance: seed, repair inflation, float growth of the input, ...
    std::map<std::string, std::string> source;
    std::size_t verified_at_bits = 0;
};

/// Builds a certificate after checking the predicate. Throws NotPivoted.
GrowthCertificate make_certificate(const RationalMatrix& matrix, PivotStrategy strategy,
                                   std::map<std::string, std::string> source = {});

/// Scales pivot rows and columns backwards through the pyramid until the
/// matrix is exactly completely pivoted. Final-pivot trajectory is kept.
GrowthCertificate cp_repair(const RationalMatrix& matrix);

/// Rook analogue: pivot times (1+eps_k)^2, its row and column times (1+eps_k).
GrowthCertificate rook_repair(const RationalMatrix& matrix);

/// 1 + gamma_1 for a uniform eps = max_k max(eps_k, 0) and the given pivots.
Rational repair_degradation_bound(const std::vector<Rational>& slacks,
                                  const std::vector<Rational>& pivots);

/// Largest eps* such that every entrywise perturbation of size <= eps* keeps
/// the matrix completely pivoted. Zero on ties. Throws NotPivoted.
Rational perturbation_margin(const RationalMatrix& matrix);

} // namespace pivotgrowth
