#pragma once

#include "oracles.hpp"

#include "pivotgrowth/elimination.hpp"
#include "pivotgrowth/errors.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace support {

inline pivotgrowth::RationalMatrix to_matrix(const oracle::Dense& a) {
    pivotgrowth::RationalMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i][j];
    return m;
}

inline oracle::Dense to_dense(const pivotgrowth::RationalMatrix& m) {
    oracle::Dense a(m.n(), std::vector<oracle::Q>(m.n()));
    for (std::size_t i = 0; i < m.n(); ++i)
        for (std::size_t j = 0; j < m.n(); ++j) a[i][j] = m(i, j);
    return a;
}

/// Random integer matrix reordered for the strategy; retries singular draws.
inline pivotgrowth::RationalMatrix random_pivoted(std::size_t n, pivotgrowth::PivotStrategy s, std::mt19937_64& rng) {
    for (;;) {
        try {
            return pivotgrowth::permute_for_strategy(to_matrix(oracle::random_integer(n, rng)), s).matrix;
        } catch (const pivotgrowth::Singular&) {
        }
    }
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() /
                   ("pivotgrowth-test-" + name + "-" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace support
