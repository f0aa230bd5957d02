#pragma once

#include "pivotgrowth/repair.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace pivotgrowth {

/// {"n": int, "entries": [["p/q", ...], ...]}. Entries may also be decimal
/// strings or JSON numbers on input; output is always reduced "p/q".
nlohmann::json matrix_to_json(const RationalMatrix& matrix);
RationalMatrix matrix_from_json(const nlohmann::json& value);

nlohmann::json certificate_to_json(const GrowthCertificate& cert);
/// Reads fields as stored; nothing is re-verified here.
GrowthCertificate certificate_from_json(const nlohmann::json& value);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& value);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file and rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

} // namespace pivotgrowth
