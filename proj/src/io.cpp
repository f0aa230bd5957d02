#include "pivotgrowth/io.hpp"

#include "pivotgrowth/errors.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace pivotgrowth {

using nlohmann::json;

namespace {

Rational entry_from_json(const json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>()), 10));
    if (v.is_number_float()) return from_double(v.get<double>());
    throw ParseError("matrix entry must be a string or number");
}

} // namespace

json matrix_to_json(const RationalMatrix& matrix) {
    json rows = json::array();
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < matrix.n(); ++j) row.push_back(to_string(matrix(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"n", matrix.n()}, {"entries", std::move(rows)}};
}

RationalMatrix matrix_from_json(const json& value) {
    if (!value.is_object() || !value.contains("entries"))
        throw ParseError("matrix JSON needs an \"entries\" array");
    const json& rows = value.at("entries");
    if (!rows.is_array() || rows.empty()) throw ParseError("matrix entries must be a nonempty array");
    const std::size_t n = rows.size();
    if (value.contains("n")) {
        if (!value.at("n").is_number_integer() || value.at("n").get<long long>() != static_cast<long long>(n))
            throw ParseError("matrix \"n\" does not match the number of rows");
    }
    RationalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("matrix must be square");
        for (std::size_t j = 0; j < n; ++j) out(i, j) = entry_from_json(rows[i][j]);
    }
    return out;
}

json certificate_to_json(const GrowthCertificate& cert) {
    json source = json::object();
    for (const auto& [k, v] : cert.source) source[k] = v;
    return json{{"strategy", std::string(to_string(cert.strategy))},
                {"matrix", matrix_to_json(cert.matrix)},
                {"growth", to_string(cert.growth)},
                {"source", std::move(source)},
                {"verified_at_bits", cert.verified_at_bits}};
}

GrowthCertificate certificate_from_json(const json& value) {
    try {
        GrowthCertificate cert;
        cert.strategy = parse_strategy(value.at("strategy").get<std::string>());
        cert.matrix = matrix_from_json(value.at("matrix"));
        cert.growth = parse_rational(value.at("growth").get<std::string>());
        if (value.contains("source"))
            for (const auto& [k, v] : value.at("source").items())
                cert.source[k] = v.is_string() ? v.get<std::string>() : v.dump();
        if (value.contains("verified_at_bits"))
            cert.verified_at_bits = value.at("verified_at_bits").get<std::size_t>();
        return cert;
    } catch (const json::exception& e) {
        throw ParseError(std::string("certificate JSON: ") + e.what());
    }
}

std::string canonical_dump(const json& value) { return value.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp =
        path.string() + ".tmp." + std::to_string(static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace pivotgrowth
