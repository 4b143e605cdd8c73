#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bvlab/coefficients.hpp"

namespace bvlab {

// {"type": "step", "breakpoints": [...], "values": [...], "m": m} or
// {"type": "sampled", "grid": {"x0", "h", "n"}, "values": [...], "m": m}.
nlohmann::json coefficient_to_json(const Coefficient& c);
// Validates the result; throws std::invalid_argument naming the bad field.
Coefficient coefficient_from_json(const nlohmann::json& j);
Coefficient load_coefficient(const std::string& path);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Shortest decimal that round-trips, '.' separator regardless of locale.
std::string format_number(double x);

struct Provenance {
    std::string command;
    std::string config_hash;
    int calibration_version = 0;
};

// CSV with a mandatory header row.  The first line is a '#' comment carrying
// the provenance; every row must have as many cells as the header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(long long x) { return std::to_string(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(std::size_t x) { return std::to_string(x); }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(std::string s) { return s; }

    std::size_t size() const { return rows_.size(); }
    void write(std::ostream& os, const Provenance& prov) const;
    void save(const std::string& path, const Provenance& prov) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// One-line machine-readable failure record {"error": {"kind", "message"}}.
std::string error_record(std::string_view kind, std::string_view message);

}  // namespace bvlab
