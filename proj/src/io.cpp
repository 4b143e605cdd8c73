#include "bvlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bvlab {

namespace {

std::vector<double> numbers(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_array())
        throw std::invalid_argument(std::string("coefficient json: '") + field + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j.at(field)) {
        if (!v.is_number()) throw std::invalid_argument(std::string("coefficient json: '") + field + "' holds a non-number");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

nlohmann::json coefficient_to_json(const Coefficient& c) {
    nlohmann::json j;
    if (const auto* s = std::get_if<StepCoefficient>(&c)) {
        j["type"] = "step";
        j["breakpoints"] = s->breakpoints;
        j["values"] = s->values;
        j["m"] = s->m;
    } else {
        const auto& d = std::get<SampledCoefficient>(c);
        j["type"] = "sampled";
        j["grid"] = {{"x0", d.grid.x0}, {"h", d.grid.h}, {"n", d.grid.n}};
        j["values"] = d.samples;
        j["m"] = d.m;
    }
    return j;
}

Coefficient coefficient_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("coefficient json: missing 'type'");
    const auto type = j.at("type").get<std::string>();
    const double m = j.value("m", 0.0);
    if (type == "step") {
        StepCoefficient s(numbers(j, "breakpoints"), numbers(j, "values"), m);
        s.validate();
        return s;
    }
    if (type == "sampled") {
        if (!j.contains("grid")) throw std::invalid_argument("coefficient json: sampled type needs 'grid'");
        const auto& g = j.at("grid");
        Grid grid{g.at("x0").get<double>(), g.at("h").get<double>(), g.at("n").get<std::size_t>()};
        SampledCoefficient s(grid, numbers(j, "values"), m);
        s.validate();
        return s;
    }
    throw std::invalid_argument("coefficient json: unknown type '" + type + "' (expected step or sampled)");
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

Coefficient load_coefficient(const std::string& path) { return coefficient_from_json(load_json(path)); }

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i, h >>= 4) buf[i] = digits[h & 0xf];
    buf[16] = '\0';
    return buf;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, p);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) + " cells, header has " +
                                    std::to_string(header_.size()));
    rows_.push_back(std::move(cells));
    return *this;
}

void CsvTable::write(std::ostream& os, const Provenance& prov) const {
    os << "# bvlab command=" << prov.command << " config_hash=" << prov.config_hash
       << " calibration_version=" << prov.calibration_version << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quoted(cells[i]);
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void CsvTable::save(const std::string& path, const Provenance& prov) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write(out, prov);
}

std::string error_record(std::string_view kind, std::string_view message) {
    nlohmann::json j;
    j["error"] = {{"kind", std::string(kind)}, {"message", std::string(message)}};
    return j.dump();
}

}  // namespace bvlab
