#include "bvlab/grid.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace bvlab {

Grid Grid::spanning(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("Grid::spanning: need n >= 2 and hi > lo");
    return Grid{lo, (hi - lo) / static_cast<double>(n - 1), n};
}

Grid Grid::with_step(double lo, double hi, double h) {
    if (!(h > 0.0) || !(hi > lo)) throw std::invalid_argument("Grid::with_step: need h > 0 and hi > lo");
    auto n = static_cast<std::size_t>(std::llround(std::ceil((hi - lo) / h - 1e-9))) + 1;
    return Grid{lo, h, n};
}

GridFunction::GridFunction(Grid g, bool periodic_) : grid(g), v(g.n), periodic(periodic_) {}

GridFunction::GridFunction(Grid g, std::vector<cplx> values, bool periodic_)
    : grid(g), v(std::move(values)), periodic(periodic_) {
    validate();
}

void GridFunction::validate() const {
    if (grid.n < 2) throw std::invalid_argument("GridFunction: need at least 2 samples");
    if (v.size() != grid.n) throw std::invalid_argument("GridFunction: sample count does not match grid");
    if (!(grid.h > 0.0)) throw std::invalid_argument("GridFunction: grid step must be positive");
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("GridFunction: non-finite sample");
}

SpaceTimeField::SpaceTimeField(Grid xg, Grid tg, bool periodic)
    : x(xg), t(tg), values(xg.n * tg.n), periodic_x(periodic) {}

GridFunction SpaceTimeField::slice_t(std::size_t it) const {
    GridFunction f(x, periodic_x);
    for (std::size_t i = 0; i < x.n; ++i) f.v[i] = (*this)(i, it);
    return f;
}

void SpaceTimeField::set_slice_t(std::size_t it, const GridFunction& f) {
    if (f.size() != x.n) throw std::invalid_argument("set_slice_t: size mismatch");
    for (std::size_t i = 0; i < x.n; ++i) (*this)(i, it) = f.v[i];
}

std::vector<cplx> SpaceTimeField::series_x(std::size_t ix) const {
    std::vector<cplx> s(t.n);
    for (std::size_t k = 0; k < t.n; ++k) s[k] = (*this)(ix, k);
    return s;
}

void SpaceTimeField::validate() const {
    if (values.size() != x.n * t.n) throw std::invalid_argument("SpaceTimeField: inconsistent dimensions");
    if (x.n < 1 || t.n < 1) throw std::invalid_argument("SpaceTimeField: empty grid");
}

void SpaceTimeField::save(const std::string& bin_path, const std::string& config_hash) const {
    validate();
    std::ofstream out(bin_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + bin_path);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
    nlohmann::ordered_json side = {
        {"n_x", x.n}, {"n_t", t.n}, {"x0", x.x0}, {"dx", x.h}, {"t0", t.x0}, {"dt", t.h},
        {"periodic_x", periodic_x}, {"complex", true}, {"layout", "time-major, re/im interleaved"}};
    if (!config_hash.empty()) side["config_hash"] = config_hash;
    std::ofstream js(bin_path + ".json");
    js << side.dump(2) << "\n";
}

SpaceTimeField SpaceTimeField::load(const std::string& bin_path) {
    std::ifstream js(bin_path + ".json");
    if (!js) throw std::runtime_error("missing sidecar " + bin_path + ".json");
    auto side = nlohmann::json::parse(js);
    Grid xg{side.at("x0").get<double>(), side.at("dx").get<double>(), side.at("n_x").get<std::size_t>()};
    Grid tg{side.at("t0").get<double>(), side.at("dt").get<double>(), side.at("n_t").get<std::size_t>()};
    SpaceTimeField f(xg, tg, side.value("periodic_x", false));
    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + bin_path);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(cplx)))
        throw std::runtime_error("truncated field file " + bin_path);
    return f;
}

double lp_norm(const std::vector<cplx>& v, double h, double p, bool periodic) {
    if (v.empty()) return 0.0;
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
    // Scale by the max so large p does not overflow.
    double scale = 0.0;
    for (const auto& z : v) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        double w = (!periodic && (i == 0 || i + 1 == n)) ? 0.5 : 1.0;
        s += w * std::pow(std::abs(v[i]) / scale, p);
    }
    return scale * std::pow(s * h, 1.0 / p);
}

double lp_norm(const GridFunction& f, double p) { return lp_norm(f.v, f.grid.h, p, f.periodic); }

double trapezoid(const std::vector<double>& v, double h, bool periodic) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) s += ((!periodic && (i == 0 || i + 1 == n)) ? 0.5 : 1.0) * v[i];
    return s * h;
}

}  // namespace bvlab
