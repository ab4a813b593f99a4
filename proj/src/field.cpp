#include "morrey/field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"

namespace morrey {

SampledField::SampledField(Grid g, std::vector<double> values)
    : grid_(g), values_(std::move(values)) {
    if (values_.size() != grid_.npoints())
        throw std::invalid_argument("field size does not match grid");
}

SampledField::SampledField(Grid g, std::vector<double> values, std::vector<double> mask)
    : grid_(g), values_(std::move(values)), mask_(std::move(mask)) {
    if (values_.size() != grid_.npoints())
        throw std::invalid_argument("field size does not match grid");
    if (!mask_.empty() && mask_.size() != values_.size())
        throw std::invalid_argument("mask size does not match grid");
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (mask_[i] != 0.0 && mask_[i] != 1.0)
            throw std::invalid_argument("mask entries must be 0 or 1");
        if (mask_[i] == 0.0) values_[i] = 0.0;
    }
}

SampledField SampledField::from_function(const Grid& g, const std::function<double(Point)>& f) {
    std::vector<double> v(g.npoints());
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) v[g.index(i, j)] = f(g.point(i, j));
    return SampledField(g, std::move(v));
}

SampledField SampledField::constant(const Grid& g, double c) {
    return SampledField(g, std::vector<double>(g.npoints(), c));
}

void SampledField::validate() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        bool unmasked = mask_.empty() || mask_[i] == 1.0;
        if (unmasked && !std::isfinite(values_[i]))
            throw std::runtime_error("non-finite value at unmasked cell " + std::to_string(i));
    }
}

SampledField SampledField::half_restrict() const {
    const int axis = grid_.dim() - 1;  // x_n: x in 1D, y in 2D
    std::vector<double> v = values_;
    std::vector<double> m = mask_.empty() ? std::vector<double>(v.size(), 1.0) : mask_;
    for (int j = 0; j < grid_.size(1); ++j)
        for (int i = 0; i < grid_.size(0); ++i) {
            double xn = grid_.coord(axis, axis == 0 ? i : j);
            if (xn <= 0.0) {
                std::size_t k = grid_.index(i, j);
                v[k] = 0.0;
                m[k] = 0.0;
            }
        }
    return SampledField(grid_, std::move(v), std::move(m));
}

SampledField SampledField::map(const std::function<double(double)>& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(values_[i]);
    if (mask_.empty()) return SampledField(grid_, std::move(v));
    return SampledField(grid_, std::move(v), mask_);
}

namespace {
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

void write_field(const SampledField& f, const std::string& csv_path,
                 const std::string& json_path) {
    const Grid& g = f.grid();
    nlohmann::ordered_json hdr;
    hdr["dim"] = g.dim();
    hdr["origin"] = g.dim() == 1 ? std::vector<double>{g.origin()[0]}
                                 : std::vector<double>{g.origin()[0], g.origin()[1]};
    hdr["spacing"] = g.h();
    hdr["size"] = g.dim() == 1 ? std::vector<int>{g.size(0)}
                               : std::vector<int>{g.size(0), g.size(1)};
    hdr["has_mask"] = f.has_mask();
    std::ofstream jf(json_path);
    if (!jf) throw std::runtime_error("cannot write " + json_path);
    jf << hdr.dump(2) << "\n";

    std::ofstream cf(csv_path);
    if (!cf) throw std::runtime_error("cannot write " + csv_path);
    cf << (g.dim() == 1 ? "x,value" : "x,y,value");
    if (f.has_mask()) cf << ",mask";
    cf << "\n";
    for (int j = 0; j < g.size(1); ++j)
        for (int i = 0; i < g.size(0); ++i) {
            std::size_t k = g.index(i, j);
            cf << fmt17(g.coord(0, i));
            if (g.dim() == 2) cf << ',' << fmt17(g.coord(1, j));
            cf << ',' << fmt17(f.values()[k]);
            if (f.has_mask()) cf << ',' << (f.mask()[k] == 1.0 ? '1' : '0');
            cf << "\n";
        }
}

SampledField read_field(const std::string& csv_path, const std::string& json_path) {
    std::ifstream jf(json_path);
    if (!jf) throw std::runtime_error("cannot read " + json_path);
    nlohmann::json hdr = nlohmann::json::parse(jf);
    int dim = hdr.at("dim").get<int>();
    auto org = hdr.at("origin").get<std::vector<double>>();
    double h = hdr.at("spacing").get<double>();
    auto sz = hdr.at("size").get<std::vector<int>>();
    bool has_mask = hdr.at("has_mask").get<bool>();
    Grid g = dim == 1 ? Grid::line(org.at(0), h, sz.at(0))
                      : Grid::square({org.at(0), org.at(1)}, h, sz.at(0), sz.at(1));

    std::ifstream cf(csv_path);
    if (!cf) throw std::runtime_error("cannot read " + csv_path);
    std::string line;
    if (!std::getline(cf, line)) throw std::runtime_error("empty csv " + csv_path);
    std::vector<double> vals;
    std::vector<double> mask;
    vals.reserve(g.npoints());
    const int coord_cols = dim;
    while (std::getline(cf, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        int col = 0;
        double value = 0.0, mk = 1.0;
        while (std::getline(ss, tok, ',')) {
            if (col == coord_cols) value = std::strtod(tok.c_str(), nullptr);
            if (col == coord_cols + 1) mk = std::strtod(tok.c_str(), nullptr);
            ++col;
        }
        if (col < coord_cols + 1) throw std::runtime_error("short csv row in " + csv_path);
        vals.push_back(value);
        if (has_mask) mask.push_back(mk);
    }
    if (vals.size() != g.npoints()) throw std::runtime_error("csv row count mismatches header");
    if (has_mask) return SampledField(g, std::move(vals), std::move(mask));
    return SampledField(g, std::move(vals));
}

}  // namespace morrey
