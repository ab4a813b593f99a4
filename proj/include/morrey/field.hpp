#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "morrey/geometry.hpp"

namespace morrey {

// Scalar samples on a Grid, row-major (iy*nx + ix). An optional support mask
// marks cells outside the field's domain; masked cells hold value 0 so plain
// sums remain correct, and the mask itself feeds cell counts / measures.
class SampledField {
public:
    SampledField(Grid g, std::vector<double> values);
    SampledField(Grid g, std::vector<double> values, std::vector<double> mask);

    static SampledField from_function(const Grid& g, const std::function<double(Point)>& f);
    static SampledField constant(const Grid& g, double c);
    static SampledField zeros(const Grid& g) { return constant(g, 0.0); }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    bool has_mask() const { return !mask_.empty(); }
    const std::vector<double>& mask() const { return mask_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }

    // Verifies finiteness at unmasked points; throws listing the first offender.
    void validate() const;

    // Support cleared on the closed lower half-space {x_n <= 0} (x itself in 1D,
    // y in 2D); values there are zeroed.
    SampledField half_restrict() const;

    SampledField map(const std::function<double(double)>& f) const;

private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<double> mask_;  // empty, or 0.0/1.0 per cell
};

// CSV (one row per point: coordinates, value[, mask]) + JSON grid header.
// Doubles are printed with %.17g so the round-trip is bit-exact.
void write_field(const SampledField& f, const std::string& csv_path,
                 const std::string& json_path);
SampledField read_field(const std::string& csv_path, const std::string& json_path);

}  // namespace morrey
