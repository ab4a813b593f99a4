#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace morrey {

// Points live in R^1 or R^2; 1D uses component [0] and keeps [1] == 0.
using Point = std::array<double, 2>;

inline double dist(const Point& a, const Point& b, int dim) {
    double dx = a[0] - b[0];
    if (dim == 1) return std::abs(dx);
    double dy = a[1] - b[1];
    return std::hypot(dx, dy);
}

struct Ball {
    Point center{0.0, 0.0};
    double radius = 0.0;
};

// Uniform cell-centered grid. Point (i,j) sits at origin + (i,j)*h and owns a
// cell of volume h^dim centered on it.
class Grid {
public:
    Grid(int dim, Point origin, double h, std::array<int, 2> size)
        : dim_(dim), origin_(origin), h_(h), size_(size) {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
        if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
        if (size_[0] < 4 || (dim == 2 && size_[1] < 4))
            throw std::invalid_argument("grid needs at least 4 points per axis");
        if (dim == 1) size_[1] = 1;
    }

    static Grid line(double x0, double h, int n) { return Grid(1, {x0, 0.0}, h, {n, 1}); }
    static Grid square(Point origin, double h, int nx, int ny) {
        return Grid(2, origin, h, {nx, ny});
    }

    int dim() const { return dim_; }
    double h() const { return h_; }
    const Point& origin() const { return origin_; }
    int size(int axis) const { return size_[axis]; }
    std::size_t npoints() const { return std::size_t(size_[0]) * std::size_t(size_[1]); }
    double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }
    double extent(int axis) const { return (size_[axis] - 1) * h_; }
    double min_extent() const {
        return dim_ == 1 ? extent(0) : std::min(extent(0), extent(1));
    }

    double coord(int axis, int i) const { return origin_[axis] + i * h_; }
    Point point(int ix, int iy = 0) const { return {coord(0, ix), dim_ == 2 ? coord(1, iy) : 0.0}; }
    std::size_t index(int ix, int iy = 0) const { return std::size_t(iy) * size_[0] + ix; }

    // Index of the cell containing x along an axis, or -1 when off-grid.
    int cell_of(int axis, double x) const {
        double t = (x - origin_[axis]) / h_;
        int i = int(std::lround(t));
        if (i < 0 || i >= size_[axis]) return -1;
        return i;
    }

    bool same_layout(const Grid& o) const {
        return dim_ == o.dim_ && origin_ == o.origin_ && h_ == o.h_ && size_ == o.size_;
    }

private:
    int dim_;
    Point origin_;
    double h_;
    std::array<int, 2> size_;
};

// Geometric radius ladder over a lattice of centers. Radii are
// r_min * ratio^k, k = 0..count-1.
struct BallFamily {
    std::vector<Point> centers;
    double r_min = 0.0;
    double ratio = std::sqrt(2.0);
    int count = 1;
    int center_stride = 0;   // >0 when lattice-generated (enables extended())
    bool interior = true;    // centers kept so every ball stays inside the grid

    std::vector<double> radii() const {
        std::vector<double> r(count);
        double v = r_min;
        for (int k = 0; k < count; ++k, v *= ratio) r[k] = v;
        return r;
    }
    double r_max() const { return r_min * std::pow(ratio, count - 1); }

    std::vector<Ball> balls() const {
        std::vector<Ball> out;
        out.reserve(centers.size() * count);
        for (const auto& c : centers)
            for (double r : radii()) out.push_back({c, r});
        return out;
    }

    // Interior lattice family: centers on every `stride`-th grid point kept at
    // distance >= r_cap from the boundary so all balls stay inside the grid.
    static BallFamily lattice(const Grid& g, int stride, double r_min, double ratio, int count,
                              bool interior = true);

    // One octave up in radius, centers twice as dense. The repo-wide
    // "stability under family extension" convention.
    BallFamily extended(const Grid& g) const;

    void validate(const Grid& g, bool interior) const;
};

}  // namespace morrey
