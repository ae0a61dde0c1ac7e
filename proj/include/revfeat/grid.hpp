#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace revfeat {

/// Dense row-major real grid, rows = time frames, cols = frequency or lag bins.
struct Grid {
    std::vector<double> v;
    std::size_t rows = 0;
    std::size_t cols = 0;

    Grid() = default;
    Grid(std::size_t r, std::size_t c, double fill = 0.0) : v(r * c, fill), rows(r), cols(c) {}

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

    bool same_shape(const Grid& o) const { return rows == o.rows && cols == o.cols; }
};

}  // namespace revfeat
