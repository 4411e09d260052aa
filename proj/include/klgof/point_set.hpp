#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace klgof {

// An N x m matrix of observations, rows are observations, stored row-major.
// Immutable after construction; every entry is validated to be finite.
class PointSet {
public:
    PointSet(std::vector<double> data, std::int64_t n_points, int dim);

    std::int64_t size() const { return n_points_; }
    int dim() const { return dim_; }

    const double* row(std::int64_t i) const { return data_.data() + i * dim_; }
    std::span<const double> row_span(std::int64_t i) const {
        return {row(i), static_cast<std::size_t>(dim_)};
    }
    double operator()(std::int64_t i, int j) const { return data_[i * dim_ + j]; }

    const std::vector<double>& values() const { return data_; }

private:
    std::vector<double> data_;
    std::int64_t n_points_ = 0;
    int dim_ = 0;
};

}  // namespace klgof
