#include "klgof/point_set.hpp"

#include <cmath>
#include <utility>

#include "klgof/errors.hpp"

namespace klgof {

PointSet::PointSet(std::vector<double> data, std::int64_t n_points, int dim)
    : data_(std::move(data)), n_points_(n_points), dim_(dim) {
    if (n_points_ < 1) throw DomainError("PointSet: need at least one observation");
    if (dim_ < 1) throw DomainError("PointSet: dimension must be >= 1");
    if (static_cast<std::int64_t>(data_.size()) != n_points_ * dim_) {
        throw DomainError("PointSet: data size does not match n_points * dim");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw DomainError("PointSet: non-finite entry");
        }
    }
}

}  // namespace klgof
