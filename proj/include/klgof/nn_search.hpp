#pragma once

#include <vector>

#include "klgof/parallel.hpp"
#include "klgof/point_set.hpp"

namespace klgof {

// Exact k-nearest-neighbor backends under the Euclidean metric. BruteForce
// is the quadratic reference; SpatialTree is a median-split kd-tree with
// exact queries. Both return identical distances on identical inputs.
enum class KnnBackend { BruteForce, SpatialTree };

// Distance from each point to its k-th nearest *other* point in the set
// (the query point is excluded from its own neighbor set).
// Requires 1 <= k <= N-1. Entry i may be exactly zero when point i has k
// or more duplicates; callers decide how to treat that.
std::vector<double> kth_nn_distances_within(const PointSet& points, int k,
                                            KnnBackend backend,
                                            ExecMode mode = ExecMode::Parallel);

// Distance from each query point to its k-th nearest reference point.
// Query points are not excluded (the samples are assumed disjoint).
// Requires matching dimensions and 1 <= k <= references.size().
std::vector<double> kth_nn_distances_cross(const PointSet& queries,
                                           const PointSet& references, int k,
                                           KnnBackend backend,
                                           ExecMode mode = ExecMode::Parallel);

}  // namespace klgof
