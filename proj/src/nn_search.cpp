#include "klgof/nn_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "klgof/errors.hpp"

namespace klgof {
namespace {

// Shared by both backends so they produce bit-identical sums.
inline double squared_distance(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

// Max-heap of the k smallest squared distances seen so far.
class KBest {
public:
    explicit KBest(int k) : k_(static_cast<std::size_t>(k)) { heap_.reserve(k_); }

    bool full() const { return heap_.size() == k_; }
    double worst_sq() const { return heap_.front(); }


    void offer(double dist_sq) {
        if (heap_.size() < k_) {
            heap_.push_back(dist_sq);
            std::push_heap(heap_.begin(), heap_.end());
        } else if (dist_sq < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = dist_sq;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    // k-th smallest squared distance; valid once full.
    double kth_sq() const { return heap_.front(); }

private:
    std::size_t k_;
    std::vector<double> heap_;
};

// Median-split kd-tree over a PointSet. Splits at the positional median of
// the widest-spread coordinate; queries are exact (subtrees are pruned only
// when the splitting plane is provably farther than the current k-th
// candidate, with ties visited). Distance ties between candidate neighbors
// resolve by reference index order through the fixed scan order, which does
// not affect the returned k-th distance value.
class KdTree {
public:
    explicit KdTree(const PointSet& points, std::int64_t leaf_size = 16)
        : points_(points), leaf_size_(leaf_size), order_(points.size()) {
        std::iota(order_.begin(), order_.end(), std::int64_t{0});
        nodes_.reserve(static_cast<std::size_t>(2 * points.size() / leaf_size_ + 2));
        build(0, points.size());
    }

    double kth_distance_sq(const double* query, int k, std::int64_t exclude) const {
        KBest best(k);
        search(0, query, exclude, best);
        return best.kth_sq();
    }

private:
    struct Node {
        double split_value = 0.0;
        std::int32_t split_dim = -1;  // -1 marks a leaf
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int64_t begin = 0;
        std::int64_t end = 0;
    };

    std::int32_t build(std::int64_t begin, std::int64_t end) {
        const auto idx = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        nodes_[idx].begin = begin;
        nodes_[idx].end = end;
        if (end - begin <= leaf_size_) {
            return idx;
        }
        const int dim = widest_dimension(begin, end);
        const std::int64_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid,
                         order_.begin() + end,
                         [&](std::int64_t a, std::int64_t b) {
                             return points_(a, dim) < points_(b, dim);
                         });
        const double split = points_(order_[mid], dim);
        nodes_[idx].split_dim = dim;
        nodes_[idx].split_value = split;
        const std::int32_t left = build(begin, mid);
        nodes_[idx].left = left;
        const std::int32_t right = build(mid, end);
        nodes_[idx].right = right;
        return idx;
    }

    int widest_dimension(std::int64_t begin, std::int64_t end) const {
        const int m = points_.dim();
        int best_dim = 0;
        double best_spread = -1.0;
        for (int d = 0; d < m; ++d) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::int64_t t = begin; t < end; ++t) {
                const double v = points_(order_[t], d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const double spread = hi - lo;
            if (spread > best_spread) {
                best_spread = spread;
                best_dim = d;
            }
        }
        return best_dim;
    }

    void search(std::int32_t node_idx, const double* query, std::int64_t exclude,
                KBest& best) const {
        const Node& node = nodes_[node_idx];
        if (node.split_dim < 0) {
            const int m = points_.dim();
            for (std::int64_t t = node.begin; t < node.end; ++t) {
                const std::int64_t j = order_[t];
                if (j == exclude) continue;
                best.offer(squared_distance(query, points_.row(j), m));
            }
            return;
        }
        const double diff = query[node.split_dim] - node.split_value;
        const std::int32_t near = diff < 0.0 ? node.left : node.right;
        const std::int32_t far = diff < 0.0 ? node.right : node.left;
        search(near, query, exclude, best);
        if (!best.full() || diff * diff <= best.worst_sq()) {
            search(far, query, exclude, best);
        }
    }

    const PointSet& points_;
    std::int64_t leaf_size_;
    std::vector<std::int64_t> order_;
    std::vector<Node> nodes_;
};

double brute_force_kth_sq(const PointSet& references, const double* query, int k,
                          std::int64_t exclude, std::vector<double>& scratch) {
    const int m = references.dim();
    scratch.clear();
    for (std::int64_t j = 0; j < references.size(); ++j) {
        if (j == exclude) continue;
        scratch.push_back(squared_distance(query, references.row(j), m));
    }
    std::nth_element(scratch.begin(), scratch.begin() + (k - 1), scratch.end());
    return scratch[k - 1];
}

std::vector<double> kth_distances(const PointSet& queries,
                                  const PointSet& references, int k,
                                  bool exclude_self, KnnBackend backend,
                                  ExecMode mode) {
    const std::int64_t n = queries.size();
    std::vector<double> out(static_cast<std::size_t>(n));
    if (backend == KnnBackend::SpatialTree) {
        const KdTree tree(references);
        parallel_for(n, mode, [&](std::int64_t i) {
            const std::int64_t exclude = exclude_self ? i : -1;
            out[i] = std::sqrt(tree.kth_distance_sq(queries.row(i), k, exclude));
        });
    } else {
        parallel_for(n, mode, [&](std::int64_t i) {
            std::vector<double> scratch;
            scratch.reserve(static_cast<std::size_t>(references.size()));
            const std::int64_t exclude = exclude_self ? i : -1;
            out[i] = std::sqrt(
                brute_force_kth_sq(references, queries.row(i), k, exclude, scratch));
        });
    }
    return out;
}

}  // namespace

std::vector<double> kth_nn_distances_within(const PointSet& points, int k,
                                            KnnBackend backend, ExecMode mode) {
    if (k < 1 || k >= points.size()) {
        throw InvalidKError("kth_nn_distances_within: need 1 <= k <= N-1");
    }
    return kth_distances(points, points, k, /*exclude_self=*/true, backend, mode);
}

std::vector<double> kth_nn_distances_cross(const PointSet& queries,
                                           const PointSet& references, int k,
                                           KnnBackend backend, ExecMode mode) {
    if (queries.dim() != references.dim()) {
        throw DimensionMismatchError("kth_nn_distances_cross: dimension mismatch");
    }
    if (k < 1 || k > references.size()) {
        throw InvalidKError("kth_nn_distances_cross: need 1 <= k <= reference count");
    }
    return kth_distances(queries, references, k, /*exclude_self=*/false, backend,
                         mode);
}

}  // namespace klgof
