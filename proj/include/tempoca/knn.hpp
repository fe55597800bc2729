#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "tempoca/error.hpp"

namespace tempoca {

// Row-major point set: point(i) is a contiguous d-vector.
struct Cloud {
    std::vector<double> pts;
    std::size_t m = 0;
    std::size_t d = 0;

    const double* point(std::size_t i) const { return pts.data() + i * d; }

    // Assembles points from column arrays that all have m entries; column j
    // becomes coordinate j.
    static Cloud from_columns(const std::vector<const double*>& cols, std::size_t m) {
        if (cols.empty() || m == 0)
            throw Error(ErrorKind::ShapeError, "cloud needs at least one column and one row");
        Cloud c;
        c.m = m;
        c.d = cols.size();
        c.pts.resize(m * cols.size());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                c.pts[i * cols.size() + j] = cols[j][i];
        return c;
    }
};

// All neighbor logic uses the Chebyshev (max-coordinate) distance. That is
// what makes the joint-space radius reusable in every marginal subspace.
inline double chebyshev(const double* a, const double* b, std::size_t d) {
    double best = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
        if (diff > best) best = diff;
    }
    return best;
}

// As chebyshev(), but gives up as soon as the running maximum reaches bound
// and reports +inf instead. Callers only ever compare the result against
// bound, so the early exit never changes a decision.
inline double chebyshev_below(const double* a, const double* b, std::size_t d, double bound) {
    double best = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] > b[j] ? a[j] - b[j] : b[j] - a[j];
        if (diff > best) {
            if (diff >= bound) return std::numeric_limits<double>::infinity();
            best = diff;
        }
    }
    return best;
}

// Reference implementations. Deliberately naive: the tree below must agree
// with these exactly, per decision comparisons, not approximately.
inline double brute_kth_distance(const Cloud& c, std::size_t i, std::size_t k) {
    if (k == 0) throw Error(ErrorKind::DomainError, "k must be at least 1");
    if (k >= c.m) throw Error(ErrorKind::KTooLarge, "k-th neighbor needs k < point count");
    std::vector<double> dist;
    dist.reserve(c.m - 1);
    for (std::size_t j = 0; j < c.m; ++j)
        if (j != i) dist.push_back(chebyshev(c.point(i), c.point(j), c.d));
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    return dist[k - 1];
}

inline std::size_t brute_count_within(const Cloud& c, std::size_t i, double r) {
    std::size_t n = 0;
    for (std::size_t j = 0; j < c.m; ++j)
        if (j != i && chebyshev(c.point(i), c.point(j), c.d) < r) ++n;
    return n;
}

// kd-tree over a Cloud, queried by the index of one of its own points. The
// point in question never counts as its own neighbor.
//
// Pruning uses per-node bounding boxes. Box distance bounds are computed
// with the same subtract-and-compare arithmetic as the point distances, and
// floating point subtraction is monotone, so a pruned node provably contains
// no point the full scan would have accepted. That is what makes the
// brute-force equality tests exact rather than toleranced.
class KdTree {
public:
    explicit KdTree(const Cloud& cloud, std::size_t leaf_size = 16)
        : m_(cloud.m), d_(cloud.d), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
        if (m_ == 0 || d_ == 0)
            throw Error(ErrorKind::ShapeError, "kd-tree needs a non-empty cloud");
        idx_.resize(m_);
        std::iota(idx_.begin(), idx_.end(), 0u);
        scratch_ = cloud.pts;
        nodes_.reserve(2 * m_ / leaf_size_ + 2);
        build(0, m_);
        pts_.resize(m_ * d_);
        pos_.resize(m_);
        for (std::size_t p = 0; p < m_; ++p) {
            pos_[idx_[p]] = static_cast<std::uint32_t>(p);
            for (std::size_t j = 0; j < d_; ++j) pts_[p * d_ + j] = scratch_[idx_[p] * d_ + j];
        }
        scratch_.clear();
        scratch_.shrink_to_fit();
    }

    std::size_t size() const noexcept { return m_; }
    std::size_t dims() const noexcept { return d_; }

    double kth_distance(std::size_t i, std::size_t k) const {
        if (k == 0) throw Error(ErrorKind::DomainError, "k must be at least 1");
        if (k >= m_) throw Error(ErrorKind::KTooLarge, "k-th neighbor needs k < point count");
        const double* q = pts_.data() + pos_[i] * d_;
        heap_.clear();
        knn_search(0, q, static_cast<std::uint32_t>(i), k);
        return heap_.front();
    }

    std::size_t count_within(std::size_t i, double r) const {
        const double* q = pts_.data() + pos_[i] * d_;
        const std::size_t with_self = count_search(0, q, r);
        return r > 0.0 ? with_self - 1 : with_self;
    }

private:
    struct Node {
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        bool leaf() const noexcept { return left < 0; }
    };

    // Builds the subtree over idx_[begin, end) and returns its node id.
    std::int32_t build(std::size_t begin, std::size_t end) {
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({});
        nodes_[id].begin = static_cast<std::uint32_t>(begin);
        nodes_[id].end = static_cast<std::uint32_t>(end);

        boxes_.resize(boxes_.size() + 2 * d_);
        double* lo = boxes_.data() + id * 2 * d_;
        double* hi = lo + d_;
        for (std::size_t j = 0; j < d_; ++j) {
            lo[j] = std::numeric_limits<double>::infinity();
            hi[j] = -std::numeric_limits<double>::infinity();
        }
        for (std::size_t p = begin; p < end; ++p) {
            const double* x = scratch_.data() + idx_[p] * d_;
            for (std::size_t j = 0; j < d_; ++j) {
                if (x[j] < lo[j]) lo[j] = x[j];
                if (x[j] > hi[j]) hi[j] = x[j];
            }
        }

        if (end - begin <= leaf_size_) return id;

        std::size_t dim = 0;
        double spread = -1.0;
        for (std::size_t j = 0; j < d_; ++j) {
            const double s = hi[j] - lo[j];
            if (s > spread) {
                spread = s;
                dim = j;
            }
        }
        if (spread <= 0.0) return id; // all points identical, cannot split

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             return scratch_[a * d_ + dim] < scratch_[b * d_ + dim];
                         });
        const std::int32_t l = build(begin, mid);
        const std::int32_t r = build(mid, end);
        nodes_[id].left = l;
        nodes_[id].right = r;
        return id;
    }

    double box_min_dist(std::int32_t id, const double* q) const {
        const double* lo = boxes_.data() + id * 2 * d_;
        const double* hi = lo + d_;
        double best = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            if (q[j] < lo[j]) {
                const double diff = lo[j] - q[j];
                if (diff > best) best = diff;
            } else if (q[j] > hi[j]) {
                const double diff = q[j] - hi[j];
                if (diff > best) best = diff;
            }
        }
        return best;
    }

    double box_max_dist(std::int32_t id, const double* q) const {
        const double* lo = boxes_.data() + id * 2 * d_;
        const double* hi = lo + d_;
        double best = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            const double a = q[j] > lo[j] ? q[j] - lo[j] : lo[j] - q[j];
            const double b = q[j] > hi[j] ? q[j] - hi[j] : hi[j] - q[j];
            const double diff = a > b ? a : b;
            if (diff > best) best = diff;
        }
        return best;
    }

    void knn_search(std::int32_t id, const double* q, std::uint32_t self, std::size_t k) const {
        const Node& node = nodes_[id];
        if (node.leaf()) {
            for (std::uint32_t p = node.begin; p < node.end; ++p) {
                if (idx_[p] == self) continue;
                const double bound = heap_.size() == k
                                         ? heap_.front()
                                         : std::numeric_limits<double>::infinity();
                const double dist = chebyshev_below(q, pts_.data() + p * d_, d_, bound);
                if (dist < bound) {
                    if (heap_.size() == k) {
                        std::pop_heap(heap_.begin(), heap_.end());
                        heap_.back() = dist;
                    } else {
                        heap_.push_back(dist);
                    }
                    std::push_heap(heap_.begin(), heap_.end());
                }
            }
            return;
        }
        const double dl = box_min_dist(node.left, q);
        const double dr = box_min_dist(node.right, q);
        const std::int32_t first = dl <= dr ? node.left : node.right;
        const std::int32_t second = dl <= dr ? node.right : node.left;
        const double dsecond = dl <= dr ? dr : dl;
        if (heap_.size() < k || (dl <= dr ? dl : dr) < heap_.front())
            knn_search(first, q, self, k);
        if (heap_.size() < k || dsecond < heap_.front())
            knn_search(second, q, self, k);
    }

    // Counts points with distance < r, the query point itself included.
    std::size_t count_search(std::int32_t id, const double* q, double r) const {
        const Node& node = nodes_[id];
        if (box_min_dist(id, q) >= r) return 0;
        if (box_max_dist(id, q) < r) return node.end - node.begin;
        if (node.leaf()) {
            std::size_t n = 0;
            for (std::uint32_t p = node.begin; p < node.end; ++p)
                if (chebyshev_below(q, pts_.data() + p * d_, d_, r) < r) ++n;
            return n;
        }
        return count_search(node.left, q, r) + count_search(node.right, q, r);
    }

    std::size_t m_;
    std::size_t d_;
    std::size_t leaf_size_;
    std::vector<Node> nodes_;
    std::vector<double> boxes_;
    std::vector<double> pts_;          // points in tree order
    std::vector<std::uint32_t> idx_;   // original index by tree position
    std::vector<std::uint32_t> pos_;   // tree position by original index
    std::vector<double> scratch_;      // original-order coordinates, build only
    mutable std::vector<double> heap_; // reused k-best buffer
};

// Strict-inequality interval count over one coordinate, by binary search.
// Point distances in one dimension are plain |x - v|, so sorting once gives
// every count in O(log m) with arithmetic identical to the brute-force scan.
class SortedColumn {
public:
    SortedColumn(const double* col, std::size_t m) : values_(col, col + m) {
        if (m == 0) throw Error(ErrorKind::ShapeError, "sorted column needs points");
        std::sort(values_.begin(), values_.end());
    }

    // Number of stored values x (other than one copy of v itself) with
    // |x - v| < r. v must be one of the stored values.
    std::size_t count_within(double v, double r) const {
        auto mid = std::lower_bound(values_.begin(), values_.end(), v);
        // left of mid: x < v, condition v - x < r, difference shrinks as x grows
        auto left = std::partition_point(values_.begin(), mid,
                                         [&](double x) { return !(v - x < r); });
        // from mid on: x >= v, condition x - v < r, difference grows with x
        auto right = std::partition_point(mid, values_.end(),
                                          [&](double x) { return x - v < r; });
        const std::size_t n = static_cast<std::size_t>(right - left);
        return r > 0.0 ? n - 1 : n;
    }

    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

} // namespace tempoca
