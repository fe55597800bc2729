#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tempoca/error.hpp"
#include "tempoca/knn.hpp"
#include "tempoca/special.hpp"

namespace tempoca {

// psi(n) for integer n, grown on demand through the recurrence
// psi(n+1) = psi(n) + 1/n. One digamma evaluation seeds the table; the
// recurrence keeps the fill O(1) per entry and bit-reproducible.
class DigammaTable {
public:
    double operator()(std::size_t n) const { return table_[n]; }

    void ensure(std::size_t n) {
        if (table_.empty()) {
            table_.push_back(0.0); // index 0 unused
            table_.push_back(digamma(1.0));
        }
        while (table_.size() <= n) {
            const std::size_t last = table_.size() - 1;
            table_.push_back(table_[last] + 1.0 / static_cast<double>(last));
        }
    }

private:
    std::vector<double> table_;
};

// Neighbor-count oracle for one marginal subspace. One dimension gets the
// sorted-array path, anything wider gets a kd-tree. Both count with the same
// strict predicate, so the choice is invisible to the estimate.
class CountSpace {
public:
    CountSpace(const std::vector<const double*>& cols, std::size_t m) {
        if (cols.empty())
            throw Error(ErrorKind::ShapeError, "count space needs at least one column");
        if (cols.size() == 1) {
            values_.assign(cols[0], cols[0] + m);
            sorted_.emplace(cols[0], m);
        } else {
            tree_.emplace(Cloud::from_columns(cols, m));
        }
    }

    std::size_t count_within(std::size_t i, double r) const {
        if (sorted_) return sorted_->count_within(values_[i], r);
        return tree_->count_within(i, r);
    }

private:
    std::vector<double> values_;
    std::optional<SortedColumn> sorted_;
    std::optional<KdTree> tree_;
};

// Nearest-neighbor conditional mutual information, evaluated from spaces the
// caller has already built:
//
//   I(X;Y|Z) = psi(k) - < psi(n_xz+1) + psi(n_yz+1) - psi(n_z+1) >
//
// where the radius at each sample is its k-th neighbor distance in the joint
// (X,Y,Z) space and the n_* are strict in-radius counts in the subspaces.
// With Z empty, n_z is m-1 for every sample and the expression collapses to
// the plain mutual information form psi(k) + psi(m) - < psi(n_x+1) + psi(n_y+1) >.
// z == nullptr selects that case without building a space.
//
// The returned value is the raw estimate. It can be slightly negative; any
// clamping is a caller policy.
inline double ksg_from_spaces(const KdTree& joint, const CountSpace& xz, const CountSpace& yz,
                              const CountSpace* z, std::size_t k, DigammaTable& psi) {
    const std::size_t m = joint.size();
    if (k == 0) throw Error(ErrorKind::DomainError, "k must be at least 1");
    if (k >= m) throw Error(ErrorKind::KTooLarge, "k must be below the sample count");
    psi.ensure(m + 1);

    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double radius = joint.kth_distance(i, k);
        const std::size_t n_xz = xz.count_within(i, radius);
        const std::size_t n_yz = yz.count_within(i, radius);
        const std::size_t n_z = z ? z->count_within(i, radius) : m - 1;
        acc += psi(n_xz + 1) + psi(n_yz + 1) - psi(n_z + 1);
    }
    return psi(k) - acc / static_cast<double>(m);
}

namespace detail {

inline std::vector<const double*> concat_cols(const std::vector<const double*>& a,
                                              const std::vector<const double*>& b) {
    std::vector<const double*> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace detail

// I(X;Y|Z) from column arrays of equal length m. x and y must be non-empty;
// z may be empty, which gives plain mutual information.
//
// Swapping x and y is a no-op down to the last bit: the joint radius is a
// max over coordinates (order blind) and the count terms add commutatively.
inline double estimate_cmi(const std::vector<const double*>& x,
                           const std::vector<const double*>& y,
                           const std::vector<const double*>& z, std::size_t m, std::size_t k) {
    if (x.empty() || y.empty())
        throw Error(ErrorKind::ShapeError, "estimate_cmi needs non-empty x and y");
    const KdTree joint(Cloud::from_columns(
        detail::concat_cols(detail::concat_cols(x, y), z), m));
    const CountSpace xz(detail::concat_cols(x, z), m);
    const CountSpace yz(detail::concat_cols(y, z), m);
    std::optional<CountSpace> zs;
    if (!z.empty()) zs.emplace(z, m);
    DigammaTable psi;
    return ksg_from_spaces(joint, xz, yz, zs ? &*zs : nullptr, k, psi);
}

inline double estimate_mi(const std::vector<const double*>& x,
                          const std::vector<const double*>& y, std::size_t m, std::size_t k) {
    return estimate_cmi(x, y, {}, m, k);
}

// Neighbor count used throughout: a fixed fraction of the sample size, never
// below one.
inline std::size_t k_from_fraction(std::size_t m, double fraction) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw Error(ErrorKind::DomainError, "k fraction must be in (0, 1)");
    const double raw = fraction * static_cast<double>(m);
    const auto rounded = static_cast<std::size_t>(raw + 0.5);
    return rounded < 1 ? 1 : rounded;
}

} // namespace tempoca
