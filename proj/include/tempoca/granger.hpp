#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "tempoca/error.hpp"
#include "tempoca/graph.hpp"
#include "tempoca/panel.hpp"
#include "tempoca/special.hpp"

namespace tempoca {

struct GrangerOptions {
    int tau_max = 3;
    double alpha = 0.03;

    void validate() const {
        if (tau_max < 1) throw Error(ErrorKind::DomainError, "tau_max must be at least 1");
        if (!(alpha > 0.0) || !(alpha < 1.0))
            throw Error(ErrorKind::DomainError, "alpha must be in (0, 1)");
    }
};

namespace detail {

inline double residual_ss(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols())
        throw Error(ErrorKind::RankDeficient, "regression design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(y);
    return (y - X * beta).squaredNorm();
}

} // namespace detail

// Tail p-value of the nested-model F test for "driver lags add nothing" in a
// linear autoregression of the target:
//
//   full:    y_t ~ 1 + y_(t-1..tau) + x_(t-1..tau)
//   reduced: y_t ~ 1 + y_(t-1..tau)
//   F = ((rss_red - rss_full)/tau) / (rss_full/(m - 2 tau - 1))
//
// over the m = n - tau rows where every lag exists.
inline double granger_p_value(const Panel& panel, std::size_t driver, std::size_t target,
                              const GrangerOptions& opt) {
    opt.validate();
    if (driver == target)
        throw Error(ErrorKind::DomainError, "driver and target must differ");
    if (driver >= panel.n_cols() || target >= panel.n_cols())
        throw Error(ErrorKind::DomainError, "series index out of range");

    const auto tau = static_cast<std::size_t>(opt.tau_max);
    const std::size_t n = panel.n_rows();
    if (n < tau + 2 * tau + 2)
        throw Error(ErrorKind::TooShort, "series too short for the requested lag order");
    const std::size_t m = n - tau;
    const double dof2 = static_cast<double>(m) - 2.0 * static_cast<double>(tau) - 1.0;
    if (dof2 < 1.0)
        throw Error(ErrorKind::TooShort, "not enough rows for the full regression");

    const double* y_col = panel.col(target);
    const double* x_col = panel.col(driver);

    Eigen::VectorXd y(m);
    Eigen::MatrixXd full(m, 1 + 2 * tau);
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t t = r + tau;
        y(r) = y_col[t];
        full(r, 0) = 1.0;
        for (std::size_t l = 1; l <= tau; ++l) {
            full(r, l) = y_col[t - l];
            full(r, tau + l) = x_col[t - l];
        }
    }
    const Eigen::MatrixXd reduced = full.leftCols(1 + tau);

    const double rss_full = detail::residual_ss(full, y);
    const double rss_reduced = detail::residual_ss(reduced, y);
    if (rss_reduced < rss_full - 1e-9 * rss_reduced)
        throw Error(ErrorKind::SelfTest, "nested regression increased the residual");

    if (rss_full <= 0.0) return 0.0; // perfect fit, infinitely strong evidence
    const double f =
        ((rss_reduced - rss_full) / static_cast<double>(tau)) / (rss_full / dof2);
    return f_tail_probability(f < 0.0 ? 0.0 : f, static_cast<double>(tau), dof2);
}

// Pairwise linear baseline: an edge for every ordered pair whose F test
// rejects at level alpha. Edges carry their p-value in the strength slot
// (smaller means stronger here, unlike the information measure).
inline Graph pwgc(const Panel& panel, const GrangerOptions& opt) {
    opt.validate();
    const std::size_t g = panel.n_cols();
    if (g < 2) throw Error(ErrorKind::ShapeError, "need at least two series");
    Graph out(panel.names());
    for (std::size_t from = 0; from < g; ++from)
        for (std::size_t to = 0; to < g; ++to) {
            if (from == to) continue;
            const double p = granger_p_value(panel, from, to, opt);
            if (p < opt.alpha) out.add_directed(from, to, p);
        }
    return out;
}

} // namespace tempoca
