/*
 * Independent oracles used to cross-check the interior-point results.
 *
 * simplex_solve      : dense two-phase tableau simplex with Bland's rule, an
 *                      entirely separate algorithm family from the conic
 *                      engine; walks the vertices of {Ax = b, x >= 0}.
 * tsr_grid_oracle    : lower bound on qubit two-setting steering robustness
 *                      from a refined sweep over steering functionals built
 *                      out of projective measurement directions; tight when
 *                      the optimal functional lies in that family.
 */
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tcorr/robustness.hpp"

namespace tcorr::test {

struct SimplexResult {
    enum class Status { optimal, infeasible, unbounded } status = Status::optimal;
    double value = 0.0;
    std::vector<double> x;
};

/// min c.x  s.t.  A x = b, x >= 0   (A given row-major, m x n).
inline SimplexResult simplex_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                                   const std::vector<double>& c) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < m; ++i)
        if (b[i] < 0.0) {
            b[i] = -b[i];
            for (double& v : a[i]) v = -v;
        }

    // Tableau over n structural + m artificial columns.
    const int cols = n + m;
    std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1.0;
        t[i][cols] = b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](int row, int col) {
        const double p = t[row][col];
        for (double& v : t[row]) v /= p;
        for (int i = 0; i < m; ++i) {
            if (i == row || t[i][col] == 0.0) continue;
            const double f = t[i][col];
            for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    };

    // Bland's rule iteration on a cost vector over tableau columns.
    auto iterate = [&](const std::vector<double>& cost, int allowed_cols) -> bool {
        for (long guard = 0; guard < 100000; ++guard) {
            double best_rc = -1e-9;
            int enter = -1;
            // reduced cost of column j: cost_j - sum_i cost_basis(i) t[i][j]
            for (int j = 0; j < allowed_cols && enter < 0; ++j) {
                bool in_basis = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) in_basis = true;
                if (in_basis) continue;
                double rc = cost[j];
                for (int i = 0; i < m; ++i) rc -= cost[basis[i]] * t[i][j];
                if (rc < best_rc) enter = j;  // Bland: first improving index
            }
            if (enter < 0) return true;  // optimal
            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] > 1e-12) {
                    const double ratio = t[i][cols] / t[i][enter];
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (leave < 0 || basis[i] < basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return false;  // unbounded
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: iteration guard tripped");
    };

    // Phase 1: drive out the artificials.
    std::vector<double> phase1(cols, 0.0);
    for (int j = n; j < cols; ++j) phase1[j] = 1.0;
    iterate(phase1, cols);
    double art_value = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) art_value += t[i][cols];
    SimplexResult res;
    if (art_value > 1e-8) {
        res.status = SimplexResult::Status::infeasible;
        return res;
    }
    // Pivot lingering zero-level artificials out where possible.
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n && col < 0; ++j)
            if (std::abs(t[i][j]) > 1e-9) col = j;
        if (col >= 0) pivot(i, col);
        // else: redundant row; the artificial stays basic at zero.
    }

    // Phase 2.
    std::vector<double> cost(cols, 0.0);
    for (int j = 0; j < n; ++j) cost[j] = c[j];
    for (int j = n; j < cols; ++j) cost[j] = 1e12;  // keep artificials at zero
    if (!iterate(cost, n)) {
        res.status = SimplexResult::Status::unbounded;
        return res;
    }

    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols];
    res.value = 0.0;
    for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

/// TNR via the simplex oracle: min sum r s.t. sum r DD - t = P, r, t >= 0.
inline SimplexResult tnr_simplex_oracle(const Behavior& beh, bool lhv_noise) {
    const DeterministicStrategySet sa(beh.settings_a, beh.outcomes_a);
    const DeterministicStrategySet sb(beh.settings_b, beh.outcomes_b);
    const long pairs = sa.count * sb.count;
    const int rows = beh.settings_a * beh.settings_b * beh.outcomes_a * beh.outcomes_b;
    const int n = static_cast<int>(lhv_noise ? 2 * pairs : pairs + rows);

    std::vector<std::vector<double>> a(rows, std::vector<double>(n, 0.0));
    std::vector<double> b(rows), c(n, 0.0);
    for (long k = 0; k < pairs; ++k) c[k] = 1.0;

    int row = 0;
    for (int x = 0; x < beh.settings_a; ++x)
        for (int y = 0; y < beh.settings_b; ++y)
            for (int aa = 0; aa < beh.outcomes_a; ++aa)
                for (int bb = 0; bb < beh.outcomes_b; ++bb, ++row) {
                    for (long u = 0; u < sa.count; ++u) {
                        if (sa.response(u, x) != aa) continue;
                        for (long v = 0; v < sb.count; ++v)
                            if (sb.response(v, y) == bb) {
                                a[row][u * sb.count + v] = 1.0;
                                if (lhv_noise) a[row][pairs + u * sb.count + v] = -1.0;
                            }
                    }
                    if (!lhv_noise) a[row][pairs + row] = -1.0;
                    b[row] = beh.at(aa, bb, x, y);
                }

    SimplexResult res = simplex_solve(std::move(a), std::move(b), c);
    if (res.status == SimplexResult::Status::optimal) {
        double p_total = 0.0;
        for (double v : beh.p) p_total += v;
        res.value = res.value * beh.settings_a * beh.settings_b / p_total - 1.0;
    }
    return res;
}

namespace oracle_detail {

struct Dir {
    double theta = 0.0, phi = 0.0;
};

/// Projector (I + (-1)^a n.sigma)/2 for the Bloch direction (theta, phi).
inline ComplexMatrix bloch_projector(const Dir& d, int a) {
    const double sign = a == 0 ? 1.0 : -1.0;
    const double nx = sign * std::sin(d.theta) * std::cos(d.phi);
    const double ny = sign * std::sin(d.theta) * std::sin(d.phi);
    const double nz = sign * std::cos(d.theta);
    ComplexMatrix p(2, 2);
    p(0, 0) = 0.5 * (1.0 + nz);
    p(1, 1) = 0.5 * (1.0 - nz);
    p(0, 1) = 0.5 * complexd(nx, -ny);
    p(1, 0) = 0.5 * complexd(nx, ny);
    return p;
}

inline double lam_max_2x2(const ComplexMatrix& h) {
    const double tr = h(0, 0).real() + h(1, 1).real();
    const double det =
        h(0, 0).real() * h(1, 1).real() - std::norm(h(0, 1));
    return 0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
}

/// Steering-functional value for measurement directions (d1, d2).
inline double steering_value(const Assemblage& asm_, const Dir& d1, const Dir& d2) {
    double nu = 0.0;
    for (int l1 = 0; l1 < 2; ++l1)
        for (int l2 = 0; l2 < 2; ++l2)
            nu = std::max(nu, lam_max_2x2(bloch_projector(d1, l1) + bloch_projector(d2, l2)));
    double val = 0.0;
    const std::array<Dir, 2> dirs = {d1, d2};
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a)
            val += hs_inner(bloch_projector(dirs[x], a), asm_.at(a, x).mat());
    return val / nu - 1.0;
}

}  // namespace oracle_detail

/// Lower bound on TSR for a qubit two-setting assemblage by sweeping
/// projective steering functionals over a successively refined angle grid.
inline double tsr_grid_oracle(const Assemblage& asm_) {
    using namespace oracle_detail;
    if (asm_.dim != 2 || asm_.settings != 2 || asm_.outcomes != 2)
        throw std::invalid_argument("tsr_grid_oracle: qubit two-setting scenarios only");

    double best_val = -std::numeric_limits<double>::infinity();
    double span_theta = M_PI, span_phi = 2.0 * M_PI;
    std::array<Dir, 2> center = {Dir{M_PI / 2, M_PI}, Dir{M_PI / 2, M_PI}};

    for (int level = 0; level < 6; ++level) {
        const int steps = level == 0 ? 9 : 7;
        std::array<Dir, 2> level_best = center;
        for (int i1 = 0; i1 < steps; ++i1)
            for (int j1 = 0; j1 < steps; ++j1)
                for (int i2 = 0; i2 < steps; ++i2)
                    for (int j2 = 0; j2 < steps; ++j2) {
                        const Dir d1{center[0].theta + span_theta * (i1 - (steps - 1) / 2.0) /
                                                           (steps - 1),
                                     center[0].phi +
                                         span_phi * (j1 - (steps - 1) / 2.0) / (steps - 1)};
                        const Dir d2{center[1].theta + span_theta * (i2 - (steps - 1) / 2.0) /
                                                           (steps - 1),
                                     center[1].phi +
                                         span_phi * (j2 - (steps - 1) / 2.0) / (steps - 1)};
                        const double v = steering_value(asm_, d1, d2);
                        if (v > best_val) {
                            best_val = v;
                            level_best = {d1, d2};
                        }
                    }
        center = level_best;
        span_theta /= double(steps - 1) / 2.0;
        span_phi /= double(steps - 1) / 2.0;
    }
    return best_val;
}

}  // namespace tcorr::test
