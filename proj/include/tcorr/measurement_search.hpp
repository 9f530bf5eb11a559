/*
 * Outer optimization over projective measurement settings, maximizing a
 * robustness measure for a fixed initial state and channel.
 *
 * Each setting's basis is a unitary parameterized by a product of complex
 * Givens rotations over the pair order (0,1), (0,2), ..., (d-2,d-1), two
 * reals (theta, phi) per pair: d(d-1) parameters per setting. PVMs are the
 * rank-1 projectors onto the unitary's columns, so column phases are gauge.
 *
 * The search is Nelder-Mead with random restarts plus a mutually-unbiased-
 * bases start (always included, so the best value never falls below the MUB
 * value). The inner objective is a conic optimum: piecewise smooth, so a
 * derivative-free method is the right tool. Reported values are best-found,
 * not certified optima. For the nonlocality measure both time slices get
 * their own settings (the parameter vector holds 2s settings).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "tcorr/channels.hpp"
#include "tcorr/matrix.hpp"
#include "tcorr/measurements.hpp"
#include "tcorr/robustness.hpp"

namespace tcorr {

struct PvmParameterization {
    int dim = 0;
    int settings = 0;
    std::vector<double> params;  // settings * dim * (dim-1) reals

    PvmParameterization(int d, int s) : dim(d), settings(s), params(angle_count(d, s), 0.0) {}
    PvmParameterization(int d, int s, std::vector<double> p)
        : dim(d), settings(s), params(std::move(p)) {
        if (params.size() != angle_count(d, s))
            throw std::invalid_argument("PvmParameterization: parameter length mismatch");
    }

    static std::size_t angle_count(int d, int s) {
        return static_cast<std::size_t>(s) * d * (d - 1);
    }
};

namespace detail {

inline void apply_givens_right(ComplexMatrix& u, int p, int q, double theta, double phi) {
    // u <- u G with G_pp = cos, G_pq = -e^{i phi} sin, G_qp = e^{-i phi} sin, G_qq = cos
    const double c = std::cos(theta), s = std::sin(theta);
    const complexd eip(std::cos(phi), std::sin(phi));
    for (int i = 0; i < u.rows(); ++i) {
        const complexd uip = u(i, p), uiq = u(i, q);
        u(i, p) = c * uip + s * std::conj(eip) * uiq;
        u(i, q) = -s * eip * uip + c * uiq;
    }
}

inline std::vector<std::pair<int, int>> givens_pairs(int d) {
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) pairs.emplace_back(p, q);
    return pairs;
}

}  // namespace detail

/// Unitary for one setting from its d(d-1) angles.
inline ComplexMatrix decode_unitary(int d, const double* angles) {
    ComplexMatrix u = ComplexMatrix::identity(d);
    const auto pairs = detail::givens_pairs(d);
    for (std::size_t k = 0; k < pairs.size(); ++k)
        detail::apply_givens_right(u, pairs[k].first, pairs[k].second, angles[2 * k],
                                   angles[2 * k + 1]);
    return u;
}

/// Angles reproducing a given unitary's columns up to per-column phases.
inline std::vector<double> encode_unitary(const ComplexMatrix& u) {
    const int d = u.rows();
    ComplexMatrix a = u;
    const auto pairs = detail::givens_pairs(d);
    std::vector<double> angles;
    angles.reserve(2 * pairs.size());
    for (const auto& [p, q] : pairs) {
        // Zero entry (q, p) by a rotation of rows p and q (left-multiply G^dag).
        const complexd ap = a(p, p), aq = a(q, p);
        double theta = 0.0, phi = 0.0;
        const double rp = std::abs(ap), rq = std::abs(aq);
        if (rq > 1e-14) {
            theta = std::atan2(rq, rp);
            phi = std::arg(rp > 1e-14 ? ap : complexd(1.0)) - std::arg(aq);
        }
        angles.push_back(theta);
        angles.push_back(phi);
        const double c = std::cos(theta), s = std::sin(theta);
        const complexd eip(std::cos(phi), std::sin(phi));
        for (int j = 0; j < d; ++j) {
            const complexd apj = a(p, j), aqj = a(q, j);
            a(p, j) = c * apj + s * eip * aqj;
            a(q, j) = -s * std::conj(eip) * apj + c * aqj;
        }
    }
    return angles;
}

/// Rank-1 PVMs from the parameterized unitaries, one per setting.
inline std::vector<Pvm> decode(const PvmParameterization& par) {
    std::vector<Pvm> pvms;
    pvms.reserve(par.settings);
    const std::size_t per = static_cast<std::size_t>(par.dim) * (par.dim - 1);
    for (int s = 0; s < par.settings; ++s)
        pvms.push_back(Pvm::from_basis_columns(decode_unitary(par.dim, &par.params[s * per])));
    return pvms;
}

enum class SearchMeasure { tsr, tnr };

struct SearchOptions {
    int restarts = 16;          // random restarts in addition to the MUB start
    long max_evals = 400;       // per restart
    double ftol = 1e-9;
    std::uint64_t seed = 0;
    int failure_budget = 20;    // inner solver failures before aborting
    SolverOptions solver;
};

struct SearchResult {
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<Pvm> best_pvms;    // early-time settings
    std::vector<Pvm> best_pvms_b;  // late-time settings (nonlocality only)
    int restarts_used = 0;
    long evaluations = 0;
    bool converged = false;
    int solver_failures = 0;
    bool aborted = false;
    std::vector<double> restart_values;  // best value per start, audit trail
};

namespace detail {

/// Plain Nelder-Mead minimization; returns best point seen.
inline std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    double step, long max_evals, double ftol, long& evals) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1][i] += step;
    for (int i = 0; i <= n; ++i) {
        fv[i] = f(pts[i]);
        ++evals;
    }
    std::vector<double> best_x = pts[0];
    double best_f = fv[0];
    auto note_best = [&](const std::vector<double>& x, double v) {
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    };
    for (int i = 0; i <= n; ++i) note_best(pts[i], fv[i]);

    while (evals < max_evals) {
        std::vector<int> order(n + 1);
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        if (fv[order[n]] - fv[order[0]] < ftol) break;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) centroid[j] += pts[order[i]][j] / n;
        const int worst = order[n];

        auto blend = [&](double t) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j) x[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
            return x;
        };
        const std::vector<double> refl = blend(-1.0);
        const double f_refl = f(refl);
        ++evals;
        note_best(refl, f_refl);

        if (f_refl < fv[order[0]]) {
            const std::vector<double> expd = blend(-2.0);
            const double f_expd = f(expd);
            ++evals;
            note_best(expd, f_expd);
            pts[worst] = f_expd < f_refl ? expd : refl;
            fv[worst] = std::min(f_expd, f_refl);
        } else if (f_refl < fv[order[n - 1]]) {
            pts[worst] = refl;
            fv[worst] = f_refl;
        } else {
            const std::vector<double> contr = blend(f_refl < fv[worst] ? -0.5 : 0.5);
            const double f_contr = f(contr);
            ++evals;
            note_best(contr, f_contr);
            if (f_contr < std::min(f_refl, fv[worst])) {
                pts[worst] = contr;
                fv[worst] = f_contr;
            } else {
                for (int i = 1; i <= n; ++i) {  // shrink toward the best vertex
                    const int idx = order[i];
                    for (int j = 0; j < n; ++j)
                        pts[idx][j] = 0.5 * (pts[idx][j] + pts[order[0]][j]);
                    fv[idx] = f(pts[idx]);
                    ++evals;
                    note_best(pts[idx], fv[idx]);
                }
            }
        }
    }
    return {best_x, best_f};
}

}  // namespace detail

inline SearchResult maximize(SearchMeasure measure, const HermitianOperator& rho_a,
                             const Channel& ch, int settings_count, SearchOptions opts = {}) {
    if (settings_count < 1) throw std::invalid_argument("maximize: settings_count must be >= 1");
    const int d = ch.dim;
    const int total_settings = measure == SearchMeasure::tnr ? 2 * settings_count : settings_count;
    const std::size_t nparams = PvmParameterization::angle_count(d, total_settings);

    SearchResult result;
    auto objective = [&](const std::vector<double>& params) -> double {
        // Minimized: negative robustness. Failures poison the point.
        try {
            const PvmParameterization par(d, total_settings, params);
            const auto pvms = decode(par);
            double value = 0.0;
            if (measure == SearchMeasure::tsr) {
                value = tsr(make_assemblage(rho_a, ch, pvms), opts.solver).value;
            } else {
                const std::vector<Pvm> side_a(pvms.begin(), pvms.begin() + settings_count);
                const std::vector<Pvm> side_b(pvms.begin() + settings_count, pvms.end());
                value = tnr(make_behavior(rho_a, ch, side_a, side_b), opts.solver).value;
            }
            return -value;
        } catch (const numerical_error&) {
            ++result.solver_failures;
            return std::numeric_limits<double>::infinity();
        }
    };

    // MUB start: cycle through the unbiased bases.
    std::vector<double> mub_start;
    {
        const auto bases = mub_pvms(d, d + 1);
        for (int s = 0; s < total_settings; ++s) {
            ComplexMatrix u(d, d);
            const Pvm& pvm = bases[s % (d + 1)];
            // Recover a basis matrix from the rank-1 projectors.
            for (int k = 0; k < d; ++k) {
                const Spectrum spec = eig_hermitian(pvm.outcomes[k]);
                for (int i = 0; i < d; ++i) u(i, k) = spec.eigenvectors(i, 0);
            }
            const auto angles = encode_unitary(u);
            mub_start.insert(mub_start.end(), angles.begin(), angles.end());
        }
    }

    std::mt19937_64 g(opts.seed);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);

    for (int r = 0; r <= opts.restarts && !result.aborted; ++r) {
        std::vector<double> start;
        if (r == 0) {
            start = mub_start;
        } else {
            start.resize(nparams);
            for (double& v : start) v = angle(g);
        }

        long evals = 0;
        const auto [x, fx] =
            detail::nelder_mead(objective, std::move(start), 0.35, opts.max_evals, opts.ftol,
                                evals);
        result.evaluations += evals;
        ++result.restarts_used;
        result.restart_values.push_back(-fx);
        if (-fx > result.best_value) {
            result.best_value = -fx;
            const PvmParameterization par(d, total_settings, x);
            const auto pvms = decode(par);
            if (measure == SearchMeasure::tnr) {
                result.best_pvms.assign(pvms.begin(), pvms.begin() + settings_count);
                result.best_pvms_b.assign(pvms.begin() + settings_count, pvms.end());
            } else {
                result.best_pvms = pvms;
            }
        }
        if (result.solver_failures > opts.failure_budget) result.aborted = true;
    }
    result.converged = !result.aborted && std::isfinite(result.best_value);
    return result;
}

}  // namespace tcorr
