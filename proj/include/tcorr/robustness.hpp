/*
 * Robustness measures for two-time correlations.
 *
 *   ter_closed_form / ter_sdp : minimal pseudo-state noise making a state
 *       over time PSD. Closed form: sum of |negative eigenvalues|. The SDP
 *       (min tr N s.t. N >= 0, R + N >= 0) cross-validates the conic engine.
 *
 *   er_ppt : minimal physical noise making the operator a PPT state with the
 *       noise itself PPT. Exact entanglement robustness for 2x2 and 2x3
 *       (where PPT = separable); a lower bound for 3x3, flagged as such.
 *
 *   tsr : temporal steering robustness of an assemblage,
 *       min tr sum_l N_l - 1  s.t.  sum_l D(a|x,l) N_l >= rho_{a|x}, N_l >= 0,
 *       with l running over the deterministic strategy set.
 *
 *   tnr / tnr_lhv : temporal nonlocality robustness of a behavior, as the LP
 *       min sum r(u,v) [s_A s_B / sum P] - 1
 *       s.t. sum_uv r(u,v) D(a|x,u) D(b|y,v) >= P(a,b|x,y), r >= 0;
 *       the LHV variant forces the smoothing noise itself to be a mixture of
 *       deterministic strategies (equality constraints with q >= 0).
 *
 *   separability_g : correlation-tensor separability witness for 3x3 states
 *       over time, max(0, ||D0 C D0||_tr - 2/3) in the orthonormal SU(3)
 *       generator basis with the identity component masked out.
 *
 * Deterministic strategies are ordered lexicographically in
 * (l(x_0), l(x_1), ...), with l(x_0) varying slowest; this ordering is part
 * of the public contract.
 */
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcorr/bases.hpp"
#include "tcorr/channels.hpp"
#include "tcorr/conic.hpp"
#include "tcorr/matrix.hpp"
#include "tcorr/measurements.hpp"
#include "tcorr/state_over_time.hpp"

namespace tcorr {

struct Assemblage {
    int settings = 0, outcomes = 0, dim = 0;
    std::vector<HermitianOperator> elements;  // [x * outcomes + a], subnormalized

    const HermitianOperator& at(int a, int x) const { return elements[x * outcomes + a]; }

    void validate(double tol = 1e-9) const {
        for (int x = 0; x < settings; ++x) {
            double p = 0.0;
            for (int a = 0; a < outcomes; ++a) {
                if (min_eigenvalue(at(a, x)) < -1e-10)
                    throw std::invalid_argument("Assemblage: element not PSD");
                p += at(a, x).trace();
            }
            if (std::abs(p - 1.0) > tol)
                throw std::invalid_argument("Assemblage: probabilities for setting " +
                                            std::to_string(x) + " sum to " + std::to_string(p));
        }
    }
};

struct Behavior {
    int settings_a = 0, settings_b = 0, outcomes_a = 0, outcomes_b = 0;
    std::vector<double> p;  // [((x * s_B + y) * o_A + a) * o_B + b]

    double& at(int a, int b, int x, int y) {
        return p[(static_cast<std::size_t>(x) * settings_b + y) * outcomes_a * outcomes_b +
                 static_cast<std::size_t>(a) * outcomes_b + b];
    }
    double at(int a, int b, int x, int y) const {
        return p[(static_cast<std::size_t>(x) * settings_b + y) * outcomes_a * outcomes_b +
                 static_cast<std::size_t>(a) * outcomes_b + b];
    }

    void validate(double tol = 1e-9) const {
        for (int x = 0; x < settings_a; ++x)
            for (int y = 0; y < settings_b; ++y) {
                double s = 0.0;
                for (int a = 0; a < outcomes_a; ++a)
                    for (int b = 0; b < outcomes_b; ++b) {
                        if (at(a, b, x, y) < -1e-12)
                            throw std::invalid_argument("Behavior: negative probability");
                        s += at(a, b, x, y);
                    }
                if (std::abs(s - 1.0) > tol)
                    throw std::invalid_argument("Behavior: setting pair not normalized");
            }
    }
};

/// All o^s maps from settings to outcomes; D(a|x,l) = [a == l(x)].
struct DeterministicStrategySet {
    int settings = 0, outcomes = 0;
    long count = 0;

    DeterministicStrategySet(int s, int o, long cap = 10000) : settings(s), outcomes(o) {
        if (s < 1 || o < 1) throw std::invalid_argument("strategy set: empty scenario");
        double c = 1.0;
        for (int i = 0; i < s; ++i) c *= o;
        if (c > static_cast<double>(cap))
            throw capacity_error("strategy set: " + std::to_string(c) + " strategies exceed cap " +
                                 std::to_string(cap));
        count = static_cast<long>(c);
    }

    /// Outcome assigned to setting x by strategy l (lexicographic, x0 slowest).
    int response(long l, int x) const {
        long div = 1;
        for (int i = settings - 1; i > x; --i) div *= outcomes;
        return static_cast<int>((l / div) % outcomes);
    }
};

// ---------------------------------------------------------------------------
// Assemblage / behavior generation
// ---------------------------------------------------------------------------

inline Assemblage make_assemblage(const HermitianOperator& rho_a, const Channel& ch,
                                  const std::vector<Pvm>& pvms) {
    if (pvms.empty()) throw std::invalid_argument("make_assemblage: no settings");
    const int d = ch.dim;
    if (rho_a.dim() != d) throw std::invalid_argument("make_assemblage: dim mismatch");
    const int outcomes = static_cast<int>(pvms.front().outcomes.size());

    Assemblage asm_;
    asm_.settings = static_cast<int>(pvms.size());
    asm_.outcomes = outcomes;
    asm_.dim = d;
    for (const auto& pvm : pvms) {
        if (pvm.dim != d) throw std::invalid_argument("make_assemblage: PVM dim mismatch");
        if (static_cast<int>(pvm.outcomes.size()) != outcomes)
            throw std::invalid_argument("make_assemblage: settings must share outcome count");
        for (const auto& m : pvm.outcomes) {
            const ComplexMatrix root = effect_sqrt(m).mat();
            asm_.elements.emplace_back(act(ch, root * rho_a.mat() * root));
        }
    }
    asm_.validate();
    return asm_;
}

inline Behavior make_behavior(const HermitianOperator& rho_a, const Channel& ch,
                              const std::vector<Pvm>& pvms_a, const std::vector<Pvm>& pvms_b) {
    if (pvms_a.empty() || pvms_b.empty())
        throw std::invalid_argument("make_behavior: no settings");
    const Assemblage asm_ = make_assemblage(rho_a, ch, pvms_a);

    Behavior beh;
    beh.settings_a = asm_.settings;
    beh.settings_b = static_cast<int>(pvms_b.size());
    beh.outcomes_a = asm_.outcomes;
    beh.outcomes_b = static_cast<int>(pvms_b.front().outcomes.size());
    beh.p.assign(static_cast<std::size_t>(beh.settings_a) * beh.settings_b * beh.outcomes_a *
                     beh.outcomes_b,
                 0.0);
    for (int x = 0; x < beh.settings_a; ++x)
        for (int y = 0; y < beh.settings_b; ++y) {
            if (pvms_b[y].dim != ch.dim)
                throw std::invalid_argument("make_behavior: PVM dim mismatch");
            if (static_cast<int>(pvms_b[y].outcomes.size()) != beh.outcomes_b)
                throw std::invalid_argument("make_behavior: settings must share outcome count");
            for (int a = 0; a < beh.outcomes_a; ++a)
                for (int b = 0; b < beh.outcomes_b; ++b)
                    beh.at(a, b, x, y) =
                        hs_inner(pvms_b[y].outcomes[b].mat(), asm_.at(a, x).mat());
        }
    beh.validate();
    return beh;
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

enum class Exactness { exact, ppt_lower_bound };

struct RobustnessResult {
    std::string measure;
    double value = 0.0;
    double solver_gap = 0.0;
    Exactness exactness = Exactness::exact;
    long strategy_count = 0;

    operator double() const { return value; }
};

namespace detail {

inline void require_optimal(const ConicSolution& sol, const std::string& what) {
    if (sol.status != SolveStatus::optimal)
        throw numerical_error(what + ": solver status " + to_string(sol.status) +
                              (sol.diagnostics.empty() ? "" : " (" + sol.diagnostics + ")"));
}

/// Hermitian unit functionals spanning d x d Hermitian space:
/// E_ii, (E_ij + E_ji), i(E_ij - E_ji)  for i < j.
inline std::vector<HermitianOperator> hermitian_unit_basis(int d) {
    std::vector<HermitianOperator> out;
    out.reserve(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i) {
        ComplexMatrix m(d, d);
        m(i, i) = 1.0;
        out.emplace_back(m);
    }
    const complexd i1(0.0, 1.0);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            ComplexMatrix re(d, d), im(d, d);
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            im(i, j) = i1;
            im(j, i) = -i1;
            out.emplace_back(re);
            out.emplace_back(im);
        }
    return out;
}

}  // namespace detail

/// Sum of |negative eigenvalues| = (||R||_tr - 1)/2 for trace-1 R.
inline double ter_closed_form(const StateOverTime& r) {
    const Spectrum s = eig_hermitian(r.op);
    double t = 0.0;
    for (double e : s.eigenvalues)
        if (e < 0.0) t -= e;
    return t;
}

inline RobustnessResult ter_sdp(const StateOverTime& r, SolverOptions opts = {}) {
    const int d = r.op.dim();
    ConicProgram p;
    const int noise = p.add_psd_block(d);
    const int mixed = p.add_psd_block(d);
    p.set_objective(noise, HermitianOperator::identity(d));
    // mixed - noise = R, entrywise over a Hermitian functional basis
    for (const auto& f : detail::hermitian_unit_basis(d)) {
        ConicConstraint c;
        c.terms.push_back({mixed, BlockValue::psd(f.mat())});
        c.terms.push_back({noise, BlockValue::psd(f.mat() * complexd(-1.0))});
        c.rhs = hs_inner(f.mat(), r.op.mat());
        p.add_constraint(std::move(c));
    }
    const ConicSolution sol = solve(p, opts);
    detail::require_optimal(sol, "ter_sdp");
    return {"TER", sol.primal_obj, sol.gap, Exactness::exact, 0};
}

/*
 * PPT entanglement robustness. Blocks: noise N, its partial transpose,
 * the mixture R + N, and its partial transpose; all PSD.
 */
inline RobustnessResult er_ppt(const StateOverTime& r, SolverOptions opts = {}) {
    const int da = r.dim_a, db = r.dim_b, d = da * db;
    ConicProgram p;
    const int noise = p.add_psd_block(d);
    const int noise_pt = p.add_psd_block(d);
    const int mixed = p.add_psd_block(d);
    const int mixed_pt = p.add_psd_block(d);
    p.set_objective(noise, HermitianOperator::identity(d));
    for (const auto& f : detail::hermitian_unit_basis(d)) {
        const ComplexMatrix fpt = partial_transpose(f.mat(), da, db, Subsystem::B);
        {
            ConicConstraint c;  // mixed - noise = R
            c.terms.push_back({mixed, BlockValue::psd(f.mat())});
            c.terms.push_back({noise, BlockValue::psd(f.mat() * complexd(-1.0))});
            c.rhs = hs_inner(f.mat(), r.op.mat());
            p.add_constraint(std::move(c));
        }
        {
            ConicConstraint c;  // noise_pt = PT(noise)
            c.terms.push_back({noise_pt, BlockValue::psd(f.mat())});
            c.terms.push_back({noise, BlockValue::psd(fpt * complexd(-1.0))});
            c.rhs = 0.0;
            p.add_constraint(std::move(c));
        }
        {
            ConicConstraint c;  // mixed_pt = PT(mixed)
            c.terms.push_back({mixed_pt, BlockValue::psd(f.mat())});
            c.terms.push_back({mixed, BlockValue::psd(fpt * complexd(-1.0))});
            c.rhs = 0.0;
            p.add_constraint(std::move(c));
        }
    }
    const ConicSolution sol = solve(p, opts);
    detail::require_optimal(sol, "er_ppt");
    const bool exact = (da == 2 && db <= 3) || (db == 2 && da <= 3);
    return {"ER", sol.primal_obj, sol.gap,
            exact ? Exactness::exact : Exactness::ppt_lower_bound, 0};
}

inline RobustnessResult tsr(const Assemblage& asm_, SolverOptions opts = {}) {
    asm_.validate();
    const int d = asm_.dim;
    const DeterministicStrategySet strategies(asm_.settings, asm_.outcomes);

    ConicProgram p;
    std::vector<int> lam_blocks;
    lam_blocks.reserve(strategies.count);
    for (long l = 0; l < strategies.count; ++l) {
        const int blk = p.add_psd_block(d);
        lam_blocks.push_back(blk);
        p.set_objective(blk, HermitianOperator::identity(d));
    }
    // slack Z_{a,x} = sum_l D(a|x,l) N_l - rho_{a|x} >= 0
    const auto unit = detail::hermitian_unit_basis(d);
    for (int x = 0; x < asm_.settings; ++x)
        for (int a = 0; a < asm_.outcomes; ++a) {
            const int z = p.add_psd_block(d);
            for (const auto& f : unit) {
                ConicConstraint c;
                c.terms.push_back({z, BlockValue::psd(f.mat())});
                for (long l = 0; l < strategies.count; ++l)
                    if (strategies.response(l, x) == a)
                        c.terms.push_back(
                            {lam_blocks[l], BlockValue::psd(f.mat() * complexd(-1.0))});
                c.rhs = -hs_inner(f.mat(), asm_.at(a, x).mat());
                p.add_constraint(std::move(c));
            }
        }
    const ConicSolution sol = solve(p, opts);
    detail::require_optimal(sol, "tsr");
    return {"TSR", sol.primal_obj - 1.0, sol.gap, Exactness::exact, strategies.count};
}

namespace detail {

/*
 * The equality system of the LHV-noise variant is rank-deficient (strategy
 * products span only the no-signaling subspace), so redundant rows are
 * filtered by Gram-Schmidt with the rhs carried along. A row whose
 * coefficients vanish against the accepted span but whose rhs does not is an
 * inconsistency: the behavior signals in time and no LHV smoothing exists.
 */
struct RowFilter {
    std::vector<std::vector<double>> basis;  // orthonormalized coefficient rows
    std::vector<double> basis_rhs;           // correspondingly transformed rhs
    bool inconsistent = false;

    bool accept(std::vector<double> c, double rhs) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            double alpha = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) alpha += c[i] * basis[k][i];
            if (alpha == 0.0) continue;
            for (std::size_t i = 0; i < c.size(); ++i) c[i] -= alpha * basis[k][i];
            rhs -= alpha * basis_rhs[k];
        }
        double norm = 0.0;
        for (double v : c) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 1e-9) {
            for (double& v : c) v /= norm;
            basis.push_back(std::move(c));
            basis_rhs.push_back(rhs / norm);
            return true;
        }
        if (std::abs(rhs) > 1e-9) inconsistent = true;
        return false;
    }
};

inline RobustnessResult tnr_impl(const Behavior& beh, bool lhv_noise, SolverOptions opts) {
    beh.validate();
    const DeterministicStrategySet strat_a(beh.settings_a, beh.outcomes_a);
    const DeterministicStrategySet strat_b(beh.settings_b, beh.outcomes_b);
    const long pairs = strat_a.count * strat_b.count;
    const int rows = beh.settings_a * beh.settings_b * beh.outcomes_a * beh.outcomes_b;

    double p_total = 0.0;
    for (double v : beh.p) p_total += v;

    ConicProgram p;
    const int rvar = p.add_nonneg_block(static_cast<int>(pairs));
    p.set_objective(rvar, std::vector<double>(pairs, 1.0));
    const int aux = lhv_noise ? p.add_nonneg_block(static_cast<int>(pairs))
                              : p.add_nonneg_block(rows);

    RowFilter filter;
    int row = 0;
    for (int x = 0; x < beh.settings_a; ++x)
        for (int y = 0; y < beh.settings_b; ++y)
            for (int a = 0; a < beh.outcomes_a; ++a)
                for (int b = 0; b < beh.outcomes_b; ++b, ++row) {
                    std::vector<double> coeff(pairs, 0.0);
                    for (long u = 0; u < strat_a.count; ++u) {
                        if (strat_a.response(u, x) != a) continue;
                        for (long v = 0; v < strat_b.count; ++v)
                            if (strat_b.response(v, y) == b) coeff[u * strat_b.count + v] = 1.0;
                    }
                    const double rhs = beh.at(a, b, x, y);
                    ConicConstraint c;
                    c.rhs = rhs;
                    if (lhv_noise) {
                        // sum (r - q) D D = P on an independent row subset
                        if (!filter.accept(coeff, rhs)) continue;
                        std::vector<double> qcoeff(coeff);
                        for (double& v : qcoeff) v = -v;
                        c.terms.push_back({rvar, BlockValue::nonneg(std::move(coeff))});
                        c.terms.push_back({aux, BlockValue::nonneg(std::move(qcoeff))});
                    } else {
                        // sum r D D - t = P
                        std::vector<double> slack(rows, 0.0);
                        slack[row] = -1.0;
                        c.terms.push_back({rvar, BlockValue::nonneg(std::move(coeff))});
                        c.terms.push_back({aux, BlockValue::nonneg(std::move(slack))});
                    }
                    p.add_constraint(std::move(c));
                }

    const std::string name = lhv_noise ? "LHV-TNR" : "TNR";
    if (filter.inconsistent)
        return {name, std::numeric_limits<double>::infinity(), 0.0, Exactness::exact, pairs};

    const ConicSolution sol = solve(p, opts);
    if (lhv_noise && sol.status == SolveStatus::infeasible)
        return {name, std::numeric_limits<double>::infinity(), 0.0, Exactness::exact, pairs};
    detail::require_optimal(sol, name);
    const double scale = double(beh.settings_a) * beh.settings_b / p_total;
    return {name, sol.primal_obj * scale - 1.0, sol.gap, Exactness::exact, pairs};
}

}  // namespace detail

inline RobustnessResult tnr(const Behavior& beh, SolverOptions opts = {}) {
    return detail::tnr_impl(beh, false, opts);
}

inline RobustnessResult tnr_lhv(const Behavior& beh, SolverOptions opts = {}) {
    return detail::tnr_impl(beh, true, opts);
}

/*
 * Correlation-tensor separability criterion for a 3x3 state over time with
 * PSD marginals: separable only if ||D0 C D0||_tr <= 2/3, where C is the
 * correlation tensor over orthonormal SU(3) generators (identity first) and
 * D0 masks the identity component.
 */
inline double separability_g(const StateOverTime& r) {
    if (r.dim_a != 3 || r.dim_b != 3)
        throw std::invalid_argument("separability_g: requires 3x3 factors");
    const OperatorBasis basis = gellmann_basis(3);
    const CorrelationTensor c = expand(r.op, basis, basis);
    ComplexMatrix masked(c.rows, c.cols);
    for (int i = 1; i < c.rows; ++i)
        for (int j = 1; j < c.cols; ++j) masked(i, j) = c(i, j);
    const double bound = 2.0 / 3.0;  // sqrt((d-1)^2/d^2) at x = y = 0, d = 3
    return std::max(0.0, nuclear_norm(masked) - bound);
}

}  // namespace tcorr
