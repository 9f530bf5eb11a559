/*
 * Small dense primal-dual interior-point solver for block-structured
 * semidefinite programs; LPs ride along as nonnegative-orthant blocks.
 *
 * Primal form:   min <C, X>   s.t.  <A_k, X> = b_k (k = 1..m),   X in K,
 * where K is a product of complex-Hermitian PSD cones and nonnegative
 * orthants, and <.,.> is the real Hilbert-Schmidt inner product.
 *
 * Algorithm: infeasible start, Nesterov-Todd scaling W (W S W = X) computed
 * blockwise through eigendecompositions, Mehrotra predictor-corrector in the
 * scaled variable lambda = R S R (W = R R, R Hermitian), dense Schur
 * complement M_jk = <A_j, W A_k W> factored by Cholesky. Sizes here are tiny
 * (blocks <= 9x9, m <= a few hundred), so robustness beats sparsity.
 *
 * Primal infeasibility is reported through an approximate Farkas certificate:
 * y with b.y > 0 and A*(y) <= 0 within tolerance.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcorr/matrix.hpp"

namespace tcorr {

enum class ConeKind { psd, nonneg };

struct BlockSpec {
    int dim = 0;  // matrix dim for psd, vector length for nonneg
    ConeKind cone = ConeKind::psd;
};

/// A point (or linear functional) in the block space.
struct BlockValue {
    ConeKind cone = ConeKind::psd;
    ComplexMatrix m;        // psd blocks
    std::vector<double> v;  // nonneg blocks

    static BlockValue psd(ComplexMatrix mat) {
        BlockValue b;
        b.cone = ConeKind::psd;
        b.m = std::move(mat);
        return b;
    }
    static BlockValue nonneg(std::vector<double> vec) {
        BlockValue b;
        b.cone = ConeKind::nonneg;
        b.v = std::move(vec);
        return b;
    }
};

using BlockVec = std::vector<BlockValue>;

struct ConicTerm {
    int block = 0;
    BlockValue coeff;
};

struct ConicConstraint {
    std::vector<ConicTerm> terms;
    double rhs = 0.0;
};

class ConicProgram {
  public:
    int add_psd_block(int dim) {
        blocks_.push_back({dim, ConeKind::psd});
        objective_.push_back(BlockValue::psd(ComplexMatrix(dim, dim)));
        return static_cast<int>(blocks_.size()) - 1;
    }
    int add_nonneg_block(int n) {
        blocks_.push_back({n, ConeKind::nonneg});
        objective_.push_back(BlockValue::nonneg(std::vector<double>(n, 0.0)));
        return static_cast<int>(blocks_.size()) - 1;
    }

    void set_objective(int block, const HermitianOperator& c) {
        check_block(block, ConeKind::psd, c.dim());
        objective_[block].m = c.mat();
    }
    void set_objective(int block, std::vector<double> c) {
        check_block(block, ConeKind::nonneg, static_cast<int>(c.size()));
        objective_[block].v = std::move(c);
    }

    void add_constraint(ConicConstraint c) {
        for (const auto& t : c.terms) {
            const int want = (t.coeff.cone == ConeKind::psd) ? t.coeff.m.rows()
                                                             : static_cast<int>(t.coeff.v.size());
            check_block(t.block, t.coeff.cone, want);
            if (t.coeff.cone == ConeKind::psd &&
                (t.coeff.m - t.coeff.m.adjoint()).max_abs() > 1e-12)
                throw std::invalid_argument("conic constraint: coefficient not Hermitian");
        }
        constraints_.push_back(std::move(c));
    }

    /// Constraint <F, X_block> = rhs with a single term.
    void add_single_constraint(int block, const HermitianOperator& f, double rhs) {
        ConicConstraint c;
        c.terms.push_back({block, BlockValue::psd(f.mat())});
        c.rhs = rhs;
        add_constraint(std::move(c));
    }

    const std::vector<BlockSpec>& blocks() const { return blocks_; }
    const BlockVec& objective() const { return objective_; }
    const std::vector<ConicConstraint>& constraints() const { return constraints_; }

    /// Self-describing text dump, for cross-checking against external solvers.
    std::string dump() const {
        std::ostringstream os;
        os.precision(17);
        os << "conic-program v1\n";
        os << "blocks " << blocks_.size() << "\n";
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            os << "block " << i << " " << (blocks_[i].cone == ConeKind::psd ? "psd " : "nonneg ")
               << blocks_[i].dim << "\n";
        auto put = [&os](const BlockValue& b) {
            if (b.cone == ConeKind::psd) {
                for (int i = 0; i < b.m.rows(); ++i)
                    for (int j = 0; j < b.m.cols(); ++j)
                        os << " " << b.m(i, j).real() << " " << b.m(i, j).imag();
            } else {
                for (double x : b.v) os << " " << x;
            }
            os << "\n";
        };
        os << "objective\n";
        for (std::size_t i = 0; i < objective_.size(); ++i) {
            os << "obj " << i;
            put(objective_[i]);
        }
        os << "constraints " << constraints_.size() << "\n";
        for (std::size_t k = 0; k < constraints_.size(); ++k) {
            os << "constraint " << k << " rhs " << constraints_[k].rhs << " terms "
               << constraints_[k].terms.size() << "\n";
            for (const auto& t : constraints_[k].terms) {
                os << "term " << t.block;
                put(t.coeff);
            }
        }
        return os.str();
    }

  private:
    void check_block(int block, ConeKind cone, int dim) const {
        if (block < 0 || block >= static_cast<int>(blocks_.size()))
            throw std::invalid_argument("conic program: bad block index");
        if (blocks_[block].cone != cone || blocks_[block].dim != dim)
            throw std::invalid_argument("conic program: block kind/dim mismatch");
    }

    std::vector<BlockSpec> blocks_;
    BlockVec objective_;
    std::vector<ConicConstraint> constraints_;
};

struct SolverOptions {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iter = 200;
    double step_frac = 0.98;
    bool verbose = false;
};

enum class SolveStatus { optimal, infeasible, max_iter };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::max_iter: return "max_iter";
    }
    return "?";
}

struct ConicSolution {
    SolveStatus status = SolveStatus::max_iter;
    BlockVec primal;
    std::vector<double> dual_y;
    BlockVec dual_slack;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double gap = 0.0;  // relative duality gap at termination
    int iterations = 0;
    std::string diagnostics;
};

namespace conic_detail {

struct PsdScaling {
    ComplexMatrix w;      // NT scaling matrix
    ComplexMatrix r;      // Hermitian sqrt of w
    ComplexMatrix r_inv;
    ComplexMatrix lam_q;          // eigenvectors of lambda = R S R
    std::vector<double> lam_val;  // eigenvalues of lambda
};

inline ComplexMatrix herm_power(const ComplexMatrix& m, double p) {
    const HermitianOperator h(m);
    const Spectrum s = eig_hermitian(h);
    const int n = h.dim();
    ComplexMatrix out(n, n);
    for (int k = 0; k < n; ++k) {
        const double e = s.eigenvalues[k];
        if (e <= 0.0)
            throw numerical_error("conic scaling: nonpositive eigenvalue " + std::to_string(e));
        const double f = std::pow(e, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) += f * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
    }
    return out;
}

inline ComplexMatrix hermitize(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return out;
}

/// Largest alpha in (0, cap] with X + alpha dX >= 0, given X > 0.
inline double max_step_psd(const ComplexMatrix& x, const ComplexMatrix& dx, double cap) {
    const ComplexMatrix xm12 = herm_power(x, -0.5);
    const HermitianOperator t(xm12 * dx * xm12);
    const double lam_min = min_eigenvalue(t);
    if (lam_min >= -1e-16) return cap;
    return std::min(cap, -1.0 / lam_min);
}

inline double max_step_nonneg(const std::vector<double>& x, const std::vector<double>& dx,
                              double cap) {
    double a = cap;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
    return a;
}

/// Dense Cholesky; returns false if the matrix is not numerically SPD.
inline bool cholesky(std::vector<double>& a, int n) {
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) return false;
        const double l = std::sqrt(d);
        a[j * n + j] = l;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / l;
        }
    }
    return true;
}

inline void chol_solve(const std::vector<double>& l, int n, std::vector<double>& x) {
    for (int i = 0; i < n; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l[i * n + k] * x[k];
        x[i] = s / l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * x[k];
        x[i] = s / l[i * n + i];
    }
}

}  // namespace conic_detail

class ConicSolver {
  public:
    explicit ConicSolver(const ConicProgram& p, SolverOptions opts = {})
        : p_(p), opts_(opts), nblk_(static_cast<int>(p.blocks().size())),
          m_(static_cast<int>(p.constraints().size())) {
        if (nblk_ == 0) throw std::invalid_argument("conic solve: no blocks");
        if (m_ == 0) throw std::invalid_argument("conic solve: no constraints");
        nu_ = 0;
        for (const auto& b : p.blocks()) nu_ += b.dim;
    }

    ConicSolution solve() {
        init_point();
        ConicSolution sol;

        for (int iter = 0; iter < opts_.max_iter; ++iter) {
            // Residuals and objective values.
            std::vector<double> rp = residual_primal();
            BlockVec rd = residual_dual();
            const double pobj = inner_vec(p_.objective(), x_);
            const double dobj = dual_objective();
            const double mu = inner_vec(x_, s_) / nu_;

            const double bnorm = 1.0 + max_abs_rhs();
            const double cnorm = 1.0 + max_abs_obj();
            double rp_norm = 0.0;
            for (double r : rp) rp_norm = std::max(rp_norm, std::abs(r));
            double rd_norm = 0.0;
            for (const auto& b : rd) rd_norm = std::max(rd_norm, block_max_abs(b));
            const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
            const double rel_gap = inner_vec(x_, s_) / denom;

            if (opts_.verbose) trace(iter, pobj, dobj, rp_norm / bnorm, rd_norm / cnorm, mu);

            if (rp_norm / bnorm <= opts_.feas_tol && rd_norm / cnorm <= opts_.feas_tol &&
                rel_gap <= opts_.gap_tol) {
                fill_solution(sol, SolveStatus::optimal, pobj, dobj, rel_gap, iter);
                return sol;
            }
            if (detect_infeasible()) {
                fill_solution(sol, SolveStatus::infeasible, pobj, dobj, rel_gap, iter);
                sol.diagnostics = "approximate Farkas certificate found (b.y > 0, A*(y) <= 0)";
                return sol;
            }

            compute_scalings();
            build_schur();

            // Predictor: affine direction, Rc = -X.
            BlockVec rc = scale_vec(x_, -1.0);
            BlockVec dx_a, ds_a;
            std::vector<double> dy_a;
            newton_solve(rp, rd, rc, dx_a, dy_a, ds_a);

            const double ap_a = max_step(x_, dx_a);
            const double ad_a = max_step(s_, ds_a);
            double mu_aff = 0.0;
            {
                BlockVec xa = add_scaled(x_, dx_a, std::min(1.0, ap_a));
                BlockVec sa = add_scaled(s_, ds_a, std::min(1.0, ad_a));
                mu_aff = std::max(0.0, inner_vec(xa, sa)) / nu_;
            }
            double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
            sigma = std::min(1.0, std::max(1e-8, sigma));

            // Corrector: Rc = R Lyap^-1(sigma mu I - lambda^2 - H(dlamX dlamS)) R.
            rc = corrector_rhs(sigma * mu, dx_a, ds_a);
            BlockVec dx, ds;
            std::vector<double> dy;
            newton_solve(rp, rd, rc, dx, dy, ds);

            double ap = opts_.step_frac * max_step(x_, dx);
            double ad = opts_.step_frac * max_step(s_, ds);
            ap = std::min(1.0, ap);
            ad = std::min(1.0, ad);
            if (ap < 1e-13 || ad < 1e-13) {
                fill_solution(sol, SolveStatus::max_iter, pobj, dobj, rel_gap, iter);
                sol.diagnostics = "step length collapsed (alpha_p=" + std::to_string(ap) +
                                  ", alpha_d=" + std::to_string(ad) + ")";
                return sol;
            }

            x_ = add_scaled(x_, dx, ap);
            for (int k = 0; k < m_; ++k) y_[k] += ad * dy[k];
            s_ = add_scaled(s_, ds, ad);
        }

        const double pobj = inner_vec(p_.objective(), x_);
        const double dobj = dual_objective();
        const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
        fill_solution(sol, SolveStatus::max_iter, pobj, dobj, inner_vec(x_, s_) / denom,
                      opts_.max_iter);
        sol.diagnostics = "iteration limit reached";
        return sol;
    }

  private:
    // ---- state -----------------------------------------------------------
    const ConicProgram& p_;
    SolverOptions opts_;
    int nblk_, m_;
    double nu_ = 0.0;
    BlockVec x_, s_;
    std::vector<double> y_;
    std::vector<conic_detail::PsdScaling> psd_scale_;   // per block (psd only)
    std::vector<std::vector<double>> nn_w_, nn_lam_;    // per block (nonneg only)
    std::vector<double> schur_;                         // Cholesky factor of M
    // cached W A_k W per (constraint, term)
    std::vector<std::vector<BlockValue>> waw_;

    // ---- small helpers ----------------------------------------------------
    static double block_inner(const BlockValue& a, const BlockValue& b) {
        if (a.cone == ConeKind::psd) return hs_inner(a.m, b.m);
        double s = 0.0;
        for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
        return s;
    }
    static double inner_vec(const BlockVec& a, const BlockVec& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += block_inner(a[i], b[i]);
        return s;
    }
    static double block_max_abs(const BlockValue& b) {
        if (b.cone == ConeKind::psd) return b.m.max_abs();
        double m = 0.0;
        for (double x : b.v) m = std::max(m, std::abs(x));
        return m;
    }
    static BlockVec add_scaled(const BlockVec& a, const BlockVec& d, double alpha) {
        BlockVec out = a;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].cone == ConeKind::psd)
                out[i].m += d[i].m * complexd(alpha);
            else
                for (std::size_t j = 0; j < a[i].v.size(); ++j) out[i].v[j] += alpha * d[i].v[j];
        }
        return out;
    }
    static BlockVec scale_vec(const BlockVec& a, double alpha) {
        return add_scaled(zero_like(a), a, alpha);
    }
    static BlockVec zero_like(const BlockVec& a) {
        BlockVec out = a;
        for (auto& b : out) {
            if (b.cone == ConeKind::psd)
                b.m = ComplexMatrix(b.m.rows(), b.m.cols());
            else
                std::fill(b.v.begin(), b.v.end(), 0.0);
        }
        return out;
    }

    double max_abs_rhs() const {
        double m = 0.0;
        for (const auto& c : p_.constraints()) m = std::max(m, std::abs(c.rhs));
        return m;
    }
    double max_abs_obj() const {
        double m = 0.0;
        for (const auto& b : p_.objective()) m = std::max(m, block_max_abs(b));
        return m;
    }

    void init_point() {
        const double eta_p = 1.0 + max_abs_rhs();
        const double eta_d = 1.0 + max_abs_obj();
        x_.clear();
        s_.clear();
        for (const auto& spec : p_.blocks()) {
            if (spec.cone == ConeKind::psd) {
                x_.push_back(BlockValue::psd(ComplexMatrix::identity(spec.dim) * complexd(eta_p)));
                s_.push_back(BlockValue::psd(ComplexMatrix::identity(spec.dim) * complexd(eta_d)));
            } else {
                x_.push_back(BlockValue::nonneg(std::vector<double>(spec.dim, eta_p)));
                s_.push_back(BlockValue::nonneg(std::vector<double>(spec.dim, eta_d)));
            }
        }
        y_.assign(m_, 0.0);
    }

    std::vector<double> residual_primal() const {
        std::vector<double> r(m_);
        for (int k = 0; k < m_; ++k) {
            double ax = 0.0;
            for (const auto& t : p_.constraints()[k].terms)
                ax += block_inner(t.coeff, x_[t.block]);
            r[k] = p_.constraints()[k].rhs - ax;
        }
        return r;
    }

    BlockVec adjoint_times(const std::vector<double>& y) const {
        BlockVec out = zero_like(x_);
        for (int k = 0; k < m_; ++k) {
            if (y[k] == 0.0) continue;
            for (const auto& t : p_.constraints()[k].terms) {
                if (t.coeff.cone == ConeKind::psd)
                    out[t.block].m += t.coeff.m * complexd(y[k]);
                else
                    for (std::size_t i = 0; i < t.coeff.v.size(); ++i)
                        out[t.block].v[i] += y[k] * t.coeff.v[i];
            }
        }
        return out;
    }

    BlockVec residual_dual() const {
        BlockVec r = adjoint_times(y_);
        for (int b = 0; b < nblk_; ++b) {
            if (r[b].cone == ConeKind::psd)
                r[b].m = p_.objective()[b].m - r[b].m - s_[b].m;
            else
                for (std::size_t i = 0; i < r[b].v.size(); ++i)
                    r[b].v[i] = p_.objective()[b].v[i] - r[b].v[i] - s_[b].v[i];
        }
        return r;
    }

    double dual_objective() const {
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += y_[k] * p_.constraints()[k].rhs;
        return s;
    }

    // ---- scaling ----------------------------------------------------------
    void compute_scalings() {
        using namespace conic_detail;
        psd_scale_.assign(nblk_, {});
        nn_w_.assign(nblk_, {});
        nn_lam_.assign(nblk_, {});
        for (int b = 0; b < nblk_; ++b) {
            if (p_.blocks()[b].cone == ConeKind::psd) {
                const ComplexMatrix s_half = herm_power(s_[b].m, 0.5);
                const ComplexMatrix s_mhalf = herm_power(s_[b].m, -0.5);
                const ComplexMatrix t = hermitize(s_half * x_[b].m * s_half);
                const ComplexMatrix t_half = herm_power(t, 0.5);
                PsdScaling sc;
                sc.w = hermitize(s_mhalf * t_half * s_mhalf);
                sc.r = herm_power(sc.w, 0.5);
                sc.r_inv = herm_power(sc.w, -0.5);
                const HermitianOperator lam(hermitize(sc.r * s_[b].m * sc.r));
                const Spectrum ls = eig_hermitian(lam);
                sc.lam_q = ls.eigenvectors;
                sc.lam_val = ls.eigenvalues;
                for (double l : sc.lam_val)
                    if (l <= 0.0) throw numerical_error("conic scaling: lambda not positive");
                psd_scale_[b] = std::move(sc);
            } else {
                const int n = p_.blocks()[b].dim;
                std::vector<double> w(n), lam(n);
                for (int i = 0; i < n; ++i) {
                    if (x_[b].v[i] <= 0.0 || s_[b].v[i] <= 0.0)
                        throw numerical_error("conic scaling: iterate left the cone");
                    w[i] = std::sqrt(x_[b].v[i] / s_[b].v[i]);
                    lam[i] = std::sqrt(x_[b].v[i] * s_[b].v[i]);
                }
                nn_w_[b] = std::move(w);
                nn_lam_[b] = std::move(lam);
            }
        }
    }

    BlockValue w_conj(int block, const BlockValue& a) const {
        // W a W for psd, w^2 .* a for nonneg
        if (a.cone == ConeKind::psd) {
            const auto& w = psd_scale_[block].w;
            return BlockValue::psd(conic_detail::hermitize(w * a.m * w));
        }
        BlockValue out = a;
        for (std::size_t i = 0; i < a.v.size(); ++i)
            out.v[i] = nn_w_[block][i] * nn_w_[block][i] * a.v[i];
        return out;
    }

    void build_schur() {
        waw_.assign(m_, {});
        for (int k = 0; k < m_; ++k) {
            const auto& terms = p_.constraints()[k].terms;
            waw_[k].reserve(terms.size());
            for (const auto& t : terms) waw_[k].push_back(w_conj(t.block, t.coeff));
        }
        // block -> list of (constraint, term index)
        std::vector<std::vector<std::pair<int, int>>> touching(nblk_);
        for (int k = 0; k < m_; ++k)
            for (std::size_t ti = 0; ti < p_.constraints()[k].terms.size(); ++ti)
                touching[p_.constraints()[k].terms[ti].block].push_back(
                    {k, static_cast<int>(ti)});

        std::vector<double> mmat(static_cast<std::size_t>(m_) * m_, 0.0);
        for (int b = 0; b < nblk_; ++b) {
            for (std::size_t i = 0; i < touching[b].size(); ++i) {
                const auto [kj, tj] = touching[b][i];
                const BlockValue& aj = p_.constraints()[kj].terms[tj].coeff;
                for (std::size_t l = i; l < touching[b].size(); ++l) {
                    const auto [kk, tk] = touching[b][l];
                    const double v = block_inner(aj, waw_[kk][tk]);
                    mmat[static_cast<std::size_t>(kj) * m_ + kk] += v;
                    if (kj != kk) mmat[static_cast<std::size_t>(kk) * m_ + kj] += v;
                }
            }
        }

        double trace = 0.0;
        for (int i = 0; i < m_; ++i) trace += mmat[static_cast<std::size_t>(i) * m_ + i];
        double jitter = 0.0;
        for (int attempt = 0; attempt < 4; ++attempt) {
            schur_ = mmat;
            if (jitter > 0.0)
                for (int i = 0; i < m_; ++i) schur_[static_cast<std::size_t>(i) * m_ + i] += jitter;
            if (conic_detail::cholesky(schur_, m_)) return;
            jitter = (jitter == 0.0) ? 1e-14 * std::max(trace / m_, 1.0) : jitter * 100.0;
        }
        double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
            const double d = mmat[static_cast<std::size_t>(i) * m_ + i];
            dmax = std::max(dmax, d);
            dmin = std::min(dmin, d);
        }
        throw numerical_error("conic solve: Schur complement not SPD (diag condition estimate " +
                              std::to_string(dmax / std::max(dmin, 1e-300)) + ")");
    }

    // Solve the Newton system
    //   A(dX) = rp,  A*(dy) + dS = Rd,  dX + W dS W = Rc.
    void newton_solve(const std::vector<double>& rp, const BlockVec& rd, const BlockVec& rc,
                      BlockVec& dx, std::vector<double>& dy, BlockVec& ds) const {
        std::vector<double> rhs(m_);
        for (int k = 0; k < m_; ++k) {
            double v = rp[k];
            for (std::size_t ti = 0; ti < p_.constraints()[k].terms.size(); ++ti) {
                const auto& t = p_.constraints()[k].terms[ti];
                v -= block_inner(t.coeff, rc[t.block]);
                v += block_inner(waw_[k][ti], rd[t.block]);
            }
            rhs[k] = v;
        }
        dy = rhs;
        conic_detail::chol_solve(schur_, m_, dy);

        ds = adjoint_times(dy);
        for (int b = 0; b < nblk_; ++b) {
            if (ds[b].cone == ConeKind::psd)
                ds[b].m = rd[b].m - ds[b].m;
            else
                for (std::size_t i = 0; i < ds[b].v.size(); ++i)
                    ds[b].v[i] = rd[b].v[i] - ds[b].v[i];
        }
        dx = zero_like(x_);
        for (int b = 0; b < nblk_; ++b) {
            const BlockValue wdsw = w_conj(b, ds[b]);
            if (dx[b].cone == ConeKind::psd)
                dx[b].m = conic_detail::hermitize(rc[b].m - wdsw.m);
            else
                for (std::size_t i = 0; i < dx[b].v.size(); ++i)
                    dx[b].v[i] = rc[b].v[i] - wdsw.v[i];
        }
    }

    /// Rc for the combined step: R Lyap_lambda^-1(sig_mu I - lam^2 - H(dlamX dlamS)) R.
    BlockVec corrector_rhs(double sig_mu, const BlockVec& dx_a, const BlockVec& ds_a) const {
        using namespace conic_detail;
        BlockVec rc = zero_like(x_);
        for (int b = 0; b < nblk_; ++b) {
            if (rc[b].cone == ConeKind::psd) {
                const auto& sc = psd_scale_[b];
                const int n = p_.blocks()[b].dim;
                // H(dlamX dlamS) with dlamX = Rinv dX Rinv, dlamS = R dS R:
                // dlamX dlamS = Rinv (dX dS) R.
                const ComplexMatrix u = sc.r_inv * (dx_a[b].m * ds_a[b].m) * sc.r;
                const ComplexMatrix h = hermitize(u);
                // Rotate into the lambda eigenbasis, apply Lyapunov inverse.
                const ComplexMatrix ht = sc.lam_q.adjoint() * h * sc.lam_q;
                ComplexMatrix nt(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const double li = sc.lam_val[i], lj = sc.lam_val[j];
                        complexd rhs_ij = -ht(i, j);
                        if (i == j) rhs_ij += sig_mu - li * li;
                        nt(i, j) = 2.0 * rhs_ij / (li + lj);
                    }
                const ComplexMatrix nmat = sc.lam_q * nt * sc.lam_q.adjoint();
                rc[b].m = hermitize(sc.r * nmat * sc.r);
            } else {
                const int n = p_.blocks()[b].dim;
                for (int i = 0; i < n; ++i) {
                    const double w = nn_w_[b][i], lam = nn_lam_[b][i];
                    const double corr = dx_a[b].v[i] * ds_a[b].v[i];
                    rc[b].v[i] = w * (sig_mu - lam * lam - corr) / lam;
                }
            }
        }
        return rc;
    }

    double max_step(const BlockVec& z, const BlockVec& dz) const {
        double a = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < z.size(); ++b) {
            if (z[b].cone == ConeKind::psd)
                a = conic_detail::max_step_psd(z[b].m, dz[b].m, a);
            else
                a = conic_detail::max_step_nonneg(z[b].v, dz[b].v, a);
        }
        return a;
    }

    bool detect_infeasible() const {
        double ynorm = 0.0;
        for (double v : y_) ynorm = std::max(ynorm, std::abs(v));
        if (ynorm < 1e5) return false;
        std::vector<double> yhat(y_);
        for (double& v : yhat) v /= ynorm;
        double by = 0.0;
        for (int k = 0; k < m_; ++k) by += yhat[k] * p_.constraints()[k].rhs;
        if (by <= 1e-6) return false;
        const BlockVec z = adjoint_times(yhat);
        double zmax = -std::numeric_limits<double>::infinity();
        for (const auto& blk : z) {
            if (blk.cone == ConeKind::psd) {
                zmax = std::max(zmax, eig_hermitian(HermitianOperator(blk.m)).eigenvalues.front());
            } else {
                for (double v : blk.v) zmax = std::max(zmax, v);
            }
        }
        return zmax <= 1e-7 * by;
    }

    void fill_solution(ConicSolution& sol, SolveStatus st, double pobj, double dobj, double gap,
                       int iter) const {
        sol.status = st;
        sol.primal = x_;
        sol.dual_y = y_;
        sol.dual_slack = s_;
        sol.primal_obj = pobj;
        sol.dual_obj = dobj;
        sol.gap = gap;
        sol.iterations = iter;
    }

    void trace(int iter, double pobj, double dobj, double rp, double rd, double mu) const {
        std::ostringstream os;
        os << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " rp " << rp << " rd "
           << rd << " mu " << mu << "\n";
        std::fputs(os.str().c_str(), stderr);
    }
};

inline ConicSolution solve(const ConicProgram& p, SolverOptions opts = {}) {
    return ConicSolver(p, opts).solve();
}

/// Dual objective of an optimal solution; throws on any other status.
inline double dual_certificate(const ConicSolution& sol) {
    if (sol.status != SolveStatus::optimal)
        throw std::invalid_argument("dual_certificate: solution status is " +
                                    to_string(sol.status));
    return sol.dual_obj;
}

}  // namespace tcorr
