/*
 * Dense complex linear algebra for small Hilbert spaces (dim <= 81).
 *
 * ComplexMatrix     : row-major dense complex matrix with basic arithmetic
 * HermitianOperator : Hermiticity-enforced square matrix (states, observables)
 * Spectrum          : eigendecomposition of a HermitianOperator
 *
 * The eigensolver is a cyclic complex Jacobi iteration: deterministic and
 * accurate to near machine precision at these sizes. Everything here is
 * immutable after construction and safe to share across threads.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tcorr {

using complexd = std::complex<double>;

/// Thrown when an iterative numerical routine fails to meet its tolerance.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a request exceeds a configured size cap.
struct capacity_error : std::length_error {
    explicit capacity_error(const std::string& what) : std::length_error(what) {}
};

class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("ComplexMatrix: nonpositive dims");
    }
    ComplexMatrix(int rows, int cols, std::vector<complexd> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("ComplexMatrix: nonpositive dims");
        if (a_.size() != static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("ComplexMatrix: entry count mismatch");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static ComplexMatrix zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    complexd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const complexd& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }
    const std::vector<complexd>& data() const { return a_; }

    bool finite() const {
        for (const auto& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }
    ComplexMatrix transpose() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    complexd trace() const {
        complexd t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    ComplexMatrix& operator*=(complexd c) {
        for (auto& z : a_) z *= c;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complexd c) { return a *= c; }
    friend ComplexMatrix operator*(complexd c, ComplexMatrix a) { return a *= c; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                const complexd aik = a(i, k);
                if (aik == complexd(0.0)) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

  private:
    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix sum: shape mismatch");
    }

    int rows_, cols_;
    std::vector<complexd> a_;
};

/// Hilbert-Schmidt inner product tr(A^dag B); real part (exact for Hermitian pairs).
inline double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hs_inner: shape mismatch");
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const complexd x = a(i, j), y = b(i, j);
            s += x.real() * y.real() + x.imag() * y.imag();
        }
    return s;
}

/*
 * Square matrix constrained to be Hermitian. Near-Hermitian input (asymmetry
 * up to 1e-8, e.g. accumulated float noise from channel application) is
 * symmetrized to (M + M^dag)/2; anything worse is rejected.
 */
class HermitianOperator {
  public:
    static constexpr double kAsymmetryReject = 1e-8;

    explicit HermitianOperator(const ComplexMatrix& m) : dim_(m.rows()), mat_(m.rows(), m.cols()) {
        if (m.rows() != m.cols()) throw std::invalid_argument("HermitianOperator: not square");
        if (!m.finite()) throw std::invalid_argument("HermitianOperator: non-finite entries");
        double asym = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                const complexd s = 0.5 * (m(i, j) + std::conj(m(j, i)));
                asym = std::max(asym, std::abs(m(i, j) - s));
                mat_(i, j) = s;
            }
        if (asym > kAsymmetryReject)
            throw std::invalid_argument("HermitianOperator: asymmetry " + std::to_string(asym) +
                                        " exceeds 1e-8");
    }

    static HermitianOperator identity(int n) { return HermitianOperator(ComplexMatrix::identity(n)); }
    static HermitianOperator zero(int n) { return HermitianOperator(ComplexMatrix(n, n)); }

    int dim() const { return dim_; }
    const ComplexMatrix& mat() const { return mat_; }
    const complexd& operator()(int i, int j) const { return mat_(i, j); }
    double trace() const { return mat_.trace().real(); }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
        return HermitianOperator(a.mat_ + b.mat_);
    }
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
        return HermitianOperator(a.mat_ - b.mat_);
    }
    friend HermitianOperator operator*(const HermitianOperator& a, double c) {
        return HermitianOperator(a.mat_ * complexd(c));
    }
    friend HermitianOperator operator*(double c, const HermitianOperator& a) { return a * c; }

  private:
    int dim_;
    ComplexMatrix mat_;
};

struct Spectrum {
    std::vector<double> eigenvalues;  // sorted descending
    ComplexMatrix eigenvectors;       // unitary; column k pairs with eigenvalues[k]
};

namespace detail {

// One cyclic Jacobi pass infrastructure: zero entry (p,q) by a complex rotation.
// Rotation J: J_pp = c, J_pq = -s e^{i phi}, J_qp = s e^{-i phi}, J_qq = c,
// where A_pq = |A_pq| e^{i phi}. A <- J^dag A J keeps A Hermitian.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, int p, int q) {
    const complexd apq = a(p, q);
    const double abs_apq = std::abs(apq);
    if (abs_apq == 0.0) return;
    const complexd phase = apq / abs_apq;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * abs_apq);
    const double t = (tau >= 0.0 ? -1.0 : 1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.rows();
    // Column update A <- A J, then row update A <- J^dag A.
    for (int k = 0; k < n; ++k) {
        const complexd akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp + s * std::conj(phase) * akq;
        a(k, q) = -s * phase * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
        const complexd apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk + s * phase * aqk;
        a(q, k) = -s * std::conj(phase) * apk + c * aqk;
    }
    // Exact values on the rotated 2x2 block.
    a(p, p) = app + t * abs_apq;
    a(q, q) = aqq - t * abs_apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (int k = 0; k < n; ++k) {
        const complexd vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp + s * std::conj(phase) * vkq;
        v(k, q) = -s * phase * vkp + c * vkq;
    }
}

inline double offdiag_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Full eigendecomposition of a Hermitian operator (cyclic Jacobi).
inline Spectrum eig_hermitian(const HermitianOperator& op) {
    const int n = op.dim();
    ComplexMatrix a = op.mat();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const double tol = 1e-15 * scale;
    const long rotation_budget = 100L * n * n;
    long rotations = 0;

    while (detail::offdiag_norm(a) > tol) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > tol / (n * n)) {
                    detail::jacobi_rotate(a, v, p, q);
                    ++rotations;
                }
        if (rotations > rotation_budget)
            throw numerical_error("eig_hermitian: no convergence after " +
                                  std::to_string(rotations) + " rotations, off-diagonal residual " +
                                  std::to_string(detail::offdiag_norm(a)));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    Spectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors = ComplexMatrix(n, n);
    for (int k = 0; k < n; ++k) {
        spec.eigenvalues[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) spec.eigenvectors(i, k) = v(i, order[k]);
    }
    return spec;
}

/// Sum of absolute eigenvalues.
inline double trace_norm(const HermitianOperator& op) {
    const Spectrum s = eig_hermitian(op);
    double t = 0.0;
    for (double e : s.eigenvalues) t += std::abs(e);
    return t;
}

/// Nuclear norm (sum of singular values) of a general matrix, via eig of M^dag M.
inline double nuclear_norm(const ComplexMatrix& m) {
    const HermitianOperator gram(m.adjoint() * m);
    const Spectrum s = eig_hermitian(gram);
    double t = 0.0;
    for (double e : s.eigenvalues) t += std::sqrt(std::max(0.0, e));
    return t;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, int dim_cap = 81) {
    const long rr = static_cast<long>(a.rows()) * b.rows();
    const long cc = static_cast<long>(a.cols()) * b.cols();
    if (rr > dim_cap || cc > dim_cap)
        throw capacity_error("kron: result dimension " + std::to_string(std::max(rr, cc)) +
                             " exceeds cap " + std::to_string(dim_cap));
    ComplexMatrix m(static_cast<int>(rr), static_cast<int>(cc));
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const complexd aij = a(i, j);
            if (aij == complexd(0.0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return m;
}

inline HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b,
                              int dim_cap = 81) {
    return HermitianOperator(kron(a.mat(), b.mat(), dim_cap));
}

enum class Subsystem { A, B };

inline ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
        throw std::invalid_argument("partial_trace: dims mismatch");
    if (keep == Subsystem::A) {
        ComplexMatrix r(dim_a, dim_a);
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_a; ++j)
                for (int k = 0; k < dim_b; ++k) r(i, j) += m(i * dim_b + k, j * dim_b + k);
        return r;
    }
    ComplexMatrix r(dim_b, dim_b);
    for (int k = 0; k < dim_b; ++k)
        for (int l = 0; l < dim_b; ++l)
            for (int i = 0; i < dim_a; ++i) r(k, l) += m(i * dim_b + k, i * dim_b + l);
    return r;
}

inline HermitianOperator partial_trace(const HermitianOperator& op, int dim_a, int dim_b,
                                       Subsystem keep) {
    return HermitianOperator(partial_trace(op.mat(), dim_a, dim_b, keep));
}

inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int dim_a, int dim_b,
                                       Subsystem side) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
        throw std::invalid_argument("partial_transpose: dims mismatch");
    ComplexMatrix r(m.rows(), m.cols());
    for (int i = 0; i < dim_a; ++i)
        for (int k = 0; k < dim_b; ++k)
            for (int j = 0; j < dim_a; ++j)
                for (int l = 0; l < dim_b; ++l) {
                    if (side == Subsystem::B)
                        r(i * dim_b + l, j * dim_b + k) = m(i * dim_b + k, j * dim_b + l);
                    else
                        r(j * dim_b + k, i * dim_b + l) = m(i * dim_b + k, j * dim_b + l);
                }
    return r;
}

inline HermitianOperator partial_transpose(const HermitianOperator& op, int dim_a, int dim_b,
                                           Subsystem side) {
    return HermitianOperator(partial_transpose(op.mat(), dim_a, dim_b, side));
}

/*
 * Eigenvalues clustered to tolerance, each with the projector onto its full
 * eigenspace. Degenerate spectra (the qutrit point operators have an exactly
 * twofold +1 eigenvalue) must collapse to one projector per cluster; the
 * reported eigenvalue is the cluster mean.
 */
inline std::vector<std::pair<double, HermitianOperator>> eigprojectors(const HermitianOperator& op,
                                                                       double tol = 1e-9) {
    if (!(tol > 0.0)) throw std::invalid_argument("eigprojectors: tol must be positive");
    const Spectrum s = eig_hermitian(op);
    const int n = op.dim();
    std::vector<std::pair<double, HermitianOperator>> out;
    int k = 0;
    while (k < n) {
        int k2 = k + 1;
        while (k2 < n && std::abs(s.eigenvalues[k2] - s.eigenvalues[k2 - 1]) <= tol) ++k2;
        ComplexMatrix proj(n, n);
        double mean = 0.0;
        for (int c = k; c < k2; ++c) {
            mean += s.eigenvalues[c];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    proj(i, j) += s.eigenvectors(i, c) * std::conj(s.eigenvectors(j, c));
        }
        mean /= (k2 - k);
        out.emplace_back(mean, HermitianOperator(proj));
        k = k2;
    }
    return out;
}

/// f(H) = V f(diag) V^dag for a real scalar function f.
template <typename F>
HermitianOperator hermitian_function(const HermitianOperator& op, F&& f) {
    const Spectrum s = eig_hermitian(op);
    const int n = op.dim();
    ComplexMatrix m(n, n);
    for (int k = 0; k < n; ++k) {
        const double fe = f(s.eigenvalues[k]);
        if (fe == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) += fe * s.eigenvectors(i, k) * std::conj(s.eigenvectors(j, k));
    }
    return HermitianOperator(m);
}

inline double min_eigenvalue(const HermitianOperator& op) {
    const Spectrum s = eig_hermitian(op);
    return s.eigenvalues.back();
}

}  // namespace tcorr
