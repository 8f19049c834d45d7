// Copyright 2026 The qratchet Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Small dense complex matrices (dimension <= 8): Hermitian eigensolver,
 * matrix functions, partial trace over a 2x2 bipartition and von Neumann
 * entropy. Every physics routine in the library is built on these.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qratchet {

using cplx = std::complex<double>;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxDim = 8;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kNegativeEigTol = 1e-12;
inline constexpr double kEntropyZero = 1e-14;
inline constexpr double kDegenerateGap = 1e-9;

/// Square complex matrix stored row-major in fixed storage.
class Operator {
  public:
    Operator() = default;

    explicit Operator(std::size_t dim) : dim_(dim) {
        if (dim == 0 || dim > kMaxDim) {
            throw DimensionError("operator dimension " + std::to_string(dim) +
                                 " outside [1, 8]");
        }
    }

    /// Row-major initializer; the size must be a perfect square.
    Operator(std::initializer_list<cplx> entries) {
        const auto n = static_cast<std::size_t>(
            std::lround(std::sqrt(static_cast<double>(entries.size()))));
        if (n * n != entries.size() || n == 0 || n > kMaxDim) {
            throw DimensionError("initializer is not a square matrix of "
                                 "dimension <= 8");
        }
        dim_ = n;
        std::copy(entries.begin(), entries.end(), data_.begin());
    }

    static Operator identity(std::size_t dim) {
        Operator m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static Operator diagonal(std::span<const double> d) {
        Operator m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }
    static Operator diagonal(std::initializer_list<double> d) {
        return diagonal(std::span<const double>(d.begin(), d.size()));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    cplx &operator()(std::size_t r, std::size_t c) noexcept {
        return data_[r * dim_ + c];
    }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * dim_ + c];
    }

    [[nodiscard]] cplx trace() const noexcept {
        cplx t{};
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    [[nodiscard]] Operator adjoint() const {
        Operator r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r(i, j) = std::conj((*this)(j, i));
            }
        }
        return r;
    }

    [[nodiscard]] bool is_hermitian(double tol = kHermitianTol) const noexcept {
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = i; j < dim_; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Largest absolute entry.
    [[nodiscard]] double max_abs() const noexcept {
        double m = 0.0;
        for (std::size_t k = 0; k < dim_ * dim_; ++k) {
            m = std::max(m, std::abs(data_[k]));
        }
        return m;
    }

    [[nodiscard]] double frobenius() const noexcept {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_ * dim_; ++k) {
            s += std::norm(data_[k]);
        }
        return std::sqrt(s);
    }

    Operator &operator+=(const Operator &o) {
        require_same_dim(o);
        for (std::size_t k = 0; k < dim_ * dim_; ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }
    Operator &operator-=(const Operator &o) {
        require_same_dim(o);
        for (std::size_t k = 0; k < dim_ * dim_; ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }
    Operator &operator*=(cplx s) noexcept {
        for (std::size_t k = 0; k < dim_ * dim_; ++k) {
            data_[k] *= s;
        }
        return *this;
    }

    friend Operator operator+(Operator a, const Operator &b) { return a += b; }
    friend Operator operator-(Operator a, const Operator &b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }

    friend Operator operator*(const Operator &a, const Operator &b) {
        a.require_same_dim(b);
        Operator r(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) {
                    continue;
                }
                for (std::size_t j = 0; j < a.dim_; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }

    /// Matrix-vector product.
    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> v) const {
        if (v.size() != dim_) {
            throw DimensionError("vector length does not match operator");
        }
        std::vector<cplx> r(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                r[i] += (*this)(i, j) * v[j];
            }
        }
        return r;
    }

    friend bool operator==(const Operator &a, const Operator &b) noexcept {
        if (a.dim_ != b.dim_) {
            return false;
        }
        return std::equal(a.data_.begin(), a.data_.begin() + a.dim_ * a.dim_,
                          b.data_.begin());
    }

  private:
    void require_same_dim(const Operator &o) const {
        if (o.dim_ != dim_) {
            throw DimensionError("operator dimension mismatch");
        }
    }

    std::size_t dim_ = 0;
    std::array<cplx, kMaxDim * kMaxDim> data_{};
};

/// Max-abs entrywise distance between equal-dimension operators.
inline double max_abs_diff(const Operator &a, const Operator &b) {
    return (a - b).max_abs();
}

/// Trace of a product without forming it.
inline cplx trace_product(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("operator dimension mismatch");
    }
    cplx t{};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t k = 0; k < a.dim(); ++k) {
            t += a(i, k) * b(k, i);
        }
    }
    return t;
}

/// |v><v| for a column vector v.
inline Operator outer(std::span<const cplx> v) {
    Operator r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            r(i, j) = v[i] * std::conj(v[j]);
        }
    }
    return r;
}

inline Operator kron(const Operator &a, const Operator &b) {
    const std::size_t n = a.dim() * b.dim();
    if (n > kMaxDim) {
        throw DimensionError("kron result dimension " + std::to_string(n) +
                             " exceeds 8");
    }
    Operator r(n);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            for (std::size_t k = 0; k < b.dim(); ++k) {
                for (std::size_t l = 0; l < b.dim(); ++l) {
                    r(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

enum class Subsystem { A, B };

/// Reduced 2x2 operator of a 2x2 bipartite operator; `keep` is the factor
/// that survives (A is the left tensor factor).
inline Operator partial_trace(const Operator &m, Subsystem keep) {
    if (m.dim() != 4) {
        throw DimensionError("partial_trace expects a 4x4 operator, got " +
                             std::to_string(m.dim()));
    }
    Operator r(2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            cplx s{};
            for (std::size_t k = 0; k < 2; ++k) {
                s += keep == Subsystem::A ? m(i * 2 + k, j * 2 + k)
                                          : m(k * 2 + i, k * 2 + j);
            }
            r(i, j) = s;
        }
    }
    return r;
}

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
struct EigenSystem {
    std::vector<double> eigenvalues;
    Operator eigenvectors;

    [[nodiscard]] std::vector<cplx> vector(std::size_t k) const {
        std::vector<cplx> v(eigenvectors.dim());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = eigenvectors(i, k);
        }
        return v;
    }

    /// V diag(values) V^dagger.
    [[nodiscard]] Operator compose(std::span<const double> values) const {
        const std::size_t n = eigenvectors.dim();
        Operator r(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cplx s{};
                for (std::size_t k = 0; k < n; ++k) {
                    s += eigenvectors(i, k) * values[k] *
                         std::conj(eigenvectors(j, k));
                }
                r(i, j) = s;
            }
        }
        return r;
    }
};

namespace detail {

inline double off_diagonal_norm(const Operator &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// First component whose magnitude clears the noise floor.
inline std::size_t leading_index(const Operator &v, std::size_t col) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (std::abs(v(i, col)) > 1e-12) {
            return i;
        }
    }
    return 0;
}

} // namespace detail

/**
 * Cyclic Jacobi eigensolver for Hermitian matrices.
 *
 * Eigenvalues come back ascending. Inside a cluster of eigenvalues closer
 * than 1e-9, eigenvectors are ordered by descending magnitude of their
 * first nonzero component. Every eigenvector is phase-fixed so that
 * component is real and positive.
 */
inline EigenSystem eig_hermitian(const Operator &m) {
    if (!m.is_hermitian()) {
        throw ContractError("eig_hermitian: operator is not Hermitian");
    }
    const std::size_t n = m.dim();
    Operator a = m;
    Operator v = Operator::identity(n);
    const double tol = 1e-13 * std::max(1.0, m.frobenius());

    constexpr int kMaxSweeps = 100;
    int sweep = 0;
    for (; sweep < kMaxSweeps && detail::off_diagonal_norm(a) > tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double ga = std::abs(g);
                if (ga == 0.0) {
                    continue;
                }
                const cplx e = g / ga;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * ga);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s e], [-s conj(e), c]] on the (p, q) plane.
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(e) * akq;
                    a(k, q) = s * e * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s * e * aqk;
                    a(q, k) = s * std::conj(e) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(e) * vkq;
                    v(k, q) = s * e * vkp + c * vkq;
                }
            }
        }
    }
    if (detail::off_diagonal_norm(a) > tol) {
        throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");
    }

    // Phase-fix every column on its leading component.
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lead = detail::leading_index(v, k);
        const cplx z = v(lead, k);
        const cplx phase = std::conj(z) / std::abs(z);
        for (std::size_t i = 0; i < n; ++i) {
            v(i, k) *= phase;
        }
        v(lead, k) = std::abs(z);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    // Reorder inside degenerate clusters.
    const auto lead_key = [&](std::size_t col) {
        const std::size_t lead = detail::leading_index(v, col);
        return std::pair{lead, -std::abs(v(lead, col))};
    };
    for (std::size_t start = 0; start < n;) {
        std::size_t stop = start + 1;
        while (stop < n && a(order[stop], order[stop]).real() -
                                   a(order[stop - 1], order[stop - 1]).real() <
                               kDegenerateGap) {
            ++stop;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop),
                         [&](std::size_t x, std::size_t y) {
                             return lead_key(x) < lead_key(y);
                         });
        start = stop;
    }

    EigenSystem es{std::vector<double>(n), Operator(n)};
    for (std::size_t k = 0; k < n; ++k) {
        es.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            es.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return es;
}

/// x ln x with the 0 ln 0 = 0 convention.
inline double xlogx(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return x * std::log(x);
}

/// f applied spectrally: V f(Lambda) V^dagger.
template <typename F> Operator mat_func(const Operator &m, F &&f) {
    const EigenSystem es = eig_hermitian(m);
    std::vector<double> fv(es.eigenvalues.size());
    for (std::size_t k = 0; k < fv.size(); ++k) {
        fv[k] = f(es.eigenvalues[k]);
        if (!std::isfinite(fv[k])) {
            throw DomainError("mat_func: function undefined at eigenvalue " +
                              std::to_string(es.eigenvalues[k]));
        }
    }
    return es.compose(fv);
}

/**
 * Hermitian, unit-trace, positive semidefinite operator.
 *
 * The spectrum is computed once at construction. Eigenvalues in
 * [-1e-12, 0) are clamped to zero and the spectrum renormalized; anything
 * more negative is rejected.
 */
class DensityMatrix {
  public:
    explicit DensityMatrix(Operator op) : op_(std::move(op)) {
        if (!op_.is_hermitian()) {
            throw ContractError("density matrix is not Hermitian");
        }
        const cplx tr = op_.trace();
        if (std::abs(tr - 1.0) > kTraceTol) {
            throw ContractError("density matrix trace " +
                                std::to_string(tr.real()) + " differs from 1");
        }
        eig_ = eig_hermitian(op_);
        spectrum_ = eig_.eigenvalues;
        for (double &p : spectrum_) {
            if (p < -kNegativeEigTol) {
                throw ContractError("density matrix eigenvalue " +
                                    std::to_string(p) + " below -1e-12");
            }
            p = std::max(p, 0.0);
        }
        const double total =
            std::accumulate(spectrum_.begin(), spectrum_.end(), 0.0);
        for (double &p : spectrum_) {
            p /= total;
        }
    }

    /// Normalizes a positive semidefinite Hermitian operator by its trace.
    static DensityMatrix from_unnormalized(const Operator &op) {
        const double tr = op.trace().real();
        if (!(tr > 0.0)) {
            throw ContractError("cannot normalize operator with trace <= 0");
        }
        return DensityMatrix(op * cplx(1.0 / tr));
    }

    static DensityMatrix pure(std::span<const cplx> psi) {
        double n = 0.0;
        for (const cplx &z : psi) {
            n += std::norm(z);
        }
        Operator r = outer(psi);
        return DensityMatrix(r * cplx(1.0 / n));
    }

    [[nodiscard]] const Operator &op() const noexcept { return op_; }
    [[nodiscard]] std::size_t dim() const noexcept { return op_.dim(); }
    /// Clamped, renormalized eigenvalues in ascending order.
    [[nodiscard]] const std::vector<double> &spectrum() const noexcept {
        return spectrum_;
    }
    [[nodiscard]] const EigenSystem &eigensystem() const noexcept {
        return eig_;
    }

  private:
    Operator op_;
    EigenSystem eig_;
    std::vector<double> spectrum_;
};

/// von Neumann entropy in nats.
inline double vn_entropy(const DensityMatrix &rho) {
    double s = 0.0;
    for (double p : rho.spectrum()) {
        if (p >= kEntropyZero) {
            s -= p * std::log(p);
        }
    }
    return std::max(s, 0.0);
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, Subsystem keep) {
    return DensityMatrix(partial_trace(rho.op(), keep));
}

// Single-qubit operators. Pauli matrices are textbook; spin operators act on
// an atom in (g, e) order, so S^z = diag(-1/2, 1/2) and S^+ = |e><g|.

inline Operator pauli_x() { return Operator{0.0, 1.0, 1.0, 0.0}; }
inline Operator pauli_y() {
    return Operator{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
}
inline Operator pauli_z() { return Operator{1.0, 0.0, 0.0, -1.0}; }
inline Operator spin_z() { return Operator::diagonal({-0.5, 0.5}); }
inline Operator spin_plus() { return Operator{0.0, 0.0, 1.0, 0.0}; }
inline Operator spin_minus() { return Operator{0.0, 1.0, 0.0, 0.0}; }

} // namespace qratchet
