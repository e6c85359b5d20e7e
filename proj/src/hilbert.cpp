#include "tsvf/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsvf {

namespace {

void require_finite(const std::vector<Complex>& xs, const char* what) {
    for (const auto& x : xs) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) {
        throw std::invalid_argument("StateVector: dimension must be positive");
    }
    require_finite(amps_, "StateVector");
    double n2 = 0.0;
    for (const auto& a : amps_) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw std::invalid_argument("StateVector: not normalized (norm^2 = " + std::to_string(n2) + ")");
    }
}

StateVector StateVector::normalized(std::vector<Complex> amps) {
    if (amps.empty()) {
        throw std::invalid_argument("StateVector: dimension must be positive");
    }
    require_finite(amps, "StateVector");
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (n2 <= 0.0) {
        throw std::invalid_argument("StateVector: cannot normalize the zero vector");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return StateVector(std::move(amps));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("StateVector::basis: index out of range");
    }
    std::vector<Complex> amps(dim, Complex(0.0, 0.0));
    amps[index] = Complex(1.0, 0.0);
    return StateVector(std::move(amps));
}

Operator::Operator(std::size_t dim, std::vector<Complex> entries) : dim_(dim), m_(std::move(entries)) {
    if (dim_ == 0) {
        throw std::invalid_argument("Operator: dimension must be positive");
    }
    if (m_.size() != dim_ * dim_) {
        throw std::invalid_argument("Operator: entry count does not match dim^2");
    }
    require_finite(m_, "Operator");
}

Operator Operator::identity(std::size_t dim) {
    std::vector<Complex> m(dim * dim, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = Complex(1.0, 0.0);
    return Operator(dim, std::move(m));
}

Operator Operator::zero(std::size_t dim) {
    return Operator(dim, std::vector<Complex>(dim * dim, Complex(0.0, 0.0)));
}

Operator Operator::from_rows(const std::vector<std::vector<Complex>>& rows) {
    const std::size_t n = rows.size();
    std::vector<Complex> m;
    m.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw std::invalid_argument("Operator::from_rows: matrix must be square");
        }
        m.insert(m.end(), row.begin(), row.end());
    }
    return Operator(n, std::move(m));
}

Operator Operator::adjoint() const {
    std::vector<Complex> m(dim_ * dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            m[j * dim_ + i] = std::conj(at(i, j));
        }
    }
    return Operator(dim_, std::move(m));
}

Operator Operator::operator+(const Operator& o) const {
    require_same_dim(dim_, o.dim_, "Operator+");
    std::vector<Complex> m(m_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += o.m_[i];
    return Operator(dim_, std::move(m));
}

Operator Operator::operator-(const Operator& o) const {
    require_same_dim(dim_, o.dim_, "Operator-");
    std::vector<Complex> m(m_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] -= o.m_[i];
    return Operator(dim_, std::move(m));
}

Operator Operator::operator*(const Operator& o) const {
    require_same_dim(dim_, o.dim_, "Operator*");
    std::vector<Complex> m(dim_ * dim_, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const Complex aik = at(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < dim_; ++j) {
                m[i * dim_ + j] += aik * o.at(k, j);
            }
        }
    }
    return Operator(dim_, std::move(m));
}

Operator operator*(Complex scalar, const Operator& o) {
    std::vector<Complex> m(o.m_);
    for (auto& x : m) x *= scalar;
    return Operator(o.dim_, std::move(m));
}

double Operator::max_abs() const {
    double mx = 0.0;
    for (const auto& x : m_) mx = std::max(mx, std::abs(x));
    return mx;
}

bool Operator::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
        }
    }
    return true;
}

bool Operator::is_unitary(double tol) const {
    return max_abs_diff(adjoint() * (*this), identity(dim_)) <= tol;
}

bool Operator::commutes_with(const Operator& o, double tol) const {
    return max_abs_diff((*this) * o, o * (*this)) <= tol;
}

double max_abs_diff(const Operator& a, const Operator& b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double mx = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        mx = std::max(mx, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return mx;
}

Complex inner(const std::vector<Complex>& bra, const std::vector<Complex>& ket) {
    require_same_dim(bra.size(), ket.size(), "inner");
    Complex acc(0.0, 0.0);
    for (std::size_t k = 0; k < bra.size(); ++k) acc += std::conj(bra[k]) * ket[k];
    return acc;
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    return inner(bra.amplitudes(), ket.amplitudes());
}

Complex inner(const StateVector& bra, const std::vector<Complex>& ket) {
    return inner(bra.amplitudes(), ket);
}

double norm(const std::vector<Complex>& amps) {
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    return std::sqrt(n2);
}

std::vector<Complex> apply(const Operator& op, const std::vector<Complex>& v) {
    require_same_dim(op.dim(), v.size(), "apply");
    std::vector<Complex> out(op.dim(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < op.dim(); ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < op.dim(); ++j) acc += op.at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

std::vector<Complex> apply(const Operator& op, const StateVector& v) {
    return apply(op, v.amplitudes());
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const std::size_t da = a.dim(), db = b.dim();
    std::vector<Complex> amps(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t k = 0; k < db; ++k) {
            amps[i * db + k] = a[i] * b[k];
        }
    }
    // Product of unit vectors is unit up to roundoff; rescale to keep the
    // invariant exact under repeated tensoring.
    return StateVector::normalized(std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
    const std::size_t da = a.dim(), db = b.dim(), d = da * db;
    std::vector<Complex> m(d * d, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            const Complex aij = a.at(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    m[(i * db + k) * d + (j * db + l)] = aij * b.at(k, l);
                }
            }
        }
    }
    return Operator(d, std::move(m));
}

namespace {

// One cyclic sweep of complex Jacobi rotations. Each rotation is a real
// 2x2 Jacobi rotation composed with the phase that makes A[p][q] real.
// Returns the largest off-diagonal magnitude seen before rotating.
double jacobi_sweep(std::vector<Complex>& a, std::vector<Complex>& v, std::size_t n, double skip_below) {
    double max_off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const Complex apq = a[p * n + q];
            const double ab = std::abs(apq);
            max_off = std::max(max_off, ab);
            if (ab <= skip_below) continue;

            const Complex u = apq / ab; // phase so that conj(u)*apq is real
            const double app = a[p * n + p].real();
            const double aqq = a[q * n + q].real();
            const double tau = (aqq - app) / (2.0 * ab);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;

            // Columns of the combined rotation J:
            //   J e_p = c e_p - s conj(u) e_q,   J e_q = s e_p + c conj(u) e_q
            const Complex jqp = -s * std::conj(u);
            const Complex jqq = c * std::conj(u);

            // A <- J^dagger A J, applied as column then row updates.
            for (std::size_t r = 0; r < n; ++r) {
                const Complex arp = a[r * n + p], arq = a[r * n + q];
                a[r * n + p] = c * arp + jqp * arq;
                a[r * n + q] = s * arp + jqq * arq;
            }
            for (std::size_t col = 0; col < n; ++col) {
                const Complex apc = a[p * n + col], aqc = a[q * n + col];
                a[p * n + col] = c * apc + std::conj(jqp) * aqc;
                a[q * n + col] = s * apc + std::conj(jqq) * aqc;
            }
            // Keep the eliminated pair and the diagonal exactly consistent.
            a[p * n + q] = Complex(0.0, 0.0);
            a[q * n + p] = Complex(0.0, 0.0);
            a[p * n + p] = Complex(a[p * n + p].real(), 0.0);
            a[q * n + q] = Complex(a[q * n + q].real(), 0.0);

            // Accumulate eigenvectors: V <- V J (column update).
            for (std::size_t r = 0; r < n; ++r) {
                const Complex vrp = v[r * n + p], vrq = v[r * n + q];
                v[r * n + p] = c * vrp + jqp * vrq;
                v[r * n + q] = s * vrp + jqq * vrq;
            }
        }
    }
    return max_off;
}

} // namespace

SpectralDecomposition spectral(const Operator& op, double merge_tol) {
    if (!op.is_hermitian(1e-9)) {
        throw std::invalid_argument("spectral: operator is not Hermitian within 1e-9");
    }
    const std::size_t n = op.dim();

    // Work on the Hermitian average so the iteration sees an exactly
    // Hermitian matrix even when the input is only Hermitian to tolerance.
    std::vector<Complex> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = 0.5 * (op.at(i, j) + std::conj(op.at(j, i)));
        }
    }
    std::vector<Complex> v(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = Complex(1.0, 0.0);

    const double scale = std::max(1.0, op.max_abs());
    const double target = 1e-14 * scale;
    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        const double max_off = jacobi_sweep(a, v, n, target * 1e-2);
        if (max_off <= target) break;
    }
    if (sweep == max_sweeps) {
        throw std::runtime_error("spectral: Jacobi iteration did not converge");
    }

    // Sort eigenpairs ascending.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a[i * n + i].real() < a[j * n + j].real();
    });

    // Group degenerate eigenvalues and build one projector per group.
    SpectralDecomposition out;
    std::size_t k = 0;
    while (k < n) {
        std::size_t k_end = k + 1;
        while (k_end < n &&
               a[order[k_end] * n + order[k_end]].real() - a[order[k_end - 1] * n + order[k_end - 1]].real() <=
                   merge_tol) {
            ++k_end;
        }
        double lambda = 0.0;
        std::vector<Complex> proj(n * n, Complex(0.0, 0.0));
        for (std::size_t g = k; g < k_end; ++g) {
            const std::size_t col = order[g];
            lambda += a[col * n + col].real();
            for (std::size_t i = 0; i < n; ++i) {
                const Complex vi = v[i * n + col];
                for (std::size_t j = 0; j < n; ++j) {
                    proj[i * n + j] += vi * std::conj(v[j * n + col]);
                }
            }
        }
        lambda /= static_cast<double>(k_end - k);
        out.eigenvalues.push_back(lambda);
        out.projectors.emplace_back(n, std::move(proj));
        k = k_end;
    }
    return out;
}

} // namespace tsvf
