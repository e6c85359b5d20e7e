#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tsvf {

using Complex = std::complex<double>;

/// Normalized complex amplitude vector in a finite-dimensional Hilbert space.
///
/// Basis convention is the computational basis; tensor products use row-major
/// indexing, i.e. for |a> (dim da) and |b> (dim db) the product component
/// (i, k) lives at index i*db + k.
class StateVector {
  public:
    /// Constructs from amplitudes that are already normalized.
    /// Throws std::invalid_argument if entries are not finite or the squared
    /// norm deviates from 1 by more than 1e-9.
    explicit StateVector(std::vector<Complex> amps);

    /// Rescales an arbitrary nonzero amplitude vector to unit norm.
    static StateVector normalized(std::vector<Complex> amps);

    /// Computational basis state |index> in the given dimension.
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<Complex>& amplitudes() const { return amps_; }

  private:
    std::vector<Complex> amps_;
};

/// Dense square matrix over the same Hilbert space; entries row-major.
class Operator {
  public:
    Operator(std::size_t dim, std::vector<Complex> entries);
    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim);
    /// Convenience for literal matrices: rows of entries.
    static Operator from_rows(const std::vector<std::vector<Complex>>& rows);

    std::size_t dim() const { return dim_; }
    const Complex& at(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
    Complex& at(std::size_t row, std::size_t col) { return m_[row * dim_ + col]; }
    const std::vector<Complex>& entries() const { return m_; }

    Operator adjoint() const;
    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    friend Operator operator*(Complex scalar, const Operator& o);

    /// Largest entrywise magnitude, used for all tolerance checks.
    double max_abs() const;
    bool is_hermitian(double tol = 1e-9) const;
    bool is_unitary(double tol = 1e-9) const;
    bool commutes_with(const Operator& o, double tol = 1e-9) const;

  private:
    std::size_t dim_;
    std::vector<Complex> m_; // dim_ * dim_, row-major
};

/// Entrywise max |a - b|; dimensions must agree.
double max_abs_diff(const Operator& a, const Operator& b);

/// <bra|ket> = sum conj(bra_k) * ket_k. Throws on dimension mismatch.
Complex inner(const StateVector& bra, const StateVector& ket);
Complex inner(const StateVector& bra, const std::vector<Complex>& ket);
Complex inner(const std::vector<Complex>& bra, const std::vector<Complex>& ket);

double norm(const std::vector<Complex>& amps);

/// Matrix-vector product; result may be unnormalized.
std::vector<Complex> apply(const Operator& op, const StateVector& v);
std::vector<Complex> apply(const Operator& op, const std::vector<Complex>& v);

/// Kronecker products with row-major index convention (see StateVector).
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

/// Spectral decomposition of a Hermitian operator: strictly increasing
/// eigenvalues with one orthogonal projector per distinct eigenvalue.
/// Eigenvalues closer than merge_tol are treated as degenerate and share a
/// projector, so measurement outcomes stay well-defined under roundoff.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<Operator> projectors;

    std::size_t outcome_count() const { return eigenvalues.size(); }
};

/// Cyclic Jacobi eigendecomposition (complex rotations). Adequate and very
/// accurate for the small dimensions used here (dim <= ~64).
/// Throws std::invalid_argument if op is not Hermitian within 1e-9.
SpectralDecomposition spectral(const Operator& op, double merge_tol = 1e-7);

} // namespace tsvf
