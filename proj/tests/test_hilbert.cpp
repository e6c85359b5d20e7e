#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/rng.hpp"

using namespace tsvf;

namespace {

Operator random_hermitian(std::size_t dim, RngStream& rng) {
    Operator a = Operator::zero(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        a.at(r, r) = Complex(2.0 * rng.uniform() - 1.0, 0.0);
        for (std::size_t c = r + 1; c < dim; ++c) {
            const Complex z(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
            a.at(r, c) = z;
            a.at(c, r) = std::conj(z);
        }
    }
    return a;
}

StateVector random_state(std::size_t dim, RngStream& rng) {
    std::vector<Complex> amps(dim);
    for (auto& z : amps) z = Complex(rng.gaussian(), rng.gaussian());
    return StateVector::normalized(std::move(amps));
}

} // namespace

TEST_CASE("state vector construction and normalization") {
    CHECK_THROWS_AS(StateVector({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::normalized({0.0, 0.0}), std::invalid_argument);

    const StateVector v = StateVector::normalized({1.0, 1.0, 1.0, 1.0});
    CHECK(v.dim() == 4);
    CHECK(v[0].real() == doctest::Approx(0.5).epsilon(1e-12));

    const StateVector b = StateVector::basis(3, 2);
    CHECK(b[2] == Complex(1.0, 0.0));
    CHECK(b[0] == Complex(0.0, 0.0));
    CHECK_THROWS_AS(StateVector::basis(3, 3), std::invalid_argument);
}

TEST_CASE("operator algebra and predicates") {
    const Operator id = Operator::identity(2);
    const Operator sx = Operator::from_rows({{0, 1}, {1, 0}});
    const Operator sy = Operator::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}});

    CHECK(sx.is_hermitian());
    CHECK(sx.is_unitary());
    CHECK(!sx.commutes_with(sy));
    CHECK(max_abs_diff(sx * sx, id) < 1e-15);

    const Operator sum = sx + sy;
    CHECK(sum.at(0, 1) == Complex(1, -1));
    const Operator scaled = Complex(0, 2) * sx;
    CHECK(scaled.at(1, 0) == Complex(0, 2));
    CHECK(max_abs_diff(scaled.adjoint(), Complex(0, -2) * sx) < 1e-15);
}

TEST_CASE("inner products and application") {
    const StateVector a = StateVector::normalized({1.0, Complex(0, 1)});
    const StateVector b = StateVector::basis(2, 0);
    // <b|a> = first amplitude of a
    CHECK(std::abs(inner(b, a) - a[0]) < 1e-15);
    // <a|a> = 1
    CHECK(std::abs(inner(a, a) - Complex(1, 0)) < 1e-12);

    const Operator sx = Operator::from_rows({{0, 1}, {1, 0}});
    const auto flipped = tsvf::apply(sx, b);
    CHECK(std::abs(flipped[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("tensor products use row-major index convention") {
    const StateVector a = StateVector::basis(2, 1);
    const StateVector b = StateVector::basis(3, 2);
    const StateVector ab = tensor(a, b);
    CHECK(ab.dim() == 6);
    CHECK(ab[1 * 3 + 2] == Complex(1, 0)); // index i*db + k

    const Operator pa = Operator::from_rows({{1, 0}, {0, 0}});
    const Operator x3 = Operator::from_rows({{0, 0, 0}, {0, 1, 0}, {0, 0, 2}});
    const Operator t = tensor(pa, x3);
    CHECK(t.dim() == 6);
    CHECK(t.at(2, 2) == Complex(2, 0)); // (0,2)x(0,2) entry = 1 * 2
    CHECK(t.at(5, 5) == Complex(0, 0)); // second block vanishes

    // (A (x) B)(a (x) b) = (A a) (x) (B b)
    RngStream rng(11, 0);
    const Operator ra = random_hermitian(2, rng);
    const Operator rb = random_hermitian(3, rng);
    const StateVector va = random_state(2, rng);
    const StateVector vb = random_state(3, rng);
    const auto lhs = tsvf::apply(tensor(ra, rb), tensor(va, vb));
    const auto a_va = tsvf::apply(ra, va);
    const auto b_vb = tsvf::apply(rb, vb);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(std::abs(lhs[i * 3 + k] - a_va[i] * b_vb[k]) < 1e-12);
        }
    }
}

TEST_CASE("spectral decomposition reconstructs random Hermitian operators") {
    RngStream rng(42, 0);
    for (std::size_t dim = 2; dim <= 6; ++dim) {
        for (int rep = 0; rep < 8; ++rep) {
            const Operator a = random_hermitian(dim, rng);
            const SpectralDecomposition sd = spectral(a);

            // eigenvalues strictly increasing
            for (std::size_t i = 1; i < sd.eigenvalues.size(); ++i) {
                CHECK(sd.eigenvalues[i] > sd.eigenvalues[i - 1]);
            }

            // completeness and orthogonality
            Operator sum_p = Operator::zero(dim);
            Operator reconstructed = Operator::zero(dim);
            for (std::size_t i = 0; i < sd.outcome_count(); ++i) {
                sum_p = sum_p + sd.projectors[i];
                reconstructed = reconstructed + Complex(sd.eigenvalues[i], 0) * sd.projectors[i];
                CHECK(max_abs_diff(sd.projectors[i] * sd.projectors[i], sd.projectors[i]) < 1e-10);
                CHECK(sd.projectors[i].is_hermitian(1e-10));
                for (std::size_t j = i + 1; j < sd.outcome_count(); ++j) {
                    CHECK((sd.projectors[i] * sd.projectors[j]).max_abs() < 1e-10);
                }
            }
            CHECK(max_abs_diff(sum_p, Operator::identity(dim)) < 1e-10);
            CHECK(max_abs_diff(reconstructed, a) < 1e-9);
        }
    }
}

TEST_CASE("spectral decomposition merges degenerate eigenvalues") {
    const SpectralDecomposition id3 = spectral(Operator::identity(3));
    CHECK(id3.outcome_count() == 1);
    CHECK(id3.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(id3.projectors[0], Operator::identity(3)) < 1e-12);

    // projector onto a 1-d subspace: eigenvalues {0, 0, 1}
    const Operator p = Operator::from_rows({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}});
    const SpectralDecomposition sd = spectral(p);
    REQUIRE(sd.outcome_count() == 2);
    CHECK(sd.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs_diff(sd.projectors[1], p) < 1e-12);

    // degenerate pair with an off-diagonal coupling
    const Operator h = Operator::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 3}});
    const SpectralDecomposition hd = spectral(h);
    REQUIRE(hd.outcome_count() == 3);
    CHECK(hd.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hd.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(hd.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral rejects non-Hermitian input") {
    const Operator bad = Operator::from_rows({{0, 1}, {0, 0}});
    CHECK_THROWS_AS(spectral(bad), std::invalid_argument);
}

TEST_CASE("complex off-diagonal structure is handled exactly") {
    // sigma_y has eigenvalues -1, +1 with complex eigenvectors
    const Operator sy = Operator::from_rows({{0, Complex(0, -1)}, {Complex(0, 1), 0}});
    const SpectralDecomposition sd = spectral(sy);
    REQUIRE(sd.outcome_count() == 2);
    CHECK(sd.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sd.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
    Operator rec = Complex(sd.eigenvalues[0], 0) * sd.projectors[0] +
                   Complex(sd.eigenvalues[1], 0) * sd.projectors[1];
    CHECK(max_abs_diff(rec, sy) < 1e-12);
}
