#pragma once

#include <vector>

#include "tsvf/hilbert.hpp"
#include "tsvf/rng.hpp"
#include "tsvf/two_state.hpp"

namespace tsvf {

/// Initial state of a von Neumann pointer: a Gaussian wavepacket
/// phi(q) = (2 pi sigma^2)^(-1/4) exp(-(q - mean)^2 / (4 sigma^2)),
/// so |phi|^2 has position spread sigma (same units as the eigenvalues).
struct GaussianPointer {
    double sigma;
    double initial_mean = 0.0;
};

/// Post-selected pointer wavefunction after an impulsive measurement coupling:
///   psi(q) = sum_i c_i phi(q - a_i),  c_i = <post|Pi_i|pre>, a_i eigenvalues.
/// Exact at every coupling strength; the interference between the shifted
/// packets is what produces weak-value readings outside the spectrum.
struct PointerMixture {
    std::vector<Complex> coefficients;
    std::vector<double> centers;
    double sigma;

    /// ||psi||^2 including interference terms; this is the probability that
    /// the post-selection succeeds after the coupling.
    double squared_norm() const;
};

struct PointerMean {
    double mean;
    double postselect_probability;
};

/// Builds the mixture for measuring `observable` on a pre/post-selected
/// system with the given pointer. Requires a post-selected state.
PointerMixture weak_pointer_amplitudes(const TwoStateVector& tsv, const Operator& observable,
                                       const GaussianPointer& pointer);
PointerMixture weak_pointer_amplitudes(const TwoStateVector& tsv, const SpectralDecomposition& observable,
                                       const GaussianPointer& pointer);

/// Closed-form conditional pointer mean E[q | post-selection] from Gaussian
/// overlap integrals. Tends to Re(weak value) as sigma grows and to the
/// ABL-weighted eigenvalue average as sigma -> 0.
/// Throws VanishingPointerNorm when the mixture norm is below 1e-30.
PointerMean pointer_conditional_mean(const PointerMixture& mixture);

/// One draw from the conditional pointer density |psi(q)|^2 / ||psi||^2,
/// by rejection from the positive Gaussian mixture that dominates it.
double sample_pointer(const PointerMixture& mixture, RngStream& rng);

/// Conditional density |psi(q)|^2 (unnormalized). Exposed for quadrature
/// cross-checks.
double pointer_density(const PointerMixture& mixture, double q);

} // namespace tsvf
