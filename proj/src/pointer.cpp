#include "tsvf/pointer.hpp"

#include <cmath>
#include <stdexcept>

#include "tsvf/errors.hpp"

namespace tsvf {

namespace {

constexpr double kVanishingNorm = 1e-30;
constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2 pi)

double gaussian_density(double q, double mean, double sigma) {
    const double z = (q - mean) / sigma;
    return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

// Pair overlap integral of two unit packets centered at a and b:
//   integral phi(q-a) phi(q-b) dq = exp(-(a-b)^2 / (8 sigma^2)).
double packet_overlap(double a, double b, double sigma) {
    const double d = a - b;
    return std::exp(-d * d / (8.0 * sigma * sigma));
}

} // namespace

double PointerMixture::squared_norm() const {
    // ||psi||^2 = sum_ij Re(conj(c_i) c_j) exp(-(a_i-a_j)^2 / (8 sigma^2))
    double total = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        total += std::norm(coefficients[i]);
        for (std::size_t j = i + 1; j < coefficients.size(); ++j) {
            total += 2.0 * (std::conj(coefficients[i]) * coefficients[j]).real() *
                     packet_overlap(centers[i], centers[j], sigma);
        }
    }
    return total;
}

PointerMixture weak_pointer_amplitudes(const TwoStateVector& tsv, const SpectralDecomposition& observable,
                                       const GaussianPointer& pointer) {
    if (!tsv.post) {
        throw std::invalid_argument("weak_pointer_amplitudes: post-selected state absent");
    }
    if (pointer.sigma <= 0.0) {
        throw std::invalid_argument("weak_pointer_amplitudes: sigma must be positive");
    }
    PointerMixture mix;
    mix.sigma = pointer.sigma;
    mix.coefficients.reserve(observable.outcome_count());
    mix.centers.reserve(observable.outcome_count());
    for (std::size_t i = 0; i < observable.outcome_count(); ++i) {
        mix.coefficients.push_back(inner(*tsv.post, apply(observable.projectors[i], tsv.pre)));
        mix.centers.push_back(pointer.initial_mean + observable.eigenvalues[i]);
    }
    return mix;
}

PointerMixture weak_pointer_amplitudes(const TwoStateVector& tsv, const Operator& observable,
                                       const GaussianPointer& pointer) {
    return weak_pointer_amplitudes(tsv, spectral(observable), pointer);
}

double pointer_density(const PointerMixture& mixture, double q) {
    Complex psi(0.0, 0.0);
    const double norm_factor = std::sqrt(kInvSqrt2Pi / mixture.sigma);
    for (std::size_t i = 0; i < mixture.coefficients.size(); ++i) {
        const double z = (q - mixture.centers[i]) / mixture.sigma;
        psi += mixture.coefficients[i] * norm_factor * std::exp(-0.25 * z * z);
    }
    return std::norm(psi);
}

PointerMean pointer_conditional_mean(const PointerMixture& mixture) {
    // Each pair (i, j) contributes a proper Gaussian centered halfway between
    // the two packets, weighted by the overlap factor:
    //   |psi(q)|^2 = sum_ij Re(conj(c_i) c_j) G_ij N(q; (a_i+a_j)/2, sigma^2).
    double denom = 0.0;
    double num = 0.0;
    for (std::size_t i = 0; i < mixture.coefficients.size(); ++i) {
        for (std::size_t j = 0; j < mixture.coefficients.size(); ++j) {
            const double w = (std::conj(mixture.coefficients[i]) * mixture.coefficients[j]).real() *
                             packet_overlap(mixture.centers[i], mixture.centers[j], mixture.sigma);
            denom += w;
            num += w * 0.5 * (mixture.centers[i] + mixture.centers[j]);
        }
    }
    if (denom < kVanishingNorm) {
        throw VanishingPointerNorm("pointer_conditional_mean: post-selection impossible at this coupling");
    }
    return {num / denom, denom};
}

double sample_pointer(const PointerMixture& mixture, RngStream& rng) {
    const double norm2 = mixture.squared_norm();
    if (norm2 < kVanishingNorm) {
        throw VanishingPointerNorm("sample_pointer: post-selection impossible at this coupling");
    }

    // Rejection from the dominating positive mixture: by Cauchy-Schwarz,
    //   |psi(q)|^2 <= (sum_i |c_i|) * sum_i |c_i| N(q; a_i, sigma^2).
    std::vector<double> weights(mixture.coefficients.size());
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] = std::abs(mixture.coefficients[i]);
        weight_sum += weights[i];
    }

    const long max_attempts = 10'000'000;
    for (long attempt = 0; attempt < max_attempts; ++attempt) {
        // Component choice by inverse CDF over the proposal weights.
        double pick = rng.uniform() * weight_sum;
        std::size_t comp = weights.size() - 1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (pick < weights[i]) {
                comp = i;
                break;
            }
            pick -= weights[i];
        }
        const double q = rng.gaussian(mixture.centers[comp], mixture.sigma);

        double envelope = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            envelope += weights[i] * gaussian_density(q, mixture.centers[i], mixture.sigma);
        }
        envelope *= weight_sum;
        if (rng.uniform() * envelope <= pointer_density(mixture, q)) {
            return q;
        }
    }
    throw VanishingPointerNorm("sample_pointer: acceptance rate too low at this coupling");
}

} // namespace tsvf
