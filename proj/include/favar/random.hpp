#pragma once

#include "favar/model.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace favar {

/// Mix a master seed with stream coordinates (iteration, step, row, ...)
/// into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords);

/// Seeded random stream. Draws depend only on the seed and call sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Substream keyed by coordinates relative to `master`.
    static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
        return Rng(derive_seed(master, coords));
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller, one variate per pair of uniforms).
    double normal() noexcept;

    Vector normal_vector(Index n);
    Matrix normal_matrix(Index rows, Index cols);

private:
    std::mt19937_64 engine_;
};

/// Generalized inverse Gaussian with density proportional to
/// x^(p-1) exp(-(chi/x + psi x)/2) on x > 0.
struct GigParams {
    double p = 0.0;
    double chi = 0.0;
    double psi = 0.0;
};

/// Smallest chi passed to the GIG generator; smaller values are raised to it.
inline constexpr double kGigChiFloor = 1e-30;

double sample_gig(const GigParams& params, Rng& rng);

/// Gamma with the given shape and rate (mean shape/rate).
double sample_gamma(double shape, double rate, Rng& rng);

/// Inverse gamma with density proportional to x^(-alpha-1) exp(-beta/x).
double sample_inverse_gamma(double alpha, double beta, Rng& rng);

/// Inverted Wishart IW(nu, Psi), mean Psi / (nu - d - 1).
Matrix sample_inverse_wishart(double nu, const Matrix& Psi, Rng& rng);

/// Reusable factor of a PSD covariance: draws are mean + G z.
class MvnFactor {
public:
    explicit MvnFactor(const Matrix& covariance);

    [[nodiscard]] const Matrix& factor() const noexcept { return g_; }
    [[nodiscard]] Index dim() const noexcept { return g_.rows(); }

    Vector draw(const Vector& mean, Rng& rng) const;

private:
    Matrix g_;
};

Vector sample_mvn(const Vector& mean, const Matrix& covariance, Rng& rng);
Vector sample_mvn(const Vector& mean, const MvnFactor& factor, Rng& rng);

/// Draw from N(Omega^-1 b, Omega^-1) given the LLT factor of the precision Omega.
Vector sample_mvn_precision(const Eigen::LLT<Matrix>& precision, const Vector& b, Rng& rng);

}  // namespace favar
