#include "favar/random.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

namespace favar {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Generators for the standardized GIG with density
// x^(lambda-1) exp(-omega/2 (x + 1/x)), lambda >= 0. Hoermann & Leydold (2014).

double gig_mode(double lambda, double omega) {
    if (lambda >= 1.0) return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) / omega;
    return omega / (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms with mode shift, for lambda > 2 or omega > 3.
double gig_rou_shift(double lambda, double omega, Rng& rng) {
    const double t = 0.5 * (lambda - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lambda, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

    // roots of the cubic y^3 + a y^2 + b y + c bounding the rectangle
    const double a = -(2.0 * (lambda + 1.0) / omega + xm);
    const double b = (2.0 * (lambda - 1.0) * xm / omega - 1.0);
    const double c = xm;
    const double p = b - a * a / 3.0;
    const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
    const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
    const double fak = 2.0 * std::sqrt(-p / 3.0);
    const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
    const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;

    const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
    const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

    for (;;) {
        const double u = uminus + rng.uniform() * (uplus - uminus);
        const double v = rng.uniform();
        const double x = u / v + xm;
        if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
    }
}

// Ratio-of-uniforms without shift.
double gig_rou_noshift(double lambda, double omega, Rng& rng) {
    const double t = 0.5 * (lambda - 1.0);
    const double s = 0.25 * omega;
    const double xm = gig_mode(lambda, omega);
    const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
    const double ym = ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
    const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);

    for (;;) {
        const double u = um * rng.uniform();
        const double v = rng.uniform();
        const double x = u / v;
        if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
    }
}

// Rejection from a hat that is constant on the log-concave part; 0 <= lambda < 1, omega <= 1.
double gig_concave_hat(double lambda, double omega, Rng& rng) {
    const double xm = gig_mode(lambda, omega);
    const double x0 = omega / (1.0 - lambda);

    const double k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
    double area[3];
    area[0] = k0 * x0;

    double k1 = 0.0;
    double k2 = 0.0;
    if (x0 >= 2.0 / omega) {
        area[1] = 0.0;
        k2 = std::pow(x0, lambda - 1.0);
        area[2] = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
    } else {
        k1 = std::exp(-omega);
        area[1] = (lambda == 0.0) ? k1 * std::log(2.0 / (omega * omega))
                                  : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
        k2 = std::pow(2.0 / omega, lambda - 1.0);
        area[2] = k2 * 2.0 * std::exp(-1.0) / omega;
    }
    const double total = area[0] + area[1] + area[2];

    for (;;) {
        double v = total * rng.uniform();
        double x = 0.0;
        double hx = 0.0;
        if (v <= area[0]) {
            x = x0 * v / area[0];
            hx = k0;
        } else if (v -= area[0]; v <= area[1]) {
            if (lambda == 0.0) {
                x = omega * std::exp(std::exp(omega) * v);
                hx = k1 / x;
            } else {
                x = std::pow(std::pow(x0, lambda) + (lambda / k1 * v), 1.0 / lambda);
                hx = k1 * std::pow(x, lambda - 1.0);
            }
        } else {
            v -= area[1];
            const double a = (x0 > 2.0 / omega) ? x0 : 2.0 / omega;
            x = -2.0 / omega * std::log(std::exp(-omega / 2.0 * a) - omega / (2.0 * k2) * v);
            hx = k2 * std::exp(-omega / 2.0 * x);
        }
        const double u = rng.uniform() * hx;
        if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) return x;
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(master);
    std::uint64_t k = 0;
    for (std::uint64_t c : coords) {
        h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL * ++k));
    }
    return h;
}

double Rng::normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector Rng::normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
}

Matrix Rng::normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
}

double sample_gig(const GigParams& params, Rng& rng) {
    const double p = params.p;
    double chi = params.chi;
    const double psi = params.psi;
    if (!std::isfinite(p) || !std::isfinite(chi) || !std::isfinite(psi) || chi < 0.0 || psi < 0.0 ||
        !(chi > 0.0 || p > 0.0) || !(psi > 0.0 || p < 0.0)) {
        std::ostringstream err;
        err << "GIG parameters outside the valid region: p=" << p << " chi=" << chi << " psi=" << psi;
        throw ParameterError(err.str());
    }

    if (psi == 0.0) return sample_inverse_gamma(-p, 0.5 * chi, rng);
    if (chi == 0.0) return sample_gamma(p, 0.5 * psi, rng);
    chi = std::max(chi, kGigChiFloor);

    const double omega = std::sqrt(psi * chi);
    const double alpha = std::sqrt(chi / psi);
    const double lambda = std::abs(p);
    constexpr double kZeroTol = 0.8 * DBL_EPSILON;

    if (omega < kZeroTol && p != 0.0) {
        // round-off regime: the density collapses onto its gamma / inverse-gamma limit
        if (p > 0.0) return sample_gamma(p, 0.5 * psi, rng);
        return sample_inverse_gamma(-p, 0.5 * chi, rng);
    }

    double x = 0.0;
    if (lambda > 2.0 || omega > 3.0) {
        x = gig_rou_shift(lambda, omega, rng);
    } else if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2) {
        x = gig_rou_noshift(lambda, omega, rng);
    } else {
        x = gig_concave_hat(lambda, omega, rng);
    }
    return (p < 0.0) ? alpha / x : alpha * x;
}

double sample_gamma(double shape, double rate, Rng& rng) {
    if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
        std::ostringstream err;
        err << "gamma parameters must be positive: shape=" << shape << " rate=" << rate;
        throw ParameterError(err.str());
    }
    // Marsaglia & Tsang; shapes below one are boosted by U^(1/shape).
    const double a = shape < 1.0 ? shape + 1.0 : shape;
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double g = 0.0;
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            g = d * v;
            break;
        }
    }
    if (shape < 1.0) g = std::exp(std::log(g) + std::log(rng.uniform()) / shape);
    return g / rate;
}

double sample_inverse_gamma(double alpha, double beta, Rng& rng) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        std::ostringstream err;
        err << "inverse-gamma parameters must be positive: alpha=" << alpha << " beta=" << beta;
        throw ParameterError(err.str());
    }
    return 1.0 / sample_gamma(alpha, beta, rng);
}

Matrix sample_inverse_wishart(double nu, const Matrix& Psi, Rng& rng) {
    const Index d = Psi.rows();
    if (Psi.cols() != d || d == 0) throw ParameterError("inverse Wishart: scale must be square");
    if (!(nu > static_cast<double>(d) - 1.0)) throw ParameterError("inverse Wishart: need nu > d - 1");
    Eigen::LLT<Matrix> llt(linalg::symmetrize(Psi));
    if (!linalg::is_symmetric(Psi) || llt.info() != Eigen::Success)
        throw ParameterError("inverse Wishart: scale matrix is not symmetric positive definite");

    // Bartlett factor of a Wishart(nu, I) draw.
    Matrix B = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
        B(i, i) = std::sqrt(2.0 * sample_gamma(0.5 * (nu - static_cast<double>(i)), 1.0, rng));
        for (Index j = 0; j < i; ++j) B(i, j) = rng.normal();
    }
    // Sigma = L B^-T B^-1 L' with Psi = L L'.
    const Matrix Lt = llt.matrixL().transpose();
    const Matrix Ct = B.triangularView<Eigen::Lower>().solve(Lt);
    Matrix sigma = Ct.transpose() * Ct;
    return linalg::symmetrize(sigma);
}

MvnFactor::MvnFactor(const Matrix& covariance) {
    if (covariance.rows() != covariance.cols()) throw ParameterError("MVN covariance must be square");
    if (!covariance.allFinite() || !linalg::is_symmetric(covariance, 1e-8))
        throw ParameterError("MVN covariance must be finite and symmetric");
    Eigen::LLT<Matrix> llt(covariance);
    if (llt.info() == Eigen::Success) {
        g_ = llt.matrixL();
        return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrize(covariance), Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    if (ev.size() > 0 && ev.minCoeff() < -1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff()))
        throw ParameterError("MVN covariance is not positive semi-definite");
    g_ = linalg::psd_factor(covariance);
}

Vector MvnFactor::draw(const Vector& mean, Rng& rng) const {
    if (mean.size() != g_.rows()) throw ShapeError("MVN mean/covariance dimension mismatch");
    return mean + g_ * rng.normal_vector(g_.cols());
}

Vector sample_mvn(const Vector& mean, const Matrix& covariance, Rng& rng) {
    return MvnFactor(covariance).draw(mean, rng);
}

Vector sample_mvn(const Vector& mean, const MvnFactor& factor, Rng& rng) { return factor.draw(mean, rng); }

Vector sample_mvn_precision(const Eigen::LLT<Matrix>& precision, const Vector& b, Rng& rng) {
    Vector mean = precision.solve(b);
    Vector z = rng.normal_vector(b.size());
    return mean + precision.matrixU().solve(z);
}

}  // namespace favar
