#pragma once

// Small dense numerical kernel shared by every other module: symmetric
// eigendecomposition, SPD solves, the principal Lambert W branch, seeded
// sampling and a bracketed scalar minimizer.

#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace bellshrink {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct EigenDecomposition {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, column j pairs with values(j)
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Eigenvalues come back sorted descending. Each eigenvector is signed so that
/// its largest-magnitude entry is positive, which makes the output a pure
/// function of the input.
EigenDecomposition symmetric_eigen(const Matrix& a);

/// Solves A x = b for symmetric positive-definite A (Cholesky).
Vector solve_spd(const Matrix& a, const Vector& b);

/// Principal branch W0 of the Lambert W function for x >= 0.
double lambert_w0(double x);

/// Seeded pseudorandom stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms take the top 53 bits; normals use the Marsaglia polar
/// method (the spare variate is cached). No std:: distribution objects are
/// used, so a given seed yields the same stream on every conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();

    /// Independent stream for repetition/cell `index`, derived from this
    /// stream's seed only (not its current position).
    Rng substream(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive seeds.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

/// n rows drawn i.i.d. from N(0, Sigma) with Sigma_ij = rho^|i-j|.
Matrix mvn_ar1_sample(Rng& rng, int n, int p, double rho);

std::uint64_t poisson_sample(Rng& rng, double lambda);
/// Poisson(theta) conditioned on being >= 1.
std::uint64_t ztp_sample(Rng& rng, double theta);

/// Bracketed one-dimensional minimization.
///
/// Scans [lower, upper] on a mixed uniform/geometric grid (plus `init`),
/// then polishes the best cell with Brent's parabolic/golden-section method.
/// The result never has a larger objective than `init` (when `init` lies in
/// the bracket). `tol` is an absolute tolerance on the abscissa.
double minimize_scalar(const std::function<double(double)>& f, double init,
                       double lower, double upper, double tol);

}  // namespace bellshrink
