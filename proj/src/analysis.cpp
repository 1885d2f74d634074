#include "orka/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orka/error.hpp"

namespace orka {

DistanceSample hyperplane_distances(const DenseMatrix& a, std::span<const double> x_star,
                                    const OneBitCapture& capture) {
  const std::size_t n = a.rows();
  if (capture.gamma.rows() != n || capture.r.rows() != n || capture.r.cols() != capture.gamma.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "capture shape does not match the measurement matrix");
  }
  const Vec ax = multiply(a, x_star);
  const std::size_t m = capture.gamma.cols();
  DistanceSample s;
  s.m_prime = m * n;
  s.values.reserve(s.m_prime);
  // |r_j| = 1, so the sign drops out of the square.
  for (std::size_t l = 0; l < m; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const double g = ax[j] - capture.gamma(j, l);
      s.values.push_back(g * g);
    }
  }
  return s;
}

double average_distance(const DistanceSample& sample) {
  if (sample.values.empty()) throw Error(ErrorKind::InvalidArgument, "empty distance sample");
  double s = 0.0;
  for (double d : sample.values) s += d;
  return s / static_cast<double>(sample.values.size());
}

std::vector<double> empirical_moments(const DistanceSample& sample, std::size_t order) {
  if (order == 0) throw Error(ErrorKind::InvalidArgument, "moment order must be at least 1");
  if (sample.values.empty()) throw Error(ErrorKind::InvalidArgument, "empty distance sample");
  std::vector<double> mu(order, 0.0);
  for (double d : sample.values) {
    double p = 1.0;
    for (std::size_t k = 0; k < order; ++k) {
      p *= d;
      mu[k] += p;
    }
  }
  for (double& m : mu) m /= static_cast<double>(sample.values.size());
  return mu;
}

double log_mgf_truncated(std::span<const double> mu, double t, std::size_t m_prime, std::size_t order) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be non-negative");
  if (m_prime == 0) throw Error(ErrorKind::InvalidArgument, "m' must be positive");
  if (order == 0 || order > mu.size()) {
    throw Error(ErrorKind::InvalidArgument, "truncation order must lie in [1, number of moments]");
  }
  const double mp = static_cast<double>(m_prime);
  // Series minus its leading 1, so log1p keeps precision for small t / m'.
  double tail = 0.0;
  double coeff = 1.0;
  for (std::size_t k = 1; k <= order; ++k) {
    coeff *= t / (static_cast<double>(k) * mp);
    tail += coeff * mu[k - 1];
  }
  if (tail <= -1.0) throw Error(ErrorKind::NonFinite, "truncated series is not positive");
  return mp * std::log1p(tail);
}

double mgf_truncated(std::span<const double> mu, double t, std::size_t m_prime, std::size_t order) {
  const double v = std::exp(log_mgf_truncated(mu, t, m_prime, order));
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "truncated MGF overflows");
  return v;
}

PenaltyModel pade_penalty_coefficients(double mu1, double mu2, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be positive");
  PenaltyModel p;
  p.mu1 = mu1;
  p.mu2 = mu2;
  p.t = t;
  const double u = mu1 * t;
  const double v = mu2 * t * t / 2.0;
  p.u = u;
  p.v = v;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double u4 = u2 * u2;
  const double eu = std::exp(u);
  p.b0 = 12.0 * u2 - 24.0 * v;
  p.b1 = 3.0 * u4 + 8.0 * u3 - 12.0 * u2 * v - 24.0 * u * v + 12.0 * v * v;
  p.a0 = eu * p.b0;
  p.a1 = eu * (-3.0 * u4 + 8.0 * u3 + 12.0 * u2 * v - 24.0 * u * v - 12.0 * v * v);
  if (std::abs(p.b0) < 1e-12 && std::abs(p.b1) < 1e-12) {
    throw Error(ErrorKind::DegeneratePade, "both denominator coefficients vanish");
  }
  p.singular_limit = p.b0 == 0.0;
  return p;
}

double penalty_value(const PenaltyModel& model, double m) {
  if (!(m >= 1.0)) throw Error(ErrorKind::InvalidArgument, "m must be at least 1");
  if (model.b0 == 0.0) throw Error(ErrorKind::DivisionByZero, "b0 = 0: penalty has no finite limit");
  const double denom = model.b0 * m + model.b1;
  if (denom == 0.0) throw Error(ErrorKind::DivisionByZero, "m sits on the pole -b1/b0");
  // Same rational function with the a0/b0 cancellation done symbolically.
  return (model.a1 * model.b0 - model.a0 * model.b1) / (model.b0 * denom);
}

std::vector<double> default_t_grid() {
  constexpr std::size_t points = 200;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

double chernoff_lower_bound(std::span<const double> mu, std::size_t m_prime, double a,
                            std::span<const double> t_grid, std::size_t order) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "a must be positive");
  if (t_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty t grid");
  const std::size_t k = order == 0 ? std::min<std::size_t>(2, mu.size()) : order;
  double best = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t grid must be non-negative");
    best = std::min(best, log_mgf_truncated(mu, t, m_prime, k) - t * a);
  }
  return std::clamp(1.0 - std::exp(best), 0.0, 1.0);
}

double augmented_convergence_bound(double kappa_a, double lambda, std::size_t i, double h0,
                                   const PenaltyModel& model, double m) {
  if (!(lambda > 0.0 && lambda < 2.0)) throw Error(ErrorKind::InvalidLambda, "relaxation must lie in (0, 2)");
  if (!(h0 >= 0.0)) throw Error(ErrorKind::InvalidArgument, "initial distance must be non-negative");
  if (!(kappa_a > 0.0)) throw Error(ErrorKind::InvalidArgument, "condition number must be positive");
  const double q = 1.0 - (2.0 * lambda - lambda * lambda) / (kappa_a * kappa_a);
  return std::pow(q, static_cast<double>(i)) * h0 + penalty_value(model, m);
}

}  // namespace orka
