#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "orka/matrix.hpp"
#include "orka/onebit.hpp"

namespace orka {

/// Squared distances d_j between a point and the one-bit hyperplanes, one per
/// stacked polyhedron row (sequence-major, like the polyhedron).
struct DistanceSample {
  std::vector<double> values;
  std::size_t m_prime = 0;
};

/// Sample-size penalty model from a two-moment Pade approximant of the MGF.
struct PenaltyModel {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double t = 0.0;
  double u = 0.0;  // mu1 * t
  double v = 0.0;  // mu2 * t^2 / 2
  double a0 = 0.0;
  double a1 = 0.0;
  double b0 = 0.0;
  double b1 = 0.0;
  /// b0 == 0: the approximant has no finite limit (12 u^2 = 24 v).
  bool singular_limit = false;
};

DistanceSample hyperplane_distances(const DenseMatrix& a, std::span<const double> x_star,
                                    const OneBitCapture& capture);

double average_distance(const DistanceSample& sample);

/// Raw sample moments E[d^k] for k = 1..order.
std::vector<double> empirical_moments(const DistanceSample& sample, std::size_t order);

/// (1 + sum_{k<=order} t^k mu_k / (k! m'^k))^{m'} with the remainder dropped.
/// Evaluated in log space; throws NonFinite if the result overflows.
double mgf_truncated(std::span<const double> mu, double t, std::size_t m_prime, std::size_t order);

/// Natural log of mgf_truncated (never overflows for a positive series).
double log_mgf_truncated(std::span<const double> mu, double t, std::size_t m_prime, std::size_t order);

PenaltyModel pade_penalty_coefficients(double mu1, double mu2, double t);

/// (a0 + a1/m) / (b0 + b1/m) - a0/b0.
double penalty_value(const PenaltyModel& model, double m);

/// 200-point logarithmic grid on [1e-3, 1e3].
std::vector<double> default_t_grid();

/// 1 - min_{t in grid} Psi_T(t) / e^{t a}, clamped to [0, 1], using the
/// order-2 truncated MGF when `order` is left at 0 (or min(order, |mu|)).
double chernoff_lower_bound(std::span<const double> mu, std::size_t m_prime, double a,
                            std::span<const double> t_grid, std::size_t order = 0);

/// (1 - (2 lambda - lambda^2) / kappa_a^2)^i h0 + penalty(m).
double augmented_convergence_bound(double kappa_a, double lambda, std::size_t i, double h0,
                                   const PenaltyModel& model, double m);

}  // namespace orka
