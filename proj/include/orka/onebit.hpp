#pragma once

#include <cstdint>
#include <span>

#include "orka/feasibility.hpp"
#include "orka/matrix.hpp"

namespace orka {

/// m threshold sequences of length n, stored as the columns of `gamma`.
struct ThresholdEnsemble {
  DenseMatrix gamma;  // n x m
  double mean = 0.0;
  std::uint64_t seed = 0;
};

/// Sign matrix R and threshold matrix Gamma, both n x m.
struct OneBitCapture {
  DenseMatrix r;
  DenseMatrix gamma;
};

/// One-bit polyhedron in <= form: -r_j a_j x <= -r_j tau_j for every
/// (threshold sequence, sample) pair. Rows are grouped per threshold sequence,
/// so block l holds rows l*n .. l*n + n - 1.
struct OneBitPolyhedron {
  FeasibilityProblem problem;
  std::size_t block_rows;
};

/// sgn(y - tau) with sgn(0) = +1.
Vec quantize_one_bit(std::span<const double> y, std::span<const double> tau);

/// n x m i.i.d. N(mean, 1) thresholds.
ThresholdEnsemble generate_thresholds(std::size_t n, std::size_t m, double mean, std::uint64_t seed);

struct BuiltPolyhedron {
  OneBitPolyhedron polyhedron;
  OneBitCapture capture;
};

BuiltPolyhedron build_polyhedron(const DenseMatrix& a, std::span<const double> y,
                                 const ThresholdEnsemble& ensemble);

/// Polyhedron for given signs and thresholds (no re-quantization).
OneBitPolyhedron polyhedron_from_capture(const DenseMatrix& a, const OneBitCapture& capture);

/// One-bit recovery: draws m N(0,1) threshold sequences from `seed`, builds the
/// polyhedron and solves it from x0 = 0 with `cfg`.
SolveReport orka_recover(const DenseMatrix& a, std::span<const double> y, std::size_t m,
                         const SolverConfig& cfg, std::uint64_t seed, double threshold_mean = 0.0);

struct AdaptiveResult {
  SolveReport report;           // last inner solve; iterations summed over all solves
  ThresholdEnsemble thresholds;  // thresholds after the final update
  std::size_t outer_iterations = 0;
  /// max over sequences of ||tau_{k+1} - tau_k||_2, one entry per outer step.
  std::vector<double> movement;
  bool thresholds_converged = false;
};

/// Adaptive thresholding: alternate a polyhedron solve with moving each
/// threshold halfway toward a_j x_k and re-quantizing y against it.
AdaptiveResult adaptive_threshold_recover(const DenseMatrix& a, std::span<const double> y, std::size_t m,
                                          const SolverConfig& cfg, double delta, std::size_t max_outer,
                                          std::uint64_t seed, double threshold_mean = 0.0);

}  // namespace orka
