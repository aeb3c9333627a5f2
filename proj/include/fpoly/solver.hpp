#pragma once

// Polyhedral Minkowski problem: Newton iteration on h -> A(h) - f.

#include "fpoly/covolume.hpp"
#include "fpoly/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fpoly {

struct SolverConfig {
  double tol = 1e-10;  // relative residual, ||A - f||_inf <= tol ||f||_inf
  int max_iter = 50;
  double shrink = 0.5;
  double min_step = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SolverReport {
  SupportVector solution;
  std::vector<double> residual_history;  // ||A - f||_inf per accepted iterate, starting point first
  int iterations = 0;
  bool converged = false;
  int combinatorics_changes = 0;
  double properness_bound = 0.0;
  std::vector<double> step_lengths;
};

class SolverError : public NumericError {
public:
  SolverError(const std::string& what, SolverReport report) : NumericError(what), report_(std::move(report)) {}
  const SolverReport& report() const noexcept { return report_; }

private:
  SolverReport report_;
};

class NonConvergenceError : public SolverError {
public:
  using SolverError::SolverError;
};

class DomainEscapeError : public SolverError {
public:
  using SolverError::SolverError;
};

SolverReport solve_minkowski(const NormalFamily& family, const std::vector<double>& f, const SolverConfig& cfg = {});

/// Smallest distance between distinct normals of the orbit set.
double min_normal_separation(const NormalFamily& family);

/// Upper bound d max f / (lambda Per) on the largest support number of the solution.
double properness_bound(const NormalFamily& family, const std::vector<double>& f);

}  // namespace fpoly
