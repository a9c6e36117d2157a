// allocation.hpp: Photon-budget allocation across independent modes.

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace corrloss {

struct ModeValueFunction {
  // Best value of the mode when it may use up to N photons. Must accept N >= 0.
  std::function<double(double)> value;
  // dvalue/dN; estimated by finite differences of `value` when empty.
  std::function<double(double)> marginal;
  // Number of identical modes this entry stands for.
  int multiplicity = 1;
};

struct AllocationOptions {
  double multiplier_tolerance = 1e-10;
  double photon_tolerance = 1e-10;
  // Relative rise of the marginal tolerated before a mode counts as non-concave.
  double concavity_tolerance = 1e-6;
  int concavity_samples = 17;
  int max_iterations = 200;
};

struct Allocation {
  std::vector<double> photons;  // per entry (mean per member of a multiplicity group)
  // Members of each entry that receive photons, photons * multiplicity /
  // active_members each; fewer than the multiplicity only for non-concave
  // value functions.
  std::vector<int> active_members;
  double multiplier = 0.0;
  double total_value = 0.0;     // sum over entries of multiplicity * value
  double kkt_residual = 0.0;    // max marginal mismatch, relative to the multiplier
  bool concave = true;          // false: water-filling abandoned for the fallback search
  bool converged = true;
  int iterations = 0;
};

// Maximizes sum_j m_j value_j(N_j) subject to sum_j m_j N_j = n_total * N, with
// n_total = sum_j m_j. Water-filling with bisection on the Lagrange multiplier
// when every marginal is nonincreasing; multistart pairwise-transfer search
// otherwise.
Allocation allocate_photons(std::span<const ModeValueFunction> modes, double N,
                            const AllocationOptions& options = {});

// Convenience overload: n copies of the same value function.
Allocation allocate_photons(const ModeValueFunction& mode, int n, double N,
                            const AllocationOptions& options = {});

// Central (or one-sided near N = 0) difference of a value function.
double numeric_marginal(const std::function<double(double)>& value, double N);

}  // namespace corrloss
