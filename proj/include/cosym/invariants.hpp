#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cosym/manifolds.hpp"

namespace cosym {

/// Sum of `terms` monomials of degree ≤ max_degree with coefficients in [−1, 1].
ScalarField random_polynomial(const ChartRef & chart, std::mt19937_64 & rng, int terms = 4, int max_degree = 2);

struct InvariantCheck
{
  std::string structure;
  std::string property;
  double value;
  double tolerance;
  bool passed;
};

/// Reeb identities, classification consistency, dissipation law and Jacobi-bracket
/// antisymmetry over the built-in catalog.
std::vector<InvariantCheck> run_invariant_suite(std::uint64_t seed, const ModelParameters & m = {});

}  // namespace cosym
