#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nctopos/fincat.hpp"

namespace props {

  struct Tally {
    std::size_t              instances = 0;
    std::size_t              checks    = 0;
    std::vector<std::string> violations;

    void expect(bool ok, std::string const& what);
  };

  // Ω, LT/GT round trips both ways, classical closure on Sub(y C), and when
  // the classifier over 1+1 stays small: its size against the oracle, the
  // NC axioms, D as a congruence, Sub_H(yC) against the closed form and
  // every NC closure operator.
  void category_instance(nctopos::RawCategory const& raw, std::mt19937& rng, Tally& t);

  // A skew lattice of at most 12 elements from P̂ products or the pullback
  // construction over a random Ω(C): D is a congruence with a distributive
  // quotient and every down-set is a distributive lattice.
  void skew_instance(std::mt19937& rng, Tally& t);

  // n instances alternating between the two kinds.
  Tally run(std::size_t n, std::uint32_t seed);

}  // namespace props
