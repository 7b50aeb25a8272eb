#pragma once

// Finite skew lattices given by dense operation tables.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nctopos/error.hpp"
#include "nctopos/lattice_laws.hpp"
#include "nctopos/report.hpp"

namespace nctopos {

  struct SkewLattice {
    std::vector<std::string> names;
    std::vector<Index>       meet;  // row-major |L| x |L|
    std::vector<Index>       join;
    Index                    bottom = kNone;

    std::size_t size() const noexcept {
      return names.size();
    }
    Index meet_of(Index x, Index y) const {
      return meet[x * size() + y];
    }
    Index join_of(Index x, Index y) const {
      return join[x * size() + y];
    }
    // x∧y∧x
    Index sandwich(Index x, Index y) const {
      return meet_of(meet_of(x, y), x);
    }
    bool commute(Index x, Index y) const {
      return meet_of(x, y) == meet_of(y, x) && join_of(x, y) == join_of(y, x);
    }
    // Natural partial order: x ≤ y iff x∧y = x = y∧x.
    bool leq(Index x, Index y) const {
      return meet_of(x, y) == x && meet_of(y, x) == x;
    }
    bool d_related(Index x, Index y) const {
      return sandwich(x, y) == x && sandwich(y, x) == y;
    }
    std::optional<Index> find(std::string_view name) const;
    Index                index(std::string_view name) const;  // throws UnknownElement
  };

  // Idempotence, associativity and absorption for both operations, the two
  // strong distributivity identities and the bottom element.
  Report verify_skew_lattice(SkewLattice const& l, std::string_view label = {});

  struct GreenDecomposition {
    std::vector<std::vector<Index>> classes;     // ordered by smallest member
    std::vector<Index>              projection;  // element → class
    SkewLattice                     quotient;    // commutative
    std::vector<bool>               order;       // class order, row-major
    std::optional<Index>            top_class;

    bool class_leq(Index a, Index b) const {
      return order[a * classes.size() + b];
    }
  };

  // Throws NotACongruence when class operations depend on representatives.
  GreenDecomposition green_decomposition(SkewLattice const& l);

  // order[x * n + y] is x ≤ y.
  std::vector<bool> natural_order(SkewLattice const& l);

  struct DownSet {
    std::vector<Index> elements;  // ascending ids of L
    HeytingTables      tables;    // local indices; implication from the order
    Report             report;
  };

  // x↓ = {y : y ≤ x} as a commutative sublattice, with closure,
  // commutativity and distributivity checked.
  DownSet downset(SkewLattice const& l, Index x);

  // {0} ∪ P with x∧y = x and x∨y = y on P. Throws EmptyP.
  SkewLattice phat(std::vector<std::string> const& p);
  SkewLattice product(SkewLattice const& a, SkewLattice const& b);

  // All maps L → M preserving ∧ and ∨. Refuses |M| > 6 with TooLarge.
  std::vector<std::vector<Index>> enumerate_morphisms(SkewLattice const& l, SkewLattice const& m);

  // True when `f` is constant on every D-class of its domain.
  bool factors_through(GreenDecomposition const& g, std::vector<Index> const& f);

}  // namespace nctopos
