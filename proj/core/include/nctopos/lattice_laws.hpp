#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nctopos/error.hpp"
#include "nctopos/report.hpp"

namespace nctopos {

  // Dense, locally indexed tables of a (commutative) bounded lattice with an
  // implication. Used to check Heyting laws on Ω(C), on down-sets t↓ and on
  // quotients by Green's relation.
  struct HeytingTables {
    std::vector<std::string> names;
    std::vector<Index>       meet;
    std::vector<Index>       join;
    std::vector<Index>       imp;
    Index                    bottom = kNone;
    Index                    top    = kNone;

    std::size_t size() const noexcept {
      return names.size();
    }
    Index meet_of(Index x, Index y) const {
      return meet[x * size() + y];
    }
    Index join_of(Index x, Index y) const {
      return join[x * size() + y];
    }
    Index imp_of(Index x, Index y) const {
      return imp[x * size() + y];
    }
    bool leq(Index x, Index y) const {
      return meet_of(x, y) == x;
    }
  };

  // Bounded distributive lattice laws, H1-H4 and the single axiom HA.
  // Check names are prefixed with `label`.
  Report check_heyting(HeytingTables const& h, std::string_view label = {});

  // Relative pseudocomplement computed from the order alone: the largest z
  // with z ∧ x ≤ y. Returns nothing when no largest such z exists.
  std::optional<Index> pseudocomplement(HeytingTables const& h, Index x, Index y);

}  // namespace nctopos
