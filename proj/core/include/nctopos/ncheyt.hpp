#pragma once

// Noncommutative Heyting algebras: axioms, completeness over commuting
// subsets, the structure of top down-sets, the pullback construction and
// fusing of top elements.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nctopos/error.hpp"
#include "nctopos/lattice_laws.hpp"
#include "nctopos/report.hpp"
#include "nctopos/skewlat.hpp"

namespace nctopos {

  struct NCHeytingAlgebra {
    SkewLattice        base;
    std::vector<Index> imp;  // row-major
    Index              t = kNone;

    std::size_t size() const noexcept {
      return base.size();
    }
    std::string const& name(Index x) const {
      return base.names[x];
    }
    Index meet_of(Index x, Index y) const {
      return base.meet_of(x, y);
    }
    Index join_of(Index x, Index y) const {
      return base.join_of(x, y);
    }
    Index imp_of(Index x, Index y) const {
      return imp[x * size() + y];
    }
    Index bottom() const noexcept {
      return base.bottom;
    }
  };

  // A commutative Heyting algebra viewed as an NC one with t = 1.
  NCHeytingAlgebra from_heyting(HeytingTables const& h);

  // The D-class of t, ascending. Throws NotACongruence via the decomposition.
  std::vector<Index> top_class(NCHeytingAlgebra const& h);

  // Skew-lattice and strong distributivity checks on the base, the bottom,
  // t in the maximum D-class, and NH1-NH5 with witnesses.
  Report verify_nc_heyting(NCHeytingAlgebra const& h, std::string_view label = {});

  // Enumerates commuting subsets (up to `cap` of them) and checks that each
  // has a supremum and an infimum in the natural order and that meets
  // distribute over those suprema on both sides.
  Report verify_completeness(NCHeytingAlgebra const& h, std::size_t cap = 1U << 20);

  // Down-set of a top element with its own implication
  // x →' y = t'∧(x→y)∧t'. Equals H's implication when t' = t.
  HeytingTables top_downset(NCHeytingAlgebra const& h, Index top, std::vector<Index>* elements);

  // t↓ is a Heyting algebra isomorphic to H/D, and for every top t' the
  // map x ↦ t'∧x∧t' is an isomorphism t↓ → t'↓ with x D φ(x).
  Report structure_checks(NCHeytingAlgebra const& h);

  // ---------------------------------------------------------------------------
  // Pullback construction

  // An embedding of a finite lattice into 2^I: support[u] is a bitmask over I.
  struct Embedding {
    std::vector<std::string>   index_names;
    std::vector<std::uint64_t> support;
  };

  // I = join-irreducible elements, u ↦ {j : j ≤ u}.
  Embedding join_irreducible_embedding(HeytingTables const& h);
  // Throws BadEmbedding unless the embedding is injective, preserves ∧ and ∨
  // and sends the bounds to ∅ and I.
  void validate_embedding(HeytingTables const& h, Embedding const& e);

  struct PullbackAlgebra {
    NCHeytingAlgebra                algebra;
    std::vector<Index>              shadow;  // element → element of h
    // coords[x][i] is 0 off supp(shadow) and 1 + p for the decoration p.
    std::vector<std::vector<Index>> coords;
    Embedding                       embedding;
    std::vector<std::string>        shadow_names;
    std::vector<std::string>        decorations;
    std::vector<Index>              d;  // per index, into decorations

    // Looks an element up by shadow and coordinates; kNone if absent.
    Index find(Index u, std::vector<Index> const& c) const;

   private:
    friend PullbackAlgebra pullback_construct(HeytingTables const&,
                                              std::vector<std::string> const&,
                                              Embedding const&,
                                              std::vector<Index> const&);
    std::map<std::vector<Index>, Index> _lookup;
  };

  // Elements (u, x) with x_i ≠ 0 exactly on supp(u). Operations are
  // coordinatewise in P̂ with the shadow computed in h. The implication has
  // shadow u→v, keeps y on supp(v), uses d on supp(u→v)∖supp(v) and is 0
  // elsewhere. Throws EmptyP and BadEmbedding.
  PullbackAlgebra pullback_construct(HeytingTables const&            h,
                                     std::vector<std::string> const& p,
                                     Embedding const&                index,
                                     std::vector<Index> const&       d);

  // Element name: shadow name, then "_" and the decorations on the support.
  std::string decorated_name(std::string const&              shadow,
                             std::vector<Index> const&       coords,
                             std::vector<std::string> const& p,
                             std::uint64_t                   keep = ~std::uint64_t{0});

  struct FusedAlgebra {
    NCHeytingAlgebra   algebra;
    std::vector<Index> projection;  // old element → new element
  };

  // Identifies elements with equal keys. Elements outside the top class must
  // have distinct keys. Throws NotACongruence with a witness pair and
  // PreconditionViolated when a key merges non-top elements.
  FusedAlgebra fuse_tops(NCHeytingAlgebra const& h, std::vector<Index> const& key);

  // Fuses tops of a pullback algebra that agree on the coordinates in
  // `keep`, naming each fused top by its kept coordinates.
  FusedAlgebra fuse_coordinates(PullbackAlgebra const& p, std::uint64_t keep);

  // Exhaustive congruence test for the equivalence given by `key`.
  bool is_congruence(NCHeytingAlgebra const& h, std::vector<Index> const& key);

}  // namespace nctopos
