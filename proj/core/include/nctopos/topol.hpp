#pragma once

// Lawvere-Tierney and Grothendieck topologies, noncommutative Lawvere
// topologies on a classifier, the covers they induce and closure operators.

#include <cstdint>
#include <vector>

#include "nctopos/classif.hpp"
#include "nctopos/fincat.hpp"
#include "nctopos/report.hpp"

namespace nctopos {

  // j[C][s] for sieve indices of Ω(C).
  struct LawvereTopology {
    std::vector<std::vector<Index>> j;

    friend bool operator==(LawvereTopology const&, LawvereTopology const&) = default;
    friend auto operator<=>(LawvereTopology const&, LawvereTopology const&) = default;
  };

  // covers[C] lists sieve indices of Ω(C), ascending.
  struct GrothendieckTopology {
    std::vector<std::vector<Index>> covers;

    friend bool operator==(GrothendieckTopology const&, GrothendieckTopology const&) = default;
    friend auto operator<=>(GrothendieckTopology const&, GrothendieckTopology const&) = default;
  };

  Report verify_lawvere(OmegaPresheaf const& omega, LawvereTopology const& j);
  Report verify_grothendieck(OmegaPresheaf const& omega, GrothendieckTopology const& g);

  // All LT topologies in ascending order of their tables.
  std::vector<LawvereTopology> enumerate_lawvere(OmegaPresheaf const& omega);

  // J(C) = {S : j(S) = 1}. Throws AxiomFailure when j fails LT1-LT3.
  GrothendieckTopology lt_to_gt(OmegaPresheaf const& omega, LawvereTopology const& j);
  // j(S) = {f : f*S ∈ J(dom f)}. Throws AxiomFailure when J fails GT1-GT3.
  LawvereTopology gt_to_lt(OmegaPresheaf const& omega, GrothendieckTopology const& g);

  // Both round trips starting from j.
  Report grothendieck_correspondence(OmegaPresheaf const& omega, LawvereTopology const& j);

  LawvereTopology      identity_lawvere(OmegaPresheaf const& omega);
  GrothendieckTopology chaotic_topology(OmegaPresheaf const& omega);
  GrothendieckTopology discrete_topology(OmegaPresheaf const& omega);

  // ---------------------------------------------------------------------------
  // Noncommutative

  // j[C][x] for elements of H(C).
  struct NCLawvereTopology {
    std::vector<std::vector<Index>> j;

    friend bool operator==(NCLawvereTopology const&, NCLawvereTopology const&) = default;
    friend auto operator<=>(NCLawvereTopology const&, NCLawvereTopology const&) = default;
  };

  // NLT1-NLT3 and naturality. The down-set stability j(t↓) ⊆ t↓ is reported
  // as a separate derived check.
  Report verify_nc_lawvere(Classifier const& c, NCLawvereTopology const& j);

  // Per object and per top t, an LT-style map on t↓ (fixes t, idempotent,
  // preserves meets); choices must agree on shared elements, then the
  // families are filtered by naturality and global idempotence. Sorted by
  // the per-object masks of covered non-top elements. Throws
  // PreconditionViolated when some element lies under no top.
  std::vector<NCLawvereTopology> enumerate_nc_lawvere(Classifier const& c, unsigned jobs = 1);

  // Backtracking over all natural families fixing the tops, checking
  // NLT3 and idempotence as values are assigned. Throws TooLarge after
  // `max_nodes` search nodes.
  std::vector<NCLawvereTopology> enumerate_nc_lawvere_raw(Classifier const& c,
                                                          std::size_t max_nodes = 50'000'000);

  // Per object, bit k set when the k-th non-top element is sent into T.
  std::vector<std::uint64_t> covered_masks(Classifier const& c, NCLawvereTopology const& j);

  NCLawvereTopology identity_nc_lawvere(Classifier const& c);

  struct NCGrothendieckTopology {
    std::vector<std::vector<Index>>         covers;  // x ∈ H(C) with j(x) ∈ T(C)
    std::vector<std::vector<std::uint64_t>> sieves;  // S(x) for each cover
  };

  NCGrothendieckTopology derive_nc_grothendieck(Classifier const& c, NCLawvereTopology const& j);

  struct Closure {
    std::vector<Index> image;  // Sub_H(P) index → index of its closure
    Report             report;
  };

  // (Q,N) ↦ (Q̄, j∘N), checked extensive (Q ⊆ Q̄ and in the natural order)
  // and idempotent.
  Closure closure_on_subH(Classifier const& c, NCLawvereTopology const& j, SubH const& s,
                          Presheaf const& p);

  // On Sub_H(yC): the closure computed pointwise equals the closed form
  // Q̄ = {f : H(f)(j(x)) ∈ T(dom f)}.
  Report closure_yoneda_check(Classifier const& c, NCLawvereTopology const& j, Index object,
                              double limit = 1e6);

  struct SectionRestriction {
    LawvereTopology j;
    Report          report;
  };

  // Transports j along g(C)↓ ≅ Ω(C). Throws NotStable when j leaves g(C)↓.
  SectionRestriction restrict_to_section(Classifier const&         c,
                                         NCLawvereTopology const&  j,
                                         std::vector<Index> const& g);

}  // namespace nctopos
