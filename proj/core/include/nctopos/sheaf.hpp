#pragma once

// Sheaf conditions for classical covers and for NC covers in the slice over
// T, bounded enumeration up to isomorphism and the terminal-object search.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nctopos/classif.hpp"
#include "nctopos/fincat.hpp"
#include "nctopos/topol.hpp"

namespace nctopos {

  // F with an optional π : F → T. pi components hold T indices (positions in
  // Classifier::tops), not H indices.
  struct SlicePresheaf {
    Presheaf                             F;
    std::optional<NaturalTransformation> pi;
  };

  // Naturality of π against the classifier's T.
  bool is_slice_presheaf(SlicePresheaf const& f, Classifier const& c, std::string* witness = nullptr);

  struct Cover {
    Index         object = 0;
    std::uint64_t mask   = 0;       // sieve on `object`
    Index         x      = kNone;   // H element in slice mode
  };

  struct CoverSystem {
    Site                              site;
    std::vector<Cover>                covers;
    std::shared_ptr<Classifier const> classifier;  // null in classical mode
    std::string                       name;

    bool slice() const noexcept {
      return classifier != nullptr;
    }

    static CoverSystem classical(OmegaPresheaf const& omega, GrothendieckTopology const& g);
    static CoverSystem nc(std::shared_ptr<Classifier const> c, NCGrothendieckTopology const& g);
  };

  // One value per arrow of the sieve, in arrows_into order.
  using Family = std::vector<Index>;

  // All g : S → F, with π(g_f) = H(f)(x) in slice mode. Throws SiteMismatch.
  std::vector<Family> matching_families(CoverSystem const& sys, Cover const& cover,
                                        SlicePresheaf const& f);

  // Elements e of F(C) with F(f)(e) = g_f along the sieve. No color
  // constraint is placed on e.
  std::vector<Index> extensions(CoverSystem const& sys, Cover const& cover,
                                SlicePresheaf const& f, Family const& g);

  struct SheafCounterexample {
    Index       object = 0;
    std::size_t cover  = 0;  // index into CoverSystem::covers
    Family      family;
    std::size_t extensions = 0;
  };

  struct SheafVerdict {
    bool                               sheaf = true;
    std::optional<SheafCounterexample> counterexample;
    std::size_t                        families = 0;
  };

  // Throws SiteMismatch; in slice mode also PreconditionViolated when F has
  // no π or π is not natural.
  SheafVerdict check_sheaf(CoverSystem const& sys, SlicePresheaf const& f);

  // Per-object upper bounds on |F(C)|.
  struct Bounds {
    std::vector<std::size_t> max;

    static Bounds uniform(FiniteCategory const& cat, std::size_t n);
  };

  struct EnumerationOptions {
    unsigned    jobs      = 1;
    std::size_t max_nodes = 200'000'000;
    // Non-direct sites fall back to labeled brute force; beyond this many
    // labeled candidates BoundTooLarge is thrown.
    std::size_t max_labeled = 2'000'000;
  };

  struct Enumeration {
    std::vector<SlicePresheaf> items;  // canonical representatives, ascending
    std::size_t                labeled = 0;  // candidates before iso reduction
  };

  // Every presheaf (colored over T when `c` is given) within bounds, one per
  // isomorphism class. Throws BoundTooLarge.
  Enumeration enumerate_presheaves(Site const& site, Classifier const* c, Bounds const& bounds,
                                   EnumerationOptions const& opt = {});

  // The sheaves among them. On direct sites the search prunes as soon as a
  // family has two extensions.
  Enumeration enumerate_sheaves(CoverSystem const& sys, Bounds const& bounds,
                                EnumerationOptions const& opt = {});

  // Maps X → Y in the slice: natural transformations with π_Y∘m = π_X.
  std::vector<NaturalTransformation> slice_morphisms(SlicePresheaf const& x, SlicePresheaf const& y);

  enum class TerminalKind { Terminal, NoTerminal, Inconclusive };

  struct Elimination {
    std::size_t candidate;  // indices into the enumerated sheaves
    std::size_t witness;
    std::size_t maps;  // 0 or 2 (meaning two or more)
  };

  struct TerminalResult {
    TerminalKind                                           kind = TerminalKind::Inconclusive;
    std::optional<SlicePresheaf>                           terminal;
    std::optional<std::pair<SlicePresheaf, SlicePresheaf>> certificate;
    std::vector<Elimination>                               eliminated;
    std::size_t                                            sheaves = 0;
    std::string                                            note;
  };

  // Looks for a sheaf receiving exactly one map from every sheaf within
  // bounds. Failing that, every candidate carries a witness with zero or
  // several maps into it, and the first pair of sheaves in canonical order
  // with no map either way is returned as the certificate.
  TerminalResult terminal_search(CoverSystem const& sys, Bounds const& bounds,
                                 EnumerationOptions const& opt = {});

  std::string to_string(TerminalKind k);

}  // namespace nctopos
