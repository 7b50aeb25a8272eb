#pragma once

// Canonical labelings of (colored) presheaves for isomorphism reduction.

#include <vector>

#include "nctopos/sheaf.hpp"

namespace nctopos {

  // On a direct site a presheaf is determined by the profile of each
  // element: its color (0 when uncolored) followed by its restrictions
  // along the non-identity arrows into its object, in arrows_into order.
  using Profiles = std::vector<std::vector<std::vector<Index>>>;  // [object][element]

  Profiles      profiles_of(SlicePresheaf const& f);  // direct sites only
  SlicePresheaf from_profiles(Site const& site, Profiles const& p, bool colored);

  // Elements are sorted object by object in direct order by profile, with
  // every permutation inside each tie group tried; the least code wins. The
  // code lists, per object, the size and then the sorted profiles, so it
  // also decodes back to the canonical presheaf.
  std::vector<Index> canonical_code(FiniteCategory const& cat, Profiles const& p, bool colored);
  Profiles           decode_code(FiniteCategory const& cat, std::vector<Index> const& code);

  struct CanonicalForm {
    std::vector<Index> code;       // equal codes ⇔ isomorphic (in the slice)
    SlicePresheaf      relabeled;  // elements renamed <object><i>
  };

  // Other sites take the least code over all labelings and throw TooLarge
  // past `max_labelings`.
  CanonicalForm canonical_form(SlicePresheaf const& f, std::size_t max_labelings = 1'000'000);

  bool isomorphic(SlicePresheaf const& a, SlicePresheaf const& b);

}  // namespace nctopos
