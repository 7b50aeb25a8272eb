#pragma once

// Presheaves of noncommutative Heyting algebras, the presheaf of top
// elements, Sub_H(P) and the classifier condition H/D ≅ Ω.

#include <vector>

#include "nctopos/fincat.hpp"
#include "nctopos/ncheyt.hpp"
#include "nctopos/report.hpp"

namespace nctopos {

  class NCHPresheaf {
   public:
    NCHPresheaf() = default;
    // act[f] maps H(cod f) to H(dom f). Throws NotAPresheaf.
    NCHPresheaf(Site site, std::vector<NCHeytingAlgebra> at, std::vector<std::vector<Index>> act);

    Site const& site() const noexcept {
      return _presheaf.site();
    }
    NCHeytingAlgebra const& at(Index c) const {
      return _at[c];
    }
    std::vector<NCHeytingAlgebra> const& algebras() const noexcept {
      return _at;
    }
    Index act(Index f, Index x) const {
      return _presheaf.act(f, x);
    }
    Presheaf const& presheaf() const noexcept {
      return _presheaf;
    }

   private:
    std::vector<NCHeytingAlgebra> _at;
    Presheaf                      _presheaf;
  };

  // NC Heyting axioms per object; every restriction preserves ∧, ∨, →, 0
  // and t and sends tops to tops.
  Report verify_nch_presheaf(NCHPresheaf const& h);

  struct Classifier {
    NCHPresheaf                     H;
    OmegaPresheaf                   omega;
    Presheaf                        T;             // T(C) = top class of H(C)
    std::vector<std::vector<Index>> tops;          // T element → H element
    std::vector<std::vector<Index>> top_position;  // H element → T element or kNone
    std::vector<std::vector<Index>> shadow;        // H element → sieve index
    std::vector<std::vector<Index>> section;       // sieve index → element of t↓
    Report                          report;

    bool is_top(Index c, Index x) const {
      return top_position[c][x] != kNone;
    }
  };

  // Verifies H, extracts T, and searches for a natural isomorphism
  // H/D ≅ Ω. Throws NotAClassifier naming the failing object or arrow.
  Classifier make_classifier(NCHPresheaf h, OmegaPresheaf omega);

  struct ClassifierBuild {
    std::vector<PullbackAlgebra> parts;  // per object
    Classifier                   classifier;
  };

  // H(C) is the pullback algebra over Ω(C) indexed by arrows into C with
  // constant decoration d(C), and H(f)(u,x) = (f*u, g ↦ P(f)(x_{f∘g})).
  // Throws NoGlobalSection when d is not natural.
  ClassifierBuild build_classifier(Site const&               site,
                                   Presheaf const&           p,
                                   std::vector<Index> const& d,
                                   SieveNamer const&         namer = default_sieve_name);

  // Fuses tops that agree on the non-identity coordinates at every object.
  Classifier fuse_classifier(ClassifierBuild const& build);

  // ---------------------------------------------------------------------------

  struct NatOps {
    NaturalTransformation meet;
    NaturalTransformation join;
    NaturalTransformation imp;
    Report                report;
  };

  // Componentwise ∧, ∨, → of two maps P → H, with naturality rechecked.
  // Throws TargetMismatch when a map does not land in H.
  NatOps pointwise_nat_ops(Presheaf const&              p,
                           Classifier const&            c,
                           NaturalTransformation const& n,
                           NaturalTransformation const& m);

  struct SubH {
    std::vector<NaturalTransformation> maps;  // canonical order
    std::vector<Subpresheaf>           q;     // pullback of t_H along each map
    NCHeytingAlgebra                   algebra;
    Report                             report;

    Index index_of(NaturalTransformation const& n) const;  // kNone if absent
  };

  // Throws TooLarge when there are more than `limit` candidate families.
  SubH sub_H(Presheaf const& p, Classifier const& c, double limit = 1e4);

  struct SubHYoneda {
    Index                      object = 0;
    std::vector<std::uint64_t> sieve;  // S(x) per element x of H(C)
    NCHeytingAlgebra           algebra;
    Report                     report;
  };

  // S(x) = {f : H(f)(x) ∈ T(dom f)}.
  SubHYoneda sub_H_yoneda(Classifier const& c, Index object);

  // Compares sub_H(yC) with the closed form: x ↦ (S(x), H(-)(x)) must be an
  // isomorphism of NC Heyting algebras.
  Report yoneda_consistency(Classifier const& c, Index object, double limit = 1e6);

  struct ShadowProjection {
    SubobjectLattice                      sub;
    std::vector<Index>                    to_sub;    // Sub_H(P) → Sub(P)
    std::vector<Index>                    from_sub;  // Sub(P) → Sub_H(P) via the section
    std::vector<std::vector<Index>>       sections;  // Γ(T), as H elements
    std::vector<std::vector<Subpresheaf>> q_g;       // [section][element of Sub_H]
    Report                                report;
  };

  ShadowProjection shadow_projection(SubH const& s, Presheaf const& p, Classifier const& c);

  // Global sections of T, as H elements per object.
  std::vector<std::vector<Index>> top_sections(Classifier const& c);

}  // namespace nctopos
