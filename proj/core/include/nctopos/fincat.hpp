#pragma once

// Finite categories, presheaves of finite sets on them, natural
// transformations, sieves and the classical subobject classifier Ω.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nctopos/error.hpp"
#include "nctopos/lattice_laws.hpp"
#include "nctopos/report.hpp"

namespace nctopos {

  struct RawArrow {
    std::string id;
    std::string dom;
    std::string cod;
  };

  // Unvalidated description of a category. Identities are implicit and named
  // "id_X"; listing them explicitly is allowed.
  struct RawCategory {
    std::vector<std::string>                objects;
    std::vector<RawArrow>                   arrows;
    std::vector<std::array<std::string, 3>> compose;  // (g, f, g∘f)
  };

  class FiniteCategory {
   public:
    // Throws MissingComposite, NonAssociative, BadIdentity or BadComposite
    // naming the offending arrows.
    static FiniteCategory validate(RawCategory const& raw);

    std::size_t object_count() const noexcept {
      return _objects.size();
    }
    std::size_t arrow_count() const noexcept {
      return _arrows.size();
    }

    std::string const& object_name(Index c) const {
      return _objects[c];
    }
    std::string const& arrow_name(Index a) const {
      return _arrows[a].name;
    }
    Index dom(Index a) const {
      return _arrows[a].dom;
    }
    Index cod(Index a) const {
      return _arrows[a].cod;
    }
    Index identity(Index c) const {
      return _identity[c];
    }
    bool is_identity(Index a) const {
      return _identity[_arrows[a].dom] == a;
    }

    // g∘f, or kNone when cod f != dom g.
    Index compose(Index g, Index f) const {
      return _compose[g * _arrows.size() + f];
    }

    // All arrows with codomain c in ascending arrow order. Sieves on c are
    // bitmasks over this list.
    std::vector<Index> const& arrows_into(Index c) const {
      return _into[c];
    }
    // Position of `a` inside arrows_into(cod a).
    Index position_into(Index a) const {
      return _position[a];
    }
    std::vector<Index> hom(Index d, Index c) const;

    std::optional<Index> find_object(std::string_view name) const;
    std::optional<Index> find_arrow(std::string_view name) const;
    Index                object(std::string_view name) const;  // throws UnknownObject
    Index                arrow(std::string_view name) const;   // throws UnknownArrow

    // No non-identity endomorphisms and no cycles of non-identity arrows.
    bool is_direct() const noexcept {
      return !_levels.empty();
    }
    // Objects sorted so that every non-identity arrow goes from an earlier
    // object to a later one. Empty unless is_direct().
    std::vector<Index> const& direct_order() const noexcept {
      return _levels;
    }

    RawCategory to_raw() const;

    friend bool operator==(FiniteCategory const& a, FiniteCategory const& b);

   private:
    struct Arrow {
      std::string name;
      Index       dom;
      Index       cod;
    };

    std::vector<std::string>        _objects;
    std::vector<Arrow>              _arrows;
    std::vector<Index>              _identity;
    std::vector<Index>              _compose;
    std::vector<std::vector<Index>> _into;
    std::vector<Index>              _position;
    std::vector<Index>              _levels;
  };

  using Site = std::shared_ptr<FiniteCategory const>;

  Site make_site(RawCategory const& raw);
  void require_same_site(Site const& a, Site const& b);  // throws SiteMismatch

  // A contravariant functor into finite sets. action(f) maps F(cod f) to
  // F(dom f).
  class Presheaf {
   public:
    Presheaf() = default;
    // Identity actions may be passed empty and are filled in. Throws
    // NotAPresheaf when functoriality fails.
    Presheaf(Site                                  site,
             std::vector<std::vector<std::string>> elements,
             std::vector<std::vector<Index>>       action);

    Site const& site() const noexcept {
      return _site;
    }
    FiniteCategory const& category() const {
      return *_site;
    }
    std::size_t size(Index c) const {
      return _elements[c].size();
    }
    std::string const& name(Index c, Index x) const {
      return _elements[c][x];
    }
    std::vector<std::string> const& elements(Index c) const {
      return _elements[c];
    }
    Index act(Index f, Index x) const {
      return _action[f][x];
    }
    std::vector<Index> const& action(Index f) const {
      return _action[f];
    }
    std::optional<Index> find_element(Index c, std::string_view name) const;
    Index                element(Index c, std::string_view name) const;  // throws UnknownElement

    std::size_t total_size() const;

   private:
    Site                                  _site;
    std::vector<std::vector<std::string>> _elements;
    std::vector<std::vector<Index>>       _action;
  };

  // components[C][p] is the image of p ∈ P(C).
  struct NaturalTransformation {
    std::vector<std::vector<Index>> components;

    friend bool operator==(NaturalTransformation const&, NaturalTransformation const&)
        = default;
    friend auto operator<=>(NaturalTransformation const&, NaturalTransformation const&)
        = default;
  };

  bool is_natural(Presheaf const&              source,
                  Presheaf const&              target,
                  NaturalTransformation const& n,
                  std::string*                 witness = nullptr);

  // Every natural transformation source → target, in lexicographic order of
  // components (objects in id order, elements in id order). Throws
  // SiteMismatch. A nonzero `limit` throws TooLarge once exceeded.
  std::vector<NaturalTransformation>
  enumerate_nat_trans(Presheaf const& source, Presheaf const& target, std::size_t limit = 0);

  Presheaf terminal_presheaf(Site const& site);
  Presheaf empty_presheaf(Site const& site);
  // D ↦ Hom(D, C) with precomposition. Throws UnknownObject.
  Presheaf yoneda_presheaf(Site const& site, Index c);
  Presheaf coproduct(Presheaf const& a, Presheaf const& b);

  // Global sections: one element per object, compatible with every action.
  std::vector<std::vector<Index>> global_sections(Presheaf const& p);

  // ---------------------------------------------------------------------------
  // Sieves

  // Bit k of `mask` stands for arrows_into(codomain)[k].
  struct Sieve {
    Index         codomain = 0;
    std::uint64_t mask     = 0;

    friend bool operator==(Sieve const&, Sieve const&) = default;
  };

  inline constexpr std::size_t kMaxArrowsInto = 64;

  bool  is_sieve(FiniteCategory const& cat, Index c, std::uint64_t mask);
  bool  sieve_contains(FiniteCategory const& cat, Sieve const& s, Index arrow);
  Sieve maximal_sieve(FiniteCategory const& cat, Index c);
  Sieve principal_sieve(FiniteCategory const& cat, Index f);
  // h*(S) = {g : h∘g ∈ S}. Throws CodMismatch unless S is on cod h.
  Sieve restrict_sieve(FiniteCategory const& cat, Index h, Sieve const& s);

  // Canonical order: ascending mask. Uses subset filtering up to 20 arrows
  // into c and union-closure of principal sieves beyond that.
  std::vector<Sieve> enumerate_sieves(FiniteCategory const& cat, Index c);
  std::vector<Sieve> enumerate_sieves_by_filter(FiniteCategory const& cat, Index c);
  std::vector<Sieve> enumerate_sieves_by_closure(FiniteCategory const& cat, Index c);

  using SieveNamer = std::function<std::string(FiniteCategory const&, Sieve const&)>;
  // "1" for the maximal sieve, "0" for the empty one, "{f,g}" otherwise.
  std::string default_sieve_name(FiniteCategory const& cat, Sieve const& s);

  // The presheaf of sieves with its pointwise Heyting structure and the
  // global section `true`.
  class OmegaPresheaf {
   public:
    OmegaPresheaf() = default;
    explicit OmegaPresheaf(Site site, SieveNamer const& namer = default_sieve_name);

    Site const& site() const noexcept {
      return _site;
    }
    std::vector<Sieve> const& sieves(Index c) const {
      return _sieves[c];
    }
    std::size_t size(Index c) const {
      return _sieves[c].size();
    }
    Index index_of(Index c, std::uint64_t mask) const;
    // Per-object Heyting tables indexed by sieve position.
    HeytingTables const& algebra(Index c) const {
      return _algebra[c];
    }
    Index top(Index c) const {
      return _algebra[c].top;
    }
    Index bottom(Index c) const {
      return _algebra[c].bottom;
    }
    // h* on sieve indices.
    Index restrict(Index h, Index s) const {
      return _presheaf.act(h, s);
    }
    Presheaf const& presheaf() const noexcept {
      return _presheaf;
    }
    // `true`: the maximal sieve on every object.
    std::vector<Index> true_section() const;

    // Heyting laws per object and the Heyting-morphism property of every
    // restriction map.
    Report verify() const;

   private:
    Site                            _site;
    std::vector<std::vector<Sieve>> _sieves;
    std::vector<HeytingTables>      _algebra;
    Presheaf                        _presheaf;
  };

  // ---------------------------------------------------------------------------
  // Subobjects

  struct Subpresheaf {
    std::vector<std::vector<bool>> member;  // member[C][p]

    friend bool operator==(Subpresheaf const&, Subpresheaf const&) = default;
    friend auto operator<=>(Subpresheaf const&, Subpresheaf const&) = default;
  };

  bool is_subpresheaf(Presheaf const& p, Subpresheaf const& q);
  bool subset_of(Subpresheaf const& a, Subpresheaf const& b);

  // Lexicographic order on membership bits, empty subpresheaf first.
  std::vector<Subpresheaf> enumerate_subpresheaves(Presheaf const& p);

  // N(C)(p) = {f : D → C | P(f)(p) ∈ Q(D)}.
  NaturalTransformation
  classifying_map(Presheaf const& p, Subpresheaf const& q, OmegaPresheaf const& omega);
  // Q(C) = {p : N(C)(p) = true}.
  Subpresheaf pullback_of_true(Presheaf const&              p,
                               NaturalTransformation const& n,
                               OmegaPresheaf const&         omega);

  // Sub(P) as a Heyting algebra. Operations are computed pointwise on
  // classifying maps in Ω and pulled back along `true`.
  struct SubobjectLattice {
    std::vector<Subpresheaf>           subobjects;
    std::vector<NaturalTransformation> classifying;
    HeytingTables                      tables;
    Report                             report;

    Index index_of(Subpresheaf const& q) const;
  };

  // Verifies that pulling `true` back along each classifying map recovers
  // the subobject and that classifying maps are exactly the natural
  // transformations P → Ω.
  SubobjectLattice subobject_lattice(Presheaf const& p, OmegaPresheaf const& omega);

}  // namespace nctopos
