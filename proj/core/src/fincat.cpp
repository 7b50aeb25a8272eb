#include "nctopos/fincat.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

namespace nctopos {

  namespace {

    std::uint64_t full_mask(std::size_t n) {
      return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
    }

    void check_into_size(FiniteCategory const& cat, Index c) {
      if (cat.arrows_into(c).size() > kMaxArrowsInto) {
        throw Error(ErrorKind::TooLarge,
                    "more than 64 arrows into " + cat.object_name(c));
      }
    }

    // Backtracking over variables (object, element) in canonical order. Each
    // binary constraint is checked as soon as its later endpoint is assigned.
    struct VarLayout {
      std::vector<std::size_t> offset;  // per object
      std::size_t              count = 0;

      explicit VarLayout(Presheaf const& p) {
        auto const& cat = p.category();
        offset.resize(cat.object_count());
        for (Index c = 0; c < cat.object_count(); ++c) {
          offset[c] = count;
          count += p.size(c);
        }
      }
    };

  }  // namespace

  // ---------------------------------------------------------------------------
  // FiniteCategory

  FiniteCategory FiniteCategory::validate(RawCategory const& raw) {
    FiniteCategory cat;
    std::map<std::string, Index> object_ids;
    for (auto const& o : raw.objects) {
      if (o.empty() || !object_ids.emplace(o, static_cast<Index>(cat._objects.size())).second) {
        throw Error(ErrorKind::Parse, "duplicate or empty object name '" + o + "'");
      }
      cat._objects.push_back(o);
    }
    std::map<std::string, Index> arrow_ids;
    auto add_arrow = [&](std::string const& name, Index d, Index c) {
      if (!arrow_ids.emplace(name, static_cast<Index>(cat._arrows.size())).second) {
        throw Error(ErrorKind::Parse, "duplicate arrow name '" + name + "'");
      }
      cat._arrows.push_back(Arrow{name, d, c});
    };
    for (Index c = 0; c < cat._objects.size(); ++c) {
      cat._identity.push_back(static_cast<Index>(cat._arrows.size()));
      add_arrow("id_" + cat._objects[c], c, c);
    }
    auto lookup_object = [&](std::string const& name) {
      auto it = object_ids.find(name);
      if (it == object_ids.end()) {
        throw Error(ErrorKind::UnknownObject, "'" + name + "'");
      }
      return it->second;
    };
    for (auto const& a : raw.arrows) {
      Index const d = lookup_object(a.dom);
      Index const c = lookup_object(a.cod);
      if (a.id.rfind("id_", 0) == 0 && object_ids.count(a.id.substr(3)) != 0) {
        Index const x = object_ids.at(a.id.substr(3));
        if (d != x || c != x) {
          throw Error(ErrorKind::BadIdentity, a.id + " must be an endomorphism of " + a.id.substr(3));
        }
        continue;
      }
      add_arrow(a.id, d, c);
    }

    std::size_t const n = cat._arrows.size();
    cat._compose.assign(n * n, kNone);
    for (Index f = 0; f < n; ++f) {
      cat._compose[cat._identity[cat._arrows[f].cod] * n + f] = f;
      cat._compose[f * n + cat._identity[cat._arrows[f].dom]] = f;
    }
    auto lookup_arrow = [&](std::string const& name) {
      auto it = arrow_ids.find(name);
      if (it == arrow_ids.end()) {
        throw Error(ErrorKind::UnknownArrow, "'" + name + "'");
      }
      return it->second;
    };
    std::vector<bool> given(n * n, false);
    for (auto const& [gs, fs, hs] : raw.compose) {
      Index const g = lookup_arrow(gs);
      Index const f = lookup_arrow(fs);
      Index const h = lookup_arrow(hs);
      std::string const pair = gs + "," + fs;
      if (cat._arrows[f].cod != cat._arrows[g].dom) {
        throw Error(ErrorKind::BadComposite, pair + " is not a composable pair");
      }
      if (cat.is_identity(g) && h != f) {
        throw Error(ErrorKind::BadIdentity, pair + " = " + hs + " but must be " + fs);
      }
      if (cat.is_identity(f) && h != g) {
        throw Error(ErrorKind::BadIdentity, pair + " = " + hs + " but must be " + gs);
      }
      if (cat._arrows[h].dom != cat._arrows[f].dom || cat._arrows[h].cod != cat._arrows[g].cod) {
        throw Error(ErrorKind::BadComposite, pair + " = " + hs + " has the wrong domain or codomain");
      }
      if (given[g * n + f] && cat._compose[g * n + f] != h) {
        throw Error(ErrorKind::BadComposite, pair + " given twice with different values");
      }
      given[g * n + f]        = true;
      cat._compose[g * n + f] = h;
    }
    for (Index g = 0; g < n; ++g) {
      for (Index f = 0; f < n; ++f) {
        if (cat._arrows[f].cod == cat._arrows[g].dom && cat._compose[g * n + f] == kNone) {
          throw Error(ErrorKind::MissingComposite,
                      cat._arrows[g].name + "," + cat._arrows[f].name);
        }
      }
    }
    for (Index h = 0; h < n; ++h) {
      for (Index g = 0; g < n; ++g) {
        if (cat._arrows[g].cod != cat._arrows[h].dom) {
          continue;
        }
        for (Index f = 0; f < n; ++f) {
          if (cat._arrows[f].cod != cat._arrows[g].dom) {
            continue;
          }
          if (cat.compose(h, cat.compose(g, f)) != cat.compose(cat.compose(h, g), f)) {
            throw Error(ErrorKind::NonAssociative, cat._arrows[h].name + "," + cat._arrows[g].name
                                                       + "," + cat._arrows[f].name);
          }
        }
      }
    }

    cat._into.assign(cat._objects.size(), {});
    cat._position.assign(n, 0);
    for (Index a = 0; a < n; ++a) {
      auto& into      = cat._into[cat._arrows[a].cod];
      cat._position[a] = static_cast<Index>(into.size());
      into.push_back(a);
    }

    // Kahn's algorithm on the object graph of non-identity arrows.
    std::size_t const           m = cat._objects.size();
    std::vector<std::set<Index>> succ(m);
    std::vector<std::size_t>    indeg(m, 0);
    bool                        direct = true;
    for (Index a = 0; a < n; ++a) {
      if (cat.is_identity(a)) {
        continue;
      }
      if (cat._arrows[a].dom == cat._arrows[a].cod) {
        direct = false;
        break;
      }
      if (succ[cat._arrows[a].dom].insert(cat._arrows[a].cod).second) {
        ++indeg[cat._arrows[a].cod];
      }
    }
    if (direct) {
      std::vector<Index> order;
      std::vector<Index> ready;
      for (Index c = 0; c < m; ++c) {
        if (indeg[c] == 0) {
          ready.push_back(c);
        }
      }
      while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        Index const c = ready.back();
        ready.pop_back();
        order.push_back(c);
        for (Index s : succ[c]) {
          if (--indeg[s] == 0) {
            ready.push_back(s);
          }
        }
      }
      if (order.size() == m) {
        cat._levels = std::move(order);
      }
    }
    return cat;
  }

  std::vector<Index> FiniteCategory::hom(Index d, Index c) const {
    std::vector<Index> out;
    for (Index a : _into[c]) {
      if (_arrows[a].dom == d) {
        out.push_back(a);
      }
    }
    return out;
  }

  std::optional<Index> FiniteCategory::find_object(std::string_view name) const {
    auto it = std::find(_objects.begin(), _objects.end(), name);
    if (it == _objects.end()) {
      return std::nullopt;
    }
    return static_cast<Index>(it - _objects.begin());
  }

  std::optional<Index> FiniteCategory::find_arrow(std::string_view name) const {
    auto it = std::find_if(_arrows.begin(), _arrows.end(),
                           [&](Arrow const& a) { return a.name == name; });
    if (it == _arrows.end()) {
      return std::nullopt;
    }
    return static_cast<Index>(it - _arrows.begin());
  }

  Index FiniteCategory::object(std::string_view name) const {
    auto c = find_object(name);
    if (!c) {
      throw Error(ErrorKind::UnknownObject, "'" + std::string(name) + "'");
    }
    return *c;
  }

  Index FiniteCategory::arrow(std::string_view name) const {
    auto a = find_arrow(name);
    if (!a) {
      throw Error(ErrorKind::UnknownArrow, "'" + std::string(name) + "'");
    }
    return *a;
  }

  RawCategory FiniteCategory::to_raw() const {
    RawCategory raw;
    raw.objects = _objects;
    for (Index a = 0; a < _arrows.size(); ++a) {
      if (!is_identity(a)) {
        raw.arrows.push_back({_arrows[a].name, _objects[_arrows[a].dom], _objects[_arrows[a].cod]});
      }
    }
    for (Index g = 0; g < _arrows.size(); ++g) {
      for (Index f = 0; f < _arrows.size(); ++f) {
        if (is_identity(g) || is_identity(f) || compose(g, f) == kNone) {
          continue;
        }
        raw.compose.push_back({_arrows[g].name, _arrows[f].name, _arrows[compose(g, f)].name});
      }
    }
    return raw;
  }

  bool operator==(FiniteCategory const& a, FiniteCategory const& b) {
    if (a._objects != b._objects || a._arrows.size() != b._arrows.size()) {
      return false;
    }
    for (std::size_t i = 0; i < a._arrows.size(); ++i) {
      if (a._arrows[i].name != b._arrows[i].name || a._arrows[i].dom != b._arrows[i].dom
          || a._arrows[i].cod != b._arrows[i].cod) {
        return false;
      }
    }
    return a._compose == b._compose;
  }

  Site make_site(RawCategory const& raw) {
    return std::make_shared<FiniteCategory const>(FiniteCategory::validate(raw));
  }

  void require_same_site(Site const& a, Site const& b) {
    if (a == b) {
      return;
    }
    if (!a || !b || !(*a == *b)) {
      throw Error(ErrorKind::SiteMismatch, "operands live on different sites");
    }
  }

  // ---------------------------------------------------------------------------
  // Presheaf

  Presheaf::Presheaf(Site                                  site,
                     std::vector<std::vector<std::string>> elements,
                     std::vector<std::vector<Index>>       action)
      : _site(std::move(site)), _elements(std::move(elements)), _action(std::move(action)) {
    if (!_site) {
      throw Error(ErrorKind::NotAPresheaf, "no site");
    }
    auto const& cat = *_site;
    if (_elements.size() != cat.object_count()) {
      throw Error(ErrorKind::NotAPresheaf, "expected one element list per object");
    }
    _action.resize(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      auto&       act = _action[f];
      auto const  src = _elements[cat.cod(f)].size();
      auto const  dst = _elements[cat.dom(f)].size();
      if (cat.is_identity(f) && act.empty()) {
        act.resize(src);
        for (Index x = 0; x < src; ++x) {
          act[x] = x;
        }
      }
      if (act.size() != src) {
        throw Error(ErrorKind::NotAPresheaf, "action of " + cat.arrow_name(f) + " has wrong size");
      }
      for (Index x = 0; x < src; ++x) {
        if (act[x] >= dst) {
          throw Error(ErrorKind::NotAPresheaf,
                      "action of " + cat.arrow_name(f) + " leaves " + cat.object_name(cat.dom(f)));
        }
        if (cat.is_identity(f) && act[x] != x) {
          throw Error(ErrorKind::NotAPresheaf, cat.arrow_name(f) + " does not act as the identity");
        }
      }
    }
    for (Index g = 0; g < cat.arrow_count(); ++g) {
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        Index const gf = cat.compose(g, f);
        if (gf == kNone) {
          continue;
        }
        for (Index x = 0; x < _elements[cat.cod(g)].size(); ++x) {
          if (_action[gf][x] != _action[f][_action[g][x]]) {
            throw Error(ErrorKind::NotAPresheaf,
                        "P(" + cat.arrow_name(g) + "∘" + cat.arrow_name(f) + ") != P("
                            + cat.arrow_name(f) + ")P(" + cat.arrow_name(g) + ") at "
                            + _elements[cat.cod(g)][x]);
          }
        }
      }
    }
  }

  std::optional<Index> Presheaf::find_element(Index c, std::string_view name) const {
    auto const& el = _elements[c];
    auto        it = std::find(el.begin(), el.end(), name);
    if (it == el.end()) {
      return std::nullopt;
    }
    return static_cast<Index>(it - el.begin());
  }

  Index Presheaf::element(Index c, std::string_view name) const {
    auto x = find_element(c, name);
    if (!x) {
      throw Error(ErrorKind::UnknownElement,
                  "'" + std::string(name) + "' at " + category().object_name(c));
    }
    return *x;
  }

  std::size_t Presheaf::total_size() const {
    std::size_t n = 0;
    for (auto const& e : _elements) {
      n += e.size();
    }
    return n;
  }

  // ---------------------------------------------------------------------------
  // Natural transformations

  bool is_natural(Presheaf const&              source,
                  Presheaf const&              target,
                  NaturalTransformation const& n,
                  std::string*                 witness) {
    require_same_site(source.site(), target.site());
    auto const& cat = source.category();
    if (n.components.size() != cat.object_count()) {
      if (witness) *witness = "wrong number of components";
      return false;
    }
    for (Index c = 0; c < cat.object_count(); ++c) {
      if (n.components[c].size() != source.size(c)) {
        if (witness) *witness = "component at " + cat.object_name(c) + " has wrong size";
        return false;
      }
      for (Index v : n.components[c]) {
        if (v >= target.size(c)) {
          if (witness) *witness = "component at " + cat.object_name(c) + " out of range";
          return false;
        }
      }
    }
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      Index const c = cat.cod(f);
      Index const d = cat.dom(f);
      for (Index p = 0; p < source.size(c); ++p) {
        if (target.act(f, n.components[c][p]) != n.components[d][source.act(f, p)]) {
          if (witness) *witness = "arrow " + cat.arrow_name(f) + " at " + source.name(c, p);
          return false;
        }
      }
    }
    return true;
  }

  std::vector<NaturalTransformation>
  enumerate_nat_trans(Presheaf const& source, Presheaf const& target, std::size_t limit) {
    require_same_site(source.site(), target.site());
    auto const&     cat = source.category();
    VarLayout const layout(source);
    std::vector<Index> var_object(layout.count);
    for (Index c = 0; c < cat.object_count(); ++c) {
      for (Index p = 0; p < source.size(c); ++p) {
        var_object[layout.offset[c] + p] = c;
      }
    }
    // (arrow f, var at cod, var at dom) listed under the later variable.
    struct Constraint {
      Index       f;
      std::size_t hi;
      std::size_t lo_or_other;
      bool        hi_is_cod;
    };
    std::vector<std::vector<Constraint>> at(layout.count);
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      if (cat.is_identity(f)) {
        continue;
      }
      Index const c = cat.cod(f);
      Index const d = cat.dom(f);
      for (Index p = 0; p < source.size(c); ++p) {
        std::size_t const vc = layout.offset[c] + p;
        std::size_t const vd = layout.offset[d] + source.act(f, p);
        std::size_t const hi = std::max(vc, vd);
        at[hi].push_back(Constraint{f, vc, vd, true});
      }
    }
    std::vector<NaturalTransformation> out;
    for (Index c = 0; c < cat.object_count(); ++c) {
      if (source.size(c) > 0 && target.size(c) == 0) {
        return out;
      }
    }
    std::vector<Index> value(layout.count, 0);
    auto consistent = [&](std::size_t v) {
      for (auto const& k : at[v]) {
        // k.hi holds the cod-side variable, k.lo_or_other the dom-side one.
        if (target.act(k.f, value[k.hi]) != value[k.lo_or_other]) {
          return false;
        }
      }
      return true;
    };
    auto emit = [&] {
      NaturalTransformation n;
      n.components.resize(cat.object_count());
      for (Index c = 0; c < cat.object_count(); ++c) {
        n.components[c].assign(value.begin() + static_cast<std::ptrdiff_t>(layout.offset[c]),
                               value.begin()
                                   + static_cast<std::ptrdiff_t>(layout.offset[c] + source.size(c)));
      }
      out.push_back(std::move(n));
      if (limit != 0 && out.size() > limit) {
        throw Error(ErrorKind::TooLarge, "more than " + std::to_string(limit)
                                             + " natural transformations");
      }
    };
    if (layout.count == 0) {
      emit();
      return out;
    }
    // Iterative depth-first search.
    std::size_t v = 0;
    value[0]      = 0;
    while (true) {
      std::size_t const dom_size = target.size(var_object[v]);
      if (value[v] < dom_size && consistent(v)) {
        if (v + 1 == layout.count) {
          emit();
          ++value[v];
        } else {
          ++v;
          value[v] = 0;
        }
        continue;
      }
      if (value[v] < dom_size) {
        ++value[v];
        continue;
      }
      if (v == 0) {
        break;
      }
      --v;
      ++value[v];
    }
    return out;
  }

  Presheaf terminal_presheaf(Site const& site) {
    std::vector<std::vector<std::string>> el(site->object_count(), {"*"});
    std::vector<std::vector<Index>>       act(site->arrow_count(), {0});
    return Presheaf(site, std::move(el), std::move(act));
  }

  Presheaf empty_presheaf(Site const& site) {
    return Presheaf(site, std::vector<std::vector<std::string>>(site->object_count()),
                    std::vector<std::vector<Index>>(site->arrow_count()));
  }

  Presheaf yoneda_presheaf(Site const& site, Index c) {
    auto const& cat = *site;
    if (c >= cat.object_count()) {
      throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
    }
    std::vector<std::vector<Index>>       homs(cat.object_count());
    std::vector<std::vector<std::string>> el(cat.object_count());
    for (Index d = 0; d < cat.object_count(); ++d) {
      homs[d] = cat.hom(d, c);
      for (Index g : homs[d]) {
        el[d].push_back(cat.arrow_name(g));
      }
    }
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      auto const& src = homs[cat.cod(f)];
      auto const& dst = homs[cat.dom(f)];
      for (Index g : src) {
        Index const gf = cat.compose(g, f);
        act[f].push_back(static_cast<Index>(std::find(dst.begin(), dst.end(), gf) - dst.begin()));
      }
    }
    return Presheaf(site, std::move(el), std::move(act));
  }

  Presheaf coproduct(Presheaf const& a, Presheaf const& b) {
    require_same_site(a.site(), b.site());
    auto const&                           cat = a.category();
    std::vector<std::vector<std::string>> el(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      el[c] = a.elements(c);
      for (auto name : b.elements(c)) {
        while (std::find(el[c].begin(), el[c].end(), name) != el[c].end()) {
          name += "'";
        }
        el[c].push_back(name);
      }
    }
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      act[f] = a.action(f);
      auto const shift = static_cast<Index>(a.size(cat.dom(f)));
      for (Index y : b.action(f)) {
        act[f].push_back(y + shift);
      }
    }
    return Presheaf(a.site(), std::move(el), std::move(act));
  }

  std::vector<std::vector<Index>> global_sections(Presheaf const& p) {
    auto const one = terminal_presheaf(p.site());
    std::vector<std::vector<Index>> out;
    for (auto const& n : enumerate_nat_trans(one, p)) {
      std::vector<Index> s;
      for (auto const& comp : n.components) {
        s.push_back(comp[0]);
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  // ---------------------------------------------------------------------------
  // Sieves

  bool is_sieve(FiniteCategory const& cat, Index c, std::uint64_t mask) {
    auto const& into = cat.arrows_into(c);
    for (std::size_t k = 0; k < into.size(); ++k) {
      if ((mask >> k & 1U) == 0) {
        continue;
      }
      Index const g = into[k];
      for (Index h : cat.arrows_into(cat.dom(g))) {
        Index const gh = cat.compose(g, h);
        if ((mask >> cat.position_into(gh) & 1U) == 0) {
          return false;
        }
      }
    }
    return true;
  }

  bool sieve_contains(FiniteCategory const& cat, Sieve const& s, Index arrow) {
    return cat.cod(arrow) == s.codomain && (s.mask >> cat.position_into(arrow) & 1U) != 0;
  }

  Sieve maximal_sieve(FiniteCategory const& cat, Index c) {
    check_into_size(cat, c);
    return Sieve{c, full_mask(cat.arrows_into(c).size())};
  }

  Sieve principal_sieve(FiniteCategory const& cat, Index f) {
    check_into_size(cat, cat.cod(f));
    Sieve s{cat.cod(f), 0};
    for (Index h : cat.arrows_into(cat.dom(f))) {
      s.mask |= std::uint64_t{1} << cat.position_into(cat.compose(f, h));
    }
    return s;
  }

  Sieve restrict_sieve(FiniteCategory const& cat, Index h, Sieve const& s) {
    if (cat.cod(h) != s.codomain) {
      throw Error(ErrorKind::CodMismatch, "sieve on " + cat.object_name(s.codomain)
                                              + " restricted along " + cat.arrow_name(h));
    }
    Index const d = cat.dom(h);
    check_into_size(cat, d);
    Sieve out{d, 0};
    auto const& into = cat.arrows_into(d);
    for (std::size_t k = 0; k < into.size(); ++k) {
      if (sieve_contains(cat, s, cat.compose(h, into[k]))) {
        out.mask |= std::uint64_t{1} << k;
      }
    }
    return out;
  }

  std::vector<Sieve> enumerate_sieves_by_filter(FiniteCategory const& cat, Index c) {
    if (c >= cat.object_count()) {
      throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
    }
    std::size_t const n = cat.arrows_into(c).size();
    if (n > 20) {
      throw Error(ErrorKind::TooLarge, "subset filtering over more than 20 arrows");
    }
    std::vector<Sieve> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      if (is_sieve(cat, c, m)) {
        out.push_back(Sieve{c, m});
      }
    }
    return out;
  }

  std::vector<Sieve> enumerate_sieves_by_closure(FiniteCategory const& cat, Index c) {
    if (c >= cat.object_count()) {
      throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
    }
    check_into_size(cat, c);
    // Every sieve is the union of the principal sieves of its members.
    std::vector<std::uint64_t> principals;
    for (Index f : cat.arrows_into(c)) {
      principals.push_back(principal_sieve(cat, f).mask);
    }
    std::unordered_set<std::uint64_t> seen{0};
    std::queue<std::uint64_t>         todo;
    todo.push(0);
    while (!todo.empty()) {
      auto const m = todo.front();
      todo.pop();
      for (auto p : principals) {
        if (seen.insert(m | p).second) {
          todo.push(m | p);
        }
      }
    }
    std::vector<std::uint64_t> masks(seen.begin(), seen.end());
    std::sort(masks.begin(), masks.end());
    std::vector<Sieve> out;
    for (auto m : masks) {
      out.push_back(Sieve{c, m});
    }
    return out;
  }

  std::vector<Sieve> enumerate_sieves(FiniteCategory const& cat, Index c) {
    if (c >= cat.object_count()) {
      throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(c));
    }
    if (cat.arrows_into(c).size() <= 20) {
      return enumerate_sieves_by_filter(cat, c);
    }
    return enumerate_sieves_by_closure(cat, c);
  }

  std::string default_sieve_name(FiniteCategory const& cat, Sieve const& s) {
    auto const& into = cat.arrows_into(s.codomain);
    if (s.mask == full_mask(into.size())) {
      return "1";
    }
    if (s.mask == 0) {
      return "0";
    }
    std::string out = "{";
    for (std::size_t k = 0; k < into.size(); ++k) {
      if ((s.mask >> k & 1U) != 0) {
        if (out.size() > 1) {
          out += ",";
        }
        out += cat.arrow_name(into[k]);
      }
    }
    return out + "}";
  }

  // ---------------------------------------------------------------------------
  // OmegaPresheaf

  OmegaPresheaf::OmegaPresheaf(Site site, SieveNamer const& namer) : _site(std::move(site)) {
    auto const& cat = *_site;
    std::size_t const m = cat.object_count();
    _sieves.resize(m);
    _algebra.resize(m);
    std::vector<std::vector<std::string>> names(m);
    for (Index c = 0; c < m; ++c) {
      check_into_size(cat, c);
      _sieves[c]         = enumerate_sieves(cat, c);
      auto&       h      = _algebra[c];
      auto const& sieves = _sieves[c];
      std::size_t const n = sieves.size();
      for (auto const& s : sieves) {
        h.names.push_back(namer(cat, s));
      }
      names[c] = h.names;
      h.meet.resize(n * n);
      h.join.resize(n * n);
      h.imp.resize(n * n);
      for (Index a = 0; a < n; ++a) {
        for (Index b = 0; b < n; ++b) {
          h.meet[a * n + b] = index_of(c, sieves[a].mask & sieves[b].mask);
          h.join[a * n + b] = index_of(c, sieves[a].mask | sieves[b].mask);
          // S ⇒ R = {f : f*S ⊆ f*R}
          std::uint64_t imp  = 0;
          auto const&   into = cat.arrows_into(c);
          for (std::size_t k = 0; k < into.size(); ++k) {
            auto const fs = restrict_sieve(cat, into[k], sieves[a]).mask;
            auto const fr = restrict_sieve(cat, into[k], sieves[b]).mask;
            if ((fs & ~fr) == 0) {
              imp |= std::uint64_t{1} << k;
            }
          }
          h.imp[a * n + b] = index_of(c, imp);
        }
      }
      h.bottom = index_of(c, 0);
      h.top    = index_of(c, full_mask(cat.arrows_into(c).size()));
    }
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      Index const c = cat.cod(f);
      Index const d = cat.dom(f);
      for (auto const& s : _sieves[c]) {
        act[f].push_back(index_of(d, restrict_sieve(cat, f, s).mask));
      }
    }
    _presheaf = Presheaf(_site, std::move(names), std::move(act));
  }

  Index OmegaPresheaf::index_of(Index c, std::uint64_t mask) const {
    auto const& s  = _sieves[c];
    auto        it = std::lower_bound(s.begin(), s.end(), mask,
                                      [](Sieve const& x, std::uint64_t m) { return x.mask < m; });
    if (it == s.end() || it->mask != mask) {
      throw Error(ErrorKind::UnknownElement, "mask is not a sieve on " + _site->object_name(c));
    }
    return static_cast<Index>(it - s.begin());
  }

  std::vector<Index> OmegaPresheaf::true_section() const {
    std::vector<Index> out;
    for (auto const& h : _algebra) {
      out.push_back(h.top);
    }
    return out;
  }

  Report OmegaPresheaf::verify() const {
    Report      r;
    auto const& cat = *_site;
    for (Index c = 0; c < cat.object_count(); ++c) {
      r.append(check_heyting(_algebra[c]), "Ω(" + cat.object_name(c) + ").");
    }
    std::string w;
    for (Index f = 0; f < cat.arrow_count() && w.empty(); ++f) {
      auto const& hc = _algebra[cat.cod(f)];
      auto const& hd = _algebra[cat.dom(f)];
      auto const  n  = static_cast<Index>(hc.size());
      if (restrict(f, hc.top) != hd.top || restrict(f, hc.bottom) != hd.bottom) {
        w = cat.arrow_name(f) + " bounds";
      }
      for (Index a = 0; a < n && w.empty(); ++a) {
        for (Index b = 0; b < n; ++b) {
          if (restrict(f, hc.meet_of(a, b)) != hd.meet_of(restrict(f, a), restrict(f, b))
              || restrict(f, hc.join_of(a, b)) != hd.join_of(restrict(f, a), restrict(f, b))
              || restrict(f, hc.imp_of(a, b)) != hd.imp_of(restrict(f, a), restrict(f, b))) {
            w = cat.arrow_name(f) + " at " + hc.names[a] + "," + hc.names[b];
            break;
          }
        }
      }
    }
    r.add("restrictions are Heyting morphisms", w.empty(), w);
    return r;
  }

  // ---------------------------------------------------------------------------
  // Subobjects

  bool is_subpresheaf(Presheaf const& p, Subpresheaf const& q) {
    auto const& cat = p.category();
    if (q.member.size() != cat.object_count()) {
      return false;
    }
    for (Index c = 0; c < cat.object_count(); ++c) {
      if (q.member[c].size() != p.size(c)) {
        return false;
      }
    }
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      for (Index x = 0; x < p.size(cat.cod(f)); ++x) {
        if (q.member[cat.cod(f)][x] && !q.member[cat.dom(f)][p.act(f, x)]) {
          return false;
        }
      }
    }
    return true;
  }

  bool subset_of(Subpresheaf const& a, Subpresheaf const& b) {
    for (std::size_t c = 0; c < a.member.size(); ++c) {
      for (std::size_t x = 0; x < a.member[c].size(); ++x) {
        if (a.member[c][x] && !b.member[c][x]) {
          return false;
        }
      }
    }
    return true;
  }

  std::vector<Subpresheaf> enumerate_subpresheaves(Presheaf const& p) {
    auto const&     cat = p.category();
    VarLayout const layout(p);
    std::vector<std::pair<Index, Index>> var(layout.count);
    for (Index c = 0; c < cat.object_count(); ++c) {
      for (Index x = 0; x < p.size(c); ++x) {
        var[layout.offset[c] + x] = {c, x};
      }
    }
    // Under each later variable: pairs (cod var, dom var) with cod ⇒ dom.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> at(layout.count);
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      if (cat.is_identity(f)) {
        continue;
      }
      for (Index x = 0; x < p.size(cat.cod(f)); ++x) {
        std::size_t const vc = layout.offset[cat.cod(f)] + x;
        std::size_t const vd = layout.offset[cat.dom(f)] + p.act(f, x);
        at[std::max(vc, vd)].emplace_back(vc, vd);
      }
    }
    std::vector<Subpresheaf> out;
    std::vector<int>         value(layout.count, 0);
    auto emit = [&] {
      Subpresheaf q;
      q.member.resize(cat.object_count());
      for (Index c = 0; c < cat.object_count(); ++c) {
        q.member[c].resize(p.size(c));
        for (Index x = 0; x < p.size(c); ++x) {
          q.member[c][x] = value[layout.offset[c] + x] != 0;
        }
      }
      out.push_back(std::move(q));
    };
    if (layout.count == 0) {
      emit();
      return out;
    }
    auto consistent = [&](std::size_t v) {
      for (auto [vc, vd] : at[v]) {
        if (value[vc] != 0 && value[vd] == 0) {
          return false;
        }
      }
      return true;
    };
    std::size_t v = 0;
    while (true) {
      if (value[v] < 2 && consistent(v)) {
        if (v + 1 == layout.count) {
          emit();
          ++value[v];
        } else {
          ++v;
          value[v] = 0;
        }
        continue;
      }
      if (value[v] < 2) {
        ++value[v];
        continue;
      }
      if (v == 0) {
        break;
      }
      --v;
      ++value[v];
    }
    return out;
  }

  NaturalTransformation
  classifying_map(Presheaf const& p, Subpresheaf const& q, OmegaPresheaf const& omega) {
    require_same_site(p.site(), omega.site());
    auto const&           cat = p.category();
    NaturalTransformation n;
    n.components.resize(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const& into = cat.arrows_into(c);
      for (Index x = 0; x < p.size(c); ++x) {
        std::uint64_t mask = 0;
        for (std::size_t k = 0; k < into.size(); ++k) {
          if (q.member[cat.dom(into[k])][p.act(into[k], x)]) {
            mask |= std::uint64_t{1} << k;
          }
        }
        n.components[c].push_back(omega.index_of(c, mask));
      }
    }
    return n;
  }

  Subpresheaf pullback_of_true(Presheaf const&              p,
                               NaturalTransformation const& n,
                               OmegaPresheaf const&         omega) {
    auto const& cat = p.category();
    Subpresheaf q;
    q.member.resize(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      for (Index x = 0; x < p.size(c); ++x) {
        q.member[c].push_back(n.components[c][x] == omega.top(c));
      }
    }
    return q;
  }

  Index SubobjectLattice::index_of(Subpresheaf const& q) const {
    auto it = std::lower_bound(subobjects.begin(), subobjects.end(), q);
    if (it == subobjects.end() || !(*it == q)) {
      throw Error(ErrorKind::UnknownElement, "not a subpresheaf");
    }
    return static_cast<Index>(it - subobjects.begin());
  }

  namespace {
    std::string subobject_name(Presheaf const& p, Subpresheaf const& q) {
      auto const& cat = p.category();
      std::string out = "{";
      for (Index c = 0; c < cat.object_count(); ++c) {
        if (c > 0) {
          out += ";";
        }
        out += cat.object_name(c) + ":";
        bool first = true;
        for (Index x = 0; x < p.size(c); ++x) {
          if (q.member[c][x]) {
            out += (first ? "" : ",") + p.name(c, x);
            first = false;
          }
        }
      }
      return out + "}";
    }
  }  // namespace

  SubobjectLattice subobject_lattice(Presheaf const& p, OmegaPresheaf const& omega) {
    require_same_site(p.site(), omega.site());
    auto const&      cat = p.category();
    SubobjectLattice s;
    s.subobjects = enumerate_subpresheaves(p);
    std::string w;
    for (auto const& q : s.subobjects) {
      s.classifying.push_back(classifying_map(p, q, omega));
      if (!(pullback_of_true(p, s.classifying.back(), omega) == q) && w.empty()) {
        w = subobject_name(p, q);
      }
    }
    s.report.add("pullback of true recovers every subobject", w.empty(), w);

    auto maps = enumerate_nat_trans(p, omega.presheaf());
    auto cls  = s.classifying;
    std::sort(maps.begin(), maps.end());
    std::sort(cls.begin(), cls.end());
    s.report.add("classifying maps are exactly the maps P → Ω", maps == cls,
                 std::to_string(maps.size()) + " maps vs " + std::to_string(cls.size())
                     + " subobjects");

    std::size_t const n = s.subobjects.size();
    auto&             t = s.tables;
    t.meet.resize(n * n);
    t.join.resize(n * n);
    t.imp.resize(n * n);
    for (auto const& q : s.subobjects) {
      t.names.push_back(subobject_name(p, q));
    }
    std::string wj;
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        NaturalTransformation m, j, i;
        m.components.resize(cat.object_count());
        j.components.resize(cat.object_count());
        i.components.resize(cat.object_count());
        for (Index c = 0; c < cat.object_count(); ++c) {
          auto const& h = omega.algebra(c);
          for (Index x = 0; x < p.size(c); ++x) {
            Index const u = s.classifying[a].components[c][x];
            Index const v = s.classifying[b].components[c][x];
            m.components[c].push_back(h.meet_of(u, v));
            j.components[c].push_back(h.join_of(u, v));
            i.components[c].push_back(h.imp_of(u, v));
          }
        }
        auto const qm = pullback_of_true(p, m, omega);
        auto const qj = pullback_of_true(p, j, omega);
        t.meet[a * n + b] = s.index_of(qm);
        t.join[a * n + b] = s.index_of(qj);
        t.imp[a * n + b]  = s.index_of(pullback_of_true(p, i, omega));
        for (Index c = 0; c < cat.object_count() && wj.empty(); ++c) {
          for (Index x = 0; x < p.size(c); ++x) {
            bool const qa = s.subobjects[a].member[c][x];
            bool const qb = s.subobjects[b].member[c][x];
            if (qm.member[c][x] != (qa && qb) || qj.member[c][x] != (qa || qb)) {
              wj = t.names[a] + "," + t.names[b];
              break;
            }
          }
        }
      }
    }
    s.report.add("meet is intersection and join is union", wj.empty(), wj);
    Subpresheaf none, all;
    for (Index c = 0; c < cat.object_count(); ++c) {
      none.member.emplace_back(p.size(c), false);
      all.member.emplace_back(p.size(c), true);
    }
    t.bottom = s.index_of(none);
    t.top    = s.index_of(all);
    s.report.append(check_heyting(t), "Sub(P).");
    return s;
  }

}  // namespace nctopos
