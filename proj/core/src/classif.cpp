#include "nctopos/classif.hpp"

#include <algorithm>
#include <cmath>

namespace nctopos {

  namespace {

    Presheaf underlying(Site const&                          site,
                        std::vector<NCHeytingAlgebra> const& at,
                        std::vector<std::vector<Index>>      act) {
      std::vector<std::vector<std::string>> el;
      for (auto const& a : at) {
        el.push_back(a.base.names);
      }
      return Presheaf(site, std::move(el), std::move(act));
    }

    // All lattice isomorphisms from a commutative quotient onto Ω(C).
    std::vector<std::vector<Index>> lattice_isos(SkewLattice const& q, HeytingTables const& o) {
      std::vector<std::vector<Index>> out;
      auto const                      n = static_cast<Index>(q.size());
      if (o.size() != n) {
        return out;
      }
      std::vector<Index> f(n, 0);
      std::vector<bool>  used(n, false);
      auto ok = [&](Index x) {
        for (Index a = 0; a <= x; ++a) {
          for (Index b = 0; b <= x; ++b) {
            Index const m = q.meet_of(a, b), j = q.join_of(a, b);
            if (m <= x && f[m] != o.meet_of(f[a], f[b])) return false;
            if (j <= x && f[j] != o.join_of(f[a], f[b])) return false;
          }
        }
        return true;
      };
      Index x = 0;
      while (true) {
        if (f[x] < n && !used[f[x]]) {
          used[f[x]] = true;
          if (ok(x)) {
            if (x + 1 == n) {
              out.push_back(f);
              used[f[x]] = false;
              ++f[x];
            } else {
              ++x;
              f[x] = 0;
            }
            continue;
          }
          used[f[x]] = false;
          ++f[x];
          continue;
        }
        if (f[x] < n) {
          ++f[x];
          continue;
        }
        if (x == 0) break;
        --x;
        used[f[x]] = false;
        ++f[x];
      }
      return out;
    }

    std::string map_name(Classifier const& c, NaturalTransformation const& n) {
      auto const& cat = c.H.presheaf().category();
      std::string s;
      for (Index o = 0; o < cat.object_count(); ++o) {
        if (o > 0) s += ";";
        for (std::size_t i = 0; i < n.components[o].size(); ++i) {
          s += (i > 0 ? "," : "") + c.H.at(o).name(n.components[o][i]);
        }
      }
      return s;
    }

  }  // namespace

  NCHPresheaf::NCHPresheaf(Site                            site,
                           std::vector<NCHeytingAlgebra>   at,
                           std::vector<std::vector<Index>> act)
      : _at(std::move(at)) {
    _presheaf = underlying(site, _at, std::move(act));
  }

  Report verify_nch_presheaf(NCHPresheaf const& h) {
    Report      r;
    auto const& cat = h.presheaf().category();
    for (Index c = 0; c < cat.object_count(); ++c) {
      r.append(verify_nc_heyting(h.at(c)), "H(" + cat.object_name(c) + ").");
    }
    std::string w, wt;
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      auto const& a = h.at(cat.cod(f));
      auto const& b = h.at(cat.dom(f));
      auto const  n = static_cast<Index>(a.size());
      auto const  fn = cat.arrow_name(f);
      if (h.act(f, a.bottom()) != b.bottom() || h.act(f, a.t) != b.t) {
        if (w.empty()) w = fn + " on 0 or t";
      }
      for (Index x = 0; x < n && w.empty(); ++x) {
        for (Index y = 0; y < n; ++y) {
          Index const fx = h.act(f, x), fy = h.act(f, y);
          if (h.act(f, a.meet_of(x, y)) != b.meet_of(fx, fy)
              || h.act(f, a.join_of(x, y)) != b.join_of(fx, fy)
              || h.act(f, a.imp_of(x, y)) != b.imp_of(fx, fy)) {
            w = fn + " at " + a.name(x) + "," + a.name(y);
            break;
          }
        }
      }
      for (Index x = 0; x < n && wt.empty(); ++x) {
        if (a.base.d_related(x, a.t) && !b.base.d_related(h.act(f, x), b.t)) {
          wt = fn + " sends " + a.name(x) + " out of the top class";
        }
      }
    }
    r.add("restrictions are NC Heyting morphisms", w.empty(), w);
    r.add("restrictions send tops to tops", wt.empty(), wt);
    return r;
  }

  Classifier make_classifier(NCHPresheaf h, OmegaPresheaf omega) {
    require_same_site(h.site(), omega.site());
    Classifier c{std::move(h), std::move(omega), {}, {}, {}, {}, {}, {}};
    auto const& cat = c.H.presheaf().category();
    std::size_t const m = cat.object_count();
    c.report = verify_nch_presheaf(c.H);
    if (!c.report.passed()) {
      for (auto const& k : c.report.checks()) {
        if (!k.passed) {
          throw Error(ErrorKind::NotAClassifier, k.name + ": " + k.witness);
        }
      }
    }

    std::vector<std::vector<std::string>> tnames(m);
    c.tops.resize(m);
    c.top_position.resize(m);
    for (Index o = 0; o < m; ++o) {
      auto const& a = c.H.at(o);
      c.tops[o]     = top_class(a);
      c.top_position[o].assign(a.size(), kNone);
      for (std::size_t i = 0; i < c.tops[o].size(); ++i) {
        c.top_position[o][c.tops[o][i]] = static_cast<Index>(i);
        tnames[o].push_back(a.name(c.tops[o][i]));
      }
    }
    std::vector<std::vector<Index>> tact(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      for (Index x : c.tops[cat.cod(f)]) {
        tact[f].push_back(c.top_position[cat.dom(f)][c.H.act(f, x)]);
      }
    }
    c.T = Presheaf(c.H.site(), std::move(tnames), std::move(tact));

    // Objectwise candidate isomorphisms H(C)/D → Ω(C), then a natural choice.
    std::vector<GreenDecomposition>              green(m);
    std::vector<std::vector<std::vector<Index>>> isos(m);
    for (Index o = 0; o < m; ++o) {
      green[o] = green_decomposition(c.H.at(o).base);
      isos[o]  = lattice_isos(green[o].quotient, c.omega.algebra(o));
      if (isos[o].empty()) {
        throw Error(ErrorKind::NotAClassifier,
                    "H(" + cat.object_name(o) + ")/D is not isomorphic to Ω("
                        + cat.object_name(o) + ")");
      }
    }
    std::vector<std::size_t> choice(m, 0);
    auto natural_upto = [&](Index o) -> std::string {
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        Index const a = cat.cod(f), b = cat.dom(f);
        if (std::max(a, b) != o) continue;
        auto const& ia = isos[a][choice[a]];
        auto const& ib = isos[b][choice[b]];
        for (Index x = 0; x < c.H.at(a).size(); ++x) {
          Index const lhs = ib[green[b].projection[c.H.act(f, x)]];
          Index const rhs = c.omega.restrict(f, ia[green[a].projection[x]]);
          if (lhs != rhs) {
            return cat.arrow_name(f);
          }
        }
      }
      return {};
    };
    std::string last_failure;
    Index       o     = 0;
    bool        found = false;
    while (true) {
      if (choice[o] < isos[o].size()) {
        auto const w = natural_upto(o);
        if (w.empty()) {
          if (o + 1 == m) {
            found = true;
            break;
          }
          ++o;
          choice[o] = 0;
          continue;
        }
        last_failure = w;
        ++choice[o];
        continue;
      }
      if (o == 0) break;
      --o;
      ++choice[o];
    }
    if (!found) {
      throw Error(ErrorKind::NotAClassifier, "no natural isomorphism H/D ≅ Ω; arrow " + last_failure);
    }
    c.report.add("H/D ≅ Ω is natural", true);

    c.shadow.resize(m);
    c.section.resize(m);
    std::string wi, ws;
    for (Index k = 0; k < m; ++k) {
      auto const& a   = c.H.at(k);
      auto const& iso = isos[k][choice[k]];
      auto const& om  = c.omega.algebra(k);
      for (Index x = 0; x < a.size(); ++x) {
        c.shadow[k].push_back(iso[green[k].projection[x]]);
      }
      for (Index x = 0; x < a.size() && wi.empty(); ++x) {
        for (Index y = 0; y < a.size(); ++y) {
          if (c.shadow[k][a.imp_of(x, y)] != om.imp_of(c.shadow[k][x], c.shadow[k][y])) {
            wi = cat.object_name(k) + ": " + a.name(x) + "," + a.name(y);
            break;
          }
        }
      }
      c.section[k].assign(om.size(), kNone);
      for (Index x = 0; x < a.size(); ++x) {
        if (a.base.leq(x, a.t)) {
          c.section[k][c.shadow[k][x]] = x;
        }
      }
      for (Index s = 0; s < om.size(); ++s) {
        if (c.section[k][s] == kNone && ws.empty()) {
          ws = cat.object_name(k) + ": " + om.names[s];
        }
      }
    }
    c.report.add("shadow preserves →", wi.empty(), wi);
    c.report.add("t↓ meets every D-class", ws.empty(), ws);
    return c;
  }

  ClassifierBuild build_classifier(Site const&               site,
                                   Presheaf const&           p,
                                   std::vector<Index> const& d,
                                   SieveNamer const&         namer) {
    require_same_site(site, p.site());
    auto const& cat = *site;
    if (d.size() != cat.object_count()) {
      throw Error(ErrorKind::NoGlobalSection, "d needs one element per object");
    }
    for (Index o = 0; o < cat.object_count(); ++o) {
      if (d[o] >= p.size(o)) {
        throw Error(ErrorKind::NoGlobalSection, "d has no element at " + cat.object_name(o));
      }
    }
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      if (p.act(f, d[cat.cod(f)]) != d[cat.dom(f)]) {
        throw Error(ErrorKind::NoGlobalSection, "d is not natural along " + cat.arrow_name(f));
      }
    }
    OmegaPresheaf   omega(site, namer);
    ClassifierBuild b;
    std::vector<NCHeytingAlgebra> at;
    for (Index o = 0; o < cat.object_count(); ++o) {
      Embedding e;
      for (Index a : cat.arrows_into(o)) {
        e.index_names.push_back(cat.arrow_name(a));
      }
      for (auto const& s : omega.sieves(o)) {
        e.support.push_back(s.mask);
      }
      std::vector<Index> dd(e.index_names.size(), d[o]);
      b.parts.push_back(pullback_construct(omega.algebra(o), p.elements(o), e, dd));
      at.push_back(b.parts.back().algebra);
    }
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      Index const c  = cat.cod(f);
      Index const dd = cat.dom(f);
      auto const& pc = b.parts[c];
      auto const& pd = b.parts[dd];
      auto const& into = cat.arrows_into(dd);
      for (Index x = 0; x < pc.algebra.size(); ++x) {
        std::vector<Index> coords(into.size());
        for (std::size_t k = 0; k < into.size(); ++k) {
          Index const v = pc.coords[x][cat.position_into(cat.compose(f, into[k]))];
          coords[k]     = v == 0 ? 0 : p.act(f, v - 1) + 1;
        }
        Index const y = pd.find(omega.restrict(f, pc.shadow[x]), coords);
        if (y == kNone) {
          throw Error(ErrorKind::NotAPresheaf, "H(" + cat.arrow_name(f) + ") leaves H("
                                                   + cat.object_name(dd) + ") at "
                                                   + pc.algebra.name(x));
        }
        act[f].push_back(y);
      }
    }
    b.classifier = make_classifier(NCHPresheaf(site, std::move(at), std::move(act)), omega);
    return b;
  }

  Classifier fuse_classifier(ClassifierBuild const& build) {
    auto const& old = build.classifier;
    auto const& cat = old.H.presheaf().category();
    std::vector<FusedAlgebra>     fused;
    std::vector<NCHeytingAlgebra> at;
    for (Index o = 0; o < cat.object_count(); ++o) {
      std::uint64_t keep = 0;
      auto const&   into = cat.arrows_into(o);
      for (std::size_t k = 0; k < into.size(); ++k) {
        if (!cat.is_identity(into[k])) {
          keep |= std::uint64_t{1} << k;
        }
      }
      fused.push_back(fuse_coordinates(build.parts[o], keep));
      at.push_back(fused.back().algebra);
    }
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index f = 0; f < cat.arrow_count(); ++f) {
      auto const& fc = fused[cat.cod(f)];
      auto const& fd = fused[cat.dom(f)];
      act[f].assign(fc.algebra.size(), kNone);
      for (Index x = 0; x < fc.projection.size(); ++x) {
        Index const img = fd.projection[old.H.act(f, x)];
        Index&      slot = act[f][fc.projection[x]];
        if (slot != kNone && slot != img) {
          throw Error(ErrorKind::NotACongruence, "H(" + cat.arrow_name(f)
                                                     + ") does not descend at "
                                                     + old.H.at(cat.cod(f)).name(x));
        }
        slot = img;
      }
    }
    return make_classifier(NCHPresheaf(old.H.site(), std::move(at), std::move(act)), old.omega);
  }

  // ---------------------------------------------------------------------------

  NatOps pointwise_nat_ops(Presheaf const&              p,
                           Classifier const&            c,
                           NaturalTransformation const& n,
                           NaturalTransformation const& m) {
    require_same_site(p.site(), c.H.site());
    auto const& cat = p.category();
    for (auto const* t : {&n, &m}) {
      if (t->components.size() != cat.object_count()) {
        throw Error(ErrorKind::TargetMismatch, "wrong number of components");
      }
      for (Index o = 0; o < cat.object_count(); ++o) {
        if (t->components[o].size() != p.size(o)) {
          throw Error(ErrorKind::TargetMismatch, "component size at " + cat.object_name(o));
        }
        for (Index v : t->components[o]) {
          if (v >= c.H.at(o).size()) {
            throw Error(ErrorKind::TargetMismatch, "value outside H(" + cat.object_name(o) + ")");
          }
        }
      }
    }
    NatOps out;
    for (auto* t : {&out.meet, &out.join, &out.imp}) {
      t->components.resize(cat.object_count());
    }
    for (Index o = 0; o < cat.object_count(); ++o) {
      auto const& a = c.H.at(o);
      for (Index x = 0; x < p.size(o); ++x) {
        Index const u = n.components[o][x], v = m.components[o][x];
        out.meet.components[o].push_back(a.meet_of(u, v));
        out.join.components[o].push_back(a.join_of(u, v));
        out.imp.components[o].push_back(a.imp_of(u, v));
      }
    }
    std::string w;
    out.report.add("N∧N' natural", is_natural(p, c.H.presheaf(), out.meet, &w), w);
    out.report.add("N∨N' natural", is_natural(p, c.H.presheaf(), out.join, &w), w);
    out.report.add("N→N' natural", is_natural(p, c.H.presheaf(), out.imp, &w), w);
    return out;
  }

  Index SubH::index_of(NaturalTransformation const& n) const {
    auto it = std::lower_bound(maps.begin(), maps.end(), n);
    if (it == maps.end() || !(*it == n)) {
      return kNone;
    }
    return static_cast<Index>(it - maps.begin());
  }

  SubH sub_H(Presheaf const& p, Classifier const& c, double limit) {
    require_same_site(p.site(), c.H.site());
    auto const& cat  = p.category();
    double      cand = 1;
    for (Index o = 0; o < cat.object_count(); ++o) {
      cand *= std::pow(static_cast<double>(c.H.at(o).size()), static_cast<double>(p.size(o)));
    }
    if (cand > limit) {
      throw Error(ErrorKind::TooLarge, "Sub_H(P) has " + std::to_string(cand)
                                           + " candidate families; use the closed form");
    }
    SubH s;
    s.maps = enumerate_nat_trans(p, c.H.presheaf());
    for (auto const& n : s.maps) {
      Subpresheaf q;
      q.member.resize(cat.object_count());
      for (Index o = 0; o < cat.object_count(); ++o) {
        for (Index x = 0; x < p.size(o); ++x) {
          q.member[o].push_back(c.is_top(o, n.components[o][x]));
        }
      }
      s.q.push_back(std::move(q));
    }
    auto const k = static_cast<Index>(s.maps.size());
    auto&      a = s.algebra;
    a.base.meet.resize(std::size_t{k} * k);
    a.base.join.resize(std::size_t{k} * k);
    a.imp.resize(std::size_t{k} * k);
    for (auto const& n : s.maps) {
      a.base.names.push_back(map_name(c, n));
    }
    std::string wn;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        auto const ops = pointwise_nat_ops(p, c, s.maps[i], s.maps[j]);
        if (!ops.report.passed() && wn.empty()) {
          wn = a.base.names[i] + " and " + a.base.names[j];
        }
        a.base.meet[i * k + j] = s.index_of(ops.meet);
        a.base.join[i * k + j] = s.index_of(ops.join);
        a.imp[i * k + j]       = s.index_of(ops.imp);
      }
    }
    s.report.add("pointwise operations are natural", wn.empty(), wn);
    NaturalTransformation n0, nt;
    for (Index o = 0; o < cat.object_count(); ++o) {
      n0.components.emplace_back(p.size(o), c.H.at(o).bottom());
      nt.components.emplace_back(p.size(o), c.H.at(o).t);
    }
    a.base.bottom = s.index_of(n0);
    a.t           = s.index_of(nt);
    s.report.add("bottom is (∅, N_0)",
                 a.base.bottom != kNone
                     && std::all_of(s.q[a.base.bottom].member.begin(),
                                    s.q[a.base.bottom].member.end(),
                                    [](auto const& v) {
                                      return std::none_of(v.begin(), v.end(), [](bool b) { return b; });
                                    }));
    if (wn.empty() && a.t != kNone && a.base.bottom != kNone) {
      s.report.append(verify_nc_heyting(a), "Sub_H.");
      std::vector<Index> expected;
      for (Index i = 0; i < k; ++i) {
        bool all = true;
        for (auto const& v : s.q[i].member) {
          all = all && std::all_of(v.begin(), v.end(), [](bool b) { return b; });
        }
        if (all) expected.push_back(i);
      }
      bool const ok = s.report.passed() && top_class(a) == expected;
      s.report.add("top elements are the pairs (P, N) with N into T", ok,
                   ok ? "" : std::to_string(expected.size()) + " pairs land in T");
    } else {
      s.report.add("distinguished top (P, N_t) present", a.t != kNone);
    }
    return s;
  }

  SubHYoneda sub_H_yoneda(Classifier const& c, Index object) {
    auto const& cat = c.H.presheaf().category();
    if (object >= cat.object_count()) {
      throw Error(ErrorKind::UnknownObject, "object id " + std::to_string(object));
    }
    SubHYoneda  y;
    y.object    = object;
    y.algebra   = c.H.at(object);
    auto const& into = cat.arrows_into(object);
    std::string w;
    for (Index x = 0; x < y.algebra.size(); ++x) {
      std::uint64_t mask = 0;
      for (std::size_t k = 0; k < into.size(); ++k) {
        if (c.is_top(cat.dom(into[k]), c.H.act(into[k], x))) {
          mask |= std::uint64_t{1} << k;
        }
      }
      if (!is_sieve(cat, object, mask) && w.empty()) {
        w = y.algebra.name(x);
      }
      y.sieve.push_back(mask);
    }
    y.report.add("S(x) is a sieve", w.empty(), w);
    return y;
  }

  Report yoneda_consistency(Classifier const& c, Index object, double limit) {
    Report      r;
    auto const& cat = c.H.presheaf().category();
    auto const  yc  = yoneda_presheaf(c.H.site(), object);
    auto const  s   = sub_H(yc, c, limit);
    auto const  cf  = sub_H_yoneda(c, object);
    r.append(s.report, "enumerated.");
    r.append(cf.report, "closed form.");
    auto const&        a = cf.algebra;
    std::vector<Index> to(a.size(), kNone);
    std::string        w;
    for (Index x = 0; x < a.size(); ++x) {
      NaturalTransformation n;
      for (Index d = 0; d < cat.object_count(); ++d) {
        n.components.emplace_back();
        for (Index f : cat.hom(d, object)) {
          n.components[d].push_back(c.H.act(f, x));
        }
      }
      to[x] = s.index_of(n);
      if (to[x] == kNone) {
        if (w.empty()) w = "no map for " + a.name(x);
        continue;
      }
      auto const& q = s.q[to[x]];
      for (Index d = 0; d < cat.object_count(); ++d) {
        auto const h = cat.hom(d, object);
        for (std::size_t i = 0; i < h.size(); ++i) {
          bool const in_s = (cf.sieve[x] >> cat.position_into(h[i]) & 1U) != 0;
          if (q.member[d][i] != in_s && w.empty()) {
            w = "sieve of " + a.name(x) + " at " + cat.arrow_name(h[i]);
          }
        }
      }
    }
    r.add("x ↦ (S(x), H(-)(x)) lands in Sub_H(yC)", w.empty(), w);
    w.clear();
    if (s.maps.size() != a.size()) {
      w = std::to_string(s.maps.size()) + " vs " + std::to_string(a.size()) + " elements";
    }
    for (Index x = 0; x < a.size() && w.empty(); ++x) {
      for (Index y = 0; y < a.size() && w.empty(); ++y) {
        if (to[x] == kNone || to[y] == kNone) {
          w = "incomplete map";
          break;
        }
        if (to[a.meet_of(x, y)] != s.algebra.meet_of(to[x], to[y])
            || to[a.join_of(x, y)] != s.algebra.join_of(to[x], to[y])
            || to[a.imp_of(x, y)] != s.algebra.imp_of(to[x], to[y])) {
          w = a.name(x) + "," + a.name(y);
        }
      }
    }
    if (w.empty() && (to[a.t] != s.algebra.t || to[a.bottom()] != s.algebra.bottom())) {
      w = "t or 0 not preserved";
    }
    r.add("Sub_H(yC) ≅ H(C)", w.empty(), w);
    return r;
  }

  std::vector<std::vector<Index>> top_sections(Classifier const& c) {
    auto out = global_sections(c.T);
    for (auto& g : out) {
      for (Index o = 0; o < g.size(); ++o) {
        g[o] = c.tops[o][g[o]];
      }
    }
    return out;
  }

  ShadowProjection shadow_projection(SubH const& s, Presheaf const& p, Classifier const& c) {
    ShadowProjection out;
    auto const&      cat = p.category();
    out.sub              = subobject_lattice(p, c.omega);
    out.report.append(out.sub.report, "Sub(P).");
    auto const& st = out.sub.tables;
    auto const& a  = s.algebra;

    // (a) (Q, N) ↦ Q
    std::vector<bool> hit(out.sub.subobjects.size(), false);
    for (auto const& q : s.q) {
      out.to_sub.push_back(out.sub.index_of(q));
      hit[out.to_sub.back()] = true;
    }
    std::string w;
    for (std::size_t i = 0; i < hit.size() && w.empty(); ++i) {
      if (!hit[i]) w = st.names[i];
    }
    out.report.add("(Q,N) ↦ Q is surjective", w.empty(), w);
    w.clear();
    for (Index i = 0; i < a.size() && w.empty(); ++i) {
      for (Index j = 0; j < a.size(); ++j) {
        Index const u = out.to_sub[i], v = out.to_sub[j];
        if (out.to_sub[a.meet_of(i, j)] != st.meet_of(u, v)
            || out.to_sub[a.join_of(i, j)] != st.join_of(u, v)
            || out.to_sub[a.imp_of(i, j)] != st.imp_of(u, v)) {
          w = a.name(i) + "," + a.name(j);
          break;
        }
      }
    }
    if (w.empty() && (out.to_sub[a.bottom()] != st.bottom || out.to_sub[a.t] != st.top)) {
      w = "bounds";
    }
    out.report.add("(Q,N) ↦ Q is a morphism", w.empty(), w);

    // (b) the section Ω → t↓
    w.clear();
    for (Index o = 0; o < cat.object_count() && w.empty(); ++o) {
      for (Index v = 0; v < c.section[o].size(); ++v) {
        if (c.section[o][v] == kNone || c.shadow[o][c.section[o][v]] != v) {
          w = cat.object_name(o) + ": " + c.omega.algebra(o).names[v];
          break;
        }
      }
    }
    out.report.add("shadow ∘ i = id on Ω", w.empty(), w);
    w.clear();
    for (Index k = 0; k < out.sub.subobjects.size(); ++k) {
      NaturalTransformation n = out.sub.classifying[k];
      for (Index o = 0; o < cat.object_count(); ++o) {
        for (auto& v : n.components[o]) {
          v = c.section[o][v];
        }
      }
      Index const i = s.index_of(n);
      out.from_sub.push_back(i);
      if ((i == kNone || out.to_sub[i] != k) && w.empty()) {
        w = st.names[k];
      }
    }
    out.report.add("projection ∘ i = id on Sub(P)", w.empty(), w);

    // (c) per-section components Q_g
    out.sections = top_sections(c);
    w.clear();
    for (auto const& g : out.sections) {
      std::vector<Subpresheaf> comps;
      for (auto const& n : s.maps) {
        Subpresheaf q;
        q.member.resize(cat.object_count());
        for (Index o = 0; o < cat.object_count(); ++o) {
          for (Index x = 0; x < p.size(o); ++x) {
            q.member[o].push_back(n.components[o][x] == g[o]);
          }
        }
        if (!is_subpresheaf(p, q) && w.empty()) {
          w = map_name(c, n);
        }
        comps.push_back(std::move(q));
      }
      out.q_g.push_back(std::move(comps));
    }
    out.report.add("Q_g is a subpresheaf for every g ∈ Γ(T)", w.empty(), w);

    // (d) the classifier condition, established by make_classifier
    out.report.add("H/D ≅ Ω", c.report.passed("H/D ≅ Ω is natural"));
    return out;
  }

}  // namespace nctopos
