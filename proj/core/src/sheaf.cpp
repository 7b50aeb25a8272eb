#include "nctopos/sheaf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>

#include "nctopos/canonical.hpp"
#include "nctopos/parallel.hpp"

namespace nctopos {

  namespace {

    // Assignments v_i ∈ [0, size_i) over arrows a_i into one object such that
    // act(g, v_i) = v_j whenever a_j = a_i∘g, and color(dom a_i, v_i) equals
    // target_i unless that is kNone.
    template <typename Act, typename Color, typename Emit>
    void for_each_family(FiniteCategory const&     cat,
                         std::vector<Index> const& arrows,
                         std::vector<Index> const& sizes,
                         std::vector<Index> const& target,
                         Act&&                     act,
                         Color&&                   color,
                         Emit&&                    emit) {
      std::size_t const n = arrows.size();
      struct Link {
        std::size_t i, j;
        Index       g;
      };
      std::vector<std::vector<Link>> links(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          for (Index g : cat.hom(cat.dom(arrows[j]), cat.dom(arrows[i]))) {
            if (cat.compose(arrows[i], g) == arrows[j]) {
              links[std::max(i, j)].push_back({i, j, g});
            }
          }
        }
      }
      std::vector<Index> v(n, 0);
      if (n == 0) {
        emit(v);
        return;
      }
      std::vector<Index> next(n, 0);
      std::size_t        k = 0;
      while (true) {
        if (next[k] < sizes[k]) {
          v[k]    = next[k]++;
          bool ok = target[k] == kNone || color(cat.dom(arrows[k]), v[k]) == target[k];
          for (auto const& l : links[k]) {
            if (!ok) break;
            ok = act(l.g, v[l.i]) == v[l.j];
          }
          if (!ok) continue;
          if (k + 1 == n) {
            emit(v);
            continue;
          }
          ++k;
          next[k] = 0;
          continue;
        }
        if (k == 0) break;
        --k;
      }
    }

    std::vector<Index> sieve_arrows(FiniteCategory const& cat, Cover const& cover) {
      std::vector<Index> out;
      auto const&        into = cat.arrows_into(cover.object);
      for (std::size_t k = 0; k < into.size(); ++k) {
        if ((cover.mask >> k & 1U) != 0) out.push_back(into[k]);
      }
      return out;
    }

    // Target T index of H(a)(x) per sieve arrow, or kNone in classical mode.
    std::vector<Index> family_targets(CoverSystem const& sys, Cover const& cover,
                                      std::vector<Index> const& arrows) {
      std::vector<Index> t(arrows.size(), kNone);
      if (!sys.slice()) return t;
      auto const& c = *sys.classifier;
      for (std::size_t i = 0; i < arrows.size(); ++i) {
        Index const d  = c.H.site()->dom(arrows[i]);
        Index const hx = c.H.act(arrows[i], cover.x);
        Index const tp = c.top_position[d][hx];
        // Outside S(x); no family can match.
        t[i] = tp == kNone ? Index{kNone - 1} : tp;
      }
      return t;
    }

    bool is_maximal(FiniteCategory const& cat, Cover const& cover) {
      return (cover.mask >> cat.position_into(cat.identity(cover.object)) & 1U) != 0;
    }

  }  // namespace

  bool is_slice_presheaf(SlicePresheaf const& f, Classifier const& c, std::string* witness) {
    if (!f.pi) {
      if (witness) *witness = "no π";
      return false;
    }
    if (f.F.site() != c.T.site() && !(*f.F.site() == *c.T.site())) {
      if (witness) *witness = "different sites";
      return false;
    }
    auto const& cat = f.F.category();
    if (f.pi->components.size() != cat.object_count()) {
      if (witness) *witness = "π has the wrong number of components";
      return false;
    }
    for (Index o = 0; o < cat.object_count(); ++o) {
      if (f.pi->components[o].size() != f.F.size(o)) {
        if (witness) *witness = "π(" + cat.object_name(o) + ") has the wrong size";
        return false;
      }
      for (Index v : f.pi->components[o]) {
        if (v >= c.T.size(o)) {
          if (witness) *witness = "π(" + cat.object_name(o) + ") leaves T";
          return false;
        }
      }
    }
    return is_natural(f.F, c.T, *f.pi, witness);
  }

  CoverSystem CoverSystem::classical(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
    CoverSystem s;
    s.site = omega.site();
    for (Index c = 0; c < g.covers.size(); ++c) {
      for (Index k : g.covers[c]) {
        s.covers.push_back({c, omega.sieves(c)[k].mask, kNone});
      }
    }
    return s;
  }

  CoverSystem CoverSystem::nc(std::shared_ptr<Classifier const> c, NCGrothendieckTopology const& g) {
    CoverSystem s;
    s.site = c->H.site();
    for (Index o = 0; o < g.covers.size(); ++o) {
      for (std::size_t k = 0; k < g.covers[o].size(); ++k) {
        s.covers.push_back({o, g.sieves[o][k], g.covers[o][k]});
      }
    }
    s.classifier = std::move(c);
    return s;
  }

  std::vector<Family> matching_families(CoverSystem const& sys, Cover const& cover,
                                        SlicePresheaf const& f) {
    require_same_site(sys.site, f.F.site());
    auto const& cat    = *sys.site;
    auto const  arrows = sieve_arrows(cat, cover);
    auto const  target = family_targets(sys, cover, arrows);
    if (sys.slice() && !f.pi) {
      throw Error(ErrorKind::PreconditionViolated, "slice mode needs π");
    }
    std::vector<Index> sizes;
    for (Index a : arrows) sizes.push_back(static_cast<Index>(f.F.size(cat.dom(a))));
    std::vector<Family> out;
    for_each_family(
        cat, arrows, sizes, target, [&](Index g, Index y) { return f.F.act(g, y); },
        [&](Index d, Index y) { return f.pi->components[d][y]; },
        [&](Family const& v) { out.push_back(v); });
    return out;
  }

  std::vector<Index> extensions(CoverSystem const& sys, Cover const& cover, SlicePresheaf const& f,
                                Family const& g) {
    auto const         arrows = sieve_arrows(*sys.site, cover);
    std::vector<Index> out;
    for (Index e = 0; e < f.F.size(cover.object); ++e) {
      bool ok = true;
      for (std::size_t i = 0; i < arrows.size() && ok; ++i) ok = f.F.act(arrows[i], e) == g[i];
      if (ok) out.push_back(e);
    }
    return out;
  }

  SheafVerdict check_sheaf(CoverSystem const& sys, SlicePresheaf const& f) {
    require_same_site(sys.site, f.F.site());
    if (sys.slice()) {
      std::string w;
      if (!is_slice_presheaf(f, *sys.classifier, &w)) {
        throw Error(ErrorKind::PreconditionViolated, "not an object over T: " + w);
      }
    }
    SheafVerdict v;
    for (std::size_t k = 0; k < sys.covers.size(); ++k) {
      auto const& cover = sys.covers[k];
      for (auto const& g : matching_families(sys, cover, f)) {
        ++v.families;
        auto const n = extensions(sys, cover, f, g).size();
        if (n != 1 && v.sheaf) {
          v.sheaf          = false;
          v.counterexample = SheafCounterexample{cover.object, k, g, n};
          return v;
        }
      }
    }
    return v;
  }

  Bounds Bounds::uniform(FiniteCategory const& cat, std::size_t n) {
    return Bounds{std::vector<std::size_t>(cat.object_count(), n)};
  }

  // ---------------------------------------------------------------------------
  // Enumeration

  namespace {

    struct Enumerator {
      Site                            site;
      FiniteCategory const&           cat;
      Classifier const*               classifier;  // colors
      CoverSystem const*              sys;         // filter when set
      Bounds const&                   bounds;
      EnumerationOptions const&       opt;
      std::vector<std::vector<Index>> nonid;
      std::vector<Index>              npos;  // arrow → position among nonid into its codomain
      std::atomic<std::size_t>        nodes{0};
      std::atomic<std::size_t>        labeled{0};

      Enumerator(Site s, Classifier const* c, CoverSystem const* y, Bounds const& b,
                 EnumerationOptions const& o)
          : site(std::move(s)), cat(*site), classifier(c), sys(y), bounds(b), opt(o) {
        nonid.resize(cat.object_count());
        npos.assign(cat.arrow_count(), kNone);
        for (Index o2 = 0; o2 < cat.object_count(); ++o2) {
          for (Index a : cat.arrows_into(o2)) {
            if (cat.is_identity(a)) continue;
            npos[a] = static_cast<Index>(nonid[o2].size());
            nonid[o2].push_back(a);
          }
        }
        if (bounds.max.size() != cat.object_count()) {
          throw Error(ErrorKind::PreconditionViolated, "one bound per object expected");
        }
      }

      void tick() {
        if (nodes.fetch_add(1) >= opt.max_nodes) {
          throw Error(ErrorKind::BoundTooLarge,
                      "search exceeded " + std::to_string(opt.max_nodes) + " nodes");
        }
      }

      Index colors(Index c) const {
        return classifier ? static_cast<Index>(classifier->T.size(c)) : 1;
      }

      // Profiles available at object c given the lower objects in p.
      std::vector<std::vector<Index>> profiles(Profiles const& p, Index c) const {
        std::vector<std::vector<Index>> out;
        auto const&                     arrows = nonid[c];
        std::vector<Index>              sizes;
        for (Index a : arrows) sizes.push_back(static_cast<Index>(p[cat.dom(a)].size()));
        for (Index col = 0; col < colors(c); ++col) {
          std::vector<Index> target(arrows.size(), kNone);
          if (classifier) {
            for (std::size_t i = 0; i < arrows.size(); ++i) target[i] = classifier->T.act(arrows[i], col);
          }
          for_each_family(
              cat, arrows, sizes, target, [&](Index g, Index y) { return p[cat.cod(g)][y][1 + npos[g]]; },
              [&](Index d, Index y) { return p[d][y][0]; },
              [&](std::vector<Index> const& v) {
                std::vector<Index> row{col};
                row.insert(row.end(), v.begin(), v.end());
                out.push_back(std::move(row));
              });
        }
        std::sort(out.begin(), out.end());
        return out;
      }

      // For each profile, the ids of the families it extends, across the
      // non-maximal covers on c. Also returns the number of families.
      std::size_t extension_table(Profiles const& p, Index c,
                                  std::vector<std::vector<Index>> const& prof,
                                  std::vector<std::vector<Index>>&       ext) const {
        ext.assign(prof.size(), {});
        if (!sys) return 0;
        std::size_t total = 0;
        for (auto const& cover : sys->covers) {
          if (cover.object != c || is_maximal(cat, cover)) continue;
          auto const         arrows = sieve_arrows(cat, cover);
          auto const         target = family_targets(*sys, cover, arrows);
          std::vector<Index> sizes;
          for (Index a : arrows) sizes.push_back(static_cast<Index>(p[cat.dom(a)].size()));
          std::map<Family, Index> ids;
          for_each_family(
              cat, arrows, sizes, target, [&](Index g, Index y) { return p[cat.cod(g)][y][1 + npos[g]]; },
              [&](Index d, Index y) { return p[d][y][0]; },
              [&](Family const& v) { ids.emplace(v, static_cast<Index>(total + ids.size())); });
          for (std::size_t q = 0; q < prof.size(); ++q) {
            Family r;
            for (Index a : arrows) r.push_back(prof[q][1 + npos[a]]);
            auto it = ids.find(r);
            if (it != ids.end()) ext[q].push_back(it->second);
          }
          total += ids.size();
        }
        return total;
      }

      // Sorted multisets of profiles at c; calls done() for each accepted one
      // with p[c] filled in.
      template <typename Done>
      void multisets(Profiles& p, Index c, Done&& done) {
        auto const                      prof = profiles(p, c);
        std::vector<std::vector<Index>> ext;
        std::size_t const               families = extension_table(p, c, prof, ext);
        std::vector<Index>              count(families, 0);
        std::size_t                     zero = families;  // families with no extension yet
        std::size_t const               cap  = bounds.max[c];
        std::vector<Index>              chosen;
        auto rec = [&](auto& self, std::size_t start) -> void {
          tick();
          if (zero == 0) {
            p[c].clear();
            for (Index q : chosen) p[c].push_back(prof[q]);
            done();
          }
          if (chosen.size() == cap) return;
          for (std::size_t q = start; q < prof.size(); ++q) {
            bool ok = true;
            for (Index id : ext[q]) ok = ok && count[id] == 0;
            if (!ok) continue;
            for (Index id : ext[q]) {
              ++count[id];
              --zero;
            }
            chosen.push_back(static_cast<Index>(q));
            self(self, q);
            chosen.pop_back();
            for (Index id : ext[q]) {
              --count[id];
              ++zero;
            }
          }
        };
        rec(rec, 0);
        p[c].clear();
      }

      std::vector<std::vector<Index>> run() {
        auto const&           order = cat.direct_order();
        std::vector<Profiles> prefixes;
        Profiles              p(cat.object_count());
        if (order.empty()) {
          return {std::vector<Index>{classifier ? Index{1} : Index{0}}};
        }
        auto collect = [&](auto& self, std::size_t k) -> void {
          if (k + 1 == order.size()) {
            prefixes.push_back(p);
            return;
          }
          multisets(p, order[k], [&] { self(self, k + 1); });
          p[order[k]].clear();
        };
        collect(collect, 0);
        std::vector<std::set<std::vector<Index>>> found(prefixes.size());
        parallel_for(prefixes.size(), opt.jobs, [&](std::size_t i) {
          Profiles q = prefixes[i];
          multisets(q, order.back(), [&] {
            labeled.fetch_add(1);
            found[i].insert(canonical_code(cat, q, classifier != nullptr));
          });
        });
        std::set<std::vector<Index>> all;
        for (auto& s : found) all.insert(s.begin(), s.end());
        return {all.begin(), all.end()};
      }
    };

    // Any site: all labeled presheaves within bounds, filtered.
    Enumeration brute_force(Site const& site, Classifier const* c, CoverSystem const* sys,
                            Bounds const& bounds, EnumerationOptions const& opt) {
      auto const&        cat = *site;
      std::vector<Index> nonid;
      for (Index a = 0; a < cat.arrow_count(); ++a) {
        if (!cat.is_identity(a)) nonid.push_back(a);
      }
      // Count the labeled candidates before building any.
      double               total = 0;
      std::vector<Index>   sizes(cat.object_count(), 0);
      std::vector<std::vector<Index>> size_choices;
      while (true) {
        double t = 1;
        for (Index a : nonid) t *= std::pow(static_cast<double>(sizes[cat.dom(a)]), sizes[cat.cod(a)]);
        if (c) {
          for (Index o = 0; o < cat.object_count(); ++o) {
            t *= std::pow(static_cast<double>(c->T.size(o)), sizes[o]);
          }
        }
        total += t;
        size_choices.push_back(sizes);
        Index o = 0;
        for (; o < cat.object_count(); ++o) {
          if (sizes[o] < bounds.max[o]) {
            ++sizes[o];
            break;
          }
          sizes[o] = 0;
        }
        if (o == cat.object_count()) break;
      }
      if (total > static_cast<double>(opt.max_labeled)) {
        throw Error(ErrorKind::BoundTooLarge, std::to_string(total) + " labeled candidates");
      }
      Enumeration                                    out;
      std::map<std::vector<Index>, SlicePresheaf>    reps;
      for (auto const& sz : size_choices) {
        // Odometer over action tables and colors.
        std::vector<std::vector<Index>> tables(cat.arrow_count());
        std::vector<std::vector<Index>> colors(cat.object_count());
        std::vector<Index*>             slots;
        std::vector<Index>              radix;
        for (Index a : nonid) tables[a].assign(sz[cat.cod(a)], 0);
        for (Index a : nonid) {
          for (auto& x : tables[a]) {
            slots.push_back(&x);
            radix.push_back(sz[cat.dom(a)]);
          }
        }
        if (c) {
          for (Index o = 0; o < cat.object_count(); ++o) colors[o].assign(sz[o], 0);
          for (Index o = 0; o < cat.object_count(); ++o) {
            for (auto& x : colors[o]) {
              slots.push_back(&x);
              radix.push_back(static_cast<Index>(c->T.size(o)));
            }
          }
        }
        if (std::find(radix.begin(), radix.end(), Index{0}) != radix.end()) continue;
        while (true) {
          std::vector<std::vector<std::string>> names(cat.object_count());
          for (Index o = 0; o < cat.object_count(); ++o) {
            for (Index i = 0; i < sz[o]; ++i) names[o].push_back(cat.object_name(o) + std::to_string(i));
          }
          try {
            SlicePresheaf f{Presheaf(site, names, tables), std::nullopt};
            bool          keep = true;
            if (c) {
              f.pi = NaturalTransformation{colors};
              keep = is_slice_presheaf(f, *c);
            }
            if (keep) {
              ++out.labeled;
              if (!sys || check_sheaf(*sys, f).sheaf) {
                auto cf = canonical_form(f);
                reps.emplace(std::move(cf.code), std::move(cf.relabeled));
              }
            }
          } catch (Error const& e) {
            if (e.kind() != ErrorKind::NotAPresheaf) throw;
          }
          std::size_t i = 0;
          for (; i < slots.size(); ++i) {
            if (++*slots[i] < radix[i]) break;
            *slots[i] = 0;
          }
          if (i == slots.size()) break;
        }
      }
      for (auto& kv : reps) out.items.push_back(std::move(kv.second));
      return out;
    }

    Enumeration enumerate(Site const& site, Classifier const* c, CoverSystem const* sys,
                          Bounds const& bounds, EnumerationOptions const& opt) {
      if (!site->is_direct()) {
        return brute_force(site, c, sys, bounds, opt);
      }
      Enumerator e(site, c, sys, bounds, opt);
      auto       codes = e.run();
      Enumeration out;
      out.labeled = e.labeled.load();
      for (auto const& code : codes) {
        out.items.push_back(from_profiles(site, decode_code(*site, code), c != nullptr));
      }
      return out;
    }

  }  // namespace

  Enumeration enumerate_presheaves(Site const& site, Classifier const* c, Bounds const& bounds,
                                   EnumerationOptions const& opt) {
    return enumerate(site, c, nullptr, bounds, opt);
  }

  Enumeration enumerate_sheaves(CoverSystem const& sys, Bounds const& bounds,
                                EnumerationOptions const& opt) {
    return enumerate(sys.site, sys.classifier.get(), &sys, bounds, opt);
  }

  std::vector<NaturalTransformation> slice_morphisms(SlicePresheaf const& x, SlicePresheaf const& y) {
    auto all = enumerate_nat_trans(x.F, y.F);
    if (!x.pi || !y.pi) return all;
    std::vector<NaturalTransformation> out;
    for (auto& m : all) {
      bool ok = true;
      for (Index c = 0; c < m.components.size() && ok; ++c) {
        for (Index e = 0; e < m.components[c].size() && ok; ++e) {
          ok = y.pi->components[c][m.components[c][e]] == x.pi->components[c][e];
        }
      }
      if (ok) out.push_back(std::move(m));
    }
    return out;
  }

  TerminalResult terminal_search(CoverSystem const& sys, Bounds const& bounds,
                                 EnumerationOptions const& opt) {
    TerminalResult    r;
    auto              sheaves = enumerate_sheaves(sys, bounds, opt).items;
    std::size_t const n       = sheaves.size();
    r.sheaves                 = n;
    // Maps i → j, capped at 2 and computed on demand.
    std::vector<signed char> memo(n * n, -1);
    auto count = [&](std::size_t i, std::size_t j) {
      auto& m = memo[i * n + j];
      if (m < 0) m = static_cast<signed char>(std::min<std::size_t>(2, slice_morphisms(sheaves[i], sheaves[j]).size()));
      return static_cast<std::size_t>(m);
    };
    for (std::size_t z = 0; z < n; ++z) {
      std::size_t i = 0;
      while (i < n && count(i, z) == 1) ++i;
      if (i == n) {
        r.kind     = TerminalKind::Terminal;
        r.terminal = sheaves[z];
        r.note     = "every sheaf within bounds has exactly one map to it";
        r.eliminated.clear();
        return r;
      }
      r.eliminated.push_back({z, i, count(i, z)});
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (count(i, j) != 0 || count(j, i) != 0) continue;
        r.kind        = TerminalKind::NoTerminal;
        r.certificate = std::make_pair(sheaves[i], sheaves[j]);
        r.note        = "no map between the two sheaves in either direction, and every candidate "
                        "within bounds receives zero or several maps from some sheaf";
        return r;
      }
    }
    r.kind = TerminalKind::Inconclusive;
    r.note = "no terminal sheaf within bounds and no disconnected pair";
    return r;
  }

  std::string to_string(TerminalKind k) {
    switch (k) {
      case TerminalKind::Terminal: return "terminal";
      case TerminalKind::NoTerminal: return "no-terminal";
      case TerminalKind::Inconclusive: return "inconclusive";
    }
    return "?";
  }

}  // namespace nctopos
