// One line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "nctopos/classif.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/ncheyt.hpp"
#include "nctopos/sheaf.hpp"
#include "nctopos/topol.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace nctopos;

namespace {

  struct Outcome {
    bool        ok = true;
    std::string detail;

    void require(bool cond, std::string const& what) {
      if (!cond && ok) {
        ok     = false;
        detail = what;
      }
    }
  };

  using Names = std::set<std::string>;

  std::vector<std::vector<bool>> natural_leq(NCHeytingAlgebra const& h) {
    std::vector<std::vector<bool>> leq(h.size(), std::vector<bool>(h.size()));
    for (Index x = 0; x < h.size(); ++x) {
      for (Index y = 0; y < h.size(); ++y) leq[x][y] = h.meet_of(x, y) == x && h.meet_of(y, x) == x;
    }
    return leq;
  }

  std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  // Unique edge per ordered vertex pair, counted directly.
  bool complete(Presheaf const& f) {
    auto const& cat = f.category();
    auto const  n   = f.size(cat.object("V"));
    std::map<std::pair<Index, Index>, int> count;
    for (Index e = 0; e < f.size(cat.object("E")); ++e) {
      ++count[{f.act(cat.arrow("s"), e), f.act(cat.arrow("t"), e)}];
    }
    if (count.size() != n * n) return false;
    return std::all_of(count.begin(), count.end(), [](auto const& kv) { return kv.second == 1; });
  }

  // The four classical topologies as tables of sieve names.
  std::map<std::string, std::pair<Names, Names>> const kTables = {
      {"J1", {{"1"}, {"1"}}},
      {"J2", {{"1"}, {"1", "U"}}},
      {"J3", {{"0", "1"}, {"1"}}},
      {"J4", {{"0", "1"}, {"0", "S", "T", "U", "1"}}},
  };

  std::pair<Names, Names> table_of(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
    auto const& cat = *omega.site();
    Names       v, e;
    for (Index s : g.covers[cat.object("V")]) v.insert(omega.algebra(cat.object("V")).names[s]);
    for (Index s : g.covers[cat.object("E")]) e.insert(omega.algebra(cat.object("E")).names[s]);
    return {v, e};
  }

  GrothendieckTopology from_table(OmegaPresheaf const& omega, std::pair<Names, Names> const& t) {
    auto const&          cat = *omega.site();
    GrothendieckTopology g;
    g.covers.resize(2);
    for (Index c : {cat.object("V"), cat.object("E")}) {
      auto const& names = omega.algebra(c).names;
      auto const& want  = c == cat.object("V") ? t.first : t.second;
      for (Index s = 0; s < names.size(); ++s) {
        if (want.count(names[s])) g.covers[c].push_back(s);
      }
    }
    return g;
  }

  Outcome criterion1() {
    Outcome     o;
    auto const  site  = digraph_site();
    auto const& cat   = *site;
    auto const  omega = digraph_omega(site);
    Index const V = cat.object("V"), E = cat.object("E");
    o.require(enumerate_sieves(cat, E).size() == 5, "5 sieves at E");
    o.require(enumerate_sieves(cat, V).size() == 2, "2 sieves at V");
    for (Index c : {V, E}) {
      std::vector<std::uint64_t> masks;
      for (auto const& s : enumerate_sieves(cat, c)) masks.push_back(s.mask);
      std::sort(masks.begin(), masks.end());
      o.require(masks == oracle::sieve_masks(cat, c), "sieves agree with brute force at " + cat.object_name(c));
    }
    auto hasse_of = [&](Index c) {
      auto const&                    s = omega.sieves(c);
      std::vector<std::vector<bool>> leq(s.size(), std::vector<bool>(s.size()));
      for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::size_t y = 0; y < s.size(); ++y) leq[x][y] = (s[x].mask & ~s[y].mask) == 0;
      }
      return oracle::hasse(omega.algebra(c).names, leq);
    };
    o.require(hasse_of(E) == sorted({"0<S", "0<T", "S<U", "T<U", "U<1"}), "Hasse diagram of Ω(E)");
    o.require(hasse_of(V) == std::vector<std::string>{"0<1"}, "Hasse diagram of Ω(V)");
    o.detail = o.ok ? "|Ω(V)|=2 |Ω(E)|=5, 0<S<U<1 and 0<T<U<1" : o.detail;
    return o;
  }

  Outcome criterion2() {
    Outcome    o;
    auto const site  = digraph_site();
    auto const omega = digraph_omega(site);
    auto const lts   = enumerate_lawvere(omega);
    o.require(lts.size() == 4, "4 topologies, got " + std::to_string(lts.size()));
    std::vector<std::vector<std::vector<Index>>> js;
    for (auto const& j : lts) js.push_back(j.j);
    o.require(js == oracle::lawvere(omega), "enumeration agrees with brute force");
    std::set<std::string> hit;
    for (auto const& j : lts) {
      auto const t = table_of(omega, lt_to_gt(omega, j));
      for (auto const& [name, table] : kTables) {
        if (table == t) hit.insert(name);
      }
      o.require(grothendieck_correspondence(omega, j).passed(), "round trip");
    }
    o.require(hit.size() == 4, "lt_to_gt is onto J1..J4");
    o.detail = o.ok ? "4 topologies onto J1..J4" : o.detail;
    return o;
  }

  Outcome criterion3() {
    Outcome     o;
    auto const  site  = digraph_site();
    auto const  omega = digraph_omega(site);
    auto const  sys   = CoverSystem::classical(omega, from_table(omega, kTables.at("J2")));
    Bounds      b{{3, 9}};
    auto const  all   = enumerate_presheaves(site, nullptr, b);
    auto const  want  = oracle::digraph_classes(3, 9, 1);
    o.require(all.items.size() == want,
              "digraph classes " + std::to_string(all.items.size()) + " vs " + std::to_string(want));
    std::size_t sheaves = 0;
    for (auto const& f : all.items) {
      bool const s = check_sheaf(sys, f).sheaf;
      sheaves += s ? 1 : 0;
      o.require(s == complete(f.F), "sheaf iff complete");
    }
    o.detail = o.ok ? std::to_string(all.items.size()) + " digraphs, " + std::to_string(sheaves) + " sheaves, all complete"
                    : o.detail;
    return o;
  }

  Outcome criterion4() {
    Outcome     o;
    auto const  site = digraph_site();
    auto const& cat  = *site;
    Index const V = cat.object("V"), E = cat.object("E");
    auto const  b    = digraph_classifier_build(site);
    auto const& raw  = b.classifier;
    // Each arrow coordinate in a sieve carries one of the two edges of P(E).
    o.require(raw.H.at(E).size() == oracle::pullback_size(cat, E, 2) && raw.H.at(E).size() == 17, "|H(E)| = 17");
    o.require(raw.tops[E].size() == 8, "8 tops before fusing");
    auto const c = fuse_classifier(b);
    auto const& h = c.H.at(E);
    o.require(h.size() == 13 && c.tops[E].size() == 4, "13 elements and 4 tops after fusing");
    o.require(c.H.at(V).size() == 2, "H(V) ≅ 2");
    auto const hasse = oracle::hasse(h.base.names, natural_leq(h));
    o.require(hasse == sorted({"0<S_a", "0<S_b", "0<T_a", "0<T_b", "S_a<U_aa", "S_a<U_ab", "T_a<U_aa",
                               "T_a<U_ba", "S_b<U_ba", "S_b<U_bb", "T_b<U_ab", "T_b<U_bb", "U_aa<1_aa",
                               "U_ab<1_ab", "U_ba<1_ba", "U_bb<1_bb"}),
              "Hasse diagram of H(E)");
    std::set<Names> classes;
    for (Index x = 0; x < h.size(); ++x) {
      Names cls;
      for (Index y = 0; y < h.size(); ++y) {
        if (h.base.d_related(x, y)) cls.insert(h.name(y));
      }
      classes.insert(cls);
    }
    o.require(classes
                  == std::set<Names>{{"0"}, {"S_a", "S_b"}, {"T_a", "T_b"}, {"U_aa", "U_ab", "U_ba", "U_bb"},
                                     {"1_aa", "1_ab", "1_ba", "1_bb"}},
              "D-classes of H(E)");
    for (Index x : {V, E}) {
      o.require(verify_nc_heyting(c.H.at(x)).passed(), "NH axioms at " + cat.object_name(x));
      o.require(verify_completeness(c.H.at(x)).passed(), "completeness at " + cat.object_name(x));
      o.require(structure_checks(c.H.at(x)).passed(), "top down-set structure at " + cat.object_name(x));
    }
    o.require(verify_nch_presheaf(c.H).passed(), "restrictions preserve the structure");
    o.require(c.report.passed(), "H/D ≅ Ω naturally");
    o.require(raw.report.passed(), "H/D ≅ Ω before fusing");
    o.detail = o.ok ? "17 elements / 8 tops, fused 13 / 4, all checks pass" : o.detail;
    return o;
  }

  Outcome criterion5() {
    Outcome     o;
    auto const  site  = digraph_site();
    auto const& cat   = *site;
    auto const  c     = digraph_classifier(site);
    auto const  omega = digraph_omega(site);
    Index const V = cat.object("V"), E = cat.object("E");
    auto const  ncs   = enumerate_nc_lawvere(*c);
    o.require(ncs.size() == 16, "16 topologies, got " + std::to_string(ncs.size()));
    o.require(ncs == enumerate_nc_lawvere_raw(*c), "agrees with the unpruned search");
    std::set<Names> seen;
    auto const      sections = top_sections(*c);
    o.require(sections.size() == 4, "4 global sections of T");
    for (auto const& j : ncs) {
      Names s;
      for (Index x = 0; x < c->H.at(V).size(); ++x) o.require(j.j[V][x] == x, "identity at V");
      for (Index x = 0; x < c->H.at(E).size(); ++x) {
        if (c->is_top(E, x)) {
          o.require(j.j[E][x] == x, "tops fixed");
        } else if (c->is_top(E, j.j[E][x])) {
          s.insert(c->H.at(E).name(x));
        } else {
          o.require(j.j[E][x] == x, "non-covered elements fixed");
        }
      }
      for (auto const& n : s) o.require(n.rfind("U_", 0) == 0, "covered set inside the U_c");
      seen.insert(s);
      for (auto const& g : sections) {
        auto const  col      = c->H.at(E).name(g[E]).substr(2);
        bool const  covered  = s.count("U_" + col) != 0;
        auto const  expected = gt_to_lt(omega, from_table(omega, kTables.at(covered ? "J2" : "J1")));
        auto const  r        = restrict_to_section(*c, j, g);
        o.require(r.j == expected, "restriction at 1_" + col);
      }
    }
    o.require(seen.size() == 16, "all 16 subsets of {U_aa,U_ab,U_ba,U_bb}");
    o.detail = o.ok ? "16 topologies tops ∪ S; sections give J1/J2 by membership" : o.detail;
    return o;
  }

  SlicePresheaf t_itself(Classifier const& c) {
    SlicePresheaf t{c.T, NaturalTransformation{}};
    auto const&   cat = c.T.category();
    t.pi->components.resize(cat.object_count());
    for (Index o = 0; o < cat.object_count(); ++o) {
      for (Index x = 0; x < c.T.size(o); ++x) t.pi->components[o].push_back(x);
    }
    return t;
  }

  Outcome criterion6() {
    Outcome    o;
    auto const site = digraph_site();
    auto const c    = digraph_classifier(site);
    auto const full = oracle::complete_digraph_classes(3, 9, 4);
    auto const any  = oracle::digraph_classes(3, 4, 4);
    std::size_t nonempty = 0;
    for (auto const& j : enumerate_nc_lawvere(*c)) {
      auto const sys  = CoverSystem::nc(c, derive_nc_grothendieck(*c, j));
      auto const name = nc_topology_name(*c, j);
      if (name == "nclt:0000") {
        auto const e = enumerate_sheaves(sys, Bounds{{3, 4}});
        o.require(e.items.size() == any, "S=∅ accepts all " + std::to_string(any) + " colored digraphs, got "
                                             + std::to_string(e.items.size()));
        o.require(check_sheaf(sys, t_itself(*c)).sheaf, "S=∅ accepts T");
        continue;
      }
      ++nonempty;
      auto const e = enumerate_sheaves(sys, Bounds{{3, 9}});
      o.require(e.items.size() == full, name + ": " + std::to_string(e.items.size()) + " sheaves vs "
                                            + std::to_string(full) + " complete");
      for (auto const& f : e.items) o.require(complete(f.F), name + ": a sheaf is not complete");
      o.require(!check_sheaf(sys, t_itself(*c)).sheaf, name + ": T is a sheaf");
    }
    o.require(nonempty == 15, "15 topologies with S ≠ ∅");
    o.detail = o.ok ? "S≠∅: " + std::to_string(full) + " sheaves = complete 4-colored (V≤3,E≤9), T rejected; S=∅: "
                          + std::to_string(any) + " = all (V≤3,E≤4)"
                    : o.detail;
    return o;
  }

  Outcome criterion7() {
    Outcome     o;
    auto const  site = digraph_site();
    auto const  c    = digraph_classifier(site);
    std::size_t n    = 0;
    for (auto const& j : enumerate_nc_lawvere(*c)) {
      auto const name = nc_topology_name(*c, j);
      if (name == "nclt:0000") continue;
      auto const sys = CoverSystem::nc(c, derive_nc_grothendieck(*c, j));
      auto const r   = terminal_search(sys, Bounds{{2, 4}});
      o.require(r.kind == TerminalKind::NoTerminal, name + ": " + to_string(r.kind));
      if (!r.certificate) continue;
      auto const x = to_digraph(r.certificate->first, c.get());
      auto const y = to_digraph(r.certificate->second, c.get());
      auto loop    = [](ColoredDigraph const& g) {
        return g.vertices.size() == 1 && g.edges.size() == 1 && g.edges[0].src == g.edges[0].dst;
      };
      o.require(loop(x) && loop(y), name + ": certificate is two one-vertex loops");
      o.require(loop(x) && loop(y) && x.edges[0].color != y.edges[0].color, name + ": loop colors differ");
      o.require(slice_morphisms(r.certificate->first, r.certificate->second).empty()
                    && slice_morphisms(r.certificate->second, r.certificate->first).empty(),
                name + ": no slice map either way");
      ++n;
    }
    o.require(n == 15, "a certificate for each of the 15 topologies");
    o.detail = o.ok ? "15 certificates: two one-vertex loops of different colors" : o.detail;
    return o;
  }

  Outcome criterion8() {
    Outcome    o;
    auto const t = props::run(200, 20240611);
    o.require(t.instances == 200, "200 instances");
    o.require(t.violations.empty(), t.violations.empty() ? "" : t.violations.front());
    o.detail = o.ok ? std::to_string(t.instances) + " instances, " + std::to_string(t.checks) + " checks, 0 violations"
                    : o.detail + " (" + std::to_string(t.violations.size()) + " violations)";
    return o;
  }

}  // namespace

int main() {
  struct Criterion {
    int                    id;
    double                 budget;  // seconds
    std::function<Outcome()> run;
  };
  std::vector<Criterion> const all = {
      {1, 1, criterion1},  {2, 1, criterion2},   {3, 30, criterion3}, {4, 5, criterion4},
      {5, 10, criterion5}, {6, 60, criterion6}, {7, 10, criterion7}, {8, 120, criterion8},
  };
  int failed = 0;
  for (auto const& c : all) {
    auto const t0 = std::chrono::steady_clock::now();
    Outcome    o;
    try {
      o = c.run();
    } catch (std::exception const& e) {
      o.ok     = false;
      o.detail = std::string("threw ") + e.what();
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && secs > c.budget) {
      o.ok     = false;
      o.detail = "over the " + std::to_string(static_cast<int>(c.budget)) + " s budget; " + o.detail;
    }
    std::printf("criterion %d: %s (%.2f s) %s\n", c.id, o.ok ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
