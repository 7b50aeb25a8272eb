#include "nctopos/topol.hpp"

#include <algorithm>
#include <numeric>

#include "nctopos/parallel.hpp"

namespace nctopos {

  namespace {

    // Maps on a finite lattice that fix the top, are idempotent and preserve
    // meets; optionally also inflationary. Elements are processed from the
    // top down so that everything above x is assigned before x.
    std::vector<std::vector<Index>> closure_maps(HeytingTables const& h, bool inflationary) {
      auto const         n = static_cast<Index>(h.size());
      std::vector<Index> below(n, 0);
      for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
          below[x] += h.leq(y, x) ? 1 : 0;
        }
      }
      std::vector<Index> order(n);
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return below[a] > below[b]; });

      std::vector<std::vector<Index>> out;
      std::vector<Index>              j(n, kNone);
      auto ok = [&](Index x, Index y) {
        if (x == h.top && y != h.top) return false;
        if (inflationary && !h.leq(x, y)) return false;
        if (y != x && j[y] != kNone && j[y] != y) return false;
        for (Index z = 0; z < n; ++z) {
          if (j[z] == kNone || z == x) continue;
          if (j[z] == x && y != x) return false;
          if (h.leq(x, z) && !h.leq(y, j[z])) return false;
          if (h.leq(z, x) && !h.leq(j[z], y)) return false;
        }
        j[x] = y;
        bool good = true;
        for (Index a = 0; a < n && good; ++a) {
          if (j[a] == kNone) continue;
          for (Index b = 0; b < n; ++b) {
            if (j[b] == kNone) continue;
            Index const m = h.meet_of(a, b);
            if (a != x && b != x && m != x) continue;
            if (j[m] != kNone && j[m] != h.meet_of(j[a], j[b])) {
              good = false;
              break;
            }
          }
        }
        j[x] = kNone;
        return good;
      };
      std::vector<Index> choice(n, 0);
      std::size_t        k = 0;
      if (n == 0) {
        out.emplace_back();
        return out;
      }
      while (true) {
        Index const x = order[k];
        if (choice[k] < n) {
          Index const y = choice[k]++;
          if (!ok(x, y)) continue;
          j[x] = y;
          if (k + 1 == n) {
            bool idem = true;
            for (Index z = 0; z < n && idem; ++z) idem = j[j[z]] == j[z];
            if (idem) out.push_back(j);
            j[x] = kNone;
            continue;
          }
          ++k;
          choice[k] = 0;
          continue;
        }
        if (k == 0) break;
        --k;
        j[order[k]] = kNone;
      }
      return out;
    }

    // Backtracking over objects: picks one map per object such that every
    // arrow between already chosen objects commutes.
    template <typename Natural>
    std::vector<std::vector<std::vector<Index>>>
    combine_objects(std::vector<std::vector<std::vector<Index>>> const& per_object,
                    Natural&&                                           natural_upto) {
      std::vector<std::vector<std::vector<Index>>> out;
      std::size_t const                            m = per_object.size();
      if (m == 0) {
        out.emplace_back();
        return out;
      }
      for (auto const& c : per_object) {
        if (c.empty()) return out;
      }
      std::vector<std::size_t>        choice(m, 0);
      std::vector<std::vector<Index>> current(m);
      Index                           o = 0;
      while (true) {
        if (choice[o] < per_object[o].size()) {
          current[o] = per_object[o][choice[o]];
          if (!natural_upto(current, o)) {
            ++choice[o];
            continue;
          }
          if (o + 1 == m) {
            out.push_back(current);
            ++choice[o];
            continue;
          }
          ++o;
          choice[o] = 0;
          continue;
        }
        if (o == 0) break;
        --o;
        ++choice[o];
      }
      return out;
    }

    std::string first_failure(Report const& r) {
      for (auto const& k : r.checks()) {
        if (!k.passed) return k.name + ": " + k.witness;
      }
      return {};
    }

  }  // namespace

  Report verify_lawvere(OmegaPresheaf const& omega, LawvereTopology const& j) {
    Report      r;
    auto const& cat = *omega.site();
    bool        shape = j.j.size() == cat.object_count();
    for (Index c = 0; shape && c < cat.object_count(); ++c) {
      shape = j.j[c].size() == omega.size(c)
              && std::all_of(j.j[c].begin(), j.j[c].end(),
                             [&](Index v) { return v < omega.size(c); });
    }
    r.add("shape", shape);
    if (!shape) return r;
    std::string w1, w2, w3, wn;
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const& h  = omega.algebra(c);
      auto const& jc = j.j[c];
      auto const  on = cat.object_name(c) + ": ";
      if (jc[h.top] != h.top && w1.empty()) w1 = on + h.names[h.top];
      for (Index s = 0; s < h.size(); ++s) {
        if (jc[jc[s]] != jc[s] && w2.empty()) w2 = on + h.names[s];
        for (Index t = 0; t < h.size(); ++t) {
          if (jc[h.meet_of(s, t)] != h.meet_of(jc[s], jc[t]) && w3.empty()) {
            w3 = on + h.names[s] + "," + h.names[t];
          }
        }
      }
    }
    for (Index f = 0; f < cat.arrow_count() && wn.empty(); ++f) {
      for (Index s = 0; s < omega.size(cat.cod(f)); ++s) {
        if (j.j[cat.dom(f)][omega.restrict(f, s)] != omega.restrict(f, j.j[cat.cod(f)][s])) {
          wn = cat.arrow_name(f) + " at " + omega.algebra(cat.cod(f)).names[s];
          break;
        }
      }
    }
    r.add("LT1", w1.empty(), w1);
    r.add("LT2", w2.empty(), w2);
    r.add("LT3", w3.empty(), w3);
    r.add("natural", wn.empty(), wn);
    return r;
  }

  Report verify_grothendieck(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
    Report      r;
    auto const& cat = *omega.site();
    bool        shape = g.covers.size() == cat.object_count();
    std::vector<std::vector<bool>> in(cat.object_count());
    for (Index c = 0; shape && c < cat.object_count(); ++c) {
      in[c].assign(omega.size(c), false);
      for (Index s : g.covers[c]) {
        if (s >= omega.size(c)) {
          shape = false;
          break;
        }
        in[c][s] = true;
      }
    }
    r.add("shape", shape);
    if (!shape) return r;
    std::string w1, w2, w3;
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const& h  = omega.algebra(c);
      auto const  on = cat.object_name(c) + ": ";
      if (!in[c][h.top] && w1.empty()) w1 = cat.object_name(c);
      auto const& into = cat.arrows_into(c);
      for (Index s = 0; s < h.size(); ++s) {
        if (!in[c][s]) continue;
        for (Index f : into) {
          if (!in[cat.dom(f)][omega.restrict(f, s)] && w2.empty()) {
            w2 = on + h.names[s] + " along " + cat.arrow_name(f);
          }
        }
        for (Index rr = 0; rr < h.size(); ++rr) {
          if (in[c][rr]) continue;
          bool all = true;
          for (std::size_t k = 0; k < into.size() && all; ++k) {
            if ((omega.sieves(c)[s].mask >> k & 1U) != 0) {
              all = in[cat.dom(into[k])][omega.restrict(into[k], rr)];
            }
          }
          if (all && w3.empty()) w3 = on + h.names[s] + " and " + h.names[rr];
        }
      }
    }
    r.add("GT1", w1.empty(), w1);
    r.add("GT2", w2.empty(), w2);
    r.add("GT3", w3.empty(), w3);
    return r;
  }

  std::vector<LawvereTopology> enumerate_lawvere(OmegaPresheaf const& omega) {
    auto const&                                  cat = *omega.site();
    std::vector<std::vector<std::vector<Index>>> per;
    for (Index c = 0; c < cat.object_count(); ++c) {
      per.push_back(closure_maps(omega.algebra(c), true));
    }
    auto natural = [&](std::vector<std::vector<Index>> const& j, Index o) {
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        Index const c = cat.cod(f), d = cat.dom(f);
        if (std::max(c, d) != o) continue;
        for (Index s = 0; s < omega.size(c); ++s) {
          if (j[d][omega.restrict(f, s)] != omega.restrict(f, j[c][s])) return false;
        }
      }
      return true;
    };
    std::vector<LawvereTopology> out;
    for (auto& j : combine_objects(per, natural)) {
      LawvereTopology t{std::move(j)};
      if (verify_lawvere(omega, t).passed()) {
        out.push_back(std::move(t));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  GrothendieckTopology lt_to_gt(OmegaPresheaf const& omega, LawvereTopology const& j) {
    auto const r = verify_lawvere(omega, j);
    if (!r.passed()) {
      throw Error(ErrorKind::AxiomFailure, first_failure(r));
    }
    GrothendieckTopology g;
    for (Index c = 0; c < j.j.size(); ++c) {
      g.covers.emplace_back();
      for (Index s = 0; s < omega.size(c); ++s) {
        if (j.j[c][s] == omega.top(c)) {
          g.covers[c].push_back(s);
        }
      }
    }
    return g;
  }

  LawvereTopology gt_to_lt(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
    auto const r = verify_grothendieck(omega, g);
    if (!r.passed()) {
      throw Error(ErrorKind::AxiomFailure, first_failure(r));
    }
    auto const&                    cat = *omega.site();
    std::vector<std::vector<bool>> in(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      in[c].assign(omega.size(c), false);
      for (Index s : g.covers[c]) in[c][s] = true;
    }
    LawvereTopology j;
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const& into = cat.arrows_into(c);
      j.j.emplace_back();
      for (Index s = 0; s < omega.size(c); ++s) {
        std::uint64_t mask = 0;
        for (std::size_t k = 0; k < into.size(); ++k) {
          if (in[cat.dom(into[k])][omega.restrict(into[k], s)]) {
            mask |= std::uint64_t{1} << k;
          }
        }
        j.j[c].push_back(omega.index_of(c, mask));
      }
    }
    return j;
  }

  Report grothendieck_correspondence(OmegaPresheaf const& omega, LawvereTopology const& j) {
    Report r;
    r.append(verify_lawvere(omega, j), "j.");
    if (!r.passed()) return r;
    auto const g = lt_to_gt(omega, j);
    r.append(verify_grothendieck(omega, g), "J.");
    if (!r.passed()) return r;
    auto const j2 = gt_to_lt(omega, g);
    r.append(verify_lawvere(omega, j2), "j'.");
    r.add("gt_to_lt(lt_to_gt(j)) = j", j2 == j);
    r.add("lt_to_gt(gt_to_lt(J)) = J", lt_to_gt(omega, j2) == g);
    return r;
  }

  LawvereTopology identity_lawvere(OmegaPresheaf const& omega) {
    LawvereTopology j;
    for (Index c = 0; c < omega.site()->object_count(); ++c) {
      j.j.emplace_back(omega.size(c));
      std::iota(j.j[c].begin(), j.j[c].end(), Index{0});
    }
    return j;
  }

  GrothendieckTopology chaotic_topology(OmegaPresheaf const& omega) {
    GrothendieckTopology g;
    for (Index c = 0; c < omega.site()->object_count(); ++c) {
      g.covers.push_back({omega.top(c)});
    }
    return g;
  }

  GrothendieckTopology discrete_topology(OmegaPresheaf const& omega) {
    GrothendieckTopology g;
    for (Index c = 0; c < omega.site()->object_count(); ++c) {
      g.covers.emplace_back(omega.size(c));
      std::iota(g.covers[c].begin(), g.covers[c].end(), Index{0});
    }
    return g;
  }

  // ---------------------------------------------------------------------------

  Report verify_nc_lawvere(Classifier const& c, NCLawvereTopology const& j) {
    Report      r;
    auto const& cat   = c.H.presheaf().category();
    bool        shape = j.j.size() == cat.object_count();
    for (Index o = 0; shape && o < cat.object_count(); ++o) {
      auto const n = c.H.at(o).size();
      shape        = j.j[o].size() == n
              && std::all_of(j.j[o].begin(), j.j[o].end(), [&](Index v) { return v < n; });
    }
    r.add("shape", shape);
    if (!shape) return r;
    std::string w1, w2, w3, wn, ws;
    for (Index o = 0; o < cat.object_count(); ++o) {
      auto const& a  = c.H.at(o);
      auto const& jo = j.j[o];
      auto const  on = cat.object_name(o) + ": ";
      for (Index t : c.tops[o]) {
        if (jo[t] != t && w1.empty()) w1 = on + a.name(t);
      }
      for (Index x = 0; x < a.size(); ++x) {
        if (jo[jo[x]] != jo[x] && w2.empty()) w2 = on + a.name(x);
      }
      for (Index t : c.tops[o]) {
        std::vector<Index> down;
        for (Index x = 0; x < a.size(); ++x) {
          if (a.base.leq(x, t)) down.push_back(x);
        }
        for (Index x : down) {
          if (!a.base.leq(jo[x], t) && ws.empty()) {
            ws = on + a.name(x) + " leaves " + a.name(t) + "↓";
          }
          for (Index y : down) {
            if (jo[a.meet_of(x, y)] != a.meet_of(jo[x], jo[y]) && w3.empty()) {
              w3 = on + a.name(x) + "," + a.name(y) + " under " + a.name(t);
            }
          }
        }
      }
    }
    for (Index f = 0; f < cat.arrow_count() && wn.empty(); ++f) {
      Index const cc = cat.cod(f), d = cat.dom(f);
      for (Index x = 0; x < c.H.at(cc).size(); ++x) {
        if (j.j[d][c.H.act(f, x)] != c.H.act(f, j.j[cc][x])) {
          wn = cat.arrow_name(f) + " at " + c.H.at(cc).name(x);
          break;
        }
      }
    }
    r.add("NLT1", w1.empty(), w1);
    r.add("NLT2", w2.empty(), w2);
    r.add("NLT3", w3.empty(), w3);
    r.add("natural", wn.empty(), wn);
    r.add("j(t↓) ⊆ t↓", ws.empty(), ws);
    return r;
  }

  std::vector<std::uint64_t> covered_masks(Classifier const& c, NCLawvereTopology const& j) {
    std::vector<std::uint64_t> out;
    for (Index o = 0; o < j.j.size(); ++o) {
      std::uint64_t m = 0;
      unsigned      k = 0;
      for (Index x = 0; x < j.j[o].size(); ++x) {
        if (c.is_top(o, x)) continue;
        if (c.is_top(o, j.j[o][x]) && k < 64) m |= std::uint64_t{1} << k;
        ++k;
      }
      out.push_back(m);
    }
    return out;
  }

  NCLawvereTopology identity_nc_lawvere(Classifier const& c) {
    NCLawvereTopology j;
    for (auto const& a : c.H.algebras()) {
      j.j.emplace_back(a.size());
      std::iota(j.j.back().begin(), j.j.back().end(), Index{0});
    }
    return j;
  }

  namespace {
    void sort_nc(Classifier const& c, std::vector<NCLawvereTopology>& v) {
      std::vector<std::pair<std::vector<std::uint64_t>, NCLawvereTopology>> keyed;
      for (auto& j : v) {
        keyed.emplace_back(covered_masks(c, j), std::move(j));
      }
      std::sort(keyed.begin(), keyed.end());
      v.clear();
      for (auto& kj : keyed) {
        v.push_back(std::move(kj.second));
      }
    }
  }  // namespace

  std::vector<NCLawvereTopology> enumerate_nc_lawvere(Classifier const& c, unsigned jobs) {
    auto const&                                  cat = c.H.presheaf().category();
    std::vector<std::vector<std::vector<Index>>> per(cat.object_count());
    for (Index o = 0; o < cat.object_count(); ++o) {
      auto const& a = c.H.at(o);
      // Per top: LT-style maps on t↓ written as global partial maps.
      std::vector<std::vector<Index>>              elems;
      std::vector<std::vector<std::vector<Index>>> maps;
      std::vector<bool>                            covered(a.size(), false);
      for (Index t : c.tops[o]) {
        std::vector<Index> el;
        auto const         tables = top_downset(a, t, &el);
        for (Index x : el) covered[x] = true;
        auto local = closure_maps(tables, false);
        std::vector<std::vector<Index>> global;
        for (auto const& m : local) {
          std::vector<Index> g(m.size());
          for (std::size_t i = 0; i < m.size(); ++i) g[i] = el[m[i]];
          global.push_back(std::move(g));
        }
        elems.push_back(std::move(el));
        maps.push_back(std::move(global));
      }
      for (Index x = 0; x < a.size(); ++x) {
        if (!covered[x]) {
          throw Error(ErrorKind::PreconditionViolated,
                      cat.object_name(o) + ": " + a.name(x) + " lies under no top");
        }
      }
      // Consistent choices across tops.
      std::size_t const        k = maps.size();
      std::vector<Index>       val(a.size(), kNone);
      std::vector<std::size_t> choice(k, 0);
      std::vector<std::vector<Index>> undo(k);
      if (k == 0) continue;
      std::size_t i = 0;
      while (true) {
        if (choice[i] < maps[i].size()) {
          auto const& m  = maps[i][choice[i]++];
          bool        ok = true;
          for (std::size_t e = 0; e < m.size() && ok; ++e) {
            Index const x = elems[i][e];
            ok            = val[x] == kNone || val[x] == m[e];
          }
          if (!ok) continue;
          undo[i].clear();
          for (std::size_t e = 0; e < m.size(); ++e) {
            Index const x = elems[i][e];
            if (val[x] == kNone) {
              val[x] = m[e];
              undo[i].push_back(x);
            }
          }
          if (i + 1 == k) {
            per[o].push_back(val);
            for (Index x : undo[i]) val[x] = kNone;
            continue;
          }
          ++i;
          choice[i] = 0;
          continue;
        }
        if (i == 0) break;
        --i;
        for (Index x : undo[i]) val[x] = kNone;
      }
    }
    auto natural = [&](std::vector<std::vector<Index>> const& j, Index o) {
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        Index const cc = cat.cod(f), d = cat.dom(f);
        if (std::max(cc, d) != o) continue;
        for (Index x = 0; x < c.H.at(cc).size(); ++x) {
          if (j[d][c.H.act(f, x)] != c.H.act(f, j[cc][x])) return false;
        }
      }
      return true;
    };
    auto candidates = combine_objects(per, natural);
    std::vector<char> keep(candidates.size(), 0);
    parallel_for(candidates.size(), jobs, [&](std::size_t i) {
      auto const r = verify_nc_lawvere(c, NCLawvereTopology{candidates[i]});
      keep[i]      = r.passed("NLT1") && r.passed("NLT2") && r.passed("NLT3") && r.passed("natural");
    });
    std::vector<NCLawvereTopology> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (keep[i]) out.push_back(NCLawvereTopology{std::move(candidates[i])});
    }
    sort_nc(c, out);
    return out;
  }

  std::vector<NCLawvereTopology> enumerate_nc_lawvere_raw(Classifier const& c, std::size_t max_nodes) {
    auto const&              cat = c.H.presheaf().category();
    std::size_t const        m   = cat.object_count();
    std::vector<std::size_t> offset(m);
    std::size_t              count = 0;
    for (Index o = 0; o < m; ++o) {
      offset[o] = count;
      count += c.H.at(o).size();
    }
    std::vector<Index> obj(count), elem(count);
    for (Index o = 0; o < m; ++o) {
      for (Index x = 0; x < c.H.at(o).size(); ++x) {
        obj[offset[o] + x]  = o;
        elem[offset[o] + x] = x;
      }
    }
    std::vector<Index> val(count, kNone);
    auto at = [&](Index o, Index x) { return val[offset[o] + x]; };

    // Checks every constraint whose variables are all assigned and that
    // involves variable v.
    auto consistent = [&](std::size_t v) {
      Index const o = obj[v], x = elem[v];
      auto const& a = c.H.at(o);
      Index const y = val[v];
      if (c.is_top(o, x) && y != x) return false;
      if (at(o, y) != kNone && at(o, y) != y) return false;
      for (Index z = 0; z < a.size(); ++z) {
        Index const jz = at(o, z);
        if (jz == kNone) continue;
        if (jz == x && at(o, x) != kNone && at(o, x) != x) return false;
      }
      for (Index t : c.tops[o]) {
        if (!a.base.leq(x, t)) continue;
        for (Index w = 0; w < a.size(); ++w) {
          if (!a.base.leq(w, t) || at(o, w) == kNone) continue;
          Index const m1 = a.meet_of(x, w), m2 = a.meet_of(w, x);
          if (at(o, m1) != kNone && at(o, m1) != a.meet_of(y, at(o, w))) return false;
          if (at(o, m2) != kNone && at(o, m2) != a.meet_of(at(o, w), y)) return false;
        }
        for (Index u = 0; u < a.size(); ++u) {
          if (!a.base.leq(u, t) || at(o, u) == kNone) continue;
          for (Index w = 0; w < a.size(); ++w) {
            if (!a.base.leq(w, t) || at(o, w) == kNone) continue;
            if (a.meet_of(u, w) == x && y != a.meet_of(at(o, u), at(o, w))) return false;
          }
        }
      }
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        if (cat.cod(f) == o) {
          Index const d = cat.dom(f), fx = c.H.act(f, x);
          if (at(d, fx) != kNone && at(d, fx) != c.H.act(f, y)) return false;
        }
        if (cat.dom(f) == o) {
          Index const cc = cat.cod(f);
          for (Index u = 0; u < c.H.at(cc).size(); ++u) {
            if (c.H.act(f, u) != x || at(cc, u) == kNone) continue;
            if (y != c.H.act(f, at(cc, u))) return false;
          }
        }
      }
      return true;
    };

    std::vector<NCLawvereTopology> out;
    if (count == 0) {
      out.push_back(identity_nc_lawvere(c));
      return out;
    }
    std::size_t nodes = 0;
    std::size_t v     = 0;
    std::vector<Index> next(count, 0);
    while (true) {
      Index const n = static_cast<Index>(c.H.at(obj[v]).size());
      if (next[v] < n) {
        val[v] = next[v]++;
        if (++nodes > max_nodes) {
          throw Error(ErrorKind::TooLarge, "raw NC Lawvere search exceeded its node budget");
        }
        if (!consistent(v)) {
          val[v] = kNone;
          continue;
        }
        if (v + 1 == count) {
          NCLawvereTopology j;
          for (Index o = 0; o < m; ++o) {
            j.j.emplace_back(val.begin() + static_cast<std::ptrdiff_t>(offset[o]),
                             val.begin() + static_cast<std::ptrdiff_t>(offset[o] + c.H.at(o).size()));
          }
          auto const r = verify_nc_lawvere(c, j);
          if (r.passed("NLT1") && r.passed("NLT2") && r.passed("NLT3") && r.passed("natural")) {
            out.push_back(std::move(j));
          }
          val[v] = kNone;
          continue;
        }
        ++v;
        next[v] = 0;
        continue;
      }
      val[v] = kNone;
      if (v == 0) break;
      --v;
      val[v] = kNone;
    }
    sort_nc(c, out);
    return out;
  }

  NCGrothendieckTopology derive_nc_grothendieck(Classifier const& c, NCLawvereTopology const& j) {
    NCGrothendieckTopology g;
    auto const&            cat = c.H.presheaf().category();
    for (Index o = 0; o < cat.object_count(); ++o) {
      auto const y = sub_H_yoneda(c, o);
      g.covers.emplace_back();
      g.sieves.emplace_back();
      for (Index x = 0; x < c.H.at(o).size(); ++x) {
        if (c.is_top(o, j.j[o][x])) {
          g.covers[o].push_back(x);
          g.sieves[o].push_back(y.sieve[x]);
        }
      }
    }
    return g;
  }

  Closure closure_on_subH(Classifier const&, NCLawvereTopology const& j, SubH const& s,
                          Presheaf const& p) {
    Closure     out;
    auto const& cat = p.category();
    std::string wn, wq, wo, wi;
    for (std::size_t i = 0; i < s.maps.size(); ++i) {
      NaturalTransformation n = s.maps[i];
      for (Index o = 0; o < cat.object_count(); ++o) {
        for (auto& v : n.components[o]) v = j.j[o][v];
      }
      Index const k = s.index_of(n);
      out.image.push_back(k);
      if (k == kNone) {
        if (wn.empty()) wn = s.algebra.name(static_cast<Index>(i));
        continue;
      }
      if (!subset_of(s.q[i], s.q[k]) && wq.empty()) wq = s.algebra.name(static_cast<Index>(i));
      if (!s.algebra.base.leq(static_cast<Index>(i), k) && wo.empty()) {
        wo = s.algebra.name(static_cast<Index>(i));
      }
    }
    out.report.add("j∘N lies in Sub_H(P)", wn.empty(), wn);
    if (!wn.empty()) return out;
    for (std::size_t i = 0; i < out.image.size(); ++i) {
      if (out.image[out.image[i]] != out.image[i] && wi.empty()) {
        wi = s.algebra.name(static_cast<Index>(i));
      }
    }
    out.report.add("extensive: Q ⊆ Q̄", wq.empty(), wq);
    out.report.add("extensive in the natural order", wo.empty(), wo);
    out.report.add("idempotent", wi.empty(), wi);
    return out;
  }

  Report closure_yoneda_check(Classifier const& c, NCLawvereTopology const& j, Index object,
                              double limit) {
    Report      r;
    auto const& cat = c.H.presheaf().category();
    auto const  yc  = yoneda_presheaf(c.H.site(), object);
    auto const  s   = sub_H(yc, c, limit);
    auto const  cl  = closure_on_subH(c, j, s, yc);
    r.append(cl.report);
    if (!cl.report.passed("j∘N lies in Sub_H(P)")) return r;
    std::string w;
    for (Index x = 0; x < c.H.at(object).size() && w.empty(); ++x) {
      NaturalTransformation n;
      for (Index d = 0; d < cat.object_count(); ++d) {
        n.components.emplace_back();
        for (Index f : cat.hom(d, object)) n.components[d].push_back(c.H.act(f, x));
      }
      Index const i = s.index_of(n);
      if (i == kNone) {
        w = "no map for " + c.H.at(object).name(x);
        break;
      }
      auto const& q  = s.q[cl.image[i]];
      Index const jx = j.j[object][x];
      for (Index d = 0; d < cat.object_count() && w.empty(); ++d) {
        auto const h = cat.hom(d, object);
        for (std::size_t k = 0; k < h.size(); ++k) {
          bool const closed_form = c.is_top(d, c.H.act(h[k], jx));
          if (q.member[d][k] != closed_form) {
            w = c.H.at(object).name(x) + " at " + cat.arrow_name(h[k]);
            break;
          }
        }
      }
    }
    r.add("closure on Sub_H(yC) matches the closed form", w.empty(), w);
    return r;
  }

  SectionRestriction restrict_to_section(Classifier const&         c,
                                         NCLawvereTopology const&  j,
                                         std::vector<Index> const& g) {
    auto const&        cat = c.H.presheaf().category();
    SectionRestriction out;
    for (Index o = 0; o < cat.object_count(); ++o) {
      auto const&        a = c.H.at(o);
      std::vector<Index> inv(c.omega.size(o), kNone);
      for (Index x = 0; x < a.size(); ++x) {
        if (!a.base.leq(x, g[o])) continue;
        if (!a.base.leq(j.j[o][x], g[o])) {
          throw Error(ErrorKind::NotStable, cat.object_name(o) + ": " + a.name(x) + " leaves "
                                                + a.name(g[o]) + "↓");
        }
        inv[c.shadow[o][x]] = x;
      }
      out.j.j.emplace_back();
      for (Index s = 0; s < inv.size(); ++s) {
        if (inv[s] == kNone) {
          throw Error(ErrorKind::NotAClassifier, cat.object_name(o) + ": " + a.name(g[o])
                                                     + "↓ misses a sieve");
        }
        out.j.j[o].push_back(c.shadow[o][j.j[o][inv[s]]]);
      }
    }
    out.report = verify_lawvere(c.omega, out.j);
    return out;
  }

}  // namespace nctopos
