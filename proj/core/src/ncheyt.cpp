#include "nctopos/ncheyt.hpp"

#include <algorithm>
#include <bit>

namespace nctopos {

  namespace {

    // Minimal dynamic bitset over element ids.
    class Bits {
     public:
      explicit Bits(std::size_t n = 0, bool value = false)
          : _n(n), _w((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
        trim();
      }
      void set(std::size_t i) {
        _w[i / 64] |= std::uint64_t{1} << (i % 64);
      }
      bool test(std::size_t i) const {
        return (_w[i / 64] >> (i % 64) & 1U) != 0;
      }
      Bits& operator&=(Bits const& o) {
        for (std::size_t k = 0; k < _w.size(); ++k) {
          _w[k] &= o._w[k];
        }
        return *this;
      }
      bool subset_of(Bits const& o) const {
        for (std::size_t k = 0; k < _w.size(); ++k) {
          if ((_w[k] & ~o._w[k]) != 0) {
            return false;
          }
        }
        return true;
      }
      bool any() const {
        return std::any_of(_w.begin(), _w.end(), [](std::uint64_t w) { return w != 0; });
      }
      template <typename F>
      void for_each(F&& f) const {
        for (std::size_t k = 0; k < _w.size(); ++k) {
          for (std::uint64_t w = _w[k]; w != 0; w &= w - 1) {
            f(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
          }
        }
      }

     private:
      void trim() {
        if (_n % 64 != 0 && !_w.empty()) {
          _w.back() &= (std::uint64_t{1} << (_n % 64)) - 1;
        }
      }
      std::size_t                _n;
      std::vector<std::uint64_t> _w;
    };

    // The least element of `set` that is above every element of `set`
    // (for upper-bound sets this is the supremum).
    Index least_of(SkewLattice const& l, Bits const& set, std::vector<Bits> const& up) {
      Index out = kNone;
      set.for_each([&](std::size_t u) {
        if (out == kNone && set.subset_of(up[u])) {
          out = static_cast<Index>(u);
        }
      });
      (void) l;
      return out;
    }

    Index greatest_of(Bits const& set, std::vector<Bits> const& down) {
      Index out = kNone;
      set.for_each([&](std::size_t u) {
        if (out == kNone && set.subset_of(down[u])) {
          out = static_cast<Index>(u);
        }
      });
      return out;
    }

  }  // namespace

  NCHeytingAlgebra from_heyting(HeytingTables const& h) {
    NCHeytingAlgebra a;
    a.base.names  = h.names;
    a.base.meet   = h.meet;
    a.base.join   = h.join;
    a.base.bottom = h.bottom;
    a.imp         = h.imp;
    a.t           = h.top;
    return a;
  }

  std::vector<Index> top_class(NCHeytingAlgebra const& h) {
    std::vector<Index> out;
    for (Index x = 0; x < h.size(); ++x) {
      if (h.base.d_related(x, h.t)) {
        out.push_back(x);
      }
    }
    return out;
  }

  Report verify_nc_heyting(NCHeytingAlgebra const& h, std::string_view label) {
    std::string const p(label);
    Report            r = verify_skew_lattice(h.base, label);
    auto const        n = static_cast<Index>(h.size());
    if (h.imp.size() != std::size_t{n} * n || h.t >= n || h.bottom() >= n) {
      r.add(p + "implication table and t", false, "missing implication, t or bottom");
      return r;
    }
    if (!r.passed()) {
      return r;
    }
    auto const& nm = h.base.names;
    try {
      auto const g  = green_decomposition(h.base);
      bool const ok = g.top_class && g.projection[h.t] == *g.top_class;
      r.add(p + "t in the maximum D-class", ok, ok ? "" : nm[h.t]);
    } catch (Error const& e) {
      r.add(p + "t in the maximum D-class", false, e.what());
    }

    Index const t = h.t;
    std::string w;
    auto        first = [&w](std::string s) {
      if (w.empty()) {
        w = std::move(s);
      }
    };
    auto sand = [&](Index a, Index b) { return h.meet_of(h.meet_of(a, b), a); };  // a∧b∧a

    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        Index const lhs = h.imp_of(h.join_of(h.join_of(y, sand(t, x)), y), y);
        if (h.imp_of(x, y) != lhs) first(nm[x] + "," + nm[y]);
      }
    }
    r.add(p + "NH1", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      if (h.imp_of(x, x) != h.join_of(h.join_of(x, t), x)) first(nm[x]);
    }
    r.add(p + "NH2", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (sand(x, h.imp_of(x, y)) != sand(x, y)) first(nm[x] + "," + nm[y]);
      }
    }
    r.add(p + "NH3", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        Index const i = h.imp_of(x, y);
        if (h.meet_of(y, i) != y || h.meet_of(i, y) != y) first(nm[x] + "," + nm[y]);
      }
    }
    r.add(p + "NH4", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n && w.empty(); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          Index const lhs = h.imp_of(x, sand(t, h.meet_of(y, z)));
          Index const rhs = h.meet_of(h.imp_of(x, sand(t, y)), h.imp_of(x, sand(t, z)));
          if (lhs != rhs) first(nm[x] + "," + nm[y] + "," + nm[z]);
        }
      }
    }
    r.add(p + "NH5", w.empty(), w);
    return r;
  }

  Report verify_completeness(NCHeytingAlgebra const& h, std::size_t cap) {
    Report            r;
    auto const&       l = h.base;
    std::size_t const n = l.size();
    std::vector<Bits> up(n, Bits(n)), down(n, Bits(n)), comm(n, Bits(n));
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (l.leq(x, y)) {
          up[x].set(y);
          down[y].set(x);
        }
        if (l.commute(x, y)) {
          comm[x].set(y);
        }
      }
    }

    std::string wsup, winf, wdist;
    std::size_t count = 0;
    bool        truncated = false;

    auto sup_of = [&](std::vector<Index> const& xs) {
      Bits ub(n, true);
      for (Index x : xs) {
        ub &= up[x];
      }
      return least_of(l, ub, up);
    };

    // Empty subset: its supremum is the bottom.
    if (l.bottom == kNone || !Bits(n, true).subset_of(up[l.bottom])) {
      wsup = "∅ has no supremum";
    }

    std::vector<Index> current;
    auto check = [&](Bits const& ub, Bits const& lb) {
      ++count;
      auto set_name = [&] {
        std::string s = "{";
        for (std::size_t i = 0; i < current.size(); ++i) {
          s += (i > 0 ? "," : "") + l.names[current[i]];
        }
        return s + "}";
      };
      Index const sup = least_of(l, ub, up);
      Index const inf = greatest_of(lb, down);
      if (sup == kNone) {
        if (wsup.empty()) wsup = set_name();
        return;
      }
      if (inf == kNone && winf.empty()) {
        winf = set_name();
      }
      if (!wdist.empty()) {
        return;
      }
      std::vector<Index> right(current.size()), left(current.size());
      for (Index y = 0; y < n; ++y) {
        for (std::size_t i = 0; i < current.size(); ++i) {
          right[i] = l.meet_of(current[i], y);
          left[i]  = l.meet_of(y, current[i]);
        }
        Index const sr = sup_of(right);
        Index const sl = sup_of(left);
        if (sr == kNone || sr != l.meet_of(sup, y) || sl == kNone || sl != l.meet_of(y, sup)) {
          wdist = set_name() + " with " + l.names[y];
          return;
        }
      }
    };

    // Depth-first enumeration of cliques of the commuting graph.
    struct Frame {
      Bits  cand;
      Bits  ub;
      Bits  lb;
      Index next;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{Bits(n, true), Bits(n, true), Bits(n, true), 0});
    while (!stack.empty() && !truncated) {
      auto& f = stack.back();
      while (f.next < n && !f.cand.test(f.next)) {
        ++f.next;
      }
      if (f.next >= n) {
        stack.pop_back();
        if (!current.empty()) {
          current.pop_back();
        }
        continue;
      }
      Index const x = f.next++;
      Frame       g{f.cand, f.ub, f.lb, static_cast<Index>(x + 1)};
      g.cand &= comm[x];
      g.ub &= up[x];
      g.lb &= down[x];
      current.push_back(x);
      check(g.ub, g.lb);
      if (count >= cap) {
        truncated = true;
        break;
      }
      stack.push_back(std::move(g));
    }
    r.add("commuting subsets enumerated", !truncated,
          truncated ? "stopped after " + std::to_string(cap) + " subsets"
                    : std::to_string(count) + " nonempty subsets");
    r.add("every commuting subset has a supremum", wsup.empty(), wsup);
    r.add("every nonempty commuting subset has an infimum", winf.empty(), winf);
    r.add("meets distribute over suprema", wdist.empty(), wdist);
    return r;
  }

  HeytingTables top_downset(NCHeytingAlgebra const& h, Index top, std::vector<Index>* elements) {
    auto const&        l = h.base;
    auto const         n = static_cast<Index>(l.size());
    std::vector<Index> el;
    std::vector<Index> local(n, kNone);
    for (Index y = 0; y < n; ++y) {
      if (l.leq(y, top)) {
        local[y] = static_cast<Index>(el.size());
        el.push_back(y);
      }
    }
    auto const    k = static_cast<Index>(el.size());
    HeytingTables t;
    t.meet.resize(std::size_t{k} * k);
    t.join.resize(std::size_t{k} * k);
    t.imp.resize(std::size_t{k} * k);
    auto in = [&](Index x) { return local[x] == kNone ? Index{0} : local[x]; };
    for (Index i = 0; i < k; ++i) {
      t.names.push_back(l.names[el[i]]);
      for (Index j = 0; j < k; ++j) {
        Index const im = h.imp_of(el[i], el[j]);
        t.meet[i * k + j] = in(l.meet_of(el[i], el[j]));
        t.join[i * k + j] = in(l.join_of(el[i], el[j]));
        t.imp[i * k + j]  = in(l.meet_of(l.meet_of(top, im), top));
      }
    }
    t.top    = local[top];
    t.bottom = l.bottom < n ? local[l.bottom] : kNone;
    if (elements) {
      *elements = std::move(el);
    }
    return t;
  }

  Report structure_checks(NCHeytingAlgebra const& h) {
    Report      r;
    auto const& l = h.base;
    auto const& nm = l.names;
    GreenDecomposition g;
    try {
      g = green_decomposition(l);
    } catch (Error const& e) {
      r.add("D is a congruence", false, e.what());
      return r;
    }
    std::vector<Index> te;
    auto const         tt = top_downset(h, h.t, &te);
    r.append(check_heyting(tt), "t↓.");

    // t↓ → H/D through the projection.
    std::string       w;
    std::vector<bool> hit(g.classes.size(), false);
    for (Index x : te) {
      if (hit[g.projection[x]] && w.empty()) {
        w = "two elements of t↓ in the class of " + nm[x];
      }
      hit[g.projection[x]] = true;
    }
    for (std::size_t c = 0; c < hit.size() && w.empty(); ++c) {
      if (!hit[c]) {
        w = "class " + g.quotient.names[c] + " misses t↓";
      }
    }
    for (std::size_t i = 0; i < te.size() && w.empty(); ++i) {
      for (std::size_t j = 0; j < te.size(); ++j) {
        Index const a = g.projection[te[i]];
        Index const b = g.projection[te[j]];
        if (g.projection[l.meet_of(te[i], te[j])] != g.quotient.meet_of(a, b)
            || g.projection[l.join_of(te[i], te[j])] != g.quotient.join_of(a, b)) {
          w = nm[te[i]] + "," + nm[te[j]];
          break;
        }
      }
    }
    r.add("t↓ ≅ H/D", w.empty(), w);

    w.clear();
    std::string wd;
    for (Index tp : top_class(h)) {
      std::vector<Index> pe;
      auto const         tpt = top_downset(h, tp, &pe);
      if (tp != h.t) {
        r.append(check_heyting(tpt), nm[tp] + "↓.");
      }
      std::vector<Index> local(l.size(), kNone);
      for (std::size_t i = 0; i < pe.size(); ++i) {
        local[pe[i]] = static_cast<Index>(i);
      }
      auto phi = [&](Index x) { return l.meet_of(l.meet_of(tp, x), tp); };
      std::vector<bool> seen(pe.size(), false);
      for (Index x : te) {
        Index const y = local[phi(x)];
        if (y == kNone) {
          if (w.empty()) w = nm[tp] + ": φ(" + nm[x] + ") leaves the down-set";
          continue;
        }
        if (seen[y] && w.empty()) w = nm[tp] + ": φ not injective at " + nm[x];
        seen[y] = true;
        if (!l.d_related(x, phi(x)) && wd.empty()) wd = nm[tp] + ": " + nm[x];
      }
      if (te.size() != pe.size() && w.empty()) {
        w = nm[tp] + ": sizes differ";
      }
      for (Index x : te) {
        for (Index y : te) {
          if (!w.empty()) break;
          Index const px = local[phi(x)], py = local[phi(y)];
          if (px == kNone || py == kNone) continue;
          auto const k = pe.size();
          if (local[phi(l.meet_of(x, y))] != tpt.meet[px * k + py]
              || local[phi(l.join_of(x, y))] != tpt.join[px * k + py]
              || local[phi(h.imp_of(x, y))] != tpt.imp[px * k + py]) {
            w = nm[tp] + ": " + nm[x] + "," + nm[y];
          }
        }
      }
    }
    r.add("x ↦ t'∧x∧t' is a Heyting isomorphism t↓ → t'↓", w.empty(), w);
    r.add("x D t'∧x∧t'", wd.empty(), wd);
    return r;
  }

  // ---------------------------------------------------------------------------

  Embedding join_irreducible_embedding(HeytingTables const& h) {
    auto const         n = static_cast<Index>(h.size());
    std::vector<Index> irr;
    for (Index j = 0; j < n; ++j) {
      if (j == h.bottom) {
        continue;
      }
      bool reducible = false;
      for (Index a = 0; a < n && !reducible; ++a) {
        for (Index b = 0; b < n; ++b) {
          if (a != j && b != j && h.join_of(a, b) == j) {
            reducible = true;
            break;
          }
        }
      }
      if (!reducible) {
        irr.push_back(j);
      }
    }
    if (irr.size() > 64) {
      throw Error(ErrorKind::TooLarge, "more than 64 join-irreducibles");
    }
    Embedding e;
    for (Index j : irr) {
      e.index_names.push_back(h.names[j]);
    }
    for (Index u = 0; u < n; ++u) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < irr.size(); ++k) {
        if (h.leq(irr[k], u)) {
          s |= std::uint64_t{1} << k;
        }
      }
      e.support.push_back(s);
    }
    return e;
  }

  void validate_embedding(HeytingTables const& h, Embedding const& e) {
    auto const n = static_cast<Index>(h.size());
    if (e.support.size() != n) {
      throw Error(ErrorKind::BadEmbedding, "one support per element required");
    }
    std::size_t const k = e.index_names.size();
    if (k == 0 || k > 64) {
      throw Error(ErrorKind::BadEmbedding, "index set must have 1 to 64 members");
    }
    std::uint64_t const all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    for (Index u = 0; u < n; ++u) {
      if ((e.support[u] & ~all) != 0) {
        throw Error(ErrorKind::BadEmbedding, h.names[u] + " uses an unknown index");
      }
      for (Index v = 0; v < n; ++v) {
        if (u != v && e.support[u] == e.support[v]) {
          throw Error(ErrorKind::BadEmbedding, "not injective: " + h.names[u] + "," + h.names[v]);
        }
        if (e.support[h.meet_of(u, v)] != (e.support[u] & e.support[v])
            || e.support[h.join_of(u, v)] != (e.support[u] | e.support[v])) {
          throw Error(ErrorKind::BadEmbedding,
                      "not lattice-preserving at " + h.names[u] + "," + h.names[v]);
        }
      }
    }
    if (h.bottom >= n || e.support[h.bottom] != 0) {
      throw Error(ErrorKind::BadEmbedding, "bottom must map to the empty set");
    }
    if (h.top >= n || e.support[h.top] != all) {
      throw Error(ErrorKind::BadEmbedding, "top must map to the whole index set");
    }
  }

  std::string decorated_name(std::string const&              shadow,
                             std::vector<Index> const&       coords,
                             std::vector<std::string> const& p,
                             std::uint64_t                   keep) {
    bool single = std::all_of(p.begin(), p.end(), [](auto const& s) { return s.size() == 1; });
    std::string tail;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] == 0 || (keep >> i & 1U) == 0) {
        continue;
      }
      if (!single && !tail.empty()) {
        tail += ".";
      }
      tail += p[coords[i] - 1];
    }
    return tail.empty() ? shadow : shadow + "_" + tail;
  }

  Index PullbackAlgebra::find(Index u, std::vector<Index> const& c) const {
    std::vector<Index> key{u};
    key.insert(key.end(), c.begin(), c.end());
    auto it = _lookup.find(key);
    return it == _lookup.end() ? kNone : it->second;
  }

  PullbackAlgebra pullback_construct(HeytingTables const&            h,
                                     std::vector<std::string> const& p,
                                     Embedding const&                index,
                                     std::vector<Index> const&       d) {
    if (p.empty()) {
      throw Error(ErrorKind::EmptyP, "no decorations");
    }
    validate_embedding(h, index);
    std::size_t const k = index.index_names.size();
    if (d.size() != k) {
      throw Error(ErrorKind::BadEmbedding, "d needs one decoration per index");
    }
    for (Index v : d) {
      if (v >= p.size()) {
        throw Error(ErrorKind::UnknownElement, "d names an unknown decoration");
      }
    }
    PullbackAlgebra out;
    out.embedding    = index;
    out.shadow_names = h.names;
    out.decorations  = p;
    out.d            = d;
    auto const m     = static_cast<Index>(p.size());

    for (Index u = 0; u < h.size(); ++u) {
      std::vector<std::size_t> supp;
      for (std::size_t i = 0; i < k; ++i) {
        if ((index.support[u] >> i & 1U) != 0) {
          supp.push_back(i);
        }
      }
      std::vector<Index> c(k, 0);
      for (auto i : supp) {
        c[i] = 1;
      }
      // Odometer over the support, last index fastest.
      while (true) {
        out._lookup.emplace([&] {
          std::vector<Index> key{u};
          key.insert(key.end(), c.begin(), c.end());
          return key;
        }(), static_cast<Index>(out.shadow.size()));
        out.shadow.push_back(u);
        out.coords.push_back(c);
        std::size_t pos = supp.size();
        while (pos > 0 && c[supp[pos - 1]] == m) {
          c[supp[pos - 1]] = 1;
          --pos;
        }
        if (pos == 0) {
          break;
        }
        ++c[supp[pos - 1]];
      }
    }

    auto const n = static_cast<Index>(out.shadow.size());
    auto&      a = out.algebra;
    for (Index x = 0; x < n; ++x) {
      a.base.names.push_back(decorated_name(h.names[out.shadow[x]], out.coords[x], p));
    }
    a.base.meet.resize(std::size_t{n} * n);
    a.base.join.resize(std::size_t{n} * n);
    a.imp.resize(std::size_t{n} * n);
    std::vector<Index> c(k);
    for (Index x = 0; x < n; ++x) {
      auto const& cx = out.coords[x];
      Index const u  = out.shadow[x];
      for (Index y = 0; y < n; ++y) {
        auto const& cy = out.coords[y];
        Index const v  = out.shadow[y];
        for (std::size_t i = 0; i < k; ++i) {
          c[i] = (cx[i] == 0 || cy[i] == 0) ? 0 : cx[i];
        }
        a.base.meet[x * n + y] = out.find(h.meet_of(u, v), c);
        for (std::size_t i = 0; i < k; ++i) {
          c[i] = cx[i] == 0 ? cy[i] : (cy[i] == 0 ? cx[i] : cy[i]);
        }
        a.base.join[x * n + y] = out.find(h.join_of(u, v), c);
        Index const w = h.imp_of(u, v);
        for (std::size_t i = 0; i < k; ++i) {
          if (cy[i] != 0) {
            c[i] = cy[i];
          } else if ((index.support[w] >> i & 1U) != 0) {
            c[i] = d[i] + 1;
          } else {
            c[i] = 0;
          }
        }
        a.imp[x * n + y] = out.find(w, c);
      }
    }
    a.base.bottom = out.find(h.bottom, std::vector<Index>(k, 0));
    for (std::size_t i = 0; i < k; ++i) {
      c[i] = d[i] + 1;
    }
    a.t = out.find(h.top, c);
    return out;
  }

  namespace {
    // Returns a witness, empty when the equivalence is a congruence.
    std::string congruence_witness(NCHeytingAlgebra const& h, std::vector<Index> const& key) {
      auto const n = static_cast<Index>(h.size());
      auto const& nm = h.base.names;
      for (Index x = 0; x < n; ++x) {
        for (Index x2 = x + 1; x2 < n; ++x2) {
          if (key[x] != key[x2]) {
            continue;
          }
          for (Index y = 0; y < n; ++y) {
            struct Op {
              char const* sym;
              Index       a, b, c, d;
            };
            Op const ops[] = {
                {"∧", h.meet_of(x, y), h.meet_of(x2, y), h.meet_of(y, x), h.meet_of(y, x2)},
                {"∨", h.join_of(x, y), h.join_of(x2, y), h.join_of(y, x), h.join_of(y, x2)},
                {"→", h.imp_of(x, y), h.imp_of(x2, y), h.imp_of(y, x), h.imp_of(y, x2)},
            };
            for (auto const& op : ops) {
              if (key[op.a] != key[op.b] || key[op.c] != key[op.d]) {
                return nm[x] + "~" + nm[x2] + " under " + op.sym + " with " + nm[y];
              }
            }
          }
        }
      }
      return {};
    }
  }  // namespace

  bool is_congruence(NCHeytingAlgebra const& h, std::vector<Index> const& key) {
    return congruence_witness(h, key).empty();
  }

  FusedAlgebra fuse_tops(NCHeytingAlgebra const& h, std::vector<Index> const& key) {
    auto const n = static_cast<Index>(h.size());
    if (key.size() != n) {
      throw Error(ErrorKind::PreconditionViolated, "one key per element required");
    }
    auto const        tops = top_class(h);
    std::vector<bool> is_top(n, false);
    for (Index x : tops) {
      is_top[x] = true;
    }
    for (Index x = 0; x < n; ++x) {
      for (Index y = x + 1; y < n; ++y) {
        if (key[x] == key[y] && !(is_top[x] && is_top[y])) {
          throw Error(ErrorKind::PreconditionViolated,
                      "key merges " + h.name(x) + " and " + h.name(y) + " outside the top class");
        }
      }
    }
    auto const w = congruence_witness(h, key);
    if (!w.empty()) {
      throw Error(ErrorKind::NotACongruence, w);
    }
    FusedAlgebra out;
    out.projection.assign(n, kNone);
    std::vector<Index> rep;
    for (Index x = 0; x < n; ++x) {
      if (out.projection[x] != kNone) {
        continue;
      }
      auto const c = static_cast<Index>(rep.size());
      rep.push_back(x);
      for (Index y = x; y < n; ++y) {
        if (key[y] == key[x]) {
          out.projection[y] = c;
        }
      }
    }
    auto const m = static_cast<Index>(rep.size());
    auto&      a = out.algebra;
    a.base.meet.resize(std::size_t{m} * m);
    a.base.join.resize(std::size_t{m} * m);
    a.imp.resize(std::size_t{m} * m);
    for (Index i = 0; i < m; ++i) {
      a.base.names.push_back(h.name(rep[i]));
      for (Index j = 0; j < m; ++j) {
        a.base.meet[i * m + j] = out.projection[h.meet_of(rep[i], rep[j])];
        a.base.join[i * m + j] = out.projection[h.join_of(rep[i], rep[j])];
        a.imp[i * m + j]       = out.projection[h.imp_of(rep[i], rep[j])];
      }
    }
    a.base.bottom = out.projection[h.bottom()];
    a.t           = out.projection[h.t];
    return out;
  }

  FusedAlgebra fuse_coordinates(PullbackAlgebra const& p, std::uint64_t keep) {
    auto const&                         h = p.algebra;
    auto const                          n = static_cast<Index>(h.size());
    auto const                          tops = top_class(h);
    std::vector<bool>                   is_top(n, false);
    std::map<std::vector<Index>, Index> keys;
    std::vector<Index>                  key(n);
    for (Index x : tops) {
      is_top[x] = true;
    }
    for (Index x = 0; x < n; ++x) {
      std::vector<Index> k{p.shadow[x]};
      if (is_top[x]) {
        for (std::size_t i = 0; i < p.coords[x].size(); ++i) {
          k.push_back((keep >> i & 1U) != 0 ? p.coords[x][i] : 0);
        }
      } else {
        k.push_back(kNone);
        k.push_back(x);
      }
      key[x] = keys.emplace(k, static_cast<Index>(keys.size())).first->second;
    }
    auto out = fuse_tops(h, key);
    for (Index x : tops) {
      out.algebra.base.names[out.projection[x]]
          = decorated_name(p.shadow_names[p.shadow[x]], p.coords[x], p.decorations, keep);
    }
    return out;
  }

}  // namespace nctopos
