#include "nctopos/skewlat.hpp"

#include <algorithm>

namespace nctopos {

  std::optional<Index> SkewLattice::find(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      return std::nullopt;
    }
    return static_cast<Index>(it - names.begin());
  }

  Index SkewLattice::index(std::string_view name) const {
    auto x = find(name);
    if (!x) {
      throw Error(ErrorKind::UnknownElement, "'" + std::string(name) + "'");
    }
    return *x;
  }

  Report verify_skew_lattice(SkewLattice const& l, std::string_view label) {
    std::string const p(label);
    Report            r;
    auto const        n = static_cast<Index>(l.size());
    if (l.meet.size() != std::size_t{n} * n || l.join.size() != std::size_t{n} * n) {
      r.add(p + "tables total", false, "table size does not match carrier");
      return r;
    }
    auto const& nm = l.names;
    std::string w;
    auto        first = [&w](std::string s) {
      if (w.empty()) {
        w = std::move(s);
      }
    };

    for (Index x = 0; x < n; ++x) {
      if (l.meet_of(x, x) != x) first("(∧, " + nm[x] + ")");
    }
    r.add(p + "meet idempotent", w.empty(), w);
    w.clear();
    for (Index x = 0; x < n; ++x) {
      if (l.join_of(x, x) != x) first("(∨, " + nm[x] + ")");
    }
    r.add(p + "join idempotent", w.empty(), w);

    std::string wm, wj;
    for (Index x = 0; x < n && (wm.empty() || wj.empty()); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (wm.empty() && l.meet_of(l.meet_of(x, y), z) != l.meet_of(x, l.meet_of(y, z))) {
            wm = nm[x] + "," + nm[y] + "," + nm[z];
          }
          if (wj.empty() && l.join_of(l.join_of(x, y), z) != l.join_of(x, l.join_of(y, z))) {
            wj = nm[x] + "," + nm[y] + "," + nm[z];
          }
        }
      }
    }
    r.add(p + "meet associative", wm.empty(), wm);
    r.add(p + "join associative", wj.empty(), wj);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (l.meet_of(x, l.join_of(x, y)) != x || l.join_of(x, l.meet_of(x, y)) != x
            || l.join_of(l.meet_of(x, y), y) != y || l.meet_of(l.join_of(x, y), y) != y) {
          first(nm[x] + "," + nm[y]);
        }
      }
    }
    r.add(p + "absorption", w.empty(), w);

    std::string wl, wr;
    for (Index x = 0; x < n && (wl.empty() || wr.empty()); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (wl.empty()
              && l.meet_of(x, l.join_of(y, z)) != l.join_of(l.meet_of(x, y), l.meet_of(x, z))) {
            wl = nm[x] + "," + nm[y] + "," + nm[z];
          }
          if (wr.empty()
              && l.meet_of(l.join_of(x, y), z) != l.join_of(l.meet_of(x, z), l.meet_of(y, z))) {
            wr = nm[x] + "," + nm[y] + "," + nm[z];
          }
        }
      }
    }
    r.add(p + "strong distributivity (left)", wl.empty(), wl);
    r.add(p + "strong distributivity (right)", wr.empty(), wr);

    w.clear();
    if (l.bottom == kNone || l.bottom >= n) {
      first("no bottom given");
    } else {
      for (Index x = 0; x < n; ++x) {
        if (l.join_of(l.bottom, x) != x || l.join_of(x, l.bottom) != x
            || l.meet_of(l.bottom, x) != l.bottom) {
          first(nm[x]);
        }
      }
    }
    r.add(p + "bottom", w.empty(), w);
    return r;
  }

  GreenDecomposition green_decomposition(SkewLattice const& l) {
    auto const         n = static_cast<Index>(l.size());
    GreenDecomposition g;
    g.projection.assign(n, kNone);
    for (Index x = 0; x < n; ++x) {
      if (g.projection[x] != kNone) {
        continue;
      }
      auto const c = static_cast<Index>(g.classes.size());
      g.classes.emplace_back();
      for (Index y = x; y < n; ++y) {
        if (g.projection[y] == kNone && l.d_related(x, y)) {
          g.projection[y] = c;
          g.classes[c].push_back(y);
        }
      }
    }
    for (auto const& cls : g.classes) {
      for (Index a : cls) {
        for (Index b : cls) {
          if (!l.d_related(a, b)) {
            throw Error(ErrorKind::NotACongruence,
                        "D is not transitive at " + l.names[a] + "," + l.names[b]);
          }
        }
      }
    }
    auto const m = static_cast<Index>(g.classes.size());
    auto&      q = g.quotient;
    q.meet.assign(std::size_t{m} * m, kNone);
    q.join.assign(std::size_t{m} * m, kNone);
    for (auto const& cls : g.classes) {
      std::string name;
      if (cls.size() == 1) {
        name = l.names[cls[0]];
      } else {
        name = "{";
        for (std::size_t i = 0; i < cls.size(); ++i) {
          name += (i > 0 ? "," : "") + l.names[cls[i]];
        }
        name += "}";
      }
      q.names.push_back(name);
    }
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        Index const a  = g.projection[x];
        Index const b  = g.projection[y];
        Index const pm = g.projection[l.meet_of(x, y)];
        Index const pj = g.projection[l.join_of(x, y)];
        auto&       qm = q.meet[a * m + b];
        auto&       qj = q.join[a * m + b];
        if ((qm != kNone && qm != pm) || (qj != kNone && qj != pj)) {
          Index const x0 = g.classes[a][0];
          Index const y0 = g.classes[b][0];
          throw Error(ErrorKind::NotACongruence, "(" + l.names[x] + "," + l.names[y] + ") vs ("
                                                     + l.names[x0] + "," + l.names[y0] + ")");
        }
        qm = pm;
        qj = pj;
      }
    }
    if (l.bottom != kNone && l.bottom < n) {
      q.bottom = g.projection[l.bottom];
    }
    g.order.assign(std::size_t{m} * m, false);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        g.order[a * m + b] = q.meet_of(a, b) == a;
      }
    }
    for (Index c = 0; c < m; ++c) {
      bool top = true;
      for (Index a = 0; a < m && top; ++a) {
        top = g.class_leq(a, c);
      }
      if (top) {
        g.top_class = c;
        break;
      }
    }
    return g;
  }

  std::vector<bool> natural_order(SkewLattice const& l) {
    auto const        n = static_cast<Index>(l.size());
    std::vector<bool> out(std::size_t{n} * n);
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        out[x * n + y] = l.leq(x, y);
      }
    }
    return out;
  }

  DownSet downset(SkewLattice const& l, Index x) {
    auto const n = static_cast<Index>(l.size());
    DownSet    d;
    for (Index y = 0; y < n; ++y) {
      if (l.leq(y, x)) {
        d.elements.push_back(y);
      }
    }
    auto const         k = static_cast<Index>(d.elements.size());
    std::vector<Index> local(n, kNone);
    for (Index i = 0; i < k; ++i) {
      local[d.elements[i]] = i;
      d.tables.names.push_back(l.names[d.elements[i]]);
    }
    auto& t = d.tables;
    t.meet.resize(std::size_t{k} * k);
    t.join.resize(std::size_t{k} * k);
    std::string w;
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        Index const m = local[l.meet_of(d.elements[i], d.elements[j])];
        Index const v = local[l.join_of(d.elements[i], d.elements[j])];
        if ((m == kNone || v == kNone) && w.empty()) {
          w = l.names[d.elements[i]] + "," + l.names[d.elements[j]];
        }
        t.meet[i * k + j] = m == kNone ? 0 : m;
        t.join[i * k + j] = v == kNone ? 0 : v;
      }
    }
    std::string const label = l.names[x] + "↓.";
    d.report.add(label + "closed", w.empty(), w);
    t.top = local[x];
    for (Index i = 0; i < k; ++i) {
      bool least = true;
      for (Index j = 0; j < k && least; ++j) {
        least = t.meet[i * k + j] == i;
      }
      if (least) {
        t.bottom = i;
        break;
      }
    }
    if (w.empty()) {
      t.imp.resize(std::size_t{k} * k);
      for (Index i = 0; i < k && !t.imp.empty(); ++i) {
        for (Index j = 0; j < k; ++j) {
          auto z = pseudocomplement(t, i, j);
          if (!z) {
            t.imp.clear();
            break;
          }
          t.imp[i * k + j] = *z;
        }
      }
    }
    d.report.append(check_heyting(t), label);
    return d;
  }

  SkewLattice phat(std::vector<std::string> const& p) {
    if (p.empty()) {
      throw Error(ErrorKind::EmptyP, "P must be nonempty");
    }
    SkewLattice l;
    l.names.push_back("0");
    l.names.insert(l.names.end(), p.begin(), p.end());
    auto const n = static_cast<Index>(l.size());
    l.meet.resize(std::size_t{n} * n);
    l.join.resize(std::size_t{n} * n);
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        l.meet[x * n + y] = (x == 0 || y == 0) ? 0 : x;
        l.join[x * n + y] = x == 0 ? y : (y == 0 ? x : y);
      }
    }
    l.bottom = 0;
    return l;
  }

  SkewLattice product(SkewLattice const& a, SkewLattice const& b) {
    SkewLattice l;
    auto const  na = static_cast<Index>(a.size());
    auto const  nb = static_cast<Index>(b.size());
    auto const  n  = na * nb;
    for (Index x = 0; x < na; ++x) {
      for (Index y = 0; y < nb; ++y) {
        l.names.push_back("(" + a.names[x] + "," + b.names[y] + ")");
      }
    }
    l.meet.resize(std::size_t{n} * n);
    l.join.resize(std::size_t{n} * n);
    for (Index u = 0; u < n; ++u) {
      for (Index v = 0; v < n; ++v) {
        Index const x1 = u / nb, y1 = u % nb, x2 = v / nb, y2 = v % nb;
        l.meet[u * n + v] = a.meet_of(x1, x2) * nb + b.meet_of(y1, y2);
        l.join[u * n + v] = a.join_of(x1, x2) * nb + b.join_of(y1, y2);
      }
    }
    if (a.bottom != kNone && b.bottom != kNone) {
      l.bottom = a.bottom * nb + b.bottom;
    }
    return l;
  }

  std::vector<std::vector<Index>> enumerate_morphisms(SkewLattice const& l, SkewLattice const& m) {
    if (m.size() > 6) {
      throw Error(ErrorKind::TooLarge, "morphism enumeration caps the target at 6 elements");
    }
    auto const                      n = static_cast<Index>(l.size());
    auto const                      k = static_cast<Index>(m.size());
    std::vector<std::vector<Index>> out;
    if (n == 0) {
      out.emplace_back();
      return out;
    }
    if (k == 0) {
      return out;
    }
    std::vector<Index> f(n, 0);
    // Every product whose three ids are ≤ x is checked once x is assigned.
    auto ok = [&](Index x) {
      for (Index a = 0; a <= x; ++a) {
        for (Index b = 0; b <= x; ++b) {
          if (a != x && b != x && l.meet_of(a, b) != x && l.join_of(a, b) != x) {
            continue;
          }
          Index const mab = l.meet_of(a, b);
          Index const jab = l.join_of(a, b);
          if (mab <= x && f[mab] != m.meet_of(f[a], f[b])) {
            return false;
          }
          if (jab <= x && f[jab] != m.join_of(f[a], f[b])) {
            return false;
          }
        }
      }
      return true;
    };
    Index x = 0;
    while (true) {
      if (f[x] < k && ok(x)) {
        if (x + 1 == n) {
          out.push_back(f);
          ++f[x];
        } else {
          ++x;
          f[x] = 0;
        }
        continue;
      }
      if (f[x] < k) {
        ++f[x];
        continue;
      }
      if (x == 0) {
        break;
      }
      --x;
      ++f[x];
    }
    return out;
  }

  bool factors_through(GreenDecomposition const& g, std::vector<Index> const& f) {
    for (auto const& cls : g.classes) {
      for (Index x : cls) {
        if (f[x] != f[cls[0]]) {
          return false;
        }
      }
    }
    return true;
  }

}  // namespace nctopos
