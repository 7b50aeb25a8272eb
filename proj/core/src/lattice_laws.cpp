#include "nctopos/lattice_laws.hpp"

namespace nctopos {

  namespace {
    std::string nm(HeytingTables const& h, Index x) {
      return h.names[x];
    }
  }  // namespace

  Report check_heyting(HeytingTables const& h, std::string_view label) {
    std::string const p(label);
    Report            r;
    auto const        n = static_cast<Index>(h.size());

    std::string w;
    auto        first = [&w](std::string s) {
      if (w.empty()) {
        w = std::move(s);
      }
    };

    w.clear();
    for (Index x = 0; x < n; ++x) {
      if (h.meet_of(x, x) != x) first("meet " + nm(h, x));
      if (h.join_of(x, x) != x) first("join " + nm(h, x));
    }
    r.add(p + "idempotent", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (h.meet_of(x, y) != h.meet_of(y, x) || h.join_of(x, y) != h.join_of(y, x)) {
          first(nm(h, x) + "," + nm(h, y));
        }
      }
    }
    r.add(p + "commutative", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n && w.empty(); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (h.meet_of(h.meet_of(x, y), z) != h.meet_of(x, h.meet_of(y, z))
              || h.join_of(h.join_of(x, y), z) != h.join_of(x, h.join_of(y, z))) {
            first(nm(h, x) + "," + nm(h, y) + "," + nm(h, z));
          }
        }
      }
    }
    r.add(p + "associative", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (h.meet_of(x, h.join_of(y, x)) != x || h.join_of(h.meet_of(x, y), x) != x) {
          first(nm(h, x) + "," + nm(h, y));
        }
      }
    }
    r.add(p + "absorption", w.empty(), w);

    w.clear();
    if (h.bottom == kNone || h.top == kNone) {
      first("missing bound");
    } else {
      for (Index x = 0; x < n; ++x) {
        if (h.meet_of(h.top, x) != x || h.join_of(h.bottom, x) != x) {
          first(nm(h, x));
        }
      }
    }
    r.add(p + "bounded", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n && w.empty(); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (h.meet_of(x, h.join_of(y, z)) != h.join_of(h.meet_of(x, y), h.meet_of(x, z))) {
            first(nm(h, x) + "," + nm(h, y) + "," + nm(h, z));
          }
        }
      }
    }
    r.add(p + "distributive", w.empty(), w);

    bool const have_imp = h.imp.size() == static_cast<std::size_t>(n) * n;
    if (!have_imp) {
      r.add(p + "implication", false, "no implication table");
      return r;
    }

    w.clear();
    for (Index x = 0; x < n; ++x) {
      if (h.imp_of(x, x) != h.top) first(nm(h, x));
    }
    r.add(p + "H1", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (h.meet_of(x, h.imp_of(x, y)) != h.meet_of(x, y)) first(nm(h, x) + "," + nm(h, y));
      }
    }
    r.add(p + "H2", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n; ++x) {
      for (Index y = 0; y < n; ++y) {
        if (h.meet_of(y, h.imp_of(x, y)) != y) first(nm(h, x) + "," + nm(h, y));
      }
    }
    r.add(p + "H3", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n && w.empty(); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (h.imp_of(x, h.meet_of(y, z)) != h.meet_of(h.imp_of(x, y), h.imp_of(x, z))) {
            first(nm(h, x) + "," + nm(h, y) + "," + nm(h, z));
          }
        }
      }
    }
    r.add(p + "H4", w.empty(), w);

    w.clear();
    for (Index x = 0; x < n && w.empty(); ++x) {
      for (Index y = 0; y < n; ++y) {
        for (Index z = 0; z < n; ++z) {
          if (h.leq(h.meet_of(x, y), z) != h.leq(x, h.imp_of(y, z))) {
            first(nm(h, x) + "," + nm(h, y) + "," + nm(h, z));
          }
        }
      }
    }
    r.add(p + "HA", w.empty(), w);
    return r;
  }

  std::optional<Index> pseudocomplement(HeytingTables const& h, Index x, Index y) {
    auto const n    = static_cast<Index>(h.size());
    Index      best = kNone;
    for (Index z = 0; z < n; ++z) {
      if (!h.leq(h.meet_of(z, x), y)) {
        continue;
      }
      if (best == kNone || h.leq(best, z)) {
        best = z;
      }
    }
    if (best == kNone) {
      return std::nullopt;
    }
    for (Index z = 0; z < n; ++z) {
      if (h.leq(h.meet_of(z, x), y) && !h.leq(z, best)) {
        return std::nullopt;
      }
    }
    return best;
  }

}  // namespace nctopos
