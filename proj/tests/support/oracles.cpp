#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>

namespace oracle {

  using nctopos::FiniteCategory;
  using nctopos::OmegaPresheaf;

  std::vector<std::uint64_t> sieve_masks(FiniteCategory const& cat, Index c) {
    auto const&                into = cat.arrows_into(c);
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << into.size()); ++m) {
      bool closed = true;
      for (std::size_t k = 0; k < into.size() && closed; ++k) {
        if ((m >> k & 1U) == 0) continue;
        for (Index g = 0; g < cat.arrow_count() && closed; ++g) {
          if (cat.cod(g) != cat.dom(into[k])) continue;
          Index const h = cat.compose(into[k], g);
          auto const  p = std::find(into.begin(), into.end(), h) - into.begin();
          closed        = (m >> p & 1U) != 0;
        }
      }
      if (closed) out.push_back(m);
    }
    return out;
  }

  std::vector<std::string> hasse(std::vector<std::string> const& names,
                                 std::vector<std::vector<bool>> const& leq) {
    std::vector<std::string> out;
    auto const               n = names.size();
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y || !leq[x][y]) continue;
        bool between = false;
        for (std::size_t z = 0; z < n; ++z) {
          if (z != x && z != y && leq[x][z] && leq[z][y]) between = true;
        }
        if (!between) out.push_back(names[x] + "<" + names[y]);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  namespace {

    std::vector<std::vector<Index>> pointwise(nctopos::HeytingTables const& h) {
      auto const                      m = h.size();
      std::vector<Index>              j(m, nctopos::kNone);
      std::vector<std::vector<Index>> out;
      auto ok = [&]() {
        for (Index a = 0; a < m; ++a) {
          if (j[a] == nctopos::kNone) continue;
          if (a == h.top && j[a] != h.top) return false;
          if (j[j[a]] != nctopos::kNone && j[j[a]] != j[a]) return false;
          for (Index b = 0; b < m; ++b) {
            if (j[b] == nctopos::kNone) continue;
            Index const c = h.meet_of(a, b);
            if (j[c] != nctopos::kNone && j[c] != h.meet_of(j[a], j[b])) return false;
          }
        }
        return true;
      };
      std::function<void(Index)> go = [&](Index a) {
        if (a == m) {
          out.push_back(j);
          return;
        }
        for (Index v = 0; v < m; ++v) {
          j[a] = v;
          if (ok()) go(a + 1);
        }
        j[a] = nctopos::kNone;
      };
      go(0);
      return out;
    }

  }  // namespace

  std::vector<std::vector<std::vector<Index>>> lawvere(OmegaPresheaf const& omega) {
    auto const&                                  cat = *omega.site();
    std::vector<std::vector<std::vector<Index>>> per;
    for (Index c = 0; c < cat.object_count(); ++c) per.push_back(pointwise(omega.algebra(c)));
    std::vector<std::vector<std::vector<Index>>> out;
    std::vector<std::vector<Index>>              cur(cat.object_count());
    std::function<void(Index)>                   go = [&](Index c) {
      if (c == cat.object_count()) {
        for (Index f = 0; f < cat.arrow_count(); ++f) {
          Index const d = cat.dom(f), e = cat.cod(f);
          for (Index s = 0; s < omega.size(e); ++s) {
            if (cur[d][omega.restrict(f, s)] != omega.restrict(f, cur[e][s])) return;
          }
        }
        out.push_back(cur);
        return;
      }
      for (auto const& j : per[c]) {
        cur[c] = j;
        go(c + 1);
      }
    };
    go(0);
    std::sort(out.begin(), out.end());
    return out;
  }

  namespace {

    // Slot p*k + col of a graph on n vertices counts the edges of color col
    // on ordered pair p = src*n + dst.
    std::vector<unsigned> relabel(std::vector<unsigned> const& g, std::vector<int> const& perm,
                                  std::size_t n, std::size_t k) {
      std::vector<unsigned> out(g.size());
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
          for (std::size_t c = 0; c < k; ++c) {
            out[(perm[s] * n + perm[t]) * k + c] = g[(s * n + t) * k + c];
          }
        }
      }
      return out;
    }

    std::vector<unsigned> canonical(std::vector<unsigned> const& g, std::size_t n, std::size_t k) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      auto best = g;
      do {
        best = std::min(best, relabel(g, perm, n, k));
      } while (std::next_permutation(perm.begin(), perm.end()));
      return best;
    }

  }  // namespace

  std::size_t digraph_classes(std::size_t max_v, std::size_t max_e, std::size_t colors) {
    std::size_t total = 0;
    for (std::size_t n = 0; n <= max_v; ++n) {
      std::set<std::vector<unsigned>> seen;
      std::vector<unsigned>           g(n * n * colors, 0);
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t slot, std::size_t left) {
        if (slot == g.size()) {
          seen.insert(canonical(g, n, colors));
          return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
          g[slot] = static_cast<unsigned>(c);
          go(slot + 1, left - c);
        }
        g[slot] = 0;
      };
      go(0, max_e);
      total += seen.size();
    }
    return total;
  }

  std::size_t complete_digraph_classes(std::size_t max_v, std::size_t max_e, std::size_t colors) {
    std::size_t total = 0;
    for (std::size_t n = 0; n <= max_v && n * n <= max_e; ++n) {
      std::set<std::vector<unsigned>> seen;
      std::vector<unsigned>           g(n * n * colors, 0);
      std::function<void(std::size_t)> go = [&](std::size_t pair) {
        if (pair == n * n) {
          seen.insert(canonical(g, n, colors));
          return;
        }
        for (std::size_t c = 0; c < colors; ++c) {
          g[pair * colors + c] = 1;
          go(pair + 1);
          g[pair * colors + c] = 0;
        }
      };
      go(0);
      total += seen.size();
    }
    return total;
  }

  std::size_t pullback_size(FiniteCategory const& cat, Index c, std::size_t p) {
    std::size_t total = 0;
    for (auto m : sieve_masks(cat, c)) {
      std::size_t term = 1;
      for (int i = 0; i < std::popcount(m); ++i) term *= p;
      total += term;
    }
    return total;
  }

}  // namespace oracle

namespace gen {

  using nctopos::RawCategory;

  namespace {

    std::size_t pick(std::mt19937& rng, std::size_t n) {
      return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }

    RawCategory direct(std::mt19937& rng) {
      static char const* const obj[] = {"A", "B", "C"};
      for (;;) {
        RawCategory r;
        auto const  n = 1 + pick(rng, 3);
        for (std::size_t i = 0; i < n; ++i) r.objects.emplace_back(obj[i]);
        std::vector<std::vector<std::vector<std::string>>> hom(n, std::vector<std::vector<std::string>>(n));
        std::size_t                                        count = n;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            auto const k = pick(rng, 3);
            for (std::size_t a = 0; a < k; ++a) {
              auto id = std::string(1, static_cast<char>('a' + count - n));
              hom[i][j].push_back(id);
              r.arrows.push_back({id, obj[i], obj[j]});
              ++count;
            }
          }
        }
        if (n == 3 && !hom[0][1].empty() && !hom[1][2].empty() && hom[0][2].empty()) continue;
        if (count > 8) continue;
        if (n == 3) {
          for (auto const& f : hom[0][1]) {
            for (auto const& g : hom[1][2]) r.compose.push_back({g, f, hom[0][2][pick(rng, hom[0][2].size())]});
          }
        }
        return r;
      }
    }

    RawCategory idempotent(std::mt19937& rng) {
      RawCategory r{{"M"}, {{"e", "M", "M"}}, {{"e", "e", "e"}}};
      if (pick(rng, 2) == 0) {
        r.objects.emplace_back("X");
        r.arrows.push_back({"f", "X", "M"});
        r.arrows.push_back({"g", "X", "M"});
        r.compose.push_back({"e", "f", "g"});
        r.compose.push_back({"e", "g", "g"});
      }
      return r;
    }

    RawCategory z2() {
      return RawCategory{{"G"}, {{"g", "G", "G"}}, {{"g", "g", "id_G"}}};
    }

  }  // namespace

  RawCategory category(std::mt19937& rng) {
    switch (pick(rng, 5)) {
      case 0:
        return idempotent(rng);
      case 1:
        return z2();
      default:
        return direct(rng);
    }
  }

  std::vector<std::string> names(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    static char const* const pool[] = {"p", "q", "r", "s"};
    auto const               n      = lo + pick(rng, hi - lo + 1);
    return std::vector<std::string>(pool, pool + n);
  }

}  // namespace gen
