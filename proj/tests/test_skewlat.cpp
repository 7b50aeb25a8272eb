#include <catch_amalgamated.hpp>

#include "nctopos/skewlat.hpp"

using namespace nctopos;

namespace {

  // Maps L → M preserving ∧ and ∨, by trying every function.
  std::size_t brute_morphisms(SkewLattice const& l, SkewLattice const& m) {
    auto const         n = l.size();
    std::vector<Index> f(n, 0);
    std::size_t        count = 0;
    for (;;) {
      bool ok = true;
      for (Index x = 0; x < n && ok; ++x) {
        for (Index y = 0; y < n && ok; ++y) {
          ok = f[l.meet_of(x, y)] == m.meet_of(f[x], f[y]) && f[l.join_of(x, y)] == m.join_of(f[x], f[y]);
        }
      }
      count += ok ? 1 : 0;
      std::size_t i = 0;
      while (i < n && ++f[i] == m.size()) f[i++] = 0;
      if (i == n) return count;
    }
  }

}  // namespace

TEST_CASE("P-hat is a noncommutative skew lattice with two D-classes") {
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<std::string> p;
    for (std::size_t i = 0; i < k; ++i) p.push_back(std::string(1, static_cast<char>('a' + i)));
    auto const l = phat(p);
    CHECK(l.size() == k + 1);
    CHECK(verify_skew_lattice(l).passed());
    auto const g = green_decomposition(l);
    CHECK(g.classes.size() == 2);
    CHECK(g.classes.back().size() == k);
    CHECK(g.top_class.has_value());
    if (k >= 2) CHECK_FALSE(l.commute(1, 2));
  }
  CHECK_THROWS_AS(phat({}), Error);
}

TEST_CASE("products multiply sizes and keep the laws") {
  auto const l = product(phat({"a", "b"}), phat({"x", "y", "z"}));
  CHECK(l.size() == 12);
  CHECK(verify_skew_lattice(l).passed());
  auto const g = green_decomposition(l);
  CHECK(g.classes.size() == 4);
  CHECK(g.quotient.size() == 4);
}

TEST_CASE("natural order is a partial order") {
  auto const l   = product(phat({"a", "b"}), phat({"c"}));
  auto const ord = natural_order(l);
  auto const n   = l.size();
  for (Index x = 0; x < n; ++x) {
    CHECK(ord[x * n + x]);
    for (Index y = 0; y < n; ++y) {
      if (x != y && ord[x * n + y]) CHECK_FALSE(ord[y * n + x]);
      for (Index z = 0; z < n; ++z) {
        if (ord[x * n + y] && ord[y * n + z]) CHECK(ord[x * n + z]);
      }
    }
  }
}

TEST_CASE("down-sets are distributive lattices") {
  auto const l = product(phat({"a", "b"}), phat({"c", "d"}));
  for (Index x = 0; x < l.size(); ++x) CHECK(downset(l, x).report.passed());
}

TEST_CASE("morphism enumeration matches brute force") {
  auto const l = phat({"a", "b"});
  auto const two = phat({"t"});
  auto const m   = product(two, two);
  CHECK(enumerate_morphisms(l, two).size() == brute_morphisms(l, two));
  CHECK(enumerate_morphisms(l, m).size() == brute_morphisms(l, m));
  CHECK(enumerate_morphisms(l, phat({"x", "y"})).size() == brute_morphisms(l, phat({"x", "y"})));
  // Into a commutative lattice every morphism is constant on D-classes.
  auto const g = green_decomposition(l);
  for (auto const& f : enumerate_morphisms(l, m)) CHECK(factors_through(g, f));
}
