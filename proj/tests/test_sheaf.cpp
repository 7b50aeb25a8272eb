#include <catch_amalgamated.hpp>

#include <numeric>

#include "nctopos/canonical.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/sheaf.hpp"
#include "oracles.hpp"

using namespace nctopos;

namespace {

  CoverSystem classical(std::string const& name) {
    auto const omega = digraph_omega(digraph_site());
    auto       sys   = CoverSystem::classical(omega, digraph_topology(omega, name));
    sys.name         = name;
    return sys;
  }

  ColoredDigraph graph(std::vector<std::string> v, std::vector<ColoredEdge> e) {
    return ColoredDigraph{std::move(v), std::move(e)};
  }

  // Same graph with vertices and edges listed in another order.
  SlicePresheaf shuffled(SlicePresheaf const& f, Classifier const* c, std::mt19937& rng) {
    auto g = to_digraph(f, c);
    std::shuffle(g.vertices.begin(), g.vertices.end(), rng);
    std::shuffle(g.edges.begin(), g.edges.end(), rng);
    return to_presheaf(f.F.site(), g, c);
  }

}  // namespace

TEST_CASE("presheaf counts against the iso-class oracle") {
  auto const site = digraph_site();
  auto const c    = digraph_classifier(site);
  CHECK(enumerate_presheaves(site, nullptr, Bounds{{2, 3}}).items.size() == oracle::digraph_classes(2, 3, 1));
  CHECK(enumerate_presheaves(site, nullptr, Bounds{{3, 4}}).items.size() == oracle::digraph_classes(3, 4, 1));
  CHECK(enumerate_presheaves(site, c.get(), Bounds{{2, 3}}).items.size() == oracle::digraph_classes(2, 3, 4));
}

TEST_CASE("classical sheaves on the digraph site") {
  Bounds const b{{3, 4}};
  // J1: only maximal covers, everything is a sheaf.
  CHECK(enumerate_sheaves(classical("J1"), b).items.size() == oracle::digraph_classes(3, 4, 1));
  // J2: complete digraphs.
  CHECK(enumerate_sheaves(classical("J2"), b).items.size() == oracle::complete_digraph_classes(3, 4, 1));
  // J3: one vertex, any number of loops.
  CHECK(enumerate_sheaves(classical("J3"), b).items.size() == 5);
  // J4: only the terminal presheaf.
  auto const j4 = enumerate_sheaves(classical("J4"), b);
  REQUIRE(j4.items.size() == 1);
  CHECK(j4.items[0].F.total_size() == 2);
}

TEST_CASE("check_sheaf reports a counterexample") {
  auto const site = digraph_site();
  auto const sys  = classical("J2");
  auto const f    = to_presheaf(site, graph({"p", "q"}, {{"e", "p", "q", ""}}), nullptr);
  auto const v    = check_sheaf(sys, f);
  CHECK_FALSE(v.sheaf);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->extensions == 0);
  CHECK(v.counterexample->object == site->object("E"));
}

TEST_CASE("NC sheaves ignore edge colors of extensions") {
  auto const site = digraph_site();
  auto const c    = digraph_classifier(site);
  auto const sys  = CoverSystem::nc(c, derive_nc_grothendieck(*c, digraph_nc_topology(*c, "1000")));
  auto const loop = to_presheaf(site, graph({"p"}, {{"e", "p", "p", "bb"}}), c.get());
  CHECK(check_sheaf(sys, loop).sheaf);
  auto const two = to_presheaf(site, graph({"p"}, {{"e", "p", "p", "aa"}, {"f", "p", "p", "ab"}}), c.get());
  CHECK_FALSE(check_sheaf(sys, two).sheaf);
  SlicePresheaf bare{loop.F, std::nullopt};
  CHECK_THROWS_AS(check_sheaf(sys, bare), Error);
}

TEST_CASE("canonical codes are invariant under relabeling") {
  auto const   site = digraph_site();
  auto const   c    = digraph_classifier(site);
  std::mt19937 rng(9);
  auto const   all  = enumerate_presheaves(site, c.get(), Bounds{{3, 3}});
  for (std::size_t i = 0; i < all.items.size(); i += 37) {
    auto const& f    = all.items[i];
    auto const  code = canonical_form(f).code;
    CHECK(canonical_form(shuffled(f, c.get(), rng)).code == code);
    CHECK(isomorphic(f, shuffled(f, c.get(), rng)));
    auto const back = from_profiles(site, decode_code(*site, code), true);
    CHECK(canonical_form(back).code == code);
  }
  CHECK_FALSE(isomorphic(all.items[1], all.items[2]));
}

TEST_CASE("jobs do not change the enumeration") {
  auto const site = digraph_site();
  auto const c    = digraph_classifier(site);
  auto const sys  = CoverSystem::nc(c, derive_nc_grothendieck(*c, digraph_nc_topology(*c, "0110")));
  EnumerationOptions one, two;
  two.jobs     = 2;
  auto const a = enumerate_sheaves(sys, Bounds{{2, 4}}, one);
  auto const b = enumerate_sheaves(sys, Bounds{{2, 4}}, two);
  REQUIRE(a.items.size() == b.items.size());
  for (std::size_t i = 0; i < a.items.size(); ++i) CHECK(canonical_form(a.items[i]).code == canonical_form(b.items[i]).code);
}

TEST_CASE("non-direct sites use the labeled search") {
  auto const site = make_site(RawCategory{{"G"}, {{"g", "G", "G"}}, {{"g", "g", "id_G"}}});
  // Z/2-sets: a fixed points and b swapped pairs with a + 2b ≤ 3.
  CHECK(enumerate_presheaves(site, nullptr, Bounds{{3}}).items.size() == 6);
  EnumerationOptions tight;
  tight.max_labeled = 10;
  CHECK_THROWS_AS(enumerate_presheaves(site, nullptr, Bounds{{6}}, tight), Error);
}

TEST_CASE("terminal search") {
  auto const site = digraph_site();
  auto const j1   = terminal_search(classical("J1"), Bounds{{2, 2}});
  REQUIRE(j1.kind == TerminalKind::Terminal);
  CHECK(j1.terminal->F.total_size() == 2);

  auto const c   = digraph_classifier(site);
  auto const sys = CoverSystem::nc(c, derive_nc_grothendieck(*c, digraph_nc_topology(*c, "1111")));
  auto const r   = terminal_search(sys, Bounds{{2, 4}});
  REQUIRE(r.kind == TerminalKind::NoTerminal);
  REQUIRE(r.certificate);
  CHECK(slice_morphisms(r.certificate->first, r.certificate->second).empty());
  CHECK(slice_morphisms(r.certificate->second, r.certificate->first).empty());
  CHECK(r.eliminated.size() == r.sheaves);
  for (auto const& e : r.eliminated) CHECK(e.maps != 1);

  auto const aa = to_presheaf(site, graph({"p"}, {{"e", "p", "p", "aa"}}), c.get());
  auto const bb = to_presheaf(site, graph({"p", "q"}, {{"e", "p", "q", "aa"}, {"f", "q", "q", "aa"}}), c.get());
  CHECK(slice_morphisms(bb, aa).size() == 1);
  CHECK(slice_morphisms(aa, bb).size() == 1);
}
