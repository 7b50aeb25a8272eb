#include <catch_amalgamated.hpp>

#include "nctopos/digraph.hpp"
#include "nctopos/topol.hpp"
#include "oracles.hpp"

using namespace nctopos;

TEST_CASE("Lawvere-Tierney enumeration against brute force") {
  std::mt19937 rng(5);
  int          tried = 0;
  for (int i = 0; i < 80 && tried < 40; ++i) {
    auto const          site = make_site(gen::category(rng));
    OmegaPresheaf const omega(site);
    bool                small = true;
    for (Index c = 0; c < site->object_count(); ++c) small = small && omega.size(c) <= 7;
    if (!small) continue;
    ++tried;
    std::vector<std::vector<std::vector<Index>>> got;
    for (auto const& j : enumerate_lawvere(omega)) {
      CHECK(verify_lawvere(omega, j).passed());
      got.push_back(j.j);
    }
    CHECK(got == oracle::lawvere(omega));
  }
  CHECK(tried >= 20);
}

TEST_CASE("named topologies") {
  auto const site  = digraph_site();
  auto const omega = digraph_omega(site);
  auto const id    = identity_lawvere(omega);
  CHECK(verify_lawvere(omega, id).passed());
  CHECK(lt_to_gt(omega, id) == digraph_topology(omega, "J1"));
  CHECK(lt_to_gt(omega, id) == chaotic_topology(omega));
  CHECK(discrete_topology(omega) == digraph_topology(omega, "J4"));
  for (std::string n : {"J1", "J2", "J3", "J4"}) {
    auto const g = digraph_topology(omega, n);
    CHECK(verify_grothendieck(omega, g).passed());
    CHECK(lt_to_gt(omega, gt_to_lt(omega, g)) == g);
  }
}

TEST_CASE("axiom failures are reported") {
  auto const site  = digraph_site();
  auto const omega = digraph_omega(site);
  auto       j     = identity_lawvere(omega);
  Index const E    = site->object("E");
  // S ↦ U alone breaks naturality against T and meets: S ∧ T = 0 but U ∧ T = T.
  auto const& names = omega.algebra(E).names;
  auto idx = [&](std::string const& n) {
    return static_cast<Index>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  j.j[E][idx("S")] = idx("U");
  CHECK_FALSE(verify_lawvere(omega, j).passed());

  GrothendieckTopology g = digraph_topology(omega, "J2");
  g.covers[E] = {idx("S")};  // not even the maximal sieve
  CHECK_FALSE(verify_grothendieck(omega, g).passed());
  CHECK_THROWS_AS(gt_to_lt(omega, g), Error);
}

TEST_CASE("NC topologies on the unfused and fused classifiers") {
  auto const site = digraph_site();
  for (bool fuse : {false, true}) {
    auto const c   = digraph_classifier(site, fuse);
    auto const ncs = enumerate_nc_lawvere(*c);
    CHECK(ncs == enumerate_nc_lawvere_raw(*c));
    CHECK(std::find(ncs.begin(), ncs.end(), identity_nc_lawvere(*c)) != ncs.end());
    for (auto const& j : ncs) {
      CHECK(verify_nc_lawvere(*c, j).passed());
      for (Index o = 0; o < site->object_count(); ++o) CHECK(closure_yoneda_check(*c, j, o).passed());
    }
  }
}

TEST_CASE("covers of nclt:1000") {
  auto const  site = digraph_site();
  auto const  c    = digraph_classifier(site);
  Index const E    = site->object("E");
  auto const  j    = digraph_nc_topology(*c, "1000");
  CHECK(nc_topology_name(*c, j) == "nclt:1000");
  CHECK(covered_masks(*c, j)[E] != 0);
  auto const g = derive_nc_grothendieck(*c, j);
  std::vector<std::string> names;
  for (auto x : g.covers[E]) names.push_back(c->H.at(E).name(x));
  std::sort(names.begin(), names.end());
  CHECK(names == std::vector<std::string>{"1_aa", "1_ab", "1_ba", "1_bb", "U_aa"});
  auto const s = sub_H(terminal_presheaf(site), *c);
  CHECK(closure_on_subH(*c, j, s, terminal_presheaf(site)).report.passed());
  CHECK_THROWS_AS(digraph_nc_topology(*c, "10"), Error);
  CHECK_THROWS_AS(digraph_nc_topology(*c, "10x0"), Error);
}

TEST_CASE("restriction to a section refuses an unstable j") {
  auto const  site = digraph_site();
  auto const  c    = digraph_classifier(site);
  Index const E    = site->object("E");
  auto        j    = identity_nc_lawvere(*c);
  // U_aa ↦ 1_ab leaves 1_aa↓.
  auto find = [&](std::string const& n) {
    for (Index x = 0; x < c->H.at(E).size(); ++x) {
      if (c->H.at(E).name(x) == n) return x;
    }
    return kNone;
  };
  j.j[E][find("U_aa")] = find("1_ab");
  CHECK_FALSE(verify_nc_lawvere(*c, j).passed());
  std::vector<Index> g;
  for (auto const& s : top_sections(*c)) {
    if (c->H.at(E).name(s[E]) == "1_aa") g = s;
  }
  REQUIRE_FALSE(g.empty());
  CHECK_THROWS_AS(restrict_to_section(*c, j, g), Error);
}
