#include <catch_amalgamated.hpp>

#include "nctopos/classif.hpp"
#include "nctopos/digraph.hpp"
#include "oracles.hpp"

using namespace nctopos;

TEST_CASE("digraph classifier sizes match the sieve count") {
  auto const  site = digraph_site();
  auto const& cat  = *site;
  auto const  b    = digraph_classifier_build(site);
  for (Index c = 0; c < cat.object_count(); ++c) {
    auto const p = loops_presheaf(site).size(c);
    CHECK(b.classifier.H.at(c).size() == oracle::pullback_size(cat, c, p));
    std::size_t tops = 1;
    for (std::size_t i = 0; i < cat.arrows_into(c).size(); ++i) tops *= p;
    CHECK(b.classifier.tops[c].size() == tops);
  }
  CHECK(b.classifier.report.passed());
  CHECK(verify_nch_presheaf(b.classifier.H).passed());
}

TEST_CASE("fused classifier: T, sections and Sub_H(yC)") {
  auto const  site = digraph_site();
  auto const& cat  = *site;
  auto const  c    = digraph_classifier(site);
  CHECK(c->T.size(cat.object("V")) == 1);
  CHECK(c->T.size(cat.object("E")) == 4);
  CHECK(edge_colors(*c) == std::vector<std::string>{"aa", "ab", "ba", "bb"});
  CHECK(top_sections(*c).size() == 4);
  for (Index o = 0; o < cat.object_count(); ++o) {
    CHECK(yoneda_consistency(*c, o).passed());
    auto const y = sub_H_yoneda(*c, o);
    CHECK(y.algebra.size() == c->H.at(o).size());
    CHECK(y.report.passed());
  }
}

TEST_CASE("Sub_H of the loops and its shadow") {
  auto const site = digraph_site();
  auto const c    = digraph_classifier(site);
  auto const p    = loops_presheaf(site);
  auto const s    = sub_H(p, *c);
  CHECK(s.report.passed());
  // A map P → H picks x ∈ H(V) and a, b ∈ H(E) restricting to x.
  std::size_t want = 0;
  auto const& cat  = *site;
  Index const V = cat.object("V"), E = cat.object("E");
  for (Index x = 0; x < c->H.at(V).size(); ++x) {
    std::size_t over = 0;
    for (Index y = 0; y < c->H.at(E).size(); ++y) {
      if (c->H.act(cat.arrow("s"), y) == x && c->H.act(cat.arrow("t"), y) == x) ++over;
    }
    want += over * over;
  }
  CHECK(s.maps.size() == want);
  auto const sp = shadow_projection(s, p, *c);
  CHECK(sp.report.passed());

  auto const ops = pointwise_nat_ops(p, *c, s.maps[1], s.maps[s.maps.size() - 1]);
  CHECK(ops.report.passed());
  CHECK(s.index_of(ops.meet) != kNone);
  CHECK(s.index_of(ops.join) != kNone);
  CHECK(s.index_of(ops.imp) != kNone);
}

TEST_CASE("construction preconditions") {
  auto const site = digraph_site();
  // Two vertices and an edge between them: no global section.
  Presheaf const p(site, {{"x", "y"}, {"e"}}, {{}, {}, {0}, {1}});
  CHECK_THROWS_AS(build_classifier(site, p, {0, 0}), Error);
  try {
    build_classifier(site, p, {0, 0});
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::NoGlobalSection);
  }

  // Boolean everywhere: H/D is 2 at E, not Ω(E).
  auto const omega = digraph_omega(site);
  auto const two   = from_heyting(omega.algebra(site->object("V")));
  std::vector<std::vector<Index>> act(site->arrow_count(), std::vector<Index>{0, 1});
  NCHPresheaf h(site, {two, two}, act);
  try {
    make_classifier(h, omega);
    FAIL("accepted a non-classifier");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::NotAClassifier);
  }
}
