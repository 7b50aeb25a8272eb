#include <catch_amalgamated.hpp>

#include <algorithm>

#include "nctopos/digraph.hpp"
#include "nctopos/fincat.hpp"
#include "oracles.hpp"

using namespace nctopos;

namespace {

  ErrorKind kind_of(std::function<void()> const& f) {
    try {
      f();
    } catch (Error const& e) {
      return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Parse;
  }

  std::vector<std::uint64_t> masks(std::vector<Sieve> const& s) {
    std::vector<std::uint64_t> m;
    for (auto const& x : s) m.push_back(x.mask);
    std::sort(m.begin(), m.end());
    return m;
  }

}  // namespace

TEST_CASE("validation names the failing axiom") {
  RawCategory missing{{"A", "B", "C"}, {{"f", "A", "B"}, {"g", "B", "C"}}, {}};
  CHECK(kind_of([&] { make_site(missing); }) == ErrorKind::MissingComposite);

  // a∘a = b, a∘b = a, b∘a = b, b∘b = b: (a∘b)∘a ≠ a∘(b∘a)
  RawCategory nonassoc{{"M"},
                       {{"a", "M", "M"}, {"b", "M", "M"}},
                       {{"a", "a", "b"}, {"a", "b", "a"}, {"b", "a", "b"}, {"b", "b", "b"}}};
  CHECK(kind_of([&] { make_site(nonassoc); }) == ErrorKind::NonAssociative);

  RawCategory bad{{"A", "B", "C"}, {{"f", "A", "B"}, {"g", "B", "C"}, {"h", "B", "C"}}, {{"g", "f", "h"}}};
  CHECK(kind_of([&] { make_site(bad); }) == ErrorKind::BadComposite);

  CHECK(kind_of([&] { digraph_site()->object("W"); }) == ErrorKind::UnknownObject);
}

TEST_CASE("digraph site shape") {
  auto const  site = digraph_site();
  auto const& cat  = *site;
  CHECK(cat.object_count() == 2);
  CHECK(cat.arrow_count() == 4);
  CHECK(cat.is_direct());
  CHECK(is_digraph_site(cat));
  CHECK(cat.arrows_into(cat.object("E")).size() == 3);
  CHECK(cat.hom(cat.object("V"), cat.object("E")).size() == 2);
}

TEST_CASE("sieve enumerators agree with brute force on random categories") {
  std::mt19937 rng(7);
  for (int i = 0; i < 60; ++i) {
    auto const  site = make_site(gen::category(rng));
    auto const& cat  = *site;
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const want = oracle::sieve_masks(cat, c);
      CHECK(masks(enumerate_sieves(cat, c)) == want);
      CHECK(masks(enumerate_sieves_by_filter(cat, c)) == want);
      CHECK(masks(enumerate_sieves_by_closure(cat, c)) == want);
      CHECK(std::find(want.begin(), want.end(), maximal_sieve(cat, c).mask) != want.end());
    }
    CHECK(OmegaPresheaf(site).verify().passed());
  }
}

TEST_CASE("presheaf functoriality is enforced") {
  auto const site = make_site(RawCategory{{"G"}, {{"g", "G", "G"}}, {{"g", "g", "id_G"}}});
  // g∘g = id but g collapses both elements.
  CHECK(kind_of([&] { Presheaf(site, {{"x", "y"}}, {{0, 1}, {0, 0}}); }) == ErrorKind::NotAPresheaf);
  Presheaf const swap(site, {{"x", "y"}}, {{}, {1, 0}});
  CHECK(global_sections(swap).empty());
}

TEST_CASE("Yoneda: maps out of yC are the elements at C") {
  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto const  site = make_site(gen::category(rng));
    auto const& cat  = *site;
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const y = yoneda_presheaf(site, c);
      for (Index d = 0; d < cat.object_count(); ++d) CHECK(y.size(d) == cat.hom(d, c).size());
      auto const p = coproduct(terminal_presheaf(site), yoneda_presheaf(site, 0));
      CHECK(enumerate_nat_trans(y, p).size() == p.size(c));
    }
  }
}

TEST_CASE("subobjects round-trip through classifying maps") {
  std::mt19937 rng(3);
  for (int i = 0; i < 25; ++i) {
    auto const  site  = make_site(gen::category(rng));
    auto const& cat   = *site;
    OmegaPresheaf const omega(site);
    auto const  p     = yoneda_presheaf(site, static_cast<Index>(i % cat.object_count()));
    auto const  subs  = enumerate_subpresheaves(p);
    for (auto const& q : subs) {
      CHECK(is_subpresheaf(p, q));
      auto const chi = classifying_map(p, q, omega);
      CHECK(is_natural(p, omega.presheaf(), chi));
      CHECK(pullback_of_true(p, chi, omega) == q);
    }
    // Sub(yC) ≅ Ω(C)
    CHECK(subs.size() == omega.size(static_cast<Index>(i % cat.object_count())));
    CHECK(subobject_lattice(p, omega).report.passed());
  }
}

TEST_CASE("global sections of the loops presheaf") {
  auto const site = digraph_site();
  CHECK(global_sections(loops_presheaf(site)).size() == 2);
  CHECK(global_sections(terminal_presheaf(site)).size() == 1);
  CHECK(global_sections(empty_presheaf(site)).empty());
}
