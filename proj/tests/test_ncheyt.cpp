#include <catch_amalgamated.hpp>

#include <bit>

#include "nctopos/digraph.hpp"
#include "nctopos/ncheyt.hpp"
#include "oracles.hpp"

using namespace nctopos;

namespace {

  HeytingTables omega_e() {
    auto const site = digraph_site();
    return digraph_omega(site).algebra(site->object("E"));
  }

  // Σ over u of |p|^|supp u|
  std::size_t expected_size(Embedding const& e, std::size_t p) {
    std::size_t n = 0;
    for (auto s : e.support) {
      std::size_t t = 1;
      for (int i = 0; i < std::popcount(s); ++i) t *= p;
      n += t;
    }
    return n;
  }

}  // namespace

TEST_CASE("a Heyting algebra is an NC Heyting algebra with one top") {
  auto const h = from_heyting(omega_e());
  CHECK(verify_nc_heyting(h).passed());
  CHECK(top_class(h).size() == 1);
  CHECK(structure_checks(h).passed());
  CHECK(verify_completeness(h).passed());
}

TEST_CASE("pullback construction over Ω(E)") {
  auto const h = omega_e();
  auto const e = join_irreducible_embedding(h);
  CHECK(e.index_names.size() == 3);  // S, T, 1
  validate_embedding(h, e);
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::string> p;
    for (std::size_t i = 0; i < k; ++i) p.push_back(std::string(1, static_cast<char>('a' + i)));
    auto const pb = pullback_construct(h, p, e, std::vector<Index>(3, 0));
    CHECK(pb.algebra.size() == expected_size(e, k));
    CHECK(top_class(pb.algebra).size() == k * k * k);
    CHECK(verify_nc_heyting(pb.algebra).passed());
    CHECK(structure_checks(pb.algebra).passed());
    if (k <= 2) CHECK(verify_completeness(pb.algebra).passed());
  }
  CHECK_THROWS_AS(pullback_construct(h, {}, e, {0, 0, 0}), Error);
}

TEST_CASE("embeddings are validated") {
  auto const h = omega_e();
  auto       e = join_irreducible_embedding(h);
  e.support[1] = e.support[2];
  CHECK_THROWS_AS(validate_embedding(h, e), Error);
}

TEST_CASE("a damaged implication is caught with a witness") {
  auto const h  = omega_e();
  auto       pb = pullback_construct(h, {"a", "b"}, join_irreducible_embedding(h), {0, 0, 0}).algebra;
  // 0 → 0 should be t
  pb.imp[pb.bottom() * pb.size() + pb.bottom()] = pb.bottom();
  auto const r = verify_nc_heyting(pb);
  CHECK_FALSE(r.passed());
}

TEST_CASE("fusing tops by coordinates") {
  auto const h  = omega_e();
  auto const e  = join_irreducible_embedding(h);
  auto const pb = pullback_construct(h, {"a", "b"}, e, {0, 0, 0});
  // keep every coordinate but the last
  std::uint64_t keep = 0;
  for (std::size_t i = 0; i < e.index_names.size(); ++i) {
    if (e.index_names[i] != "1") keep |= std::uint64_t{1} << i;
  }
  auto const f = fuse_coordinates(pb, keep);
  CHECK(f.algebra.size() == 13);
  CHECK(top_class(f.algebra).size() == 4);
  CHECK(verify_nc_heyting(f.algebra).passed());

  // D itself is a congruence; merging 0 with an atom is not.
  auto const        g = green_decomposition(pb.algebra.base);
  CHECK(is_congruence(pb.algebra, g.projection));
  std::vector<Index> key(pb.algebra.size());
  for (Index x = 0; x < key.size(); ++x) key[x] = x;
  Index atom = kNone;
  for (Index x = 0; x < key.size(); ++x) {
    if (pb.shadow[x] != h.bottom && atom == kNone && h.names[pb.shadow[x]] == "S") atom = x;
  }
  REQUIRE(atom != kNone);
  key[atom] = key[pb.algebra.bottom()];
  CHECK_FALSE(is_congruence(pb.algebra, key));
  CHECK_THROWS_AS(fuse_tops(pb.algebra, key), Error);
}
