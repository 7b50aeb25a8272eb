#include <catch_amalgamated.hpp>

#include "properties.hpp"

TEST_CASE("random categories and skew lattices keep their invariants") {
  auto const t = props::run(40, 7);
  for (auto const& v : t.violations) UNSCOPED_INFO(v);
  CHECK(t.instances == 40);
  CHECK(t.checks > 400);
  CHECK(t.violations.empty());
}
