#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/sheaf.hpp"

using nctopos::cli::run_command;
using Json = nlohmann::ordered_json;

namespace {

  Json run_json(std::vector<std::string> const& args, int expect) {
    auto const o = run_command(args);
    INFO(o.out << o.err);
    CHECK(o.code == expect);
    return Json::parse(o.out);
  }

  std::string write(std::string const& name, std::string const& text) {
    std::ofstream(name) << text;
    return name;
  }

}  // namespace

TEST_CASE("demo output is independent of --jobs") {
  auto const a = run_command({"demo", "--bounds", "V=2,E=3", "--jobs", "1"});
  auto const b = run_command({"demo", "--bounds", "V=2,E=3", "--jobs", "2"});
  REQUIRE(a.code == 0);
  auto ja = Json::parse(a.out), jb = Json::parse(b.out);
  ja.erase("args");
  jb.erase("args");
  CHECK(ja == jb);
  CHECK(ja["report"]["passed"] == true);
  CHECK(ja["nc_lawvere"]["count"] == 16);
  CHECK(ja.find("timing_ms") == ja.end());
}

TEST_CASE("CLI agrees with the library") {
  using namespace nctopos;
  auto const site  = digraph_site();
  auto const omega = digraph_omega(site);
  auto const sys   = CoverSystem::classical(omega, digraph_topology(omega, "J2"));
  auto const lib   = enumerate_sheaves(sys, Bounds{{3, 9}});
  auto const j     = run_json({"enumerate-sheaves", "--topology", "J2", "--bounds", "V=3,E=9"}, 0);
  CHECK(j["count"] == lib.items.size());

  auto const c   = digraph_classifier(site);
  auto const nc  = CoverSystem::nc(c, derive_nc_grothendieck(*c, digraph_nc_topology(*c, "0101")));
  auto const ncl = enumerate_sheaves(nc, Bounds{{2, 4}});
  auto const k   = run_json({"enumerate-sheaves", "--topology", "nclt:0101", "--bounds", "V=2,E=4"}, 0);
  CHECK(k["count"] == ncl.items.size());
  CHECK(k["complete"] == ncl.items.size());

  auto const lt = run_json({"enumerate-lt"}, 0);
  CHECK(lt["count"] == 4);
  auto const t = run_json({"terminal-search", "--topology", "nclt:1000", "--bounds", "V=2,E=4"}, 1);
  CHECK(t["verdict"] == "no-terminal");
  CHECK(t["certificate"].size() == 2);
}

TEST_CASE("classifier bundle feeds back in") {
  auto const a = run_json({"build-classifier", "--out", "cli_cls.json"}, 0);
  CHECK(a["classifier"]["E"]["elements"] == 13);
  CHECK(a["construction"]["E"]["elements"] == 17);
  auto const x = run_json({"enumerate-nclt"}, 0);
  auto const y = run_json({"enumerate-nclt", "--classifier", "cli_cls.json"}, 0);
  CHECK(x["topologies"] == y["topologies"]);
  auto const n = run_json({"build-classifier", "--fuse", "none"}, 0);
  CHECK(n["classifier"]["E"]["elements"] == 17);
  std::remove("cli_cls.json");
}

TEST_CASE("sheaf verdicts and exit codes") {
  auto const good = write("cli_good.json", R"({"vertices":["p"],"edges":[{"id":"e","src":"p","dst":"p","color":"ab"}]})");
  auto const bad  = write("cli_bad.json", R"({"vertices":["p","q"],"edges":[{"id":"e","src":"p","dst":"q","color":"ab"}]})");
  CHECK(run_json({"check-sheaf", "--topology", "nclt:1111", "--presheaf", good}, 0)["sheaf"] == true);
  auto const v = run_json({"check-sheaf", "--topology", "nclt:1111", "--presheaf", bad}, 1);
  CHECK(v["sheaf"] == false);
  CHECK(v["counterexample"]["extensions"] == 0);
  CHECK(run_json({"check-sheaf", "--topology", "J1", "--presheaf", bad}, 0)["sheaf"] == true);

  auto const e = run_json({"check-sheaf", "--topology", "J7", "--presheaf", good}, 2);
  CHECK(e["error"]["kind"] == "UnknownObject");
  auto const m = run_json({"check-sheaf", "--topology", "nclt:1111", "--presheaf", "missing.json"}, 2);
  CHECK(m["error"]["kind"] == "Parse");
  auto const p = run_json({"enumerate-sheaves", "--topology", "J2", "--bounds", "V=x"}, 2);
  CHECK(p["error"]["kind"] == "Parse");
  CHECK(run_json({"no-such-command"}, 2)["error"]["kind"] == "Parse");
  std::remove(good.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("pretty and timing") {
  auto const o = run_command({"omega", "--pretty", "--timing"});
  CHECK(o.code == 0);
  CHECK(o.out.find("command: omega") != std::string::npos);
  CHECK(o.out.find("timing_ms:") != std::string::npos);
  CHECK(o.out.find("hasse: [0<S, 0<T, S<U, T<U, U<1]") != std::string::npos);
}
