#pragma once

// The site V ⇉ E whose presheaves are directed graphs, its classifier built
// from one vertex with loops a and b, colored digraphs and named topologies.

#include <memory>
#include <string>
#include <vector>

#include "nctopos/classif.hpp"
#include "nctopos/sheaf.hpp"
#include "nctopos/topol.hpp"

namespace nctopos {

  RawCategory digraph_raw();
  Site        digraph_site();
  bool        is_digraph_site(FiniteCategory const& cat);  // objects V,E and arrows s,t: V → E

  // 0, S, T, U, 1 on E; 0, 1 on V.
  std::string   digraph_sieve_name(FiniteCategory const& cat, Sieve const& s);
  OmegaPresheaf digraph_omega(Site const& site);

  // x with loops a, b, and the section picking (x, a).
  Presheaf           loops_presheaf(Site const& site);
  std::vector<Index> loops_section();

  ClassifierBuild                   digraph_classifier_build(Site const& site);
  std::shared_ptr<Classifier const> digraph_classifier(Site const& site, bool fuse = true);

  struct ColoredEdge {
    std::string id, src, dst, color;  // color empty when uncolored
  };

  struct ColoredDigraph {
    std::vector<std::string> vertices;
    std::vector<ColoredEdge> edges;
  };

  // Color of each edge is the name of a T(E) element with its leading "1_"
  // dropped (aa, ab, ba, bb for the fused classifier).
  std::vector<std::string> edge_colors(Classifier const& c);

  // With c, edges must carry colors and π is filled in. Throws Parse.
  SlicePresheaf  to_presheaf(Site const& site, ColoredDigraph const& g, Classifier const* c);
  ColoredDigraph to_digraph(SlicePresheaf const& f, Classifier const* c);

  // Exactly one edge from v to w for every ordered pair of vertices.
  bool is_complete_digraph(Presheaf const& f);

  // J1..J4 as sieve-name tables. Throws UnknownObject for other names.
  GrothendieckTopology digraph_topology(OmegaPresheaf const& omega, std::string const& name);

  // nclt:<4 bits> with bits for U_aa, U_ab, U_ba, U_bb: the NC Lawvere
  // topology fixing V and sending the chosen U_c to 1_c. Throws Parse or
  // PreconditionViolated.
  NCLawvereTopology digraph_nc_topology(Classifier const& c, std::string const& bits);
  std::string       nc_topology_name(Classifier const& c, NCLawvereTopology const& j);

}  // namespace nctopos
