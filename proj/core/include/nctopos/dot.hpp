#pragma once

// Graphviz renderings: Hasse diagrams, presheaves as graphs, colored
// digraphs.

#include <string>

#include "nctopos/classif.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/lattice_laws.hpp"
#include "nctopos/ncheyt.hpp"

namespace nctopos {

  std::string hasse_dot(HeytingTables const& h, std::string const& title);
  // Covers of the natural order as solid edges; each D-class sits on one
  // rank with dotted edges between its members.
  std::string hasse_dot(NCHeytingAlgebra const& h, std::string const& title);

  // One node per element, one edge per non-identity action x ↦ F(f)(x).
  std::string presheaf_dot(Presheaf const& p, std::string const& title);
  std::string digraph_dot(ColoredDigraph const& g, std::string const& title);
  // On the V,E site the classifier is drawn as a digraph.
  std::string classifier_dot(Classifier const& c, std::string const& title);

}  // namespace nctopos
