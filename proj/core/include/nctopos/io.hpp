#pragma once

// JSON documents for sites, presheaves, colored digraphs, algebras,
// classifier bundles, topologies and reports.

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "nctopos/classif.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/fincat.hpp"
#include "nctopos/ncheyt.hpp"
#include "nctopos/report.hpp"
#include "nctopos/sheaf.hpp"
#include "nctopos/topol.hpp"

namespace nctopos {

  using Json = nlohmann::ordered_json;

  // Throws Parse with the file name on unreadable or malformed input.
  Json load_json(std::string const& path);

  // {objects, arrows:[{id,dom,cod}], compose:{"g,f":"h"}}
  RawCategory category_from_json(Json const& j);
  Json        to_json(FiniteCategory const& cat);

  // {at:{object:[elem]}, act:{arrow:{elem:elem}}}; identities may be omitted.
  Presheaf presheaf_from_json(Site const& site, Json const& j);
  Json     to_json(Presheaf const& p);

  // {vertices:[...], edges:[{id,src,dst,color}]}
  ColoredDigraph digraph_from_json(Json const& j);
  Json           to_json(ColoredDigraph const& g);

  // Either a colored digraph or a presheaf document with an optional
  // pi:{object:{elem: T element}}. With c, π is required.
  SlicePresheaf slice_from_json(Site const& site, Json const& j, Classifier const* c);
  Json          to_json(SlicePresheaf const& f, Classifier const* c);

  // {carrier, meet, join, bottom, top, imp}; tables are rows of names.
  NCHeytingAlgebra algebra_from_json(Json const& j);
  Json             to_json(NCHeytingAlgebra const& h);
  Json             to_json(HeytingTables const& h);

  // {site, algebras:{object: algebra}, actions:{arrow:{elem:elem}}}
  Json        classifier_to_json(Classifier const& c);
  NCHPresheaf classifier_from_json(Json const& j);

  Json to_json(Report const& r);

  // {"kind":"lawvere","j":{object:{sieve:sieve}}}
  Json lawvere_to_json(OmegaPresheaf const& omega, LawvereTopology const& j);
  // {"kind":"grothendieck","covers":{object:[sieve]}}
  Json grothendieck_to_json(OmegaPresheaf const& omega, GrothendieckTopology const& g);
  // {"kind":"nc-lawvere","j":{object:{x:y}}}; omitted entries are fixed.
  Json nc_lawvere_to_json(Classifier const& c, NCLawvereTopology const& j);
  // {"kind":"nc-grothendieck","covers":{object:[x]}}
  Json nc_grothendieck_to_json(Classifier const& c, NCGrothendieckTopology const& g);

  using TopologyDoc = std::variant<LawvereTopology, GrothendieckTopology, NCLawvereTopology,
                                   NCGrothendieckTopology>;

  // Classical kinds resolve names against omega, NC kinds against c (which
  // must then be non-null).
  TopologyDoc topology_from_json(Json const& j, OmegaPresheaf const& omega, Classifier const* c);

}  // namespace nctopos
