#include "nctopos/io.hpp"

#include <algorithm>
#include <fstream>

namespace nctopos {

  namespace {

    Json const& field(Json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key)) {
        throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
      }
      return j.at(key);
    }

    std::string str(Json const& j, char const* what) {
      if (!j.is_string()) throw Error(ErrorKind::Parse, std::string(what) + " must be a string");
      return j.get<std::string>();
    }

    Index element_of(Presheaf const& p, Index c, std::string const& name) {
      return p.element(c, name);
    }

    std::vector<Index> table(Json const& rows, SkewLattice const& l, char const* what) {
      auto const         n = l.size();
      std::vector<Index> out;
      if (!rows.is_array() || rows.size() != n) {
        throw Error(ErrorKind::Parse, std::string(what) + " needs " + std::to_string(n) + " rows");
      }
      for (auto const& row : rows) {
        if (!row.is_array() || row.size() != n) {
          throw Error(ErrorKind::Parse, std::string(what) + " rows need " + std::to_string(n) + " entries");
        }
        for (auto const& v : row) out.push_back(l.index(str(v, what)));
      }
      return out;
    }

    template <typename Get>
    Json rows(std::vector<std::string> const& names, Get&& get) {
      Json out = Json::array();
      for (Index x = 0; x < names.size(); ++x) {
        Json row = Json::array();
        for (Index y = 0; y < names.size(); ++y) row.push_back(names[get(x, y)]);
        out.push_back(std::move(row));
      }
      return out;
    }

    Index sieve_index(OmegaPresheaf const& omega, Index c, std::string const& name) {
      auto const& names = omega.algebra(c).names;
      for (Index i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
      }
      throw Error(ErrorKind::UnknownElement, "no sieve " + name + " on " + omega.site()->object_name(c));
    }

    Index h_index(Classifier const& c, Index o, std::string const& name) {
      auto const& a = c.H.at(o);
      for (Index x = 0; x < a.size(); ++x) {
        if (a.name(x) == name) return x;
      }
      throw Error(ErrorKind::UnknownElement, "no element " + name + " in H(" + c.H.site()->object_name(o) + ")");
    }

  }  // namespace

  Json load_json(std::string const& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
    try {
      return Json::parse(in);
    } catch (nlohmann::json::exception const& e) {
      throw Error(ErrorKind::Parse, path + ": " + e.what());
    }
  }

  RawCategory category_from_json(Json const& j) {
    RawCategory raw;
    for (auto const& o : field(j, "objects")) raw.objects.push_back(str(o, "object"));
    if (j.contains("arrows")) {
      for (auto const& a : j.at("arrows")) {
        raw.arrows.push_back({str(field(a, "id"), "arrow id"), str(field(a, "dom"), "dom"),
                              str(field(a, "cod"), "cod")});
      }
    }
    if (j.contains("compose")) {
      for (auto const& [key, value] : j.at("compose").items()) {
        auto const comma = key.find(',');
        if (comma == std::string::npos) {
          throw Error(ErrorKind::Parse, "compose key '" + key + "' is not \"g,f\"");
        }
        raw.compose.push_back({key.substr(0, comma), key.substr(comma + 1), str(value, "composite")});
      }
    }
    return raw;
  }

  Json to_json(FiniteCategory const& cat) {
    Json out;
    out["objects"] = Json::array();
    for (Index c = 0; c < cat.object_count(); ++c) out["objects"].push_back(cat.object_name(c));
    out["arrows"] = Json::array();
    for (Index a = 0; a < cat.arrow_count(); ++a) {
      if (cat.is_identity(a)) continue;
      out["arrows"].push_back(
          {{"id", cat.arrow_name(a)}, {"dom", cat.object_name(cat.dom(a))}, {"cod", cat.object_name(cat.cod(a))}});
    }
    out["compose"] = Json::object();
    for (Index g = 0; g < cat.arrow_count(); ++g) {
      for (Index f = 0; f < cat.arrow_count(); ++f) {
        if (cat.is_identity(g) || cat.is_identity(f) || cat.dom(g) != cat.cod(f)) continue;
        out["compose"][cat.arrow_name(g) + "," + cat.arrow_name(f)] = cat.arrow_name(cat.compose(g, f));
      }
    }
    return out;
  }

  Presheaf presheaf_from_json(Site const& site, Json const& j) {
    auto const&                           cat = *site;
    std::vector<std::vector<std::string>> el(cat.object_count());
    auto const&                           at = field(j, "at");
    for (auto const& [name, list] : at.items()) {
      Index const c = cat.object(name);
      for (auto const& e : list) el[c].push_back(str(e, "element"));
    }
    // Element lookup before the presheaf exists.
    auto index = [&](Index c, std::string const& name) {
      for (Index i = 0; i < el[c].size(); ++i) {
        if (el[c][i] == name) return i;
      }
      throw Error(ErrorKind::UnknownElement, name + " in " + cat.object_name(c));
    };
    std::vector<std::vector<Index>> act(cat.arrow_count());
    Json const empty = Json::object();
    Json const& acts = j.contains("act") ? j.at("act") : empty;
    for (Index a = 0; a < cat.arrow_count(); ++a) {
      if (cat.is_identity(a) && !acts.contains(cat.arrow_name(a))) continue;
      Index const c = cat.cod(a), d = cat.dom(a);
      if (el[c].empty()) continue;
      if (!acts.contains(cat.arrow_name(a))) {
        throw Error(ErrorKind::NotAPresheaf, "no action given for " + cat.arrow_name(a));
      }
      auto const& m = acts.at(cat.arrow_name(a));
      act[a].assign(el[c].size(), kNone);
      for (auto const& [x, y] : m.items()) act[a][index(c, x)] = index(d, str(y, "image"));
      for (Index x = 0; x < el[c].size(); ++x) {
        if (act[a][x] == kNone) {
          throw Error(ErrorKind::NotAPresheaf, cat.arrow_name(a) + " has no image for " + el[c][x]);
        }
      }
    }
    for (auto const& [name, _] : acts.items()) cat.arrow(name);
    return Presheaf(site, std::move(el), std::move(act));
  }

  Json to_json(Presheaf const& p) {
    auto const& cat = p.category();
    Json        out;
    out["at"] = Json::object();
    for (Index c = 0; c < cat.object_count(); ++c) out["at"][cat.object_name(c)] = p.elements(c);
    out["act"] = Json::object();
    for (Index a = 0; a < cat.arrow_count(); ++a) {
      if (cat.is_identity(a)) continue;
      Json m = Json::object();
      for (Index x = 0; x < p.size(cat.cod(a)); ++x) m[p.name(cat.cod(a), x)] = p.name(cat.dom(a), p.act(a, x));
      out["act"][cat.arrow_name(a)] = std::move(m);
    }
    return out;
  }

  ColoredDigraph digraph_from_json(Json const& j) {
    ColoredDigraph g;
    for (auto const& v : field(j, "vertices")) g.vertices.push_back(str(v, "vertex"));
    for (auto const& e : field(j, "edges")) {
      ColoredEdge ed{str(field(e, "id"), "edge id"), str(field(e, "src"), "src"), str(field(e, "dst"), "dst"), ""};
      if (e.contains("color")) ed.color = str(e.at("color"), "color");
      g.edges.push_back(std::move(ed));
    }
    return g;
  }

  Json to_json(ColoredDigraph const& g) {
    Json out;
    out["vertices"] = g.vertices;
    out["edges"]    = Json::array();
    for (auto const& e : g.edges) {
      Json je{{"id", e.id}, {"src", e.src}, {"dst", e.dst}};
      if (!e.color.empty()) je["color"] = e.color;
      out["edges"].push_back(std::move(je));
    }
    return out;
  }

  SlicePresheaf slice_from_json(Site const& site, Json const& j, Classifier const* c) {
    if (j.is_object() && j.contains("vertices")) {
      return to_presheaf(site, digraph_from_json(j), c);
    }
    SlicePresheaf f{presheaf_from_json(site, j), std::nullopt};
    if (!c) return f;
    auto const& cat = *site;
    auto const& pj  = field(j, "pi");
    NaturalTransformation pi;
    pi.components.resize(cat.object_count());
    for (Index o = 0; o < cat.object_count(); ++o) {
      pi.components[o].assign(f.F.size(o), kNone);
      if (f.F.size(o) == 0) continue;
      auto const& m = field(pj, cat.object_name(o).c_str());
      for (auto const& [x, y] : m.items()) {
        pi.components[o][element_of(f.F, o, x)] = c->T.element(o, str(y, "color"));
      }
      for (Index x = 0; x < f.F.size(o); ++x) {
        if (pi.components[o][x] == kNone) {
          throw Error(ErrorKind::Parse, "pi has no image for " + f.F.name(o, x));
        }
      }
    }
    f.pi = std::move(pi);
    return f;
  }

  Json to_json(SlicePresheaf const& f, Classifier const* c) {
    auto const& cat = f.F.category();
    if (is_digraph_site(cat)) {
      return to_json(to_digraph(f, f.pi ? c : nullptr));
    }
    Json out = to_json(f.F);
    if (c && f.pi) {
      out["pi"] = Json::object();
      for (Index o = 0; o < cat.object_count(); ++o) {
        Json m = Json::object();
        for (Index x = 0; x < f.F.size(o); ++x) m[f.F.name(o, x)] = c->T.name(o, f.pi->components[o][x]);
        out["pi"][cat.object_name(o)] = std::move(m);
      }
    }
    return out;
  }

  NCHeytingAlgebra algebra_from_json(Json const& j) {
    NCHeytingAlgebra h;
    for (auto const& n : field(j, "carrier")) h.base.names.push_back(str(n, "element"));
    h.base.meet   = table(field(j, "meet"), h.base, "meet");
    h.base.join   = table(field(j, "join"), h.base, "join");
    h.base.bottom = h.base.index(str(field(j, "bottom"), "bottom"));
    h.t           = h.base.index(str(field(j, "top"), "top"));
    h.imp         = table(field(j, "imp"), h.base, "imp");
    return h;
  }

  Json to_json(NCHeytingAlgebra const& h) {
    auto const& n = h.base.names;
    Json        out;
    out["carrier"] = n;
    out["meet"]    = rows(n, [&](Index x, Index y) { return h.meet_of(x, y); });
    out["join"]    = rows(n, [&](Index x, Index y) { return h.join_of(x, y); });
    out["bottom"]  = n[h.bottom()];
    out["top"]     = n[h.t];
    out["imp"]     = rows(n, [&](Index x, Index y) { return h.imp_of(x, y); });
    return out;
  }

  Json to_json(HeytingTables const& h) {
    auto const& n = h.names;
    Json        out;
    out["carrier"] = n;
    out["meet"]    = rows(n, [&](Index x, Index y) { return h.meet_of(x, y); });
    out["join"]    = rows(n, [&](Index x, Index y) { return h.join_of(x, y); });
    out["bottom"]  = n[h.bottom];
    out["top"]     = n[h.top];
    out["imp"]     = rows(n, [&](Index x, Index y) { return h.imp_of(x, y); });
    return out;
  }

  Json classifier_to_json(Classifier const& c) {
    auto const& cat = *c.H.site();
    Json        out;
    out["site"]      = to_json(cat);
    out["algebras"]  = Json::object();
    for (Index o = 0; o < cat.object_count(); ++o) out["algebras"][cat.object_name(o)] = to_json(c.H.at(o));
    out["actions"] = to_json(c.H.presheaf())["act"];
    return out;
  }

  NCHPresheaf classifier_from_json(Json const& j) {
    auto const                    site = make_site(category_from_json(field(j, "site")));
    auto const&                   cat  = *site;
    std::vector<NCHeytingAlgebra> at(cat.object_count());
    for (Index o = 0; o < cat.object_count(); ++o) {
      at[o] = algebra_from_json(field(field(j, "algebras"), cat.object_name(o).c_str()));
    }
    Json doc;
    doc["at"] = Json::object();
    for (Index o = 0; o < cat.object_count(); ++o) doc["at"][cat.object_name(o)] = at[o].base.names;
    doc["act"] = j.contains("actions") ? j.at("actions") : Json::object();
    auto const p = presheaf_from_json(site, doc);
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (Index a = 0; a < cat.arrow_count(); ++a) act[a] = p.action(a);
    return NCHPresheaf(site, std::move(at), std::move(act));
  }

  Json to_json(Report const& r) {
    Json out;
    out["passed"] = r.passed();
    out["checks"] = Json::array();
    for (auto const& k : r.checks()) {
      Json jk{{"name", k.name}, {"passed", k.passed}};
      if (!k.witness.empty()) jk["witness"] = k.witness;
      out["checks"].push_back(std::move(jk));
    }
    return out;
  }

  Json lawvere_to_json(OmegaPresheaf const& omega, LawvereTopology const& j) {
    auto const& cat = *omega.site();
    Json        out{{"kind", "lawvere"}, {"j", Json::object()}};
    for (Index c = 0; c < cat.object_count(); ++c) {
      auto const& n = omega.algebra(c).names;
      Json        m = Json::object();
      for (Index s = 0; s < n.size(); ++s) m[n[s]] = n[j.j[c][s]];
      out["j"][cat.object_name(c)] = std::move(m);
    }
    return out;
  }

  Json grothendieck_to_json(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
    auto const& cat = *omega.site();
    Json        out{{"kind", "grothendieck"}, {"covers", Json::object()}};
    for (Index c = 0; c < cat.object_count(); ++c) {
      Json l = Json::array();
      for (Index s : g.covers[c]) l.push_back(omega.algebra(c).names[s]);
      out["covers"][cat.object_name(c)] = std::move(l);
    }
    return out;
  }

  Json nc_lawvere_to_json(Classifier const& c, NCLawvereTopology const& j) {
    auto const& cat = *c.H.site();
    Json        out{{"kind", "nc-lawvere"}, {"j", Json::object()}};
    for (Index o = 0; o < cat.object_count(); ++o) {
      Json m = Json::object();
      for (Index x = 0; x < j.j[o].size(); ++x) {
        if (j.j[o][x] != x) m[c.H.at(o).name(x)] = c.H.at(o).name(j.j[o][x]);
      }
      out["j"][cat.object_name(o)] = std::move(m);
    }
    return out;
  }

  Json nc_grothendieck_to_json(Classifier const& c, NCGrothendieckTopology const& g) {
    auto const& cat = *c.H.site();
    Json        out{{"kind", "nc-grothendieck"}, {"covers", Json::object()}};
    for (Index o = 0; o < cat.object_count(); ++o) {
      Json l = Json::array();
      for (Index x : g.covers[o]) l.push_back(c.H.at(o).name(x));
      out["covers"][cat.object_name(o)] = std::move(l);
    }
    return out;
  }

  TopologyDoc topology_from_json(Json const& j, OmegaPresheaf const& omega, Classifier const* c) {
    auto const  kind = str(field(j, "kind"), "kind");
    auto const& cat  = *omega.site();
    if (kind == "lawvere") {
      auto t = identity_lawvere(omega);
      for (auto const& [on, m] : field(j, "j").items()) {
        Index const o = cat.object(on);
        for (auto const& [x, y] : m.items()) t.j[o][sieve_index(omega, o, x)] = sieve_index(omega, o, str(y, "sieve"));
      }
      return t;
    }
    if (kind == "grothendieck") {
      GrothendieckTopology g;
      g.covers.resize(cat.object_count());
      for (auto const& [on, l] : field(j, "covers").items()) {
        Index const o = cat.object(on);
        for (auto const& s : l) g.covers[o].push_back(sieve_index(omega, o, str(s, "sieve")));
        std::sort(g.covers[o].begin(), g.covers[o].end());
      }
      return g;
    }
    if (!c) throw Error(ErrorKind::PreconditionViolated, kind + " topologies need a classifier");
    if (kind == "nc-lawvere") {
      auto t = identity_nc_lawvere(*c);
      for (auto const& [on, m] : field(j, "j").items()) {
        Index const o = cat.object(on);
        for (auto const& [x, y] : m.items()) t.j[o][h_index(*c, o, x)] = h_index(*c, o, str(y, "element"));
      }
      return t;
    }
    if (kind == "nc-grothendieck") {
      NCGrothendieckTopology g;
      g.covers.resize(cat.object_count());
      g.sieves.resize(cat.object_count());
      for (auto const& [on, l] : field(j, "covers").items()) {
        Index const o = cat.object(on);
        for (auto const& x : l) g.covers[o].push_back(h_index(*c, o, str(x, "element")));
        std::sort(g.covers[o].begin(), g.covers[o].end());
      }
      for (Index o = 0; o < cat.object_count(); ++o) {
        auto const y = sub_H_yoneda(*c, o);
        for (Index x : g.covers[o]) g.sieves[o].push_back(y.sieve[x]);
      }
      return g;
    }
    throw Error(ErrorKind::Parse, "unknown topology kind '" + kind + "'");
  }

}  // namespace nctopos
