#include "nctopos/digraph.hpp"

#include <algorithm>

namespace nctopos {

  RawCategory digraph_raw() {
    return RawCategory{{"V", "E"}, {{"s", "V", "E"}, {"t", "V", "E"}}, {}};
  }

  Site digraph_site() {
    return make_site(digraph_raw());
  }

  bool is_digraph_site(FiniteCategory const& cat) {
    if (cat.object_count() != 2 || cat.arrow_count() != 4) return false;
    auto v = cat.find_object("V"), e = cat.find_object("E");
    auto s = cat.find_arrow("s"), t = cat.find_arrow("t");
    return v && e && s && t && cat.dom(*s) == *v && cat.cod(*s) == *e && cat.dom(*t) == *v
           && cat.cod(*t) == *e;
  }

  std::string digraph_sieve_name(FiniteCategory const& cat, Sieve const& s) {
    auto n = default_sieve_name(cat, s);
    if (n == "{s,t}") return "U";
    if (n == "{s}") return "S";
    if (n == "{t}") return "T";
    return n;
  }

  OmegaPresheaf digraph_omega(Site const& site) {
    return OmegaPresheaf(site, digraph_sieve_name);
  }

  Presheaf loops_presheaf(Site const& site) {
    auto const&                     cat = *site;
    std::vector<std::vector<Index>> act(cat.arrow_count());
    act[cat.arrow("s")] = {0, 0};
    act[cat.arrow("t")] = {0, 0};
    std::vector<std::vector<std::string>> el(cat.object_count());
    el[cat.object("V")] = {"x"};
    el[cat.object("E")] = {"a", "b"};
    return Presheaf(site, std::move(el), std::move(act));
  }

  std::vector<Index> loops_section() {
    return {0, 0};
  }

  ClassifierBuild digraph_classifier_build(Site const& site) {
    return build_classifier(site, loops_presheaf(site), loops_section(), digraph_sieve_name);
  }

  std::shared_ptr<Classifier const> digraph_classifier(Site const& site, bool fuse) {
    auto b = digraph_classifier_build(site);
    if (!fuse) return std::make_shared<Classifier const>(std::move(b.classifier));
    return std::make_shared<Classifier const>(fuse_classifier(b));
  }

  namespace {
    std::string strip_top(std::string const& n) {
      return n.rfind("1_", 0) == 0 ? n.substr(2) : n;
    }
  }  // namespace

  std::vector<std::string> edge_colors(Classifier const& c) {
    Index const              e = c.H.site()->object("E");
    std::vector<std::string> out;
    for (Index x : c.tops[e]) out.push_back(strip_top(c.H.at(e).name(x)));
    return out;
  }

  SlicePresheaf to_presheaf(Site const& site, ColoredDigraph const& g, Classifier const* c) {
    auto const& cat = *site;
    if (!is_digraph_site(cat)) {
      throw Error(ErrorKind::Unsupported, "colored digraphs live on the V,E site");
    }
    Index const V = cat.object("V"), E = cat.object("E");
    auto vertex = [&](std::string const& name) {
      auto it = std::find(g.vertices.begin(), g.vertices.end(), name);
      if (it == g.vertices.end()) throw Error(ErrorKind::Parse, "unknown vertex " + name);
      return static_cast<Index>(it - g.vertices.begin());
    };
    std::vector<std::vector<std::string>> el(2);
    el[V] = g.vertices;
    std::vector<std::vector<Index>> act(cat.arrow_count());
    for (auto const& ed : g.edges) {
      el[E].push_back(ed.id);
      act[cat.arrow("s")].push_back(vertex(ed.src));
      act[cat.arrow("t")].push_back(vertex(ed.dst));
    }
    SlicePresheaf out{Presheaf(site, std::move(el), std::move(act)), std::nullopt};
    if (!c) return out;
    if (c->T.size(V) != 1) {
      throw Error(ErrorKind::Unsupported, "vertex colors are not supported");
    }
    auto const            colors = edge_colors(*c);
    NaturalTransformation pi;
    pi.components.resize(2);
    pi.components[V].assign(g.vertices.size(), 0);
    for (auto const& ed : g.edges) {
      auto it = std::find(colors.begin(), colors.end(), ed.color);
      if (it == colors.end()) throw Error(ErrorKind::Parse, "edge " + ed.id + " has unknown color '" + ed.color + "'");
      pi.components[E].push_back(static_cast<Index>(it - colors.begin()));
    }
    out.pi = std::move(pi);
    return out;
  }

  ColoredDigraph to_digraph(SlicePresheaf const& f, Classifier const* c) {
    auto const& cat = f.F.category();
    if (!is_digraph_site(cat)) {
      throw Error(ErrorKind::Unsupported, "colored digraphs live on the V,E site");
    }
    Index const    V = cat.object("V"), E = cat.object("E");
    Index const    s = cat.arrow("s"), t = cat.arrow("t");
    ColoredDigraph g;
    g.vertices = f.F.elements(V);
    std::vector<std::string> colors;
    if (c) colors = edge_colors(*c);
    for (Index e = 0; e < f.F.size(E); ++e) {
      ColoredEdge ed{f.F.name(E, e), f.F.name(V, f.F.act(s, e)), f.F.name(V, f.F.act(t, e)), ""};
      if (c && f.pi) ed.color = colors.at(f.pi->components[E][e]);
      g.edges.push_back(std::move(ed));
    }
    return g;
  }

  bool is_complete_digraph(Presheaf const& f) {
    auto const& cat = f.category();
    Index const V = cat.object("V"), E = cat.object("E");
    Index const s = cat.arrow("s"), t = cat.arrow("t");
    auto const  n = f.size(V);
    std::vector<unsigned> count(n * n, 0);
    for (Index e = 0; e < f.size(E); ++e) ++count[f.act(s, e) * n + f.act(t, e)];
    return std::all_of(count.begin(), count.end(), [](unsigned k) { return k == 1; });
  }

  GrothendieckTopology digraph_topology(OmegaPresheaf const& omega, std::string const& name) {
    auto const& cat = *omega.site();
    if (!is_digraph_site(cat)) {
      throw Error(ErrorKind::Unsupported, name + " needs the V,E site");
    }
    std::vector<std::string> v, e;
    if (name == "J1") {
      v = {"1"};
      e = {"1"};
    } else if (name == "J2") {
      v = {"1"};
      e = {"1", "U"};
    } else if (name == "J3") {
      v = {"1", "0"};
      e = {"1"};
    } else if (name == "J4") {
      v = {"1", "0"};
      e = {"1", "U", "S", "T", "0"};
    } else {
      throw Error(ErrorKind::UnknownObject, "no built-in topology " + name);
    }
    auto index = [&](Index c, std::string const& n) {
      auto const& names = omega.algebra(c).names;
      return static_cast<Index>(std::find(names.begin(), names.end(), n) - names.begin());
    };
    GrothendieckTopology g;
    g.covers.resize(2);
    for (auto const& n : v) g.covers[cat.object("V")].push_back(index(cat.object("V"), n));
    for (auto const& n : e) g.covers[cat.object("E")].push_back(index(cat.object("E"), n));
    for (auto& c : g.covers) std::sort(c.begin(), c.end());
    return g;
  }

  namespace {
    Index h_element(Classifier const& c, Index o, std::string const& name) {
      auto const& a = c.H.at(o);
      for (Index x = 0; x < a.size(); ++x) {
        if (a.name(x) == name) return x;
      }
      throw Error(ErrorKind::PreconditionViolated, "H has no element " + name);
    }
  }  // namespace

  NCLawvereTopology digraph_nc_topology(Classifier const& c, std::string const& bits) {
    auto const& cat = *c.H.site();
    if (!is_digraph_site(cat)) {
      throw Error(ErrorKind::Unsupported, "nclt names need the V,E site");
    }
    auto const colors = edge_colors(c);
    if (bits.size() != colors.size()
        || bits.find_first_not_of("01") != std::string::npos) {
      throw Error(ErrorKind::Parse, "expected " + std::to_string(colors.size()) + " binary digits, got '"
                                        + bits + "'");
    }
    auto        j = identity_nc_lawvere(c);
    Index const E = cat.object("E");
    for (std::size_t i = 0; i < colors.size(); ++i) {
      if (bits[i] == '1') {
        j.j[E][h_element(c, E, "U_" + colors[i])] = h_element(c, E, "1_" + colors[i]);
      }
    }
    auto const r = verify_nc_lawvere(c, j);
    if (!r.passed()) {
      throw Error(ErrorKind::PreconditionViolated, "nclt:" + bits + " fails its axioms");
    }
    return j;
  }

  std::string nc_topology_name(Classifier const& c, NCLawvereTopology const& j) {
    auto const& cat = *c.H.site();
    if (!is_digraph_site(cat)) return "custom";
    auto const  colors = edge_colors(c);
    Index const E      = cat.object("E");
    std::string bits;
    try {
      for (auto const& col : colors) {
        bits += j.j[E][h_element(c, E, "U_" + col)] == h_element(c, E, "1_" + col) ? '1' : '0';
      }
      if (digraph_nc_topology(c, bits) == j) return "nclt:" + bits;
    } catch (Error const&) {
    }
    return "custom";
  }

}  // namespace nctopos
