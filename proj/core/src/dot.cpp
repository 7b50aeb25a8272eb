#include "nctopos/dot.hpp"

#include <map>
#include <sstream>

#include "nctopos/skewlat.hpp"

namespace nctopos {

  namespace {

    std::string quote(std::string const& s) {
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
      }
      return out + "\"";
    }

    template <typename Leq>
    void covers(std::ostream& os, std::vector<std::string> const& names, Leq&& leq) {
      auto const n = static_cast<Index>(names.size());
      for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
          if (x == y || !leq(x, y)) continue;
          bool cover = true;
          for (Index z = 0; z < n && cover; ++z) {
            cover = z == x || z == y || !(leq(x, z) && leq(z, y));
          }
          if (cover) os << "  " << quote(names[y]) << " -> " << quote(names[x]) << ";\n";
        }
      }
    }

  }  // namespace

  std::string hasse_dot(HeytingTables const& h, std::string const& title) {
    std::ostringstream os;
    os << "digraph " << quote(title) << " {\n  rankdir=TB;\n  edge [dir=none];\n";
    for (auto const& n : h.names) os << "  " << quote(n) << ";\n";
    covers(os, h.names, [&](Index x, Index y) { return h.leq(x, y); });
    os << "}\n";
    return os.str();
  }

  std::string hasse_dot(NCHeytingAlgebra const& h, std::string const& title) {
    auto const&        l = h.base;
    auto const         g = green_decomposition(l);
    std::ostringstream os;
    os << "digraph " << quote(title) << " {\n  rankdir=TB;\n  edge [dir=none];\n";
    for (auto const& cls : g.classes) {
      os << "  { rank=same;";
      for (Index x : cls) os << " " << quote(l.names[x]) << ";";
      os << " }\n";
      for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
        os << "  " << quote(l.names[cls[i]]) << " -> " << quote(l.names[cls[i + 1]]) << " [style=dotted];\n";
      }
    }
    covers(os, l.names, [&](Index x, Index y) { return l.leq(x, y); });
    os << "}\n";
    return os.str();
  }

  std::string presheaf_dot(Presheaf const& p, std::string const& title) {
    auto const&        cat = p.category();
    std::ostringstream os;
    os << "digraph " << quote(title) << " {\n";
    for (Index c = 0; c < cat.object_count(); ++c) {
      os << "  subgraph " << quote("cluster_" + cat.object_name(c)) << " {\n    label=" << quote(cat.object_name(c))
         << ";\n";
      for (Index x = 0; x < p.size(c); ++x) {
        os << "    " << quote(cat.object_name(c) + ":" + p.name(c, x)) << " [label=" << quote(p.name(c, x)) << "];\n";
      }
      os << "  }\n";
    }
    for (Index a = 0; a < cat.arrow_count(); ++a) {
      if (cat.is_identity(a)) continue;
      Index const c = cat.cod(a), d = cat.dom(a);
      for (Index x = 0; x < p.size(c); ++x) {
        os << "  " << quote(cat.object_name(c) + ":" + p.name(c, x)) << " -> "
           << quote(cat.object_name(d) + ":" + p.name(d, p.act(a, x))) << " [label=" << quote(cat.arrow_name(a))
           << "];\n";
      }
    }
    os << "}\n";
    return os.str();
  }

  std::string digraph_dot(ColoredDigraph const& g, std::string const& title) {
    static std::map<std::string, std::string> const palette{
        {"aa", "red"}, {"ab", "blue"}, {"ba", "darkgreen"}, {"bb", "orange"}};
    std::ostringstream os;
    os << "digraph " << quote(title) << " {\n";
    for (auto const& v : g.vertices) os << "  " << quote(v) << ";\n";
    for (auto const& e : g.edges) {
      os << "  " << quote(e.src) << " -> " << quote(e.dst) << " [label=" << quote(e.color.empty() ? e.id : e.id + ":" + e.color);
      if (!e.color.empty()) {
        auto it = palette.find(e.color);
        os << ", color=" << quote(it == palette.end() ? "black" : it->second);
      }
      os << "];\n";
    }
    os << "}\n";
    return os.str();
  }

  std::string classifier_dot(Classifier const& c, std::string const& title) {
    if (is_digraph_site(*c.H.site())) {
      return digraph_dot(to_digraph(SlicePresheaf{c.H.presheaf(), std::nullopt}, nullptr), title);
    }
    return presheaf_dot(c.H.presheaf(), title);
  }

}  // namespace nctopos
