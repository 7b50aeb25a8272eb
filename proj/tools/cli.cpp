#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nctopos/canonical.hpp"
#include "nctopos/classif.hpp"
#include "nctopos/digraph.hpp"
#include "nctopos/dot.hpp"
#include "nctopos/io.hpp"
#include "nctopos/ncheyt.hpp"
#include "nctopos/sheaf.hpp"
#include "nctopos/topol.hpp"

namespace nctopos::cli {

  namespace {

    struct Options {
      std::string site = "digraph";
      std::string presheaf;
      std::string base;
      std::string classifier;
      std::string section;
      std::string topology;
      std::string bounds;
      std::string fuse = "coordinate";
      std::string dot;
      std::string out;
      unsigned    jobs   = 1;
      std::size_t show   = 20;
      bool        pretty = false;
      bool        timing = false;
    };

    // A negative verdict; the document is still printed.
    struct Verdict {
      int code = 0;
    };

    // ---------------------------------------------------------------------
    // Loading

    Site load_site(Options const& o) {
      if (o.site == "digraph") return digraph_site();
      return make_site(category_from_json(load_json(o.site)));
    }

    OmegaPresheaf omega_for(Site const& site) {
      if (is_digraph_site(*site)) return digraph_omega(site);
      return OmegaPresheaf(site);
    }

    SieveNamer namer_for(Site const& site) {
      if (is_digraph_site(*site)) return digraph_sieve_name;
      return default_sieve_name;
    }

    std::map<std::string, std::string> key_values(std::string const& s) {
      std::map<std::string, std::string> out;
      std::stringstream                  ss(s);
      std::string                        item;
      while (std::getline(ss, item, ',')) {
        auto const eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, "expected key=value, got '" + item + "'");
        out[item.substr(0, eq)] = item.substr(eq + 1);
      }
      return out;
    }

    std::size_t to_size(std::string const& s) {
      try {
        std::size_t used = 0;
        auto const  v    = std::stoul(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (std::exception const&) {
        throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
      }
    }

    Bounds parse_bounds(FiniteCategory const& cat, std::string const& s, std::size_t fallback = 3) {
      if (s.empty()) return Bounds::uniform(cat, fallback);
      if (s.find('=') == std::string::npos) return Bounds::uniform(cat, to_size(s));
      Bounds b = Bounds::uniform(cat, fallback);
      for (auto const& [k, v] : key_values(s)) b.max[cat.object(k)] = to_size(v);
      return b;
    }

    std::string bounds_text(FiniteCategory const& cat, Bounds const& b) {
      std::string out;
      for (Index c = 0; c < cat.object_count(); ++c) {
        if (!out.empty()) out += ",";
        out += cat.object_name(c) + "=" + std::to_string(b.max[c]);
      }
      return out;
    }

    Presheaf load_presheaf(Site const& site, std::string const& file) {
      return slice_from_json(site, load_json(file), nullptr).F;
    }

    // P in H = Sub_H(P); the loops on the digraph site.
    Presheaf load_base(Site const& site, Options const& o) {
      if (!o.base.empty()) return load_presheaf(site, o.base);
      if (is_digraph_site(*site)) return loops_presheaf(site);
      throw Error(ErrorKind::PreconditionViolated, "--base is required off the digraph site");
    }

    std::vector<Index> parse_section(Presheaf const& p, Options const& o) {
      auto const& cat = p.category();
      if (o.section.empty()) {
        if (is_digraph_site(cat) && o.base.empty()) return loops_section();
        auto const g = global_sections(p);
        if (g.empty()) throw Error(ErrorKind::NoGlobalSection, "the presheaf has no global section");
        return g.front();
      }
      std::vector<Index> d(cat.object_count(), kNone);
      for (auto const& [k, v] : key_values(o.section)) {
        Index const c = cat.object(k);
        d[c]          = p.element(c, v);
      }
      for (Index c = 0; c < cat.object_count(); ++c) {
        if (d[c] == kNone) throw Error(ErrorKind::Parse, "--section misses " + cat.object_name(c));
      }
      return d;
    }

    ClassifierBuild build_from(Site const& site, Options const& o) {
      auto const p = load_base(site, o);
      return build_classifier(site, p, parse_section(p, o), namer_for(site));
    }

    std::shared_ptr<Classifier const> load_classifier(Site const& site, Options const& o) {
      if (!o.classifier.empty()) {
        auto h = classifier_from_json(load_json(o.classifier));
        auto s = h.site();
        return std::make_shared<Classifier const>(make_classifier(std::move(h), omega_for(s)));
      }
      if (o.fuse != "coordinate" && o.fuse != "none") {
        throw Error(ErrorKind::Parse, "--fuse takes coordinate or none");
      }
      auto b = build_from(site, o);
      if (o.fuse == "none") return std::make_shared<Classifier const>(std::move(b.classifier));
      return std::make_shared<Classifier const>(fuse_classifier(b));
    }

    std::string classical_name(OmegaPresheaf const& omega, GrothendieckTopology const& g) {
      if (!is_digraph_site(*omega.site())) return "";
      for (std::string n : {"J1", "J2", "J3", "J4"}) {
        if (digraph_topology(omega, n) == g) return n;
      }
      return "";
    }

    struct Resolved {
      CoverSystem                       sys;
      std::shared_ptr<Classifier const> classifier;
      Json                              desc;
    };

    Resolved resolve_topology(Site const& site, Options const& o) {
      if (o.topology.empty()) throw Error(ErrorKind::Parse, "--topology is required");
      Resolved r;
      auto     omega = omega_for(site);
      auto     classical = [&](GrothendieckTopology const& g, std::string const& name) {
        auto const rep = verify_grothendieck(omega, g);
        if (!rep.passed()) throw Error(ErrorKind::AxiomFailure, "topology fails GT1-GT3");
        r.sys      = CoverSystem::classical(omega, g);
        r.sys.name = name;
        r.desc     = grothendieck_to_json(omega, g);
      };
      auto nc = [&](NCLawvereTopology const& j) {
        auto const rep = verify_nc_lawvere(*r.classifier, j);
        if (!rep.passed()) throw Error(ErrorKind::AxiomFailure, "topology fails NLT1-NLT3");
        r.sys      = CoverSystem::nc(r.classifier, derive_nc_grothendieck(*r.classifier, j));
        r.sys.name = nc_topology_name(*r.classifier, j);
        r.desc     = nc_lawvere_to_json(*r.classifier, j);
      };
      if (o.topology.size() == 2 && o.topology[0] == 'J') {
        classical(digraph_topology(omega, o.topology), o.topology);
        return r;
      }
      if (o.topology.rfind("nclt:", 0) == 0) {
        r.classifier = load_classifier(site, o);
        nc(digraph_nc_topology(*r.classifier, o.topology.substr(5)));
        return r;
      }
      auto const doc  = load_json(o.topology);
      auto const kind = doc.value("kind", std::string());
      if (kind == "nc-lawvere" || kind == "nc-grothendieck") r.classifier = load_classifier(site, o);
      auto const& om = r.classifier ? r.classifier->omega : omega;
      auto        t  = topology_from_json(doc, om, r.classifier.get());
      if (auto* lt = std::get_if<LawvereTopology>(&t)) {
        classical(lt_to_gt(om, *lt), classical_name(om, lt_to_gt(om, *lt)));
      } else if (auto* gt = std::get_if<GrothendieckTopology>(&t)) {
        classical(*gt, classical_name(om, *gt));
      } else if (auto* nj = std::get_if<NCLawvereTopology>(&t)) {
        nc(*nj);
      } else {
        auto const& g = std::get<NCGrothendieckTopology>(t);
        r.sys         = CoverSystem::nc(r.classifier, g);
        r.sys.name    = "custom";
        r.desc        = nc_grothendieck_to_json(*r.classifier, g);
      }
      return r;
    }

    // ---------------------------------------------------------------------
    // Rendering

    std::vector<std::array<std::string, 2>> hasse(NCHeytingAlgebra const& h) {
      std::vector<std::array<std::string, 2>> out;
      auto const&                             l = h.base;
      auto const                              n = static_cast<Index>(l.size());
      for (Index x = 0; x < n; ++x) {
        for (Index y = 0; y < n; ++y) {
          if (x == y || !l.leq(x, y)) continue;
          bool cover = true;
          for (Index z = 0; z < n && cover; ++z) cover = z == x || z == y || !(l.leq(x, z) && l.leq(z, y));
          if (cover) out.push_back({l.names[x], l.names[y]});
        }
      }
      return out;
    }

    Json hasse_json(NCHeytingAlgebra const& h) {
      Json out = Json::array();
      for (auto const& [a, b] : hasse(h)) out.push_back(a + "<" + b);
      return out;
    }

    bool scalar(Json const& j) {
      return !j.is_object() && !j.is_array();
    }

    std::string scalar_text(Json const& j) {
      return j.is_string() ? j.get<std::string>() : j.dump();
    }

    void render(std::ostream& os, Json const& j, int indent) {
      std::string const pad(static_cast<std::size_t>(indent), ' ');
      if (j.is_object()) {
        for (auto const& [k, v] : j.items()) {
          if (scalar(v)) {
            os << pad << k << ": " << scalar_text(v) << "\n";
          } else if (v.is_object() && v.empty()) {
            os << pad << k << ": {}\n";
          } else if (v.is_array() && std::all_of(v.begin(), v.end(), scalar)) {
            os << pad << k << ": [";
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << scalar_text(v[i]);
            os << "]\n";
          } else {
            os << pad << k << ":\n";
            render(os, v, indent + 2);
          }
        }
      } else if (j.is_array()) {
        for (auto const& v : j) {
          if (scalar(v)) {
            os << pad << "- " << scalar_text(v) << "\n";
          } else {
            os << pad << "-\n";
            render(os, v, indent + 2);
          }
        }
      } else {
        os << pad << scalar_text(j) << "\n";
      }
    }

    void write_file(std::string const& dir, std::string const& name, std::string const& text, Json& files) {
      std::filesystem::create_directories(dir);
      auto const    path = std::filesystem::path(dir) / name;
      std::ofstream out(path);
      if (!out) throw Error(ErrorKind::Parse, "cannot write " + path.string());
      out << text;
      files.push_back(name);
    }

    int verdict(Report const& r) {
      return r.passed() ? 0 : 1;
    }

    // ---------------------------------------------------------------------
    // Commands

    int cmd_validate(Options const& o, Json& doc) {
      auto const site = load_site(o);
      auto const& cat = *site;
      doc["site"]     = {{"objects", cat.object_count()}, {"arrows", cat.arrow_count()}, {"direct", cat.is_direct()}};
      if (!o.presheaf.empty()) {
        auto const p = load_presheaf(site, o.presheaf);
        Json       sizes = Json::object();
        for (Index c = 0; c < cat.object_count(); ++c) sizes[cat.object_name(c)] = p.size(c);
        doc["presheaf"] = sizes;
      }
      if (!o.classifier.empty()) {
        auto const c      = load_classifier(site, o);
        doc["classifier"] = to_json(c->report);
      }
      doc["valid"] = true;
      return 0;
    }

    int cmd_omega(Options const& o, Json& doc) {
      auto const  site  = load_site(o);
      auto const  omega = omega_for(site);
      auto const& cat   = *site;
      Json        objs  = Json::object();
      for (Index c = 0; c < cat.object_count(); ++c) {
        Json sieves = Json::array();
        auto const& into = cat.arrows_into(c);
        for (auto const& s : omega.sieves(c)) {
          Json arrows = Json::array();
          for (std::size_t k = 0; k < into.size(); ++k) {
            if ((s.mask >> k & 1U) != 0) arrows.push_back(cat.arrow_name(into[k]));
          }
          sieves.push_back({{"name", omega.algebra(c).names[omega.index_of(c, s.mask)]}, {"arrows", arrows}});
        }
        objs[cat.object_name(c)] = {{"count", omega.size(c)}, {"sieves", sieves},
                                    {"hasse", hasse_json(from_heyting(omega.algebra(c)))},
                                    {"algebra", to_json(omega.algebra(c))}};
      }
      doc["omega"]  = objs;
      auto const r  = omega.verify();
      doc["report"] = to_json(r);
      if (!o.dot.empty()) {
        Json files = Json::array();
        for (Index c = 0; c < cat.object_count(); ++c) {
          write_file(o.dot, "omega_" + cat.object_name(c) + ".dot",
                     hasse_dot(omega.algebra(c), "Omega(" + cat.object_name(c) + ")"), files);
        }
        doc["dot"] = files;
      }
      return verdict(r);
    }

    int cmd_enumerate_lt(Options const& o, Json& doc) {
      auto const site  = load_site(o);
      auto const omega = omega_for(site);
      auto const lts   = enumerate_lawvere(omega);
      Json       list  = Json::array();
      bool       ok    = true;
      for (std::size_t i = 0; i < lts.size(); ++i) {
        auto const g    = lt_to_gt(omega, lts[i]);
        auto const rt   = grothendieck_correspondence(omega, lts[i]);
        auto       name = classical_name(omega, g);
        ok              = ok && rt.passed();
        list.push_back({{"name", name.empty() ? "j" + std::to_string(i + 1) : name},
                        {"grothendieck", grothendieck_to_json(omega, g)["covers"]},
                        {"lawvere", lawvere_to_json(omega, lts[i])["j"]},
                        {"round_trip", rt.passed()}});
      }
      doc["count"]      = lts.size();
      doc["topologies"] = list;
      return ok ? 0 : 1;
    }

    Json algebra_summary(Classifier const& c, Index o) {
      auto const& a    = c.H.at(o);
      Json        tops = Json::array();
      for (Index x : c.tops[o]) tops.push_back(a.name(x));
      return {{"elements", a.size()}, {"tops", tops.size()}, {"carrier", a.base.names}, {"top_elements", tops},
              {"hasse", hasse_json(a)}};
    }

    Report classifier_reports(Classifier const& c) {
      Report      r;
      auto const& cat = *c.H.site();
      r.append(verify_nch_presheaf(c.H), "H.");
      for (Index o = 0; o < cat.object_count(); ++o) {
        auto const p = "H(" + cat.object_name(o) + ").";
        r.append(verify_completeness(c.H.at(o)), p);
        r.append(structure_checks(c.H.at(o)), p);
      }
      r.append(c.report, "classifier.");
      return r;
    }

    int cmd_build_classifier(Options const& o, Json& doc) {
      auto const  site = load_site(o);
      auto const& cat  = *site;
      Classifier  c;
      if (!o.classifier.empty()) {
        c = *load_classifier(site, o);
      } else {
        if (o.fuse != "coordinate" && o.fuse != "none") throw Error(ErrorKind::Parse, "--fuse takes coordinate or none");
        auto b       = build_from(site, o);
        Json unfused = Json::object();
        for (Index x = 0; x < cat.object_count(); ++x) {
          unfused[cat.object_name(x)] = {{"elements", b.classifier.H.at(x).size()},
                                         {"tops", b.classifier.tops[x].size()}};
        }
        doc["construction"] = unfused;
        c                   = o.fuse == "none" ? b.classifier : fuse_classifier(b);
      }
      auto const& hc = *c.H.site();
      Json        at = Json::object();
      for (Index x = 0; x < hc.object_count(); ++x) at[hc.object_name(x)] = algebra_summary(c, x);
      doc["classifier"] = at;
      auto const r      = classifier_reports(c);
      doc["report"]     = to_json(r);
      if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw Error(ErrorKind::Parse, "cannot write " + o.out);
        f << classifier_to_json(c).dump(2) << "\n";
      }
      if (!o.dot.empty()) {
        Json files = Json::array();
        write_file(o.dot, "H.dot", classifier_dot(c, "H"), files);
        for (Index x = 0; x < hc.object_count(); ++x) {
          write_file(o.dot, "H_" + hc.object_name(x) + ".dot", hasse_dot(c.H.at(x), "H(" + hc.object_name(x) + ")"),
                     files);
        }
        doc["dot"] = files;
      }
      return verdict(r);
    }

    Json nclt_json(Classifier const& c, NCLawvereTopology const& j) {
      auto const& cat     = *c.H.site();
      Json        covered = Json::object();
      for (Index x = 0; x < cat.object_count(); ++x) {
        Json l = Json::array();
        for (Index e = 0; e < c.H.at(x).size(); ++e) {
          if (!c.is_top(x, e) && c.is_top(x, j.j[x][e])) l.push_back(c.H.at(x).name(e));
        }
        covered[cat.object_name(x)] = l;
      }
      Json sections = Json::array();
      for (auto const& g : top_sections(c)) {
        Json gname = Json::object();
        for (Index x = 0; x < cat.object_count(); ++x) gname[cat.object_name(x)] = c.H.at(x).name(g[x]);
        try {
          auto const r  = restrict_to_section(c, j, g);
          auto const gt = lt_to_gt(c.omega, r.j);
          auto       n  = classical_name(c.omega, gt);
          sections.push_back({{"section", gname}, {"topology", n.empty() ? grothendieck_to_json(c.omega, gt) : Json(n)}});
        } catch (Error const& e) {
          sections.push_back({{"section", gname}, {"error", e.what()}});
        }
      }
      return {{"name", nc_topology_name(c, j)}, {"covered", covered}, {"lawvere", nc_lawvere_to_json(c, j)["j"]},
              {"sections", sections}};
    }

    int cmd_enumerate_nclt(Options const& o, Json& doc) {
      auto const site = load_site(o);
      auto const c    = load_classifier(site, o);
      auto const ncs  = enumerate_nc_lawvere(*c, o.jobs);
      Json       list = Json::array();
      for (auto const& j : ncs) list.push_back(nclt_json(*c, j));
      doc["count"]      = ncs.size();
      doc["topologies"] = list;
      return 0;
    }

    int cmd_derive_ncgt(Options const& o, Json& doc) {
      auto const site = load_site(o);
      auto const r    = resolve_topology(site, o);
      if (!r.sys.slice()) throw Error(ErrorKind::PreconditionViolated, "derive-ncgt needs an NC topology");
      auto const& c   = *r.classifier;
      auto const& cat = *c.H.site();
      Json        covers = Json::object();
      for (Index x = 0; x < cat.object_count(); ++x) covers[cat.object_name(x)] = Json::array();
      for (auto const& cv : r.sys.covers) {
        covers[cat.object_name(cv.object)].push_back(
            {{"element", c.H.at(cv.object).name(cv.x)},
             {"sieve", c.omega.algebra(cv.object).names[c.omega.index_of(cv.object, cv.mask)]}});
      }
      doc["topology"] = r.desc;
      doc["name"]     = r.sys.name;
      doc["covers"]   = covers;
      Report rep;
      auto   j = std::get<NCLawvereTopology>(topology_from_json(r.desc, c.omega, &c));
      for (Index x = 0; x < cat.object_count(); ++x) {
        rep.append(closure_yoneda_check(c, j, x), "y" + cat.object_name(x) + ".");
      }
      doc["report"] = to_json(rep);
      return verdict(rep);
    }

    Json digraph_json(SlicePresheaf const& f, Classifier const* c) {
      return to_json(f, c);
    }

    int cmd_check_sheaf(Options const& o, Json& doc) {
      auto const site = load_site(o);
      auto const r    = resolve_topology(site, o);
      if (o.presheaf.empty()) throw Error(ErrorKind::Parse, "--presheaf is required");
      auto const  f   = slice_from_json(r.sys.site, load_json(o.presheaf), r.classifier.get());
      auto const  v   = check_sheaf(r.sys, f);
      auto const& cat = *r.sys.site;
      doc["topology"] = r.sys.name.empty() ? r.desc : Json(r.sys.name);
      doc["sheaf"]    = v.sheaf;
      doc["families"] = v.families;
      if (is_digraph_site(cat)) doc["complete"] = is_complete_digraph(f.F);
      if (v.counterexample) {
        auto const& ce    = *v.counterexample;
        auto const& cover = r.sys.covers[ce.cover];
        Json        fam   = Json::array();
        auto const& into  = cat.arrows_into(cover.object);
        std::size_t i     = 0;
        for (std::size_t k = 0; k < into.size(); ++k) {
          if ((cover.mask >> k & 1U) == 0) continue;
          fam.push_back({{"arrow", cat.arrow_name(into[k])}, {"value", f.F.name(cat.dom(into[k]), ce.family[i++])}});
        }
        Json jc{{"object", cat.object_name(ce.object)}, {"extensions", ce.extensions}, {"family", fam}};
        if (r.sys.slice()) jc["cover"] = r.classifier->H.at(cover.object).name(cover.x);
        else jc["cover"] = omega_for(r.sys.site).algebra(cover.object).names[omega_for(r.sys.site).index_of(cover.object, cover.mask)];
        doc["counterexample"] = jc;
      }
      return v.sheaf ? 0 : 1;
    }

    std::string size_key(FiniteCategory const& cat, SlicePresheaf const& f) {
      std::string k;
      for (Index c = 0; c < cat.object_count(); ++c) {
        if (!k.empty()) k += ",";
        k += cat.object_name(c) + "=" + std::to_string(f.F.size(c));
      }
      return k;
    }

    int cmd_enumerate_sheaves(Options const& o, Json& doc) {
      auto const  site = load_site(o);
      auto const  r    = resolve_topology(site, o);
      auto const& cat  = *r.sys.site;
      auto const  b    = parse_bounds(cat, o.bounds);
      EnumerationOptions eo;
      eo.jobs      = o.jobs;
      auto const e = enumerate_sheaves(r.sys, b, eo);
      doc["topology"] = r.sys.name.empty() ? r.desc : Json(r.sys.name);
      doc["bounds"]   = bounds_text(cat, b);
      doc["count"]    = e.items.size();
      doc["labeled"]  = e.labeled;
      std::map<std::string, std::size_t> hist;
      std::size_t                        complete = 0;
      for (auto const& f : e.items) {
        ++hist[size_key(cat, f)];
        if (is_digraph_site(cat) && is_complete_digraph(f.F)) ++complete;
      }
      Json by = Json::object();
      for (auto const& [k, v] : hist) by[k] = v;
      doc["by_size"] = by;
      if (is_digraph_site(cat)) doc["complete"] = complete;
      Json items = Json::array();
      for (std::size_t i = 0; i < std::min(o.show, e.items.size()); ++i) {
        items.push_back(digraph_json(e.items[i], r.classifier.get()));
      }
      doc["items"] = items;
      return 0;
    }

    int cmd_terminal_search(Options const& o, Json& doc) {
      auto const  site = load_site(o);
      auto const  r    = resolve_topology(site, o);
      auto const& cat  = *r.sys.site;
      auto const  b    = parse_bounds(cat, o.bounds);
      EnumerationOptions eo;
      eo.jobs         = o.jobs;
      auto const t    = terminal_search(r.sys, b, eo);
      doc["topology"] = r.sys.name.empty() ? r.desc : Json(r.sys.name);
      doc["bounds"]   = bounds_text(cat, b);
      doc["verdict"]  = to_string(t.kind);
      doc["sheaves"]  = t.sheaves;
      doc["eliminated"] = t.eliminated.size();
      if (t.terminal) doc["terminal"] = digraph_json(*t.terminal, r.classifier.get());
      if (t.certificate) {
        doc["certificate"] = Json::array({digraph_json(t.certificate->first, r.classifier.get()),
                                          digraph_json(t.certificate->second, r.classifier.get())});
      }
      doc["note"] = t.note;
      return t.kind == TerminalKind::Terminal ? 0 : 1;
    }

    int cmd_export_dot(Options const& o, Json& doc) {
      if (o.dot.empty()) throw Error(ErrorKind::Parse, "--dot DIR is required");
      auto const  site  = load_site(o);
      auto const& cat   = *site;
      auto const  omega = omega_for(site);
      Json        files = Json::array();
      for (Index c = 0; c < cat.object_count(); ++c) {
        write_file(o.dot, "omega_" + cat.object_name(c) + ".dot",
                   hasse_dot(omega.algebra(c), "Omega(" + cat.object_name(c) + ")"), files);
      }
      if (!o.base.empty() || !o.classifier.empty() || is_digraph_site(cat)) {
        auto const c = load_classifier(site, o);
        write_file(o.dot, "H.dot", classifier_dot(*c, "H"), files);
        auto const& hc = *c->H.site();
        for (Index x = 0; x < hc.object_count(); ++x) {
          write_file(o.dot, "H_" + hc.object_name(x) + ".dot", hasse_dot(c->H.at(x), "H(" + hc.object_name(x) + ")"),
                     files);
        }
      }
      if (!o.presheaf.empty()) {
        auto const f = slice_from_json(site, load_json(o.presheaf), nullptr);
        write_file(o.dot, "presheaf.dot",
                   is_digraph_site(cat) ? digraph_dot(to_digraph(f, nullptr), "P") : presheaf_dot(f.F, "P"), files);
      }
      doc["files"] = files;
      return 0;
    }

    int cmd_demo(Options const& o, Json& doc) {
      auto const  site  = digraph_site();
      auto const& cat   = *site;
      auto const  omega = digraph_omega(site);
      Report      all;

      Json om = Json::object();
      for (Index c = 0; c < cat.object_count(); ++c) {
        om[cat.object_name(c)] = {{"sieves", omega.algebra(c).names},
                                  {"hasse", hasse_json(from_heyting(omega.algebra(c)))}};
      }
      all.append(omega.verify(), "omega.");
      doc["omega"] = om;

      auto const lts  = enumerate_lawvere(omega);
      Json       ltj  = Json::array();
      for (auto const& j : lts) {
        auto const g = lt_to_gt(omega, j);
        ltj.push_back({{"name", classical_name(omega, g)}, {"covers", grothendieck_to_json(omega, g)["covers"]}});
        all.append(grothendieck_correspondence(omega, j), classical_name(omega, g) + ".");
      }
      doc["lawvere"] = {{"count", lts.size()}, {"topologies", ltj}};

      auto       b   = digraph_classifier_build(site);
      auto const E   = cat.object("E");
      auto const cls = std::make_shared<Classifier const>(fuse_classifier(b));
      doc["classifier"] = {{"construction", {{"elements", b.classifier.H.at(E).size()}, {"tops", b.classifier.tops[E].size()}}},
                           {"fused", algebra_summary(*cls, E)}};
      all.append(classifier_reports(*cls), "");
      all.append(verify_nc_heyting(b.classifier.H.at(E)), "construction.");

      auto const ncs = enumerate_nc_lawvere(*cls, o.jobs);
      Json       nl  = Json::array();
      for (auto const& j : ncs) nl.push_back(nclt_json(*cls, j));
      doc["nc_lawvere"] = {{"count", ncs.size()}, {"topologies", nl}};

      // Sheaves: S ≠ ∅ up to the given bounds, S = ∅ against all colored
      // presheaves within smaller bounds.
      auto const big   = parse_bounds(cat, o.bounds.empty() ? "V=3,E=9" : o.bounds);
      auto const small = Bounds{{std::min<std::size_t>(big.max[0], 3), std::min<std::size_t>(big.max[1], 4)}};
      EnumerationOptions eo;
      eo.jobs = o.jobs;
      auto const presheaves = enumerate_presheaves(site, cls.get(), small, eo).items.size();
      // T over itself: one vertex, one loop per color.
      SlicePresheaf t_itself{cls->T, NaturalTransformation{}};
      t_itself.pi->components.resize(cat.object_count());
      for (Index c = 0; c < cat.object_count(); ++c) {
        for (Index x = 0; x < cls->T.size(c); ++x) t_itself.pi->components[c].push_back(x);
      }
      Json       sh         = Json::array();
      Json       term       = Json::array();
      std::optional<std::pair<SlicePresheaf, SlicePresheaf>> sample;
      for (auto const& j : ncs) {
        auto const name  = nc_topology_name(*cls, j);
        auto const sys   = CoverSystem::nc(cls, derive_nc_grothendieck(*cls, j));
        bool const empty = name == "nclt:0000";
        auto const e     = enumerate_sheaves(sys, empty ? small : big, eo);
        std::size_t complete = 0;
        for (auto const& f : e.items) complete += is_complete_digraph(f.F) ? 1 : 0;
        Json row{{"name", name}, {"bounds", bounds_text(cat, empty ? small : big)}, {"sheaves", e.items.size()},
                 {"complete", complete}};
        if (empty) {
          row["presheaves"] = presheaves;
          all.add(name + ": every colored digraph is a sheaf", e.items.size() == presheaves);
        } else {
          all.add(name + ": sheaves are the complete digraphs", complete == e.items.size());
          auto const tv = check_sheaf(sys, t_itself);
          row["T_is_sheaf"] = tv.sheaf;
          all.add(name + ": T is not a sheaf", !tv.sheaf);
          auto const tr = terminal_search(sys, Bounds{{2, 4}}, eo);
          term.push_back({{"name", name}, {"verdict", to_string(tr.kind)}});
          all.add(name + ": no terminal sheaf", tr.kind == TerminalKind::NoTerminal);
          if (tr.certificate && !sample) sample = tr.certificate;
        }
        sh.push_back(std::move(row));
      }
      doc["sheaves"]  = sh;
      doc["terminal"] = term;
      if (sample) {
        doc["certificate"] = Json::array({to_json(sample->first, cls.get()), to_json(sample->second, cls.get())});
      }
      doc["report"] = to_json(all);
      if (!o.dot.empty()) {
        Json files = Json::array();
        for (Index c = 0; c < cat.object_count(); ++c) {
          write_file(o.dot, "omega_" + cat.object_name(c) + ".dot",
                     hasse_dot(omega.algebra(c), "Omega(" + cat.object_name(c) + ")"), files);
        }
        write_file(o.dot, "H.dot", classifier_dot(*cls, "H"), files);
        write_file(o.dot, "H_E.dot", hasse_dot(cls->H.at(E), "H(E)"), files);
        if (sample) {
          write_file(o.dot, "certificate_1.dot", digraph_dot(to_digraph(sample->first, cls.get()), "X"), files);
          write_file(o.dot, "certificate_2.dot", digraph_dot(to_digraph(sample->second, cls.get()), "Y"), files);
        }
        doc["dot"] = files;
      }
      return verdict(all);
    }

  }  // namespace

  Outcome run_command(std::vector<std::string> const& args) {
    Outcome out;
    Options o;
    CLI::App app{"Finite presheaf toposes, NC Heyting algebras and NC topologies"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    using Handler = std::function<int(Options const&, Json&)>;
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](char const* name, char const* help, Handler h) {
      auto* sc = app.add_subcommand(name, help);
      sc->add_option("--site", o.site, "category JSON or 'digraph'");
      sc->add_option("--presheaf", o.presheaf, "presheaf, slice presheaf or colored digraph JSON");
      sc->add_option("--base", o.base, "presheaf P with H = Sub_H(P); loops by default");
      sc->add_option("--classifier", o.classifier, "classifier bundle JSON");
      sc->add_option("--section", o.section, "global section, e.g. V=x,E=a");
      sc->add_option("--topology", o.topology, "J1..J4, nclt:<bits> or topology JSON");
      sc->add_option("--bounds", o.bounds, "N or V=3,E=9");
      sc->add_option("--fuse", o.fuse, "coordinate or none");
      sc->add_option("--jobs", o.jobs, "worker threads");
      sc->add_option("--dot", o.dot, "directory for DOT files");
      sc->add_option("--out", o.out, "write the classifier bundle here");
      sc->add_option("--show", o.show, "how many sheaves to list");
      sc->add_flag("--pretty", o.pretty, "human-readable output");
      sc->add_flag("--timing", o.timing, "include wall time");
      commands.emplace_back(sc, std::move(h));
    };
    add("validate", "validate documents", cmd_validate);
    add("omega", "sieves and Heyting tables", cmd_omega);
    add("enumerate-lt", "all Lawvere-Tierney topologies", cmd_enumerate_lt);
    add("build-classifier", "build (and fuse) the NC classifier", cmd_build_classifier);
    add("enumerate-nclt", "all NC Lawvere topologies", cmd_enumerate_nclt);
    add("derive-ncgt", "covers of an NC topology", cmd_derive_ncgt);
    add("check-sheaf", "sheaf condition for one presheaf", cmd_check_sheaf);
    add("enumerate-sheaves", "sheaves within bounds up to isomorphism", cmd_enumerate_sheaves);
    add("terminal-search", "look for a terminal sheaf", cmd_terminal_search);
    add("export-dot", "write DOT renderings", cmd_export_dot);
    add("demo", "the V,E example end to end", cmd_demo);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (CLI::CallForHelp const&) {
      out.out = app.help();
      return out;
    } catch (CLI::CallForAllHelp const&) {
      out.out = app.help("", CLI::AppFormatMode::All);
      return out;
    } catch (CLI::ParseError const& e) {
      Json doc{{"error", {{"kind", "Parse"}, {"message", e.what()}}}, {"exit", 2}};
      out.code = 2;
      out.out  = doc.dump(2) + "\n";
      out.err  = std::string(e.what()) + "\n";
      return out;
    }

    Json doc;
    for (auto const& [sc, h] : commands) {
      if (!sc->parsed()) continue;
      doc["command"] = sc->get_name();
      Json echo      = Json::array();
      for (auto const& a : args) echo.push_back(a);
      doc["args"] = echo;
      auto const t0 = std::chrono::steady_clock::now();
      try {
        out.code = h(o, doc);
      } catch (Error const& e) {
        out.code     = 2;
        doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
      } catch (nlohmann::json::exception const& e) {
        out.code     = 2;
        doc["error"] = {{"kind", "Parse"}, {"message", e.what()}};
      } catch (std::filesystem::filesystem_error const& e) {
        out.code     = 2;
        doc["error"] = {{"kind", "Parse"}, {"message", e.what()}};
      }
      if (o.timing) {
        doc["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      }
      doc["exit"] = out.code;
    }
    if (o.pretty) {
      std::ostringstream os;
      render(os, doc, 0);
      out.out = os.str();
    } else {
      out.out = doc.dump(2) + "\n";
    }
    if (doc.contains("error")) out.err = doc["error"]["message"].get<std::string>() + "\n";
    return out;
  }

}  // namespace nctopos::cli
