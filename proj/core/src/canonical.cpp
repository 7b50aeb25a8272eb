#include "nctopos/canonical.hpp"

#include <algorithm>
#include <numeric>

namespace nctopos {

  namespace {

    std::vector<std::vector<Index>> non_identity_into(FiniteCategory const& cat) {
      std::vector<std::vector<Index>> out(cat.object_count());
      for (Index c = 0; c < cat.object_count(); ++c) {
        for (Index a : cat.arrows_into(c)) {
          if (!cat.is_identity(a)) out[c].push_back(a);
        }
      }
      return out;
    }

    struct Search {
      FiniteCategory const&           cat;
      Profiles const&                 prof;
      std::vector<std::vector<Index>> nonid;
      std::vector<std::vector<Index>> labels;  // per object, old → new
      std::vector<Index>              code;
      std::vector<Index>              best;
      bool                            have_best = false;

      Search(FiniteCategory const& c, Profiles const& p) : cat(c), prof(p), nonid(non_identity_into(c)) {
        labels.resize(cat.object_count());
        for (Index o = 0; o < cat.object_count(); ++o) labels[o].assign(prof[o].size(), 0);
      }

      // True when the current prefix already loses to the best code.
      bool worse_prefix() const {
        if (!have_best) return false;
        std::size_t const n = std::min(code.size(), best.size());
        for (std::size_t i = 0; i < n; ++i) {
          if (code[i] != best[i]) return code[i] > best[i];
        }
        return false;
      }

      void run(std::size_t k) {
        auto const& order = cat.direct_order();
        if (k == order.size()) {
          if (!have_best || code < best) {
            best      = code;
            have_best = true;
          }
          return;
        }
        Index const c = order[k];
        auto const  n = static_cast<Index>(prof[c].size());
        std::vector<std::vector<Index>> rel(n);
        for (Index e = 0; e < n; ++e) {
          rel[e].push_back(prof[c][e][0]);
          for (std::size_t i = 0; i < nonid[c].size(); ++i) {
            rel[e].push_back(labels[cat.dom(nonid[c][i])][prof[c][e][1 + i]]);
          }
        }
        std::vector<Index> sorted(n);
        std::iota(sorted.begin(), sorted.end(), Index{0});
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](Index a, Index b) { return rel[a] < rel[b]; });
        std::size_t const mark = code.size();
        code.push_back(n);
        for (Index e : sorted) code.insert(code.end(), rel[e].begin(), rel[e].end());
        if (worse_prefix()) {
          code.resize(mark);
          return;
        }
        std::vector<std::pair<std::size_t, std::size_t>> groups;
        for (std::size_t i = 0; i < sorted.size();) {
          std::size_t j = i + 1;
          while (j < sorted.size() && rel[sorted[j]] == rel[sorted[i]]) ++j;
          if (j - i > 1) groups.emplace_back(i, j);
          i = j;
        }
        auto assign = [&] {
          for (std::size_t i = 0; i < sorted.size(); ++i) labels[c][sorted[i]] = static_cast<Index>(i);
        };
        if (k + 1 == order.size() || groups.empty()) {
          assign();
          run(k + 1);
          code.resize(mark);
          return;
        }
        // Odometer over permutations of every tie group.
        while (true) {
          assign();
          run(k + 1);
          std::size_t gi = 0;
          for (; gi < groups.size(); ++gi) {
            auto const b = sorted.begin() + static_cast<std::ptrdiff_t>(groups[gi].first);
            auto const e = sorted.begin() + static_cast<std::ptrdiff_t>(groups[gi].second);
            if (std::next_permutation(b, e)) break;
          }
          if (gi == groups.size()) break;
        }
        code.resize(mark);
      }
    };

    std::vector<Index> brute_code(SlicePresheaf const& f, std::vector<std::vector<Index>> const& labels,
                                  std::vector<std::vector<Index>>& inv) {
      auto const&        cat = f.F.category();
      std::vector<Index> code{f.pi ? Index{1} : Index{0}};
      for (Index c = 0; c < cat.object_count(); ++c) {
        code.push_back(static_cast<Index>(f.F.size(c)));
      }
      for (Index c = 0; c < cat.object_count(); ++c) {
        for (Index e = 0; e < f.F.size(c); ++e) inv[c][labels[c][e]] = e;
        for (Index i = 0; i < f.F.size(c); ++i) {
          code.push_back(f.pi ? f.pi->components[c][inv[c][i]] : 0);
        }
      }
      for (Index a = 0; a < cat.arrow_count(); ++a) {
        if (cat.is_identity(a)) continue;
        for (Index i = 0; i < f.F.size(cat.cod(a)); ++i) {
          code.push_back(labels[cat.dom(a)][f.F.act(a, inv[cat.cod(a)][i])]);
        }
      }
      return code;
    }

    SlicePresheaf relabel(SlicePresheaf const& f, std::vector<std::vector<Index>> const& labels) {
      auto const&                           cat = f.F.category();
      std::vector<std::vector<std::string>> names(cat.object_count());
      std::vector<std::vector<Index>>       inv(cat.object_count());
      for (Index c = 0; c < cat.object_count(); ++c) {
        auto const n = f.F.size(c);
        inv[c].resize(n);
        for (Index e = 0; e < n; ++e) inv[c][labels[c][e]] = e;
        for (Index i = 0; i < n; ++i) names[c].push_back(cat.object_name(c) + std::to_string(i));
      }
      std::vector<std::vector<Index>> act(cat.arrow_count());
      for (Index a = 0; a < cat.arrow_count(); ++a) {
        Index const cc = cat.cod(a);
        for (Index i = 0; i < f.F.size(cc); ++i) {
          act[a].push_back(labels[cat.dom(a)][f.F.act(a, inv[cc][i])]);
        }
      }
      SlicePresheaf out{Presheaf(f.F.site(), std::move(names), std::move(act)), std::nullopt};
      if (f.pi) {
        NaturalTransformation pi;
        for (Index c = 0; c < cat.object_count(); ++c) {
          pi.components.emplace_back();
          for (Index i = 0; i < f.F.size(c); ++i) pi.components[c].push_back(f.pi->components[c][inv[c][i]]);
        }
        out.pi = std::move(pi);
      }
      return out;
    }

  }  // namespace

  Profiles profiles_of(SlicePresheaf const& f) {
    auto const& cat = f.F.category();
    if (!cat.is_direct()) {
      throw Error(ErrorKind::Unsupported, "profiles need a direct site");
    }
    auto const nonid = non_identity_into(cat);
    Profiles   p(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      for (Index e = 0; e < f.F.size(c); ++e) {
        std::vector<Index> row{f.pi ? f.pi->components[c][e] : 0};
        for (Index a : nonid[c]) row.push_back(f.F.act(a, e));
        p[c].push_back(std::move(row));
      }
    }
    return p;
  }

  SlicePresheaf from_profiles(Site const& site, Profiles const& p, bool colored) {
    auto const&                           cat   = *site;
    auto const                            nonid = non_identity_into(cat);
    std::vector<std::vector<std::string>> names(cat.object_count());
    std::vector<std::vector<Index>>       act(cat.arrow_count());
    NaturalTransformation                 pi;
    for (Index c = 0; c < cat.object_count(); ++c) {
      pi.components.emplace_back();
      for (Index e = 0; e < p[c].size(); ++e) {
        names[c].push_back(cat.object_name(c) + std::to_string(e));
        pi.components[c].push_back(p[c][e][0]);
      }
      for (std::size_t i = 0; i < nonid[c].size(); ++i) {
        for (Index e = 0; e < p[c].size(); ++e) act[nonid[c][i]].push_back(p[c][e][1 + i]);
      }
    }
    SlicePresheaf out{Presheaf(site, std::move(names), std::move(act)), std::nullopt};
    if (colored) out.pi = std::move(pi);
    return out;
  }

  std::vector<Index> canonical_code(FiniteCategory const& cat, Profiles const& p, bool colored) {
    Search s(cat, p);
    s.code.push_back(colored ? 1 : 0);
    s.run(0);
    return std::move(s.best);
  }

  Profiles decode_code(FiniteCategory const& cat, std::vector<Index> const& code) {
    auto const  nonid = non_identity_into(cat);
    Profiles    p(cat.object_count());
    std::size_t i = 1;
    for (Index c : cat.direct_order()) {
      Index const n     = code.at(i++);
      auto const  width = 1 + nonid[c].size();
      for (Index e = 0; e < n; ++e) {
        p[c].emplace_back(code.begin() + static_cast<std::ptrdiff_t>(i),
                          code.begin() + static_cast<std::ptrdiff_t>(i + width));
        i += width;
      }
    }
    return p;
  }

  CanonicalForm canonical_form(SlicePresheaf const& f, std::size_t max_labelings) {
    auto const&   cat = f.F.category();
    CanonicalForm out;
    if (cat.is_direct()) {
      out.code      = canonical_code(cat, profiles_of(f), f.pi.has_value());
      out.relabeled = from_profiles(f.F.site(), decode_code(cat, out.code), f.pi.has_value());
      return out;
    }
    double total = 1;
    for (Index c = 0; c < cat.object_count(); ++c) {
      for (std::size_t i = 2; i <= f.F.size(c); ++i) total *= static_cast<double>(i);
    }
    if (total > static_cast<double>(max_labelings)) {
      throw Error(ErrorKind::TooLarge, "canonical labeling needs " + std::to_string(total) + " labelings");
    }
    std::vector<std::vector<Index>> labels(cat.object_count()), inv(cat.object_count());
    for (Index c = 0; c < cat.object_count(); ++c) {
      labels[c].resize(f.F.size(c));
      inv[c].resize(f.F.size(c));
      std::iota(labels[c].begin(), labels[c].end(), Index{0});
    }
    auto best_labels = labels;
    auto best        = brute_code(f, labels, inv);
    while (true) {
      Index c = 0;
      for (; c < cat.object_count(); ++c) {
        if (std::next_permutation(labels[c].begin(), labels[c].end())) break;
      }
      if (c == cat.object_count()) break;
      auto code = brute_code(f, labels, inv);
      if (code < best) {
        best        = std::move(code);
        best_labels = labels;
      }
    }
    out.code      = std::move(best);
    out.relabeled = relabel(f, best_labels);
    return out;
  }

  bool isomorphic(SlicePresheaf const& a, SlicePresheaf const& b) {
    return canonical_form(a).code == canonical_form(b).code;
  }

}  // namespace nctopos
