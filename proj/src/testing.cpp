#include "sahr/testing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "sahr/error.hpp"
#include "sahr/oracles.hpp"
#include "sahr/parallel.hpp"

namespace sahr {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (salt + 0x2545F4914F6CDD1DULL));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t sat_pow(std::uint64_t a, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = sat_mul(r, a);
  return r;
}

bool next_subset(std::vector<std::size_t>& s, std::size_t n) {
  const std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::size_t dense_size(std::size_t n, std::size_t k) {
  long double cells = 1;
  for (std::size_t i = 0; i < k; ++i) cells *= static_cast<long double>(n);
  if (cells > static_cast<long double>(std::size_t{1} << 30))
    fail(ErrorKind::TooLarge, "hypergraph storage exceeds 2^30 entries");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= n;
  return total;
}

// ---- pattern search ------------------------------------------------------

class CopySearch {
 public:
  CopySearch(const Hypergraph& g, const Pattern& p, bool induced) : g_(g), p_(p), induced_(induced) {
    std::set<std::vector<std::size_t>> edges(p.edges.begin(), p.edges.end());
    // Constraints of pattern vertex j: k-subsets of {0..j} containing j.
    checks_.resize(p.vertices);
    anchor_.assign(p.vertices, SIZE_MAX);
    for (std::size_t j = 0; j < p.vertices; ++j) {
      if (j + 1 < p.k) continue;
      std::vector<std::size_t> rest(p.k - 1);
      std::iota(rest.begin(), rest.end(), 0);
      do {
        std::vector<std::size_t> e(rest);
        e.push_back(j);
        bool in = edges.count(e) > 0;
        if (in || induced) checks_[j].push_back({e, in});
        if (in && p.k == 2 && anchor_[j] == SIZE_MAX) anchor_[j] = e[0];
      } while (p.k > 1 && next_subset(rest, j));
    }
  }

  std::optional<std::vector<std::size_t>> run() {
    if (p_.vertices > g_.size()) return std::nullopt;
    image_.clear();
    used_.assign(g_.size(), 0);
    if (step()) return image_;
    return std::nullopt;
  }

 private:
  struct Check {
    std::vector<std::size_t> tuple;
    bool edge;
  };

  bool ok(std::size_t j) const {
    std::vector<std::size_t> t(p_.k);
    for (const auto& c : checks_[j]) {
      for (std::size_t i = 0; i < p_.k; ++i) t[i] = image_[c.tuple[i]];
      std::sort(t.begin(), t.end());
      if (g_.edge(t) != c.edge) return false;
    }
    return true;
  }

  bool try_vertex(std::size_t v, std::size_t j) {
    if (used_[v]) return false;
    image_.push_back(v);
    used_[v] = 1;
    if (ok(j) && step()) return true;
    used_[v] = 0;
    image_.pop_back();
    return false;
  }

  bool step() {
    const std::size_t j = image_.size();
    if (j == p_.vertices) return true;
    if (anchor_[j] != SIZE_MAX) {
      for (std::size_t v : g_.neighbours(image_[anchor_[j]]))
        if (try_vertex(v, j)) return true;
      return false;
    }
    for (std::size_t v = 0; v < g_.size(); ++v)
      if (try_vertex(v, j)) return true;
    return false;
  }

  const Hypergraph& g_;
  const Pattern& p_;
  bool induced_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::size_t> anchor_;
  std::vector<std::size_t> image_;
  std::vector<char> used_;
};

// ---- Psi -----------------------------------------------------------------

// k-multisets over [r] as sorted vectors, lexicographic.
std::vector<std::vector<std::size_t>> multisets(std::size_t r, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t v = from; v < r; ++v) {
      cur.push_back(v);
      rec(v);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// R has vertex set [r] and edge set `edges` (k-multisets). Plain hom when
// !induced; otherwise non-edges over distinct H-vertices must map to non-edges.
bool maps_into(const Pattern& H, std::size_t r, const std::set<std::vector<std::size_t>>& edges, bool induced) {
  std::set<std::vector<std::size_t>> hedges(H.edges.begin(), H.edges.end());
  std::vector<std::vector<std::size_t>> all;
  if (H.vertices >= H.k) {
    std::vector<std::size_t> s(H.k);
    std::iota(s.begin(), s.end(), 0);
    do all.push_back(s);
    while (next_subset(s, H.vertices));
  }
  std::vector<std::size_t> f(H.vertices, 0);
  while (true) {
    bool good = true;
    for (const auto& e : all) {
      bool in = hedges.count(e) > 0;
      if (!in && !induced) continue;
      std::vector<std::size_t> img;
      for (std::size_t v : e) img.push_back(f[v]);
      std::sort(img.begin(), img.end());
      if ((edges.count(img) > 0) != in) {
        good = false;
        break;
      }
    }
    if (good) return true;
    std::size_t i = 0;
    while (i < f.size() && ++f[i] == r) f[i++] = 0;
    if (i == f.size()) return false;
  }
}

// Psi_1 (induced=false) or Psi_2 (induced=true), exhaustive over R on at most r vertices.
std::size_t psi_hom(const std::vector<Pattern>& family, std::size_t r, bool induced) {
  std::size_t best = 0;
  bool any = false;
  for (std::size_t rv = 1; rv <= r; ++rv) {
    auto ms = multisets(rv, family.front().k);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ms.size()); ++bits) {
      std::set<std::vector<std::size_t>> edges;
      for (std::size_t i = 0; i < ms.size(); ++i)
        if (bits >> i & 1) edges.insert(ms[i]);
      std::size_t smallest = SIZE_MAX;
      for (const auto& H : family)
        if (H.vertices < smallest && maps_into(H, rv, edges, induced)) smallest = H.vertices;
      if (smallest == SIZE_MAX) continue;
      any = true;
      best = std::max(best, smallest);
    }
  }
  return any ? best : 1;
}

// Does some extension of the blow-up of R with part sizes `sizes` avoid every
// induced copy from the family? Backtracks over the free tuples.
class ExtensionSearch {
 public:
  ExtensionSearch(const std::vector<Pattern>& family, std::size_t k, const std::set<std::vector<std::size_t>>& R,
                  const std::vector<std::size_t>& sizes)
      : family_(family), k_(k) {
    for (std::size_t i = 0; i < sizes.size(); ++i)
      for (std::size_t c = 0; c < sizes[i]; ++c) part_.push_back(i);
    n_ = part_.size();
    index_.assign(dense_size(n_, k_), SIZE_MAX);
    if (n_ >= k_) {
      std::vector<std::size_t> s(k_);
      std::iota(s.begin(), s.end(), 0);
      do {
        std::vector<std::size_t> parts;
        for (std::size_t v : s) parts.push_back(part_[v]);
        std::sort(parts.begin(), parts.end());
        bool crossing = std::adjacent_find(parts.begin(), parts.end()) == parts.end();
        index_[dense(s)] = value_.size();
        value_.push_back(crossing ? (R.count(parts) ? 1 : 0) : -1);
        if (!crossing) free_.push_back(value_.size() - 1);
      } while (next_subset(s, n_));
    }
    // Vertex subsets to check, each keyed by the last free tuple it needs.
    due_.resize(free_.size() + 1);
    for (const auto& H : family_) {
      if (H.vertices > n_ || H.vertices < k_) continue;
      std::vector<std::size_t> s(H.vertices);
      std::iota(s.begin(), s.end(), 0);
      do {
        std::size_t last = 0;
        std::vector<std::size_t> t(k_);
        std::iota(t.begin(), t.end(), 0);
        do {
          std::vector<std::size_t> tup;
          for (std::size_t i : t) tup.push_back(s[i]);
          std::size_t id = index_[dense(tup)];
          auto pos = std::find(free_.begin(), free_.end(), id);
          if (pos != free_.end()) last = std::max<std::size_t>(last, pos - free_.begin() + 1);
        } while (next_subset(t, H.vertices));
        due_[last].push_back({&H, s});
      } while (next_subset(s, n_));
    }
  }

  bool extendable() {
    if (!clean(0)) return false;
    return assign(0);
  }

 private:
  struct Due {
    const Pattern* H;
    std::vector<std::size_t> vertices;
  };

  std::size_t dense(std::span<const std::size_t> sorted) const {
    std::size_t idx = 0;
    for (std::size_t v : sorted) idx = idx * n_ + v;
    return idx;
  }

  bool has_induced_copy(const Due& d) const {
    const Pattern& H = *d.H;
    std::vector<std::size_t> perm(d.vertices);
    do {
      bool match = true;
      std::vector<std::size_t> t(k_);
      std::iota(t.begin(), t.end(), 0);
      do {
        std::vector<std::size_t> tup;
        for (std::size_t i : t) tup.push_back(perm[i]);
        std::sort(tup.begin(), tup.end());
        bool in_host = value_[index_[dense(tup)]] == 1;
        bool in_h = std::find(H.edges.begin(), H.edges.end(), t) != H.edges.end();
        if (in_host != in_h) {
          match = false;
          break;
        }
      } while (next_subset(t, H.vertices));
      if (match) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  }

  bool clean(std::size_t level) const {
    for (const auto& d : due_[level])
      if (has_induced_copy(d)) return false;
    return true;
  }

  bool assign(std::size_t i) {
    if (i == free_.size()) return true;
    for (int v : {0, 1}) {
      value_[free_[i]] = v;
      if (clean(i + 1) && assign(i + 1)) return true;
    }
    value_[free_[i]] = -1;
    return false;
  }

  const std::vector<Pattern>& family_;
  std::size_t k_, n_ = 0;
  std::vector<std::size_t> part_;
  std::vector<std::size_t> index_;
  std::vector<int> value_;
  std::vector<std::size_t> free_;
  std::vector<std::vector<Due>> due_;
};

constexpr std::size_t kBlowUpCap = 6;

void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& cur,
                  const std::function<bool(const std::vector<std::size_t>&)>& fn, bool& stop) {
  if (stop) return;
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    if (fn(cur)) stop = true;
    cur.pop_back();
    return;
  }
  for (std::size_t a = 0; a <= total && !stop; ++a) {
    cur.push_back(a);
    compositions(total - a, parts, cur, fn, stop);
    cur.pop_back();
  }
}

// s(P, R) by increasing total blow-up size; 0 when every blow-up up to the cap
// has an extension with the property (treated as "strongly has P").
std::size_t blow_up_size(const std::vector<Pattern>& family, std::size_t k, std::size_t rv,
                         const std::set<std::vector<std::size_t>>& R) {
  for (std::size_t s = 1; s <= kBlowUpCap; ++s) {
    bool found = false;
    std::vector<std::size_t> cur;
    compositions(s, rv, cur, [&](const std::vector<std::size_t>& sizes) {
      return !ExtensionSearch(family, k, R, sizes).extendable();
    }, found);
    if (found) return s;
  }
  return 0;
}

std::size_t psi_blow_up(const std::vector<Pattern>& family, std::size_t r) {
  const std::size_t k = family.front().k;
  std::size_t best = 0;
  for (std::size_t rv = 1; rv <= r; ++rv) {
    std::vector<std::vector<std::size_t>> sets;
    if (rv >= k) {
      std::vector<std::size_t> s(k);
      std::iota(s.begin(), s.end(), 0);
      do sets.push_back(s);
      while (next_subset(s, rv));
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << sets.size()); ++bits) {
      std::set<std::vector<std::size_t>> R;
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (bits >> i & 1) R.insert(sets[i]);
      best = std::max(best, blow_up_size(family, k, rv, R));
    }
  }
  return best == 0 ? 1 : best;
}

Pattern graph(std::string name, std::size_t n, std::vector<std::vector<std::size_t>> edges) {
  return Pattern{std::move(name), 2, n, std::move(edges)};
}

}  // namespace

// ---------------------------------------------------------------------------

Instance::Instance(PointConfig points, RelationSpec rel) : points_(std::move(points)), rel_(std::move(rel)) {
  verify_complexity(rel_);
  if (rel_.arity < 2) fail(ErrorKind::InvalidSpec, "instances need arity >= 2");
  if (points_.dim != rel_.dim && !points_.points.empty())
    fail(ErrorKind::InvalidSpec, "point dimension differs from the relation dimension");
  const std::size_t n = size();
  if (rel_.arity == 2 && n <= 8000) {
    adj_.assign(n * n, 0);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point* t[2] = {&points_.points[i], &points_.points[j]};
        adj_[i * n + j] = eval_relation(rel_, std::span<const Point* const>(t, 2));
      }
    });
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) adj_[j * n + i] = adj_[i * n + j];
  }
}

bool Instance::edge(std::span<const std::size_t> tuple) const {
  if (!adj_.empty()) return adj_[tuple[0] * size() + tuple[1]];
  std::vector<const Point*> pts;
  for (std::size_t i : tuple) pts.push_back(&points_.points[i]);
  return eval_relation(rel_, pts);
}

Hypergraph::Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k), bits_(dense_size(n, k), 0), nbr_(n) {}

std::size_t Hypergraph::index(std::span<const std::size_t> sorted) const {
  std::size_t idx = 0;
  for (std::size_t v : sorted) idx = idx * n_ + v;
  return idx;
}

void Hypergraph::finish() {
  if (k_ != 2) return;
  for (std::size_t u = 0; u < n_; ++u) {
    nbr_[u].clear();
    for (std::size_t v = 0; v < n_; ++v) {
      if (u == v) continue;
      std::size_t t[2] = {std::min(u, v), std::max(u, v)};
      if (edge(t)) nbr_[u].push_back(v);
    }
  }
}

Hypergraph induced_subhypergraph(const Instance& inst, const std::vector<std::size_t>& vertices) {
  const std::size_t v = vertices.size(), k = inst.arity();
  Hypergraph g(v, k);
  if (v >= k) {
    if (!std::is_sorted(vertices.begin(), vertices.end()))
      fail(ErrorKind::InvalidSpec, "sample indices must be increasing");
    std::vector<std::vector<std::size_t>> firsts(v - k + 1);
    std::vector<std::vector<char>> on(v - k + 1);
    parallel_for(v - k + 1, [&](std::size_t first) {
      std::vector<std::size_t> s(k), host(k);
      std::iota(s.begin(), s.end(), first);
      do {
        if (s[0] != first) break;
        for (std::size_t i = 0; i < k; ++i) host[i] = vertices[s[i]];
        if (inst.edge(host)) {
          firsts[first].insert(firsts[first].end(), s.begin(), s.end());
        }
      } while (next_subset(s, v));
    });
    for (const auto& flat : firsts)
      for (std::size_t i = 0; i < flat.size(); i += k)
        g.set_edge(std::span<const std::size_t>(flat.data() + i, k), true);
  }
  g.finish();
  return g;
}

std::optional<std::vector<std::size_t>> find_copy(const Hypergraph& g, const Pattern& p, bool induced) {
  if (p.k != g.arity()) fail(ErrorKind::InvalidSpec, "pattern arity differs from the hypergraph arity");
  return CopySearch(g, p, induced).run();
}

std::string_view to_string(PluginKind k) {
  switch (k) {
    case PluginKind::Monotone:
      return "monotone";
    case PluginKind::HereditaryGraph:
      return "hereditary-graph";
    case PluginKind::HereditaryHypergraph:
      return "hereditary-hypergraph";
  }
  return "?";
}

PropertyPlugin::PropertyPlugin(std::string name, PluginKind kind, std::vector<Pattern> forbidden)
    : name_(std::move(name)), kind_(kind), forbidden_(std::move(forbidden)) {
  if (forbidden_.empty()) fail(ErrorKind::InvalidSpec, "a plugin needs at least one forbidden pattern");
  for (const auto& H : forbidden_)
    if (H.k != forbidden_.front().k) fail(ErrorKind::InvalidSpec, "forbidden patterns must share one arity");
  if (kind_ == PluginKind::HereditaryGraph && arity() != 2)
    fail(ErrorKind::InvalidSpec, "hereditary graph plugins need graph patterns");
}

std::optional<Embedding> PropertyPlugin::find_forbidden(const Hypergraph& g) const {
  for (std::size_t i = 0; i < forbidden_.size(); ++i)
    if (auto img = find_copy(g, forbidden_[i], induced())) return Embedding{i, std::move(*img)};
  return std::nullopt;
}

std::size_t PropertyPlugin::exact_limit() const { return arity() == 2 ? 4 : 3; }

std::size_t PropertyPlugin::exact_psi(std::size_t r) const {
  if (memo_.empty()) memo_.assign(exact_limit() + 1, 0);
  if (memo_[r] == 0) {
    switch (kind_) {
      case PluginKind::Monotone:
        memo_[r] = psi_hom(forbidden_, r, false);
        break;
      case PluginKind::HereditaryGraph:
        memo_[r] = psi_hom(forbidden_, r, true);
        break;
      case PluginKind::HereditaryHypergraph:
        memo_[r] = psi_blow_up(forbidden_, r);
        break;
    }
  }
  return memo_[r];
}

std::size_t PropertyPlugin::psi(std::size_t r) const {
  if (r == 0) return 1;
  if (r <= exact_limit()) return exact_psi(r);
  std::size_t trivial = 0;
  for (const auto& H : forbidden_) trivial = std::max(trivial, H.vertices);
  return std::max(trivial, exact_psi(exact_limit()));
}

PropertyPlugin make_plugin(std::string_view name) {
  if (name == "triangle-free")
    return {"triangle-free", PluginKind::Monotone, {graph("K3", 3, {{0, 1}, {0, 2}, {1, 2}})}};
  if (name == "k4-free")
    return {"k4-free", PluginKind::Monotone, {graph("K4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})}};
  if (name == "induced-p3-free")
    return {"induced-p3-free", PluginKind::HereditaryGraph, {graph("P3", 3, {{0, 1}, {1, 2}})}};
  if (name == "induced-edge-free")
    return {"induced-edge-free", PluginKind::HereditaryHypergraph, {Pattern{"E3", 3, 3, {{0, 1, 2}}}}};
  if (name == "induced-two-edge-free")
    return {"induced-two-edge-free",
            PluginKind::HereditaryHypergraph,
            {Pattern{"E3x2", 3, 4, {{0, 1, 2}, {0, 1, 3}}}}};
  fail(ErrorKind::InvalidSpec, "unknown property plugin: " + std::string(name));
}

std::vector<std::string> plugin_names() {
  return {"triangle-free", "k4-free", "induced-p3-free", "induced-edge-free", "induced-two-edge-free"};
}

std::vector<std::size_t> sample_vertices(std::size_t n, std::size_t v, std::uint64_t seed) {
  if (v > n) fail(ErrorKind::SampleTooLarge, "sample of " + std::to_string(v) + " from " + std::to_string(n));
  std::vector<std::size_t> all(n), out;
  std::iota(all.begin(), all.end(), 0);
  out.reserve(v);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(out), v, rng);
  return out;
}

std::vector<std::size_t> sample_vertices(const PointConfig& P, std::size_t v, std::uint64_t seed) {
  return sample_vertices(P.size(), v, seed);
}

std::size_t tester_r(const TesterConfig& cfg) {
  if (cfg.r) return std::max<std::size_t>(*cfg.r, 1);
  if (cfg.epsilon <= 0 || cfg.epsilon >= 1) fail(ErrorKind::InvalidSpec, "epsilon must lie in (0, 1)");
  Integer r = ceil(pow(Rational(1) / cfg.epsilon, cfg.c));
  if (!r.fits_ulong_p()) return SIZE_MAX;
  return r.get_ui();
}

std::uint64_t tester_sample_size(const PropertyPlugin& plugin, const TesterConfig& cfg) {
  const std::uint64_t r = tester_r(cfg);
  const std::uint64_t psi = plugin.psi(r);
  switch (plugin.kind()) {
    case PluginKind::Monotone:
      return sat_mul(sat_mul(8, r), psi);
    case PluginKind::HereditaryGraph:
      return sat_pow(sat_mul(r, psi), cfg.C);
    case PluginKind::HereditaryHypergraph:
      return sat_mul(sat_pow(r, cfg.C), sat_mul(psi, psi));
  }
  return 0;
}

namespace {

TesterOutcome run_kind(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                       std::uint64_t seed, PluginKind want) {
  if (plugin.kind() != want)
    fail(ErrorKind::InvalidSpec, "plugin " + plugin.name() + " is " + std::string(to_string(plugin.kind())));
  if (plugin.arity() != inst.arity()) fail(ErrorKind::InvalidSpec, "plugin arity differs from the instance arity");
  TesterOutcome out;
  out.r = tester_r(cfg);
  out.psi = plugin.psi(out.r);
  out.v_formula = tester_sample_size(plugin, cfg);
  if (out.v_formula > inst.size()) {
    if (!cfg.clamp) fail(ErrorKind::SampleTooLarge, "formula sample size exceeds |P|");
    out.v = inst.size();
    out.clamped = true;
  } else {
    out.v = static_cast<std::size_t>(out.v_formula);
  }
  out.sample = sample_vertices(inst.size(), out.v, seed);
  Hypergraph g = induced_subhypergraph(inst, out.sample);
  if (auto emb = plugin.find_forbidden(g)) {
    for (auto& x : emb->image) x = out.sample[x];
    // Re-check on the raw relation, independently of the cached hypergraph.
    oracle::EdgeFn raw = [&](std::span<const std::size_t> t) {
      std::vector<const Point*> pts;
      for (std::size_t i : t) pts.push_back(&inst.points().points[i]);
      return eval_relation(inst.relation(), pts);
    };
    if (!oracle::is_embedding(raw, plugin.forbidden()[emb->pattern], plugin.induced(), emb->image))
      fail(ErrorKind::BoundUnmet, "reject witness failed verification");
    out.accept = false;
    out.witness = std::move(emb);
  }
  return out;
}

}  // namespace

TesterOutcome monotone_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                              std::uint64_t seed) {
  return run_kind(inst, plugin, cfg, seed, PluginKind::Monotone);
}

TesterOutcome hereditary_graph_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                                      std::uint64_t seed) {
  return run_kind(inst, plugin, cfg, seed, PluginKind::HereditaryGraph);
}

TesterOutcome hereditary_hypergraph_tester(const Instance& inst, const PropertyPlugin& plugin,
                                           const TesterConfig& cfg, std::uint64_t seed) {
  return run_kind(inst, plugin, cfg, seed, PluginKind::HereditaryHypergraph);
}

TesterOutcome run_tester(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                         std::uint64_t seed) {
  return run_kind(inst, plugin, cfg, seed, plugin.kind());
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t t) { return mix(seed, t); }

AcceptanceEstimate estimate_acceptance(const Instance& inst, const PropertyPlugin& plugin, const TesterConfig& cfg,
                                       std::size_t trials, std::uint64_t seed, std::vector<TesterOutcome>* outcomes) {
  if (trials == 0) fail(ErrorKind::InvalidSpec, "trials must be positive");
  std::vector<char> accepted(trials, 0);
  std::vector<std::uint64_t> vs(trials, 0);
  // Trials run one after another; each already parallelizes internally.
  for (std::size_t t = 0; t < trials; ++t) {
    auto o = run_tester(inst, plugin, cfg, trial_seed(seed, t));
    accepted[t] = o.accept;
    vs[t] = o.v;
    if (outcomes) outcomes->push_back(std::move(o));
  }
  AcceptanceEstimate est;
  est.trials = trials;
  est.accepted = static_cast<std::size_t>(std::count(accepted.begin(), accepted.end(), 1));
  est.v = vs.front();
  est.rate = Rational(static_cast<long>(est.accepted), static_cast<long>(trials));
  est.rate.canonicalize();
  const double n = static_cast<double>(trials), p = static_cast<double>(est.accepted) / n, z = 1.96;
  const double denom = 1 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  est.half_width = from_double(half);
  est.low = from_double(std::max(0.0, center - half));
  est.high = from_double(std::min(1.0, center + half));
  return est;
}

}  // namespace sahr
