#include "sahr/regularity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "sahr/error.hpp"
#include "sahr/parallel.hpp"

namespace sahr {

std::string_view to_string(Homogeneity h) {
  switch (h) {
    case Homogeneity::Complete:
      return "complete";
    case Homogeneity::Empty:
      return "empty";
    case Homogeneity::Mixed:
      return "mixed";
  }
  return "?";
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (salt + 0x632BE59BD9B4E019ULL));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rational power(std::size_t n, std::size_t k) {
  Integer v;
  mpz_ui_pow_ui(v.get_mpz_t(), n, k);
  return Rational(v);
}

Rational ratio(std::uint64_t a, const Rational& b) {
  Rational q{Integer(static_cast<unsigned long>(a))};
  return q / b;
}

std::uint64_t mass_of(std::span<const std::vector<std::size_t>> sides) {
  std::uint64_t m = 1;
  for (const auto& s : sides) m *= s.size();
  return m;
}

PointConfig sub_config(const PointConfig& P, const std::vector<std::size_t>& idx) {
  PointConfig c;
  c.dim = P.dim;
  for (std::size_t i : idx) c.points.push_back(P.points[i]);
  return c;
}

void check_rel(const PointConfig& P, const RelationSpec& rel) {
  verify_complexity(rel);
  if (rel.arity < 2) fail(ErrorKind::InvalidSpec, "regularity needs arity >= 2");
  if (P.points.empty()) fail(ErrorKind::InvalidSpec, "empty point set");
  if (P.dim != rel.dim) fail(ErrorKind::InvalidSpec, "point dimension does not match the relation");
}

void check_eps(const Rational& eps) {
  if (eps <= 0 || eps >= 1) fail(ErrorKind::InvalidSpec, "epsilon must lie in (0, 1)");
}

void check_graph(const PointConfig& P, const RelationSpec& rel) {
  check_rel(P, rel);
  if (rel.arity != 2) fail(ErrorKind::InvalidSpec, "graph variant needs a binary relation");
  const std::size_t n = P.points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<const Point*> a{&P.points[i], &P.points[j]}, b{&P.points[j], &P.points[i]};
      if (eval_relation(rel, a) != eval_relation(rel, b))
        fail(ErrorKind::InvalidSpec, "graph relation is not symmetric on the points");
    }
}

struct Product {
  std::vector<std::vector<std::size_t>> sides;
  Homogeneity h;
  std::uint64_t mass;
};

// Common refinement of the point set by every side of every product.
std::vector<std::vector<std::size_t>> atoms_of(std::size_t n, const std::vector<Product>& products) {
  std::vector<std::size_t> label(n, 0);
  std::vector<std::uint8_t> in(n);
  for (const auto& pr : products)
    for (const auto& side : pr.sides) {
      std::fill(in.begin(), in.end(), 0);
      for (std::size_t i : side) in[i] = 1;
      std::map<std::pair<std::size_t, int>, std::size_t> relabel;
      for (std::size_t i = 0; i < n; ++i) {
        auto [it, _] = relabel.try_emplace({label[i], in[i]}, relabel.size());
        label[i] = it->second;
      }
    }
  // Order classes by smallest member.
  std::map<std::size_t, std::size_t> order;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = order.try_emplace(label[i], classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
  }
  return classes;
}

}  // namespace

Homogeneity classify_product(const RelationSpec& rel, const PointConfig& P,
                             std::span<const std::vector<std::size_t>> sides) {
  const std::size_t k = sides.size();
  for (const auto& s : sides)
    if (s.empty()) return Homogeneity::Empty;
  std::vector<std::size_t> idx(k, 0);
  std::vector<const Point*> tuple(k);
  bool seen_edge = false, seen_non = false;
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = &P.points[sides[i][idx[i]]];
    (eval_relation(rel, tuple) ? seen_edge : seen_non) = true;
    if (seen_edge && seen_non) return Homogeneity::Mixed;
    std::size_t i = k;
    bool done = true;
    while (i > 0) {
      --i;
      if (++idx[i] < sides[i].size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  return seen_edge ? Homogeneity::Complete : Homogeneity::Empty;
}

void classify_classes(const RelationSpec& rel, const PointConfig& P, PartitionReport& rep) {
  const std::size_t k = rel.arity;
  rep.arity = k;
  rep.K = rep.classes.size();
  auto tuples = increasing_subsets(rep.K, k);
  rep.homogeneity.assign(tuples.size(), Homogeneity::Empty);
  parallel_for(tuples.size(), [&](std::size_t t) {
    std::vector<std::vector<std::size_t>> sides;
    for (std::size_t j : tuples[t]) sides.push_back(rep.classes[j]);
    rep.homogeneity[t] = classify_product(rel, P, sides);
  });
  std::uint64_t bad = 0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    if (rep.homogeneity[t] != Homogeneity::Mixed) continue;
    std::uint64_t m = 1;
    for (std::size_t j : tuples[t]) m *= rep.classes[j].size();
    bad += m;
  }
  rep.bad_mass = ratio(bad, power(P.points.size(), k));
  std::size_t lo = P.points.size(), hi = 0;
  for (const auto& c : rep.classes) {
    lo = std::min(lo, c.size());
    hi = std::max(hi, c.size());
  }
  rep.equitable = hi - lo <= 1;
}

HomogeneousWitness homogeneous_box(std::span<const PointConfig> parts, const RelationSpec& rel, std::uint64_t seed,
                                   const DensityOptions& opt) {
  std::vector<std::vector<const Point*>> ptrs;
  for (const auto& p : parts) {
    ptrs.emplace_back();
    for (const auto& x : p.points) ptrs.back().push_back(&x);
  }
  std::uint64_t total = 1;
  for (const auto& p : parts) total *= p.points.size();
  if (total == 0) fail(ErrorKind::InvalidSpec, "every part must be nonempty");
  std::uint64_t edges = count_edges(rel, ptrs);
  const Rational half = frac(1, 2);
  if (2 * edges >= total) {
    auto w = find_complete_product(parts, rel, half, seed, opt);
    w.polarity = Polarity::Complete;
    return w;
  }
  auto w = find_complete_product(parts, negate_relation(rel), half, seed, opt);
  w.polarity = Polarity::Empty;
  return w;
}

PartitionReport partition_product(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                  std::uint64_t seed, const RegularityOptions& opt) {
  check_rel(P, rel);
  check_eps(eps);
  const std::size_t n = P.points.size(), k = rel.arity;
  const Rational total = power(n, k);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  std::vector<Product> products;
  {
    Product root{std::vector<std::vector<std::size_t>>(k, all), Homogeneity::Mixed, 0};
    root.h = classify_product(rel, P, root.sides);
    root.mass = mass_of(root.sides);
    products.push_back(std::move(root));
  }
  auto mixed_mass = [&] {
    std::uint64_t m = 0;
    for (const auto& p : products)
      if (p.h == Homogeneity::Mixed) m += p.mass;
    return m;
  };

  PartitionReport rep;
  std::uint64_t bad = mixed_mass();
  while (ratio(bad, total) > eps) {
    if (++rep.rounds > opt.max_rounds)
      fail(ErrorKind::IterationLimit, "refinement did not reach the target after " +
                                          std::to_string(opt.max_rounds) + " rounds");
    // Largest mixed product first, lowest index on ties.
    std::size_t pick = products.size();
    for (std::size_t i = 0; i < products.size(); ++i)
      if (products[i].h == Homogeneity::Mixed && (pick == products.size() || products[i].mass > products[pick].mass))
        pick = i;
    Product cur = std::move(products[pick]);
    products.erase(products.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<PointConfig> parts;
    for (const auto& s : cur.sides) parts.push_back(sub_config(P, s));
    auto w = homogeneous_box(parts, rel, mix(seed, rep.rounds), opt.density);
    rep.predicates += w.predicates.size();
    for (const auto& pr : w.predicates) rep.max_kappa = std::max(rep.max_kappa, pr.kappa());

    std::vector<std::vector<std::size_t>> inside(k), outside(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<std::uint8_t> sel(cur.sides[i].size(), 0);
      for (std::size_t j : w.parts[i]) sel[j] = 1;
      for (std::size_t j = 0; j < sel.size(); ++j) (sel[j] ? inside : outside)[i].push_back(cur.sides[i][j]);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      Product child;
      bool empty = false;
      for (std::size_t i = 0; i < k; ++i) {
        child.sides.push_back((mask >> i) & 1 ? inside[i] : outside[i]);
        empty |= child.sides.back().empty();
      }
      if (empty) continue;
      child.mass = mass_of(child.sides);
      if (mask + 1 == (std::size_t{1} << k))
        child.h = w.polarity == Polarity::Complete ? Homogeneity::Complete : Homogeneity::Empty;
      else
        child.h = classify_product(rel, P, child.sides);
      products.push_back(std::move(child));
    }
    bad = mixed_mass();
  }
  rep.product_bad_mass = ratio(bad, total);
  rep.classes = atoms_of(n, products);
  classify_classes(rel, P, rep);
  if (rep.bad_mass > eps) fail(ErrorKind::BoundUnmet, "atom partition exceeds the bad mass target");
  return rep;
}

PartitionReport equitable_partition(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                    std::uint64_t seed, const RegularityOptions& opt) {
  check_rel(P, rel);
  check_eps(eps);
  const std::size_t n = P.points.size(), k = rel.arity;
  PartitionReport base = partition_product(P, rel, eps / 2, seed, opt);
  const std::size_t k_prime = base.classes.size();
  Integer target = ceil(Rational(static_cast<long>(4 * k * k_prime)) / eps);
  const std::size_t K = target > n ? n : target.get_ui();
  const std::size_t q = n / K;

  std::vector<std::vector<std::size_t>> chunks;
  std::vector<std::size_t> pool;
  for (const auto& c : base.classes) {
    std::size_t full = c.size() / q;
    for (std::size_t j = 0; j < full; ++j) chunks.emplace_back(c.begin() + j * q, c.begin() + (j + 1) * q);
    pool.insert(pool.end(), c.begin() + full * q, c.end());
  }
  std::size_t full = pool.size() / q;
  for (std::size_t j = 0; j < full; ++j) chunks.emplace_back(pool.begin() + j * q, pool.begin() + (j + 1) * q);
  // Fewer than q points remain; hand them out one per chunk, cycling.
  for (std::size_t j = full * q, c = 0; j < pool.size(); ++j, c = (c + 1) % chunks.size()) chunks[c].push_back(pool[j]);

  PartitionReport rep;
  rep.classes = std::move(chunks);
  rep.rounds = base.rounds;
  rep.predicates = base.predicates;
  rep.max_kappa = base.max_kappa;
  rep.product_bad_mass = base.product_bad_mass;
  classify_classes(rel, P, rep);
  if (!rep.equitable) fail(ErrorKind::BoundUnmet, "equitization produced unequal classes");
  if (rep.bad_mass > eps) fail(ErrorKind::BoundUnmet, "equitable partition exceeds the bad fraction target");
  return rep;
}

Rational internal_density(const RelationSpec& rel, const PointConfig& P, const std::vector<std::size_t>& S) {
  if (S.size() < 2) return Rational(0);
  std::uint64_t edges = 0;
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b) {
      std::vector<const Point*> t{&P.points[S[a]], &P.points[S[b]]};
      edges += eval_relation(rel, t);
    }
  std::uint64_t pairs = S.size() * (S.size() - 1) / 2;
  return ratio(edges, Rational(Integer(static_cast<unsigned long>(pairs))));
}

namespace {

// Greedy clique of size h in the graph given by adj (K x K), trying every start.
std::optional<std::vector<std::size_t>> greedy_clique(const std::vector<std::vector<std::uint8_t>>& adj,
                                                     const std::vector<std::size_t>& order, std::size_t h) {
  const std::size_t K = adj.size();
  for (std::size_t start : order) {
    std::vector<std::size_t> chosen{start};
    std::vector<std::size_t> cand;
    for (std::size_t v : order)
      if (v != start && adj[start][v]) cand.push_back(v);
    while (chosen.size() < h && !cand.empty()) {
      // Keep the candidate with the most neighbours among the other candidates.
      std::size_t best = 0, best_deg = 0;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        std::size_t deg = 0;
        for (std::size_t u : cand) deg += adj[cand[i]][u];
        if (i == 0 || deg > best_deg) {
          best = i;
          best_deg = deg;
        }
      }
      std::size_t v = cand[best];
      chosen.push_back(v);
      std::vector<std::size_t> next;
      for (std::size_t u : cand)
        if (u != v && adj[v][u]) next.push_back(u);
      cand = std::move(next);
    }
    if (chosen.size() >= h) {
      chosen.resize(h);
      return chosen;
    }
  }
  (void)K;
  return std::nullopt;
}

// Largest clique or independent set found greedily among singletons of S.
std::vector<std::size_t> homogeneous_singletons(const RelationSpec& rel, const PointConfig& P,
                                                const std::vector<std::size_t>& S) {
  const std::size_t s = S.size();
  std::vector<std::vector<std::uint8_t>> adj(s, std::vector<std::uint8_t>(s, 0)), co(adj);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b) {
      std::vector<const Point*> t{&P.points[S[a]], &P.points[S[b]]};
      bool e = eval_relation(rel, t);
      adj[a][b] = adj[b][a] = e;
      co[a][b] = co[b][a] = !e;
    }
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> best{0};
  for (std::size_t h = s; h >= 2 && best.size() < h; --h) {
    for (const auto* g : {&adj, &co})
      if (auto c = greedy_clique(*g, order, h)) {
        best = *c;
        break;
      }
    if (best.size() == h) break;
  }
  std::vector<std::size_t> out;
  for (std::size_t i : best) out.push_back(S[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PartiteSubsets complete_partite_subsets(const PointConfig& P, const RelationSpec& rel, std::size_t h,
                                        std::uint64_t seed, const RegularityOptions& opt) {
  check_graph(P, rel);
  if (h == 0) fail(ErrorKind::InvalidSpec, "h must be positive");
  if (P.points.size() < h) fail(ErrorKind::InvalidSpec, "need at least h points");
  Rational eps = frac(1, 4);
  for (int attempt = 0; attempt < 5; ++attempt, eps /= 2) {
    PartitionReport rep = equitable_partition(P, rel, eps, mix(seed, attempt), opt);
    const std::size_t K = rep.K;
    if (K < h) continue;
    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rep.classes[a].size() > rep.classes[b].size(); });
    auto tuples = increasing_subsets(K, 2);
    for (Polarity pol : {Polarity::Complete, Polarity::Empty}) {
      Homogeneity want = pol == Polarity::Complete ? Homogeneity::Complete : Homogeneity::Empty;
      std::vector<std::vector<std::uint8_t>> adj(K, std::vector<std::uint8_t>(K, 0));
      for (std::size_t t = 0; t < tuples.size(); ++t)
        if (rep.homogeneity[t] == want) adj[tuples[t][0]][tuples[t][1]] = adj[tuples[t][1]][tuples[t][0]] = 1;
      auto pick = greedy_clique(adj, order, h);
      if (!pick) continue;
      std::sort(pick->begin(), pick->end());
      std::size_t size = P.points.size();
      for (std::size_t c : *pick) size = std::min(size, rep.classes[c].size());
      PartiteSubsets out;
      out.polarity = pol;
      out.epsilon = eps;
      for (std::size_t c : *pick) out.subsets.emplace_back(rep.classes[c].begin(), rep.classes[c].begin() + size);
      // Re-verify every cross pair.
      for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = a + 1; b < h; ++b) {
          std::vector<std::vector<std::size_t>> sides{out.subsets[a], out.subsets[b]};
          if (classify_product(rel, P, sides) != want)
            fail(ErrorKind::BoundUnmet, "selected classes are not homogeneous");
        }
      return out;
    }
  }
  fail(ErrorKind::SelectionFailed, "no " + std::to_string(h) + " pairwise homogeneous classes after 5 attempts");
}

namespace {

// Splits every class by the atoms of a finer partition and picks one piece
// per class such that every increasing k-tuple of picks is homogeneous.
std::vector<std::vector<std::size_t>> pick_refined(const RelationSpec& rel, const PointConfig& P,
                                                   const PartitionReport& coarse, const PartitionReport& fine,
                                                   std::uint64_t seed) {
  const std::size_t n = P.points.size(), k = rel.arity;
  std::vector<std::size_t> atom(n);
  for (std::size_t a = 0; a < fine.classes.size(); ++a)
    for (std::size_t i : fine.classes[a]) atom[i] = a;
  std::vector<std::vector<std::vector<std::size_t>>> pieces;
  for (const auto& c : coarse.classes) {
    std::map<std::size_t, std::vector<std::size_t>> by_atom;
    for (std::size_t i : c) by_atom[atom[i]].push_back(i);
    pieces.emplace_back();
    for (auto& [_, v] : by_atom) pieces.back().push_back(std::move(v));
    std::stable_sort(pieces.back().begin(), pieces.back().end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }
  const std::size_t K = pieces.size();
  auto tuples = increasing_subsets(K, k);
  auto certified = [&](const std::vector<std::size_t>& choice) {
    for (const auto& t : tuples) {
      std::vector<std::vector<std::size_t>> sides;
      for (std::size_t j : t) sides.push_back(pieces[j][choice[j]]);
      if (classify_product(rel, P, sides) == Homogeneity::Mixed) return false;
    }
    return true;
  };
  std::vector<std::size_t> choice(K, 0);
  if (certified(choice)) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t j = 0; j < K; ++j) out.push_back(pieces[j][0]);
    return out;
  }
  // Random choice weighted by piece size.
  for (std::uint64_t trial = 0; trial < 64; ++trial) {
    std::mt19937_64 rng(mix(seed, trial));
    for (std::size_t j = 0; j < K; ++j) {
      std::vector<double> w;
      for (const auto& p : pieces[j]) w.push_back(static_cast<double>(p.size()));
      std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
      choice[j] = dist(rng);
    }
    if (certified(choice)) {
      std::vector<std::vector<std::size_t>> out;
      for (std::size_t j = 0; j < K; ++j) out.push_back(pieces[j][choice[j]]);
      return out;
    }
  }
  fail(ErrorKind::RetryExhausted, "no homogeneous choice of refined parts after 64 seeds");
}

Rational inverse_power(std::size_t K, std::size_t e) { return Rational(1) / power(K, e); }

}  // namespace

StrongPartition strong_partition_graph(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                       const Rational& alpha, std::uint64_t seed, const RegularityOptions& opt) {
  check_graph(P, rel);
  check_eps(eps);
  if (alpha <= 0 || alpha >= frac(1, 2)) fail(ErrorKind::InvalidSpec, "alpha must lie in (0, 1/2)");
  StrongPartition out;
  out.partition = equitable_partition(P, rel, eps, seed, opt);
  const std::size_t K = out.partition.K;
  out.refine_epsilon = std::min(inverse_power(K, 4), frac(1, 2));
  PartitionReport fine = partition_product(P, rel, out.refine_epsilon, mix(seed, 1), opt);
  auto W = pick_refined(rel, P, out.partition, fine, mix(seed, 2));

  const std::size_t h = ceil(Rational(2) / alpha).get_ui();
  for (std::size_t i = 0; i < K; ++i) {
    std::vector<std::size_t> Q;
    if (W[i].size() >= h) {
      PointConfig sub = sub_config(P, W[i]);
      try {
        auto parts = complete_partite_subsets(sub, rel, h, mix(seed, 3 + i), opt);
        for (const auto& s : parts.subsets)
          for (std::size_t j : s) Q.push_back(W[i][j]);
        std::sort(Q.begin(), Q.end());
        Rational dens = internal_density(rel, P, Q);
        if (dens > alpha && dens < 1 - alpha) Q.clear();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SelectionFailed) throw;
        Q.clear();
      }
    }
    if (Q.empty()) Q = homogeneous_singletons(rel, P, W[i]);
    out.q_sets.push_back(std::move(Q));
  }

  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = i + 1; j < K; ++j) {
      std::vector<std::vector<std::size_t>> sides{out.q_sets[i], out.q_sets[j]};
      if (classify_product(rel, P, sides) == Homogeneity::Mixed)
        fail(ErrorKind::BoundUnmet, "Q sets " + std::to_string(i) + " and " + std::to_string(j) + " are not homogeneous");
    }
  const Rational n(static_cast<long>(P.points.size()));
  out.delta = 1;
  for (const auto& Q : out.q_sets) {
    Rational d = internal_density(rel, P, Q);
    if (d > alpha && d < 1 - alpha) fail(ErrorKind::BoundUnmet, "Q set density is neither low nor high");
    out.q_density.push_back(d);
    out.q_fraction.push_back(Rational(static_cast<long>(Q.size())) / n);
    out.delta = std::min(out.delta, out.q_fraction.back());
  }
  return out;
}

StrongPartition strong_partition_hypergraph(const PointConfig& P, const RelationSpec& rel, const Rational& eps,
                                            std::uint64_t seed, const RegularityOptions& opt) {
  check_rel(P, rel);
  check_eps(eps);
  StrongPartition out;
  out.partition = equitable_partition(P, rel, eps, seed, opt);
  const std::size_t K = out.partition.K;
  out.refine_epsilon = std::min(inverse_power(K, 2 * rel.arity), frac(1, 2));
  PartitionReport fine = partition_product(P, rel, out.refine_epsilon, mix(seed, 1), opt);
  out.q_sets = pick_refined(rel, P, out.partition, fine, mix(seed, 2));
  const Rational n(static_cast<long>(P.points.size()));
  out.delta = 1;
  for (const auto& Q : out.q_sets) {
    out.q_fraction.push_back(Rational(static_cast<long>(Q.size())) / n);
    out.delta = std::min(out.delta, out.q_fraction.back());
  }
  return out;
}

}  // namespace sahr
