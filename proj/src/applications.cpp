#include "sahr/applications.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "sahr/error.hpp"
#include "sahr/parallel.hpp"

namespace sahr {

namespace {

// Moves block b of p to block target[b] of a polynomial with `blocks` blocks.
Polynomial remap_blocks(const Polynomial& p, std::size_t d, const std::vector<std::size_t>& target,
                        std::size_t blocks) {
  Polynomial out(blocks * d);
  for (const auto& [e, c] : p.terms()) {
    Exponent ne(blocks * d, 0);
    for (std::size_t b = 0; b < target.size(); ++b)
      for (std::size_t i = 0; i < d; ++i) ne[target[b] * d + i] = e[b * d + i];
    out.add_term(ne, c);
  }
  return out;
}

std::uint64_t product_size(std::span<const PointConfig> parts) {
  std::uint64_t s = 1;
  for (const auto& p : parts) {
    if (p.points.empty()) return 0;
    if (s > UINT64_MAX / p.points.size()) return UINT64_MAX;
    s *= p.points.size();
  }
  return s;
}

std::size_t common_dim(std::span<const PointConfig> parts) {
  if (parts.empty()) fail(ErrorKind::InvalidSpec, "no parts given");
  std::size_t d = 0;
  for (const auto& p : parts) {
    if (p.points.empty()) fail(ErrorKind::InvalidSpec, "every part must be nonempty");
    for (const auto& x : p.points) {
      if (d == 0) d = x.size();
      if (x.size() != d || d == 0) fail(ErrorKind::InvalidSpec, "points of mixed dimension");
    }
  }
  return d;
}

void require_general_position(std::span<const PointConfig> parts) {
  std::vector<Point> all;
  for (const auto& p : parts) all.insert(all.end(), p.points.begin(), p.points.end());
  if (!in_general_position(all)) fail(ErrorKind::DegenerateInput, "points are not in general position");
}

// Decodes transversal number `code` (last part fastest).
void decode(std::uint64_t code, std::span<const PointConfig> parts, std::vector<const Point*>& tuple,
            std::vector<std::size_t>* idx = nullptr) {
  for (std::size_t i = parts.size(); i-- > 0;) {
    std::size_t n = parts[i].points.size();
    tuple[i] = &parts[i].points[code % n];
    if (idx) (*idx)[i] = code % n;
    code /= n;
  }
}

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational q{Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(b))};
  q.canonicalize();
  return q;
}

}  // namespace

OrderTypeCensus dominant_order_type(std::span<const PointConfig> parts, std::uint64_t seed,
                                    const ApplicationOptions& opt) {
  const std::size_t d = common_dim(parts);
  if (parts.size() < d + 1) fail(ErrorKind::InvalidSpec, "order types need at least d+1 parts");
  require_general_position(parts);
  const std::uint64_t total = product_size(parts);
  OrderTypeCensus out;
  out.exact = total <= opt.exact_cap;
  const std::uint64_t draws = out.exact ? total : opt.samples;

  std::vector<SignVector> types(draws);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> codes(draws);
  for (std::uint64_t c = 0; c < draws; ++c) codes[c] = out.exact ? c : std::uniform_int_distribution<std::uint64_t>(0, total - 1)(rng);
  parallel_for(draws, [&](std::size_t c) {
    std::vector<const Point*> tuple(parts.size());
    decode(codes[c], parts, tuple);
    types[c] = order_type(std::span<const Point* const>(tuple));
  });
  std::map<SignVector, std::uint64_t> census;
  for (auto& t : types) census[std::move(t)]++;
  // Most frequent; the lexicographically smallest type wins ties.
  for (const auto& [t, c] : census)
    if (c > out.count) {
      out.count = c;
      out.type = t;
    }
  out.total = draws;
  out.distinct = census.size();
  out.fraction = ratio(out.count, draws);
  return out;
}

RelationSpec order_type_relation(std::size_t k, std::size_t d, const SignVector& type) {
  auto subsets = increasing_subsets(k, d + 1);
  if (type.size() != subsets.size()) fail(ErrorKind::InvalidSpec, "order type has the wrong length");
  RelationSpec rel;
  rel.arity = k;
  rel.dim = d;
  rel.declared_D = 1;
  const Polynomial det = orientation_polynomial(d);
  std::vector<BooleanFormula> clauses;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (type[s] == 0) fail(ErrorKind::DegenerateInput, "order type with a zero orientation");
    rel.polys.push_back(remap_blocks(det, d, subsets[s], k));
    auto a = BooleanFormula::atom(s + 1);
    clauses.push_back(type[s] > 0 ? a : BooleanFormula::negation(a));
  }
  rel.formula = BooleanFormula::all_of(std::move(clauses));
  rel.declared_t = rel.polys.size();
  return rel;
}

SameTypeWitness same_type_subsets(std::span<const PointConfig> parts, std::uint64_t seed,
                                  const ApplicationOptions& opt) {
  const std::size_t d = common_dim(parts), k = parts.size();
  if (k <= d) fail(ErrorKind::InvalidSpec, "same-type transversals need k > d");
  OrderTypeCensus census = dominant_order_type(parts, seed, opt);
  if (!census.exact) fail(ErrorKind::TooLarge, "product of part sizes exceeds the exact census cap");
  RelationSpec rel = order_type_relation(k, d, census.type);

  SameTypeWitness out;
  out.order_type = census.type;
  out.coverage_fraction = census.fraction;
  out.density = find_complete_product(parts, rel, census.fraction, seed, opt.density);
  out.subsets = out.density.parts;

  // Every output transversal must realize the dominant type.
  std::vector<PointConfig> chosen;
  for (std::size_t i = 0; i < k; ++i) {
    chosen.emplace_back();
    chosen.back().dim = d;
    for (std::size_t j : out.subsets[i]) chosen.back().points.push_back(parts[i].points[j]);
  }
  const std::uint64_t total = product_size(chosen);
  std::vector<const Point*> tuple(k);
  for (std::uint64_t c = 0; c < total; ++c) {
    decode(c, chosen, tuple);
    if (order_type(std::span<const Point* const>(tuple)) != out.order_type)
      fail(ErrorKind::BoundUnmet, "output transversal has a different order type");
  }
  return out;
}

RelationSpec containment_relation(const Point& q) {
  const std::size_t d = q.size();
  if (d == 0) fail(ErrorKind::InvalidSpec, "q must have positive dimension");
  const Polynomial det = orientation_polynomial(d);
  RelationSpec rel;
  rel.arity = d + 1;
  rel.dim = d;
  rel.declared_D = 1;
  std::vector<Polynomial> dets;
  for (std::size_t j = 0; j <= d; ++j) {
    // Replace vertex j by q; the remaining blocks keep their positions.
    Polynomial p = det.substitute(j * d, q);
    std::vector<std::size_t> target;
    for (std::size_t b = 0; b <= d; ++b)
      if (b != j) target.push_back(b);
    dets.push_back(remap_blocks(p, d, target, d + 1));
  }
  std::vector<BooleanFormula> pos, neg;
  for (std::size_t j = 0; j <= d; ++j) {
    rel.polys.push_back(dets[j]);
    pos.push_back(BooleanFormula::atom(j + 1));
  }
  for (std::size_t j = 0; j <= d; ++j) {
    rel.polys.push_back(-dets[j]);
    neg.push_back(BooleanFormula::atom(d + 2 + j));
  }
  rel.formula = BooleanFormula::any_of({BooleanFormula::all_of(std::move(pos)), BooleanFormula::all_of(std::move(neg))});
  rel.declared_t = rel.polys.size();
  return rel;
}

namespace {

struct Depth {
  std::uint64_t closed = 0;    // closed simplices containing q
  std::uint64_t interior = 0;  // simplices with q strictly inside
  auto operator<=>(const Depth&) const = default;
};

Depth containment_depth(std::span<const PointConfig> parts, const Point& q) {
  const std::uint64_t total = product_size(parts);
  Depth out;
  std::vector<const Point*> tuple(parts.size());
  for (std::uint64_t c = 0; c < total; ++c) {
    decode(c, parts, tuple);
    const int whole = orientation(std::span<const Point* const>(tuple));
    if (whole == 0) fail(ErrorKind::DegenerateInput, "degenerate transversal simplex");
    bool closed = true, strict = true;
    for (std::size_t j = 0; j < tuple.size() && closed; ++j) {
      const Point* saved = tuple[j];
      tuple[j] = &q;
      int o = orientation(std::span<const Point* const>(tuple));
      tuple[j] = saved;
      if (o != whole) strict = false;
      if (o != 0 && o != whole) closed = false;
    }
    out.closed += closed;
    out.interior += closed && strict;
  }
  return out;
}

std::uint64_t containment_count(std::span<const PointConfig> parts, const Point& q) {
  return containment_depth(parts, q).closed;
}

// Evaluates candidates in parallel. The best maximizes the closed count, then
// the interior count; the first such candidate wins.
std::pair<std::uint64_t, std::size_t> best_candidate(std::span<const PointConfig> parts,
                                                     const std::vector<Point>& cands) {
  std::vector<Depth> depth(cands.size());
  parallel_for(cands.size(), [&](std::size_t i) { depth[i] = containment_depth(parts, cands[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < depth.size(); ++i)
    if (depth[i] > depth[best]) best = i;
  return {cands.empty() ? 0 : depth[best].closed, best};
}

std::vector<Point> centroids(std::span<const PointConfig> parts) {
  const std::size_t d = parts.size() - 1;
  const std::uint64_t total = product_size(parts);
  std::vector<Point> out;
  std::vector<const Point*> tuple(parts.size());
  const Rational inv(1, static_cast<long>(d + 1));
  for (std::uint64_t c = 0; c < total; ++c) {
    decode(c, parts, tuple);
    Point g(d, Rational(0));
    for (const Point* p : tuple)
      for (std::size_t i = 0; i < d; ++i) g[i] += (*p)[i] * inv;
    out.push_back(std::move(g));
  }
  return out;
}

// Vertices of the arrangement spanned by the input (d <= 2). With closed
// containment every cell's count is attained at one of its vertices.
std::vector<Point> arrangement_vertices(std::span<const PointConfig> parts) {
  std::vector<Point> all;
  for (const auto& p : parts) all.insert(all.end(), p.points.begin(), p.points.end());
  const std::size_t d = all.front().size();
  if (d == 1) return all;
  // Lines a x + b y = c through pairs of points.
  struct Line {
    Rational a, b, c;
  };
  std::vector<Line> lines;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      Rational a = all[j][1] - all[i][1], b = all[i][0] - all[j][0];
      lines.push_back({a, b, a * all[i][0] + b * all[i][1]});
    }
  std::vector<Point> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      Rational det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
      if (det == 0) continue;
      out.push_back({(lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det,
                     (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det});
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TverbergWitness tverberg_point(std::span<const PointConfig> parts, std::uint64_t seed, const ApplicationOptions& opt) {
  const std::size_t d = common_dim(parts);
  if (parts.size() != d + 1) fail(ErrorKind::InvalidSpec, "need exactly d+1 parts");
  const std::size_t n = parts.front().points.size();
  for (const auto& p : parts)
    if (p.points.size() != n) fail(ErrorKind::InvalidSpec, "all parts must have the same size");
  require_general_position(parts);
  const std::uint64_t total = product_size(parts);
  if (total > opt.exact_cap) fail(ErrorKind::TooLarge, "n^{d+1} exceeds the exact counting cap");

  Integer fact(1);
  for (std::size_t i = 2; i <= d + 1; ++i) fact *= static_cast<unsigned long>(i);
  TverbergWitness out;
  out.required_count = ceil(Rational(Integer(static_cast<unsigned long>(total)), fact)).get_ui();

  // Stage 1: centroids of transversal simplices. Stage 2 (d <= 2): arrangement vertices.
  auto cands = centroids(parts);
  auto [best, at] = best_candidate(parts, cands);
  out.candidates = cands.size();
  if (best < out.required_count && d <= 2) {
    auto verts = arrangement_vertices(parts);
    auto [b2, at2] = best_candidate(parts, verts);
    out.candidates += verts.size();
    if (b2 > best) {
      best = b2;
      cands = std::move(verts);
      at = at2;
    }
  }
  if (best < out.required_count)
    fail(ErrorKind::SearchFailed, "best candidate is in " + std::to_string(best) + " simplices, need " +
                                      std::to_string(out.required_count));
  out.q = cands[at];
  out.containment_count = best;

  RelationSpec rel = containment_relation(out.q);
  out.density = find_complete_product(parts, rel, Rational(1) / Rational(fact), seed, opt.density);
  out.subsets = out.density.parts;

  // Exhaustive check of every output simplex.
  std::vector<PointConfig> chosen;
  for (std::size_t i = 0; i <= d; ++i) {
    chosen.emplace_back();
    chosen.back().dim = d;
    for (std::size_t j : out.subsets[i]) chosen.back().points.push_back(parts[i].points[j]);
  }
  if (containment_count(chosen, out.q) != product_size(chosen))
    fail(ErrorKind::BoundUnmet, "an output simplex misses q");
  return out;
}

}  // namespace sahr
