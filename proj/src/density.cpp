#include "sahr/density.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sahr/error.hpp"
#include "sahr/kernels.hpp"

namespace sahr {

// ---------------------------------------------------------------------------
// Predicates

bool CellPredicate::contains(const Point& x) const {
  bool in = formula.eval([&](std::size_t j) { return sign(polys[j - 1].eval(x)) >= 0; });
  return in != complement;
}

std::vector<std::size_t> CellPredicate::select(std::span<const Point> points) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (contains(points[i])) out.push_back(i);
  return out;
}

CellPredicate full_predicate(std::size_t dim) {
  CellPredicate p;
  p.dim = dim;
  return p;
}

namespace {

// Inverse of a square matrix by Gauss-Jordan elimination.
std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) fail(ErrorKind::DegenerateInput, "singular frame");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational s = a[col][col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col][c] /= s;
      inv[col][c] /= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

std::size_t affine_rank(const std::vector<Point>& pts) {
  if (pts.empty()) return 0;
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> r(pts[0].size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = pts[i][k] - pts[0][k];
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  const std::size_t cols = pts[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

// The affine form a_0 + sum a_k y_k composed with phi, as a polynomial in x.
Polynomial compose_with_lift(std::span<const Rational> a, std::size_t d, unsigned D) {
  const auto& monos = monomial_exponents(d, D);
  Polynomial p(d);
  p.add_term(Exponent(d, 0), a[0]);
  for (std::size_t k = 0; k < monos.size(); ++k) p.add_term(monos[k], a[k + 1]);
  return p;
}

}  // namespace

CellPredicate lifted_simplex_predicate(const Simplex& delta, std::size_t d, unsigned D) {
  const std::size_t m = veronese_dim(d, D);
  const std::size_t l = delta.vertices.size();
  if (l == 0 || l > m + 1) fail(ErrorKind::InvalidSpec, "simplex must have between 1 and m+1 vertices");
  // Complete the vertices to an affine frame of R^m with unit steps from v_0.
  std::vector<Point> frame = delta.vertices;
  if (affine_rank(frame) + 1 != l) fail(ErrorKind::DegenerateInput, "simplex vertices are affinely dependent");
  for (std::size_t k = 0; k < m && frame.size() < m + 1; ++k) {
    Point w = frame[0];
    w[k] += 1;
    frame.push_back(w);
    if (affine_rank(frame) + 1 != frame.size()) frame.pop_back();
  }
  std::vector<std::vector<Rational>> a(m + 1, std::vector<Rational>(m + 1));
  for (std::size_t j = 0; j <= m; ++j) {
    a[0][j] = 1;
    for (std::size_t r = 0; r < m; ++r) a[r + 1][j] = frame[j][r];
  }
  auto inv = inverse(std::move(a));  // row i: coordinate beta_i as an affine form in (1, y)

  CellPredicate pred;
  pred.dim = d;
  std::vector<BooleanFormula> clauses;
  for (std::size_t i = 0; i <= m; ++i) {
    Polynomial beta = compose_with_lift(inv[i], d, D);
    if (i < l) {
      // beta_i > 0, i.e. not (-beta_i >= 0).
      pred.polys.push_back(-beta);
      clauses.push_back(BooleanFormula::negation(BooleanFormula::atom(pred.polys.size())));
    } else {
      pred.polys.push_back(beta);
      clauses.push_back(BooleanFormula::atom(pred.polys.size()));
      pred.polys.push_back(-beta);
      clauses.push_back(BooleanFormula::atom(pred.polys.size()));
    }
  }
  pred.formula = BooleanFormula::all_of(std::move(clauses));
  return pred;
}

std::string_view to_string(Polarity p) { return p == Polarity::Complete ? "complete" : "empty"; }

// ---------------------------------------------------------------------------
// Bounds and counting

std::vector<Rational> theorem_bound(std::size_t k, std::size_t d, std::size_t t, unsigned D, const Rational& eps) {
  if (k < 2) fail(ErrorKind::InvalidSpec, "theorem_bound needs k >= 2");
  if (eps <= 0 || eps > 1) fail(ErrorKind::InvalidSpec, "epsilon must lie in (0, 1]");
  const std::size_t m = veronese_dim(d, D);
  Integer tm, base;
  mpz_ui_pow_ui(tm.get_mpz_t(), t, m);
  Rational top = pow(eps, static_cast<unsigned>(m + 1));
  if (k == 2) {
    mpz_ui_pow_ui(base.get_mpz_t(), m + 1, 14 * m);
    return {eps / 8, top / Rational(tm * base)};
  }
  // C^k = (m+1)^{20mk} t^m.
  mpz_ui_pow_ui(base.get_mpz_t(), m + 1, 20 * m * k);
  return std::vector<Rational>(k, top / Rational(tm * base));
}

namespace {

// Calls fn(tuple) for every transversal of the parts, last part varying fastest.
template <class Fn>
void for_each_transversal(std::span<const std::vector<const Point*>> parts, Fn&& fn) {
  const std::size_t k = parts.size();
  for (const auto& p : parts)
    if (p.empty()) return;
  std::vector<std::size_t> idx(k, 0);
  std::vector<const Point*> tuple(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = parts[i][idx[i]];
    if (!fn(std::span<const Point* const>(tuple), idx)) return;
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++idx[i] < parts[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational q{Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(b))};
  q.canonicalize();
  return q;
}

std::uint64_t product_size(std::span<const std::vector<const Point*>> parts) {
  std::uint64_t s = 1;
  for (const auto& p : parts) s *= p.size();
  return s;
}

std::vector<std::vector<const Point*>> pointers(std::span<const PointConfig> parts) {
  std::vector<std::vector<const Point*>> out;
  for (const auto& p : parts) {
    out.emplace_back();
    for (const auto& x : p.points) out.back().push_back(&x);
  }
  return out;
}

}  // namespace

std::uint64_t count_edges(const RelationSpec& rel, std::span<const std::vector<const Point*>> parts) {
  std::uint64_t edges = 0;
  for_each_transversal(parts, [&](std::span<const Point* const> tuple, const std::vector<std::size_t>&) {
    edges += eval_relation(rel, tuple);
    return true;
  });
  return edges;
}

bool product_is_complete(const RelationSpec& rel, std::span<const PointConfig> parts,
                         const std::vector<std::vector<std::size_t>>& subsets, bool want_edges) {
  std::vector<std::vector<const Point*>> chosen;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    chosen.emplace_back();
    for (std::size_t j : subsets[i]) chosen.back().push_back(&parts[i].points[j]);
  }
  bool ok = true;
  for_each_transversal(std::span<const std::vector<const Point*>>(chosen),
                       [&](std::span<const Point* const> tuple, const std::vector<std::size_t>&) {
                         if (eval_relation(rel, tuple) != want_edges) ok = false;
                         return ok;
                       });
  return ok;
}

// ---------------------------------------------------------------------------
// Bipartite step

namespace {

struct BipartiteResult {
  std::vector<std::size_t> left;   // indices of left tuples
  std::vector<std::size_t> right;  // indices of right points
  Simplex cell;                    // relatively open, phi(right) = phi(all right) cut by it
};

// Left items are (k-1)-tuples of points (blocks 0..k-2), right items are points
// of block k-1. adj is row-major |left| x |right|.
class BipartiteSolver {
 public:
  BipartiteSolver(const RelationSpec& rel, const std::vector<std::vector<const Point*>>& left,
                  const std::vector<const Point*>& right, const std::vector<std::uint8_t>& adj)
      : rel_(rel), left_(left), right_(right), adj_(adj), lifter_(rel, rel.arity - 1), m_(lifter_.m()) {
    t_ = rel.polys.size();
    for (const auto& tup : left_) {
      auto hs = lifter_.hyperplanes(tup);
      for (auto& h : hs) hs_.push_back(std::move(h));
    }
    batch_ = make_batch(hs_, m_);
    for (const Point* q : right_) lifted_.push_back(lift_point(*q, rel.declared_D));
  }

  BipartiteResult run(const Rational& eps, std::uint64_t seed, CuttingMode mode) {
    if (auto r = attempt(eps, seed, mode)) return *r;
    // Degenerate data can leave no qualifying cell; the full arrangement always has one.
    if (mode != CuttingMode::Exact)
      if (auto r = attempt(eps, seed, CuttingMode::Exact)) return *r;
    fail(ErrorKind::BoundUnmet, "no cell of the cutting certifies a complete product");
  }

 private:
  const std::vector<std::int8_t>& vertex_signs(const Point& v) {
    auto it = sign_cache_.find(v);
    if (it == sign_cache_.end()) it = sign_cache_.emplace(v, exact_signs(batch_, hs_, v)).first;
    return it->second;
  }

  // Left items none of whose hyperplanes cross the simplex spanned by `verts`.
  std::vector<std::uint8_t> uniform_on(const std::vector<Point>& verts) {
    std::vector<const std::vector<std::int8_t>*> sg;
    for (const auto& v : verts) sg.push_back(&vertex_signs(v));
    std::vector<std::uint8_t> ok(left_.size(), 1);
    for (std::size_t h = 0; h < hs_.size(); ++h) {
      bool pos = false, neg = false;
      for (const auto* s : sg) {
        pos |= (*s)[h] > 0;
        neg |= (*s)[h] < 0;
      }
      if (pos && neg) ok[h / t_] = 0;
    }
    return ok;
  }

  std::vector<std::size_t> adjacent_to_all(const std::vector<std::uint8_t>& uniform,
                                           const std::vector<std::size_t>& rights) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < left_.size(); ++i) {
      if (!uniform[i]) continue;
      bool all = true;
      for (std::size_t j : rights)
        if (!adj_[i * right_.size() + j]) {
          all = false;
          break;
        }
      if (all) out.push_back(i);
    }
    return out;
  }

  std::optional<BipartiteResult> attempt(const Rational& eps, std::uint64_t seed, CuttingMode mode) {
    const std::size_t nl = left_.size(), nr = right_.size();
    const std::size_t r = ceil(Rational(8 * static_cast<long>(t_)) / eps).get_ui();
    Box box = bounding_box(lifted_, m_, 1);
    Cutting cut = build_cutting(hs_, r, box, seed, mode);

    // Group right points by located cell and carrier face (positive barycentric coordinates).
    struct Group {
      std::size_t cell;
      std::vector<std::size_t> face;
      std::vector<std::size_t> members;
    };
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> slot;
    std::vector<Group> groups;
    for (std::size_t j = 0; j < nr; ++j) {
      std::size_t c = locate(cut, lifted_[j]);
      auto beta = barycentric(cut.cells[c].vertices, lifted_[j]);
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < beta.size(); ++i)
        if (beta[i] > 0) face.push_back(i);
      auto [it, inserted] = slot.try_emplace({c, face}, groups.size());
      if (inserted) groups.push_back({c, face, {}});
      groups[it->second].members.push_back(j);
    }

    // Groups below eps / (2 * 2^{10 m log(m+1)} r^m) |Q| are discarded.
    Rational discard = eps / (Rational(2) * Rational(cell_count_bound(m_, cut.r))) * Rational(static_cast<long>(nr));
    Rational need = eps / 8 * Rational(static_cast<long>(nl));
    std::optional<std::size_t> best;
    std::size_t best_score = 0;
    std::vector<std::size_t> best_left;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (Rational(static_cast<long>(groups[g].members.size())) < discard) continue;
      std::vector<Point> verts;
      for (std::size_t i : groups[g].face) verts.push_back(cut.cells[groups[g].cell].vertices[i]);
      auto lefts = adjacent_to_all(uniform_on(verts), groups[g].members);
      if (Rational(static_cast<long>(lefts.size())) < need || lefts.empty()) continue;
      std::size_t score = lefts.size() * groups[g].members.size();
      if (!best || score > best_score) {
        best = g;
        best_score = score;
        best_left = std::move(lefts);
      }
    }
    if (!best) return std::nullopt;

    const Group& g = groups[*best];
    std::vector<Point> face;
    for (std::size_t i : g.face) face.push_back(cut.cells[g.cell].vertices[i]);
    Simplex tight = tighten(face, g.members);

    BipartiteResult res;
    res.cell = tight;
    for (std::size_t j = 0; j < nr; ++j)
      if (relative_interior_contains(tight.vertices, lifted_[j])) res.right.push_back(j);
    res.left = adjacent_to_all(uniform_on(tight.vertices), res.right);
    // The tightened cell sits inside the face, so the chosen left items survive.
    if (res.left.size() < best_left.size() || res.right.size() < g.members.size())
      fail(ErrorKind::BoundUnmet, "tightened cell lost part of the certified product");
    return res;
  }

  // Shrinks the face toward its centroid so that every member stays in the
  // relative interior and the new vertices lie in the open face.
  Simplex tighten(const std::vector<Point>& face, const std::vector<std::size_t>& members) const {
    Simplex s;
    s.m = m_;
    s.open = true;
    bool same = true;
    for (std::size_t j : members) same &= lifted_[j] == lifted_[members.front()];
    if (same) {
      s.vertices = {lifted_[members.front()]};
      return s;
    }
    const std::size_t l = face.size();
    Rational min_beta(1);
    for (std::size_t j : members) {
      auto beta = affine_coordinates(face, lifted_[j]);
      for (const auto& b : *beta) min_beta = std::min(min_beta, b);
    }
    Rational lambda = Rational(static_cast<long>(l)) * min_beta;  // in (0, 1)
    Rational scale = 1 - lambda / 2;
    Point centroid(m_, Rational(0));
    for (const auto& v : face)
      for (std::size_t k = 0; k < m_; ++k) centroid[k] += v[k] / Rational(static_cast<long>(l));
    for (const auto& v : face) {
      Point w(m_);
      for (std::size_t k = 0; k < m_; ++k) w[k] = centroid[k] + scale * (v[k] - centroid[k]);
      s.vertices.push_back(std::move(w));
    }
    return s;
  }

  const RelationSpec& rel_;
  const std::vector<std::vector<const Point*>>& left_;
  const std::vector<const Point*>& right_;
  const std::vector<std::uint8_t>& adj_;
  PartialLifter lifter_;
  std::size_t m_, t_ = 0;
  std::vector<LiftedHyperplane> hs_;
  HyperplaneBatch batch_;
  std::vector<Point> lifted_;
  std::map<Point, std::vector<std::int8_t>> sign_cache_;
};

// Predicate for the left part of a binary relation: E(x, q) together with
// every f_i*(x, .) being >= 0 on all cell vertices or <= 0 on all of them.
CellPredicate left_predicate(const RelationSpec& rel, const Point& q, const Simplex& cell) {
  const std::size_t d = rel.dim;
  PartialLifter lifter(rel, 1);
  CellPredicate pred;
  pred.dim = d;
  for (const auto& f : rel.polys) pred.polys.push_back(f.substitute(d, q));
  std::vector<BooleanFormula> clauses{rel.formula};
  for (std::size_t i = 0; i < rel.polys.size(); ++i) {
    std::vector<BooleanFormula> up, down;
    for (const auto& v : cell.vertices) {
      Polynomial g = lifter.substitute_lifted(i, v);
      pred.polys.push_back(g);
      up.push_back(BooleanFormula::atom(pred.polys.size()));
      pred.polys.push_back(-g);
      down.push_back(BooleanFormula::atom(pred.polys.size()));
    }
    clauses.push_back(BooleanFormula::any_of({BooleanFormula::all_of(std::move(up)), BooleanFormula::all_of(std::move(down))}));
  }
  pred.formula = BooleanFormula::all_of(std::move(clauses));
  return pred;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct Solution {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<CellPredicate> predicates;
  Simplex cell;
  std::vector<Complexity> reduced;
};

Solution solve(const RelationSpec& rel, const std::vector<std::vector<const Point*>>& parts, const Rational& eps,
               std::uint64_t seed, const DensityOptions& opt) {
  const std::size_t k = parts.size();
  std::vector<std::vector<const Point*>> left;
  for_each_transversal(std::span<const std::vector<const Point*>>(parts.data(), k - 1),
                       [&](std::span<const Point* const> tuple, const std::vector<std::size_t>&) {
                         left.emplace_back(tuple.begin(), tuple.end());
                         return true;
                       });
  const auto& right = parts[k - 1];
  std::vector<std::uint8_t> adj(left.size() * right.size());
  std::vector<const Point*> tuple(k);
  for (std::size_t i = 0; i < left.size(); ++i) {
    std::copy(left[i].begin(), left[i].end(), tuple.begin());
    for (std::size_t j = 0; j < right.size(); ++j) {
      tuple[k - 1] = right[j];
      adj[i * right.size() + j] = eval_relation(rel, tuple);
    }
  }

  BipartiteSolver solver(rel, left, right, adj);
  BipartiteResult bip = solver.run(eps, seed, opt.mode);

  Solution sol;
  sol.cell = bip.cell;
  CellPredicate right_pred = lifted_simplex_predicate(bip.cell, rel.dim, rel.declared_D);
  if (k == 2) {
    sol.parts = {bip.left, bip.right};
    sol.predicates = {left_predicate(rel, *right[bip.right.front()], bip.cell), right_pred};
    return sol;
  }

  // Induction: reduce to the first k-1 parts.
  const Point& anchor = *right[bip.right.front()];
  RelationSpec reduced = derive_reduced_relation(rel, bip.cell, anchor);
  std::vector<std::vector<const Point*>> rest(parts.begin(), parts.end() - 1);
  std::uint64_t edges = count_edges(reduced, rest);
  std::vector<std::size_t> right_part = bip.right;
  if (edges == 0) {
    // The single-vertex cell {phi(q)} never cuts a hyperplane, so E_1 = E_2.
    Simplex point_cell{bip.cell.m, {lift_point(anchor, rel.declared_D)}, true};
    reduced = derive_reduced_relation(rel, point_cell, anchor);
    edges = count_edges(reduced, rest);
    sol.cell = point_cell;
    right_part.clear();
    for (std::size_t j = 0; j < right.size(); ++j)
      if (lift_point(*right[j], rel.declared_D) == point_cell.vertices.front()) right_part.push_back(j);
    right_pred = lifted_simplex_predicate(point_cell, rel.dim, rel.declared_D);
  }
  if (edges == 0) fail(ErrorKind::BoundUnmet, "reduced relation has no edges");
  Rational eps1 = ratio(edges, product_size(rest));

  Solution inner = solve(reduced, rest, eps1, mix_seed(seed, k), opt);
  sol.parts = std::move(inner.parts);
  sol.parts.push_back(right_part);
  sol.predicates = std::move(inner.predicates);
  sol.predicates.push_back(right_pred);
  sol.reduced.push_back(verify_complexity(reduced));
  sol.reduced.insert(sol.reduced.end(), inner.reduced.begin(), inner.reduced.end());
  return sol;
}

}  // namespace

RelationSpec derive_reduced_relation(const RelationSpec& rel, const Simplex& cell, const Point& anchor) {
  validate_relation(rel);
  if (rel.arity < 2) fail(ErrorKind::InvalidSpec, "reduced relations need arity >= 2");
  if (anchor.size() != rel.dim) fail(ErrorKind::InvalidSpec, "anchor point has the wrong dimension");
  const std::size_t m = veronese_dim(rel.dim, rel.declared_D);
  if (cell.vertices.empty() || cell.vertices.size() > m + 1)
    fail(ErrorKind::InvalidSpec, "cell must have between 1 and m+1 vertices");
  for (const auto& v : cell.vertices)
    if (v.size() != m) fail(ErrorKind::InvalidSpec, "cell lives in the wrong lifted dimension");

  const std::size_t k = rel.arity, d = rel.dim, t = rel.polys.size(), l = cell.vertices.size();
  PartialLifter lifter(rel, k - 1);
  RelationSpec out;
  out.arity = k - 1;
  out.dim = d;
  out.declared_D = rel.declared_D;
  for (const auto& f : rel.polys) out.polys.push_back(f.substitute((k - 1) * d, anchor));
  std::vector<BooleanFormula> clauses{rel.formula};
  for (std::size_t i = 0; i < t; ++i) {
    std::vector<BooleanFormula> up, down;
    for (std::size_t j = 0; j < l; ++j) {
      out.polys.push_back(lifter.substitute_lifted(i, cell.vertices[j]));
      up.push_back(BooleanFormula::atom(out.polys.size()));
      down.push_back(BooleanFormula::negation(BooleanFormula::atom(out.polys.size())));
    }
    clauses.push_back(BooleanFormula::any_of({BooleanFormula::all_of(std::move(up)), BooleanFormula::all_of(std::move(down))}));
  }
  out.formula = BooleanFormula::all_of(std::move(clauses));
  out.declared_t = out.polys.size();
  return out;
}

namespace {

HomogeneousWitness finish(const RelationSpec& rel, std::span<const PointConfig> parts, const Rational& eps,
                          Solution sol, const Rational& density) {
  const std::size_t k = parts.size();
  HomogeneousWitness w;
  w.parts = std::move(sol.parts);
  w.cell = std::move(sol.cell);
  w.predicates = std::move(sol.predicates);
  w.reduced = std::move(sol.reduced);
  w.density = density;
  w.guarantee = theorem_bound(k, rel.dim, rel.polys.size(), rel.declared_D, eps);
  for (std::size_t i = 0; i < k; ++i) {
    w.sizes.push_back(w.parts[i].size());
    Integer req = ceil(w.guarantee[i] * Rational(static_cast<long>(parts[i].size())));
    w.required.push_back(std::max<std::size_t>(1, req.get_ui()));
  }

  if (!product_is_complete(rel, parts, w.parts))
    fail(ErrorKind::BoundUnmet, "returned product is not complete");
  for (std::size_t i = 0; i < k; ++i) {
    if (w.sizes[i] < w.required[i])
      fail(ErrorKind::BoundUnmet, "part " + std::to_string(i + 1) + " has " + std::to_string(w.sizes[i]) +
                                      " points, guarantee requires " + std::to_string(w.required[i]));
    if (w.predicates[i].select(parts[i].points) != w.parts[i])
      fail(ErrorKind::BoundUnmet, "predicate of part " + std::to_string(i + 1) + " does not reproduce it");
  }
  std::size_t cur_t = rel.polys.size();
  for (const auto& c : w.reduced) {
    if (c.t > cur_t * (veronese_dim(rel.dim, rel.declared_D) + 2) || c.D > rel.declared_D)
      fail(ErrorKind::BoundUnmet, "reduced relation exceeds complexity (t(m+2), D)");
    cur_t = c.t;
  }
  return w;
}

Rational check_density(const RelationSpec& rel, const std::vector<std::vector<const Point*>>& ptrs, const Rational& eps,
                       const DensityOptions& opt) {
  if (eps <= 0 || eps > 1) fail(ErrorKind::InvalidSpec, "epsilon must lie in (0, 1]");
  std::uint64_t total = product_size(ptrs);
  if (total == 0) fail(ErrorKind::InvalidSpec, "every part must be nonempty");
  if (total > opt.cap_product)
    fail(ErrorKind::TooLarge, "product of part sizes " + std::to_string(total) + " exceeds the cap " +
                                  std::to_string(opt.cap_product));
  std::uint64_t edges = count_edges(rel, ptrs);
  Rational density = ratio(edges, total);
  if (density < eps || edges == 0)
    fail(ErrorKind::InsufficientDensity, "edge density " + format_rational(density) + " is below epsilon " +
                                             format_rational(eps));
  return density;
}

}  // namespace

HomogeneousWitness find_biclique(const PointConfig& P, const PointConfig& Q, const RelationSpec& rel,
                                 const Rational& eps, std::uint64_t seed, const DensityOptions& opt) {
  if (rel.arity != 2) fail(ErrorKind::InvalidSpec, "find_biclique needs a binary relation");
  std::vector<PointConfig> parts{P, Q};
  return find_complete_product(parts, rel, eps, seed, opt);
}

HomogeneousWitness find_complete_product(std::span<const PointConfig> parts, const RelationSpec& rel,
                                         const Rational& eps, std::uint64_t seed, const DensityOptions& opt) {
  verify_complexity(rel);
  if (parts.size() != rel.arity)
    fail(ErrorKind::InvalidSpec, "relation arity " + std::to_string(rel.arity) + " but " +
                                     std::to_string(parts.size()) + " parts");
  if (rel.arity < 2) fail(ErrorKind::InvalidSpec, "complete products need arity >= 2");
  for (const auto& p : parts)
    for (const auto& x : p.points)
      if (x.size() != rel.dim) fail(ErrorKind::InvalidSpec, "point dimension does not match the relation");
  auto ptrs = pointers(parts);
  Rational density = check_density(rel, ptrs, eps, opt);
  Solution sol = solve(rel, ptrs, eps, seed, opt);
  return finish(rel, parts, eps, std::move(sol), density);
}

}  // namespace sahr
