#include "sahr/cutting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "sahr/error.hpp"
#include "sahr/kernels.hpp"

namespace sahr {

std::string_view to_string(CuttingMode mode) { return mode == CuttingMode::Exact ? "exact" : "sampled"; }

CuttingMode parse_cutting_mode(std::string_view text) {
  if (text == "exact") return CuttingMode::Exact;
  if (text == "sampled") return CuttingMode::Sampled;
  fail(ErrorKind::InvalidSpec, "unknown cutting mode '" + std::string(text) + "'");
}

bool Box::contains(std::span<const Rational> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

Box bounding_box(std::span<const Point> points, std::size_t m, const Rational& margin) {
  Box b;
  if (points.empty()) {
    b.lo.assign(m, -margin);
    b.hi.assign(m, margin);
    return b;
  }
  b.lo = b.hi = points.front();
  for (const auto& p : points) {
    if (p.size() != m) fail(ErrorKind::InvalidSpec, "bounding box over points of mixed dimension");
    for (std::size_t i = 0; i < m; ++i) {
      if (p[i] < b.lo[i]) b.lo[i] = p[i];
      if (p[i] > b.hi[i]) b.hi[i] = p[i];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

Integer cell_count_bound(std::size_t m, std::size_t r) {
  Integer a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), m + 1, 10 * m);
  mpz_ui_pow_ui(b.get_mpz_t(), r, m);
  return a * b;
}

// ---------------------------------------------------------------------------
// Containment

namespace {

int orient2(const Point& a, const Point& b, std::span<const Rational> c) {
  return sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

// 0: outside, 1: on the relative boundary, 2: interior.
int classify(const Simplex& s, std::span<const Rational> y) {
  if (y.size() != s.m) fail(ErrorKind::InvalidSpec, "point and cell dimensions differ");
  if (s.m == 1) {
    const Rational &a = s.vertices[0][0], &b = s.vertices[1][0];
    const Rational& lo = a < b ? a : b;
    const Rational& hi = a < b ? b : a;
    if (y[0] < lo || y[0] > hi) return 0;
    return (y[0] == lo || y[0] == hi) ? 1 : 2;
  }
  if (s.m == 2) {
    const Point &a = s.vertices[0], &b = s.vertices[1], &c = s.vertices[2];
    int o = orient2(a, b, c);
    if (o == 0) fail(ErrorKind::DegenerateInput, "degenerate cell");
    int s1 = orient2(a, b, y), s2 = orient2(b, c, y), s3 = orient2(c, a, y);
    if (s1 == -o || s2 == -o || s3 == -o) return 0;
    return (s1 == 0 || s2 == 0 || s3 == 0) ? 1 : 2;
  }
  auto lambda = barycentric(s.vertices, y);
  bool boundary = false;
  for (const auto& l : lambda) {
    if (l < 0) return 0;
    boundary |= l == 0;
  }
  return boundary ? 1 : 2;
}

}  // namespace

bool closure_contains(const Simplex& s, std::span<const Rational> y) { return classify(s, y) > 0; }
bool interior_contains(const Simplex& s, std::span<const Rational> y) { return classify(s, y) == 2; }

// ---------------------------------------------------------------------------
// Point-location index: a uniform grid of buckets listing the cells whose
// bounding box meets the bucket. Bucket coordinates are computed exactly.

class CellIndex {
 public:
  explicit CellIndex(const Cutting& c) : box_(c.box), m_(c.m) {
    const double target = std::max<double>(1.0, static_cast<double>(c.cells.size()));
    g_ = static_cast<std::size_t>(std::ceil(std::pow(target, 1.0 / static_cast<double>(std::max<std::size_t>(m_, 1)))));
    g_ = std::clamp<std::size_t>(g_, 1, m_ == 1 ? 4096 : 256);
    std::size_t total = 1;
    for (std::size_t i = 0; i < m_; ++i) total *= g_;
    buckets_.resize(total);
    for (std::size_t id = 0; id < c.cells.size(); ++id) {
      std::vector<std::size_t> lo(m_), hi(m_);
      for (std::size_t axis = 0; axis < m_; ++axis) {
        const Rational* mn = &c.cells[id].vertices[0][axis];
        const Rational* mx = mn;
        for (const auto& v : c.cells[id].vertices) {
          if (v[axis] < *mn) mn = &v[axis];
          if (v[axis] > *mx) mx = &v[axis];
        }
        lo[axis] = bucket(*mn, axis);
        hi[axis] = bucket(*mx, axis);
      }
      std::vector<std::size_t> cur = lo;
      while (true) {
        buckets_[flatten(cur)].push_back(id);
        std::size_t axis = 0;
        while (axis < m_ && cur[axis] == hi[axis]) {
          cur[axis] = lo[axis];
          ++axis;
        }
        if (axis == m_) break;
        ++cur[axis];
      }
    }
  }

  const std::vector<std::size_t>& candidates(std::span<const Rational> x) const {
    std::vector<std::size_t> cur(m_);
    for (std::size_t axis = 0; axis < m_; ++axis) cur[axis] = bucket(x[axis], axis);
    return buckets_[flatten(cur)];
  }

 private:
  std::size_t bucket(const Rational& v, std::size_t axis) const {
    Rational rel = (v - box_.lo[axis]) * Rational(static_cast<long>(g_)) / (box_.hi[axis] - box_.lo[axis]);
    Integer f = floor(rel);
    if (f < 0) return 0;
    if (f >= static_cast<long>(g_)) return g_ - 1;
    return f.get_ui();
  }
  std::size_t flatten(const std::vector<std::size_t>& cur) const {
    std::size_t id = 0;
    for (std::size_t axis = m_; axis-- > 0;) id = id * g_ + cur[axis];
    return id;
  }

  Box box_;
  std::size_t m_, g_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

void reindex(Cutting& c) { c.index = std::make_shared<const CellIndex>(c); }

std::vector<std::size_t> candidate_cells(const Cutting& c, std::span<const Rational> x) {
  if (!c.box.contains(x)) fail(ErrorKind::OutOfBox, "point lies outside the cutting's box");
  if (!c.index) fail(ErrorKind::InvalidSpec, "cutting has no location index");
  return c.index->candidates(x);
}

std::size_t locate(const Cutting& c, std::span<const Rational> x) {
  for (std::size_t id : candidate_cells(c, x))  // bucket lists are sorted by cell id
    if (closure_contains(c.cells[id], x)) return id;
  fail(ErrorKind::BoundUnmet, "no cell contains a point of the box");
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::vector<std::size_t> sample_indices(std::span<const std::size_t> from, std::size_t s, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(from.begin(), from.end());
  for (std::size_t i = 0; i < s && i < pool.size(); ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(std::min(s, pool.size()));
  return pool;
}

Cutting build_1d(std::span<const LiftedHyperplane> hs, Cutting c) {
  const Rational &lo = c.box.lo[0], &hi = c.box.hi[0];
  // Roots strictly inside the box, with the hyperplanes vanishing there.
  std::map<Rational, std::vector<std::size_t>> roots;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].coeffs[1] == 0) continue;
    Rational root = -hs[i].coeffs[0] / hs[i].coeffs[1];
    if (root > lo && root < hi) roots[root].push_back(i);
  }
  const std::size_t cap = c.cap();
  std::vector<Rational> bounds{lo};
  std::vector<std::vector<std::size_t>> lists(1);
  for (auto& [root, ids] : roots) {
    if (c.mode == CuttingMode::Exact || lists.back().size() + ids.size() > cap) {
      // A hyperplane vanishing at a cell endpoint does not cross it.
      bounds.push_back(root);
      lists.emplace_back();
    } else {
      lists.back().insert(lists.back().end(), ids.begin(), ids.end());
    }
  }
  bounds.push_back(hi);
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    c.cells.push_back(Simplex{1, {{bounds[i]}, {bounds[i + 1]}}, false});
    std::sort(lists[i].begin(), lists[i].end());
    c.crossing.push_back(std::move(lists[i]));
  }
  return c;
}

class PolygonSplitter {
 public:
  PolygonSplitter(std::span<const LiftedHyperplane> hs, Cutting& out, std::uint64_t seed)
      : hs_(hs), batch_(make_batch(hs, 2)), out_(out), rng_(seed) {}

  void run() {
    const Box& b = out_.box;
    std::vector<std::size_t> poly{vertex({b.lo[0], b.lo[1]}), vertex({b.hi[0], b.lo[1]}),
                                  vertex({b.hi[0], b.hi[1]}), vertex({b.lo[0], b.hi[1]})};
    std::vector<std::size_t> all(hs_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    process(poly, conflicts(poly, all));
  }

 private:
  std::size_t vertex(Point p) {
    auto [it, inserted] = ids_.try_emplace(p, coords_.size());
    if (inserted) {
      signs_.push_back(exact_signs(batch_, hs_, p));
      coords_.push_back(std::move(p));
    }
    return it->second;
  }

  std::vector<std::size_t> conflicts(const std::vector<std::size_t>& poly, std::span<const std::size_t> cand) const {
    std::vector<std::size_t> out;
    for (std::size_t h : cand) {
      bool pos = false, neg = false;
      for (std::size_t v : poly) {
        pos |= signs_[v][h] > 0;
        neg |= signs_[v][h] < 0;
      }
      if (pos && neg) out.push_back(h);
    }
    return out;
  }

  // Splits a convex polygon by a line that crosses it.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(const std::vector<std::size_t>& poly,
                                                                       std::size_t h) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      std::size_t u = poly[i], v = poly[(i + 1) % poly.size()];
      int su = signs_[u][h], sv = signs_[v][h];
      if (su >= 0) pos.push_back(u);
      if (su <= 0) neg.push_back(u);
      if (su * sv < 0) {
        Rational vu = hs_[h].value(coords_[u]), vv = hs_[h].value(coords_[v]);
        Rational t = vu / (vu - vv);
        Point w{coords_[u][0] + t * (coords_[v][0] - coords_[u][0]), coords_[u][1] + t * (coords_[v][1] - coords_[u][1])};
        std::size_t wid = vertex(std::move(w));
        pos.push_back(wid);
        neg.push_back(wid);
      }
    }
    return {std::move(pos), std::move(neg)};
  }

  void process(const std::vector<std::size_t>& poly, const std::vector<std::size_t>& conf) {
    const std::size_t cap = out_.mode == CuttingMode::Exact ? 0 : out_.cap();
    if (conf.size() <= cap) {
      emit(poly, conf);
      return;
    }
    std::size_t s = conf.size();
    if (out_.mode == CuttingMode::Sampled) {
      double rho = std::ceil(static_cast<double>(conf.size()) / static_cast<double>(std::max<std::size_t>(cap, 1)));
      s = std::min(conf.size(), static_cast<std::size_t>(std::ceil(4.0 * rho * std::log(rho + 1.0))));
      s = std::max<std::size_t>(s, 1);
    }
    std::vector<std::vector<std::size_t>> pieces{poly};
    for (std::size_t h : sample_indices(conf, s, rng_)) {
      std::vector<std::vector<std::size_t>> next;
      for (auto& piece : pieces) {
        std::size_t one[] = {h};
        if (conflicts(piece, one).empty()) {
          next.push_back(std::move(piece));
          continue;
        }
        auto [a, b] = split(piece, h);
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      }
      pieces = std::move(next);
    }
    for (const auto& piece : pieces) process(piece, conflicts(piece, conf));
  }

  void emit(const std::vector<std::size_t>& poly, const std::vector<std::size_t>& conf) {
    // Drop vertices lying on the segment between their neighbours.
    std::vector<std::size_t> ring = poly;
    bool changed = true;
    while (changed && ring.size() > 3) {
      changed = false;
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point& a = coords_[ring[(i + ring.size() - 1) % ring.size()]];
        const Point& c = coords_[ring[(i + 1) % ring.size()]];
        if (orient2(a, c, coords_[ring[i]]) == 0) {
          ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
      std::vector<std::size_t> tri{ring[0], ring[i], ring[i + 1]};
      out_.cells.push_back(Simplex{2, {coords_[tri[0]], coords_[tri[1]], coords_[tri[2]]}, false});
      out_.crossing.push_back(conflicts(tri, conf));
    }
  }

  std::span<const LiftedHyperplane> hs_;
  HyperplaneBatch batch_;
  Cutting& out_;
  std::mt19937_64 rng_;
  std::map<Point, std::size_t> ids_;
  std::vector<Point> coords_;
  std::vector<std::vector<std::int8_t>> signs_;
};

}  // namespace

Cutting build_cutting(std::span<const LiftedHyperplane> hs, std::size_t r, const Box& box, std::uint64_t seed,
                      CuttingMode mode) {
  const std::size_t m = box.m();
  if (m == 0) fail(ErrorKind::InvalidSpec, "cutting box has dimension 0");
  if (m > 2) fail(ErrorKind::UnsupportedDimension, "cuttings are supported for m in {1, 2}, got m = " + std::to_string(m));
  for (std::size_t i = 0; i < m; ++i)
    if (!(box.lo[i] < box.hi[i])) fail(ErrorKind::InvalidSpec, "cutting box has empty interior");
  for (const auto& h : hs)
    if (h.m() != m) fail(ErrorKind::InvalidSpec, "hyperplane dimension does not match the box");

  Cutting c;
  c.m = m;
  c.box = box;
  c.n = hs.size();
  c.r = std::clamp<std::size_t>(r, 2, std::max<std::size_t>(2, c.n));
  c.seed = seed;
  c.mode = mode;
  if (m == 1) {
    c = build_1d(hs, std::move(c));
  } else {
    PolygonSplitter(hs, c, seed).run();
  }
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    if (c.crossing[i].size() > c.cap())
      fail(ErrorKind::BoundUnmet, "cell " + std::to_string(i) + " is crossed by " + std::to_string(c.crossing[i].size()) +
                                      " hyperplanes, cap " + std::to_string(c.cap()));
  reindex(c);
  return c;
}

// ---------------------------------------------------------------------------
// Verification

CuttingReport verify_cutting(const Cutting& c, std::span<const LiftedHyperplane> hs, std::span<const Point> probes) {
  CuttingReport rep;
  rep.cells = c.cells.size();
  rep.cap = c.cap();
  rep.count_bound = cell_count_bound(c.m, c.r);
  auto failure = [&](std::string what) {
    rep.pass = false;
    if (rep.failures.size() < 32) rep.failures.push_back(std::move(what));
  };
  if (hs.size() != c.n) failure("cutting was built for " + std::to_string(c.n) + " hyperplanes, got " + std::to_string(hs.size()));
  if (c.crossing.size() != c.cells.size()) failure("crossing list count differs from cell count");
  if (Integer(static_cast<unsigned long>(c.cells.size())) > rep.count_bound) failure("cell count exceeds the bound");

  HyperplaneBatch batch = make_batch(hs, c.m);
  for (std::size_t id = 0; id < c.cells.size(); ++id) {
    const Simplex& s = c.cells[id];
    std::vector<bool> pos(hs.size(), false), neg(hs.size(), false);
    for (const auto& v : s.vertices) {
      if (!c.box.contains(v)) failure("cell " + std::to_string(id) + " leaves the box");
      auto sg = exact_signs(batch, hs, v);
      for (std::size_t h = 0; h < hs.size(); ++h) {
        if (sg[h] > 0) pos[h] = true;
        if (sg[h] < 0) neg[h] = true;
      }
    }
    std::vector<std::size_t> fresh;
    for (std::size_t h = 0; h < hs.size(); ++h)
      if (pos[h] && neg[h]) fresh.push_back(h);
    rep.max_crossing = std::max(rep.max_crossing, fresh.size());
    if (fresh.size() > rep.cap)
      failure("cell " + std::to_string(id) + " crossed by " + std::to_string(fresh.size()) + " > " + std::to_string(rep.cap));
    if (id < c.crossing.size()) {
      std::vector<std::size_t> stored = c.crossing[id];
      std::sort(stored.begin(), stored.end());
      if (stored != fresh) failure("cell " + std::to_string(id) + " has a wrong crossing list");
    }
  }

  for (const auto& p : probes) {
    ++rep.probes;
    if (!c.box.contains(p)) {
      failure("probe outside the box");
      continue;
    }
    std::size_t closed = 0, open = 0;
    for (std::size_t id : candidate_cells(c, p)) {
      int k = classify(c.cells[id], p);
      closed += k > 0;
      open += k == 2;
    }
    if (closed == 0) failure("probe not covered by any cell");
    if (open > 1) failure("probe interior to " + std::to_string(open) + " cells");
  }
  return rep;
}

}  // namespace sahr
