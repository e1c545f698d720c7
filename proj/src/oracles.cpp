#include "sahr/oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "sahr/error.hpp"
#include "sahr/parallel.hpp"

namespace sahr::oracle {

namespace {

constexpr std::uint64_t kEvalCap = 100'000'000;

std::uint64_t product_or_cap(std::span<const std::size_t> sizes, std::uint64_t cap) {
  std::uint64_t p = 1;
  for (std::size_t s : sizes) {
    if (s == 0) return 0;
    if (p > cap / s) return cap + 1;
    p *= s;
  }
  return p;
}

// Odometer over the product of [0, sizes[i]).
bool next_index(std::vector<std::size_t>& idx, std::span<const std::size_t> sizes) {
  for (std::size_t i = idx.size(); i-- > 0;) {
    if (++idx[i] < sizes[i]) return true;
    idx[i] = 0;
  }
  return false;
}

// Next k-subset of [0, n) in lexicographic order.
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

std::vector<std::size_t> first_subset(std::size_t k) {
  std::vector<std::size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(r);
}

Rational ratio(std::uint64_t a, std::uint64_t b) {
  Rational q{Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(b))};
  q.canonicalize();
  return q;
}

bool holds(const RelationSpec& rel, std::span<const Point* const> tuple) { return eval_relation(rel, tuple); }

// Sign of det [[1 ... 1], [x_1 ... x_{d+1}]] via the Leibniz expansion.
int orient(std::span<const Point* const> pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t c = 0; c < n; ++c) {
    a[0][c] = 1;
    for (std::size_t r = 1; r < n; ++r) a[r][c] = (*pts[c])[r - 1];
  }
  return sgn(leibniz_determinant(a));
}

// Sorted images of the pattern edges (monotone) or of all k-subsets (induced).
std::vector<std::vector<std::size_t>> relevant_tuples(const Pattern& H, bool induced,
                                                      std::span<const std::size_t> image) {
  std::vector<std::vector<std::size_t>> out;
  auto push = [&](const std::vector<std::size_t>& e) {
    std::vector<std::size_t> t;
    for (std::size_t v : e) t.push_back(image[v]);
    std::sort(t.begin(), t.end());
    out.push_back(std::move(t));
  };
  if (!induced) {
    for (const auto& e : H.edges) push(e);
  } else if (H.vertices >= H.k) {
    auto s = first_subset(H.k);
    do push(s);
    while (next_subset(s, H.vertices));
  }
  return out;
}

bool pattern_has(const Pattern& H, std::vector<std::size_t> e) {
  std::sort(e.begin(), e.end());
  return std::find(H.edges.begin(), H.edges.end(), e) != H.edges.end();
}

// Checks every k-subset of pattern vertices {0..j} that contains j.
bool consistent(const EdgeFn& edge, const Pattern& H, bool induced, std::span<const std::size_t> image,
                std::size_t j) {
  if (j + 1 < H.k) return true;
  std::vector<std::size_t> rest(H.k - 1);
  std::iota(rest.begin(), rest.end(), 0);
  do {
    std::vector<std::size_t> e(rest);
    e.push_back(j);
    bool in_h = pattern_has(H, e);
    if (!in_h && !induced) continue;
    std::vector<std::size_t> t;
    for (std::size_t v : e) t.push_back(image[v]);
    std::sort(t.begin(), t.end());
    if (edge(t) != in_h) return false;
  } while (H.k > 1 && next_subset(rest, j));
  return true;
}

bool extend(std::size_t n, const EdgeFn& edge, const Pattern& H, bool induced, std::vector<std::size_t>& image,
            std::vector<char>& used) {
  const std::size_t j = image.size();
  if (j == H.vertices) return true;
  for (std::size_t v = 0; v < n; ++v) {
    if (used[v]) continue;
    image.push_back(v);
    used[v] = 1;
    if (consistent(edge, H, induced, image, j) && extend(n, edge, H, induced, image, used)) return true;
    used[v] = 0;
    image.pop_back();
  }
  return false;
}

// Dense index of sorted k-tuples over [0, n).
struct TupleIndex {
  std::size_t n, k;
  std::size_t operator()(std::span<const std::size_t> t) const {
    std::size_t idx = 0;
    for (std::size_t v : t) idx = idx * n + v;
    return idx;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

Rational leibniz_determinant(const std::vector<std::vector<Rational>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational det = 0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= a[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

TupleTable::TupleTable(const PointConfig& P, const RelationSpec& rel) : n_(P.size()), k_(rel.arity) {
  if (k_ == 0) fail(ErrorKind::InvalidSpec, "relation arity must be positive");
  long double cells = 1;
  for (std::size_t i = 0; i < k_; ++i) cells *= static_cast<long double>(n_);
  if (cells > static_cast<long double>(1u << 28)) fail(ErrorKind::TooLarge, "tuple table exceeds 2^28 entries");
  std::size_t total = 1;
  for (std::size_t i = 0; i < k_; ++i) total *= n_;
  bits_.assign(total, 0);
  if (n_ < k_) return;
  TupleIndex ix{n_, k_};
  // Parallel over the smallest element of the subset.
  parallel_for(n_ - k_ + 1, [&](std::size_t first) {
    std::vector<std::size_t> s(k_);
    std::iota(s.begin(), s.end(), first);
    std::vector<const Point*> tuple(k_);
    do {
      if (s[0] != first) break;
      for (std::size_t i = 0; i < k_; ++i) tuple[i] = &P.points[s[i]];
      bits_[ix(s)] = holds(rel, tuple);
    } while (next_subset(s, n_));
  });
}

bool TupleTable::operator()(std::span<const std::size_t> sorted) const { return bits_[TupleIndex{n_, k_}(sorted)]; }

EdgeFn TupleTable::fn() const {
  return [this](std::span<const std::size_t> t) { return (*this)(t); };
}

Rational brute_homogeneity_mass(const PointConfig& P, const RelationSpec& rel,
                                const std::vector<std::vector<std::size_t>>& classes) {
  const std::size_t k = rel.arity, K = classes.size(), n = P.size();
  if (n == 0) return 0;
  // Total evaluations: e_k(class sizes).
  std::vector<long double> e(k + 1, 0);
  e[0] = 1;
  for (const auto& c : classes)
    for (std::size_t j = k; j >= 1; --j) e[j] += e[j - 1] * static_cast<long double>(c.size());
  if (e[k] > static_cast<long double>(kEvalCap)) fail(ErrorKind::TooLarge, "homogeneity mass needs more than 1e8 evaluations");

  std::uint64_t bad = 0;
  if (K >= k) {
    auto pick = first_subset(k);
    do {
      std::vector<std::size_t> sizes;
      for (std::size_t c : pick) sizes.push_back(classes[c].size());
      std::uint64_t total = product_or_cap(sizes, kEvalCap);
      if (total == 0) continue;
      std::uint64_t edges = 0;
      std::vector<std::size_t> idx(k, 0);
      std::vector<const Point*> tuple(k);
      do {
        for (std::size_t i = 0; i < k; ++i) tuple[i] = &P.points[classes[pick[i]][idx[i]]];
        edges += holds(rel, tuple);
      } while (next_index(idx, sizes));
      if (edges != 0 && edges != total) bad += total;
    } while (next_subset(pick, K));
  }
  std::uint64_t denom = 1;
  for (std::size_t i = 0; i < k; ++i) denom *= n;
  return ratio(bad, denom);
}

ProductWitness max_complete_product(std::span<const PointConfig> parts, const RelationSpec& rel) {
  const std::size_t k = parts.size();
  if (k != rel.arity || k < 2) fail(ErrorKind::InvalidSpec, "part count must equal the relation arity (>= 2)");
  std::vector<std::size_t> sizes;
  for (const auto& p : parts) sizes.push_back(p.size());
  const std::size_t limit = k == 2 ? 16 : 12;
  for (std::size_t s : sizes)
    if (s > limit) fail(ErrorKind::TooLarge, "part too large for exhaustive product search");
  std::size_t free_bits = 0;
  for (std::size_t i = 0; i + 1 < k; ++i) free_bits += sizes[i];
  if (free_bits > 26) fail(ErrorKind::TooLarge, "product search space exceeds 2^26");

  ProductWitness best;
  best.sizes.assign(k, 0);
  if (std::find(sizes.begin(), sizes.end(), 0u) != sizes.end()) return best;

  // row[t] = bitmask over the last part of points adjacent to the prefix tuple t.
  std::vector<std::size_t> prefix(sizes.begin(), sizes.end() - 1);
  std::size_t rows = 1;
  for (std::size_t s : prefix) rows *= s;
  std::vector<std::uint32_t> row(rows, 0);
  {
    std::vector<std::size_t> idx(k - 1, 0);
    std::size_t r = 0;
    std::vector<const Point*> tuple(k);
    do {
      for (std::size_t i = 0; i + 1 < k; ++i) tuple[i] = &parts[i].points[idx[i]];
      for (std::size_t q = 0; q < sizes[k - 1]; ++q) {
        tuple[k - 1] = &parts[k - 1].points[q];
        if (holds(rel, tuple)) row[r] |= 1u << q;
      }
      ++r;
    } while (next_index(idx, prefix));
  }

  // Fix subsets of the prefix parts one at a time; table entries are indexed
  // by the tuple over the parts not fixed yet.
  std::vector<std::uint32_t> chosen(k - 1, 0);
  std::function<void(std::size_t, const std::vector<std::uint32_t>&)> rec =
      [&](std::size_t j, const std::vector<std::uint32_t>& table) {
        if (j + 1 == k) {
          std::uint32_t last = table[0];
          if (last == 0) return;
          std::uint64_t prod = std::popcount(last);
          for (std::uint32_t c : chosen) prod *= std::popcount(c);
          if (prod > best.product) {
            best.product = prod;
            best.subsets.assign(k, {});
            for (std::size_t i = 0; i + 1 < k; ++i)
              for (std::size_t b = 0; b < sizes[i]; ++b)
                if (chosen[i] >> b & 1) best.subsets[i].push_back(b);
            for (std::size_t b = 0; b < sizes[k - 1]; ++b)
              if (last >> b & 1) best.subsets[k - 1].push_back(b);
          }
          return;
        }
        const std::size_t nj = sizes[j];
        const std::size_t stride = table.size() / nj;
        std::vector<std::vector<std::uint32_t>> dp(std::size_t{1} << nj);
        dp[0].assign(stride, ~0u);
        for (std::uint32_t S = 1; S < (1u << nj); ++S) {
          unsigned low = std::countr_zero(S);
          const auto& prev = dp[S & (S - 1)];
          auto& cur = dp[S];
          cur.resize(stride);
          bool alive = false;
          for (std::size_t t = 0; t < stride; ++t) {
            cur[t] = prev[t] & table[low * stride + t];
            alive |= cur[t] != 0;
          }
          if (!alive) continue;
          chosen[j] = S;
          rec(j + 1, cur);
        }
        chosen[j] = 0;
      };
  rec(0, row);
  for (std::size_t i = 0; i < best.subsets.size(); ++i) best.sizes[i] = best.subsets[i].size();
  return best;
}

std::map<SignVector, std::uint64_t> order_type_census(std::span<const PointConfig> parts) {
  const std::size_t k = parts.size();
  if (k == 0) return {};
  const std::size_t d = parts[0].dim;
  if (k < d + 1) fail(ErrorKind::InvalidSpec, "order types need at least d+1 parts");
  std::vector<std::size_t> sizes;
  for (const auto& p : parts) sizes.push_back(p.size());
  std::uint64_t total = product_or_cap(sizes, kEvalCap);
  if (total > kEvalCap) fail(ErrorKind::TooLarge, "census exceeds 1e8 transversals");
  std::map<SignVector, std::uint64_t> out;
  if (total == 0) return out;
  std::vector<std::size_t> idx(k, 0);
  std::vector<const Point*> pts(k), sub(d + 1);
  do {
    for (std::size_t i = 0; i < k; ++i) pts[i] = &parts[i].points[idx[i]];
    SignVector sv;
    auto s = first_subset(d + 1);
    do {
      for (std::size_t i = 0; i <= d; ++i) sub[i] = pts[s[i]];
      sv.push_back(static_cast<std::int8_t>(orient(sub)));
    } while (next_subset(s, k));
    ++out[sv];
  } while (next_index(idx, sizes));
  return out;
}

bool is_embedding(const EdgeFn& edge, const Pattern& H, bool induced, std::span<const std::size_t> image) {
  if (image.size() != H.vertices) return false;
  std::vector<std::size_t> sorted(image.begin(), image.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t j = 0; j < H.vertices; ++j)
    if (!consistent(edge, H, induced, image, j)) return false;
  return true;
}

std::optional<std::vector<std::size_t>> contains_forbidden(std::size_t n, const EdgeFn& edge, const Pattern& H,
                                                           bool induced) {
  if (H.vertices > 8) fail(ErrorKind::TooLarge, "pattern has more than 8 vertices");
  std::vector<std::size_t> image;
  std::vector<char> used(n, 0);
  if (extend(n, edge, H, induced, image, used)) return image;
  return std::nullopt;
}

namespace {

// Exhaustive minimum edit count on at most 8 vertices. States are bitmasks over
// the k-subsets; iterative deepening with a memo of failed budgets.
class ExactEdits {
 public:
  ExactEdits(std::size_t n, std::size_t k, std::span<const Pattern> forbidden, bool induced)
      : n_(n), k_(k), forbidden_(forbidden), induced_(induced), rank_(1, 0) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= n;
    rank_.assign(total, -1);
    if (n >= k) {
      auto s = first_subset(k);
      do {
        rank_[TupleIndex{n, k}(s)] = static_cast<int>(tuples_.size());
        tuples_.push_back(s);
      } while (next_subset(s, n));
    }
    if (tuples_.size() > 64) fail(ErrorKind::TooLarge, "exact farness supports at most 64 tuples");
  }

  std::uint64_t mask_of(const EdgeFn& edge) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < tuples_.size(); ++i)
      if (edge(tuples_[i])) m |= std::uint64_t{1} << i;
    return m;
  }

  std::size_t tuple_count() const { return tuples_.size(); }

  std::uint64_t solve(std::uint64_t mask) {
    for (std::uint64_t budget = 0;; ++budget)
      if (feasible(mask, budget)) return budget;
  }

 private:
  // Editable tuples of some forbidden copy in `mask`, or empty if none.
  std::optional<std::vector<int>> copy(std::uint64_t mask) const {
    EdgeFn edge = [&](std::span<const std::size_t> t) { return (mask >> rank_[TupleIndex{n_, k_}(t)]) & 1; };
    for (const auto& H : forbidden_) {
      auto img = contains_forbidden(n_, edge, H, induced_);
      if (!img) continue;
      std::vector<int> out;
      for (const auto& t : relevant_tuples(H, induced_, *img)) out.push_back(rank_[TupleIndex{n_, k_}(t)]);
      return out;
    }
    return std::nullopt;
  }

  bool feasible(std::uint64_t mask, std::uint64_t budget) {
    auto it = failed_.find(mask);
    if (it != failed_.end() && it->second >= budget) return false;
    auto c = copy(mask);
    if (!c) return true;
    if (budget > 0)
      for (int t : *c)
        if (feasible(mask ^ (std::uint64_t{1} << t), budget - 1)) return true;
    auto& f = failed_[mask];
    f = std::max(f, budget);
    return false;
  }

  std::size_t n_, k_;
  std::span<const Pattern> forbidden_;
  bool induced_;
  std::vector<int> rank_;
  std::vector<std::vector<std::size_t>> tuples_;
  std::unordered_map<std::uint64_t, std::uint64_t> failed_;
};

}  // namespace

Farness farness_oracle(std::size_t n, std::size_t k, const EdgeFn& edge, std::span<const Pattern> forbidden,
                       bool induced) {
  for (const auto& H : forbidden)
    if (H.k != k) fail(ErrorKind::InvalidSpec, "pattern arity differs from the instance arity");
  Farness out;
  std::uint64_t denom = choose(n, k);
  if (denom == 0) {
    out.fraction = 0;
    return out;
  }
  if (n <= 8) {
    ExactEdits ex(n, k, forbidden, induced);
    out.edits = ex.solve(ex.mask_of(edge));
    out.fraction = ratio(out.edits, denom);
    return out;
  }

  // Packing: copies whose editable tuples are pairwise disjoint each force a
  // separate edit.
  out.exact = false;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= n;
  std::vector<std::uint8_t> used(total, 0);
  TupleIndex ix{n, k};
  for (const auto& H : forbidden) {
    if (choose(n, H.vertices) > 500'000'000) fail(ErrorKind::TooLarge, "packing scan exceeds 5e8 subsets");
    if (H.vertices > n) continue;
    auto s = first_subset(H.vertices);
    do {
      std::vector<std::size_t> image(s);
      do {
        auto rel = relevant_tuples(H, induced, image);
        bool free = std::none_of(rel.begin(), rel.end(), [&](const auto& t) { return used[ix(t)]; });
        if (free && is_embedding(edge, H, induced, image)) {
          for (const auto& t : rel) used[ix(t)] = 1;
          ++out.edits;
          break;
        }
      } while (std::next_permutation(image.begin(), image.end()));
    } while (next_subset(s, n));
  }
  out.fraction = ratio(out.edits, denom);
  return out;
}

std::uint64_t rainbow_containment_count(std::span<const PointConfig> parts, const Point& q) {
  const std::size_t d = q.size();
  if (parts.size() != d + 1) fail(ErrorKind::InvalidSpec, "need d+1 parts for containment counting");
  std::vector<std::size_t> sizes;
  for (const auto& p : parts) {
    if (p.dim != d) fail(ErrorKind::InvalidSpec, "dimension mismatch");
    sizes.push_back(p.size());
  }
  std::uint64_t total = product_or_cap(sizes, kEvalCap);
  if (total > kEvalCap) fail(ErrorKind::TooLarge, "containment count exceeds 1e8 simplices");
  if (total == 0) return 0;
  std::uint64_t count = 0;
  std::vector<std::size_t> idx(d + 1, 0);
  std::vector<const Point*> pts(d + 1);
  do {
    for (std::size_t i = 0; i <= d; ++i) pts[i] = &parts[i].points[idx[i]];
    // q is in the closed simplex iff replacing any one vertex by q never
    // flips the orientation to the opposite strict sign.
    bool pos = false, neg = false;
    for (std::size_t j = 0; j <= d; ++j) {
      auto swapped = pts;
      swapped[j] = &q;
      int s = orient(swapped);
      pos |= s > 0;
      neg |= s < 0;
    }
    count += !(pos && neg);
  } while (next_index(idx, sizes));
  return count;
}

}  // namespace sahr::oracle
