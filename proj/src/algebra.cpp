#include "sahr/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "sahr/error.hpp"

namespace sahr {

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(std::size_t dim, const Rational& c) {
  Polynomial p(dim);
  p.add_term(Exponent(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t index) {
  if (index >= dim) fail(ErrorKind::InvalidSpec, "variable index out of range");
  Polynomial p(dim);
  Exponent e(dim, 0);
  e[index] = 1;
  p.add_term(e, Rational(1));
  return p;
}

void Polynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != dim_)
    fail(ErrorKind::InvalidSpec, "exponent vector of length " + std::to_string(e.size()) + " in a " +
                                     std::to_string(dim_) + "-variate polynomial");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

unsigned Polynomial::total_degree() const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) best = std::max(best, std::accumulate(e.begin(), e.end(), 0u));
  return best;
}

unsigned Polynomial::degree_in(std::size_t first, std::size_t count) const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    unsigned s = 0;
    for (std::size_t i = first; i < first + count && i < dim_; ++i) s += e[i];
    best = std::max(best, s);
  }
  return best;
}

namespace {

template <class VarFn>
Rational eval_terms(const std::map<Exponent, Rational>& terms, VarFn&& var) {
  Rational sum(0), prod;
  for (const auto& [e, c] : terms) {
    prod = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) prod *= var(i);
    sum += prod;
  }
  return sum;
}

}  // namespace

Rational Polynomial::eval(std::span<const Rational> x) const {
  if (x.size() != dim_)
    fail(ErrorKind::InvalidSpec, "evaluating a " + std::to_string(dim_) + "-variate polynomial at a point of length " +
                                     std::to_string(x.size()));
  return eval_terms(terms_, [&](std::size_t i) -> const Rational& { return x[i]; });
}

Rational Polynomial::eval_blocks(std::span<const Point* const> blocks, std::size_t block_dim) const {
  if (blocks.size() * block_dim != dim_)
    fail(ErrorKind::InvalidSpec, "tuple does not match the polynomial's variable count");
  for (const Point* b : blocks)
    if (b->size() != block_dim) fail(ErrorKind::InvalidSpec, "point dimension mismatch");
  return eval_terms(terms_, [&](std::size_t i) -> const Rational& { return (*blocks[i / block_dim])[i % block_dim]; });
}

Polynomial Polynomial::substitute(std::size_t first, std::span<const Rational> values) const {
  const std::size_t count = values.size();
  if (first + count > dim_) fail(ErrorKind::InvalidSpec, "substitution range exceeds variable count");
  Polynomial out(dim_ - count);
  Exponent rest(dim_ - count);
  for (const auto& [e, c] : terms_) {
    Rational coeff = c;
    for (std::size_t i = 0; i < count; ++i)
      for (unsigned k = 0; k < e[first + i]; ++k) coeff *= values[i];
    std::copy(e.begin(), e.begin() + first, rest.begin());
    std::copy(e.begin() + first + count, e.end(), rest.begin() + first);
    out.add_term(rest, coeff);
  }
  return out;
}

std::map<Exponent, Polynomial> Polynomial::split_block(std::size_t first, std::size_t count) const {
  if (first + count > dim_) fail(ErrorKind::InvalidSpec, "block range exceeds variable count");
  std::map<Exponent, Polynomial> out;
  Exponent rest(dim_ - count);
  for (const auto& [e, c] : terms_) {
    Exponent inner(e.begin() + first, e.begin() + first + count);
    std::copy(e.begin(), e.begin() + first, rest.begin());
    std::copy(e.begin() + first + count, e.end(), rest.begin() + first);
    out.try_emplace(inner, Polynomial(dim_ - count)).first->second.add_term(rest, c);
  }
  return out;
}

Polynomial Polynomial::embed(std::size_t new_dim, std::size_t offset) const {
  if (offset + dim_ > new_dim) fail(ErrorKind::InvalidSpec, "embedding exceeds target variable count");
  Polynomial out(new_dim);
  Exponent big(new_dim, 0);
  for (const auto& [e, c] : terms_) {
    std::fill(big.begin(), big.end(), 0u);
    std::copy(e.begin(), e.end(), big.begin() + offset);
    out.add_term(big, c);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) fail(ErrorKind::InvalidSpec, "adding polynomials with different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.dim_ != dim_) fail(ErrorKind::InvalidSpec, "subtracting polynomials with different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_) fail(ErrorKind::InvalidSpec, "multiplying polynomials with different variable counts");
  Polynomial out(a.dim_);
  Exponent e(a.dim_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

// ---------------------------------------------------------------------------
// BooleanFormula

BooleanFormula BooleanFormula::atom(std::size_t j) {
  if (j == 0) fail(ErrorKind::InvalidSpec, "atom indices are 1-based");
  return BooleanFormula(std::make_shared<const Node>(Node{Op::Atom, j, {}}));
}

BooleanFormula BooleanFormula::all_of(std::vector<BooleanFormula> children) {
  return BooleanFormula(std::make_shared<const Node>(Node{Op::And, 0, std::move(children)}));
}

BooleanFormula BooleanFormula::any_of(std::vector<BooleanFormula> children) {
  return BooleanFormula(std::make_shared<const Node>(Node{Op::Or, 0, std::move(children)}));
}

BooleanFormula BooleanFormula::negation(BooleanFormula child) {
  return BooleanFormula(std::make_shared<const Node>(Node{Op::Not, 0, {std::move(child)}}));
}

BooleanFormula::Op BooleanFormula::op() const { return node_->op; }
std::size_t BooleanFormula::atom_index() const { return node_->atom; }
const std::vector<BooleanFormula>& BooleanFormula::children() const { return node_->children; }

std::size_t BooleanFormula::max_atom() const {
  if (node_->op == Op::Atom) return node_->atom;
  std::size_t best = 0;
  for (const auto& c : node_->children) best = std::max(best, c.max_atom());
  return best;
}

std::size_t BooleanFormula::min_atom() const {
  if (node_->op == Op::Atom) return node_->atom;
  std::size_t best = static_cast<std::size_t>(-1);
  for (const auto& c : node_->children) best = std::min(best, c.min_atom());
  return best;
}

BooleanFormula BooleanFormula::shift_atoms(std::size_t offset) const {
  if (node_->op == Op::Atom) return atom(node_->atom + offset);
  std::vector<BooleanFormula> kids;
  kids.reserve(node_->children.size());
  for (const auto& c : node_->children) kids.push_back(c.shift_atoms(offset));
  return BooleanFormula(std::make_shared<const Node>(Node{node_->op, 0, std::move(kids)}));
}

std::string BooleanFormula::to_prefix() const {
  switch (node_->op) {
    case Op::Atom:
      return "(atom " + std::to_string(node_->atom) + ")";
    case Op::Not:
      return "(not " + node_->children.front().to_prefix() + ")";
    case Op::And:
    case Op::Or: {
      std::string s = node_->op == Op::And ? "(and" : "(or";
      for (const auto& c : node_->children) s += " " + c.to_prefix();
      return s + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Relations

void validate_relation(const RelationSpec& rel) {
  if (rel.arity == 0) fail(ErrorKind::InvalidSpec, "relation arity must be at least 1");
  if (rel.dim == 0) fail(ErrorKind::InvalidSpec, "relation dimension must be at least 1");
  if (rel.declared_D == 0) fail(ErrorKind::InvalidSpec, "declared degree must be at least 1");
  if (rel.polys.empty()) fail(ErrorKind::InvalidSpec, "relation has no polynomials");
  for (std::size_t j = 0; j < rel.polys.size(); ++j)
    if (rel.polys[j].dim() != rel.arity * rel.dim)
      fail(ErrorKind::InvalidSpec, "f" + std::to_string(j + 1) + " has " + std::to_string(rel.polys[j].dim()) +
                                       " variables, expected " + std::to_string(rel.arity * rel.dim));
  if (rel.formula.min_atom() == 0 || rel.formula.max_atom() > rel.polys.size())
    fail(ErrorKind::InvalidSpec, "formula references atom " + std::to_string(rel.formula.max_atom()) + " but t = " +
                                     std::to_string(rel.polys.size()));
}

Complexity verify_complexity(const RelationSpec& rel) {
  validate_relation(rel);
  if (rel.polys.size() != rel.declared_t)
    fail(ErrorKind::InvalidSpec, "relation has " + std::to_string(rel.polys.size()) + " polynomials but declares t = " +
                                     std::to_string(rel.declared_t));
  unsigned D = 0;
  for (std::size_t j = 0; j < rel.polys.size(); ++j)
    for (std::size_t b = 0; b < rel.arity; ++b) {
      unsigned deg = rel.polys[j].degree_in(b * rel.dim, rel.dim);
      if (deg > rel.declared_D)
        fail(ErrorKind::InvalidSpec, "f" + std::to_string(j + 1) + " has degree " + std::to_string(deg) +
                                         " in block " + std::to_string(b + 1) + ", above declared D = " +
                                         std::to_string(rel.declared_D));
      D = std::max(D, deg);
    }
  return {rel.polys.size(), D};
}

bool eval_relation(const RelationSpec& rel, std::span<const Point* const> tuple) {
  if (tuple.size() != rel.arity)
    fail(ErrorKind::InvalidSpec, "tuple has " + std::to_string(tuple.size()) + " points, relation arity is " +
                                     std::to_string(rel.arity));
  return rel.formula.eval([&](std::size_t j) { return sign(rel.polys[j - 1].eval_blocks(tuple, rel.dim)) >= 0; });
}

bool eval_relation(const RelationSpec& rel, std::span<const Point> tuple) {
  std::vector<const Point*> ptrs;
  ptrs.reserve(tuple.size());
  for (const auto& p : tuple) ptrs.push_back(&p);
  return eval_relation(rel, std::span<const Point* const>(ptrs));
}

RelationSpec negate_relation(const RelationSpec& rel) {
  RelationSpec out = rel;
  out.formula = BooleanFormula::negation(rel.formula);
  return out;
}

namespace {

RelationSpec constant_relation(std::size_t arity, std::size_t dim, int value) {
  RelationSpec r;
  r.arity = arity;
  r.dim = dim;
  r.polys.push_back(Polynomial::constant(arity * dim, Rational(value)));
  r.formula = BooleanFormula::atom(1);
  r.declared_t = 1;
  r.declared_D = 1;
  return r;
}

}  // namespace

RelationSpec complete_relation(std::size_t arity, std::size_t dim) { return constant_relation(arity, dim, 1); }
RelationSpec empty_relation(std::size_t arity, std::size_t dim) { return constant_relation(arity, dim, -1); }

// ---------------------------------------------------------------------------
// Veronese lifting

std::size_t veronese_dim(std::size_t d, unsigned D) {
  if (d == 0 || D == 0) fail(ErrorKind::InvalidSpec, "veronese_dim needs d >= 1 and D >= 1");
  return binomial(static_cast<unsigned>(d + D), static_cast<unsigned>(d)).get_ui() - 1;
}

namespace {

struct MonomialTable {
  std::vector<Exponent> list;
  std::map<Exponent, std::size_t> index;
};

void exponents_of_degree(std::size_t d, unsigned deg, Exponent& cur, std::size_t pos, std::vector<Exponent>& out) {
  if (pos + 1 == d) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  // Descending lexicographic: larger leading exponents first.
  for (unsigned a = deg + 1; a-- > 0;) {
    cur[pos] = a;
    exponents_of_degree(d, deg - a, cur, pos + 1, out);
  }
}

const MonomialTable& monomial_table(std::size_t d, unsigned D) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, unsigned>, MonomialTable> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({d, D});
  if (inserted) {
    Exponent cur(d, 0);
    for (unsigned deg = 1; deg <= D; ++deg) exponents_of_degree(d, deg, cur, 0, it->second.list);
    for (std::size_t i = 0; i < it->second.list.size(); ++i) it->second.index.emplace(it->second.list[i], i);
  }
  return it->second;
}

}  // namespace

const std::vector<Exponent>& monomial_exponents(std::size_t d, unsigned D) {
  if (d == 0 || D == 0) fail(ErrorKind::InvalidSpec, "monomial_exponents needs d >= 1 and D >= 1");
  return monomial_table(d, D).list;
}

Point lift_point(const Point& x, unsigned D) {
  const auto& monos = monomial_exponents(x.size(), D);
  Point y;
  y.reserve(monos.size());
  for (const auto& e : monos) {
    Rational v(1);
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) v *= x[i];
    y.push_back(std::move(v));
  }
  return y;
}

bool LiftedHyperplane::degenerate() const {
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) return false;
  return true;
}

Rational LiftedHyperplane::value(std::span<const Rational> y) const {
  if (y.size() != m()) fail(ErrorKind::InvalidSpec, "hyperplane and point dimensions differ");
  Rational s = coeffs[0];
  for (std::size_t i = 0; i < y.size(); ++i) s += coeffs[i + 1] * y[i];
  return s;
}

LiftedHyperplane linearize(const Polynomial& p, unsigned D) {
  const auto& table = monomial_table(p.dim(), D);
  LiftedHyperplane h;
  h.coeffs.assign(table.list.size() + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) {
    if (std::all_of(e.begin(), e.end(), [](unsigned a) { return a == 0; })) {
      h.coeffs[0] += c;
      continue;
    }
    auto it = table.index.find(e);
    if (it == table.index.end())
      fail(ErrorKind::InvalidSpec, "monomial of degree above D = " + std::to_string(D) + " cannot be linearized");
    h.coeffs[it->second + 1] += c;
  }
  return h;
}

PartialLifter::PartialLifter(const RelationSpec& rel, std::size_t free_block)
    : arity_(rel.arity), dim_(rel.dim), free_block_(free_block), m_(veronese_dim(rel.dim, rel.declared_D)) {
  validate_relation(rel);
  if (free_block >= rel.arity) fail(ErrorKind::InvalidSpec, "free block out of range");
  const auto& table = monomial_table(rel.dim, rel.declared_D);
  for (std::size_t j = 0; j < rel.polys.size(); ++j) {
    std::vector<Piece> pieces;
    for (auto& [alpha, coeff] : rel.polys[j].split_block(free_block * rel.dim, rel.dim)) {
      std::size_t coord = 0;
      if (std::any_of(alpha.begin(), alpha.end(), [](unsigned a) { return a != 0; })) {
        auto it = table.index.find(alpha);
        if (it == table.index.end())
          fail(ErrorKind::InvalidSpec, "f" + std::to_string(j + 1) + " has degree above declared D = " +
                                           std::to_string(rel.declared_D) + " in block " +
                                           std::to_string(free_block + 1));
        coord = it->second + 1;
      }
      pieces.push_back({coord, std::move(coeff)});
    }
    pieces_.push_back(std::move(pieces));
  }
}

std::vector<LiftedHyperplane> PartialLifter::hyperplanes(std::span<const Point* const> fixed) const {
  if (fixed.size() + 1 != arity_)
    fail(ErrorKind::InvalidSpec, "expected " + std::to_string(arity_ - 1) + " fixed points");
  std::vector<LiftedHyperplane> out;
  out.reserve(pieces_.size());
  for (const auto& pieces : pieces_) {
    LiftedHyperplane h;
    h.coeffs.assign(m_ + 1, Rational(0));
    for (const auto& pc : pieces) h.coeffs[pc.coord] += pc.coeff.eval_blocks(fixed, dim_);
    out.push_back(std::move(h));
  }
  return out;
}

Polynomial PartialLifter::substitute_lifted(std::size_t j, std::span<const Rational> y) const {
  if (y.size() != m_) fail(ErrorKind::InvalidSpec, "lifted point has the wrong dimension");
  Polynomial out((arity_ - 1) * dim_);
  for (const auto& pc : pieces_.at(j)) out += pc.coord == 0 ? pc.coeff : pc.coeff * y[pc.coord - 1];
  return out;
}

std::vector<LiftedHyperplane> lift_partial_hyperplanes(const RelationSpec& rel, std::span<const Point* const> fixed,
                                                       std::size_t free_block) {
  return PartialLifter(rel, free_block).hyperplanes(fixed);
}

Polynomial orientation_polynomial(std::size_t d) {
  // det of the (d+1)x(d+1) matrix whose column j is (1, x_j), expanded by Leibniz.
  const std::size_t n = d + 1, vars = d * n;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial det(vars);
  do {
    int parity = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) parity = -parity;
    // Row 0 is all ones; row r >= 1 in column c is coordinate r-1 of point c.
    Exponent e(vars, 0);
    for (std::size_t r = 1; r < n; ++r) e[perm[r] * d + (r - 1)] += 1;
    det.add_term(e, Rational(parity));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

}  // namespace sahr
