#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sahr/rational.hpp"

namespace sahr {

using Exponent = std::vector<unsigned>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a map keyed by exponent vector; zero coefficients are
/// never stored, so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  explicit Polynomial(std::size_t dim = 0) : dim_(dim) {}

  static Polynomial constant(std::size_t dim, const Rational& c);
  static Polynomial variable(std::size_t dim, std::size_t index);

  std::size_t dim() const { return dim_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * x^e, merging with an existing term.
  void add_term(const Exponent& e, const Rational& c);

  unsigned total_degree() const;
  /// Degree in the variables [first, first + count) with the others treated as constants.
  unsigned degree_in(std::size_t first, std::size_t count) const;

  Rational eval(std::span<const Rational> x) const;
  /// Evaluates with variable block i taken from blocks[i]; each block has `block_dim` coordinates.
  Rational eval_blocks(std::span<const Point* const> blocks, std::size_t block_dim) const;

  /// Fixes the variables [first, first + values.size()) and removes them.
  Polynomial substitute(std::size_t first, std::span<const Rational> values) const;

  /// Groups terms by their exponent restricted to [first, first + count). Each
  /// coefficient polynomial lives in the remaining dim - count variables.
  std::map<Exponent, Polynomial> split_block(std::size_t first, std::size_t count) const;

  /// Embeds into `new_dim` variables, mapping variable i to offset + i.
  Polynomial embed(std::size_t new_dim, std::size_t offset) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

 private:
  std::size_t dim_;
  std::map<Exponent, Rational> terms_;
};

/// Boolean combination of atoms "f_j >= 0" (j is 1-based).
class BooleanFormula {
 public:
  enum class Op { Atom, And, Or, Not };

  static BooleanFormula atom(std::size_t j);
  static BooleanFormula all_of(std::vector<BooleanFormula> children);
  static BooleanFormula any_of(std::vector<BooleanFormula> children);
  static BooleanFormula negation(BooleanFormula child);

  Op op() const;
  std::size_t atom_index() const;
  const std::vector<BooleanFormula>& children() const;

  std::size_t max_atom() const;
  std::size_t min_atom() const;
  /// Renumbers atom j to j + offset.
  BooleanFormula shift_atoms(std::size_t offset) const;

  /// Short-circuit evaluation; `atom_value(j)` is queried only when needed.
  template <class AtomFn>
  bool eval(AtomFn&& atom_value) const;

  /// Prefix s-expression, e.g. "(and (atom 1) (not (atom 2)))".
  std::string to_prefix() const;

 private:
  struct Node {
    Op op;
    std::size_t atom = 0;
    std::vector<BooleanFormula> children;
  };
  explicit BooleanFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

template <class AtomFn>
bool BooleanFormula::eval(AtomFn&& atom_value) const {
  switch (node_->op) {
    case Op::Atom:
      return atom_value(node_->atom);
    case Op::Not:
      return !node_->children.front().eval(atom_value);
    case Op::And:
      for (const auto& c : node_->children)
        if (!c.eval(atom_value)) return false;
      return true;
    case Op::Or:
      for (const auto& c : node_->children)
        if (c.eval(atom_value)) return true;
      return false;
  }
  return false;
}

/// A k-ary semi-algebraic relation on points of R^d.
///
/// Polynomial variables are laid out block by block: variables
/// [i*dim, (i+1)*dim) hold the coordinates of the i-th point of the tuple.
struct RelationSpec {
  std::size_t arity = 0;
  std::size_t dim = 0;
  std::vector<Polynomial> polys;
  BooleanFormula formula = BooleanFormula::atom(1);
  std::size_t declared_t = 0;
  unsigned declared_D = 0;
};

struct Complexity {
  std::size_t t;
  unsigned D;
  friend bool operator==(const Complexity&, const Complexity&) = default;
};

/// Checks the structural invariants (variable counts, atom indices) and throws InvalidSpec.
void validate_relation(const RelationSpec& rel);

Complexity verify_complexity(const RelationSpec& rel);

/// Closed semantics: an atom holds when its polynomial is >= 0.
bool eval_relation(const RelationSpec& rel, std::span<const Point* const> tuple);
bool eval_relation(const RelationSpec& rel, std::span<const Point> tuple);

RelationSpec negate_relation(const RelationSpec& rel);

/// A relation that holds on every tuple (polynomial 1, single atom).
RelationSpec complete_relation(std::size_t arity, std::size_t dim);
/// A relation that holds on no tuple.
RelationSpec empty_relation(std::size_t arity, std::size_t dim);

// ---------------------------------------------------------------------------
// Veronese lifting

/// m = C(d + D, d) - 1.
std::size_t veronese_dim(std::size_t d, unsigned D);

/// All exponent vectors with 1 <= |alpha| <= D in graded-lex order
/// (by degree, then lexicographically descending within a degree).
const std::vector<Exponent>& monomial_exponents(std::size_t d, unsigned D);

Point lift_point(const Point& x, unsigned D);

/// Linear form coeffs[0] + sum_i coeffs[i] * y_i over lifted coordinates.
struct LiftedHyperplane {
  std::vector<Rational> coeffs;

  std::size_t m() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  /// True when the linear part vanishes: the form has constant sign.
  bool degenerate() const;
  Rational value(std::span<const Rational> y) const;
};

/// Writes a d-variate polynomial of degree <= D as a hyperplane in R^m.
LiftedHyperplane linearize(const Polynomial& p, unsigned D);

/// Splits every f_j of a relation along one block so that hyperplanes for many
/// choices of the fixed points can be produced without re-expanding.
class PartialLifter {
 public:
  PartialLifter(const RelationSpec& rel, std::size_t free_block);

  std::size_t m() const { return m_; }
  std::size_t free_block() const { return free_block_; }

  /// `fixed` holds the k-1 points of the other blocks in block order.
  std::vector<LiftedHyperplane> hyperplanes(std::span<const Point* const> fixed) const;

  /// f_j with phi(x_free) replaced by the lifted point y; the result lives in
  /// the (k-1)*d variables of the remaining blocks.
  Polynomial substitute_lifted(std::size_t j, std::span<const Rational> y) const;

 private:
  struct Piece {
    std::size_t coord;  // 0 for the constant term, else 1 + lifted coordinate
    Polynomial coeff;
  };
  std::size_t arity_, dim_, free_block_, m_;
  std::vector<std::vector<Piece>> pieces_;
};

/// Substitutes `fixed` (k-1 points, in block order) into every block except
/// `free_block` (0-based) and linearizes each polynomial over phi(free point).
std::vector<LiftedHyperplane> lift_partial_hyperplanes(const RelationSpec& rel,
                                                       std::span<const Point* const> fixed,
                                                       std::size_t free_block);

/// The (d^2+d)-variate orientation polynomial det[[1..1],[x_1 .. x_{d+1}]].
Polynomial orientation_polynomial(std::size_t d);

}  // namespace sahr
