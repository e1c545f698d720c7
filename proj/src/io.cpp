#include "sahr/io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "sahr/error.hpp"

namespace sahr {

namespace {

std::string where(std::string_view source, std::size_t line, std::size_t col) {
  return std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": ";
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

// Character cursor over one line with 1-based column reporting.
class Cursor {
 public:
  Cursor(std::string_view text, std::string_view source, std::size_t line, std::size_t offset = 0)
      : text_(text), source_(source), line_(line), pos_(offset) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::string_view token() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           std::string_view("[](),").find(text_[pos_]) == std::string_view::npos)
      ++pos_;
    if (start == pos_) error("expected a token");
    return text_.substr(start, pos_ - start);
  }
  std::size_t column() const { return pos_ + 1; }
  std::size_t number() {
    skip_ws();
    std::size_t col = column();
    auto t = token();
    std::size_t v = 0;
    for (char c : t) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail_at(col, "expected a non-negative integer, got '" + std::string(t) + "'");
      v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
  }
  Rational rational() {
    skip_ws();
    std::size_t col = column();
    auto t = token();
    try {
      return parse_rational(t);
    } catch (const Error&) {
      fail_at(col, "malformed number '" + std::string(t) + "'");
    }
  }
  [[noreturn]] void error(const std::string& msg) { fail_at(column(), msg); }
  [[noreturn]] void fail_at(std::size_t col, const std::string& msg) {
    fail(ErrorKind::InvalidSpec, where(source_, line_, col) + msg);
  }

 private:
  std::string_view text_, source_;
  std::size_t line_, pos_;
};

BooleanFormula parse_formula(Cursor& c) {
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    std::size_t j = c.number();
    if (j == 0) c.error("atoms are numbered from 1");
    return BooleanFormula::atom(j);
  }
  c.expect('(');
  c.skip_ws();
  std::size_t col = c.column();
  std::string op(c.token());
  BooleanFormula out = BooleanFormula::atom(1);
  if (op == "atom") {
    std::size_t j = c.number();
    if (j == 0) c.error("atoms are numbered from 1");
    out = BooleanFormula::atom(j);
  } else if (op == "not") {
    out = BooleanFormula::negation(parse_formula(c));
  } else if (op == "and" || op == "or") {
    std::vector<BooleanFormula> kids;
    while (c.peek() != ')') {
      if (c.done()) c.error("unterminated formula");
      kids.push_back(parse_formula(c));
    }
    out = op == "and" ? BooleanFormula::all_of(std::move(kids)) : BooleanFormula::any_of(std::move(kids));
  } else {
    c.fail_at(col, "unknown formula operator '" + op + "'");
  }
  c.expect(')');
  return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RelationSpec parse_relation(std::string_view text, std::string_view source) {
  RelationSpec rel;
  bool have_header = false, have_arity = false, have_dim = false, have_degree = false;
  std::optional<BooleanFormula> formula;
  std::size_t formula_line = 0;
  struct Row {
    std::size_t line;
    std::vector<std::pair<Exponent, Rational>> terms;
    std::vector<std::size_t> cols;
  };
  std::vector<Row> rows;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_comment(raw);
    Cursor c(line, source, lineno);
    if (c.done()) continue;
    std::size_t col = c.column();  // done() skipped the indentation
    std::string key(c.token());
    if (!have_header) {
      if (key != "sahr-relation") c.fail_at(col, "expected header 'sahr-relation 1'");
      if (c.number() != 1) c.error("unsupported relation format version");
      have_header = true;
    } else if (key == "arity") {
      rel.arity = c.number();
      have_arity = true;
    } else if (key == "dim") {
      rel.dim = c.number();
      have_dim = true;
    } else if (key == "degree") {
      rel.declared_D = static_cast<unsigned>(c.number());
      have_degree = true;
    } else if (key == "poly") {
      Row row{lineno, {}, {}};
      do {
        c.skip_ws();
        row.cols.push_back(c.column());
        c.expect('[');
        Exponent e;
        if (c.peek() != ']') {
          do e.push_back(static_cast<unsigned>(c.number()));
          while (c.accept(','));
        }
        c.expect(']');
        row.terms.emplace_back(std::move(e), c.rational());
      } while (c.accept(','));
      rows.push_back(std::move(row));
    } else if (key == "formula") {
      formula_line = lineno;
      formula = parse_formula(c);
    } else {
      c.fail_at(col, "unknown key '" + key + "'");
    }
    if (!c.done()) c.error("trailing input");
  }
  if (!have_header) fail(ErrorKind::InvalidSpec, where(source, 1, 1) + "missing 'sahr-relation 1' header");
  if (!have_arity || !have_dim) fail(ErrorKind::InvalidSpec, where(source, lineno, 1) + "arity and dim are required");
  if (rows.empty()) fail(ErrorKind::InvalidSpec, where(source, lineno, 1) + "at least one poly line is required");

  const std::size_t vars = rel.arity * rel.dim;
  for (const auto& row : rows) {
    Polynomial p(vars);
    for (std::size_t i = 0; i < row.terms.size(); ++i) {
      if (row.terms[i].first.size() != vars)
        fail(ErrorKind::InvalidSpec, where(source, row.line, row.cols[i]) + "exponent vector has " +
                                         std::to_string(row.terms[i].first.size()) + " entries, expected " +
                                         std::to_string(vars));
      p.add_term(row.terms[i].first, row.terms[i].second);
    }
    rel.polys.push_back(std::move(p));
  }
  rel.declared_t = rel.polys.size();
  if (formula) {
    if (formula->max_atom() > rel.polys.size())
      fail(ErrorKind::InvalidSpec, where(source, formula_line, 1) + "formula references f" +
                                       std::to_string(formula->max_atom()) + " but only " +
                                       std::to_string(rel.polys.size()) + " polynomials are given");
    rel.formula = *formula;
  } else {
    std::vector<BooleanFormula> atoms;
    for (std::size_t j = 1; j <= rel.polys.size(); ++j) atoms.push_back(BooleanFormula::atom(j));
    rel.formula = rel.polys.size() == 1 ? atoms.front() : BooleanFormula::all_of(std::move(atoms));
  }
  if (!have_degree) {
    unsigned D = 0;
    for (const auto& p : rel.polys)
      for (std::size_t b = 0; b < rel.arity; ++b) D = std::max(D, p.degree_in(b * rel.dim, rel.dim));
    rel.declared_D = D;
  }
  try {
    verify_complexity(rel);
  } catch (const Error& e) {
    fail(ErrorKind::InvalidSpec, std::string(source) + ": " + e.what());
  }
  return rel;
}

RelationSpec parse_relation_file(const std::filesystem::path& path) {
  return parse_relation(read_text_file(path), path.string());
}

std::string format_relation(const RelationSpec& rel) {
  std::ostringstream out;
  out << "sahr-relation 1\narity " << rel.arity << "\ndim " << rel.dim << "\ndegree " << rel.declared_D << "\n";
  for (const auto& p : rel.polys) {
    out << "poly";
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
      out << (first ? " [" : ", [");
      for (std::size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << e[i];
      out << "] " << format_rational(c);
      first = false;
    }
    if (first) {  // zero polynomial
      out << " [";
      for (std::size_t i = 0; i < p.dim(); ++i) out << (i ? "," : "") << 0;
      out << "] 0/1";
    }
    out << "\n";
  }
  out << "formula " << rel.formula.to_prefix() << "\n";
  return out.str();
}

PointConfig parse_points(std::string_view text, std::string_view source) {
  PointConfig P;
  bool labeled = false, unlabeled = false;
  std::size_t first_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = strip_comment(raw);
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start == line.size()) continue;
    std::string label;
    auto colon = line.find(':');
    if (colon != std::string_view::npos) {
      std::string_view l = line.substr(start, colon - start);
      while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.remove_suffix(1);
      if (l.empty()) fail(ErrorKind::ParseError, where(source, lineno, start + 1) + "empty part label");
      label = std::string(l);
      start = colon + 1;
      labeled = true;
    } else {
      unlabeled = true;
    }
    if (labeled && unlabeled)
      fail(ErrorKind::ParseError, where(source, lineno, 1) + "mixing labeled and unlabeled rows");
    Point p;
    std::size_t pos = start;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      std::size_t lead = 0;
      while (lead < field.size() && std::isspace(static_cast<unsigned char>(field[lead]))) ++lead;
      std::string_view trimmed = field.substr(lead);
      while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
      try {
        p.push_back(parse_rational(trimmed));
      } catch (const Error&) {
        fail(ErrorKind::ParseError,
             where(source, lineno, pos + lead + 1) + "malformed coordinate '" + std::string(trimmed) + "'");
      }
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (P.points.empty()) {
      P.dim = p.size();
      first_line = lineno;
    } else if (p.size() != P.dim) {
      fail(ErrorKind::InvalidSpec, where(source, lineno, 1) + "row has " + std::to_string(p.size()) +
                                       " coordinates, line " + std::to_string(first_line) + " has " +
                                       std::to_string(P.dim));
    }
    P.points.push_back(std::move(p));
    if (labeled) P.labels.push_back(std::move(label));
  }
  return P;
}

PointConfig parse_points_file(const std::filesystem::path& path) {
  return parse_points(read_text_file(path), path.string());
}

std::string format_points(const PointConfig& P) {
  std::ostringstream out;
  for (std::size_t i = 0; i < P.points.size(); ++i) {
    if (!P.labels.empty()) out << P.labels[i] << ": ";
    for (std::size_t j = 0; j < P.points[i].size(); ++j) out << (j ? ", " : "") << format_rational(P.points[i][j]);
    out << "\n";
  }
  return out.str();
}

}  // namespace sahr
