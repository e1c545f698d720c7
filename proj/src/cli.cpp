#include "sahr/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "sahr/applications.hpp"
#include "sahr/io.hpp"
#include "sahr/oracles.hpp"
#include "sahr/regularity.hpp"
#include "sahr/report.hpp"
#include "sahr/testing.hpp"

namespace sahr {

namespace {

struct Args {
  RunConfig cfg;
  std::string epsilon, alpha, cutting_mode = "sampled";
  std::string rel, points, out, summary, plugin, mode = "equitable", check, partition, q;
  std::optional<std::size_t> r;
  std::size_t lift_block = 0;
  bool no_clamp = false;
};

void finish_config(Args& a, bool eps_required_open_unit = true) {
  if (!a.epsilon.empty()) {
    a.cfg.epsilon = parse_rational(a.epsilon);
    if (eps_required_open_unit && (a.cfg.epsilon <= 0 || a.cfg.epsilon >= 1))
      fail(ErrorKind::InvalidSpec, "--epsilon must lie in (0, 1)");
  }
  if (!a.alpha.empty()) {
    a.cfg.alpha = parse_rational(a.alpha);
    if (a.cfg.alpha <= 0 || a.cfg.alpha >= Rational(1, 2)) fail(ErrorKind::InvalidSpec, "--alpha must lie in (0, 1/2)");
  }
  a.cfg.cutting_mode = parse_cutting_mode(a.cutting_mode);
  if (a.cfg.cap_product == 0 || a.cfg.exact_cap == 0) fail(ErrorKind::InvalidSpec, "caps must be positive");
  if (a.cfg.trials == 0) fail(ErrorKind::InvalidSpec, "--trials must be positive");
}

RelationSpec need_rel(const Args& a) {
  if (a.rel.empty()) fail(ErrorKind::InvalidSpec, "--rel is required");
  return parse_relation_file(a.rel);
}

PointConfig need_points(const Args& a) {
  if (a.points.empty()) fail(ErrorKind::InvalidSpec, "--points is required");
  return parse_points_file(a.points);
}

void check_dims(const RelationSpec& rel, const PointConfig& P) {
  if (!P.points.empty() && P.dim != rel.dim)
    fail(ErrorKind::InvalidSpec, "points have dimension " + std::to_string(P.dim) + ", relation expects " +
                                     std::to_string(rel.dim));
}

// Labeled input gives the parts; unlabeled input is reused for every block.
std::vector<PointConfig> parts_for(const PointConfig& P, std::size_t k) {
  auto parts = P.parts();
  if (parts.size() == 1 && k > 1) parts.assign(k, parts.front());
  if (parts.size() != k)
    fail(ErrorKind::InvalidSpec, "points file has " + std::to_string(parts.size()) + " parts, expected " +
                                     std::to_string(k));
  return parts;
}

DensityOptions density_options(const RunConfig& c) {
  DensityOptions o;
  o.mode = c.cutting_mode;
  o.cap_product = c.cap_product;
  return o;
}

Point parse_point_arg(const std::string& text) {
  auto P = parse_points(text, "--q");
  if (P.points.size() != 1) fail(ErrorKind::ParseError, "--q expects one point");
  return P.points.front();
}

Json config_json(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["epsilon"] = to_json(c.epsilon);
  j["alpha"] = to_json(c.alpha);
  j["c_exp"] = c.c_exp;
  j["C_exp"] = c.C_exp;
  j["cap_product"] = c.cap_product;
  j["cutting_mode"] = to_string(c.cutting_mode);
  j["trials"] = c.trials;
  return j;
}

Json cmd_lift(const Args& a) {
  auto rel = need_rel(a);
  auto P = need_points(a);
  check_dims(rel, P);
  auto cx = verify_complexity(rel);
  Json rep = new_report("lift");
  rep["d"] = rel.dim;
  rep["D"] = cx.D;
  rep["t"] = cx.t;
  rep["m"] = veronese_dim(rel.dim, cx.D);
  Json lifted = Json::array();
  for (const auto& p : P.points) lifted.push_back(to_json(lift_point(p, cx.D)));
  rep["lifted"] = lifted;

  // Sign identity over every tuple with the chosen free block (arity 2 only,
  // larger arities would enumerate n^k tuples).
  if (rel.arity == 2 && P.size() <= 2000) {
    const std::size_t free = a.lift_block;
    if (free >= rel.arity) fail(ErrorKind::InvalidSpec, "--block out of range");
    PartialLifter lifter(rel, free);
    std::uint64_t checks = 0, mismatches = 0;
    for (const auto& fixed : P.points) {
      const Point* f[1] = {&fixed};
      auto hs = lifter.hyperplanes(f);
      for (const auto& x : P.points) {
        auto y = lift_point(x, cx.D);
        std::vector<const Point*> tuple(2);
        tuple[free] = &x;
        tuple[1 - free] = &fixed;
        for (std::size_t j = 0; j < rel.polys.size(); ++j) {
          ++checks;
          if (sign(rel.polys[j].eval_blocks(tuple, rel.dim)) != side(hs[j], y)) ++mismatches;
        }
      }
    }
    rep["sign_checks"] = checks;
    rep["sign_mismatches"] = mismatches;
  }
  return rep;
}

Json cmd_cut(const Args& a) {
  auto rel = need_rel(a);
  auto P = need_points(a);
  check_dims(rel, P);
  if (rel.arity != 2) fail(ErrorKind::InvalidSpec, "cut builds hyperplanes from a binary relation");
  auto cx = verify_complexity(rel);
  PartialLifter lifter(rel, 0);
  std::vector<LiftedHyperplane> hs;
  for (const auto& q : P.points) {
    const Point* f[1] = {&q};
    for (auto& h : lifter.hyperplanes(f)) hs.push_back(std::move(h));
  }
  std::vector<Point> lifted;
  for (const auto& p : P.points) lifted.push_back(lift_point(p, cx.D));
  const std::size_t m = lifter.m();
  std::size_t r = a.r.value_or(8);
  auto cut = build_cutting(hs, r, bounding_box(lifted, m, 1), a.cfg.seed, a.cfg.cutting_mode);
  auto check = verify_cutting(cut, hs, lifted);
  Json rep = new_report("cut");
  rep["config"] = config_json(a.cfg);
  rep["m"] = m;
  rep["n"] = hs.size();
  rep["r"] = cut.r;
  rep["verification"] = to_json(check);
  Json cells = Json::array();
  for (std::size_t i = 0; i < cut.cells.size(); ++i) {
    Json c = to_json(cut.cells[i]);
    c["crossing"] = cut.crossing[i];
    cells.push_back(c);
  }
  rep["cells"] = cells;
  if (!check.pass) fail(ErrorKind::BoundUnmet, "cutting failed verification");
  return rep;
}

Json cmd_density(const Args& a) {
  auto rel = need_rel(a);
  auto P = need_points(a);
  check_dims(rel, P);
  auto parts = parts_for(P, rel.arity);
  auto w = find_complete_product(parts, rel, a.cfg.epsilon, a.cfg.seed, density_options(a.cfg));
  Json rep = new_report("density");
  rep["config"] = config_json(a.cfg);
  rep["witness"] = to_json(w);
  rep["complete"] = product_is_complete(rel, parts, w.parts);
  return rep;
}

Json cmd_partition(const Args& a) {
  auto rel = need_rel(a);
  auto P = need_points(a);
  check_dims(rel, P);
  RegularityOptions opt;
  opt.density = density_options(a.cfg);
  Json rep = new_report("partition");
  rep["config"] = config_json(a.cfg);
  rep["mode"] = a.mode;
  if (a.mode == "product") {
    rep["partition"] = to_json(partition_product(P, rel, a.cfg.epsilon, a.cfg.seed, opt));
  } else if (a.mode == "equitable") {
    rep["partition"] = to_json(equitable_partition(P, rel, a.cfg.epsilon, a.cfg.seed, opt));
  } else if (a.mode == "strong") {
    auto s = rel.arity == 2 ? strong_partition_graph(P, rel, a.cfg.epsilon, a.cfg.alpha, a.cfg.seed, opt)
                            : strong_partition_hypergraph(P, rel, a.cfg.epsilon, a.cfg.seed, opt);
    rep["partition"] = to_json(s.partition);
    rep["strong"] = to_json(s);
    rep["strong"].erase("partition");
  } else {
    fail(ErrorKind::InvalidSpec, "--mode must be product, equitable or strong");
  }
  return rep;
}

ApplicationOptions app_options(const RunConfig& c) {
  ApplicationOptions o;
  o.density = density_options(c);
  o.exact_cap = c.exact_cap;
  return o;
}

Json cmd_same_type(const Args& a) {
  auto P = need_points(a);
  auto parts = P.parts();
  auto w = same_type_subsets(parts, a.cfg.seed, app_options(a.cfg));
  Json rep = new_report("same-type");
  rep["config"] = config_json(a.cfg);
  rep["witness"] = to_json(w);
  return rep;
}

Json cmd_tverberg(const Args& a) {
  auto P = need_points(a);
  auto parts = P.parts();
  auto w = tverberg_point(parts, a.cfg.seed, app_options(a.cfg));
  Json rep = new_report("tverberg");
  rep["config"] = config_json(a.cfg);
  rep["witness"] = to_json(w);
  return rep;
}

TesterConfig tester_config(const Args& a) {
  TesterConfig t;
  t.epsilon = a.cfg.epsilon;
  t.c = a.cfg.c_exp;
  t.C = a.cfg.C_exp;
  t.r = a.r;
  t.clamp = !a.no_clamp;
  return t;
}

Json cmd_test_property(const Args& a) {
  auto rel = need_rel(a);
  auto P = need_points(a);
  check_dims(rel, P);
  if (a.plugin.empty()) fail(ErrorKind::InvalidSpec, "--plugin is required");
  auto plugin = make_plugin(a.plugin);
  Instance inst(P, rel);
  auto tc = tester_config(a);
  Json rep = new_report("test-property");
  rep["config"] = config_json(a.cfg);
  rep["plugin"] = plugin.name();
  rep["plugin_kind"] = to_string(plugin.kind());
  std::vector<TesterOutcome> runs;
  auto est = estimate_acceptance(inst, plugin, tc, a.cfg.trials, a.cfg.seed, &runs);
  Json outcomes = Json::array();
  for (std::size_t t = 0; t < runs.size(); ++t) {
    Json j = to_json(runs[t]);
    j["trial"] = t;
    j["seed"] = trial_seed(a.cfg.seed, t);
    outcomes.push_back(j);
  }
  rep["outcomes"] = outcomes;
  rep["summary"] = to_json(est);
  if (!a.summary.empty()) {
    Json sum = new_report("test-property-summary");
    sum["plugin"] = plugin.name();
    sum["config"] = config_json(a.cfg);
    sum["summary"] = to_json(est);
    std::ofstream f(a.summary);
    if (!f) fail(ErrorKind::ParseError, "cannot write " + a.summary);
    f << dump_report(sum);
  }
  return rep;
}

Json cmd_oracle(const Args& a) {
  oracle::OracleReport r;
  r.check = a.check;
  if (a.check == "mass") {
    auto rel = need_rel(a);
    auto P = need_points(a);
    check_dims(rel, P);
    if (a.partition.empty()) fail(ErrorKind::InvalidSpec, "--partition report is required");
    Json prep = parse_report(read_text_file(a.partition));
    auto part = partition_from_json(prep.at("partition"));
    Rational mass = oracle::brute_homogeneity_mass(P, rel, part.classes);
    r.values["bad_mass"] = format_rational(mass);
    r.values["reported_bad_mass"] = format_rational(part.bad_mass);
    r.pass = mass == part.bad_mass;
    if (!r.pass) r.counterexample = "bad mass " + format_rational(mass) + " != reported " + format_rational(part.bad_mass);
  } else if (a.check == "max-product") {
    auto rel = need_rel(a);
    auto P = need_points(a);
    check_dims(rel, P);
    auto parts = parts_for(P, rel.arity);
    auto w = oracle::max_complete_product(parts, rel);
    r.values["product"] = std::to_string(w.product);
    std::string sizes;
    for (std::size_t s : w.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
    r.values["sizes"] = sizes;
  } else if (a.check == "census") {
    auto P = need_points(a);
    auto census = oracle::order_type_census(P.parts());
    for (const auto& [type, count] : census) {
      std::string key;
      for (auto s : type) key += s > 0 ? '+' : s < 0 ? '-' : '0';
      r.values["type " + key] = std::to_string(count);
    }
  } else if (a.check == "forbidden" || a.check == "farness") {
    auto rel = need_rel(a);
    auto P = need_points(a);
    check_dims(rel, P);
    if (a.plugin.empty()) fail(ErrorKind::InvalidSpec, "--plugin is required");
    auto plugin = make_plugin(a.plugin);
    oracle::TupleTable table(P, rel);
    if (a.check == "forbidden") {
      for (const auto& H : plugin.forbidden()) {
        auto emb = oracle::contains_forbidden(P.size(), table.fn(), H, plugin.induced());
        if (!emb) continue;
        r.pass = false;
        std::string img;
        for (std::size_t v : *emb) img += (img.empty() ? "" : ",") + std::to_string(v);
        r.counterexample = H.name + " at vertices " + img;
        break;
      }
      r.values["satisfies"] = r.pass ? "true" : "false";
    } else {
      auto f = oracle::farness_oracle(P.size(), rel.arity, table.fn(), plugin.forbidden(), plugin.induced());
      r.values["fraction"] = format_rational(f.fraction);
      r.values["edits"] = std::to_string(f.edits);
      r.values["exact"] = f.exact ? "true" : "false";
    }
  } else if (a.check == "containment") {
    auto P = need_points(a);
    if (a.q.empty()) fail(ErrorKind::InvalidSpec, "--q is required");
    auto count = oracle::rainbow_containment_count(P.parts(), parse_point_arg(a.q));
    r.values["count"] = std::to_string(count);
  } else {
    fail(ErrorKind::InvalidSpec, "--check must be one of mass, max-product, census, forbidden, farness, containment");
  }
  Json rep = new_report("oracle");
  rep["result"] = to_json(r);
  return rep;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-algebraic hypergraph regularity toolkit", "sahr"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", a.cfg.seed, "random seed");
    s->add_option("--out", a.out, "report path (default: stdout)");
    s->add_option("--cap-product", a.cfg.cap_product, "cap on exhaustive product checks");
    s->add_option("--cutting-mode", a.cutting_mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  };
  auto inputs = [&](CLI::App* s, bool rel) {
    if (rel) s->add_option("--rel", a.rel, "relation file")->required();
    s->add_option("--points", a.points, "points file")->required();
  };

  auto* lift = app.add_subcommand("lift", "Veronese-lift points and check the sign identity");
  common(lift);
  inputs(lift, true);
  lift->add_option("--block", a.lift_block, "free block for the sign check (0-based)");

  auto* cut = app.add_subcommand("cut", "build and verify a cutting of the lifted hyperplanes");
  common(cut);
  inputs(cut, true);
  cut->add_option("--r", a.r, "cutting parameter");

  auto* density = app.add_subcommand("density", "find a homogeneous complete product");
  common(density);
  inputs(density, true);
  density->add_option("--epsilon", a.epsilon, "edge density lower bound");

  auto* partition = app.add_subcommand("partition", "regularity partition");
  common(partition);
  inputs(partition, true);
  partition->add_option("--epsilon", a.epsilon, "regularity parameter");
  partition->add_option("--alpha", a.alpha, "strong mode density threshold");
  partition->add_option("--mode", a.mode, "product, equitable or strong")
      ->check(CLI::IsMember({"product", "equitable", "strong"}));

  auto* same = app.add_subcommand("same-type", "same-type transversal subsets");
  common(same);
  inputs(same, false);
  same->add_option("--exact-cap", a.cfg.exact_cap, "transversals enumerated exactly in the census");

  auto* tv = app.add_subcommand("tverberg", "point in many rainbow simplices");
  common(tv);
  inputs(tv, false);

  auto* tp = app.add_subcommand("test-property", "run a sampling property tester");
  common(tp);
  inputs(tp, true);
  tp->add_option("--plugin", a.plugin, "property plugin")->required();
  tp->add_option("--epsilon", a.epsilon, "farness parameter");
  tp->add_option("--trials", a.cfg.trials, "independent trials");
  tp->add_option("--r", a.r, "override r");
  tp->add_option("--c-exp", a.cfg.c_exp, "exponent c in r = (1/eps)^c");
  tp->add_option("--C-exp", a.cfg.C_exp, "exponent C in the hereditary sample sizes");
  tp->add_flag("--no-clamp", a.no_clamp, "fail instead of clamping the sample to |P|");
  tp->add_option("--summary", a.summary, "summary statistics file");

  auto* orc = app.add_subcommand("oracle", "brute-force reference checks");
  common(orc);
  orc->add_option("--check", a.check, "mass, max-product, census, forbidden, farness or containment")->required();
  orc->add_option("--rel", a.rel, "relation file");
  orc->add_option("--points", a.points, "points file")->required();
  orc->add_option("--partition", a.partition, "partition report (mass)");
  orc->add_option("--plugin", a.plugin, "property plugin (forbidden, farness)");
  orc->add_option("--q", a.q, "query point, comma-separated (containment)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  auto emit = [&](const Json& rep) {
    if (a.out.empty()) {
      out << dump_report(rep);
      return;
    }
    std::ofstream f(a.out);
    if (!f) fail(ErrorKind::ParseError, "cannot write " + a.out);
    f << dump_report(rep);
  };

  try {
    finish_config(a);
    Json rep;
    if (lift->parsed()) rep = cmd_lift(a);
    else if (cut->parsed()) rep = cmd_cut(a);
    else if (density->parsed()) rep = cmd_density(a);
    else if (partition->parsed()) rep = cmd_partition(a);
    else if (same->parsed()) rep = cmd_same_type(a);
    else if (tv->parsed()) rep = cmd_tverberg(a);
    else if (tp->parsed()) rep = cmd_test_property(a);
    else rep = cmd_oracle(a);
    emit(rep);
    return kExitOk;
  } catch (const Error& e) {
    Json rec = error_record(e);
    err << dump_report(rec);
    if (!a.out.empty()) {
      std::ofstream f(a.out);
      if (f) f << dump_report(rec);
    }
    return is_contract_failure(e.kind()) ? kExitContract : kExitInput;
  }
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace sahr
