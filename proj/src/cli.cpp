#include "duval/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <sstream>

#include "duval/blowup.hpp"
#include "duval/expr.hpp"
#include "duval/lattice.hpp"
#include "duval/normform.hpp"
#include "duval/reduce.hpp"
#include "duval/series.hpp"

namespace duval::cli {

using json = nlohmann::json;
using lattice::DynkinType;

namespace {

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

lattice::IntVec parse_int_vec(const std::string& csv) {
  lattice::IntVec out;
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return;
    out.push_back(std::stoll(cur));
    cur.clear();
  };
  for (char c : csv) {
    if (c == ',') flush();
    else if (!isspace(static_cast<unsigned char>(c))) cur += c;
  }
  flush();
  return out;
}

json scalar_json(const Scalar& s) {
  return json{{"re", rat_to_string(s.re)}, {"im", rat_to_string(s.im)}};
}

json intvec_json(const lattice::IntVec& v) { return json(v); }

json class_json(const lattice::ClassGroup& g, const lattice::ClassElement& e) {
  return json{{"residues", e.residues}, {"order", g.order(e).get_str()}};
}

json trace_json(const blowup::ResolutionTrace& tr) {
  json steps = json::array();
  for (const auto& s : tr.steps) {
    steps.push_back(json{{"chart", std::string(1, blowup::chart_name(s.chart))},
                         {"strict_transform", s.strict_transform},
                         {"point", json::array({scalar_json(s.point[0]), scalar_json(s.point[1])})},
                         {"detected", s.detected}});
  }
  return json{{"steps", steps}, {"verdict", tr.verdict}};
}

Scalar parse_scalar(const std::string& text) {
  poly::Polynomial p = expr::parse_polynomial(text, {"x"});
  if (p.degree() > 0) fail(errc::domain, "expected a constant scalar expression");
  return p.constant_term();
}

blowup::CurveParam parse_curve(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) fail(errc::domain, "curve must have three ';'-separated components");
  auto p1 = expr::parse_polynomial(parts[0], {"t"});
  auto p2 = expr::parse_polynomial(parts[1], {"t"});
  auto p3 = expr::parse_polynomial(parts[2], {"t"});
  return blowup::make_curve(p1, p2, p3);
}

struct App {
  CLI::App app{"computational toolkit for rational double points"};
  json result;

  // lattice
  std::string type_str;
  bool want_matrix = false, want_class_group = false;
  int ej = 0;
  // reduce / multiplicity
  std::string s_str;
  bool oracle = false;
  std::int64_t bound = 20;
  // series commands
  std::string f_str, g_str, u_str, b_str, a0_str = "1";
  std::string vars_str = "x,y,z";
  int precision = 12;
  long root_n = 2;
  int cong_k = 1;
  int dn_a = 2, dn_s = 3, dn_t = 4;
  int max_index = 0;  // 0 = per-command default
  // blowup / track
  std::string chart_str = "Z", curve_str, surface_str;
  bool singular_points = false, want_trace = false;

  App() {
    app.require_subcommand(1);

    auto* lat = app.add_subcommand("lattice", "intersection matrix, class group, e_j classes");
    lat->add_option("--type", type_str, "Dynkin type, e.g. A3, D6, E8")->required();
    lat->add_flag("--matrix", want_matrix, "emit the intersection matrix");
    lat->add_flag("--class-group", want_class_group, "emit the class group");
    lat->add_option("--ej", ej, "emit the class of the j-th exceptional curve");
    lat->callback([this] { run_lattice(); });

    auto* fc = app.add_subcommand("fundcycle", "fundamental cycle by Laufer iteration");
    fc->add_option("--type", type_str)->required();
    fc->callback([this] { run_fundcycle(); });

    auto* red = app.add_subcommand("reduce", "reduce an intersection profile to an admissible unit");
    red->add_option("--type", type_str)->required();
    red->add_option("--s", s_str, "comma-separated intersection profile")->required();
    red->add_flag("--oracle", oracle, "also run the brute-force search");
    red->add_option("--bound", bound, "coefficient bound for the oracle (default 20)");
    red->callback([this] { run_reduce(); });

    auto* mult = app.add_subcommand("multiplicity", "sum a_i s_i against the fundamental cycle");
    mult->add_option("--type", type_str)->required();
    mult->add_option("--s", s_str)->required();
    mult->callback([this] { run_multiplicity(); });

    auto* root = app.add_subcommand("root", "Hensel n-th root of a unit series");
    root->add_option("--u", u_str, "unit series")->required();
    root->add_option("--n", root_n, "root exponent");
    root->add_option("--a0", a0_str, "scalar initial approximation");
    root->add_option("--k", cong_k, "congruence level");
    root->add_option("--vars", vars_str);
    root->add_option("--precision", precision);
    root->callback([this] { run_root(); });

    auto* ruiz = app.add_subcommand("ruiz", "Ruiz sufficient criterion: f - g in m*J_f^2");
    ruiz->add_option("--f", f_str)->required();
    ruiz->add_option("--g", g_str)->required();
    ruiz->add_option("--vars", vars_str);
    ruiz->add_option("--precision", precision);
    ruiz->callback([this] { run_ruiz(); });

    auto* dn = app.add_subcommand("dnen", "normal form for y^a z + z^s - b y^t");
    dn->add_option("--a", dn_a)->required();
    dn->add_option("--s", dn_s)->required();
    dn->add_option("--t", dn_t)->required();
    dn->add_option("--b", b_str, "unit series in y, z")->required();
    dn->add_option("--precision", precision);
    dn->callback([this] { run_dnen(); });

    auto* cls = app.add_subcommand("classify", "ADE recognition of a hypersurface germ");
    cls->add_option("--f", f_str)->required();
    cls->add_option("--max-index", max_index);
    cls->add_option("--precision", precision, "series precision (default max(12, max-index + 2))");
    cls->callback([this] { run_classify(); });

    auto* bl = app.add_subcommand("blowup", "blow-up chart of a surface germ");
    bl->add_option("--f", f_str)->required();
    bl->add_option("--chart", chart_str, "X, Y or Z");
    bl->add_option("--curve", curve_str, "p1;p2;p3 in t: also transform this curve");
    bl->add_flag("--singular-points", singular_points);
    bl->add_option("--max-index", max_index);
    bl->callback([this] { run_blowup(); });

    auto* trk = app.add_subcommand("track", "track a curve class through the resolution");
    trk->add_option("--surface", surface_str)->required();
    trk->add_option("--curve", curve_str, "p1;p2;p3 in t")->required();
    trk->add_option("--max-index", max_index, "maximum recognizable index (default 24)");
    trk->add_flag("--trace", want_trace, "emit the full resolution trace");
    trk->callback([this] { run_track(); });
  }

  void run_lattice() {
    DynkinType t = DynkinType::parse(type_str);
    result["type"] = t.name();
    bool any = want_matrix || want_class_group || ej > 0;
    if (want_matrix || !any) {
      auto lat = lattice::intersection_matrix(t);
      json rows = json::array();
      for (const auto& row : lat.matrix) rows.push_back(intvec_json(row));
      result["matrix"] = rows;
    }
    if (want_class_group || !any) {
      auto g = lattice::class_group(t);
      json factors = json::array();
      for (const auto& d : g.invariant_factors) factors.push_back(d.get_str());
      result["invariant_factors"] = factors;
      json proj = json::array();
      for (const auto& row : g.projection) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.get_str());
        proj.push_back(r);
      }
      result["projection"] = proj;
    }
    if (ej > 0) {
      auto g = lattice::class_group(t);
      result["ej"] = class_json(g, lattice::ej_class(t, ej));
    }
  }

  void run_fundcycle() {
    DynkinType t = DynkinType::parse(type_str);
    auto xi = lattice::fundamental_cycle(t);
    result["type"] = t.name();
    result["coeffs"] = intvec_json(xi.coeffs);
    json adm = json::array();
    for (int i : lattice::admissible_indices(t)) adm.push_back(i);
    result["admissible"] = adm;
  }

  void run_reduce() {
    DynkinType t = DynkinType::parse(type_str);
    lattice::IntersectionVector s{parse_int_vec(s_str)};
    auto r = reduce::reduce_to_admissible(t, s);
    auto g = lattice::class_group(t);
    result["type"] = t.name();
    result["g"] = intvec_json(r.g.coeffs);
    result["residual"] = intvec_json(r.residual.s);
    result["class"] = class_json(g, lattice::class_of(t, s));
    result["verified"] = reduce::verify_reduction(t, s, r);
    if (oracle) {
      auto o = reduce::brute_force_reduce(t, s, bound);
      if (o) {
        result["oracle"] = json{{"found", true},
                                {"g", intvec_json(o->g.coeffs)},
                                {"residual", intvec_json(o->residual.s)}};
      } else {
        result["oracle"] = json{{"found", false}};
      }
    }
  }

  void run_multiplicity() {
    DynkinType t = DynkinType::parse(type_str);
    lattice::IntersectionVector s{parse_int_vec(s_str)};
    result["type"] = t.name();
    result["multiplicity"] = lattice::multiplicity(t, s).get_str();
  }

  void run_root() {
    auto vars = split_names(vars_str);
    auto u = expr::parse_series(u_str, vars, precision);
    Scalar a0 = parse_scalar(a0_str);
    auto a = series::nth_root_of_unit(u, root_n, a0, cong_k);
    result["root"] = expr::to_string(a);
    result["precision"] = precision;
  }

  void run_ruiz() {
    auto vars = split_names(vars_str);
    auto f = expr::parse_series(f_str, vars, precision);
    auto g = expr::parse_series(g_str, vars, precision);
    result["equivalent"] = series::ruiz_equivalent(f, g);
    result["precision"] = precision;
  }

  void run_dnen() {
    auto b = expr::parse_series(b_str, {"y", "z"}, precision);
    auto r = normform::dnen_normalize(dn_a, dn_s, dn_t, b);
    result["Y"] = expr::to_string(r.forward.components[0]);
    result["Z"] = expr::to_string(r.forward.components[1]);
    result["inverse_y"] = expr::to_string(r.inverse.components[0]);
    result["inverse_z"] = expr::to_string(r.inverse.components[1]);
    result["weighted_sweep"] = r.weighted_sweep_used;
    json steps = json::array();
    for (const auto& st : r.steps) {
      steps.push_back(json{{"k", st.k},
                           {"b", expr::to_string(st.b)},
                           {"v", expr::to_string(st.v)},
                           {"w", expr::to_string(st.w)}});
    }
    result["steps"] = steps;
    result["verified"] = true;  // dnen_normalize certifies by substitution
    result["precision"] = precision;
  }

  void run_classify() {
    int mi = max_index > 0 ? max_index : 10;
    int prec = precision == 12 ? std::max(12, mi + 2) : precision;
    auto f = expr::parse_series(f_str, {"x", "y", "z"}, prec);
    auto t = normform::ade_classify(f, mi);
    result["type"] = t.name();
  }

  void run_blowup() {
    auto f = expr::parse_polynomial(f_str, {"x", "y", "z"});
    auto chart = blowup::chart_parse(chart_str);
    auto s = blowup::make_surface(f);
    auto st = blowup::blow_up_surface(s, chart);
    result["chart"] = std::string(1, blowup::chart_name(chart));
    result["strict_transform"] = expr::to_string(st.f);
    if (!curve_str.empty()) {
      auto c = parse_curve(curve_str);
      auto ct = blowup::blow_up_curve(c, chart);
      result["curve"] = json::array(
          {expr::to_string(ct.p[0]), expr::to_string(ct.p[1]), expr::to_string(ct.p[2])});
    }
    if (singular_points) {
      int mi = max_index > 0 ? max_index : 10;
      json pts = json::array();
      for (const auto& p : blowup::singular_points_on_exceptional(st, chart, mi)) {
        pts.push_back(json{{"at", json::array({scalar_json(p.at[0]), scalar_json(p.at[1])})},
                           {"type", p.type}});
      }
      result["singular_points"] = pts;
    }
  }

  void run_track() {
    auto f = expr::parse_polynomial(surface_str, {"x", "y", "z"});
    auto s = blowup::make_surface(f);
    auto c = parse_curve(curve_str);
    int mi = max_index > 0 ? max_index : 24;
    auto out = blowup::track_class(s, c, mi);
    result["type"] = out.type.name();
    json idx = json::array();
    for (int i : out.indices) idx.push_back(i);
    result["indices"] = idx;
    auto g = lattice::class_group(out.type);
    json classes = json::array();
    for (const auto& cl : out.classes) classes.push_back(class_json(g, cl));
    result["classes"] = classes;
    result["order"] = out.class_order.get_str();
    result["conjugate_pair"] = out.indices.size() > 1;
    result["verdict"] = out.trace.verdict;
    if (want_trace) result["trace"] = trace_json(out.trace);
  }
};

}  // namespace

RunResult run(const std::vector<std::string>& args) {
  App a;
  std::vector<const char*> argv;
  argv.push_back("duval");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    a.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      std::ostringstream help;
      help << a.app.help();
      return RunResult{0, help.str()};
    }
    json err{{"status", "error"},
             {"error", json{{"code", "usage_error"}, {"message", e.what()}}}};
    return RunResult{2, err.dump() + "\n"};
  } catch (const Error& e) {
    json detail{{"code", errc_name(e.code())}, {"message", e.what()}};
    if (e.position()) detail["position"] = *e.position();
    json err{{"status", "error"}, {"error", detail}};
    return RunResult{e.code() == errc::parse ? 2 : 1, err.dump() + "\n"};
  }
  a.result["status"] = "ok";
  return RunResult{0, a.result.dump() + "\n"};
}

}  // namespace duval::cli
