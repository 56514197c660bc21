#include "orbergman/cli.hpp"

#include "orbergman/bergman.hpp"
#include "orbergman/coeffs.hpp"
#include "orbergman/expansion.hpp"
#include "orbergman/localkernel.hpp"
#include "orbergman/models.hpp"
#include "orbergman/riemannroch.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace orbergman {

namespace {

using nlohmann::json;

struct Options {
  std::string model;
  std::string coeffs;
  std::string coeffs_file;
  std::optional<unsigned> canonical_q;
  std::optional<long> m;
  unsigned check_P = 0;
  std::string krange;
  std::vector<std::string> rho;
  std::vector<std::string> x;
  unsigned order = 1;
  std::string gamma;
  std::string out_dir;
  std::string format = "json";
  // localcheck
  std::string check = "reproducing";
  long alpha = 1;
  double radius = 3.0;
  std::vector<long> ks;
  unsigned s = 1;
  long u = 0;
  long v = 1;
  double grid_max = 2.0;
  long grid_points = 401;
};

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::pair<long, long> parse_krange(const std::string& text, std::pair<long, long> fallback) {
  if (text.empty()) return fallback;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--krange must be a:b");
  try {
    std::size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const long lo = std::stol(a, &used_a), hi = std::stol(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("");
    if (lo < 1 || hi < lo) throw InputError("--krange needs 1 <= a <= b");
    return {lo, hi};
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("--krange must be a:b with integers a, b");
  }
}

double parse_real(const std::string& text, const std::string& what) {
  try {
    return to_double(parse_rational(text));
  } catch (const std::exception&) {
    throw InputError("invalid number for " + what + ": '" + text + "'");
  }
}

Model resolve_model(const Options& o) {
  if (o.model.empty()) throw InputError("--model is required");
  return parse_model_descriptor(o.model);
}

CoefficientSequence resolve_coeffs(const Options& o, std::optional<long> m, bool required) {
  const int sources = !o.coeffs.empty() + !o.coeffs_file.empty() + o.canonical_q.has_value();
  if (sources > 1) throw InputError("give only one of --coeffs, --coeffs-file, --canonical-q");
  if (!o.coeffs.empty()) {
    try {
      return coefficients_from_json(json::parse(o.coeffs));
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed --coeffs JSON: ") + e.what());
    }
  }
  if (!o.coeffs_file.empty()) {
    std::ifstream in(o.coeffs_file);
    if (!in) throw InputError("cannot read coefficient file '" + o.coeffs_file + "'");
    try {
      return coefficients_from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed coefficient file: ") + e.what());
    }
  }
  if (o.canonical_q) {
    if (!m) throw InputError("--canonical-q needs --m or --model");
    return canonical_sequence(*m, *o.canonical_q);
  }
  if (required) throw InputError("a coefficient source is required (--coeffs, --coeffs-file or --canonical-q)");
  return CoefficientSequence::from_integers({{0, 1}});
}

std::vector<PointSpec> resolve_points(const Options& o, const Model& model, bool default_point) {
  std::vector<PointSpec> points;
  if (std::holds_alternative<FootballModel>(model)) {
    if (!o.x.empty()) throw InputError("--x applies to flat models; use --rho on the football");
    for (const auto& r : o.rho) {
      if (r == "inf") {
        points.emplace_back(FootballPoint::infinity());
        continue;
      }
      Rational value;
      try {
        value = parse_rational(r);
      } catch (const std::exception&) {
        throw InputError("invalid --rho '" + r + "'");
      }
      if (value < 0) throw InputError("--rho must be >= 0");
      points.emplace_back(FootballPoint::exact(value));
    }
    if (points.empty() && default_point) points.emplace_back(FootballPoint::exact(Rational(0)));
  } else {
    if (!o.rho.empty()) throw InputError("--rho applies to the football; use --x on flat models");
    const long n = dimension(model);
    for (const auto& text : o.x) {
      FlatPoint p;
      std::stringstream ss(text);
      std::string part;
      while (std::getline(ss, part, ';')) {
        const double v = parse_real(part, "--x");
        if (v < 0) throw InputError("--x moduli must be >= 0");
        p.moduli.push_back(v);
      }
      if (static_cast<long>(p.moduli.size()) != n) throw InputError("--x needs n moduli separated by ';'");
      points.emplace_back(p);
    }
    if (points.empty() && default_point) points.emplace_back(FlatPoint{std::vector<double>(static_cast<std::size_t>(n), 0.0)});
  }
  if (points.empty()) throw InputError("no evaluation point given");
  return points;
}

std::optional<HomogeneousGamma> resolve_gamma(const Options& o) {
  if (o.gamma.empty()) return std::nullopt;
  std::vector<Rational> coeffs;
  std::stringstream ss(o.gamma);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      coeffs.push_back(parse_rational(part));
    } catch (const std::exception&) {
      throw InputError("invalid --gamma coefficient '" + part + "'");
    }
  }
  if (coeffs.empty()) throw InputError("--gamma needs at least one coefficient");
  return HomogeneousGamma::from_dense(coeffs);
}

json header(const std::string& command) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}};
}

std::string csv_comment_header(const json& doc) {
  std::string out = "# " + std::string(kToolName) + " " + kToolVersion + " " + doc.at("command").get<std::string>() + "\n";
  if (doc.contains("model")) out += "# model: " + doc.at("model").dump() + "\n";
  if (doc.contains("coefficients")) out += "# coefficients: " + doc.at("coefficients").dump() + "\n";
  return out;
}

struct Emitted {
  json doc;
  std::string csv;  // column header + rows
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

void emit(const Options& o, const std::string& name, const Emitted& e, std::ostream& out) {
  const std::string json_text = e.doc.dump(2) + "\n";
  std::string csv_text = csv_comment_header(e.doc) + e.csv;
  if (e.doc.contains("verdict")) csv_text += "# verdict: " + e.doc.at("verdict").get<std::string>() + "\n";
  out << (o.format == "csv" ? csv_text : json_text);
  if (o.out_dir.empty()) return;
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  if (o.format == "csv") {
    write_file(dir / (name + ".csv"), csv_text);
    json summary = e.doc;
    summary.erase("rows");
    write_file(dir / (name + "_summary.json"), summary.dump(2) + "\n");
  } else {
    write_file(dir / (name + ".json"), json_text);
  }
}

std::string csv_rational(const Rational& r) { return format_decimal(to_double(r)); }

// ---------------------------------------------------------------------------

int cmd_coeffs(const Options& o, std::ostream& out, std::ostream&) {
  std::optional<long> m = o.m;
  if (!m && !o.model.empty()) m = group_order(resolve_model(o));
  if (!m) throw InputError("coeffs needs --m or --model");
  if (*m < 1) throw InputError("--m must be >= 1");
  const auto c = resolve_coeffs(o, m, true);
  const auto report = satisfies_condition(c, *m, o.check_P);
  const auto order = root_order_at_unity(c, *m);

  Emitted e;
  e.doc = header("coeffs");
  e.doc["coefficients"] = to_json(c);
  e.doc["m"] = *m;
  e.doc["P"] = o.check_P;
  e.doc["satisfied"] = report.satisfied;
  e.doc["root_order"] = order ? json(*order) : json(nullptr);
  json rows = json::array();
  e.csv = "p,u,residue_sum,target\n";
  for (unsigned p = 0; p <= o.check_P; ++p) {
    for (long u = 0; u < *m; ++u) {
      const Rational& sum = report.residue_sums[p][static_cast<std::size_t>(u)];
      rows.push_back({{"p", p}, {"u", u}, {"residue_sum", to_string(sum)}, {"target", to_string(report.targets[p])}});
      e.csv += std::to_string(p) + "," + std::to_string(u) + "," + to_string(sum) + "," + to_string(report.targets[p]) + "\n";
    }
  }
  e.doc["rows"] = rows;
  e.doc["verdict"] = report.satisfied ? "pass" : "fail";
  emit(o, "coeffs", e, out);
  return report.satisfied ? kExitOk : kExitVerdict;
}

int cmd_kernel(const Options& o, std::ostream& out, std::ostream&) {
  const Model model = resolve_model(o);
  const auto c = resolve_coeffs(o, group_order(model), false);
  const auto [k_min, k_max] = parse_krange(o.krange, {1, 20});
  const auto points = resolve_points(o, model, true);
  const auto gamma = resolve_gamma(o);

  Emitted e;
  e.doc = header("kernel");
  e.doc["model"] = to_json(model);
  e.doc["coefficients"] = to_json(c);
  if (gamma) e.doc["gamma"] = o.gamma;
  json rows = json::array();
  e.csv = "k,point,value,exact_flag,err_bound\n";
  for (const auto& point : points) {
    for (long k = k_min; k <= k_max; ++k) {
      const KernelValue v = gamma ? weighted_bergman_gamma(model, c, *gamma, k, point) : weighted_bergman(model, c, k, point);
      rows.push_back({{"k", k},
                      {"point", describe(point)},
                      {"value", v.value},
                      {"exact", v.exact ? json(to_string(*v.exact)) : json(nullptr)},
                      {"err_bound", v.err_bound}});
      e.csv += std::to_string(k) + "," + describe(point) + "," + format_decimal(v.value) + "," +
               (v.exact ? "1" : "0") + "," + format_decimal(v.err_bound) + "\n";
    }
  }
  e.doc["rows"] = rows;
  emit(o, "kernel", e, out);
  return kExitOk;
}

int cmd_expand(const Options& o, std::ostream& out, std::ostream&) {
  const Model model = resolve_model(o);
  const auto c = resolve_coeffs(o, group_order(model), false);
  const auto [k_min, k_max] = parse_krange(o.krange, {20, 200});
  const auto points = resolve_points(o, model, true);
  if (points.size() != 1) throw InputError("expand takes exactly one evaluation point");
  const PointSpec& point = points.front();
  const auto gamma = resolve_gamma(o);

  const long n = dimension(model);
  const long n_eff = n + (gamma ? static_cast<long>(gamma->degree()) : 0);
  const auto samples = weighted_samples(model, c, point, k_min, k_max, gamma);
  const ExpansionFit fit = fit_expansion(samples, n_eff, o.order);
  const SlopeResult slope = remainder_slope(fit);
  const auto pred = predicted_coefficients(c, n, scalar_curvature(model, point),
                                           gamma ? std::optional(GammaLeading::of(*gamma)) : std::nullopt);
  const bool conforming = satisfies_condition(c, group_order(model), o.order).satisfied;

  const double b0 = to_double(pred.b0), b1 = to_double(pred.b1);
  bool pass = std::abs(fit.b_hat[0] - b0) <= 1e-3 * std::abs(b0);
  if (o.order >= 1) pass = pass && std::abs(fit.b_hat[1] - b1) <= 1e-2 * std::max(1.0, std::abs(b1));
  const double slope_limit = static_cast<double>(n_eff) - static_cast<double>(o.order) - 1.0 + 0.15;
  pass = pass && (slope.exact || slope.slope <= slope_limit);

  Emitted e;
  e.doc = header("expand");
  e.doc["model"] = to_json(model);
  e.doc["coefficients"] = to_json(c);
  if (gamma) e.doc["gamma"] = o.gamma;
  e.doc["point"] = describe(point);
  e.doc["order"] = o.order;
  e.doc["condition_satisfied"] = conforming;
  e.doc["b_hat"] = fit.b_hat;
  const bool exact_law =
      fit.exact && std::all_of(fit.exact_residuals.begin(), fit.exact_residuals.end(), [](const Rational& r) { return r == 0; });
  if (exact_law) {
    json exact = json::array();
    for (unsigned j = 0; j <= fit.N; ++j) exact.push_back(to_string(fit.b_exact[j]));
    e.doc["b_hat_exact"] = exact;
  }
  e.doc["b_pred"] = {to_string(pred.b0), to_string(pred.b1)};
  e.doc["slope"] = slope.exact ? json("exact") : json(slope.slope);
  e.doc["verdict"] = pass ? "pass" : "fail";
  json rows = json::array();
  e.csv = "k,value,fitted,residual\n";
  for (std::size_t i = 0; i < fit.ks.size(); ++i) {
    rows.push_back({{"k", fit.ks[i]}, {"value", fit.values[i]}, {"fitted", fit.fitted[i]}, {"residual", fit.residuals[i]}});
    e.csv += std::to_string(fit.ks[i]) + "," + format_decimal(fit.values[i]) + "," + format_decimal(fit.fitted[i]) +
             "," + format_decimal(fit.residuals[i]) + "\n";
  }
  e.doc["rows"] = rows;
  emit(o, "expand", e, out);
  return pass ? kExitOk : kExitVerdict;
}

int cmd_rr(const Options& o, std::ostream& out, std::ostream& err) {
  const Model model = resolve_model(o);
  if (!is_compact(model)) throw InputError("rr requires a compact model; flat model is noncompact");
  const long m = group_order(model);
  const auto c = resolve_coeffs(o, m, false);
  const auto [k_min, k_max] = parse_krange(o.krange, {1, 100});
  const RRReport report = rr_check(model, c, k_min, k_max);
  if (!report.conforming)
    err << "warning: coefficients violate the moment conditions for p <= 1; differences are not asserted\n";
  const bool pass = report.all_zero_from(m);

  Emitted e;
  e.doc = header("rr");
  e.doc["model"] = to_json(model);
  e.doc["coefficients"] = to_json(c);
  e.doc["a0"] = to_string(report.a0);
  e.doc["a1"] = to_string(report.a1);
  e.doc["conforming"] = report.conforming;
  e.doc["k0"] = report.k0 ? json(*report.k0) : json(nullptr);
  e.doc["verdict"] = report.conforming ? (pass ? "pass" : "fail") : "not-asserted";
  json rows = json::array();
  e.csv = "k,weighted_h0,predicted,difference\n";
  for (const auto& row : report.rows) {
    rows.push_back({{"k", row.k},
                    {"weighted_h0", to_string(row.weighted_h0)},
                    {"predicted", to_string(row.predicted)},
                    {"difference", to_string(row.difference)}});
    e.csv += std::to_string(row.k) + "," + csv_rational(row.weighted_h0) + "," + csv_rational(row.predicted) + "," +
             csv_rational(row.difference) + "\n";
  }
  e.doc["rows"] = rows;
  emit(o, "rr", e, out);
  return report.conforming && !pass ? kExitVerdict : kExitOk;
}

int cmd_necessity(const Options& o, std::ostream& out, std::ostream&) {
  const Model model = resolve_model(o);
  const long m = group_order(model);
  const long n = dimension(model);
  const auto c = resolve_coeffs(o, m, false);
  const auto [k_min, k_max] = parse_krange(o.krange, {1, 100});
  const auto points = resolve_points(o, model, true);
  if (points.size() != 1) throw InputError("necessity takes exactly one evaluation point");
  const auto condition = satisfies_condition(c, m, static_cast<unsigned>(n));
  std::optional<unsigned> first_failure;
  for (unsigned p = 0; p <= static_cast<unsigned>(n) && !first_failure; ++p)
    if (!satisfies_condition(c, m, p).satisfied) first_failure = p;
  const PeriodicityReport probe = periodicity_probe(model, c, points.front(), k_min, k_max);

  // Violating c: oscillation at a period dividing m growing like k^{n-p}.
  // Conforming c: no oscillation, or one that decays at least like k^{-1}.
  const double slack = 0.15;
  const PointSpec& point = points.front();
  bool at_orbifold_point;
  if (const auto* fp = std::get_if<FootballPoint>(&point))
    at_orbifold_point = fp->is_infinity() || (fp->exact_rho() && *fp->exact_rho() == 0);
  else
    at_orbifold_point = std::get<FlatPoint>(point).is_origin();
  bool pass = true;
  const bool asserted = !first_failure || at_orbifold_point;
  if (!asserted) {
    // away from the orbifold points the oscillation is exponentially small
  } else if (first_failure)
    pass = probe.period && m % *probe.period == 0 && probe.amplitude > 0.0 && probe.growth &&
           *probe.growth >= static_cast<double>(n) - static_cast<double>(*first_failure) - slack;
  else
    pass = !probe.period || !probe.growth || *probe.growth <= -1.0 + slack;

  Emitted e;
  e.doc = header("necessity");
  e.doc["model"] = to_json(model);
  e.doc["coefficients"] = to_json(c);
  e.doc["point"] = describe(points.front());
  e.doc["condition_satisfied"] = condition.satisfied;
  e.doc["first_failing_moment"] = first_failure ? json(*first_failure) : json(nullptr);
  e.doc["period"] = probe.period ? json(*probe.period) : json(nullptr);
  e.doc["amplitude"] = probe.amplitude;
  e.doc["growth"] = probe.growth ? json(*probe.growth) : json(nullptr);
  e.doc["verdict"] = asserted ? (pass ? "pass" : "fail") : "not-asserted";
  json rows = json::array();
  e.csv = "k,value,trend,detrended\n";
  for (const auto& row : probe.rows) {
    rows.push_back({{"k", row.k}, {"value", row.value}, {"trend", row.trend}, {"detrended", row.detrended}});
    e.csv += std::to_string(row.k) + "," + format_decimal(row.value) + "," + format_decimal(row.trend) + "," +
             format_decimal(row.detrended) + "\n";
  }
  e.doc["rows"] = rows;
  emit(o, "necessity", e, out);
  return pass ? kExitOk : kExitVerdict;
}

int cmd_localcheck(const Options& o, std::ostream& out, std::ostream&) {
  const Model model = resolve_model(o);
  const auto* flat = std::get_if<FlatCyclicModel>(&model);
  if (!flat) throw InputError("localcheck requires a flat model");

  Emitted e;
  e.doc = header("localcheck");
  e.doc["model"] = to_json(model);
  e.doc["check"] = o.check;
  json rows = json::array();
  bool pass = true;

  if (o.check == "reproducing") {
    if (flat->n() != 1) throw InputError("reproducing check requires n = 1");
    double x = 0.3;
    if (!o.x.empty()) {
      if (o.x.size() != 1) throw InputError("reproducing check takes one --x");
      x = parse_real(o.x.front(), "--x");
    }
    std::vector<long> ks = o.ks;
    if (ks.empty()) ks = {11, 21, 41};
    e.doc["alpha"] = o.alpha;
    e.doc["x"] = x;
    e.doc["radius"] = o.radius;
    e.csv = "k,residual\n";
    double previous = HUGE_VAL;
    for (long k : ks) {
      const ReproducingCheck r = verify_reproducing(*flat, k, o.alpha, {x, 0.0}, o.radius);
      rows.push_back({{"k", k}, {"residual", r.residual}, {"radial_nodes", r.radial_nodes}, {"angular_nodes", r.angular_nodes}});
      e.csv += std::to_string(k) + "," + format_decimal(r.residual) + "\n";
      if (!(r.residual < previous)) pass = false;
      previous = r.residual;
    }
  } else if (o.check == "decay") {
    const auto [k_min, k_max] = parse_krange(o.krange, {10, 200});
    if (o.grid_points < 2) throw InputError("--grid-points must be >= 2");
    std::vector<FlatPoint> grid;
    for (long g = 0; g < o.grid_points; ++g) {
      const double r = o.grid_max * static_cast<double>(g) / static_cast<double>(o.grid_points - 1);
      // moduli along the diagonal direction, |x| = r
      grid.push_back({std::vector<double>(static_cast<std::size_t>(flat->n()), r / std::sqrt(static_cast<double>(flat->n())))});
    }
    const DecayReport report = decay_check(*flat, o.s, o.u, o.v, grid, k_min, k_max);
    const double bound = decay_uniform_bound(*flat, o.s, o.u, o.v);
    pass = report.sup <= bound * (1.0 + 1e-12);
    e.doc["s"] = o.s;
    e.doc["u"] = o.u;
    e.doc["v"] = o.v;
    e.doc["sup"] = report.sup;
    e.doc["uniform_bound"] = bound;
    e.csv = "k,sup_value\n";
    for (const auto& row : report.rows) {
      rows.push_back({{"k", row.k}, {"sup_value", row.sup_value}});
      e.csv += std::to_string(row.k) + "," + format_decimal(row.sup_value) + "\n";
    }
  } else {
    throw InputError("--check must be reproducing or decay");
  }
  e.doc["verdict"] = pass ? "pass" : "fail";
  e.doc["rows"] = rows;
  emit(o, "localcheck", e, out);
  return pass ? kExitOk : kExitVerdict;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "model descriptor, e.g. football:m=3,t=1 or flat:n=1,m=2,weights=1");
  sub->add_option("--coeffs", o.coeffs, "coefficients as JSON {\"entries\": [[i, \"p/q\"], ...]}");
  sub->add_option("--coeffs-file", o.coeffs_file, "file holding the coefficient JSON");
  sub->add_option("--canonical-q", o.canonical_q, "use (1 + z + ... + z^{m-1})^q");
  sub->add_option("--krange", o.krange, "k range a:b");
  sub->add_option("--out", o.out_dir, "directory for report files");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_points(CLI::App* sub, Options& o) {
  sub->add_option("--rho", o.rho, "football point(s) rho = |u|^2 (rational or inf)");
  sub->add_option("--x", o.x, "flat point(s) as moduli a;b;...");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Weighted Bergman kernels on cyclic model orbifolds", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  auto* coeffs = app.add_subcommand("coeffs", "check the moment conditions of a coefficient sequence");
  add_common(coeffs, o);
  coeffs->add_option("--m", o.m, "group order");
  coeffs->add_option("--check-P", o.check_P, "highest moment order to check");

  auto* kernel = app.add_subcommand("kernel", "tabulate weighted Bergman kernel values");
  add_common(kernel, o);
  add_points(kernel, o);
  kernel->add_option("--gamma", o.gamma, "homogeneous weight: coefficients of k^d, k^{d-1} i, ..., i^d");

  auto* expand = app.add_subcommand("expand", "fit the asymptotic expansion and compare with predictions");
  add_common(expand, o);
  add_points(expand, o);
  expand->add_option("--order", o.order, "expansion order N");
  expand->add_option("--gamma", o.gamma, "homogeneous weight: coefficients of k^d, k^{d-1} i, ..., i^d");

  auto* rr = app.add_subcommand("rr", "weighted Hilbert function against a0 k + a1");
  add_common(rr, o);

  auto* necessity = app.add_subcommand("necessity", "probe for periodic oscillation in k");
  add_common(necessity, o);
  add_points(necessity, o);

  auto* local = app.add_subcommand("localcheck", "averaged local kernel checks on flat models");
  add_common(local, o);
  local->add_option("--check", o.check, "reproducing or decay");
  local->add_option("--x", o.x, "evaluation point modulus (reproducing)");
  local->add_option("--alpha", o.alpha, "monomial exponent (reproducing)");
  local->add_option("--radius", o.radius, "quadrature radius R >= 3 (reproducing)");
  local->add_option("--k", o.ks, "k values (reproducing)");
  local->add_option("--s", o.s, "power s >= 1 (decay)");
  local->add_option("--u", o.u, "first residue (decay)");
  local->add_option("--v", o.v, "second residue (decay)");
  local->add_option("--grid-max", o.grid_max, "largest |x| on the grid (decay)");
  local->add_option("--grid-points", o.grid_points, "grid size (decay)");

  std::vector<std::string> argv_store{kToolName};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*coeffs) return cmd_coeffs(o, out, err);
    if (*kernel) return cmd_kernel(o, out, err);
    if (*expand) return cmd_expand(o, out, err);
    if (*rr) return cmd_rr(o, out, err);
    if (*necessity) return cmd_necessity(o, out, err);
    return cmd_localcheck(o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    // numerical failures (tolerance or quadrature not reached)
    err << "error: " << e.what() << "\n";
    return kExitVerdict;
  }
}

}  // namespace orbergman
