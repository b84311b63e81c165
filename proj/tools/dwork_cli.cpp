#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dwork/harness.hpp"

using namespace dwork;
using json = nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;

struct RunConfig {
  std::string family = "hypercubic";
  int n = 2;
  std::string g;  // custom Laurent polynomial literal "e1,e2 : c; ..."
  long symmetry_order = 1;
  std::int64_t p = 3;
  int precision = 0;  // 0: per-check default
  long degree = -1;   // -1: per-check default
  int s = 1;
  int m = 1;
  long q_exponent = 1;
  int level = 1;
  std::string lift;  // empty: the command's default lift
  std::string suite;
  std::string out;
  std::string format = "json";
  bool strict_precision = false;
  std::string grid = "smoke";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FamilySpec family_of(const RunConfig& c) {
  const auto kind = parse_family_kind(c.family);
  if (!kind) throw UsageError("unknown family: " + c.family);
  if (*kind == FamilyKind::Custom) {
    if (c.g.empty()) throw UsageError("custom family needs --g");
    return custom_family(parse_int_poly(c.g), c.symmetry_order);
  }
  return make_family(*kind, c.n);
}

void require_prime(std::int64_t p) {
  if (p < 3 || !is_prime(p)) throw UsageError("--prime must be an odd prime, got " + std::to_string(p));
}

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// Degree to use for a check whose congruence first bites at t^minimum. Explicit degrees below
// the minimum are rejected rather than silently under-truncated.
std::size_t checked_degree(const RunConfig& c, std::size_t minimum, std::size_t fallback) {
  if (c.degree < 0) return std::max(minimum, fallback);
  if (static_cast<std::size_t>(c.degree) < minimum)
    throw UsageError("--degree " + std::to_string(c.degree) + " is below the minimum " + std::to_string(minimum) +
                     " for this check");
  return static_cast<std::size_t>(c.degree);
}

LiftSpec lift_of(const RunConfig& c, std::size_t degree, LiftKind fallback = LiftKind::Tp) {
  if (c.lift.empty()) return {fallback, {}};
  if (c.lift == "tp") return {LiftKind::Tp, {}};
  if (c.lift == "excellent") return {LiftKind::Excellent, {}};
  const std::string prefix = "explicit:";
  if (c.lift.rfind(prefix, 0) == 0) {
    std::ifstream in(c.lift.substr(prefix.size()));
    if (!in) throw UsageError("cannot read lift file " + c.lift.substr(prefix.size()));
    std::stringstream text;
    text << in.rdbuf();
    return {LiftKind::Explicit, rational_series_from_text(text.str(), degree)};
  }
  throw UsageError("--lift must be tp, excellent or explicit:<file>");
}

json series_json(const RationalSeries& a) {
  json j = json::array();
  for (const auto& c : a.coeffs()) j.push_back(c.get_str());
  return j;
}

json series_json(const PadicSeries& a) {
  json j = json::array();
  for (const auto& c : a.coeffs()) j.push_back(c.signed_residue());
  return j;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << text;
  if (text.empty() || text.back() != '\n') f << '\n';
}

void check_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (c.format == a) return;
  throw UsageError("--format " + c.format + " is not available for this command");
}

int cmd_periods(const RunConfig& c) {
  check_format(c, {"json", "text"});
  const FamilySpec fam = family_of(c);
  const std::size_t D = static_cast<std::size_t>(c.degree < 0 ? 10 : c.degree);
  const PeriodData P = periods(fam, D);
  const RationalSeries q = canonical_q(P);
  const RationalSeries t = mirror_map(q);
  if (c.format == "text") {
    std::ostringstream os;
    os << "F: " << to_text(P.F) << "\nG: " << to_text(P.G) << "\nW: " << to_text(P.W) << "\nq: " << to_text(q)
       << "\nmirror: " << to_text(t) << "\n";
    emit(c, os.str());
  } else {
    json j = {{"family", family_name(fam.kind)}, {"n", fam.n}, {"degree", D},
              {"F", series_json(P.F)},           {"G", series_json(P.G)}, {"W", series_json(P.W)},
              {"q", series_json(q)},             {"mirror", series_json(t)}};
    emit(c, j.dump(2));
  }
  return kExitPass;
}

int cmd_hw(const RunConfig& c) {
  check_format(c, {"json"});
  require_prime(c.p);
  if (c.level < 1 || c.level >= c.p) throw UsageError("--level must satisfy 1 <= k < p");
  const int N = c.precision > 0 ? c.precision : c.level + kDefaultGuard;
  if (c.family == "square") {
    const std::size_t D = checked_degree(c, 0, static_cast<std::size_t>(2 * c.p));
    emit(c, to_json(square_hasse_witt(c.p, c.level, N, D)));
    return kExitPass;
  }
  if (c.level > 2) throw UsageError("CY families have Hasse-Witt data at levels 1 and 2 only");
  const FamilySpec fam = family_of(c);
  const std::size_t D = checked_degree(c, 0, static_cast<std::size_t>(2 * c.p));
  const PadicContext ctx(c.p, N);
  const std::size_t Dw = hw_working_degree(cy_symmetric_basis(fam.g), static_cast<int>(c.p), D);
  const LiftSpec lift = lift_of(c, Dw);
  if (lift.kind == LiftKind::Excellent && !excellent_hypothesis_holds(fam, c.p))
    throw UsageError("no excellent lift: p divides gamma * #G * index = " + excluded_product(fam).get_str());
  const CyHasseWitt hw = cy_hasse_witt(fam, ctx, frobenius_image(fam, lift, c.p, Dw), D);
  emit(c, to_json(c.level == 1 ? hw.hw1 : hw.hw2));
  return kExitPass;
}

int cmd_lift(const RunConfig& c) {
  check_format(c, {"json", "text"});
  require_prime(c.p);
  const FamilySpec fam = family_of(c);
  const std::size_t D = checked_degree(c, static_cast<std::size_t>(c.p) + 1, 30);
  const PadicContext ctx(c.p, c.precision > 0 ? c.precision : 6);
  const LiftSpec lift = lift_of(c, D, LiftKind::Excellent);
  if (lift.kind == LiftKind::Excellent && !excellent_hypothesis_holds(fam, c.p))
    throw UsageError("no excellent lift: p = " + std::to_string(c.p) +
                     " divides gamma * #G * [Z^n : support lattice] = " + excluded_product(fam).get_str());
  const FrobeniusData fd = lift.kind == LiftKind::Excellent ? excellent_lift(fam, ctx, D)
                                                           : frobenius_data(fam, lift, ctx, D);
  if (c.format == "text") {
    std::ostringstream os;
    os << "t_sigma: " << to_text(fd.t_sigma) << "\nq: " << to_text(fd.q) << "\nlambda0: " << to_text(fd.lambda0)
       << "\nlambda1: " << to_text(fd.lambda1) << "\n";
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) os << "Lambda" << i << j << ": " << to_text(fd.Lambda[i][j]) << "\n";
    emit(c, os.str());
  } else {
    json L = json::array();
    for (int i = 0; i < 2; ++i) {
      json row = json::array();
      for (int j = 0; j < 2; ++j) row.push_back(series_json(fd.Lambda[i][j]));
      L.push_back(row);
    }
    json j = {{"family", family_name(fam.kind)}, {"n", fam.n},
              {"p", c.p},                        {"precision", ctx.N},
              {"degree", D},                     {"lift", lift_name(fd.lift)},
              {"t_sigma", series_json(fd.t_sigma)}, {"q", series_json(fd.q)},
              {"lambda0", series_json(fd.lambda0)}, {"lambda1", series_json(fd.lambda1)},
              {"Lambda", L}};
    emit(c, j.dump(2));
  }
  return kExitPass;
}

std::vector<CongruenceReport> run_suite(const RunConfig& c, const std::string& suite) {
  const auto one = [](CongruenceReport r) { return std::vector<CongruenceReport>{r}; };
  const std::int64_t p = c.p;
  if (suite == "straub") {
    require_prime(p);
    return one(verify_straub(p, c.s, c.q_exponent));
  }
  if (suite == "simple") {
    require_prime(p);
    return verify_simple_example(p, c.s, c.m, c.q_exponent);
  }
  if (suite == "fixed-point") {
    require_prime(p);
    return verify_fixed_point_n1(p);
  }
  if (suite == "modular") {
    const std::size_t D = checked_degree(c, 2, p == 3 ? 40 : 60);
    return one(verify_modular_polynomial(p, D, c.precision > 0 ? c.precision : (p == 3 ? 5 : 4)));
  }
  if (suite == "pq") {
    require_prime(p);
    const std::size_t D = checked_degree(c, static_cast<std::size_t>(ipow(p, c.s)), 3 * p * p);
    return one(verify_pq(p, c.s, c.n, D));
  }
  if (suite == "cartier") {
    require_prime(p);
    return one(verify_cartier_oracle(p, c.precision > 0 ? c.precision : 4, c.degree < 0 ? 12 : c.degree, 20, 1));
  }
  if (suite == "square-hw") {
    require_prime(p);
    return verify_square_hasse_witt(p, checked_degree(c, 0, static_cast<std::size_t>(3 * p)));
  }
  if (suite == "filtration") {
    require_prime(p);
    const int N = c.precision > 0 ? c.precision : 4;
    if (c.family == "square") return one(verify_square_filtration(p, N, c.degree < 0 ? 15 : c.degree));
    return one(verify_picard_fuchs_filtration(family_of(c), p, N, checked_degree(c, 0, 20), 9));
  }

  require_prime(p);
  const FamilySpec fam = family_of(c);
  const std::size_t desk = static_cast<std::size_t>(3 * p * p);
  if (suite == "dwork") {
    const std::size_t D = checked_degree(c, min_dwork_degree(p, c.s, c.m), desk);
    return one(verify_dwork(fam, p, c.s, c.m, lift_of(c, D), D));
  }
  if (suite == "super") {
    const std::size_t D = checked_degree(c, min_dwork_degree(p, c.s, c.m), desk);
    const LiftSpec lift = lift_of(c, D, LiftKind::Excellent);
    return one(verify_super_conjecture(fam, p, c.s, c.m, D, lift));
  }
  if (suite == "cy-super") {
    const std::size_t D = checked_degree(c, static_cast<std::size_t>(c.q_exponent * ipow(p, c.s)), desk);
    const LiftSpec lift = lift_of(c, D, c.level == 2 ? LiftKind::Excellent : LiftKind::Tp);
    return one(verify_cy_supercongruence(fam, p, c.s, c.q_exponent, lift, D, c.level));
  }
  if (suite == "hw") return verify_hw_congruences(fam, p, checked_degree(c, 0, static_cast<std::size_t>(5 * p)));
  if (suite == "lambda-hw") {
    const std::size_t D = checked_degree(c, 0, static_cast<std::size_t>(3 * p));
    return one(verify_lambda_hw(fam, p, lift_of(c, D + p), D));
  }
  if (suite == "frobenius") {
    const std::size_t D = checked_degree(c, static_cast<std::size_t>(p) + 1, 30);
    return one(verify_frobenius_structure(fam, p, lift_of(c, D), D, c.precision > 0 ? c.precision : 6));
  }
  if (suite == "mirror")
    return one(verify_mirror_integrality(fam, p, checked_degree(c, 1, desk), c.precision > 0 ? c.precision : 6));
  if (suite == "excellent")
    return one(verify_excellent_lift(fam, p, checked_degree(c, 1, 30), c.precision > 0 ? c.precision : 6));
  throw UsageError("unknown suite: " + suite);
}

std::string render(const RunConfig& c, const std::vector<CongruenceReport>& reports) {
  if (c.format == "json") return reports_to_json(reports);
  if (c.format == "junit") return reports_to_junit(reports);
  std::ostringstream os;
  for (const auto& r : reports) {
    os << status_name(r.status) << ' ' << r.id << ' ' << r.params.dump() << " target=" << r.target;
    if (r.excess()) os << " observed=" << r.observed << " at " << r.where;
    else os << " observed=vanished";
    if (r.conjecture) os << " [conjecture]";
    else if (!r.gating) os << " [non-gating]";
    os << '\n';
  }
  return os.str();
}

int cmd_verify(const RunConfig& c) {
  check_format(c, {"json", "text", "junit"});
  if (c.suite.empty()) throw UsageError("verify needs a suite name");
  const std::vector<CongruenceReport> reports = c.suite == "all" ? run_grid(c.grid) : run_suite(c, c.suite);
  emit(c, render(c, reports));
  bool failed = false, limited = false;
  for (const auto& r : reports) {
    if (r.conjecture || !r.gating) continue;
    failed = failed || r.status == CheckStatus::Fail;
    limited = limited || r.status == CheckStatus::PrecisionLimited;
  }
  if (failed) return kExitFail;
  if (limited) {
    std::cerr << "warning: some checks were precision limited\n";
    if (c.strict_precision) return kExitPrecision;
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dwork crystal congruence toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key = value file mirroring the flags; flags override it");
  RunConfig c;
  app.add_option("--family", c.family, "simplicial | hypercubic | hyperoctahedral | an | custom | square");
  app.add_option("--n", c.n, "number of variables");
  app.add_option("--g", c.g, "custom g as \"e1,e2 : c; ...\"");
  app.add_option("--symmetry-order", c.symmetry_order, "#G for a custom family");
  app.add_option("--prime", c.p, "odd prime p");
  app.add_option("--precision", c.precision, "p-adic precision N");
  app.add_option("--degree", c.degree, "t-degree D");
  app.add_option("--s", c.s, "Frobenius power s");
  app.add_option("--m", c.m, "truncation multiple m (level k for the simple example)");
  app.add_option("--q-exponent", c.q_exponent, "Q for expansion coefficients; l or n for the diagonal checks");
  app.add_option("--level", c.level, "Hasse-Witt or filtration level k");
  app.add_option("--lift", c.lift, "tp | excellent | explicit:<file>; default excellent for lift, super and level-2 cy-super, else tp");
  app.add_option("--suite", c.suite, "verification suite");
  app.add_option("--out", c.out, "output path (default stdout)");
  app.add_option("--format", c.format, "json | text | junit")->check(CLI::IsMember({"json", "text", "junit"}));
  app.add_flag("--strict-precision", c.strict_precision, "exit 3 when a gating check is precision limited");
  app.add_option("--grid", c.grid, "grid for verify all")->check(CLI::IsMember({"smoke", "desk"}));

  auto* periods = app.add_subcommand("periods", "F, G, W, q and the mirror map")->fallthrough();
  auto* hw = app.add_subcommand("hw", "Hasse-Witt matrix at level k")->fallthrough();
  auto* lift = app.add_subcommand("lift", "Frobenius lift data")->fallthrough();
  auto* verify = app.add_subcommand("verify", "run a verification suite or all")->fallthrough();
  std::string positional_suite;
  verify->add_option("suite", positional_suite, "suite name or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (!positional_suite.empty()) c.suite = positional_suite;

  try {
    if (*periods) return cmd_periods(c);
    if (*hw) return cmd_hw(c);
    if (*lift) return cmd_lift(c);
    if (*verify) return cmd_verify(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TheoremViolation& e) {
    std::cerr << "theorem violation: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
