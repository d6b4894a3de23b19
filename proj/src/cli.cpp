#include "wigcp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wigcp/checks.hpp"
#include "wigcp/detmc.hpp"
#include "wigcp/errors.hpp"
#include "wigcp/hciz.hpp"
#include "wigcp/saddle.hpp"
#include "wigcp/theory.hpp"

namespace wigcp {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed {};

enum Opt : unsigned {
  kN = 1u << 0,
  kM = 1u << 1,
  kLambda0 = 1u << 2,
  kXi = 1u << 3,
  kLaw = 1u << 4,
  kSamples = 1u << 5,
  kSeed = 1u << 6,
  kWorkers = 1u << 7,
  kTrials = 1u << 8,
  kBackend = 1u << 9,
  kContour = 1u << 10,
  kTol = 1u << 11,
  kKappa = 1u << 12,
};

struct RunConfig {
  std::string command;
  std::string suite;
  std::vector<int> n;
  int m = 1;
  double lambda0 = 0.0;
  std::vector<double> xi;
  std::string law = "gaussian";
  double mu4 = 0.75;
  double mix_p = 0.25;
  std::string diag_law = "gaussian";
  std::string kappa4;
  std::string samples = "100000";
  std::uint64_t seed = 1;
  int workers = 1;
  std::uint64_t chunk = 8192;
  int trials = 20;
  std::string backend = "auto";
  double a = 0.05;
  double A = 6.0;
  double tol = 1e-10;
  std::string format = "csv";
  std::string out;
  std::string replay_file;

  std::uint64_t sample_count = 0;
};

std::string join_numbers(const auto& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v[i])>>) {
      s += format_number(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

void add_options(CLI::App* sub, RunConfig& c, unsigned mask) {
  if (mask & kN) sub->add_option("--n", c.n, "matrix size(s), comma separated")->delimiter(',');
  if (mask & kM) sub->add_option("--m", c.m, "number of characteristic-polynomial pairs");
  if (mask & kLambda0) sub->add_option("--lambda0", c.lambda0, "bulk point in (-2, 2)");
  if (mask & kXi) sub->add_option("--xi", c.xi, "2m offsets, comma separated")->delimiter(',');
  if (mask & kLaw) {
    sub->add_option("--law", c.law, "gaussian | rademacher | uniform | mixture");
    sub->add_option("--mu4", c.mu4, "fourth moment of the mixture law");
    sub->add_option("--mix-p", c.mix_p, "inner-atom weight of the mixture law");
    sub->add_option("--diag-law", c.diag_law, "law family of the diagonal (variance 1)");
  }
  if (mask & kKappa) sub->add_option("--kappa4", c.kappa4, "override the law's kappa4");
  if (mask & kSamples) sub->add_option("--samples", c.samples, "Monte Carlo sample count");
  if (mask & kSeed) sub->add_option("--seed", c.seed, "64-bit seed");
  if (mask & kWorkers) {
    sub->add_option("--workers", c.workers, "worker threads");
    sub->add_option("--chunk", c.chunk, "samples per random stream");
  }
  if (mask & kTrials) sub->add_option("--trials", c.trials, "number of random (A, B) pairs");
  if (mask & kBackend) sub->add_option("--backend", c.backend, "auto | mc | contour | exact | config-sum");
  if (mask & kContour) {
    sub->add_option("--a", c.a, "inner contour radius");
    sub->add_option("--A", c.A, "outer contour radius");
  }
  if (mask & kTol) sub->add_option("--tol", c.tol, "quadrature tolerance");
  sub->add_option("--format", c.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "output file (default: stdout)");
}

std::uint64_t parse_samples(const std::string& s) {
  double v = 0;
  std::size_t used = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("--samples: '" + s + "' is not a number");
  }
  if (used != s.size() || !(v >= 2) || v != std::floor(v) || v > 1e15) {
    throw ConfigError("--samples: '" + s + "' must be an integer >= 2");
  }
  return static_cast<std::uint64_t>(v);
}

void validate(RunConfig& c, unsigned mask) {
  if ((mask & kM) && c.m < 1) throw ConfigError("--m must be >= 1");
  for (int n : c.n)
    if (n < 1) throw ConfigError("--n: sizes must be >= 1");
  if ((mask & kLambda0) && !(std::abs(c.lambda0) < 2.0)) {
    throw ConfigError("--lambda0 must lie in (-2, 2)");
  }
  if ((mask & kXi) && c.xi.size() != static_cast<std::size_t>(2 * c.m)) {
    throw ConfigError("--xi: expected 2m = " + std::to_string(2 * c.m) + " values, got " +
                      std::to_string(c.xi.size()));
  }
  if (mask & kSamples) c.sample_count = parse_samples(c.samples);
  if ((mask & kWorkers) && (c.workers < 1 || c.chunk < 1)) {
    throw ConfigError("--workers and --chunk must be >= 1");
  }
  if ((mask & kTrials) && c.trials < 2) throw ConfigError("--trials must be >= 2");
  if ((mask & kContour) && !(c.a > 0 && c.a < c.A)) throw ConfigError("need 0 < --a < --A");
  if ((mask & kTol) && !(c.tol > 0)) throw ConfigError("--tol must be positive");
  if (mask & kLaw) {
    try {
      parse_law_kind(c.law);
      parse_law_kind(c.diag_law);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--law: ") + e.what());
    }
  }
}

LawParams law_params(const RunConfig& c) { return {c.mix_p, c.mu4}; }

EntryLaw off_law(const RunConfig& c) {
  try {
    return make_entry_law(parse_law_kind(c.law), law_params(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--law: ") + e.what());
  }
}

EntryLaw diag_law(const RunConfig& c) {
  try {
    return make_diagonal_law(parse_law_kind(c.diag_law), law_params(c));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--diag-law: ") + e.what());
  }
}

double resolved_kappa4(const RunConfig& c) {
  if (c.kappa4.empty()) return off_law(c).kappa4;
  try {
    std::size_t used = 0;
    const double k = std::stod(c.kappa4, &used);
    if (used != c.kappa4.size()) throw std::invalid_argument("trailing");
    return k;
  } catch (const std::exception&) {
    throw ConfigError("--kappa4: '" + c.kappa4 + "' is not a number");
  }
}

// Resolved configuration: record fields plus canonical arguments.
struct Embed {
  Record& rec;
  void put(const std::string& key, Cell value, const std::string& text) {
    rec.config.emplace_back(key, std::move(value));
    rec.argv.push_back("--" + key);
    rec.argv.push_back(text);
  }
  void num(const std::string& key, double x) { put(key, x, format_number(x)); }
  void integer(const std::string& key, std::int64_t x) { put(key, x, std::to_string(x)); }
  void str(const std::string& key, const std::string& s) { put(key, s, s); }
};

void embed(Record& rec, const RunConfig& c, unsigned mask) {
  rec.command = c.command;
  rec.argv.push_back(c.command);
  if (!c.suite.empty()) {
    rec.argv.push_back(c.suite);
    rec.config.emplace_back("suite", c.suite);
  }
  Embed e{rec};
  if (mask & kN) e.str("n", join_numbers(c.n));
  if (mask & kM) e.integer("m", c.m);
  if (mask & kLambda0) e.num("lambda0", c.lambda0);
  if (mask & kXi) e.str("xi", join_numbers(c.xi));
  if (mask & kLaw) {
    e.str("law", c.law);
    if (c.law == "mixture" || c.diag_law == "mixture") {
      e.num("mu4", c.mu4);
      e.num("mix-p", c.mix_p);
    }
    e.str("diag-law", c.diag_law);
  }
  if ((mask & kKappa) && !c.kappa4.empty()) e.num("kappa4", resolved_kappa4(c));
  if (mask & kSamples) e.integer("samples", static_cast<std::int64_t>(c.sample_count));
  if (mask & kSeed) e.integer("seed", static_cast<std::int64_t>(c.seed));
  if (mask & kWorkers) {
    e.integer("workers", c.workers);
    e.integer("chunk", static_cast<std::int64_t>(c.chunk));
  }
  if (mask & kTrials) e.integer("trials", c.trials);
  if (mask & kBackend) e.str("backend", c.backend);
  if (mask & kContour) {
    e.num("a", c.a);
    e.num("A", c.A);
  }
  if (mask & kTol) e.num("tol", c.tol);
  e.str("format", c.format);
}

std::vector<Cell> signed_cells(const SignedLog& s) {
  return {static_cast<std::int64_t>(s.sign), s.logmag,
          s.representable() ? s.to_double() : std::numeric_limits<double>::quiet_NaN()};
}

// ---- commands ----

constexpr unsigned kEstimateMask = kN | kM | kLambda0 | kXi | kLaw | kSamples | kSeed | kWorkers;

Record cmd_estimate(RunConfig& c) {
  Record rec;
  embed(rec, c, kEstimateMask);
  const EntryLaw law = off_law(c);
  EstimatorOptions opt;
  opt.workers = c.workers;
  opt.chunk_size = c.chunk;
  opt.diag_law = diag_law(c);
  rec.columns = {"n", "law", "lambda0"};
  for (int j = 1; j <= 2 * c.m; ++j) rec.columns.push_back("xi_" + std::to_string(j));
  for (const char* col : {"sign", "logmag", "value", "stderr_rel", "sign_unstable", "samples", "seed"})
    rec.columns.emplace_back(col);
  for (int n : c.n) {
    SpectralConfig sc{n, c.m, c.lambda0, c.xi};
    try {
      sc.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    const Estimate est = estimate_F2m(sc, law, c.sample_count, c.seed, opt);
    std::vector<Cell> row = {static_cast<std::int64_t>(n), law.name(), c.lambda0};
    for (double x : c.xi) row.emplace_back(x);
    for (auto& cell : signed_cells(est.mean)) row.push_back(cell);
    row.emplace_back(est.stderr_rel);
    row.emplace_back(est.sign_unstable);
    row.emplace_back(static_cast<std::int64_t>(est.count));
    row.emplace_back(static_cast<std::int64_t>(c.seed));
    rec.rows.push_back(std::move(row));
  }
  return rec;
}

constexpr unsigned kConvergeMask =
    kN | kM | kLambda0 | kXi | kLaw | kKappa | kSamples | kSeed | kWorkers | kBackend | kContour | kTol;

Record cmd_converge(RunConfig& c) {
  if (c.backend == "auto") c.backend = c.m == 1 ? "contour" : "config-sum";
  const std::string& b = c.backend;
  if (b != "mc" && b != "contour" && b != "exact" && b != "config-sum") {
    throw ConfigError("--backend: unknown backend '" + b + "'");
  }
  if ((b == "contour" || b == "exact") && c.m != 1) {
    throw ConfigError("--backend " + b + " supports m = 1 only");
  }
  if ((b == "mc" || b == "exact") && !c.kappa4.empty()) {
    throw ConfigError("--kappa4 cannot override the law for backend " + b);
  }
  Record rec;
  embed(rec, c, kConvergeMask);
  const double k4 = resolved_kappa4(c);
  rec.columns = {"n", "backend", "normalized", "stderr", "target", "deviation", "abs_deviation",
                 "ratio", "imag_rel"};
  std::vector<double> devs;
  for (int n : c.n) {
    TheoryParams tp{c.lambda0, n, c.m, k4, c.xi};
    const double target = theorem1_rhs(tp);
    double value = 0, stderr = 0, imag_rel = 0;
    if (b == "contour") {
      ContourSpec spec;
      spec.a = c.a;
      spec.A = c.A;
      spec.tol = c.tol;
      const ContourResult r = contour_F2_asymptotic(n, c.lambda0, k4, c.xi[0], c.xi[1], spec);
      value = r.normalized.real();
      imag_rel = r.imag_rel;
    } else if (b == "config-sum") {
      value = config_sum_leading(c.m, c.lambda0, k4, c.xi);
    } else {
      SpectralConfig sc{n, c.m, c.lambda0, c.xi};
      try {
        sc.validate();
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      const SignedLog norm = theorem1_normalizer(tp);
      if (b == "mc") {
        EstimatorOptions opt;
        opt.workers = c.workers;
        opt.chunk_size = c.chunk;
        opt.diag_law = diag_law(c);
        const Estimate e = estimate_F2m(sc, off_law(c), c.sample_count, c.seed, opt);
        value = (e.mean / norm).to_double();
        stderr = e.stderr_rel * std::abs(value);
      } else {
        const auto l = sc.lambdas();
        value = exact_F2_representation(n, l[0], l[1], off_law(c), c.tol).value /
                norm.to_double();
      }
    }
    const double dev = value - target;
    devs.push_back(std::abs(dev));
    rec.rows.push_back({static_cast<std::int64_t>(n), b, value, stderr, target, dev, std::abs(dev),
                        value / target, imag_rel});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < devs.size(); ++i) monotone = monotone && devs[i] <= devs[i - 1];
  rec.summary.emplace_back("monotone_non_increasing", monotone);
  if (devs.size() >= 2 && b != "config-sum") {
    double order = 0;
    int count = 0;
    for (std::size_t i = 1; i < devs.size(); ++i) {
      if (devs[i] > 0 && devs[i - 1] > 0) {
        order += std::log(devs[i - 1] / devs[i]) / std::log(double(c.n[i]) / c.n[i - 1]);
        ++count;
      }
    }
    rec.summary.emplace_back("convergence_order", count ? order / count : 0.0);
  }
  return rec;
}

Record check_record(const std::vector<CheckRow>& rows) {
  Record rec;
  rec.columns = {"check", "measured", "op", "tolerance", "passed"};
  for (const auto& r : rows) rec.rows.push_back({r.name, r.measured, r.op, r.tolerance, r.passed});
  rec.summary.emplace_back("passed", all_passed(rows));
  return rec;
}

void append(Record& into, const Record& from) {
  into.columns = from.columns;
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
  into.summary = from.summary;
}

unsigned check_mask(const std::string& suite) {
  if (suite == "landscape") return kN | kLambda0;
  if (suite == "hciz") return kN | kTrials | kSamples | kSeed | kWorkers;
  if (suite == "identity") return kSeed;
  if (suite == "oracle") return kSamples | kSeed | kWorkers;
  if (suite == "representation") return 0;
  throw ConfigError("check: unknown suite '" + suite +
                    "' (expected landscape, hciz, identity, oracle, representation)");
}

Record cmd_check(RunConfig& c) {
  const unsigned mask = check_mask(c.suite);
  Record rec;
  embed(rec, c, mask);
  std::vector<CheckRow> rows;
  if (c.suite == "landscape") rows = check_landscape({c.lambda0}, c.n);
  if (c.suite == "hciz") rows = check_hciz(c.n, c.trials, c.sample_count, c.seed, c.workers);
  if (c.suite == "identity") rows = check_identity(c.seed);
  if (c.suite == "oracle") rows = check_oracle(c.sample_count, c.seed, c.workers);
  if (c.suite == "representation") rows = check_representation();
  append(rec, check_record(rows));
  return rec;
}

constexpr unsigned kTheoryMask = kN | kM | kLambda0 | kXi | kLaw | kKappa;

Record cmd_theory(RunConfig& c) {
  Record rec;
  embed(rec, c, kTheoryMask);
  const double k4 = resolved_kappa4(c);
  rec.columns = {"n", "quantity", "sign", "logmag", "value"};
  for (int n : c.n) {
    TheoryParams tp{c.lambda0, n, c.m, k4, c.xi};
    tp.validate();
    const auto i64 = static_cast<std::int64_t>(n);
    auto put = [&](const std::string& q, const SignedLog& s) {
      std::vector<Cell> row = {i64, q};
      for (auto& cell : signed_cells(s)) row.push_back(cell);
      rec.rows.push_back(std::move(row));
    };
    put("rho_sc", SignedLog::from_double(rho_sc(c.lambda0)));
    put("alpha", SignedLog::from_double(alpha(c.lambda0)));
    put("kappa4", SignedLog::from_double(k4));
    for (std::size_t j = 0; j < c.xi.size(); ++j) {
      put("D_n(xi_" + std::to_string(j + 1) + ")", D_n(c.xi[j], tp));
    }
    const SineKernelValue skr = sine_kernel_ratio(c.xi);
    put("sine_kernel_ratio", SignedLog::from_double(skr.value));
    put("sine_kernel_confluent", SignedLog::from_double(skr.confluent ? 1.0 : 0.0));
    put("theorem1_rhs", SignedLog::from_double(theorem1_rhs(tp)));
    put("theorem1_normalizer", theorem1_normalizer(tp));
    if (c.m == 1) put("gk_F2_asymptotic", gk_F2_asymptotic(tp, c.xi[0], c.xi[1]));
  }
  return rec;
}

constexpr unsigned kHciZMask = kN | kTrials | kSamples | kSeed | kWorkers;

Record cmd_hciz(RunConfig& c) {
  Record rec;
  embed(rec, c, kHciZMask);
  rec.columns = {"n", "pair", "a", "b", "lhs", "lhs_stderr_rel", "rhs", "ratio"};
  HaarOptions opt;
  opt.workers = c.workers;
  opt.chunk_size = c.chunk;
  bool passed = true;
  for (int n : c.n) {
    const HciZReport r =
        hciz_ratio_constancy(n, c.trials, c.sample_count,
                             derive_seed(c.seed, static_cast<std::uint64_t>(n)), opt);
    for (std::size_t p = 0; p < r.pairs.size(); ++p) {
      const auto& pr = r.pairs[p];
      std::vector<double> a(pr.a.data(), pr.a.data() + pr.a.size());
      std::vector<double> b(pr.b.data(), pr.b.data() + pr.b.size());
      rec.rows.push_back({static_cast<std::int64_t>(n), static_cast<std::int64_t>(p),
                          join_numbers(a), join_numbers(b), pr.lhs.value(), pr.lhs.stderr_rel,
                          pr.rhs, pr.ratio});
    }
    const std::string tag = "n" + std::to_string(n) + ".";
    rec.summary.emplace_back(tag + "fitted_c", r.fitted_c);
    rec.summary.emplace_back(tag + "fitted_c_stderr", r.fitted_c_stderr);
    rec.summary.emplace_back(tag + "dispersion", r.dispersion);
    rec.summary.emplace_back(tag + "threshold", r.threshold);
    rec.summary.emplace_back(tag + "passed", r.passed);
    passed = passed && r.passed;
  }
  rec.summary.emplace_back("passed", passed);
  return rec;
}

void apply_defaults(RunConfig& c) {
  if (c.n.empty()) {
    if (c.command == "converge") c.n = {32, 64, 128};
    else if (c.command == "check" && c.suite == "landscape") c.n = {64, 256};
    else if (c.command == "hciz-check" || (c.command == "check" && c.suite == "hciz")) c.n = {1, 2, 3};
    else c.n = {2};
  }
  if (c.xi.empty()) {
    if (c.command == "converge") {
      if (c.m == 1) {
        c.xi = {0.25, -0.25};
      } else {
        for (int j = 0; j < c.m; ++j) c.xi.push_back(0.3 * j);
        for (int j = 0; j < c.m; ++j) c.xi.push_back(0.3 * j + 0.13);
      }
    } else {
      c.xi.assign(static_cast<std::size_t>(2 * c.m), 0.0);
    }
  }
}

std::vector<std::string> read_embedded_argv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("replay: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<std::string> argv;
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto j = nlohmann::json::parse(text);
      for (const auto& a : j.at("argv")) argv.push_back(a.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError("replay: '" + path + "' is not a wigcp JSON record: " + e.what());
    }
    return argv;
  }
  std::istringstream lines(text);
  std::string line;
  const std::string tag = "# argv =";
  while (std::getline(lines, line)) {
    if (line.rfind(tag, 0) == 0) {
      std::istringstream words(line.substr(tag.size()));
      std::string w;
      while (words >> w) argv.push_back(w);
      return argv;
    }
  }
  throw ConfigError("replay: no embedded configuration in '" + path + "'");
}

std::string cell_csv(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + "\"";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

std::string cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return nlohmann::json(v).dump();
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_number(v) : "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

int dispatch(RunConfig& c, std::ostream& out) {
  Record rec;
  if (c.command == "estimate") {
    validate(c, kEstimateMask);
    rec = cmd_estimate(c);
  } else if (c.command == "converge") {
    validate(c, kConvergeMask);
    rec = cmd_converge(c);
  } else if (c.command == "check") {
    validate(c, check_mask(c.suite));
    rec = cmd_check(c);
  } else if (c.command == "theory") {
    validate(c, kTheoryMask);
    rec = cmd_theory(c);
  } else if (c.command == "hciz-check") {
    validate(c, kHciZMask);
    rec = cmd_hciz(c);
  }
  const std::string text = c.format == "json" ? render_json(rec) : render_csv(rec);
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("--out: cannot write '" + c.out + "'");
    f << text;
  }
  bool passed = true;
  for (const auto& [k, v] : rec.summary) {
    if (k == "passed") passed = std::get<bool>(v);
  }
  return passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string render_csv(const Record& r) {
  std::ostringstream s;
  s << "# wigcp " << r.command << "\n";
  s << "# argv =";
  for (const auto& a : r.argv) s << ' ' << a;
  s << "\n";
  for (const auto& [k, v] : r.config) s << "# config." << k << " = " << cell_csv(v) << "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) s << (i ? "," : "") << r.columns[i];
  s << "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << cell_csv(row[i]);
    s << "\n";
  }
  for (const auto& [k, v] : r.summary) s << "# summary." << k << " = " << cell_csv(v) << "\n";
  return s.str();
}

std::string render_json(const Record& r) {
  std::ostringstream s;
  s << "{\n  \"command\": " << nlohmann::json(r.command).dump() << ",\n  \"argv\": [";
  for (std::size_t i = 0; i < r.argv.size(); ++i)
    s << (i ? ", " : "") << nlohmann::json(r.argv[i]).dump();
  s << "],\n  \"config\": {";
  for (std::size_t i = 0; i < r.config.size(); ++i) {
    s << (i ? "," : "") << "\n    " << nlohmann::json(r.config[i].first).dump() << ": "
      << cell_json(r.config[i].second);
  }
  s << "\n  },\n  \"columns\": [";
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    s << (i ? ", " : "") << nlohmann::json(r.columns[i]).dump();
  s << "],\n  \"rows\": [";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    s << (i ? "," : "") << "\n    [";
    for (std::size_t j = 0; j < r.rows[i].size(); ++j)
      s << (j ? ", " : "") << cell_json(r.rows[i][j]);
    s << "]";
  }
  s << "\n  ],\n  \"summary\": {";
  for (std::size_t i = 0; i < r.summary.size(); ++i) {
    s << (i ? "," : "") << "\n    " << nlohmann::json(r.summary[i].first).dump() << ": "
      << cell_json(r.summary[i].second);
  }
  s << "\n  }\n}\n";
  return s.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Characteristic-polynomial correlators of Wigner matrices"};
  app.name("wigcp");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig c;
  auto* est = app.add_subcommand("estimate", "Monte Carlo estimate of F_2m");
  add_options(est, c, kEstimateMask);
  auto* conv = app.add_subcommand("converge", "normalized F_2m against the sine-kernel limit");
  add_options(conv, c, kConvergeMask);
  auto* chk = app.add_subcommand("check", "run a verification suite");
  chk->add_option("suite", c.suite, "landscape | hciz | identity | oracle | representation")
      ->required();
  add_options(chk, c, kN | kLambda0 | kTrials | kSamples | kSeed | kWorkers);
  auto* th = app.add_subcommand("theory", "evaluate the closed-form quantities");
  add_options(th, c, kTheoryMask);
  auto* hz = app.add_subcommand("hciz-check", "per-pair HCIZ ratio table");
  add_options(hz, c, kHciZMask);
  auto* rp = app.add_subcommand("replay", "rerun the configuration embedded in an output file");
  rp->add_option("file", c.replay_file, "CSV or JSON output of an earlier run")->required();
  rp->add_option("--out", c.out, "output file (default: stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (rp->parsed()) {
      std::vector<std::string> argv = read_embedded_argv(c.replay_file);
      if (!c.out.empty()) {
        argv.push_back("--out");
        argv.push_back(c.out);
      }
      return run_cli(argv, out, err);
    }
    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    apply_defaults(c);
    return dispatch(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace wigcp
