// slred command-line front end.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slred/expr.hpp"
#include "slred/oracle.hpp"
#include "slred/slred.hpp"

using nlohmann::json;
using namespace slred;

namespace {

struct Global {
  double delta = 0.1;
  std::optional<double> epsilon, eta;
  std::string backend = "classical";
  std::uint64_t seed = 0;
  bool json = false;
  bool strict_dimacs = false;
  std::string config;
  unsigned threads = 1;
};

struct Inputs {
  std::string cnf, bits, matrix, vector, vector_file, q, f;
  std::optional<double> bound;
  std::optional<std::int64_t> limit;
};

struct Report {
  std::string task;
  json inputs = json::object();
  json result;
  double eta = 0.0;
  double delta = 0.0;
  QueryLedger ledger;
  bool mismatch = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw input_error(std::string("bad config JSON: ") + e.what());
  }
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "qpe") {
        for (const auto& [k, x] : v.items()) {
          auto& q = cfg.qpe;
          if (k == "c_disc") q.c_disc = x.get<double>();
          else if (k == "guard_bits") q.guard_bits = x.get<int>();
          else if (k == "chernoff_c") q.chernoff_c = x.get<double>();
          else if (k == "k_cap") q.k_cap = x.get<std::uint64_t>();
          else if (k == "dense_qubit_cap") q.dense_qubit_cap = x.get<int>();
          else if (k == "k_override") q.k_override = x.get<std::uint64_t>();
          else if (k == "truncation_weight") q.truncation_weight = x.get<double>();
          else throw input_error("unknown config key qpe." + k);
        }
      } else if (key == "integration") {
        for (const auto& [k, x] : v.items()) {
          auto& g = cfg.integration;
          if (k == "bump_alpha") g.bump_alpha = x.get<double>();
          else if (k == "log_base") g.log_base = x.get<double>();
          else if (k == "residual_constant") g.residual_constant = x.get<double>();
          else throw input_error("unknown config key integration." + k);
        }
      } else {
        throw input_error("unknown config section '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw input_error(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

json config_json(const Config& c) {
  json q = {{"c_disc", c.qpe.c_disc},   {"guard_bits", c.qpe.guard_bits},
            {"chernoff_c", c.qpe.chernoff_c}, {"k_cap", c.qpe.k_cap},
            {"dense_qubit_cap", c.qpe.dense_qubit_cap}};
  if (c.qpe.k_override) q["k_override"] = *c.qpe.k_override;
  if (c.qpe.truncation_weight) q["truncation_weight"] = *c.qpe.truncation_weight;
  return {{"qpe", q},
          {"integration",
           {{"bump_alpha", c.integration.bump_alpha},
            {"log_base", c.integration.log_base},
            {"residual_constant", c.integration.residual_constant}}}};
}

json ledger_json(const QueryLedger& l) {
  return {{"power_queries", l.power_queries},
          {"bit_queries", l.bit_queries},
          {"qubits_peak", l.qubits_peak},
          {"classical_ops", l.classical_ops},
          {"verification_queries", l.verification_queries}};
}

json plan_json(const PhaseEstimationPlan& p) { return {{"k", p.k}, {"b", p.b}, {"r", p.r}}; }

std::string bit_string(std::uint64_t j, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += ((j >> i) & 1u) ? '1' : '0';
  return s;
}

class Runner {
 public:
  Runner(const Global& g, const Inputs& in) : g_(g), in_(in) {
    cfg_ = load_config(g.config);
    cfg_.qpe.threads = g.threads == 0 ? 1 : g.threads;
    backend_ = parse_backend(g.backend);
    check_delta(g.delta);
  }

  Context context() const { return Context(backend_, g_.seed, cfg_); }

  Report start(const std::string& task) const {
    Report r;
    r.task = task;
    r.delta = g_.delta;
    r.inputs["config"] = config_json(cfg_);
    if (g_.epsilon) r.inputs["epsilon"] = *g_.epsilon;
    if (g_.eta) r.inputs["eta"] = *g_.eta;
    r.inputs["strict_dimacs"] = g_.strict_dimacs;
    return r;
  }

  // Boolean input from --cnf or --bits.
  BooleanOracle boolean(Report& r) const {
    if (in_.cnf.empty() == in_.bits.empty()) throw input_error("give exactly one of --cnf or --bits");
    if (!in_.cnf.empty()) {
      const std::string text = read_file(in_.cnf);
      r.inputs["cnf"] = fnv1a(text);
      return cnf_oracle(parse_dimacs(text, g_.strict_dimacs));
    }
    std::vector<std::uint8_t> v;
    for (char c : in_.bits) {
      if (c != '0' && c != '1') throw input_error("--bits must be a string of 0 and 1");
      v.push_back(c == '1');
    }
    r.inputs["bits"] = in_.bits;
    return BooleanOracle::from_bits(v);
  }

  std::vector<double> values(Report& r) const {
    if (in_.vector.empty() == in_.vector_file.empty()) throw input_error("give exactly one of --vector or --vector-file");
    std::string text = in_.vector;
    if (!in_.vector_file.empty()) {
      text = read_file(in_.vector_file);
      r.inputs["vector_file"] = fnv1a(text);
    } else {
      r.inputs["vector"] = text;
    }
    for (char& c : text)
      if (c == ',') c = ' ';
    std::istringstream ss(text);
    std::vector<double> v;
    std::string tok;
    while (ss >> tok) v.push_back(detail::parse_numbers(tok, tok).at(0));
    if (v.empty()) throw input_error("vector is empty");
    return v;
  }

  BoundedVector bounded(Report& r, double eps) const {
    const auto v = values(r);
    double top = 0.0;
    for (double x : v) top = std::max(top, std::abs(x));
    const double m = in_.bound ? *in_.bound : std::max(top, 2.0 * eps);
    r.inputs["bound"] = m;
    return BoundedVector::from_values(v, m);
  }

  DistanceMatrix matrix(Report& r) const {
    if (in_.matrix.empty()) throw input_error("--matrix is required");
    const std::string text = read_file(in_.matrix);
    r.inputs["matrix"] = fnv1a(text);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return DistanceMatrix::from_json(text);
    return DistanceMatrix::from_text(text);
  }

  FunctionSpec function(Report& r, const std::string& text, const char* key) const {
    if (text.empty()) throw input_error(std::string("--") + key + " is required");
    FunctionSpec f = parse_function(text);
    r.inputs[key] = text;
    if (text.rfind("file:", 0) == 0) r.inputs[std::string(key) + "_file"] = fnv1a(read_file(text.substr(5)));
    return f;
  }

  Report eigen() const {
    Report r = start("eigen");
    const FunctionSpec f = function(r, in_.q, "q");
    const Potential q = f.potential();
    q.check_admissible();
    Context ctx = context();
    r.eta = g_.eta.value_or(0.1);
    const LambdaEstimate e = estimate_lambda(q, r.eta, g_.delta, ctx);
    r.ledger = e.ledger;
    r.result = {{"value", e.value}, {"offset", e.offset}, {"plan", plan_json(e.plan)}};
    return r;
  }

  Report integrate() const {
    Report r = start("integrate");
    const FunctionSpec f = function(r, in_.f, "f");
    SmoothIntegrand g = f.integrand();
    if (in_.bound) {
      if (*in_.bound < f.bounds.max()) throw input_error("--bound is below the function's sup bounds");
      g.bound_m = *in_.bound;
    }
    Context ctx = context();
    r.eta = g_.epsilon.value_or(1e-3);
    const IntegralEstimate e = integrate_weighted(g, r.eta, g_.delta, ctx);
    r.ledger = e.ledger;
    r.result = {{"value", e.value}, {"trivial", e.trivial}, {"c", e.c},
                {"remainder_ok", e.remainder_ok}, {"bound_m", g.bound_m}};
    if (!e.trivial) r.result["plan"] = plan_json(e.lambda.plan);
    return r;
  }

  Report mean() const {
    Report r = start("mean");
    const BooleanOracle b = boolean(r);
    Context ctx = context();
    r.eta = g_.epsilon.value_or(0.25 / static_cast<double>(b.size()));
    const MeanEstimate e = boolean_mean(b, r.eta, g_.delta, ctx);
    r.ledger = e.ledger;
    r.result = {{"value", e.value}, {"count", e.count}, {"rounded", e.rounded},
                {"exact", e.exact}, {"N", b.size()}};
    return r;
  }

  Report sat(const std::string& mode) const {
    Report r = start("sat " + mode);
    const BooleanOracle b = boolean(r);
    Context ctx = context();
    if (mode == "decide") {
      const SatDecision d = sat_decide(b, g_.delta, ctx);
      r.eta = d.eta;
      r.ledger = d.ledger;
      r.result = {{"verdict", d.satisfiable ? "YES" : "NO"}, {"count", d.mean.count}};
    } else {
      const SatSearch s = sat_search(b, g_.delta, ctx);
      r.eta = s.eta;
      r.ledger = s.ledger;
      r.result = {{"index", s.index}, {"assignment", bit_string(s.index, b.n())},
                  {"witness_confirmed", s.witness_confirmed}};
    }
    return r;
  }

  Report grover() const {
    Report r = start("grover");
    const BooleanOracle b = boolean(r);
    Context ctx = context();
    const GroverResult g = grover_find(b, g_.delta, ctx);
    r.eta = g.eta;
    r.ledger = g.ledger;
    r.result = {{"index", g.index}, {"status", to_string(g.status)}};
    return r;
  }

  Report min(const std::string& mode) const {
    Report r = start("min " + mode);
    r.eta = g_.epsilon.value_or(1.0 / 3.0);
    const BoundedVector x = bounded(r, r.eta);
    Context ctx = context();
    if (mode == "value") {
      const MinValue m = min_value(x, r.eta, g_.delta, ctx);
      r.ledger = m.ledger;
      r.result = {{"value", m.value}, {"steps", m.steps}};
    } else {
      const MinIndex m = min_index(x, r.eta, g_.delta, ctx);
      r.ledger = m.ledger;
      r.result = {{"index", m.index}, {"entry", x[m.index]}, {"threshold", m.threshold},
                  {"confirmed", m.confirmed}};
    }
    return r;
  }

  Report tsp(const std::string& mode) const {
    Report r = start("tsp " + mode);
    const DistanceMatrix d = matrix(r);
    Context ctx = context();
    r.eta = 1.0 / 3.0;
    if (mode == "decide") {
      if (!in_.limit) throw input_error("tsp decide needs --limit");
      r.inputs["limit"] = *in_.limit;
      const TspDecision t = tsp_decide(d, *in_.limit, g_.delta, ctx);
      r.ledger = t.ledger;
      r.result = {{"verdict", t.yes ? "YES" : "NO"}, {"rounded_min", t.rounded_min}, {"bound", t.bound.bound}};
    } else {
      const TspSolution t = tsp_solve(d, g_.delta, ctx);
      r.ledger = t.ledger;
      r.result = {{"length", t.length}, {"bound", t.bound.bound}, {"consistent", t.consistent}};
      if (mode == "tour") r.result["tour"] = t.tour;
    }
    return r;
  }

  Report verify() const {
    Report r = start("verify");
    const int given = !in_.cnf.empty() + !in_.bits.empty() + !in_.matrix.empty() +
                      !(in_.vector.empty() && in_.vector_file.empty()) + !in_.q.empty();
    if (given != 1) throw input_error("verify takes exactly one of --cnf, --bits, --vector, --vector-file, --matrix, --q");
    Context ctx = context();
    json checks = json::array();
    auto check = [&](const std::string& name, const json& got, const json& want, bool ok) {
      checks.push_back({{"check", name}, {"got", got}, {"want", want}, {"ok", ok}});
      if (!ok) r.mismatch = true;
    };

    if (!in_.cnf.empty() || !in_.bits.empty()) {
      const BooleanOracle b = boolean(r);
      if (b.n() > oracle::kMaxSatVars) throw input_error("verify supports at most 24 variables");
      const auto truth = oracle::brute_sat([&b](std::uint64_t j) { return b(j); }, b.n());
      const std::uint64_t brute_calls = b.calls();
      const SatDecision d = sat_decide(b, g_.delta, ctx);
      r.ledger.merge(d.ledger);
      check("sat decide", d.satisfiable, truth.any, d.satisfiable == truth.any);
      if (truth.any) {
        const SatSearch s = sat_search(b, g_.delta, ctx);
        r.ledger.merge(s.ledger);
        check("sat search", s.index, *truth.smallest, s.index == *truth.smallest);
      }
      r.ledger.verification_queries += brute_calls;
      r.eta = d.eta;
    } else if (!in_.matrix.empty()) {
      const DistanceMatrix d = matrix(r);
      if (d.m() > oracle::kMaxTspCities) throw input_error("verify supports at most 9 cities");
      const auto truth = oracle::brute_tsp(d.rows());
      const TspSolution t = tsp_solve(d, g_.delta, ctx);
      r.ledger.merge(t.ledger);
      check("tsp length", t.length, truth.length, t.length == truth.length);
      check("tsp tour", t.tour, truth.tour, t.tour == truth.tour && t.consistent);
      r.eta = 1.0 / 3.0;
    } else if (!in_.q.empty()) {
      const FunctionSpec f = function(r, in_.q, "q");
      const Potential q = f.potential();
      q.check_admissible();
      r.eta = g_.eta.value_or(0.1);
      const ReferenceLambda ref = reference_lambda(q, r.eta / 8.0);
      if (!ref.converged) throw capacity_error("reference eigenvalue did not converge");
      const LambdaEstimate e = estimate_lambda(q, r.eta, g_.delta, ctx);
      r.ledger.merge(e.ledger);
      check("eigen", e.value, ref.value, std::abs(e.value - ref.value) <= r.eta);
    } else {
      r.eta = g_.epsilon.value_or(1.0 / 3.0);
      const BoundedVector x = bounded(r, r.eta);
      double lo = x[0];
      for (std::uint64_t j = 1; j < x.size(); ++j) lo = std::min(lo, x[j]);
      const MinValue mv = min_value(x, r.eta, g_.delta, ctx);
      r.ledger.merge(mv.ledger);
      check("min value", mv.value, lo, std::abs(mv.value - lo) <= r.eta);
      const MinIndex mi = min_index(x, r.eta, g_.delta, ctx);
      r.ledger.merge(mi.ledger);
      check("min index", x[mi.index], lo, x[mi.index] <= lo + r.eta);
    }
    r.result = {{"match", !r.mismatch}, {"checks", checks}};
    return r;
  }

  void emit(const Report& r, double wall) const {
    json inputs = r.inputs;
    inputs["task"] = r.task;
    inputs["backend"] = g_.backend;
    inputs["seed"] = g_.seed;
    inputs["delta"] = g_.delta;
    json out = {{"task", r.task},
                {"inputs_digest", fnv1a(inputs.dump())},
                {"result", r.result},
                {"eta", r.eta},
                {"delta", r.delta},
                {"backend", to_string(backend_)},
                {"ledger", ledger_json(r.ledger)},
                {"seed", g_.seed},
                {"wall_time", wall}};
    if (g_.json) {
      std::cout << out.dump(2) << "\n";
      return;
    }
    std::cout << r.task << " [" << to_string(backend_) << ", seed " << g_.seed << "]\n";
    for (const auto& [k, v] : r.result.items()) std::cout << "  " << k << ": " << v.dump() << "\n";
    std::cout << "  eta " << r.eta << "  delta " << r.delta << "\n";
    std::cout << "  power_queries " << r.ledger.power_queries << "  bit_queries " << r.ledger.bit_queries
              << "  qubits_peak " << r.ledger.qubits_peak << "  classical_ops " << r.ledger.classical_ops << "\n";
  }

 private:
  const Global& g_;
  const Inputs& in_;
  Config cfg_;
  Backend backend_ = Backend::classical;
};

void add_boolean(CLI::App* s, Inputs& in) {
  s->add_option("--cnf", in.cnf, "DIMACS CNF file");
  s->add_option("--bits", in.bits, "truth table, index 0 first");
}

void add_vector(CLI::App* s, Inputs& in) {
  s->add_option("--vector", in.vector, "comma separated entries");
  s->add_option("--vector-file", in.vector_file, "whitespace separated entries");
  s->add_option("--bound", in.bound, "M with |x_j| <= M");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reductions to a Sturm-Liouville eigenvalue, with classical and simulated quantum backends"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Inputs in;
  app.add_option("--delta", g.delta, "failure probability")->capture_default_str();
  app.add_option("--epsilon", g.epsilon, "accuracy for integrate, mean, min");
  app.add_option("--eta", g.eta, "eigenvalue accuracy");
  app.add_option("--backend", g.backend, "classical, spectral or dense")->capture_default_str();
  app.add_option("--seed", g.seed, "root seed")->capture_default_str();
  app.add_flag("--json", g.json, "JSON report");
  app.add_flag("--strict-dimacs", g.strict_dimacs, "enforce the header clause count");
  app.add_option("--config", g.config, "JSON file of tunable constants");
  app.add_option("--threads", g.threads, "worker threads for repetitions")->capture_default_str();

  auto* eigen = app.add_subcommand("eigen", "smallest eigenvalue of -u'' + q u");
  eigen->add_option("--q", in.q, "potential: const:v | linear:a,b | sine:amp,freq[,off] | file:path")->required();
  auto* integrate = app.add_subcommand("integrate", "int_0^1 f(x) sin^2(pi x) dx");
  integrate->add_option("--f", in.f, "integrand, same grammar as --q")->required();
  integrate->add_option("--bound", in.bound, "M bounding f, f', f''");
  auto* mean = app.add_subcommand("mean", "fraction of ones of a Boolean function");
  add_boolean(mean, in);
  auto* sat = app.add_subcommand("sat", "satisfiability");
  sat->require_subcommand(1);
  auto* sat_dec = sat->add_subcommand("decide", "is there a satisfying input");
  auto* sat_srch = sat->add_subcommand("search", "smallest satisfying input");
  add_boolean(sat_dec, in);
  add_boolean(sat_srch, in);
  auto* grover = app.add_subcommand("grover", "the unique marked index");
  add_boolean(grover, in);
  auto* minc = app.add_subcommand("min", "minimum of a bounded vector");
  minc->require_subcommand(1);
  auto* min_val = minc->add_subcommand("value", "minimum value");
  auto* min_idx = minc->add_subcommand("index", "index of a minimum");
  add_vector(min_val, in);
  add_vector(min_idx, in);
  auto* tsp = app.add_subcommand("tsp", "traveling salesman");
  tsp->require_subcommand(1);
  auto* tsp_dec = tsp->add_subcommand("decide", "is there a tour of length <= limit");
  tsp_dec->add_option("--limit", in.limit, "tour length bound")->required();
  auto* tsp_len = tsp->add_subcommand("length", "optimal tour length");
  auto* tsp_tour = tsp->add_subcommand("tour", "optimal tour");
  for (auto* s : {tsp_dec, tsp_len, tsp_tour}) s->add_option("--matrix", in.matrix, "distance matrix file (text or JSON)")->required();
  auto* verify = app.add_subcommand("verify", "compare against brute force");
  add_boolean(verify, in);
  add_vector(verify, in);
  verify->add_option("--matrix", in.matrix, "distance matrix file");
  verify->add_option("--q", in.q, "potential");
  for (auto* s : std::vector<CLI::App*>{eigen, integrate, mean, sat, sat_dec, sat_srch, grover, minc, min_val, min_idx, tsp,
                                        tsp_dec, tsp_len, tsp_tour, verify})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    const Runner run(g, in);
    Report r;
    if (eigen->parsed()) r = run.eigen();
    else if (integrate->parsed()) r = run.integrate();
    else if (mean->parsed()) r = run.mean();
    else if (sat_dec->parsed()) r = run.sat("decide");
    else if (sat_srch->parsed()) r = run.sat("search");
    else if (grover->parsed()) r = run.grover();
    else if (min_val->parsed()) r = run.min("value");
    else if (min_idx->parsed()) r = run.min("index");
    else if (tsp_dec->parsed()) r = run.tsp("decide");
    else if (tsp_len->parsed()) r = run.tsp("length");
    else if (tsp_tour->parsed()) r = run.tsp("tour");
    else r = run.verify();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.emit(r, wall);
    return r.mismatch ? 4 : 0;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
