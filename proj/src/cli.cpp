#include "mtorus/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "mtorus/determinants.hpp"
#include "mtorus/numerics.hpp"
#include "mtorus/oracle.hpp"
#include "mtorus/torsion.hpp"
#include "mtorus/verify.hpp"

namespace mtorus::cli {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::string quantity;
  std::vector<std::pair<std::string, std::string>> params;
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t blocks_used = 0;
  double runtime_ms = 0.0;
  std::vector<std::pair<std::string, double>> extras;

  std::string render(const std::string& format) const {
    std::ostringstream os;
    if (format == "json") {
      os << "{\"quantity\": \"" << quantity << "\", \"params\": {";
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) os << ", ";
        os << "\"" << params[i].first << "\": " << params[i].second;
      }
      os << "}, \"value\": " << fmt17(value)
         << ", \"tail_bound\": " << fmt17(tail_bound)
         << ", \"blocks_used\": " << blocks_used;
      for (const auto& [k, v] : extras) os << ", \"" << k << "\": " << fmt17(v);
      os << ", \"runtime_ms\": " << fmt17(runtime_ms) << "}\n";
    } else if (format == "csv") {
      os << "quantity,value,tail_bound,blocks_used";
      for (const auto& [k, v] : extras) os << "," << k;
      for (const auto& [k, v] : params) os << "," << k;
      os << ",runtime_ms\n";
      os << quantity << "," << fmt17(value) << "," << fmt17(tail_bound) << ","
         << blocks_used;
      for (const auto& [k, v] : extras) os << "," << fmt17(v);
      for (const auto& [k, v] : params) os << "," << v;
      os << "," << fmt17(runtime_ms) << "\n";
    } else {
      os << "quantity     = " << quantity << "\n";
      for (const auto& [k, v] : params) os << k << " = " << v << "\n";
      os << "value        = " << fmt17(value) << "\n";
      os << "tail_bound   = " << fmt17(tail_bound) << "\n";
      os << "blocks_used  = " << blocks_used << "\n";
      for (const auto& [k, v] : extras) os << k << " = " << fmt17(v) << "\n";
      os << "runtime_ms   = " << fmt17(runtime_ms) << "\n";
    }
    return os.str();
  }
};

struct GeometryFlags {
  std::string base = "circle";
  std::string isometry = "identity";
  double a = 2.0 * kPi;
  double rho = 1.0;
  double l1 = 2.0 * kPi;
  double l2 = 2.0 * kPi;
  double angle = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--base", base, "Base manifold: circle | torus");
    cmd->add_option("--isometry", isometry,
                    "identity | reflection | rotation | swap-shift");
    cmd->add_option("--a", a, "Interval length of the mapping torus")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rho", rho, "Circle radius")->check(CLI::PositiveNumber);
    cmd->add_option("--l1", l1, "First torus period")->check(CLI::PositiveNumber);
    cmd->add_option("--l2", l2, "Second torus period")->check(CLI::PositiveNumber);
    cmd->add_option("--angle", angle, "Rotation angle (radians)");
  }

  ManifoldSpec manifold() const {
    if (base == "circle") return ManifoldSpec::circle(rho);
    if (base == "torus") return ManifoldSpec::rect_torus(l1, l2);
    throw std::invalid_argument("unknown base '" + base + "' (field: --base)");
  }

  MappingTorusSpec mapping_torus() const {
    ManifoldSpec m = manifold();
    IsometrySpec iso = IsometrySpec::identity(m);
    if (isometry == "identity") {
      iso = IsometrySpec::identity(m);
    } else if (isometry == "reflection") {
      iso = IsometrySpec::circle_reflection(m);
    } else if (isometry == "rotation") {
      iso = IsometrySpec::circle_rotation(m, angle);
    } else if (isometry == "swap-shift") {
      iso = IsometrySpec::torus_swap_shift(m);
    } else {
      throw std::invalid_argument("unknown isometry '" + isometry +
                                  "' (field: --isometry)");
    }
    return MappingTorusSpec(m, iso, a);
  }

  void record(Output& out) const {
    out.params.emplace_back("a", fmt17(a));
    if (base == "circle") {
      out.params.emplace_back("rho", fmt17(rho));
    } else {
      out.params.emplace_back("l1", fmt17(l1));
      out.params.emplace_back("l2", fmt17(l2));
    }
  }
};

struct PolicyFlags {
  double cutoff = TruncationPolicy::defaults().cutoff;
  double tail_tol = TruncationPolicy::defaults().tail_tol;

  void attach(CLI::App* cmd) {
    cmd->add_option("--cutoff", cutoff, "Eigenvalue cutoff for series")
        ->check(CLI::Range(1.0, 1e7));
    cmd->add_option("--tail-tol", tail_tol, "Tail tolerance, in (0, 1e-2]")
        ->check(CLI::Range(1e-300, 1e-2));
  }

  TruncationPolicy policy() const {
    TruncationPolicy p;
    p.cutoff = cutoff;
    p.tail_tol = tail_tol;
    return p;
  }
};

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

int run_det(const std::string& target, const GeometryFlags& geo,
            const PolicyFlags& pol, int q, double lambda,
            const std::string& format, bool precision_report, std::string& out) {
  Timer timer;
  Output o;
  TruncationPolicy policy = pol.policy();
  DetResult result;
  if (target == "klein-bottle") {
    o.quantity = "det.klein-bottle";
    result.value = klein_bottle_det(geo.a, geo.rho);
    result.tail_bound = 1e-20;  // series cut at e^{-50} terms
    o.params.emplace_back("a", fmt17(geo.a));
    o.params.emplace_back("rho", fmt17(geo.rho));
  } else if (target == "t2-phi") {
    o.quantity = "det.t2-phi";
    result = t2_phi_det_detailed(policy);
  } else if (target == "product") {
    o.quantity = "det.product";
    result.value = product_with_circle_det(geo.manifold(), geo.a, policy);
    result.tail_bound = policy.tail_tol;
    geo.record(o);
  } else if (target == "mapping-torus") {
    o.quantity = "det.mapping-torus";
    MappingTorusSpec spec = geo.mapping_torus();
    result = lambda > 0.0 ? mapping_torus_det_shifted(spec, q, lambda, policy)
                          : mapping_torus_det_modified(spec, q, policy);
    geo.record(o);
    o.params.emplace_back("q", std::to_string(q));
    o.params.emplace_back("lambda", fmt17(lambda));
  } else {
    throw std::invalid_argument("unknown det target '" + target +
                                "' (field: target)");
  }
  o.value = result.value;
  o.tail_bound = result.tail_bound;
  o.blocks_used = result.blocks_used;
  if (precision_report)
    for (const auto& [k, v] : result.diagnostics) o.extras.emplace_back(k, v);
  o.runtime_ms = timer.ms();
  out += o.render(format);
  return 0;
}

int run_torsion(const std::string& spec_name, const GeometryFlags& geo,
                const PolicyFlags& pol, const std::string& pathway, bool witten,
                double t, const std::string& format, std::string& out) {
  Timer timer;
  GeometryFlags g = geo;
  if (spec_name == "klein") {
    g.base = "circle";
    g.isometry = "reflection";
  } else if (spec_name == "circle-rotation") {
    g.base = "circle";
    g.isometry = "rotation";
  } else if (spec_name == "circle-identity") {
    g.base = "circle";
    g.isometry = "identity";
  } else if (spec_name == "t2-phi") {
    g.base = "torus";
    g.isometry = "swap-shift";
    g.l1 = g.l2 = 2.0 * kPi;
    g.a = 2.0 * kPi;
  } else if (!spec_name.empty()) {
    throw std::invalid_argument("unknown torsion spec '" + spec_name +
                                "' (field: --spec)");
  }
  MappingTorusSpec spec = g.mapping_torus();
  Output o;
  g.record(o);
  if (witten) {
    o.quantity = "torsion.witten";
    o.params.emplace_back("t", fmt17(t));
    double direct = witten_torsion(spec, t);
    if (pathway == "both" || pathway == "definition") {
      double assembled = witten_torsion_assembled(spec, t, pol.policy());
      if (pathway == "definition") {
        o.value = assembled;
      } else {
        o.value = direct;
        o.extras.emplace_back("value_assembled", assembled);
        o.extras.emplace_back("difference", direct - assembled);
      }
    } else {
      o.value = direct;
    }
  } else {
    o.quantity = "torsion.analytic";
    double closed = analytic_torsion(spec);
    if (pathway == "both" || pathway == "definition") {
      double assembled = torsion_from_definition(spec, pol.policy());
      if (pathway == "definition") {
        o.value = assembled;
      } else {
        o.value = closed;
        o.extras.emplace_back("value_definition", assembled);
        o.extras.emplace_back("difference", closed - assembled);
      }
    } else {
      o.value = closed;
    }
  }
  o.runtime_ms = timer.ms();
  out += o.render(format);
  return 0;
}

int run_heat(const std::string& spec_name, const GeometryFlags& geo, double t,
             const std::string& format, std::string& out) {
  Timer timer;
  Output o;
  o.quantity = "heat." + spec_name;
  o.params.emplace_back("t", fmt17(t));
  if (spec_name == "klein") {
    o.value = heat_trace(klein_bottle_raw(geo.a, geo.rho), t);
    o.params.emplace_back("a", fmt17(geo.a));
    o.params.emplace_back("rho", fmt17(geo.rho));
  } else if (spec_name == "torus") {
    o.value = heat_trace(rect_torus_raw(geo.l1, geo.l2), t);
    o.params.emplace_back("l1", fmt17(geo.l1));
    o.params.emplace_back("l2", fmt17(geo.l2));
  } else if (spec_name == "circle") {
    o.value = heat_trace(circle_modes_raw(2.0 * kPi * geo.rho), t);
    o.params.emplace_back("rho", fmt17(geo.rho));
  } else if (spec_name == "t2-phi") {
    o.value = heat_trace(t2_phi_raw(), t);
  } else if (spec_name == "product") {
    o.value = heat_trace(product_t2_s1_raw(geo.l1, geo.l2, geo.a), t);
    o.params.emplace_back("l1", fmt17(geo.l1));
    o.params.emplace_back("l2", fmt17(geo.l2));
    o.params.emplace_back("a", fmt17(geo.a));
  } else {
    throw std::invalid_argument("unknown heat spec '" + spec_name +
                                "' (field: --spec)");
  }
  o.runtime_ms = timer.ms();
  out += o.render(format);
  return 0;
}

int run_verify(const std::string& only, std::uint64_t seed,
               const std::string& format, std::string& out) {
  auto results = verify::run_all(only, seed);
  if (results.empty())
    throw std::invalid_argument("verify: no check matches '" + only +
                                "' (field: --only)");
  bool all_passed = true;
  if (format == "json") {
    out += "[";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      if (i) out += ", ";
      out += "{\"check\": \"" + r.name + "\", \"passed\": " +
             (r.passed ? "true" : "false") +
             ", \"residual\": " + fmt17(r.residual) +
             ", \"tolerance\": " + fmt17(r.tolerance) +
             ", \"detail\": \"" + r.detail + "\"" +
             ", \"runtime_ms\": " + fmt17(r.runtime_ms) + "}";
      all_passed = all_passed && r.passed;
    }
    out += "]\n";
  } else {
    for (const auto& r : results) {
      char line[256];
      std::snprintf(line, sizeof line, "%-14s %s  residual %.3e  (tol %.1e)\n",
                    r.name.c_str(), r.passed ? "PASS" : "FAIL", r.residual,
                    r.tolerance);
      out += line;
      all_passed = all_passed && r.passed;
    }
  }
  return all_passed ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::string& out,
        std::string& err) {
  CLI::App app{
      "Zeta-regularized determinants and analytic torsion of metric mapping "
      "tori over flat bases"};
  app.set_config("--config", "", "Key-value config file; explicit flags win");
  std::string format = "plain";
  app.add_option("--format", format, "Output format: json | csv | plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  bool precision_report = false;
  app.add_flag("--precision-report", precision_report,
               "Include per-term diagnostics in the output");
  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "Seed for randomized verification checks");

  GeometryFlags geo;
  PolicyFlags pol;

  auto* det = app.add_subcommand("det", "Log-determinant of a named geometry");
  det->fallthrough();
  std::string det_target;
  det->add_option("target", det_target,
                  "klein-bottle | t2-phi | product | mapping-torus")
      ->required();
  int q = 0;
  double lambda = 0.0;
  det->add_option("--q", q, "Form degree");
  det->add_option("--lambda", lambda, "Spectral shift (0 = modified determinant)")
      ->check(CLI::NonNegativeNumber);
  geo.attach(det);
  pol.attach(det);

  auto* torsion = app.add_subcommand("torsion", "Analytic torsion");
  torsion->fallthrough();
  std::string torsion_spec;
  std::string pathway = "closed";
  bool witten = false;
  double witten_t = 1.0;
  torsion->add_option("--spec", torsion_spec,
                      "klein | circle-rotation | circle-identity | t2-phi");
  torsion->add_option("--pathway", pathway, "closed | definition | both")
      ->check(CLI::IsMember({"closed", "definition", "both"}));
  torsion->add_flag("--witten", witten, "Deformed torsion at parameter t");
  torsion->add_option("--t", witten_t, "Deformation parameter")
      ->check(CLI::PositiveNumber);
  geo.attach(torsion);
  pol.attach(torsion);

  auto* heat = app.add_subcommand("heat", "Heat trace of a named spectrum");
  heat->fallthrough();
  std::string heat_spec = "klein";
  double heat_t = 1.0;
  heat->add_option("--spec", heat_spec, "klein | torus | circle | t2-phi | product");
  heat->add_option("--t", heat_t, "Heat time")->check(CLI::PositiveNumber);
  geo.attach(heat);

  auto* verify_cmd =
      app.add_subcommand("verify", "Run the oracle cross-validation suite");
  verify_cmd->fallthrough();
  std::string only;
  verify_cmd->add_option("--only", only, "Run only checks containing this name");

  app.require_subcommand(1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    int code = app.exit(e, os, os);
    (code == 0 ? out : err) += os.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (det->parsed())
      return run_det(det_target, geo, pol, q, lambda, format, precision_report,
                     out);
    if (torsion->parsed())
      return run_torsion(torsion_spec, geo, pol, pathway, witten, witten_t,
                         format, out);
    if (heat->parsed()) return run_heat(heat_spec, geo, heat_t, format, out);
    if (verify_cmd->parsed()) return run_verify(only, seed, format, out);
  } catch (const TruncationError& e) {
    err += std::string("truncation failure: ") + e.what() + "\n";
    return 2;
  } catch (const std::exception& e) {
    err += std::string("invalid input: ") + e.what() + "\n";
    return 1;
  }
  err += "no subcommand\n";
  return 1;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string out, err;
  int code = run(args, out, err);
  std::cout << out;
  std::cerr << err;
  return code;
}

}  // namespace mtorus::cli
