// Command-line front end: pointwise evaluation of the special functions and
// weights, lattice pair inspection, exact Bernoulli polynomial tables, and
// the seeded identity checker with JSON reports.

#include <CLI11.hpp>

#include <array>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gerbe/checker.hpp"

namespace {

using gerbe::Complex;
using nlohmann::ordered_json;

double parse_real(const std::string& text) {
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  if (pos != text.size())
    throw std::invalid_argument("could not parse number '" + text + "'");
  return v;
}

// Complex literals in the form RE, IMi, or RE+IMi / RE-IMi, e.g. "0.5-0.25i".
Complex parse_complex(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             text.end());
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  if (text.back() == 'i' || text.back() == 'I') {
    std::string body = text.substr(0, text.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
      char c = body[k];
      if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    if (split == std::string::npos) {
      if (body.empty() || body == "+") return {0.0, 1.0};
      if (body == "-") return {0.0, -1.0};
      return {0.0, parse_real(body)};
    }
    std::string re = body.substr(0, split);
    std::string im = body.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {parse_real(re), parse_real(im)};
  }
  return {parse_real(text), 0.0};
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

gerbe::LatticeVector parse_lattice_vector(const std::string& text) {
  auto parts = split_commas(text);
  if (parts.size() != 3)
    throw std::invalid_argument("lattice vector '" + text +
                                "' must have three comma-separated integers");
  gerbe::LatticeVector v;
  for (int i = 0; i < 3; ++i) {
    std::size_t pos = 0;
    v[i] = std::stoll(parts[i], &pos);
    if (pos != parts[i].size())
      throw std::invalid_argument("could not parse integer '" + parts[i] + "'");
  }
  return v;
}

std::array<Complex, 3> parse_complex_triple(const std::string& text) {
  auto parts = split_commas(text);
  if (parts.size() != 3)
    throw std::invalid_argument("point '" + text +
                                "' must have three comma-separated complex entries");
  return {parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
}

std::optional<double> env_tolerance(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return {};
  try {
    return parse_real(raw);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) + " must hold a number, got '" + raw + "'");
  }
}

ordered_json int_triple(const std::array<long long, 3>& e) {
  return ordered_json::array({e[0], e[1], e[2]});
}

ordered_json covector_json(const gerbe::CoVector& v) { return int_triple(v.e); }

ordered_json matrix_json(const gerbe::Mat3& g) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(int_triple(g.m[i]));
  return rows;
}

const char* kind_name(gerbe::WedgeKind kind) {
  switch (kind) {
    case gerbe::WedgeKind::ParallelPlus:
      return "parallel";
    case gerbe::WedgeKind::ParallelMinus:
      return "opposite";
    default:
      return "independent";
  }
}

ordered_json normal_form_json(const gerbe::NormalForm& nf) {
  ordered_json j;
  j["kind"] = kind_name(nf.kind);
  j["r"] = nf.r;
  j["s"] = nf.s;
  j["g"] = matrix_json(nf.g);
  j["c"] = int_triple(nf.c.e);
  return j;
}

ordered_json value_json(Complex v, const gerbe::EvalInfo* info) {
  ordered_json j;
  j["re"] = v.real();
  j["im"] = v.imag();
  if (info != nullptr) j["tail_bound"] = info->tail_bound;
  return j;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::string monomial_text(const std::vector<int>& exponents) {
  std::string out;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += i == 0 ? "w" : "x" + std::to_string(i);
    if (exponents[i] != 1) out += "^" + std::to_string(exponents[i]);
  }
  return out.empty() ? "1" : out;
}

int cmd_bernoulli(int r, int n, const std::string& format) {
  gerbe::MultiBernoulli b = gerbe::multi_bernoulli(r, n);
  std::string divisor;
  for (int i = 1; i <= r; ++i) divisor += (i > 1 ? "*x" : "x") + std::to_string(i);

  if (format == "text") {
    std::cout << "B_{" << r << "," << n << "} = (";
    bool first = true;
    for (const auto& [e, c] : b.numerator.terms()) {
      std::string coeff = gerbe::to_string(c);
      if (!coeff.empty() && coeff[0] == '-') {
        std::cout << (first ? "-" : " - ") << coeff.substr(1);
      } else {
        if (!first) std::cout << " + ";
        std::cout << coeff;
      }
      std::cout << "*" << monomial_text(e);
      first = false;
    }
    if (first) std::cout << "0";
    std::cout << ")";
    if (r > 0) std::cout << " / (" << divisor << ")";
    std::cout << "\n";
    return 0;
  }

  ordered_json j;
  j["r"] = r;
  j["n"] = n;
  ordered_json vars = ordered_json::array({"w"});
  for (int i = 1; i <= r; ++i) vars.push_back("x" + std::to_string(i));
  j["variables"] = vars;
  j["divisor"] = divisor;
  ordered_json terms = ordered_json::array();
  for (const auto& [e, c] : b.numerator.terms()) {
    ordered_json t;
    t["exponents"] = e;
    t["coefficient"] = gerbe::to_string(c);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  emit(j);
  return 0;
}

void print_check_list() {
  for (const gerbe::IdentitySpec& spec : gerbe::identity_registry()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-28s", spec.name.c_str());
    std::cout << buf << " " << spec.description << " (samples " << spec.default_samples
              << ", tol " << spec.default_tol << ")\n";
  }
}

int run_check_all(std::uint64_t seed, const std::string& config_path, const std::string& only) {
  std::map<std::string, gerbe::CheckOverride> overrides;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("could not open config file '" + config_path + "'");
    nlohmann::json config = nlohmann::json::parse(in);
    overrides = gerbe::parse_overrides(config);
  }
  if (auto tol = env_tolerance("GERBE_CHECK_TOL")) {
    for (const gerbe::IdentitySpec& spec : gerbe::identity_registry())
      if (!overrides[spec.name].tol.has_value()) overrides[spec.name].tol = *tol;
  }

  std::vector<gerbe::CheckReport> reports;
  if (!only.empty()) {
    auto it = overrides.find(gerbe::find_identity(only).name);
    gerbe::CheckOverride ov = it == overrides.end() ? gerbe::CheckOverride{} : it->second;
    reports.push_back(gerbe::run_check(only, ov.samples, seed, ov.tol));
  } else {
    reports = gerbe::run_all(seed, overrides);
  }

  ordered_json arr = ordered_json::array();
  bool all_pass = true;
  long long passed = 0;
  for (const gerbe::CheckReport& rep : reports) {
    arr.push_back(gerbe::to_json(rep));
    std::cerr << gerbe::format_summary_line(rep) << "\n";
    all_pass = all_pass && rep.pass;
    passed += rep.pass ? 1 : 0;
  }
  std::cout << arr.dump(2) << "\n";
  std::cerr << passed << " of " << reports.size() << " checks passed\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Evaluator and identity checker for elliptic gamma functions on lattice wedges"};
  app.require_subcommand(0, 1);

  bool list_checks = false;
  app.add_flag("--list", list_checks,
               "list every named identity check with its description and defaults");

  // ---- eval ---------------------------------------------------------------
  CLI::App* eval = app.add_subcommand("eval", "evaluate one function at one point");
  eval->require_subcommand(1);
  std::string z_s, tau_s, sigma_s, w_s, x_s, a_s, b_s;
  double eval_tol = 0.0;
  bool eval_tol_set = false;
  auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", eval_tol, "truncation tolerance (default 1e-14, or GERBE_EVAL_TOL)")
        ->each([&](const std::string&) { eval_tol_set = true; });
  };

  CLI::App* ev_theta = eval->add_subcommand("theta", "theta product at (z, tau)");
  ev_theta->add_option("--z", z_s, "argument, e.g. 0.1+0.2i")->required();
  ev_theta->add_option("--tau", tau_s, "modulus, nonreal")->required();
  add_tol(ev_theta);

  CLI::App* ev_gamma = eval->add_subcommand("gamma", "elliptic gamma at (z, tau, sigma)");
  ev_gamma->add_option("--z", z_s, "argument")->required();
  ev_gamma->add_option("--tau", tau_s, "first modulus, nonreal")->required();
  ev_gamma->add_option("--sigma", sigma_s, "second modulus, nonreal")->required();
  add_tol(ev_gamma);

  CLI::App* ev_h3 = eval->add_subcommand("h3", "cubic hermitian weight at (z, tau, sigma)");
  ev_h3->add_option("--z", z_s, "argument")->required();
  ev_h3->add_option("--tau", tau_s, "first modulus, nonreal")->required();
  ev_h3->add_option("--sigma", sigma_s, "second modulus, nonreal")->required();

  CLI::App* ev_wg = eval->add_subcommand(
      "wedge-gamma", "pair product for lattice vectors a, b at a point (w, x)");
  ev_wg->add_option("--a", a_s, "first lattice vector, e.g. 1,0,0")->required();
  ev_wg->add_option("--b", b_s, "second lattice vector")->required();
  ev_wg->add_option("--w", w_s, "base variable, complex")->required();
  ev_wg->add_option("--x", x_s, "three comma-separated complex entries")->required();
  add_tol(ev_wg);

  // ---- wedge-info / normal-form -------------------------------------------
  std::string wi_a, wi_b;
  CLI::App* winfo = app.add_subcommand(
      "wedge-info", "direction covector, modulus, frame, and fundamental set of a pair");
  winfo->add_option("--a", wi_a, "first lattice vector")->required();
  winfo->add_option("--b", wi_b, "second lattice vector")->required();

  std::string nf_a, nf_b;
  CLI::App* nform = app.add_subcommand(
      "normal-form", "orbit representative of a pair under the lattice symmetry group");
  nform->add_option("--a", nf_a, "first lattice vector")->required();
  nform->add_option("--b", nf_b, "second lattice vector")->required();

  // ---- bernoulli ----------------------------------------------------------
  int br = 0, bn = 0;
  std::string bformat = "json";
  CLI::App* bern = app.add_subcommand(
      "bernoulli", "exact coefficient table of a generalized Bernoulli polynomial");
  bern->add_option("--r", br, "number of parameters")->required()->check(CLI::Range(0, 6));
  bern->add_option("--n", bn, "degree index")->required()->check(CLI::Range(0, 10));
  bern->add_option("--format", bformat, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  // ---- check / check-all --------------------------------------------------
  std::string check_name;
  long long check_samples = 0;
  std::uint64_t seed = 42;
  double check_tol = 0.0;
  bool check_samples_set = false, check_tol_set = false;
  CLI::App* check = app.add_subcommand("check", "run one named identity check");
  check->add_option("name", check_name, "identity name (see --list)")->required();
  check->add_option("--samples", check_samples, "number of sampled configurations")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { check_samples_set = true; });
  check->add_option("--seed", seed, "run seed");
  check->add_option("--tol", check_tol, "relative deviation tolerance")
      ->each([&](const std::string&) { check_tol_set = true; });

  std::string config_path, only_name;
  CLI::App* call = app.add_subcommand("check-all", "run every registered identity check");
  call->add_option("--config", config_path,
                   "JSON file with per-identity overrides {\"name\": {\"samples\": N, \"tol\": T}}");
  call->add_option("--seed", seed, "run seed");
  call->add_option("--only", only_name, "restrict the run to a single identity");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_checks) {
      print_check_list();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return 0;
    }

    if (eval->parsed()) {
      gerbe::TruncationPolicy pol;
      if (eval_tol_set) {
        pol.tol = eval_tol;
      } else if (auto tol = env_tolerance("GERBE_EVAL_TOL")) {
        pol.tol = *tol;
      }
      if (pol.tol <= 0.0) throw std::invalid_argument("tolerance must be positive");

      gerbe::EvalInfo info;
      if (ev_theta->parsed()) {
        Complex v = gerbe::theta0(parse_complex(z_s), parse_complex(tau_s), pol, &info);
        emit(value_json(v, &info));
      } else if (ev_gamma->parsed()) {
        Complex v = gerbe::elliptic_gamma(parse_complex(z_s), parse_complex(tau_s),
                                          parse_complex(sigma_s), pol, &info);
        emit(value_json(v, &info));
      } else if (ev_h3->parsed()) {
        double v = gerbe::h3(parse_complex(z_s), parse_complex(tau_s), parse_complex(sigma_s));
        ordered_json j;
        j["value"] = v;
        emit(j);
      } else if (ev_wg->parsed()) {
        gerbe::HomPoint p{parse_complex(w_s), parse_complex_triple(x_s)};
        Complex v = gerbe::wedge_gamma(parse_lattice_vector(a_s), parse_lattice_vector(b_s), p,
                                       pol);
        emit(value_json(v, nullptr));
      }
      return 0;
    }

    if (winfo->parsed()) {
      gerbe::LatticeVector a = parse_lattice_vector(wi_a);
      gerbe::LatticeVector b = parse_lattice_vector(wi_b);
      auto [gamma, s] = gerbe::direction_vector(a, b);
      ordered_json j;
      j["a"] = int_triple(a.e);
      j["b"] = int_triple(b.e);
      j["gamma"] = covector_json(gamma);
      j["modulus"] = s;
      if (s != 0) {
        gerbe::WedgeFrame f = gerbe::wedge_frame(a, b);
        j["alpha"] = covector_json(f.alpha);
        j["beta"] = covector_json(f.beta);
        ordered_json fset = ordered_json::array();
        for (const gerbe::CoVector& d : gerbe::fundamental_set(a, b))
          fset.push_back(covector_json(d));
        j["fundamental_set"] = std::move(fset);
      }
      j["normal_form"] = normal_form_json(gerbe::normal_form(a, b));
      emit(j);
      return 0;
    }

    if (nform->parsed()) {
      emit(normal_form_json(
          gerbe::normal_form(parse_lattice_vector(nf_a), parse_lattice_vector(nf_b))));
      return 0;
    }

    if (bern->parsed()) return cmd_bernoulli(br, bn, bformat);

    if (check->parsed()) {
      std::optional<long long> samples;
      if (check_samples_set) samples = check_samples;
      std::optional<double> tol;
      if (check_tol_set)
        tol = check_tol;
      else
        tol = env_tolerance("GERBE_CHECK_TOL");
      gerbe::CheckReport rep = gerbe::run_check(check_name, samples, seed, tol);
      emit(gerbe::to_json(rep));
      return rep.pass ? 0 : 1;
    }

    if (call->parsed()) return run_check_all(seed, config_path, only_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cout << app.help();
  return 0;
}
