#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdg/config.hpp"
#include "mdg/convergence.hpp"
#include "mdg/schemes.hpp"
#include "mdg/stability.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kSolverFailure = 2;

std::string join(const std::vector<mdg::Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + mdg::to_string(v[i]);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  return s.str();
}

template <class Rows>
void print_matrix(const std::string& label, const Rows& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) std::cout << "  " << label << "[" << i << "] = " << join(rows[i]) << '\n';
}

void print_schemes() {
  for (const auto& s : mdg::builtin_two_point_schemes()) {
    std::cout << s.name << ": alpha = " << join(std::vector<mdg::Rational>(s.alpha.begin(), s.alpha.end()))
              << "; beta = " << join(std::vector<mdg::Rational>(s.beta.begin(), s.beta.end())) << '\n';
  }
  for (const auto& tab : {mdg::builtin_mdrk6(), mdg::builtin_gauss_legendre6()}) {
    std::cout << tab.name << ": stages = " << tab.stages << ", derivatives = " << tab.derivatives
              << ", order = " << tab.order << '\n';
    if (tab.exact) {
      const auto& e = *tab.exact;
      std::cout << "  c = " << join(e.c) << '\n';
      print_matrix("a1", e.a1);
      if (!e.a2.empty()) print_matrix("a2", e.a2);
      std::cout << "  b1 = " << join(e.b1) << '\n';
      if (!e.b2.empty()) std::cout << "  b2 = " << join(e.b2) << '\n';
    } else {
      std::cout << "  c = " << join(tab.c) << '\n';
      print_matrix("a1", tab.a1);
      if (!tab.a2.empty()) print_matrix("a2", tab.a2);
      std::cout << "  b1 = " << join(tab.b1) << '\n';
      if (!tab.b2.empty()) std::cout << "  b2 = " << join(tab.b2) << '\n';
    }
  }
}

void print_stats(const mdg::ConvergenceRow& r) {
  std::cout << "steps = " << r.stats.steps << ", gmres iterations = " << r.stats.total_iterations
            << " (max " << r.stats.max_iterations << "), max relative residual = " << r.stats.max_relative_residual
            << ", direct solves = " << r.stats.direct_solves << ", fallbacks = " << r.stats.fallbacks
            << ", seconds = " << r.seconds << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiderivative DG solver for linear convection-diffusion"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> degree;
  std::optional<int> levels;
  std::optional<int> level;
  std::string output;
  auto* conv = app.add_subcommand("convergence", "Run a mesh/time-step refinement study");
  conv->add_option("--config", config_path, "Config file")->required();
  conv->add_option("--degree", degree, "Override the polynomial degree");
  conv->add_option("--levels", levels, "Override the number of refinement levels");
  conv->add_option("--output", output, "Override the CSV output path");

  auto* solve = app.add_subcommand("solve", "Run a single level and report e_h");
  solve->add_option("--config", config_path, "Config file")->required();
  solve->add_option("--degree", degree, "Override the polynomial degree");
  solve->add_option("--level", level, "Override the mesh level");

  std::string method;
  auto* stab = app.add_subcommand("stability", "A-stability scan as CSV");
  stab->add_option("--method", method, "Method name, or 'all'")->required();

  auto* schemes = app.add_subcommand("schemes", "Print coefficient tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*schemes) {
      print_schemes();
      return kOk;
    }
    if (*stab) {
      std::vector<std::string> names;
      if (method == "all") {
        names = mdg::method_names();
      } else if (mdg::method_by_name(method)) {
        names.push_back(method);
      } else {
        std::cerr << "error: unknown method '" << method << "'\n";
        return kUsage;
      }
      mdg::write_stability_csv_header(std::cout);
      for (const auto& n : names) mdg::write_stability_csv_row(std::cout, mdg::a_stability_scan(*mdg::method_by_name(n)));
      return kOk;
    }

    mdg::RunConfig cfg;
    try {
      cfg = mdg::load_config(config_path);
      if (degree) cfg.degree = *degree;
      if (levels) cfg.levels = *levels;
      if (level) cfg.level = *level;
      if (!output.empty()) cfg.output = output;
      mdg::validate(cfg);
    } catch (const mdg::ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    }

    if (*solve) {
      const mdg::ConvergenceRow r = mdg::run_level(cfg, cfg.level);
      if (!r.ok()) {
        std::cerr << "error: " << r.status << '\n';
        return kSolverFailure;
      }
      std::cout.precision(17);
      std::cout << "level = " << r.level << ", h = " << r.h << ", dt = " << r.dt << ", ndof = " << r.ndof << '\n';
      std::cout << "e_h = " << r.l2_error << '\n';
      print_stats(r);
      return kOk;
    }

    const mdg::ConvergenceReport report = mdg::run_convergence(cfg);
    if (cfg.output.empty()) {
      mdg::write_report(report, std::cout);
    } else {
      mdg::write_report(report, cfg.output);
    }
    for (const auto& r : report.rows) {
      std::cerr << "level " << r.level << ": " << r.status;
      if (!r.ok()) {
        std::cerr << '\n';
        continue;
      }
      std::cerr << "; ";
      std::cerr.precision(6);
      std::cerr << "e_h = " << r.l2_error << ", gmres iterations = " << r.stats.total_iterations
                << ", fallbacks = " << r.stats.fallbacks << ", " << r.seconds << " s\n";
    }
    std::cerr << std::flush;
    return report.ok() ? kOk : kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
}
