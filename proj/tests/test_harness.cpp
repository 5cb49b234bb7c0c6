#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdg/config.hpp"
#include "mdg/convergence.hpp"
#include "mdg/dg_operator.hpp"

using namespace mdg;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

RunConfig small(const std::string& problem, const std::string& method, int degree, int levels) {
  RunConfig c;
  c.problem = problem;
  c.method = method;
  c.degree = degree;
  c.levels = levels;
  c.dt0 = problem == "convection" ? 0.25 : 0.5;
  return c;
}

std::string csv(const ConvergenceReport& r) {
  std::ostringstream out;
  write_report(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse(
      "# a comment\n"
      "problem = convection_diffusion\n"
      "method = tp6   # trailing comment\n"
      "degree = 3\n"
      "dt0 = 0.5\n"
      "levels = 4\n"
      "\n"
      "eta = 25\n"
      "solver = direct\n"
      "rtol = 1e-11\n"
      "restart = 30\n"
      "maxit = 100\n"
      "ilu_level = 1\n"
      "level = 2\n"
      "fallback_limit = 1000\n"
      "output = out.csv\n");
  CHECK(c.problem == "convection_diffusion");
  CHECK(c.method == "tp6");
  CHECK(c.degree == 3);
  CHECK(c.dt0 == 0.5);
  CHECK(c.levels == 4);
  CHECK(c.penalty() == 25.0);
  CHECK(c.solver == SolverKind::direct);
  CHECK(c.gmres.rtol == 1e-11);
  CHECK(c.gmres.restart == 30);
  CHECK(c.gmres.max_iterations == 100);
  CHECK(c.ilu_level == 1);
  CHECK(c.level == 2);
  CHECK(c.output == "out.csv");
  CHECK(c.solver_settings().kind == SolverKind::direct);
  CHECK(c.solver_settings().ilu_level == 1);
  CHECK(c.solver_settings().direct_fallback_limit == 1000);
}

TEST_CASE("config defaults") {
  const RunConfig c = parse("method = tp4\n");
  CHECK(c.problem == "convection");
  CHECK(c.levels == 5);
  CHECK(c.dt0 == 0.25);
  CHECK(c.gmres.rtol == 1e-10);
  CHECK(c.ilu_level == 2);
  CHECK(c.penalty() == default_penalty(c.degree));
  CHECK(parse("degree = 5\n").penalty() == 30.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("degree = 2\ndegree = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("degree = two\n"), ConfigError);
  CHECK_THROWS_AS(parse("degree = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("dt0 = fast\n"), ConfigError);
  CHECK_THROWS_AS(parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse("levels = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("dt0 = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("dt0 = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("method = rk4\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem = burgers\n"), ConfigError);
  CHECK_THROWS_AS(parse("degree = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse("problem = convection_diffusion\ndegree = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("eta = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("solver = cg\n"), ConfigError);
  CHECK_THROWS_AS(parse("rtol = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("fallback_limit = -1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.cfg"), ConfigError);
  try {
    parse("degree = 1\nbogus = 1\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("shipped configs load") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(MDG_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++count;
  }
  CHECK(count >= 10);
  CHECK(load_config(std::string(MDG_CONFIG_DIR) + "/fig5a.cfg").dt0 == 1.0);
  CHECK(load_config(std::string(MDG_CONFIG_DIR) + "/fig6a.cfg").penalty() == 20.0);
}

TEST_CASE("single level") {
  const RunConfig c = small("convection", "tp3", 1, 1);
  const ConvergenceRow r = run_level(c, 2);
  CHECK(r.ok());
  CHECK(r.level == 2);
  CHECK(r.dt == 0.0625);
  CHECK(r.ndof == 32 * 3);
  CHECK(r.h == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
  CHECK(r.stats.steps == 16);
  CHECK(r.l2_error > 0.0);
  CHECK(r.final_norm <= r.initial_norm + 1e-8);
}

TEST_CASE("convergence study, report format and reproducibility") {
  const RunConfig c = small("convection_diffusion", "tp4", 2, 3);
  const ConvergenceReport a = run_convergence(c);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.ok());
  CHECK_FALSE(a.rows[0].observed_order.has_value());
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].l2_error < a.rows[i - 1].l2_error);
    CHECK(*a.rows[i].observed_order == doctest::Approx(std::log2(a.rows[i - 1].l2_error / a.rows[i].l2_error)));
  }
  CHECK(a.final_order() == a.rows.back().observed_order);

  const std::string text = csv(a);
  CHECK(text.rfind("level,h,dt,ndof,l2_error,observed_order\n", 0) == 0);
  const std::string first_row = text.substr(text.find('\n') + 1, text.find('\n', text.find('\n') + 1) - text.find('\n') - 1);
  CHECK(first_row.back() == ',');

  std::istringstream in(text);
  const ConvergenceReport back = read_report(in);
  REQUIRE(back.rows.size() == a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(back.rows[i].level == a.rows[i].level);
    CHECK(back.rows[i].h == a.rows[i].h);
    CHECK(back.rows[i].dt == a.rows[i].dt);
    CHECK(back.rows[i].ndof == a.rows[i].ndof);
    CHECK(back.rows[i].l2_error == a.rows[i].l2_error);
    CHECK(back.rows[i].observed_order == a.rows[i].observed_order);
  }
  CHECK(csv(run_convergence(c)) == text);

  const auto path = std::filesystem::temp_directory_path() / "mdg_report_test.csv";
  write_report(a, path.string());
  std::ifstream f(path);
  std::stringstream content;
  content << f.rdbuf();
  CHECK(content.str() == text);
  std::filesystem::remove(path);
  CHECK_THROWS(write_report(a, "/nonexistent/dir/out.csv"));
}

TEST_CASE("one-level report has a header and one row") {
  const ConvergenceReport r = run_convergence(small("convection", "tp3", 0, 1));
  const std::string text = csv(r);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK_FALSE(r.final_order().has_value());
}

TEST_CASE("gmres exhaustion falls back and is counted") {
  RunConfig c = small("convection_diffusion", "tp3", 2, 1);
  c.gmres.max_iterations = 1;
  c.gmres.restart = 1;
  c.ilu_level = 0;
  const ConvergenceRow ok = run_level(c, 1);
  CHECK(ok.ok());
  CHECK(ok.stats.fallbacks > 0);
}

TEST_CASE("solver failures are recorded in the row") {
  RunConfig c = small("convection_diffusion", "tp3", 2, 2);
  c.gmres.max_iterations = 1;
  c.gmres.restart = 1;
  c.ilu_level = 0;
  c.fallback_limit = 0;
  const ConvergenceReport r = run_convergence(c);
  CHECK_FALSE(r.ok());
  CHECK(r.rows.back().status.find("solver failure") == 0);
  CHECK(std::isnan(r.rows.back().l2_error));
  CHECK_FALSE(r.rows.back().observed_order.has_value());
}
