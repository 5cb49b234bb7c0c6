#include "mdg/convergence.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mdg/basis.hpp"
#include "mdg/dg_operator.hpp"
#include "mdg/mesh.hpp"
#include "mdg/problem.hpp"
#include "mdg/schemes.hpp"

namespace mdg {

namespace {

constexpr const char* kHeader = "level,h,dt,ndof,l2_error,observed_order";

}  // namespace

bool ConvergenceReport::ok() const {
  for (const auto& r : rows) {
    if (!r.ok()) return false;
  }
  return !rows.empty();
}

std::optional<double> ConvergenceReport::final_order() const {
  if (rows.empty()) return std::nullopt;
  return rows.back().observed_order;
}

ConvergenceRow run_level(const RunConfig& cfg, int level) {
  validate(cfg);
  const Problem problem = *problem_by_name(cfg.problem);
  const Method method = *method_by_name(cfg.method);
  const auto start = std::chrono::steady_clock::now();

  ConvergenceRow row;
  row.level = level;
  row.dt = cfg.dt0 / std::pow(2.0, level);
  TriangularMesh mesh = build_mesh(level);
  row.h = mesh.max_edge_length();
  const BasisSet basis(cfg.degree);
  const Vector w0 = project_l2(mesh, basis, problem.initial);
  row.ndof = w0.size();
  row.initial_norm = l2_norm(w0);
  const DgOperator op(std::move(mesh), basis, problem, cfg.penalty());

  try {
    const IntegrationResult res = integrate(op, method, w0, 0.0, problem.t_end, row.dt, cfg.solver_settings());
    row.stats = res.stats;
    row.final_norm = l2_norm(res.w);
    row.l2_error = l2_error(op.mesh(), op.basis(), res.w, problem.exact, problem.t_end);
  } catch (const BlowUpError& e) {
    row.status = std::string("blow-up: ") + e.what();
    row.l2_error = std::numeric_limits<double>::quiet_NaN();
  } catch (const SolverError& e) {
    row.status = std::string("solver failure: ") + e.what();
    row.l2_error = std::numeric_limits<double>::quiet_NaN();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ConvergenceReport run_convergence(const RunConfig& cfg) {
  validate(cfg);
  ConvergenceReport report;
  for (int level = 0; level < cfg.levels; ++level) {
    ConvergenceRow row = run_level(cfg, level);
    if (!report.rows.empty()) {
      const ConvergenceRow& prev = report.rows.back();
      if (prev.ok() && row.ok() && prev.l2_error > 0.0 && row.l2_error > 0.0) {
        row.observed_order = std::log2(prev.l2_error / row.l2_error);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report(const ConvergenceReport& report, std::ostream& out) {
  const auto old = out.precision(17);
  out << kHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.level << ',' << r.h << ',' << r.dt << ',' << r.ndof << ',' << r.l2_error << ',';
    if (r.observed_order) out << *r.observed_order;
    out << '\n';
  }
  out.precision(old);
}

void write_report(const ConvergenceReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report '" + path + "'");
  write_report(report, out);
  if (!out) throw std::runtime_error("error while writing report '" + path + "'");
}

ConvergenceReport read_report(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("report header mismatch");
  ConvergenceReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() == 5 && line.back() == ',') cells.emplace_back();
    if (cells.size() != 6) throw std::runtime_error("malformed report row: " + line);
    ConvergenceRow r;
    r.level = std::stoi(cells[0]);
    r.h = std::stod(cells[1]);
    r.dt = std::stod(cells[2]);
    r.ndof = std::stoul(cells[3]);
    r.l2_error = std::stod(cells[4]);
    if (!cells[5].empty()) r.observed_order = std::stod(cells[5]);
    if (!std::isfinite(r.l2_error)) r.status = "failed";
    report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace mdg
