#include "io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace platelab {

namespace {

using nlohmann::json;

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::string out = header;
  out += '\n';
  for (const std::string& r : rows) {
    out += r;
    out += '\n';
  }
  write_text_file(path, out);
}

std::string join(std::initializer_list<double> cells) {
  std::string row;
  for (double c : cells) {
    if (!row.empty())
      row += ',';
    row += format_g17(c);
  }
  return row;
}

json rate_or_null(const std::optional<double>& r) {
  return r ? json(*r) : json(nullptr);
}

} // namespace

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  if (path.empty())
    return;
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw std::runtime_error("cannot create directory " + path + ": " +
                             ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out)
    throw std::runtime_error("write failed: " + path);
}

void write_field_csv(const std::string& path, const DisplacementField3D& u) {
  const Mesh3D& m = *u.mesh;
  std::vector<std::string> rows;
  rows.reserve(m.nodes.size());
  for (size_t n = 0; n < m.nodes.size(); ++n) {
    const double* c = &u.coeff[n * kDofsPerNode3D];
    rows.push_back(join({m.nodes[n][0], m.nodes[n][1], m.nodes[n][2], c[0],
                         c[2], c[4]}));
  }
  write_lines(path, "x1,x2,x3,u1,u2,u3", rows);
}

void write_kl_csv(const std::string& path, const KLState& state) {
  const Mesh2D& m = *state.mesh;
  std::vector<std::string> rows;
  rows.reserve(m.nodes.size());
  for (size_t n = 0; n < m.nodes.size(); ++n) {
    const double* c = &state.coeff[n * kDofsPerNode2D];
    rows.push_back(
        join({m.nodes[n][0], m.nodes[n][1], c[0], c[1], c[2], c[3]}));
  }
  write_lines(path, "x1,x2,w,wx,wy,wxy", rows);
}

void write_rm_csv(const std::string& path, const RMState& state) {
  std::vector<std::string> rows;
  size_t count = state.w.size();
  rows.reserve(count);
  double hx = 2.0 * state.ell / state.nx, hy = 2.0 * state.ell / state.ny;
  for (size_t n = 0; n < count; ++n) {
    int i = static_cast<int>(n) % (state.nx + 1);
    int j = static_cast<int>(n) / (state.nx + 1);
    rows.push_back(join({-state.ell + i * hx, -state.ell + j * hy, state.w[n],
                         state.v1[n], state.v2[n], state.phi1[n],
                         state.phi2[n], state.node_misfit[n]}));
  }
  write_lines(path, "x1,x2,w,v1,v2,phi1,phi2,residual", rows);
}

void write_report_csv(const std::string& path, const ConvergenceReport& rep) {
  std::vector<std::string> rows;
  rows.reserve(rep.rows.size());
  for (const SweepRow& r : rep.rows) {
    std::string row =
        join({r.epsilon, r.energy, r.e_kl, r.shear, r.rm_res});
    row += ',';
    row += r.failed ? "failed" : "ok";
    rows.push_back(row);
  }
  write_lines(path, "epsilon,energy,e_kl,shear,rm_res,rate_flags", rows);
}

void write_inertia_csv(const std::string& path,
                       const std::vector<InertiaRow>& rows) {
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const InertiaRow& r : rows)
    lines.push_back(join({r.epsilon, r.classical_total, r.classical_inplane,
                          r.modified_total, r.modified_inplane}));
  write_lines(path,
              "epsilon,classical_total,classical_inplane,modified_total,"
              "modified_inplane",
              lines);
}

std::string report_json(const std::string& config_echo_json,
                        const ConvergenceReport& rep, double elapsed_seconds) {
  json j;
  j["config"] = json::parse(config_echo_json);
  j["versions"]["platelab"] = kVersion;
  j["timings"]["total_seconds"] = elapsed_seconds;
  json rows = json::array();
  for (const SweepRow& r : rep.rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["energy"] = r.energy;
    row["e_kl"] = r.e_kl;
    row["shear"] = r.shear;
    row["rm_res"] = r.rm_res;
    row["director_gap"] = r.director_gap;
    row["norm_inplane"] = r.norm_inplane;
    row["norm_transverse"] = r.norm_transverse;
    row["consistency"] = r.consistency;
    row["failed"] = r.failed;
    if (!r.note.empty())
      row["note"] = r.note;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["rates"]["e_kl"] = rate_or_null(rep.rate_e_kl);
  j["rates"]["shear"] = rate_or_null(rep.rate_shear);
  j["rates"]["rm_res"] = rate_or_null(rep.rate_rm_res);
  json checklist = json::array();
  for (const ChecklistItem& item : rep.checklist) {
    json it;
    it["name"] = item.name;
    it["passed"] = item.passed;
    if (!item.detail.empty())
      it["detail"] = item.detail;
    checklist.push_back(it);
  }
  j["checklist"] = checklist;
  j["passed"] = rep.passed;
  return j.dump(2) + "\n";
}

std::string solve_summary_json(double epsilon, double kappa, double energy,
                               double residual, int free_dofs,
                               double elapsed_seconds) {
  json j;
  j["epsilon"] = epsilon;
  j["kappa"] = kappa;
  j["energy"] = energy;
  j["residual"] = residual;
  j["free_dofs"] = free_dofs;
  j["timings"]["total_seconds"] = elapsed_seconds;
  j["versions"]["platelab"] = kVersion;
  return j.dump(2) + "\n";
}

} // namespace platelab
