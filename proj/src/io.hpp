#pragma once

#include <string>
#include <vector>

#include "fem3d.hpp"
#include "harness.hpp"
#include "inertia.hpp"
#include "plate2d.hpp"

namespace platelab {

inline constexpr const char* kVersion = "0.1.0";

// Round-trip formatting for CSV cells; C locale assumed process-wide.
std::string format_g17(double v);

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Nodal values of the three displacement components.
// Header: x1,x2,x3,u1,u2,u3
void write_field_csv(const std::string& path, const DisplacementField3D& u);

// Header: x1,x2,w,wx,wy,wxy
void write_kl_csv(const std::string& path, const KLState& state);

// Header: x1,x2,w,v1,v2,phi1,phi2,residual
void write_rm_csv(const std::string& path, const RMState& state);

// Header: epsilon,energy,e_kl,shear,rm_res,rate_flags
// rate_flags holds the per-row solve status; the fitted rates live in the
// JSON report.
void write_report_csv(const std::string& path, const ConvergenceReport& rep);

// Header: epsilon,classical_total,classical_inplane,modified_total,modified_inplane
void write_inertia_csv(const std::string& path,
                       const std::vector<InertiaRow>& rows);

// Full sweep report: resolved config echo, versions, timings, rows, rates,
// checklist. config_echo_json must be a JSON object in serialized form.
std::string report_json(const std::string& config_echo_json,
                        const ConvergenceReport& rep, double elapsed_seconds);

// Single-solve summary.
std::string solve_summary_json(double epsilon, double kappa, double energy,
                               double residual, int free_dofs,
                               double elapsed_seconds);

} // namespace platelab
