#include "monotone/report_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "monotone/error.hpp"
#include "monotone/format.hpp"
#include "monotone/kernel.hpp"

namespace monotone {

namespace {

std::string row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_double(v);
    first = false;
  }
  return line;
}

Json radii_json(const std::vector<double>& radii) {
  Json a = Json::array();
  for (double r : radii) a.push_back(json_number(r));
  return a;
}

}  // namespace

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json json_point(const Point& p, int n) {
  Json a = Json::array();
  for (int d = 0; d < n; ++d) a.push_back(json_number(p[d]));
  return a;
}

Json to_json(const IdentityReport& r) {
  Json j;
  j["identity"] = r.identity;
  j["radii"] = radii_json(r.radii);
  j["lhs"] = json_number(r.lhs);
  j["rhs"] = json_number(r.rhs);
  j["residual"] = json_number(r.residual);
  j["tolerance"] = json_number(r.tolerance);
  j["scale"] = json_number(r.scale);
  j["quadrature_error"] = json_number(r.quadrature_error);
  j["pass"] = r.pass;
  return j;
}

Json to_json(const FunctionalReport& r) {
  Json j;
  j["x0"] = json_point(r.x0, r.dim);
  j["dim"] = r.dim;
  j["beta"] = json_number(r.beta);
  j["h"] = json_number(r.h);
  Json rows = Json::array();
  for (const PhiScanRow& row : r.rows) {
    Json e;
    e["r"] = json_number(row.r);
    e["phi"] = json_number(row.phi);
    e["vol_term"] = json_number(row.vol_term);
    e["bdry_term"] = json_number(row.bdry_term);
    e["dphi_bdry"] = json_number(row.dphi_bdry);
    e["dphi_int"] = json_number(row.dphi_int);
    e["c1_margin"] = json_number(row.c1_margin);
    e["admissible"] = row.admissible;
    rows.push_back(e);
  }
  j["radii"] = rows;
  Json s;
  s["admissible_count"] = r.admissible_count;
  s["monotone_checks"] = r.monotone_checks;
  s["monotone_violations"] = r.monotone_violations;
  s["violation_index"] = r.violation_index;
  s["max_monotone_tolerance"] = json_number(r.max_monotone_tolerance);
  s["identity_checks"] = r.identity_checks;
  s["identity_failures"] = r.identity_failures;
  s["max_identity_residual"] = json_number(r.max_identity_residual);
  s["max_identity_tolerance"] = json_number(r.max_identity_tolerance);
  s["min_boundary_part"] = json_number(r.min_boundary_part);
  s["limit_M"] = json_number(r.limit_M);
  j["summary"] = s;
  return j;
}

Json to_json(const ParabolicFunctionalReport& r) {
  Json j;
  j["T"] = json_number(r.T);
  j["x0"] = json_point(r.x0, r.dim);
  j["dim"] = r.dim;
  j["beta"] = json_number(r.beta);
  j["side"] = side_name(r.side);
  j["free_boundary"] = r.free_boundary;
  j["C"] = json_number(r.C);
  j["h"] = json_number(r.h);
  j["dt"] = json_number(r.dt);
  Json rows = Json::array();
  for (const PsiScanRow& row : r.rows) {
    Json e;
    e["r"] = json_number(row.r);
    e["psi"] = json_number(row.psi);
    e["energy_term"] = json_number(row.energy_term);
    e["u2_term"] = json_number(row.u2_term);
    e["dpsi_res"] = json_number(row.dpsi_res);
    e["dpsi_int"] = json_number(row.dpsi_int);
    e["dpsi_cut"] = json_number(row.dpsi_cut);
    e["c23_margin"] = json_number(row.c23_margin);
    e["admissible"] = row.admissible;
    e["trunc_bound"] = json_number(row.trunc_bound);
    e["E_r"] = json_number(row.E_r);
    e["total"] = json_number(row.total);
    rows.push_back(e);
  }
  j["radii"] = rows;
  Json s;
  s["admissible_count"] = r.admissible_count;
  s["monotone_checks"] = r.monotone_checks;
  s["monotone_violations"] = r.monotone_violations;
  s["violation_index"] = r.violation_index;
  s["max_monotone_tolerance"] = json_number(r.max_monotone_tolerance);
  s["identity_checks"] = r.identity_checks;
  s["identity_failures"] = r.identity_failures;
  s["max_identity_residual"] = json_number(r.max_identity_residual);
  s["max_identity_tolerance"] = json_number(r.max_identity_tolerance);
  s["min_residual_part"] = json_number(r.min_residual_part);
  s["max_trunc_bound"] = json_number(r.max_trunc_bound);
  s["truncation_warning"] = r.truncation_warning;
  s["limit_M"] = json_number(r.limit_M);
  j["summary"] = s;
  return j;
}

Json to_json(const BlowupReport& r) {
  Json j;
  j["parabolic"] = r.parabolic;
  if (r.parabolic) j["T"] = json_number(r.T);
  j["x0"] = json_point(r.x0, r.dim);
  j["beta"] = json_number(r.beta);
  Json rows = Json::array();
  for (const BlowupScale& s : r.scales) {
    Json e;
    e["rho"] = json_number(s.rho);
    e["l2_norm"] = json_number(s.l2_norm);
    e["grad_norm"] = json_number(s.grad_norm);
    e["h1_norm"] = json_number(s.h1_norm);
    e["residual"] = json_number(s.residual);
    e["degree"] = json_number(s.degree);
    e["cauchy"] = json_number(s.cauchy);
    e["functional"] = json_number(s.functional);
    e["growth"] = json_number(s.growth);
    rows.push_back(e);
  }
  j["scales"] = rows;
  j["growth_ok"] = r.growth_ok;
  j["warning"] = r.warning;
  j["norm_slope"] = json_number(r.norm_slope);
  j["degenerate"] = r.degenerate;
  j["residual_decreasing"] = r.residual_decreasing;
  j["limit_M"] = json_number(r.limit_M);
  j["note"] = "limits are compared pointwise across scales on a fixed window, not extracted as weak limits";
  return j;
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  Json box = Json::array();
  for (const Interval& iv : r.box) box.push_back(Json::array({json_number(iv.lo), json_number(iv.hi)}));
  j["box"] = box;
  j["samples"] = r.samples;
  Json rows = Json::array();
  for (std::size_t k = 0; k < r.betas.size(); ++k) {
    Json e;
    e["beta"] = json_number(r.betas[k]);
    e["min_integrand"] = json_number(r.minima[k]);
    e["tolerance"] = json_number(r.tolerances[k]);
    e["admissible"] = static_cast<bool>(r.admissible[k]);
    rows.push_back(e);
  }
  j["betas"] = rows;
  return j;
}

void write_csv(std::ostream& out, const FunctionalReport& r) {
  out << "r,phi,vol_term,bdry_term,dphi_bdry,dphi_int,c1_margin\n";
  for (const PhiScanRow& x : r.rows) {
    out << row({x.r, x.phi, x.vol_term, x.bdry_term, x.dphi_bdry, x.dphi_int, x.c1_margin}) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<ParabolicFunctionalReport>& sides) {
  out << "side,r,psi,energy_term,u2_term,dpsi_res,dpsi_int,c23_margin,trunc_bound,E_r,C\n";
  for (const ParabolicFunctionalReport& r : sides) {
    for (const PsiScanRow& x : r.rows) {
      out << side_name(r.side) << ','
          << row({x.r, x.psi, x.energy_term, x.u2_term, x.dpsi_res, x.dpsi_int, x.c23_margin, x.trunc_bound, x.E_r,
                  r.C})
          << '\n';
    }
  }
}

void write_csv(std::ostream& out, const BlowupReport& r) {
  out << "rho,l2_norm,grad_norm,h1_norm,residual,degree,cauchy,functional\n";
  for (const BlowupScale& s : r.scales) {
    out << row({s.rho, s.l2_norm, s.grad_norm, s.h1_norm, s.residual, s.degree, s.cauchy, s.functional}) << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<IdentityReport>& rows) {
  out << "identity,rho,sigma,lhs,rhs,residual,tolerance,pass\n";
  for (const IdentityReport& r : rows) {
    const double a = r.radii.empty() ? NAN : r.radii.front();
    const double b = r.radii.empty() ? NAN : r.radii.back();
    out << r.identity << ',' << row({a, b, r.lhs, r.rhs, r.residual, r.tolerance}) << ',' << (r.pass ? 1 : 0)
        << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("write to " + path + " failed");
}

}  // namespace monotone
