#include "junctionlab/observables.hpp"

#include <cmath>
#include <ostream>

#include "junctionlab/csv.hpp"

namespace junctionlab {

LocalDensityField local_densities(const Eigen::VectorXcd& state, const DeviceSpec& spec) {
  if (state.size() != static_cast<Eigen::Index>(2 * spec.size()))
    throw std::invalid_argument("local_densities: state has " + std::to_string(state.size()) +
                                " amplitudes, device needs " + std::to_string(2 * spec.size()));
  LocalDensityField f;
  for (SiteId s = 0; s < spec.size(); ++s) {
    const cplx p = state[2 * s], h = state[2 * s + 1];
    const cplx ph = std::conj(p) * h;
    f.rho.push_back(std::norm(p) + std::norm(h));
    f.tx.push_back(2.0 * ph.real());
    f.ty.push_back(2.0 * ph.imag());
    f.tz.push_back(std::norm(p) - std::norm(h));
  }
  return f;
}

double total_charge(const LocalDensityField& field) {
  double s = 0.0;
  for (double v : field.tz) s += v;
  return s;
}

double participation_ratio(const LocalDensityField& field) {
  double s = 0.0;
  for (double r : field.rho) s += r * r;
  return s > 0.0 ? 1.0 / s : 0.0;
}

double weight_on(const LocalDensityField& field, const std::vector<SiteId>& sites) {
  double s = 0.0;
  for (auto i : sites) s += field.rho.at(i);
  return s;
}

std::vector<SiteId> edge_window(const DeviceSpec& spec, bool left, int width) {
  std::vector<SiteId> out;
  const auto n = static_cast<int>(spec.size());
  for (int k = 0; k < width && k < n; ++k) out.push_back(left ? SiteId(k) : SiteId(n - 1 - k));
  return out;
}

OrbitTrace orbit_trace(const BoundStateCurve& curve, SiteId site) {
  OrbitTrace o;
  o.site = site;
  for (const auto& p : curve.points) {
    if (p.state.size() < static_cast<Eigen::Index>(2 * site + 2))
      throw std::invalid_argument("orbit_trace: site outside the device");
    const cplx ph = std::conj(p.state[2 * site]) * p.state[2 * site + 1];
    o.points.push_back({p.phi, 2.0 * ph.real(), 2.0 * ph.imag(), std::norm(p.state[2 * site]) - std::norm(p.state[2 * site + 1])});
  }
  if (!o.points.empty()) {
    const auto& a = o.points.front();
    const auto& b = o.points.back();
    o.closure_defect = std::sqrt(std::pow(b.tx - a.tx, 2) + std::pow(b.ty - a.ty, 2) + std::pow(b.tz - a.tz, 2));
  }
  return o;
}

void write_densities_csv(std::ostream& os, double phi, const LocalDensityField& f, bool header) {
  if (header) os << "phi_rad,site,rho,tx,ty,tz\n";
  for (std::size_t s = 0; s < f.size(); ++s)
    os << fmt_double(phi) << ',' << s << ',' << fmt_double(f.rho[s]) << ',' << fmt_double(f.tx[s]) << ','
       << fmt_double(f.ty[s]) << ',' << fmt_double(f.tz[s]) << '\n';
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& o) {
  os << "phi_rad,tx,ty,tz\n";
  for (const auto& p : o.points)
    os << fmt_double(p.phi) << ',' << fmt_double(p.tx) << ',' << fmt_double(p.ty) << ',' << fmt_double(p.tz) << '\n';
}

}  // namespace junctionlab
