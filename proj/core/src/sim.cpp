#include "ccn/sim.hpp"

namespace ccn {

Trajectory integrate_rk4(const AssembledField& field, const std::vector<double>& x0,
                         double dt, int steps) {
  if (static_cast<int>(x0.size()) != field.dim()) {
    fail(Errc::dimension_mismatch,
         "initial state has length " + std::to_string(x0.size()) +
             ", phase space has " + std::to_string(field.dim()));
  }
  return integrate_rk4(
      [&field](const std::vector<double>& x, std::vector<double>& out) {
        field.eval_into(x, out);
      },
      x0, dt, steps);
}

SyncReport flow_sync_check(const GraphMorphism& phi, const VirtualField& w,
                           const std::vector<double>& x0_codomain, double dt,
                           int steps, double flow_tol, double point_tol, int samples,
                           uint64_t seed) {
  SyncReport report;
  report.dt = dt;
  report.steps = steps;
  report.flow_tol = flow_tol;
  report.point_tol = point_tol;
  report.samples = samples;
  report.seed = seed;

  RelatedReport related = check_related(phi, w, samples, point_tol, seed);
  report.max_point_defect = related.max_defect;

  VirtualField pulled = pullback_field(phi, w);
  AssembledField upstairs = realize(pulled);
  AssembledField downstairs = realize(w);
  IndexedLinearMap gather = pushforward(phi, w.dims);

  Trajectory down = integrate_rk4(downstairs, x0_codomain, dt, steps);
  Trajectory up = integrate_rk4(upstairs, ccn::apply(gather, x0_codomain), dt, steps);

  for (size_t i = 0; i < down.states.size(); ++i) {
    std::vector<double> gathered = ccn::apply(gather, down.states[i]);
    for (size_t j = 0; j < gathered.size(); ++j) {
      report.max_flow_defect =
          std::max(report.max_flow_defect, std::fabs(gathered[j] - up.states[i][j]));
    }
  }
  report.pass =
      report.max_flow_defect <= flow_tol && report.max_point_defect <= point_tol;
  return report;
}

}  // namespace ccn
