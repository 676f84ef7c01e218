// Walks through the main pieces of the library on sl2:
// the linear Poisson structure, its formal cohomology, the Casimir,
// the exact identity suite and the flow of W.

#include "poisson/cohomology.hpp"
#include "poisson/flow_lab.hpp"
#include "poisson/lie_algebra.hpp"
#include "poisson/sl2_suite.hpp"

#include <cstdio>
#include <iostream>

int main() {
  using namespace poisson;
  const LieAlgebra g = algebras::sl2();
  const auto pi = build_linear_poisson(g);
  std::cout << "pi = " << pi.to_string(g.names) << "\n";
  std::cout << "[pi,pi] = " << first_component(jacobi_check(g), g.names) << "\n\n";

  const auto table = cohomology_table(g, 3, 6, {Method::lichnerowicz, Method::chevalley_eilenberg});
  std::cout << "dim H^q_d (Lichnerowicz / Chevalley-Eilenberg)\n";
  for (int q = 0; q <= 3; ++q) {
    std::cout << "  q=" << q << ":";
    for (int d = 0; d <= 6; ++d)
      std::cout << ' ' << table.dim_h(Method::lichnerowicz, q, d) << '/' << table.dim_h(Method::chevalley_eilenberg, q, d);
    std::cout << "\n";
  }

  const auto reps = representatives(g, 0, 2);
  std::cout << "\nCasimir in degree 2: " << (reps.empty() ? "none" : reps.front().to_string(g.names)) << "\n";
  const auto cas = casimir_generator_check(g, 8);
  std::cout << "generator check up to degree 8: " << (cas.ok ? "ok" : "failed") << "\n\n";

  const auto report = sl2::run_suite();
  int passed = 0;
  for (const auto& c : report.checks) passed += c.pass;
  std::cout << "sl2 identity suite: " << passed << "/" << report.checks.size() << " pass; p_df(N^T) = "
            << report.p_df_NT_sign << " df^dtheta\n\n";

  const flow::Point3 p{1, 1, 0.5};
  const flow::Point3 limit = flow::retraction(p);
  std::printf("flow of W from (1, 1, 0.5), f = %.3f, limit (%.6f, %.6f, %.6f)\n", flow::f_of(p), limit[0], limit[1], limit[2]);
  for (double t : {0.0, 1.0, 5.0, 10.0, 20.0}) {
    const auto q = flow::flow_closed(p, t);
    std::printf("  t = %5.1f  (%.6f, %.6f, %.6f)  |phi_t - p_X| = %.3e\n", t, q[0], q[1], q[2], flow::norm_l1(q, limit));
  }
  const auto res = flow::homotopy_residual(flow::Form::a1, p);
  std::printf("homotopy identity residual for a1 at p: %.3e, |d p_X^* a1| = %.3e\n", res.identity, res.closed);
  return 0;
}
