// Two triangles joined by a weak edge: exact best 2-cut, the coupling
// quantities of that cut, and both null-space bounds.

#include <iostream>

#include "subpert/subpert.hpp"

using namespace subpert;

int main() {
  WeightedGraph gt(6, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0},
                       {3, 4, 1.0}, {3, 5, 1.0}, {4, 5, 1.0},
                       {2, 3, 0.1}});
  const auto best = best_q_cut(gt, 2, CutMode::Exact);
  std::cout << "best 2-cut labels:";
  for (int l : best.cut.labels()) std::cout << ' ' << l;
  std::cout << "\ntotal coupling\t" << io::fmt(best.total_coupling) << '\n';

  // The base graph keeps only the edges inside each cluster.
  WeightedGraph g(gt.n());
  for (const auto& e : gt.edges())
    if (best.cut.label(e.u) == best.cut.label(e.v)) g.add_edge(e.u, e.v, e.w);

  for (const auto& c : cluster_couplings(gt, best.cut))
    std::cout << "cluster " << c.cluster + 1 << "\tCP " << io::fmt(c.coupling)
              << "\tMED " << io::fmt(c.med) << '\n';

  const auto kp = nullspace_bound_known_perturbed(g, gt, best.cut);
  std::cout << "lhs_dsp\t" << io::fmt(kp.lhs_dsp) << '\n'
            << "known_perturbed\t" << io::fmt(kp.bounds[0].value) << '\n';
  const auto kb = nullspace_bound_known_base(g, gt, best.cut);
  for (const auto& b : kb.bounds)
    std::cout << b.name << '\t' << io::fmt(b.value) << '\n';
}
