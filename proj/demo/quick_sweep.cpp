// Small end-to-end run: C(q), a tail profile and a short verification sweep.
#include "qfock/report.hpp"

#include <cstdio>

int main(int argc, char** argv) {
  using namespace qfock;
  SweepConfig cfg;
  try {
    if (argc > 1) cfg = load_config(argv[1]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  std::printf("C(q) = prod (1 - |q|^k)^-1\n");
  for (double q : cfg.q) std::printf("  q = %+.2f  C = %.12f\n", q, norm_constant(q));

  const FockContext ctx(DeformedSpace::build(BlockSpectrum::parse("2,1")), 0.5, 4);
  const Matrix t2 = generate_admissible(ctx.space(), 2).matrix();
  std::printf("\ntail norms of F_q(e^-t T_2), q = 0.5, t = 0.25, spectrum 2,1\n");
  for (const auto& row : compactness_profile(ctx, t2, 0.25, 3))
    std::printf("  n = %d  tail = %.6f  bound = %.6f  ratio = %.4f\n", row.n, row.tail, row.bound, row.ratio);

  const auto reports = run_suite(cfg, "all");
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : reports) {
    auto& [pass, total] = tally[r.suite + "/" + r.check];
    pass += r.pass;
    ++total;
  }
  std::printf("\n%zu checks over %zu grid points\n", reports.size(), cfg.q.size() * cfg.spectra.size());
  for (const auto& [name, counts] : tally)
    std::printf("  %-45s %d/%d\n", name.c_str(), counts.first, counts.second);
  return all_pass(reports) ? 0 : 1;
}
