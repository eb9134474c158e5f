// Regenerates the frozen direct-sum oracle used by the convergence check:
//   gwn_gen_oracle tests/data/bezier_slice.json tests/data/bezier_slice_oracle.csv
#include <cstdio>

#include "frozen_slice.hpp"
#include "gwn/oracle.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s slice.json oracle.csv\n", argv[0]);
    return 2;
  }
  using namespace gwn;
  const auto f = testing::load_frozen_slice(argv[1]);
  const TriangleMesh mesh = tessellate_mesh(BezierTriangleSurface(f.patch), f.oracle_resolution);
  const int n = f.spec.width * f.spec.height;
  std::vector<double> w(n);
  parallel_for(n, 0, [&](int k) {
    w[k] = direct_winding_mesh(mesh, testing::slice_point(f.spec, k % f.spec.width, k / f.spec.width));
  });
  testing::write_oracle_csv(argv[2], f.spec, w);
  std::printf("%d pixels, %zu triangles\n", n, mesh.triangles.size());
}
