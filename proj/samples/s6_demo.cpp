// Walks through the S⁶ example: the embedded point F(u), its lift, and the
// comparison N = 4θ on the lift, then the vanishing of c3.

#include "acx/chern.hpp"
#include "acx/embed.hpp"

#include <cstdio>

int main() {
  using namespace acx;
  RVector v(8);
  v << 0.0, 0.3, -0.2, 0.5, 0.1, -0.6, 0.4, 0.25;
  const Octonion u = Octonion::from_vector(v / v.norm());

  const Differential d = dF(u);
  const ZPoint& w = d.frame.zpoint;
  std::printf("F(u): dims S'=%ld S''=%ld Sigma'=%ld Sigma''=%ld, real point: %s\n", long(w.flag.sp.dim()),
              long(w.flag.spp.dim()), long(w.flag.sigp.dim()), long(w.flag.sigpp.dim()),
              is_real_point(w) ? "yes" : "no");
  std::printf("real rank of dF(T) + D: %d (of %d)\n", transversality_rank(d), 2 * dim_N(kS6n, kS6k));

  const CSubspace lift = lift_Ftilde(d);
  std::printf("lift: dim %ld, injective projection: %s, isotropy defect %.3e\n", long(lift.dim()),
              in_gro(w, lift, d.chart) ? "yes" : "no", isotropy_defect(w, lift, d.chart));

  const Octonion z = project_tangent(u, Octonion::unit(1)), e = project_tangent(u, Octonion::unit(4));
  const FourThetaResult r = verify_4theta(d, z, e);
  std::printf("N(u)(z,e)   =");
  for (int i = 0; i < 8; ++i) std::printf(" % .6f", r.lhs[i]);
  std::printf("\n4 theta(...) =");
  for (int i = 0; i < 8; ++i) std::printf(" % .6f", r.rhs[i]);
  std::printf("\nrelative residual %.3e\n", r.residual);

  const S6ChernResult c = s6_c3_vanishing();
  std::printf("c3 = (%s) + (%s) = %s\n", c.lambda_part.to_string().c_str(), c.tangent_part.to_string().c_str(),
              c.c3.to_string().c_str());
  return 0;
}
