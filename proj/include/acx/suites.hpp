#pragma once

// Verification suites behind `acx run <suite>` and the acceptance binary.
// Every suite is deterministic given the seed; case i draws from its own
// generator seeded by case_seed(seed, i).

#include "acx/chern_parse.hpp"
#include "acx/embed.hpp"
#include "acx/report.hpp"
#include "acx/sampling.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace acx {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<double> tol;  // replaces every case tolerance when set
  double h = 1e-5;
  std::optional<int> samples;
  int n = 3;
  int k = 4;
  std::string expr;
  std::vector<std::string> bundles;
  int dim = 3;
  std::optional<int> expect_zero;
};

namespace suites {

using NK = std::pair<int, int>;

inline double tol_or(const SuiteOptions& o, double def) { return o.tol.value_or(def); }
inline int samples_or(const SuiteOptions& o, int def) { return o.samples.value_or(def); }

inline std::string key(const std::string& tag, std::uint64_t seed, std::uint64_t i, const std::string& extra = "") {
  std::ostringstream s;
  s << tag << '|' << seed << '|' << i << '|' << extra;
  return s.str();
}

inline std::string nk_str(NK p) { return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")"; }

inline Json cvec_json(const CVector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back({json_number(v(i).real()), json_number(v(i).imag())});
  return a;
}

inline Json oct_json(const Octonion& o) {
  Json a = Json::array();
  for (int i = 0; i < 8; ++i) a.push_back(json_number(o[i]));
  return a;
}

inline Octonion random_s6(Rng& rng) {
  RVector v = random_rmatrix(rng, 8, 1).col(0);
  v(0) = 0.0;
  return Octonion::from_vector(v / v.norm());
}

inline Octonion random_tangent(Rng& rng, const Octonion& u) {
  return project_tangent(u, Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0)));
}

inline Octonion random_octonion(Rng& rng) { return Octonion::from_vector(random_rmatrix(rng, 8, 1).col(0)); }

/// A non-central point: random base point and a flag with random coordinates
/// in the standard chart.
inline ZPoint random_chart_point(Rng& rng, int n, int k) {
  return {random_cvector(rng, 2 * k), chart_decode(random_chart_coords(rng, n, k, 0.5), standard_flag(n, k))};
}

// ---------------------------------------------------------------------------
// dims

inline void dims_cases(Report& r, const SuiteOptions& o) {
  const int n = o.n, k = o.k;
  const int counted = 2 * k + static_cast<int>(index_set_I(n, k).size());
  const int N = dim_N(n, k);
  r.add("N" + nk_str({n, k}), key("dims", 0, 0, nk_str({n, k})), {{"N", counted}}, {{"N", N}},
        std::abs(N - counted), tol_or(o, 0.0));
  const int n34 = dim_N(3, 4);
  r.add("N(3,4)", key("dims", 0, 1), {{"N", 46}}, {{"N", n34}}, std::abs(n34 - 46), tol_or(o, 0.0));
  int odd = 0;
  for (int kk = 1; kk <= 6; ++kk)
    for (int nn = 1; nn <= kk; ++nn) odd += dim_N(nn, kk) % 2;
  r.add("parity", key("dims", 0, 2), {{"odd_count", 0}}, {{"odd_count", odd}}, odd, tol_or(o, 0.0));
}

// ---------------------------------------------------------------------------
// chart-roundtrip

inline const std::vector<NK>& small_nk() {
  static const std::vector<NK> v{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 4}};
  return v;
}

inline void chart_cases(Report& r, const SuiteOptions& o) {
  const double tol = tol_or(o, 1e-10);
  for (const NK& p : small_nk()) {
    const Flag c = standard_flag(p.first, p.second);
    r.add("origin" + nk_str(p), key("chart0", 0, 0, nk_str(p)), 0.0, json_number(chart_encode(c, c).norm()),
          chart_encode(c, c).norm(), tol);
  }
  const int samples = samples_or(o, 200);
  for (int i = 0; i < samples; ++i) {
    const NK p = small_nk()[i % small_nk().size()];
    Rng rng(case_seed(o.seed, i));
    const Flag center = random_flag(rng, p.first, p.second);
    const ChartCoords z = random_chart_coords(rng, p.first, p.second);
    const Flag f = chart_decode(z, center);
    const double err = (chart_encode(f, center).flatten() - z.flatten()).norm();
    const double back = flag_distance(chart_decode(chart_encode(f, center), center), f);
    const double res = std::max(err, back);
    r.add("roundtrip/" + std::to_string(i) + nk_str(p), key("chart", o.seed, i, nk_str(p)), 0.0, json_number(res), res,
          tol);
  }
}

// ---------------------------------------------------------------------------
// torsion-oracle

inline const std::vector<NK>& torsion_nk() {
  static const std::vector<NK> v{{1, 1}, {1, 2}, {2, 3}, {3, 4}};
  return v;
}

/// Closed form against the bracket oracle on every pair of frame vectors
/// and on random pairs.
inline void torsion_frame_cases(Report& r, const SuiteOptions& o, int random_pairs = 1000) {
  const double tol = tol_or(o, 1e-12);
  for (const NK& p : torsion_nk()) {
    const auto [n, k] = p;
    const ZPoint w0{CVector::Zero(2 * k), standard_flag(n, k)};
    const Chart s = Chart::standard(n, k);
    const std::vector<TangentVec> frame = distribution_frame(w0, s);
    double worst = 0.0;
    for (const auto& x : frame)
      for (const auto& y : frame)
        worst = std::max(worst, (torsion_central(n, k, x, y).c - torsion_bracket_oracle(n, k, x, y).c).norm());
    r.add("frame" + nk_str(p), key("frame", 0, 0, nk_str(p)), 0.0, json_number(worst), worst, tol);

    Rng rng(case_seed(o.seed, static_cast<std::uint64_t>(n * 10 + k)));
    double worst_r = 0.0, worst_anti = 0.0;
    for (int i = 0; i < random_pairs; ++i) {
      const TangentVec x = random_d_vector(rng, w0, s), y = random_d_vector(rng, w0, s);
      const CVector a = torsion_central(n, k, x, y).c;
      const double scale = std::max(1.0, x.flatten().norm() * y.flatten().norm());
      worst_r = std::max(worst_r, (a - torsion_bracket_oracle(n, k, x, y).c).norm() / scale);
      worst_anti = std::max(worst_anti, (a + torsion_central(n, k, y, x).c).norm() / scale);
    }
    r.add("random" + nk_str(p), key("pairs", o.seed, 0, nk_str(p)), 0.0, json_number(worst_r), worst_r, tol);
    r.add("antisymmetry" + nk_str(p), key("anti", o.seed, 0, nk_str(p)), 0.0, json_number(worst_anti), worst_anti, tol);
  }
  // (1,1): θ(∂/∂x₂, ∂/∂z₁₂) = −∂/∂x₁.
  TangentVec x = TangentVec::zero(1, 1), y = TangentVec::zero(1, 1);
  x.x_part(1) = 1.0;
  y.z_part(*flat_index(1, 1, 1, 2)) = 1.0;
  const cplx v = torsion_central(1, 1, x, y).c(0);
  r.add("unit(1,1)", key("unit", 0, 0), -1.0, json_number(v.real()), std::abs(v + 1.0), tol);
}

/// θ via the Lie bracket of the exact frame, A(Z) differentiated by central
/// differences in the standard chart.
inline CVector fd_bracket(const ZPoint& w, const TangentVec& a, const TangentVec& b, double h = 1e-5) {
  const int n = w.flag.n, k = w.flag.k;
  const CVector z = chart_coordinates(w, Chart::standard(n, k)).z.flatten();
  auto dA = [&](const CVector& v) -> CMatrix {
    return (delta_graph(ChartCoords::unflatten(n, k, z + h * v)) - delta_graph(ChartCoords::unflatten(n, k, z - h * v))) /
           (2.0 * h);
  };
  return dA(a.z_part) * b.x_part.tail(2 * k - n) - dA(b.z_part) * a.x_part.tail(2 * k - n);
}

inline void torsion_transport_cases(Report& r, const SuiteOptions& o) {
  const double tol = tol_or(o, 1e-6);
  const int n = 3, k = 4;
  const Chart s = Chart::standard(n, k);
  const int samples = samples_or(o, 20);
  for (int i = 0; i < samples; ++i) {
    Rng rng(case_seed(o.seed, 1000 + i));
    const ZPoint w = random_chart_point(rng, n, k);
    const TangentVec a = random_d_vector(rng, w, s), b = random_d_vector(rng, w, s);
    const CVector got = torsion_at(w, a, b, s).c;
    const CVector fd = fd_bracket(w, a, b);
    const double res = (got - fd).norm() / std::max(fd.norm(), 1e-300);
    r.add("transport/" + std::to_string(i), key("transport", o.seed, i), cvec_json(fd), cvec_json(got), res, tol);
  }
  // Equivariance under random affine maps.
  for (int i = 0; i < 5; ++i) {
    Rng rng(case_seed(o.seed, 2000 + i));
    const ZPoint w = random_chart_point(rng, n, k);
    const TangentVec a = random_d_vector(rng, w, s), b = random_d_vector(rng, w, s);
    const CMatrix g = random_gl(rng, 2 * k, 1.0);
    const CVector c = random_cvector(rng, 2 * k);
    const CVector before = torsion_at(w, a, b, s).c;
    const CVector after = torsion_at(affine_act(g, c, w), a, b, s.transported(g, c)).c;
    const double res = (after - before).norm() / std::max(before.norm(), 1e-300);
    r.add("equivariance/" + std::to_string(i), key("equiv", o.seed, i), cvec_json(before), cvec_json(after), res,
          tol_or(o, 1e-9));
  }
}

// ---------------------------------------------------------------------------
// group-action

inline void group_cases(Report& r, const SuiteOptions& o) {
  const int samples = samples_or(o, 100);
  const double tol = tol_or(o, 0.0);
  static const std::vector<NK> nks{{3, 4}, {2, 3}, {1, 2}, {2, 2}};
  int agree_in = 0, agree_out = 0, agree_edge = 0;
  for (int i = 0; i < samples; ++i) {
    const NK p = nks[i % nks.size()];
    Rng rng(case_seed(o.seed, i));
    const CMatrix in = random_stabilizer(rng, p.first, p.second);
    agree_in += stabilizer_check(in, p.first, p.second) && fixes_standard_flag(in, p.first, p.second);
    const CMatrix out = random_gl(rng, 2 * p.second, 1.0);
    agree_out += !stabilizer_check(out, p.first, p.second) && !fixes_standard_flag(out, p.first, p.second);
    // One forbidden entry switched on.
    CMatrix edge = in;
    edge(p.second, 0) += 0.5;
    agree_edge += !stabilizer_check(edge, p.first, p.second) && !fixes_standard_flag(edge, p.first, p.second);
  }
  r.add("stabilizer/in", key("stab-in", o.seed, samples), samples, agree_in, samples - agree_in, tol);
  r.add("stabilizer/out", key("stab-out", o.seed, samples), samples, agree_out, samples - agree_out, tol);
  r.add("stabilizer/edge", key("stab-edge", o.seed, samples), samples, agree_edge, samples - agree_edge, tol);
  {
    CMatrix swap = CMatrix::Identity(8, 8);
    swap(0, 0) = swap(4, 4) = 0.0;
    swap(0, 4) = swap(4, 0) = 1.0;
    const bool pat = stabilizer_check(swap, 3, 4), fix = fixes_standard_flag(swap, 3, 4);
    r.add("stabilizer/swap-e1-e5", key("swap", 0, 0), false, pat || fix, (pat || fix) ? 1.0 : 0.0, tol);
  }
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const NK p = nks[i % nks.size()];
    Rng rng(case_seed(o.seed, 5000 + i));
    const Flag f = random_flag(rng, p.first, p.second);
    worst = std::max(worst, flag_distance(gl_act(transitivity_witness(f), standard_flag(p.first, p.second)), f));
  }
  r.add("witness/roundtrip", key("witness", o.seed, samples), 0.0, json_number(worst), worst, tol_or(o, 1e-9));
  const double id_err =
      (transitivity_witness(standard_flag(3, 4)) - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  r.add("witness/standard", key("witness0", 0, 0), 0.0, json_number(id_err), id_err, tol_or(o, 1e-12));
  double worst_comp = 0.0;
  for (int i = 0; i < 20; ++i) {
    Rng rng(case_seed(o.seed, 7000 + i));
    const Flag f = random_flag(rng, 3, 4);
    const CMatrix a = random_gl(rng, 8, 1.0), b = random_gl(rng, 8, 1.0);
    worst_comp = std::max(worst_comp, flag_distance(gl_act(a * b, f), gl_act(a, gl_act(b, f))));
  }
  r.add("action/composition", key("compose", o.seed, 20), 0.0, json_number(worst_comp), worst_comp, tol_or(o, 1e-9));
}

// ---------------------------------------------------------------------------
// theta-rank

/// Random (w, V): V the image under the witness of a graph over span(e_{n+1..2n})
/// inside span(e_{n+1..2k}).
inline std::pair<ZPoint, CSubspace> random_theta_input(Rng& rng, int n, int k) {
  const ZPoint w = random_zpoint(rng, n, k);
  CMatrix v0 = CMatrix::Zero(2 * k, n);
  v0.block(n, 0, n, n) = CMatrix::Identity(n, n);
  v0.block(2 * n, 0, 2 * k - 2 * n, n) = random_cmatrix(rng, 2 * k - 2 * n, n);
  return {w, span(transitivity_witness(w.flag) * v0)};
}

inline void theta_cases(Report& r, const SuiteOptions& o) {
  const int samples = samples_or(o, 20);
  for (const NK& p : std::vector<NK>{{2, 3}, {3, 4}}) {
    const auto [n, k] = p;
    const int m = dim_N(n, k) - 2 * k;
    const int want_rank = n * (n * (n - 1) / 2);
    int bad_rank = 0, bad_kernel = 0;
    double worst_lin = 0.0;
    for (int i = 0; i < samples; ++i) {
      Rng rng(case_seed(o.seed, 100 * n + i));
      const auto [w, v] = random_theta_input(rng, n, k);
      const ThetaSetup s = theta_setup(w, v);
      const CMatrix t = theta_matrix(s);
      bad_rank += numerical_rank(t) != want_rank;
      bad_kernel += theta_kernel_dim(w, v) != n * m - want_rank;
      const CMatrix f = random_cmatrix(rng, n, m), g = random_cmatrix(rng, n, m);
      const cplx alpha = random_cvector(rng, 1)(0);
      const CVector lhs = theta_apply(s, alpha * f + g);
      const CVector rhs = alpha * theta_apply(s, f) + theta_apply(s, g);
      const CVector via_matrix = t * Eigen::Map<const CVector>(CMatrix(f.transpose()).data(), n * m);
      worst_lin = std::max({worst_lin, (lhs - rhs).norm() / std::max(1.0, lhs.norm()),
                            (via_matrix - theta_apply(s, f)).norm() / std::max(1.0, via_matrix.norm()),
                            theta_apply(s, CMatrix::Zero(n, m)).norm()});
    }
    r.add("rank" + nk_str(p), key("theta-rank", o.seed, samples, nk_str(p)), {{"rank", want_rank}},
          {{"mismatches", bad_rank}}, bad_rank, tol_or(o, 0.0));
    r.add("kernel" + nk_str(p), key("theta-ker", o.seed, samples, nk_str(p)), {{"kernel", n * m - want_rank}},
          {{"mismatches", bad_kernel}}, bad_kernel, tol_or(o, 0.0));
    r.add("linearity" + nk_str(p), key("theta-lin", o.seed, samples, nk_str(p)), 0.0, json_number(worst_lin),
          worst_lin, tol_or(o, 1e-10));
  }
  // n = 1: Λ²V* = 0, so Θ vanishes and the kernel is everything.
  Rng rng(case_seed(o.seed, 99));
  const auto [w, v] = random_theta_input(rng, 1, 1);
  const int ker = theta_kernel_dim(w, v);
  r.add("kernel(1,1)", key("theta-ker", o.seed, 1, "(1,1)"), {{"kernel", 2}}, {{"kernel", ker}}, std::abs(ker - 2),
        tol_or(o, 0.0));
}

// ---------------------------------------------------------------------------
// affine-fiber

inline void fiber_cases(Report& r, const SuiteOptions& o) {
  const int samples = samples_or(o, 100);
  static const std::vector<NK> nks{{3, 4}, {2, 3}, {1, 2}, {1, 1}};
  double w_id = 0.0, w_comp = 0.0, w_rec = 0.0, w_free = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto [n, k] = nks[i % nks.size()];
    Rng rng(case_seed(o.seed, i));
    const CSubspace s = lift_x(span(random_cmatrix(rng, 2 * k, n)), n, k);
    const CSubspace t = z_block(n, k);
    const int m = static_cast<int>(t.dim());
    const LinMap g(s, t, random_cmatrix(rng, m, n));
    const LinMap f1(s, t, random_cmatrix(rng, m, n)), f2(s, t, random_cmatrix(rng, m, n));
    const CSubspace gg = graph_of(g);
    w_id = std::max(w_id, projector_distance(fiber_translate(LinMap::zero(s, t), gg, n, k), gg));
    w_comp = std::max(w_comp, projector_distance(fiber_translate(f1, fiber_translate(f2, gg, n, k), n, k),
                                                 fiber_translate(f1 + f2, gg, n, k)));
    const LinMap rec = fiber_decode(fiber_translate(f1, gg, n, k), s, n, k) - g;
    w_rec = std::max(w_rec, (rec.matrix - f1.matrix).norm());
    // Free: the stabiliser of a point is trivial, Γ(f+g) = Γ(g) forces f = 0.
    const LinMap back = fiber_decode(fiber_translate(f1, gg, n, k), s, n, k) - fiber_decode(gg, s, n, k);
    w_free = std::max(w_free, (back.matrix - f1.matrix).norm());
  }
  const double tol = tol_or(o, 1e-10);
  r.add("identity", key("fiber-id", o.seed, samples), 0.0, json_number(w_id), w_id, tol);
  r.add("composition", key("fiber-comp", o.seed, samples), 0.0, json_number(w_comp), w_comp, tol);
  r.add("transitivity", key("fiber-rec", o.seed, samples), 0.0, json_number(w_rec), w_rec, tol);
  r.add("freeness", key("fiber-free", o.seed, samples), 0.0, json_number(w_free), w_free, tol);
}

// ---------------------------------------------------------------------------
// nijenhuis

inline void octonion_cases(Report& r, const SuiteOptions& o) {
  const double tol = tol_or(o, 1e-10);
  double unit_alt = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const Octonion x = Octonion::unit(a), y = Octonion::unit(b);
      unit_alt = std::max({unit_alt, ((x * x) * y - x * (x * y)).norm(), ((x * y) * y - x * (y * y)).norm()});
    }
  r.add("alternativity/units", key("alt-units", 0, 0), 0.0, json_number(unit_alt), unit_alt, 0.0);
  const Octonion assoc = associator(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
  r.add("associator(e1,e2,e4)", key("assoc", 0, 0), "nonzero", oct_json(assoc), assoc.norm() > 0.5 ? 0.0 : 1.0, 0.0);
  const Octonion nw = nijenhuis(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
  r.add("N(e1)(e2,e4)", key("nw", 0, 0), "nonzero", oct_json(nw), nw.norm() > 0.5 ? 0.0 : 1.0, 0.0);

  const int samples = samples_or(o, 100);
  double w_alg = 0.0, w_j = 0.0, w_n = 0.0;
  for (int i = 0; i < samples; ++i) {
    Rng rng(case_seed(o.seed, i));
    const Octonion a = random_octonion(rng), b = random_octonion(rng);
    const double sc = std::max(1.0, a.norm() * a.norm() * b.norm());
    w_alg = std::max({w_alg, ((a * a) * b - a * (a * b)).norm() / sc, ((a * b) * b - a * (b * b)).norm() / sc,
                      std::abs((a * b).norm() - a.norm() * b.norm()) / std::max(1.0, a.norm() * b.norm()),
                      std::abs(inner(a, b) - a.vec().dot(b.vec())) / std::max(1.0, a.norm() * b.norm())});
    const Octonion u = random_s6(rng), z = random_tangent(rng, u), e = random_tangent(rng, u);
    const Octonion jz = J_O(u, z);
    w_j = std::max({w_j, (J_O(u, jz) + z).norm() / std::max(1.0, z.norm()), std::abs(jz.re()),
                    std::abs(inner(jz, u))});
    const Octonion nz = nijenhuis(u, z, e);
    const double ns = std::max(1.0, z.norm() * e.norm());
    const double alpha = gaussian(rng);
    const Octonion e2 = random_tangent(rng, u);
    w_n = std::max({w_n, (nz + nijenhuis(u, e, z)).norm() / ns, nijenhuis(u, z, z).norm() / ns,
                    std::abs(nz.re()) / ns, std::abs(inner(nz, u)) / ns,
                    (nijenhuis(u, jz, e) + J_O(u, nz)).norm() / ns,
                    (nijenhuis(u, z, alpha * e + e2) - alpha * nz - nijenhuis(u, z, e2)).norm() / ns});
  }
  r.add("algebra", key("oct-alg", o.seed, samples), 0.0, json_number(w_alg), w_alg, tol);
  r.add("J_O", key("oct-j", o.seed, samples), 0.0, json_number(w_j), w_j, tol);
  r.add("nijenhuis", key("oct-n", o.seed, samples), 0.0, json_number(w_n), w_n, tol);
}

// ---------------------------------------------------------------------------
// embed-s6

inline void embed_cases(Report& r, const SuiteOptions& o) {
  const int samples = samples_or(o, 50);
  const int full = 2 * dim_N(kS6n, kS6k);
  double w_real = 0.0, w_dpi = 0.0, w_x = 0.0, w_d = 0.0, w_conj = 0.0;
  int bad_trans = 0, bad_drop = 0, bad_lift = 0, bad_iso = 0, bad_rank = 0;
  for (int i = 0; i < samples; ++i) {
    Rng rng(case_seed(o.seed, i));
    const Octonion u = random_s6(rng);
    const Differential d = dF(u, o.h);
    const ZPoint& w = d.frame.zpoint;
    w_real = std::max(w_real, std::max((involution(w).y - w.y).norm(), flag_distance(involution(w).flag, w.flag)));
    bad_trans += transversality_rank(d) != full;
    bad_drop += transversality_rank(d, {0}) != full - 1 || transversality_rank(d, {0, 1}) != full - 2;
    bad_rank += numerical_rank(detail::realify(d.cols), kFdRankTol) != 6;
    for (int a = 0; a < 6; ++a) {
      const Octonion z = detail::oct_of(d.frame.e.col(a));
      const TangentVec db = dbar_F(d, z);
      const CVector want = 0.5 * (z.vec().cast<cplx>() + kI * J_O(u, z).vec().cast<cplx>());
      w_dpi = std::max(w_dpi, (dpi(d, db) - want).norm());
      w_x = std::max(w_x, (dpi(d, apply_dF(d, z)) - z.vec().cast<cplx>()).norm());
      w_d = std::max(w_d, db.x_part.head(kS6n).norm());
      const TangentVec dj = dbar_F(d, J_O(u, z));
      w_conj = std::max(w_conj, (dj.flatten() + kI * db.flatten()).norm());
    }
    try {
      const CSubspace lift = lift_Ftilde(d);
      bad_lift += lift.dim() != kS6n || !in_gro(w, lift, d.chart);
      bad_iso += is_isotropic(w, lift, d.chart, 1e-6);
    } catch (const GeometryError&) {
      ++bad_lift;
    }
  }
  r.add("real-point", key("emb-real", o.seed, samples), 0.0, json_number(w_real), w_real, tol_or(o, 1e-9));
  r.add("transversality", key("emb-trans", o.seed, samples), {{"rank", full}}, {{"mismatches", bad_trans}},
        bad_trans, tol_or(o, 0.0));
  r.add("transversality/drop", key("emb-drop", o.seed, samples), {{"deficits", {1, 2}}}, {{"mismatches", bad_drop}},
        bad_drop, tol_or(o, 0.0));
  r.add("rank-dF", key("emb-rank", o.seed, samples), {{"rank", 6}}, {{"mismatches", bad_rank}}, bad_rank,
        tol_or(o, 0.0));
  r.add("dpi-identity", key("emb-dpi", o.seed, samples), 0.0, json_number(w_dpi), w_dpi, tol_or(o, 1e-6));
  r.add("x-part", key("emb-x", o.seed, samples), 0.0, json_number(w_x), w_x, tol_or(o, 1e-7));
  r.add("dbar-in-D", key("emb-d", o.seed, samples), 0.0, json_number(w_d), w_d, tol_or(o, 1e-6));
  r.add("dbar-conjugate-linear", key("emb-conj", o.seed, samples), 0.0, json_number(w_conj), w_conj,
        tol_or(o, 1e-6));
  r.add("lift", key("emb-lift", o.seed, samples), {{"dim", kS6n}, {"in_gro", true}}, {{"mismatches", bad_lift}},
        bad_lift, tol_or(o, 0.0));
  r.add("lift-not-isotropic", key("emb-iso", o.seed, samples), {{"isotropic", false}}, {{"isotropic_count", bad_iso}},
        bad_iso, tol_or(o, 0.0));
}

// ---------------------------------------------------------------------------
// verify-4theta

inline void four_theta_cases(Report& r, const SuiteOptions& o) {
  const int samples = samples_or(o, 20);
  for (int i = 0; i < samples; ++i) {
    Rng rng(case_seed(o.seed, i));
    const Octonion u = random_s6(rng), z = random_tangent(rng, u), e = random_tangent(rng, u);
    const FourThetaResult res = verify_4theta(u, z, e, o.h);
    r.add("sample/" + std::to_string(i), key("4theta", o.seed, i), oct_json(res.lhs), oct_json(res.rhs), res.residual,
          tol_or(o, 1e-4));
  }
  Rng rng(case_seed(o.seed, 9999));
  const Octonion u = random_s6(rng), z = random_tangent(rng, u), e = random_tangent(rng, u);
  const FourThetaResult same = verify_4theta(u, z, z, o.h);
  const double both = std::max(same.lhs.norm(), same.rhs.norm());
  r.add("diagonal", key("4theta-diag", o.seed, 0), 0.0, json_number(both), both, tol_or(o, 1e-12));
  // Second-order convergence above the round-off floor.
  Json steps = Json::array(), ratios = Json::array();
  double prev = verify_4theta(u, z, e, 0.04).residual, worst = 0.0;
  steps.push_back({{"h", 0.04}, {"residual", json_number(prev)}});
  for (double h : {0.02, 0.01, 0.005}) {
    const double cur = verify_4theta(u, z, e, h).residual;
    steps.push_back({{"h", h}, {"residual", json_number(cur)}});
    ratios.push_back(json_number(prev / cur));
    worst = std::max(worst, std::abs(prev / cur - 4.0));
    prev = cur;
  }
  r.add("convergence", key("4theta-conv", o.seed, 0), {{"ratio", 4.0}}, {{"steps", steps}, {"ratios", ratios}}, worst,
        tol_or(o, 0.5));
}

// ---------------------------------------------------------------------------
// chern

inline void chern_builtin_cases(Report& r, const SuiteOptions& o) {
  const double tol = tol_or(o, 0.0);
  {
    const BundleSymbol e = BundleSymbol::generic("E", 3, 3);
    const GradedPoly got = chern_lambda2(e).chern(3);
    const GradedPoly want = e.chern(1) * e.chern(2) - e.chern(3);
    r.add("lambda2/rank3", key("lambda2-rank3", 0, 0), want.to_string(), got.to_string(), (got - want).terms().size(), tol);
    const BundleSymbol e2 = BundleSymbol::generic("E", 2, 3);
    const BundleSymbol l2 = chern_lambda2(e2);
    const bool det = l2.rank == 1 && l2.chern(1) == e2.chern(1) && l2.chern(2).is_zero();
    r.add("lambda2/rank2", key("det", 0, 0), e2.chern(1).to_string(), l2.chern(1).to_string(), det ? 0.0 : 1.0, tol);
  }
  int bad = 0;
  Json failures = Json::array();
  for (int m = 1; m <= 4; ++m)
    for (int p = 1; p <= 4; ++p) {
      const BundleSymbol e = BundleSymbol::generic("E", m, 3), v = BundleSymbol::generic("V", p, 3);
      const BundleSymbol t = chern_tensor(e, v);
      for (int kk = 1; kk <= 3; ++kk) {
        const GradedPoly rest = t.chern(kk) - p * e.chern(kk) - m * v.chern(kk);
        const bool top_free = !rest.mentions("c" + std::to_string(kk) + "(E)") &&
                              !rest.mentions("c" + std::to_string(kk) + "(V)");
        const bool c1_ok = kk != 1 || rest.is_zero();
        if (!top_free || !c1_ok) {
          ++bad;
          failures.push_back({{"m", m}, {"n", p}, {"k", kk}});
        }
      }
    }
  r.add("tensor/structure", key("tensor-structure", 0, 0), {{"violations", 0}}, {{"violations", bad}, {"cases", failures}}, bad,
        tol);
  {
    const BundleSymbol e = BundleSymbol::generic("E", 3, 3);
    const BundleSymbol t = chern_tensor(e, BundleSymbol::trivial(1, 3));
    int diff = 0;
    for (int j = 1; j <= 3; ++j) diff += !(t.chern(j) == e.chern(j));
    r.add("tensor/trivial-line", key("triv", 0, 0), 0, diff, diff, tol);
  }
  const S6ChernResult s6 = s6_c3_vanishing();
  r.add("s6/c3", key("s6", 0, 0), "0", s6.c3.to_string(), s6.c3.terms().size(), tol);
  const GradedPoly t3 = GradedPoly::generator("t", 3, 3);
  const bool split_ok = s6.lambda_part == -3 * t3 && s6.tangent_part == 3 * t3;
  r.add("s6/split", key("s6-split", 0, 0), Json{{"lambda", "-3*t"}, {"tangent", "3*t"}},
        Json{{"lambda", s6.lambda_part.to_string()}, {"tangent", s6.tangent_part.to_string()}}, split_ok ? 0.0 : 1.0,
        tol);
  const S6ChernResult s6z = s6_c3_vanishing(false);
  r.add("s6/c3-without-top-class", key("s6-zero", 0, 0), "0", s6z.c3.to_string(), s6z.c3.terms().size(), tol);
  // Whitney product and root round trip with random integer multiples.
  int bad_w = 0;
  for (int i = 0; i < 20; ++i) {
    Rng rng(case_seed(o.seed, i));
    auto scaled = [&](const std::string& name, int rank) {
      std::vector<GradedPoly> cl;
      for (int j = 1; j <= 4; ++j) {
        const std::int64_t s = static_cast<std::int64_t>(rng() % 7) - 3;
        cl.push_back(j <= rank ? s * GradedPoly::generator("c" + std::to_string(j) + "(" + name + ")", j, 4)
                               : GradedPoly(4));
      }
      return BundleSymbol::make(rank, 4, std::move(cl));
    };
    const int m = 1 + static_cast<int>(rng() % 4), p = 1 + static_cast<int>(rng() % 4);
    const BundleSymbol e = scaled("E", m), v = scaled("V", p);
    bad_w += !(chern_sum(e, v).total() == e.total() * v.total());
    std::vector<std::vector<int>> id;
    for (int a = 0; a < m; ++a) {
      std::vector<int> f(m, 0);
      f[a] = 1;
      id.push_back(f);
    }
    const BundleSymbol back = detail::split_compute({e}, id);
    for (int j = 1; j <= 4; ++j) bad_w += !(back.chern(j) == e.chern(j));
    bad_w += !(chern_conj(chern_conj(e)).total() == e.total());
  }
  r.add("whitney-and-roundtrip", key("whitney", o.seed, 20), 0, bad_w, bad_w, tol);
}

inline void chern_expr_cases(Report& r, const SuiteOptions& o) {
  std::map<std::string, int> degrees;
  std::map<std::string, BundleSymbol> env;
  for (const auto& decl : o.bundles) {
    auto [name, b] = parse_bundle(decl, o.dim, degrees);
    env.insert_or_assign(name, std::move(b));
  }
  const BundleSymbol out = eval_bundle_expr(o.expr, env);
  Json inputs = o.bundles;
  const std::string in = o.expr + "|" + inputs.dump() + "|" + std::to_string(o.dim);
  for (int j = 1; j <= out.trunc; ++j) {
    const GradedPoly& c = out.chern(j);
    const bool check = o.expect_zero && *o.expect_zero == j;
    r.add("c" + std::to_string(j), in + "|" + std::to_string(j), check ? Json("0") : Json(nullptr), c.to_string(),
          check ? static_cast<double>(c.terms().size()) : 0.0, tol_or(o, 0.0));
  }
  if (o.expect_zero && (*o.expect_zero < 1 || *o.expect_zero > out.trunc)) {
    r.add("expect-zero", in, "class index within 1..dim", *o.expect_zero, 1.0, 0.0);
  }
  r.config["rank"] = out.rank;
}

// ---------------------------------------------------------------------------

using SuiteFn = std::function<void(Report&, const SuiteOptions&)>;

inline const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"dims", dims_cases},
      {"chart-roundtrip", chart_cases},
      {"torsion-oracle",
       [](Report& rep, const SuiteOptions& o) {
         torsion_frame_cases(rep, o);
         torsion_transport_cases(rep, o);
       }},
      {"group-action", group_cases},
      {"theta-rank", theta_cases},
      {"affine-fiber", fiber_cases},
      {"nijenhuis", octonion_cases},
      {"embed-s6", embed_cases},
      {"verify-4theta", four_theta_cases},
      {"chern",
       [](Report& rep, const SuiteOptions& o) {
         if (o.expr.empty()) chern_builtin_cases(rep, o);
         else chern_expr_cases(rep, o);
       }},
  };
  return r;
}

inline const SuiteFn* find_suite(const std::string& name) {
  for (const auto& [n, f] : registry())
    if (n == name) return &f;
  return nullptr;
}

}  // namespace suites

inline Json suite_config(const SuiteOptions& o) {
  const Tolerances& t = default_tolerances();
  Json cfg;
  cfg["seed"] = o.seed;
  cfg["h"] = o.h;
  cfg["tolerances"] = {{"rank", t.rank}, {"eq", t.eq}, {"acs", t.acs}, {"fd_rank", kFdRankTol}};
  cfg["tol_override"] = o.tol ? Json(*o.tol) : Json(nullptr);
  cfg["samples"] = o.samples ? Json(*o.samples) : Json("default");
  return cfg;
}

/// Runs one named suite. Throws std::invalid_argument for unknown names.
inline Report run_suite(const std::string& name, const SuiteOptions& o) {
  const suites::SuiteFn* fn = suites::find_suite(name);
  if (!fn) throw std::invalid_argument("unknown suite: " + name);
  Report r;
  r.suite = name;
  r.config = suite_config(o);
  if (name == "dims") r.config["nk"] = {o.n, o.k};
  if (name == "chern" && !o.expr.empty()) {
    r.config["expr"] = o.expr;
    r.config["bundles"] = o.bundles;
    r.config["dim"] = o.dim;
  }
  const auto t0 = std::chrono::steady_clock::now();
  (*fn)(r, o);
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace acx
