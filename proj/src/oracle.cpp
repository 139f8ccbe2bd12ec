#include "minfit/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace minfit {

namespace {

void direction_basis(const Vec3& t, Vec3& u, Vec3& v) {
  Vec3 aux = std::abs(t.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  u = (aux - aux.dot(t) * t).normalized();
  v = t.cross(u);
}

Vec3 sph(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
              std::cos(theta));
}

/// Cocyclicity determinant of the projections of four points along d.
/// Invariant under the in-plane basis choice (right-handed).
double cocyclic_det(const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c,
                    const Vec3& e) {
  Vec3 u, v;
  direction_basis(d, u, v);
  Eigen::Matrix4d M;
  const Vec3* pts[4] = {&a, &b, &c, &e};
  for (int i = 0; i < 4; ++i) {
    const double x = pts[i]->dot(u), y = pts[i]->dot(v);
    M.row(i) << x * x + y * y, x, y, 1.0;
  }
  return M.determinant();
}

bool mixed_sign(double a, double b, double c, double d) {
  const double lo = std::min({a, b, c, d});
  const double hi = std::max({a, b, c, d});
  return lo <= 0.0 && hi >= 0.0;
}

}  // namespace

std::vector<Vec3> cylinder_direction_oracle(std::span<const Vec3> pts, const GridSpec& grid) {
  std::vector<Vec3> out;
  if (pts.size() != 5) return out;
  const UnitScale scale = UnitScale::of(pts);
  Vec3 p[5];
  for (int i = 0; i < 5; ++i) p[i] = scale.to_unit(pts[i]);

  auto f1 = [&](const Vec3& d) { return cocyclic_det(d, p[0], p[1], p[2], p[3]); };
  auto f2 = [&](const Vec3& d) { return cocyclic_det(d, p[0], p[1], p[2], p[4]); };

  const int res = std::max(grid.resolution, 64);
  const double dth = (M_PI / 2.0) / res;
  const double dph = (2.0 * M_PI) / res;

  // Node values over the closed theta range and the wrapped phi range.
  std::vector<double> v1((res + 1) * (res + 1)), v2(v1.size());
  for (int i = 0; i <= res; ++i)
    for (int j = 0; j <= res; ++j) {
      const Vec3 d = sph(i * dth, j * dph);
      v1[i * (res + 1) + j] = f1(d);
      v2[i * (res + 1) + j] = f2(d);
    }

  std::vector<Vec3> candidates;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      auto at = [&](const std::vector<double>& v, int a, int b) {
        return v[a * (res + 1) + b];
      };
      if (!mixed_sign(at(v1, i, j), at(v1, i + 1, j), at(v1, i, j + 1), at(v1, i + 1, j + 1)))
        continue;
      if (!mixed_sign(at(v2, i, j), at(v2, i + 1, j), at(v2, i, j + 1), at(v2, i + 1, j + 1)))
        continue;
      // Refine by repeated quadrisection of the angular cell.
      double t0 = i * dth, t1 = (i + 1) * dth;
      double q0 = j * dph, q1 = (j + 1) * dph;
      for (int it = 0; it < grid.refine_iters; ++it) {
        const double tm = 0.5 * (t0 + t1), qm = 0.5 * (q0 + q1);
        const double ts[3] = {t0, tm, t1}, qs[3] = {q0, qm, q1};
        double a1[3][3], a2[3][3];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const Vec3 d = sph(ts[a], qs[b]);
            a1[a][b] = f1(d);
            a2[a][b] = f2(d);
          }
        int bi = -1, bj = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const bool m1 = mixed_sign(a1[a][b], a1[a + 1][b], a1[a][b + 1], a1[a + 1][b + 1]);
            const bool m2 = mixed_sign(a2[a][b], a2[a + 1][b], a2[a][b + 1], a2[a + 1][b + 1]);
            double score = std::abs(a1[a + 1][b + 1]) + std::abs(a2[a + 1][b + 1]);
            if (m1 && m2) score = -1.0;
            else if (m1 || m2) score *= 0.5;
            if (score < best) {
              best = score;
              bi = a;
              bj = b;
            }
          }
        t0 = ts[bi];
        t1 = ts[bi + 1];
        q0 = qs[bj];
        q1 = qs[bj + 1];
      }
      // Finite-difference Newton polish on the two determinants; revert if it
      // leaves the neighbourhood of the located cell.
      double th = 0.5 * (t0 + t1), ph = 0.5 * (q0 + q1);
      {
        const double cth = th, cph = ph, eps = 1e-7;
        for (int it = 0; it < 25; ++it) {
          const double F = f1(sph(th, ph)), G = f2(sph(th, ph));
          const double a = (f1(sph(th + eps, ph)) - F) / eps;
          const double b = (f1(sph(th, ph + eps)) - F) / eps;
          const double c = (f2(sph(th + eps, ph)) - G) / eps;
          const double d = (f2(sph(th, ph + eps)) - G) / eps;
          const double det = a * d - b * c;
          if (std::abs(det) < 1e-300) break;
          const double st = (F * d - G * b) / det, sp = (G * a - F * c) / det;
          th -= st;
          ph -= sp;
          if (std::abs(st) + std::abs(sp) < 1e-13) break;
        }
        if (std::abs(th - cth) > 2.0 * dth || std::abs(ph - cph) > 2.0 * dph) {
          th = cth;
          ph = cph;
        }
      }
      candidates.push_back(sph(th, ph));
    }

  // Keep only directions along which all five projections are cocyclic;
  // this removes the chord directions where the determinants vanish
  // degenerately.
  for (const Vec3& d : candidates) {
    Vec3 u, v;
    direction_basis(d, u, v);
    Eigen::Vector2d q[5];
    for (int i = 0; i < 5; ++i) q[i] = Eigen::Vector2d(p[i].dot(u), p[i].dot(v));
    const Eigen::Vector2d b = q[1] - q[0], c = q[2] - q[0];
    const double det = 2.0 * (b.x() * c.y() - b.y() * c.x());
    if (std::abs(det) <= 1e-9) continue;
    const Eigen::Vector2d center =
        q[0] +
        Eigen::Vector2d(c.y() * b.squaredNorm() - b.y() * c.squaredNorm(),
                        b.x() * c.squaredNorm() - c.x() * b.squaredNorm()) /
            det;
    const double r = (q[0] - center).norm();
    bool ok = r > 1e-9;
    for (int i = 3; i < 5 && ok; ++i) ok = std::abs((q[i] - center).norm() - r) <= 1e-4;
    if (!ok) continue;
    bool dup = false;
    for (const Vec3& e : out)
      if (std::min((d - e).norm(), (d + e).norm()) <= 1e-3) dup = true;
    if (!dup) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), [](const Vec3& a, const Vec3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  });
  return out;
}

std::vector<std::pair<double, double>> bivariate_sign_grid(const BiPoly& f, const BiPoly& g,
                                                           double lo, double hi,
                                                           const GridSpec& grid) {
  std::vector<std::pair<double, double>> out;
  const int res = std::max(grid.resolution, 64);
  const double h = (hi - lo) / res;
  const BiPoly fu = f.du(), fv = f.dv(), gu = g.du(), gv = g.dv();
  std::vector<double> vf((res + 1) * (res + 1)), vg(vf.size());
  for (int i = 0; i <= res; ++i)
    for (int j = 0; j <= res; ++j) {
      vf[i * (res + 1) + j] = f.eval(lo + i * h, lo + j * h);
      vg[i * (res + 1) + j] = g.eval(lo + i * h, lo + j * h);
    }
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      auto at = [&](const std::vector<double>& v, int a, int b) {
        return v[a * (res + 1) + b];
      };
      if (!mixed_sign(at(vf, i, j), at(vf, i + 1, j), at(vf, i, j + 1), at(vf, i + 1, j + 1)))
        continue;
      if (!mixed_sign(at(vg, i, j), at(vg, i + 1, j), at(vg, i, j + 1), at(vg, i + 1, j + 1)))
        continue;
      double u0 = lo + i * h, u1 = u0 + h;
      double w0 = lo + j * h, w1 = w0 + h;
      for (int it = 0; it < grid.refine_iters; ++it) {
        const double um = 0.5 * (u0 + u1), wm = 0.5 * (w0 + w1);
        const double us[3] = {u0, um, u1}, ws[3] = {w0, wm, w1};
        double af[3][3], ag[3][3];
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            af[a][b] = f.eval(us[a], ws[b]);
            ag[a][b] = g.eval(us[a], ws[b]);
          }
        int bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const bool m1 = mixed_sign(af[a][b], af[a + 1][b], af[a][b + 1], af[a + 1][b + 1]);
            const bool m2 = mixed_sign(ag[a][b], ag[a + 1][b], ag[a][b + 1], ag[a + 1][b + 1]);
            double score = std::abs(af[a + 1][b + 1]) + std::abs(ag[a + 1][b + 1]);
            if (m1 && m2) score = -1.0;
            else if (m1 || m2) score *= 0.5;
            if (score < best) {
              best = score;
              bi = a;
              bj = b;
            }
          }
        u0 = us[bi];
        u1 = us[bi + 1];
        w0 = ws[bj];
        w1 = ws[bj + 1];
      }
      double u = 0.5 * (u0 + u1), w = 0.5 * (w0 + w1);
      // Newton polish from the located cell; revert if it escapes the
      // neighbourhood (then the cell midpoint is the honest answer).
      {
        const double cu = u, cw = w;
        for (int it = 0; it < 25; ++it) {
          const double F = f.eval(u, w), G = g.eval(u, w);
          const double a = fu.eval(u, w), b = fv.eval(u, w);
          const double c = gu.eval(u, w), d = gv.eval(u, w);
          const double det = a * d - b * c;
          if (std::abs(det) < 1e-300) break;
          const double su = (F * d - G * b) / det, sw = (G * a - F * c) / det;
          u -= su;
          w -= sw;
          if (std::abs(su) + std::abs(sw) < 1e-14 * (1.0 + std::abs(u) + std::abs(w))) break;
        }
        if (std::abs(u - cu) > 2.0 * h || std::abs(w - cw) > 2.0 * h) {
          u = cu;
          w = cw;
        }
      }
      bool dup = false;
      for (const auto& [a, b] : out)
        if (std::hypot(a - u, b - w) <= 2.0 * h) dup = true;
      if (!dup) out.emplace_back(u, w);
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class Primitive>
MembershipReport membership_impl(const Primitive& prim, std::span<const OrientedPoint> pts,
                                 double oriented_tol, double pos_tol) {
  MembershipReport rep;
  rep.ok = true;
  for (const auto& op : pts) {
    double res;
    if constexpr (std::is_same_v<Primitive, Cylinder>) res = cylinder_residual(prim, op.p);
    else res = cone_residual(prim, op.p);
    rep.max_position_residual = std::max(rep.max_position_residual, res);
    if (res > pos_tol) rep.ok = false;
    if (op.n) {
      double dev;
      try {
        dev = normal_deviation(prim, op, std::max(pos_tol, res * 1.001));
      } catch (const MinfitError&) {
        rep.ok = false;
        continue;
      }
      rep.max_normal_deviation = std::max(rep.max_normal_deviation, dev);
      if (dev > oriented_tol) rep.ok = false;
    }
  }
  return rep;
}

}  // namespace

MembershipReport surface_membership(const Cylinder& c, std::span<const OrientedPoint> pts,
                                    double oriented_tol, double pos_tol) {
  return membership_impl(c, pts, oriented_tol, pos_tol);
}

MembershipReport surface_membership(const Cone& c, std::span<const OrientedPoint> pts,
                                    double oriented_tol, double pos_tol) {
  return membership_impl(c, pts, oriented_tol, pos_tol);
}

}  // namespace minfit
