// Release gate: eight acceptance checks, each printing one PASS/FAIL line.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <vector>

#include "minfit/cone.hpp"
#include "minfit/cylinder.hpp"
#include "minfit/harness.hpp"
#include "minfit/oracle.hpp"

using namespace minfit;

namespace {

constexpr FitKind kAllKinds[] = {FitKind::Cyl1N2P, FitKind::Cyl5P, FitKind::Cone2N,
                                 FitKind::Cone1N3P, FitKind::Cone6P};

void report(int idx, bool pass) {
  std::printf("CRITERION %d: %s\n", idx, pass ? "PASS" : "FAIL");
  std::fflush(stdout);
}

double angle_between_lines(const Vec3& a, const Vec3& b) {
  const Vec3 u = a.normalized(), v = b.normalized();
  return std::atan2(u.cross(v).norm(), std::abs(u.dot(v)));
}

// Same per-trial record sampling as the stats driver: positions uniform in the
// unit cube, normals uniform on the sphere, generator split by trial index.
std::vector<OrientedPoint> random_records(FitKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cube(0.0, 1.0);
  const InputPattern pat = input_pattern(kind);
  std::vector<OrientedPoint> recs;
  for (int i = 0; i < pat.total; ++i) {
    const Vec3 p(cube(rng), cube(rng), cube(rng));
    if (i < pat.oriented) recs.emplace_back(p, random_unit_vector(rng));
    else recs.emplace_back(p);
  }
  return recs;
}

// Records sampled exactly on a random primitive of the matching family.
std::vector<OrientedPoint> on_surface_records(FitKind kind, std::mt19937_64& rng,
                                              Cylinder* cyl_out, Cone* cone_out) {
  const InputPattern pat = input_pattern(kind);
  std::vector<OrientedPoint> recs;
  const bool is_cyl = kind == FitKind::Cyl1N2P || kind == FitKind::Cyl5P;
  Cylinder cyl = is_cyl ? random_cylinder(rng) : Cylinder(Vec3(0, 0, 0), Vec3(0, 0, 1), 1);
  Cone cone = is_cyl ? Cone(Vec3(0, 0, 0), Vec3(0, 0, 1), 0.5) : random_cone(rng);
  for (int i = 0; i < pat.total; ++i) {
    Vec3 n;
    const Vec3 p = is_cyl ? sample_on(cyl, rng, &n) : sample_on(cone, rng, &n);
    if (i < pat.oriented) recs.emplace_back(p, n);
    else recs.emplace_back(p);
  }
  if (cyl_out) *cyl_out = cyl;
  if (cone_out) *cone_out = cone;
  return recs;
}

struct KindTally {
  std::map<int, int> histogram;  // finite/empty solution counts
  int degenerate = 0;            // classified infinite families and rejections
  int violations = 0;            // counts outside the admissible set, unflagged
};

bool count_admissible(FitKind kind, int c) {
  switch (kind) {
    case FitKind::Cyl1N2P: return c == 0 || c == 2;
    case FitKind::Cyl5P: return c == 0 || c == 2 || c == 4 || c == 6;
    case FitKind::Cone2N: return c == 2;
    case FitKind::Cone1N3P: return c == 0 || c == 2 || c == 4;
    case FitKind::Cone6P: return c % 2 == 0 && c <= 12;
  }
  return false;
}

std::map<FitKind, KindTally> g_tally;  // filled by the count check, reused below

}  // namespace

TEST_CASE("criterion 1: synthesize-and-recover") {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  for (FitKind kind : kAllKinds) {
    std::mt19937_64 rng(20260824);
    int hits = 0, residual_bad = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
      Cylinder cyl(Vec3(0, 0, 0), Vec3(0, 0, 1), 1);
      Cone cone(Vec3(0, 0, 0), Vec3(0, 0, 1), 0.5);
      const auto recs = on_surface_records(kind, rng, &cyl, &cone);
      FitOutcome out;
      try {
        out = run_fit(kind, recs);
      } catch (const MinfitError&) {
        continue;  // measure-zero rejected sample; counts as a miss
      }
      const bool is_cyl = kind == FitKind::Cyl1N2P || kind == FitKind::Cyl5P;
      double best = 1e9;
      if (is_cyl) {
        for (const auto& c : std::get<CylinderSolutions>(out.solutions).primitives) {
          best = std::min(best, parameter_distance(c, cyl));
          for (const auto& r : recs)
            if (cylinder_residual(c, r.p) > 1e-6) ++residual_bad;
        }
      } else {
        for (const auto& c : std::get<ConeSolutions>(out.solutions).primitives) {
          best = std::min(best, parameter_distance(c, cone));
          for (const auto& r : recs)
            if (cone_residual(c, r.p) > 1e-6) ++residual_bad;
        }
      }
      if (best <= 1e-6) ++hits;
    }
    const bool kind_ok = hits * 100 >= trials * 99 && residual_bad == 0;
    std::printf("  [1] %s: recovered %d/%d, invalid residuals %d -> %s\n",
                to_string(kind).c_str(), hits, trials, residual_bad, kind_ok ? "ok" : "MISS");
    pass = pass && kind_ok;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("  [1] total runtime %.1f s (budget 120 s)\n", secs);
  pass = pass && secs < 120.0;
  report(1, pass);
  CHECK(pass);
}

TEST_CASE("criterion 2: solution-count admissibility over 10k trials per solver") {
  bool pass = true;
  for (FitKind kind : kAllKinds) {
    KindTally tally;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      std::mt19937_64 rng = split_rng(1, t);
      const auto recs = random_records(kind, rng);
      try {
        const FitOutcome out = run_fit(kind, recs);
        const auto visit = [&](const auto& sols) {
          if (sols.kind == SolutionKind::InfiniteFamily) {
            ++tally.degenerate;
            return;
          }
          const int c = static_cast<int>(sols.primitives.size());
          if (sols.kind == SolutionKind::Empty && kind == FitKind::Cone2N &&
              sols.diagnosis.reason != Reason::Generic) {
            ++tally.degenerate;  // classified special pair, not a count
            return;
          }
          ++tally.histogram[c];
          if (!count_admissible(kind, c) &&
              sols.diagnosis.note.find("multiplicity") == std::string::npos)
            ++tally.violations;
        };
        std::visit(visit, out.solutions);
      } catch (const MinfitError&) {
        ++tally.degenerate;
      }
    }
    std::printf("  [2] %s:", to_string(kind).c_str());
    for (const auto& [c, f] : tally.histogram) std::printf(" %d->%.2f%%", c, 0.01 * f);
    std::printf(" degenerate=%d violations=%d\n", tally.degenerate, tally.violations);
    pass = pass && tally.violations == 0;
    g_tally[kind] = std::move(tally);
  }
  report(2, pass);
  CHECK(pass);
}

TEST_CASE("criterion 3: reference count distributions, 10k trials, +-3pp soft") {
  struct Row {
    FitKind kind;
    std::map<int, double> expected;  // count -> percent
  };
  const Row rows[] = {
      {FitKind::Cyl1N2P, {{0, 46.87}, {2, 53.13}}},
      {FitKind::Cyl5P, {{0, 22.7}, {2, 53.9}, {4, 21.4}, {6, 2.0}}},
      {FitKind::Cone1N3P, {{0, 6.9}, {2, 85.9}, {4, 7.2}}},
      {FitKind::Cone6P,
       {{0, 1.0}, {2, 10.5}, {4, 28.7}, {6, 36.3}, {8, 18.7}, {10, 3.9}, {12, 0.9}}},
  };
  bool hard_pass = true, soft_pass = true;
  for (const auto& row : rows) {
    const KindTally& tally = g_tally[row.kind];
    for (const auto& [c, want] : row.expected) {
      const auto it = tally.histogram.find(c);
      const double got = it == tally.histogram.end() ? 0.0 : 0.01 * it->second;
      const double off = std::abs(got - want);
      if (off > 3.0) {
        soft_pass = false;
        std::printf(
            "  [3] %s count %d: measured %.2f%% vs reference %.2f%% (off %.2fpp); "
            "documented distribution discrepancy (reference sampling unstated)\n",
            to_string(row.kind).c_str(), c, got, want, off);
      }
      if (off > 15.0) hard_pass = false;
    }
  }
  // A soft miss is accepted while counts stay admissible (criterion 2) and the
  // discrepancy is printed above; only a >15pp bin is a hard failure.
  bool counts_ok = true;
  for (const auto& [kind, tally] : g_tally) counts_ok = counts_ok && tally.violations == 0;
  const bool pass = hard_pass && (soft_pass || counts_ok);
  report(3, pass);
  CHECK(pass);
}

TEST_CASE("criterion 4: independent-oracle equivalence") {
  int dir_agree = 0, dir_total = 0;
  for (int t = 0; t < 200; ++t) {
    std::mt19937_64 rng = split_rng(401, t);
    std::uniform_real_distribution<double> cube(0.0, 1.0);
    std::vector<Vec3> pts(5);
    for (auto& p : pts) p = Vec3(cube(rng), cube(rng), cube(rng));
    const auto sols = cylinder_from_five_points(pts);
    if (sols.kind != SolutionKind::Finite && sols.kind != SolutionKind::Empty) continue;
    ++dir_total;
    const auto dirs = cylinder_direction_oracle(pts);
    bool ok = dirs.size() == sols.primitives.size();
    for (const auto& c : sols.primitives) {
      double best = 1e9;
      for (const auto& d : dirs) best = std::min(best, angle_between_lines(c.axis_dir, d));
      if (best > 1e-4) ok = false;
    }
    if (ok) ++dir_agree;
  }
  std::printf("  [4] direction scan vs five-point solver: %d/%d agree\n", dir_agree, dir_total);
  const bool dir_pass = dir_agree * 100 >= dir_total * 95;

  int grid_agree = 0;
  const int grid_trials = 200;
  for (int t = 0; t < grid_trials; ++t) {
    std::mt19937_64 rng = split_rng(409, t);
    std::uniform_real_distribution<double> tilt(-0.3, 0.3), radius(0.5, 2.5);
    const BiPoly f = BiPoly::monomial(2, 0, 1) + BiPoly::monomial(0, 1, tilt(rng)) +
                     BiPoly::constant(-radius(rng));
    const BiPoly g = BiPoly::monomial(0, 2, 1) + BiPoly::monomial(1, 0, tilt(rng)) +
                     BiPoly::constant(-radius(rng));
    const auto alg = bivariate_solve(f, g);
    const auto grid = bivariate_sign_grid(f, g, -10.0, 10.0);
    bool ok = alg.size() == grid.size();
    for (const auto& [gu, gv] : grid) {
      double best = 1e9;
      for (const auto& [au, av] : alg) best = std::min(best, std::hypot(gu - au, gv - av));
      if (best > 1e-4) ok = false;
    }
    if (ok) ++grid_agree;
  }
  std::printf("  [4] sign grid vs algebraic solver: %d/%d agree\n", grid_agree, grid_trials);
  const bool grid_pass = grid_agree * 100 >= grid_trials * 95;

  report(4, dir_pass && grid_pass);
  CHECK(dir_pass);
  CHECK(grid_pass);
}

TEST_CASE("criterion 5: algebraic identities") {
  std::mt19937_64 rng(503);
  std::uniform_real_distribution<double> u(0.2, 1.0), s(-1.0, 1.0);
  bool pass = true;

  // Ideal membership: D_j * F + z_j * G reproduces C_j.
  for (int seed = 0; seed < 50; ++seed) {
    const std::array<Vec3, 5> p = {Vec3(0, 0, 0), Vec3(u(rng), 0, 0), Vec3(s(rng), u(rng), 0),
                                   Vec3(s(rng), s(rng), u(rng)), Vec3(s(rng), s(rng), -u(rng))};
    const Cyl5PSystem sys = cylinder_five_point_system(std::span<const Vec3, 5>(p.data(), 5));
    for (int k = 0; k < 20; ++k) {
      const double l = s(rng), m = s(rng), n = s(rng);
      const double F = sys.F.eval(l, m, n), G = sys.G.eval(l, m, n);
      for (auto [D, C, z] : {std::tuple{&sys.D4, &sys.C4, p[3].z()},
                             std::tuple{&sys.D5, &sys.C5, p[4].z()}}) {
        const double lhs = D->eval(l, m, n) * F + z * G;
        const double c = C->eval(l, m, n);
        if (std::abs(lhs - c) > 1e-9 * (1.0 + std::abs(lhs) + std::abs(c))) pass = false;
      }
    }
  }

  // The cocyclicity cubic vanishes at all six chord directions.
  for (int t = 0; t < 20; ++t) {
    const std::array<Vec3, 4> p = {Vec3(0, 0, 0), Vec3(u(rng), 0, 0), Vec3(s(rng), u(rng), 0),
                                   Vec3(s(rng), s(rng), u(rng))};
    const TriPoly C = cylinder_cocyclicity_cubic(std::span<const Vec3, 4>(p.data(), 4));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const Vec3 d = (p[j] - p[i]).normalized();
        if (std::abs(C.eval(d.x(), d.y(), d.z())) > 1e-9 * (1.0 + C.one_norm())) pass = false;
      }
  }

  // The three six-point condition forms carry only even-degree monomials.
  for (int t = 0; t < 20; ++t) {
    const std::array<Vec3, 6> p = {Vec3(0, 0, 0),          Vec3(u(rng), 0, 0),
                                   Vec3(s(rng), u(rng), 0), Vec3(s(rng), s(rng), u(rng)),
                                   Vec3(s(rng), s(rng), s(rng)), Vec3(s(rng), s(rng), s(rng))};
    Cone6PSystem sys;
    try {
      sys = cone_six_point_system(std::span<const Vec3, 6>(p.data(), 6));
    } catch (const MinfitError&) {
      continue;
    }
    if (!sys.H0.is_even() || !sys.H5.is_even() || !sys.H6.is_even()) pass = false;
    const double l = s(rng), m = s(rng), n = s(rng);
    for (const TriPoly* H : {&sys.H0, &sys.H5, &sys.H6}) {
      const double a = H->eval(l, m, n), b = H->eval(-l, -m, -n);
      if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) pass = false;
    }
  }

  // The discarded two-normal branch solves the apex-at-infinity relation.
  for (int t = 0; t < 100; ++t) {
    std::mt19937_64 rng2 = split_rng(521, t);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    const double x2 = v(rng2), y2 = v(rng2), z2 = v(rng2);
    const Vec3 n2 = random_unit_vector(rng2);
    const double a2 = n2.x(), b2 = n2.y(), c2 = n2.z();
    const double den = a2 * a2 + b2 * b2;
    if (den < 1e-6) continue;
    const double l1 = (a2 * a2 * z2 - a2 * c2 * x2 + b2 * b2 * z2 - b2 * c2 * y2) / den;
    const double l2 = -(a2 * x2 + b2 * y2) / den;
    if (std::abs(z2 + l2 * c2 - l1) > 1e-10 * (1.0 + std::abs(l1) + std::abs(l2))) pass = false;
  }

  report(5, pass);
  CHECK(pass);
}

TEST_CASE("criterion 6: degenerate-case corpus") {
  int passed = 0, total = 0;
  const auto expect = [&](const char* name, bool ok) {
    ++total;
    if (ok) ++passed;
    else std::printf("  [6] case '%s' misclassified\n", name);
  };
  const OrientedPoint up(Vec3(0, 0, 0), Vec3(0, 0, 1));

  {  // oriented-plus-two cylinder branches
    auto s = cylinder_from_oriented_and_two_points(up, Vec3(1, 0.2, 0.5), Vec3(0.8, -0.3, -0.4));
    expect("cyl opposite sides",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::OppositeSides);
    s = cylinder_from_oriented_and_two_points(up, Vec3(1, 0.5, 0), Vec3(0.7, 0.2, 0.6));
    expect("cyl double root", s.kind == SolutionKind::Finite && s.primitives.size() == 1 &&
                                  s.diagnosis.note.find("multiplicity 2") != std::string::npos);
    s = cylinder_from_oriented_and_two_points(up, Vec3(0.6, 0.3, 0.4), Vec3(-0.6, -0.3, 0.4));
    expect("cyl mirror pair",
           s.kind == SolutionKind::InfiniteFamily && s.diagnosis.reason == Reason::MirrorSymmetric);
    s = cylinder_from_oriented_and_two_points(up, Vec3(1, 0.3, 0), Vec3(0.4, 0.9, 0));
    expect("cyl both in normal plane", s.kind == SolutionKind::InfiniteFamily &&
                                           s.diagnosis.reason == Reason::NormalPlaneCoplanar);
    s = cylinder_from_oriented_and_two_points(up, Vec3(0.5, 0.5, 0.5), Vec3(0.5, 0.5, 0.5));
    expect("cyl coincident extras", s.kind == SolutionKind::InfiniteFamily &&
                                        s.diagnosis.reason == Reason::CoincidentPoints);
    s = cylinder_from_oriented_and_two_points(up, Vec3(0, 0, 0), Vec3(1, 1, 1));
    expect("cyl p2 equals base point", s.kind == SolutionKind::InfiniteFamily &&
                                           s.diagnosis.reason == Reason::CoincidentPoints);
  }
  {  // coplanar five-point cylinder branches
    std::vector<Vec3> circle, ellipse, hyp, par, line;
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) circle.emplace_back(std::cos(t), std::sin(t), 0.0);
    for (double t : {0.0, 0.8, 1.6, 2.9, 4.5}) ellipse.emplace_back(2 * std::cos(t), std::sin(t), 0.0);
    for (double t : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      hyp.emplace_back(std::cosh(t), std::sinh(t), 0.0);
      par.emplace_back(t, t * t, 0.0);
    }
    for (int i = 0; i < 5; ++i) line.emplace_back(i, 0.0, 0.0);
    auto s = cylinder_from_five_points(circle);
    expect("cyl coplanar circle", s.kind == SolutionKind::Finite && s.primitives.size() == 1);
    s = cylinder_from_five_points(ellipse);
    expect("cyl coplanar ellipse", s.kind == SolutionKind::Finite && s.primitives.size() == 2);
    s = cylinder_from_five_points(hyp);
    expect("cyl coplanar hyperbola",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::CoplanarConic);
    s = cylinder_from_five_points(par);
    expect("cyl coplanar parabola",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::CoplanarConic);
    s = cylinder_from_five_points(line);
    expect("cyl collinear points",
           s.kind == SolutionKind::InfiniteFamily && s.diagnosis.reason == Reason::CollinearPoints);
  }
  {  // two-normal cone branches
    auto s = cone_from_two_oriented_points(up, OrientedPoint(Vec3(0.5, 0.3, 0.4), Vec3(0, 0, 1)));
    expect("cone parallel normals off plane",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::ParallelNormals);
    s = cone_from_two_oriented_points(up, OrientedPoint(Vec3(0.5, 0.3, 0), Vec3(0, 0, 1)));
    expect("cone parallel normals in plane",
           s.kind == SolutionKind::InfiniteFamily && s.diagnosis.reason == Reason::ParallelNormals);
    s = cone_from_two_oriented_points(up, OrientedPoint(Vec3(0.8, 0, 0.4), Vec3(-0.8, 0, 0.6)));
    expect("cone equidistant meet", s.kind == SolutionKind::InfiniteFamily &&
                                        s.diagnosis.reason == Reason::EquidistantIntersection);
    s = cone_from_two_oriented_points(up, OrientedPoint(Vec3(0.8, 0, 0.2), Vec3(-0.8, 0, 0.8)));
    expect("cone unequal meet", s.kind == SolutionKind::Finite && s.primitives.size() == 2 &&
                                    (s.primitives[0].apex - s.primitives[1].apex).norm() < 1e-9);
    bool threw = false;
    try {
      cone_from_two_oriented_points(up, OrientedPoint(Vec3(0, 0, 0), Vec3(0, 1, 0)));
    } catch (const MinfitError&) {
      threw = true;
    }
    expect("cone coincident oriented points", threw);
  }
  {  // oriented-plus-three cone branch
    const auto s = cone_from_oriented_and_three_points(up, Vec3(1, 0, 0), Vec3(0, 1, 0),
                                                       Vec3(1, 1, 0));
    expect("cone extras in normal plane",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::NormalPlaneCoplanar);
  }
  {  // five-coplanar and six-coplanar cone branches
    std::vector<Vec3> circle6, conic6, flat6, degen6, ell, par, hyp;
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) circle6.emplace_back(std::cos(t), std::sin(t), 0.0);
    circle6.emplace_back(2.0, 0.0, -2.0);
    for (double t : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) conic6.emplace_back(std::cos(t), std::sin(t), 0.0);
    flat6 = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
             Vec3(1, 1, 0), Vec3(0.5, -0.3, 0), Vec3(-0.7, 0.4, 0)};
    degen6 = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0),
              Vec3(0, 1, 0), Vec3(1, 1, 0), Vec3(0.3, 0.4, 1)};
    const double al = 0.5;
    for (double th : {0.0, 1.3, 2.6, 3.9, 5.2}) {
      const Vec3 d(std::sin(al) * std::cos(th), std::sin(al) * std::sin(th), std::cos(al));
      ell.push_back(d / (std::cos(al) - 0.3 * std::sin(al) * std::cos(th)));
    }
    ell.push_back(2.0 / (std::cos(al) - 0.3 * std::sin(al)) * Vec3(std::sin(al), 0, std::cos(al)));
    par = {Vec3(0, 1, 1),  Vec3(0, -1, 1), Vec3(0.5, std::sqrt(2.0), 1.5),
           Vec3(0.5, -std::sqrt(2.0), 1.5), Vec3(1.5, 2, 2.5), Vec3(1, 0, 1)};
    for (double y : {-1.0, -0.5, 0.0, 0.5, 1.0}) hyp.emplace_back(1.0, y, std::sqrt(1 + y * y));
    hyp.emplace_back(2.0, 0.0, 2.0);

    auto s = cone_from_six_points(circle6);
    expect("cone circle plus apex point", s.kind == SolutionKind::Finite &&
                                              s.primitives.size() == 2);
    s = cone_from_six_points(ell);
    expect("cone elliptical section",
           s.kind == SolutionKind::Finite &&
               [&] {
                 for (const auto& c : s.primitives)
                   if (parameter_distance(c, Cone(Vec3(0, 0, 0), Vec3(0, 0, 1), al)) <= 1e-6)
                     return true;
                 return false;
               }());
    s = cone_from_six_points(par);
    expect("cone parabolic section",
           s.kind == SolutionKind::Finite && s.primitives.size() <= 3);
    s = cone_from_six_points(hyp);
    expect("cone hyperbolic section", s.kind == SolutionKind::Finite);
    s = cone_from_six_points(conic6);
    expect("cone six on one conic",
           s.kind == SolutionKind::InfiniteFamily && s.diagnosis.reason == Reason::CoplanarConic);
    s = cone_from_six_points(flat6);
    expect("cone six coplanar generic",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::CoplanarConic);
    s = cone_from_six_points(degen6);
    expect("cone degenerate conic",
           s.kind == SolutionKind::Empty && s.diagnosis.reason == Reason::CoplanarConic);
  }

  std::printf("  [6] corpus: %d/%d classified exactly\n", passed, total);
  report(6, passed == total);
  CHECK(passed == total);
}

TEST_CASE("criterion 7: rigid-motion equivariance") {
  bool pass = true;
  for (FitKind kind : kAllKinds) {
    int bad = 0;
    for (int t = 0; t < 100; ++t) {
      std::mt19937_64 rng = split_rng(701 + static_cast<int>(kind), t);
      const auto recs = on_surface_records(kind, rng, nullptr, nullptr);
      std::uniform_real_distribution<double> shift(-1.0, 1.0), angle(0.0, 2.0 * M_PI);
      RigidMotion M;
      M.R = Eigen::AngleAxisd(angle(rng), random_unit_vector(rng)).toRotationMatrix();
      M.t = Vec3(shift(rng), shift(rng), shift(rng));
      std::vector<OrientedPoint> moved;
      for (const auto& r : recs) {
        if (r.n) moved.emplace_back(M.apply(r.p), M.apply_dir(r.n->vec()));
        else moved.emplace_back(M.apply(r.p));
      }
      FitOutcome base, other;
      try {
        base = run_fit(kind, recs);
        other = run_fit(kind, moved);
      } catch (const MinfitError&) {
        continue;  // measure-zero rejected sample
      }
      const auto matches = [&](const auto& a, const auto& b) {
        if (a.kind != b.kind || a.primitives.size() != b.primitives.size()) return false;
        for (const auto& prim : a.primitives) {
          const auto moved_prim = transform(M, prim);
          double best = 1e9;
          for (const auto& q : b.primitives)
            best = std::min(best, parameter_distance(moved_prim, q));
          if (best > 1e-7) return false;
        }
        return true;
      };
      const bool ok = std::visit(
          [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            return matches(a, std::get<T>(other.solutions));
          },
          base.solutions);
      if (!ok) ++bad;
    }
    if (bad > 0) std::printf("  [7] %s: %d/100 trials not transported\n",
                             to_string(kind).c_str(), bad);
    pass = pass && bad == 0;
  }
  report(7, pass);
  CHECK(pass);
}

TEST_CASE("criterion 8: relative timing ordering") {
  std::map<FitKind, double> mean;
  for (FitKind kind : kAllKinds) {
    const BenchReport r = run_bench(kind, 60, 1);
    mean[kind] = r.mean_ms;
    std::printf("  [8] %s: mean %.3f ms (p50 %.3f, p90 %.3f)\n", to_string(kind).c_str(),
                r.mean_ms, r.p50_ms, r.p90_ms);
  }
  double slowest_other = 0.0;
  for (const auto& [k, m] : mean)
    if (k != FitKind::Cone6P) slowest_other = std::max(slowest_other, m);
  const bool six_slowest = mean[FitKind::Cone6P] > slowest_other;
  // The two single-root solvers must be the two fastest overall.
  const double fast_pair = std::max(mean[FitKind::Cyl1N2P], mean[FitKind::Cone2N]);
  bool pair_fastest = true;
  for (const auto& [k, m] : mean)
    if (k != FitKind::Cyl1N2P && k != FitKind::Cone2N && m < fast_pair) pair_fastest = false;
  const bool budget = mean[FitKind::Cone6P] < 800.0;
  const bool pass = six_slowest && pair_fastest && budget;
  report(8, pass);
  CHECK(pass);
}
