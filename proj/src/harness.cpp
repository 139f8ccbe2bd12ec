#include "minfit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "minfit/cone.hpp"
#include "minfit/cylinder.hpp"

namespace minfit {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

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

int solution_count(const AnySolutions& s) {
  return std::visit([](const auto& ss) { return static_cast<int>(ss.count()); }, s);
}

SolutionKind solution_kind(const AnySolutions& s) {
  return std::visit([](const auto& ss) { return ss.kind; }, s);
}

}  // namespace

std::string to_string(FitKind k) {
  switch (k) {
    case FitKind::Cyl1N2P: return "cylinder-1n2p";
    case FitKind::Cyl5P: return "cylinder-5p";
    case FitKind::Cone2N: return "cone-2n";
    case FitKind::Cone1N3P: return "cone-1n3p";
    case FitKind::Cone6P: return "cone-6p";
  }
  return "?";
}

std::optional<FitKind> fit_kind_from_string(const std::string& s) {
  for (FitKind k : {FitKind::Cyl1N2P, FitKind::Cyl5P, FitKind::Cone2N, FitKind::Cone1N3P,
                    FitKind::Cone6P})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

InputPattern input_pattern(FitKind k) {
  switch (k) {
    case FitKind::Cyl1N2P: return {3, 1};
    case FitKind::Cyl5P: return {5, 0};
    case FitKind::Cone2N: return {2, 2};
    case FitKind::Cone1N3P: return {4, 1};
    case FitKind::Cone6P: return {6, 0};
  }
  return {0, 0};
}

FitOutcome run_fit(FitKind kind, std::span<const OrientedPoint> records) {
  const InputPattern pat = input_pattern(kind);
  if (static_cast<int>(records.size()) != pat.total)
    throw MinfitError(ErrorCode::UsageError,
                      to_string(kind) + " expects " + std::to_string(pat.total) +
                          " records (" + std::to_string(pat.oriented) +
                          " oriented), got " + std::to_string(records.size()));
  for (int i = 0; i < pat.total; ++i) {
    const bool has = records[i].n.has_value();
    const bool want = i < pat.oriented;
    if (has != want)
      throw MinfitError(ErrorCode::UsageError,
                        to_string(kind) + ": record " + std::to_string(i) +
                            (want ? " must carry a normal" : " must be a plain point"));
  }
  std::vector<Vec3> plain;
  for (const auto& r : records) plain.push_back(r.p);

  FitOutcome out{CylinderSolutions{}, 0.0};
  const double t0 = now_ms();
  switch (kind) {
    case FitKind::Cyl1N2P:
      out.solutions = cylinder_from_oriented_and_two_points(records[0], plain[1], plain[2]);
      break;
    case FitKind::Cyl5P:
      out.solutions = cylinder_from_five_points(plain);
      break;
    case FitKind::Cone2N:
      out.solutions = cone_from_two_oriented_points(records[0], records[1]);
      break;
    case FitKind::Cone1N3P:
      out.solutions =
          cone_from_oriented_and_three_points(records[0], plain[1], plain[2], plain[3]);
      break;
    case FitKind::Cone6P:
      out.solutions = cone_from_six_points(plain);
      break;
  }
  out.wall_ms = now_ms() - t0;
  return out;
}

std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

TrialStats run_stats(FitKind kind, int trials, std::uint64_t seed) {
  TrialStats stats;
  stats.kind = kind;
  stats.trials = trials;
  stats.seed = seed;
  double total_ms = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = split_rng(seed, t);
    const auto recs = random_records(kind, rng);
    try {
      const FitOutcome out = run_fit(kind, recs);
      total_ms += out.wall_ms;
      if (solution_kind(out.solutions) == SolutionKind::InfiniteFamily) ++stats.degenerate;
      else ++stats.histogram[solution_count(out.solutions)];
    } catch (const MinfitError&) {
      ++stats.degenerate;
    }
  }
  stats.mean_time_ms = trials > 0 ? total_ms / trials : 0.0;
  return stats;
}

std::string stats_csv(const TrialStats& s) {
  std::ostringstream os;
  os << "count,frequency,proportion_percent\n";
  for (const auto& [count, freq] : s.histogram)
    os << count << "," << freq << "," << 100.0 * freq / std::max(s.trials, 1) << "\n";
  if (s.degenerate > 0)
    os << "degenerate," << s.degenerate << ","
       << 100.0 * s.degenerate / std::max(s.trials, 1) << "\n";
  return os.str();
}

BenchReport run_bench(FitKind kind, int trials, std::uint64_t seed) {
  BenchReport rep;
  rep.kind = kind;
  rep.trials = trials;
  std::vector<double> times;
  times.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = split_rng(seed, t);
    const auto recs = random_records(kind, rng);
    try {
      times.push_back(run_fit(kind, recs).wall_ms);
    } catch (const MinfitError&) {
    }
  }
  if (times.empty()) return rep;
  std::sort(times.begin(), times.end());
  double sum = 0.0;
  for (double v : times) sum += v;
  rep.mean_ms = sum / times.size();
  rep.p50_ms = times[times.size() / 2];
  rep.p90_ms = times[(times.size() * 9) / 10];
  return rep;
}

std::vector<RansacHit> run_ransac(std::span<const OrientedPoint> records,
                                  const RansacConfig& cfg) {
  const InputPattern pat = input_pattern(cfg.kind);
  std::vector<int> oriented_idx, all_idx;
  for (size_t i = 0; i < records.size(); ++i) {
    all_idx.push_back(static_cast<int>(i));
    if (records[i].n) oriented_idx.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(records.size()) < pat.total ||
      static_cast<int>(oriented_idx.size()) < pat.oriented)
    throw MinfitError(ErrorCode::UsageError, "not enough points for a minimal sample");

  std::vector<bool> used(records.size(), false);

  auto inliers_of = [&](const auto& prim) {
    std::vector<int> in;
    for (size_t i = 0; i < records.size(); ++i) {
      if (used[i]) continue;
      double res;
      if constexpr (std::is_same_v<std::decay_t<decltype(prim)>, Cylinder>)
        res = cylinder_residual(prim, records[i].p);
      else
        res = cone_residual(prim, records[i].p);
      if (res > cfg.pos_tol) continue;
      if (records[i].n) {
        try {
          if (normal_deviation(prim, records[i], cfg.pos_tol * 2.0) > cfg.normal_tol)
            continue;
        } catch (const MinfitError&) {
          continue;
        }
      }
      in.push_back(static_cast<int>(i));
    }
    return in;
  };

  std::vector<RansacHit> hits;
  for (int round = 0; round < 8; ++round) {
    std::optional<RansacHit> best;
    std::vector<int> best_inliers;
    for (int it = 0; it < cfg.iterations; ++it) {
      std::mt19937_64 rng =
          split_rng(cfg.seed, static_cast<std::uint64_t>(round) * cfg.iterations + it);
      // Draw a minimal sample: oriented slots from oriented, plain from all.
      std::vector<int> sample;
      auto draw = [&](const std::vector<int>& pool) {
        for (int tries = 0; tries < 64; ++tries) {
          const int idx = pool[rng() % pool.size()];
          if (used[idx] || std::count(sample.begin(), sample.end(), idx)) continue;
          sample.push_back(idx);
          return true;
        }
        return false;
      };
      bool ok = true;
      for (int i = 0; i < pat.oriented && ok; ++i) ok = draw(oriented_idx);
      for (int i = pat.oriented; i < pat.total && ok; ++i) ok = draw(all_idx);
      if (!ok) continue;
      std::vector<OrientedPoint> recs;
      for (int i = 0; i < pat.total; ++i) {
        OrientedPoint op(records[sample[i]].p);
        if (i < pat.oriented) op.n = records[sample[i]].n;
        recs.push_back(op);
      }
      try {
        const FitOutcome out = run_fit(cfg.kind, recs);
        std::visit(
            [&](const auto& ss) {
              for (const auto& prim : ss.primitives) {
                const auto in = inliers_of(prim);
                if (!best || static_cast<int>(in.size()) > best->inliers) {
                  best = RansacHit{prim, static_cast<int>(in.size())};
                  best_inliers = in;
                }
              }
            },
            out.solutions);
      } catch (const MinfitError&) {
      }
    }
    if (!best || best->inliers < cfg.min_inliers) break;
    hits.push_back(*best);
    for (int i : best_inliers) used[i] = true;
  }
  return hits;
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

Cylinder random_cylinder(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cube(0.0, 1.0);
  std::uniform_real_distribution<double> rad(0.1, 1.5);
  return Cylinder(Vec3(cube(rng), cube(rng), cube(rng)), random_unit_vector(rng), rad(rng));
}

Cone random_cone(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cube(0.0, 1.0);
  std::uniform_real_distribution<double> ang(0.1, M_PI / 2.0 - 0.1);
  return Cone(Vec3(cube(rng), cube(rng), cube(rng)), random_unit_vector(rng), ang(rng));
}

Vec3 sample_on(const Cylinder& c, std::mt19937_64& rng, Vec3* normal) {
  std::uniform_real_distribution<double> t(-1.5, 1.5);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * M_PI);
  Vec3 u, v;
  Vec3 aux = std::abs(c.axis_dir.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  u = (aux - aux.dot(c.axis_dir) * c.axis_dir).normalized();
  v = c.axis_dir.cross(u);
  const double a = phi(rng);
  const Vec3 radial = std::cos(a) * u + std::sin(a) * v;
  if (normal) *normal = radial;
  return c.axis_point + t(rng) * c.axis_dir + c.radius * radial;
}

Vec3 sample_on(const Cone& c, std::mt19937_64& rng, Vec3* normal) {
  std::uniform_real_distribution<double> t(0.2, 1.8);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * M_PI);
  std::bernoulli_distribution nappe(0.5);
  Vec3 u, v;
  Vec3 aux = std::abs(c.axis_dir.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  u = (aux - aux.dot(c.axis_dir) * c.axis_dir).normalized();
  v = c.axis_dir.cross(u);
  const double a = phi(rng);
  const Vec3 radial = std::cos(a) * u + std::sin(a) * v;
  const Vec3 axis = nappe(rng) ? c.axis_dir : Vec3(-c.axis_dir);
  const Vec3 gen = std::cos(c.half_angle) * axis + std::sin(c.half_angle) * radial;
  if (normal) *normal = std::cos(c.half_angle) * radial - std::sin(c.half_angle) * axis;
  return c.apex + t(rng) * gen;
}

}  // namespace minfit
