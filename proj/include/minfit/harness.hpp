/**
 * @file harness.hpp
 * @brief Solver dispatch, randomized trial statistics, benchmarking and a
 *        greedy RANSAC demo over mixed point records.
 */
#ifndef MINFIT_HARNESS_HPP
#define MINFIT_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "minfit/geom.hpp"
#include "minfit/io.hpp"

namespace minfit {

enum class FitKind { Cyl1N2P, Cyl5P, Cone2N, Cone1N3P, Cone6P };

std::string to_string(FitKind k);
std::optional<FitKind> fit_kind_from_string(const std::string& s);

/// Number of records and how many of the leading records must carry normals.
struct InputPattern {
  int total;
  int oriented;  // leading records that need a normal; the rest must be plain
};
InputPattern input_pattern(FitKind k);

struct FitOutcome {
  AnySolutions solutions;
  double wall_ms = 0.0;
};

/// Validates the record pattern and dispatches to the solver.
/// Throws UsageError on arity or normal-pattern mismatch.
FitOutcome run_fit(FitKind kind, std::span<const OrientedPoint> records);

struct TrialStats {
  FitKind kind;
  int trials = 0;
  std::uint64_t seed = 0;
  std::map<int, int> histogram;  // solution count -> frequency
  int degenerate = 0;            // InfiniteFamily trials, tallied separately
  double mean_time_ms = 0.0;
};

/// Runs seeded random trials (positions uniform in the unit cube, normals
/// uniform on the sphere; the per-trial generator is split from the master
/// seed by trial index) and tallies solution counts.
TrialStats run_stats(FitKind kind, int trials, std::uint64_t seed);

/// CSV rows "count,frequency,proportion_percent" (degenerate bucket last).
std::string stats_csv(const TrialStats& s);

struct BenchReport {
  FitKind kind;
  int trials = 0;
  double mean_ms = 0.0, p50_ms = 0.0, p90_ms = 0.0;
};
BenchReport run_bench(FitKind kind, int trials, std::uint64_t seed);

struct RansacConfig {
  FitKind kind = FitKind::Cyl5P;
  int iterations = 200;
  double pos_tol = 1e-3;
  double normal_tol = 1e-2;  // radians
  int min_inliers = 10;
  std::uint64_t seed = 0;
};

struct RansacHit {
  std::variant<Cylinder, Cone> primitive;
  int inliers = 0;
};

/// Greedy extraction: repeatedly fits minimal samples, keeps the primitive
/// with most inliers, removes its inliers, and repeats while the best model
/// reaches min_inliers. Deterministic under the seed.
std::vector<RansacHit> run_ransac(std::span<const OrientedPoint> records,
                                  const RansacConfig& cfg);

/// Random primitive generators shared by tests and the demo tooling.
Cylinder random_cylinder(std::mt19937_64& rng);
Cone random_cone(std::mt19937_64& rng);
Vec3 random_unit_vector(std::mt19937_64& rng);
/// Point on the surface; when `normal` is non-null it receives the surface
/// normal direction there.
Vec3 sample_on(const Cylinder& c, std::mt19937_64& rng, Vec3* normal = nullptr);
Vec3 sample_on(const Cone& c, std::mt19937_64& rng, Vec3* normal = nullptr);

/// The per-trial generator split used by run_stats/run_bench/run_ransac.
std::mt19937_64 split_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace minfit

#endif  // MINFIT_HARNESS_HPP
