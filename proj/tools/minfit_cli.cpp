#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "minfit/harness.hpp"
#include "minfit/io.hpp"

namespace {

using namespace minfit;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MINFIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return 0;
}

FitKind parse_kind(const std::string& s) {
  if (auto k = fit_kind_from_string(s)) return *k;
  throw MinfitError(ErrorCode::UsageError,
                    "unknown kind '" + s +
                        "' (expected cylinder-1n2p|cylinder-5p|cone-2n|cone-1n3p|cone-6p)");
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw MinfitError(ErrorCode::UsageError, "cannot write '" + out_path + "'");
  os << text << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cylinder and cone interpolation from minimal point sets"};
  app.require_subcommand(1);

  std::string kind_str, input_path, out_path, format = "json";
  std::uint64_t seed = default_seed();
  int trials = 1000;
  double tol_pos = 1e-3, tol_normal = 1e-2;
  int ransac_iters = 200, min_inliers = 10;

  auto* fit = app.add_subcommand("fit", "Fit all primitives through a minimal point file");
  fit->add_option("--kind", kind_str, "solver kind")->required();
  fit->add_option("--input", input_path, "point file (CSV or JSON)")->required();
  fit->add_option("--out", out_path, "output path (default stdout)");

  auto* stats = app.add_subcommand("stats", "Solution-count histogram over random trials");
  stats->add_option("--kind", kind_str, "solver kind")->required();
  stats->add_option("--trials", trials, "number of trials");
  stats->add_option("--seed", seed, "master seed");
  stats->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  stats->add_option("--out", out_path, "output path (default stdout)");

  auto* bench = app.add_subcommand("bench", "Per-call timing over random trials");
  bench->add_option("--kind", kind_str, "solver kind")->required();
  bench->add_option("--trials", trials, "number of trials")->check(CLI::Range(10, 1000000));
  bench->add_option("--seed", seed, "master seed");

  auto* ransac = app.add_subcommand("ransac", "Greedy minimal-sample extraction demo");
  ransac->add_option("--kind", kind_str, "solver kind")->required();
  ransac->add_option("--input", input_path, "point cloud file")->required();
  ransac->add_option("--seed", seed, "master seed");
  ransac->add_option("--iterations", ransac_iters, "samples per extraction round");
  ransac->add_option("--tol-pos", tol_pos, "inlier position tolerance");
  ransac->add_option("--tol-normal", tol_normal, "inlier normal tolerance (radians)");
  ransac->add_option("--min-inliers", min_inliers, "minimum inliers to accept a primitive");
  ransac->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*fit) {
      const FitKind kind = parse_kind(kind_str);
      const auto records = parse_points_file(input_path);
      const FitOutcome out = run_fit(kind, records);
      write_out(solutions_to_json(to_string(kind), out.solutions, records, out.wall_ms),
                out_path);
    } else if (*stats) {
      const FitKind kind = parse_kind(kind_str);
      if (trials < 1) throw MinfitError(ErrorCode::UsageError, "trials must be >= 1");
      const TrialStats st = run_stats(kind, trials, seed);
      if (format == "csv") {
        write_out(stats_csv(st), out_path);
      } else {
        std::ostringstream os;
        os << "{\n  \"schema\": \"minfit/1\",\n  \"kind\": \"" << to_string(kind)
           << "\",\n  \"trials\": " << st.trials << ",\n  \"seed\": " << st.seed
           << ",\n  \"mean_time_ms\": " << st.mean_time_ms << ",\n  \"degenerate\": "
           << st.degenerate << ",\n  \"histogram\": {";
        bool first = true;
        for (const auto& [count, freq] : st.histogram) {
          os << (first ? "" : ", ") << "\"" << count << "\": " << freq;
          first = false;
        }
        os << "}\n}";
        write_out(os.str(), out_path);
      }
    } else if (*bench) {
      const FitKind kind = parse_kind(kind_str);
      const BenchReport rep = run_bench(kind, trials, seed);
      std::ostringstream os;
      os << "{\n  \"schema\": \"minfit/1\",\n  \"kind\": \"" << to_string(kind)
         << "\",\n  \"trials\": " << rep.trials << ",\n  \"mean_ms\": " << rep.mean_ms
         << ",\n  \"p50_ms\": " << rep.p50_ms << ",\n  \"p90_ms\": " << rep.p90_ms << "\n}";
      write_out(os.str(), out_path);
    } else if (*ransac) {
      RansacConfig cfg;
      cfg.kind = parse_kind(kind_str);
      cfg.iterations = ransac_iters;
      cfg.pos_tol = tol_pos;
      cfg.normal_tol = tol_normal;
      cfg.min_inliers = min_inliers;
      cfg.seed = seed;
      const auto records = parse_points_file(input_path);
      const auto hits = run_ransac(records, cfg);
      std::ostringstream os;
      os << "{\n  \"schema\": \"minfit/1\",\n  \"kind\": \"" << to_string(cfg.kind)
         << "\",\n  \"hits\": [";
      for (size_t i = 0; i < hits.size(); ++i) {
        os << (i ? ",\n    " : "\n    ");
        std::visit(
            [&](const auto& prim) {
              if constexpr (std::is_same_v<std::decay_t<decltype(prim)>, Cylinder>) {
                os << "{\"type\": \"cylinder\", \"axis_point\": [" << prim.axis_point.x()
                   << ", " << prim.axis_point.y() << ", " << prim.axis_point.z()
                   << "], \"axis_dir\": [" << prim.axis_dir.x() << ", " << prim.axis_dir.y()
                   << ", " << prim.axis_dir.z() << "], \"radius\": " << prim.radius;
              } else {
                os << "{\"type\": \"cone\", \"apex\": [" << prim.apex.x() << ", "
                   << prim.apex.y() << ", " << prim.apex.z() << "], \"axis_dir\": ["
                   << prim.axis_dir.x() << ", " << prim.axis_dir.y() << ", "
                   << prim.axis_dir.z() << "], \"half_angle\": " << prim.half_angle;
              }
              os << ", \"inliers\": " << hits[i].inliers << "}";
            },
            hits[i].primitive);
      }
      os << (hits.empty() ? "]" : "\n  ]") << "\n}";
      write_out(os.str(), out_path);
    }
  } catch (const MinfitError& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::UsageError: return 2;
      case ErrorCode::ParseError: return 3;
      default: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
