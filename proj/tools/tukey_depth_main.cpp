// Command line front end: depth queries over CSV data, deterministic
// synthetic data generation, and a benchmark harness with per-cell time
// budgets.
//
// Exit codes: 0 ok, 2 parse/usage, 3 degeneracy, 4 all bench cells skipped.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tukey/data.hpp"
#include "tukey/depth.hpp"

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegeneracy = 3;
constexpr int kExitAllSkipped = 4;

struct QueryRecord {
  std::int64_t query = 0;
  std::string algorithm;
  std::int32_t numerator = 0;
  std::int32_t n = 0;
  std::vector<double> witness_direction;  // empty when the algorithm has none
  std::int64_t elapsed_ns = 0;
};

json to_json(const QueryRecord& r) {
  json j{{"query", r.query},
         {"algorithm", r.algorithm},
         {"numerator", r.numerator},
         {"n", r.n},
         {"depth", static_cast<double>(r.numerator) / r.n},
         {"depth_fraction", std::to_string(r.numerator) + "/" + std::to_string(r.n)},
         {"elapsed_ns", r.elapsed_ns}};
  if (r.witness_direction.empty()) {
    j["witness_direction"] = nullptr;
  } else {
    j["witness_direction"] = r.witness_direction;
  }
  return j;
}

void write_records(const std::vector<QueryRecord>& records, const std::string& out_path) {
  if (out_path.empty() || out_path.ends_with(".json")) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    if (out_path.empty()) {
      std::cout << arr.dump(2) << "\n";
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw tukey::input_error("cannot open " + out_path + " for writing");
      out << arr.dump(2) << "\n";
    }
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw tukey::input_error("cannot open " + out_path + " for writing");
  out << "query,algorithm,numerator,n,depth,depth_fraction,witness_direction,elapsed_ns\n";
  for (const auto& r : records) {
    out << r.query << ',' << r.algorithm << ',' << r.numerator << ',' << r.n << ','
        << tukey::format_double(static_cast<double>(r.numerator) / r.n) << ',' << r.numerator
        << '/' << r.n << ',';
    for (std::size_t j = 0; j < r.witness_direction.size(); ++j) {
      if (j) out << ';';
      out << tukey::format_double(r.witness_direction[j]);
    }
    out << ',' << r.elapsed_ns << '\n';
  }
}

struct DepthArgs {
  std::string algorithm;
  std::string data_path;
  std::string queries_path;
  std::string out_path;
  double tolerance = 1e-9;
  int threads = 1;
  std::int32_t trials = 1000;
  std::uint64_t seed = 1;
  bool force_oracle = false;
};

QueryRecord run_query(const DepthArgs& args, const tukey::Table& data,
                      std::span<const double> z, std::int64_t query_index) {
  const tukey::Tolerance tol(args.tolerance);
  QueryRecord rec;
  rec.query = query_index;
  rec.algorithm = args.algorithm;

  std::optional<tukey::PointCloud> cloud;
  try {
    cloud.emplace(tukey::center_at(data.values, z, tol));
  } catch (const tukey::degenerate_input_error&) {
    // Every observation coincides with the query point: depth is n/n.
    rec.numerator = data.rows;
    rec.n = data.rows;
    return rec;
  }

  const auto t0 = Clock::now();
  if (args.algorithm == "rcom") {
    tukey::DepthResult r = tukey::depth_rcom(*cloud, tol, args.threads);
    rec.numerator = r.numerator;
    rec.n = r.n;
    rec.witness_direction = r.witness_direction;
  } else if (args.algorithm == "adia") {
    tukey::DepthResult r = tukey::depth_adia(*cloud, tol);
    rec.numerator = r.numerator;
    rec.n = r.n;
    rec.witness_direction = r.witness_direction;
  } else if (args.algorithm == "oracle") {
    tukey::DepthResult r = tukey::depth_critical(*cloud, tol, args.force_oracle);
    rec.numerator = r.numerator;
    rec.n = r.n;
    rec.witness_direction = r.witness_direction;
  } else if (args.algorithm == "bivariate") {
    std::vector<double> y;
    y.reserve(2 * static_cast<std::size_t>(cloud->rows()));
    for (std::int32_t i = 0; i < cloud->rows(); ++i) {
      y.push_back(cloud->row(i)[0]);
      y.push_back(cloud->row(i)[1]);
    }
    tukey::BivariateDepth r = tukey::depth2_origin(y, tol);
    rec.numerator = r.numerator + cloud->zero_count();
    rec.n = cloud->total_points();
    rec.witness_direction = {r.witness_direction[0], r.witness_direction[1]};
  } else {  // random-upper
    rec.numerator = tukey::depth_random_upper(*cloud, args.trials, args.seed, tol);
    rec.n = cloud->total_points();
  }
  rec.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count();
  return rec;
}

int cmd_depth(const DepthArgs& args) {
  const tukey::Table data = tukey::read_csv(args.data_path);
  const tukey::Table queries = tukey::read_csv(args.queries_path);
  if (queries.cols != data.cols) {
    throw tukey::input_error("dimension mismatch: data has " + std::to_string(data.cols) +
                             " columns, queries have " + std::to_string(queries.cols));
  }
  if (args.algorithm == "bivariate" && data.cols != 2) {
    throw tukey::input_error("algorithm=bivariate requires 2-dimensional data");
  }
  std::vector<QueryRecord> records;
  records.reserve(queries.rows);
  for (std::int32_t q = 0; q < queries.rows; ++q) {
    records.push_back(run_query(args, data, queries.row(q), q));
  }
  write_records(records, args.out_path);
  return kExitOk;
}

struct GenArgs {
  std::vector<int> dims;
  std::vector<int> sizes;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int cmd_gen(const GenArgs& args) {
  std::filesystem::create_directories(args.out_dir);
  for (int p : args.dims) {
    for (int n : args.sizes) {
      const tukey::Table t = tukey::gen_normal(n, p, tukey::cell_seed(args.seed, p, n));
      const std::string path =
          args.out_dir + "/normal_p" + std::to_string(p) + "_n" + std::to_string(n) + ".csv";
      tukey::write_csv(path, t);
      std::cout << path << "\n";
    }
  }
  return kExitOk;
}

struct BenchArgs {
  std::vector<int> dims{3, 4};
  std::vector<int> sizes{40, 80, 160};
  std::vector<double> alphas{0.0, 0.4, 0.8, 1.2};
  std::vector<std::string> algorithms{"rcom", "adia"};
  int reps = 3;
  double budget_seconds = 5.0;
  std::uint64_t seed = 1;
  int threads = 1;
  double tolerance = 1e-9;
  std::string out_path;
};

struct BenchCell {
  int p = 0, n = 0;
  double alpha = 0.0;
  std::string algorithm;
  std::string status;  // ok | skipped
  std::int32_t numerator = 0;
  std::int32_t total = 0;
  int reps = 0;
  std::int64_t min_ns = 0, max_ns = 0;
  double mean_ns = 0.0;
};

int cmd_bench(const BenchArgs& args) {
  if (args.reps < 1) throw tukey::input_error("repetitions must be at least 1");
  for (std::size_t i = 1; i < args.sizes.size(); ++i) {
    if (args.sizes[i] <= args.sizes[i - 1]) {
      throw tukey::input_error("sizes must be strictly increasing");
    }
  }
  for (const std::string& a : args.algorithms) {
    if (a != "rcom" && a != "adia" && a != "oracle" && a != "bivariate" && a != "random-upper") {
      throw tukey::input_error("unknown algorithm " + a);
    }
  }
  std::vector<BenchCell> cells;
  bool any_ok = false;
  bool verify_failed = false;

  for (int p : args.dims) {
    for (int n : args.sizes) {
      const tukey::Table data = tukey::gen_normal(n, p, tukey::cell_seed(args.seed, p, n));
      for (double alpha : args.alphas) {
        const std::vector<double> z(static_cast<std::size_t>(p), alpha);
        std::optional<std::int32_t> exact_numerator;
        for (const std::string& algorithm : args.algorithms) {
          BenchCell cell;
          cell.p = p;
          cell.n = n;
          cell.alpha = alpha;
          cell.algorithm = algorithm;
          cell.reps = args.reps;

          const bool applicable =
              (algorithm == "bivariate" && p == 2) ||
              ((algorithm == "rcom" || algorithm == "adia") && p >= 3) ||
              ((algorithm == "oracle" || algorithm == "random-upper") && p >= 2);
          const bool oracle_too_big =
              algorithm == "oracle" && !tukey::oracle_within_guard(n, p);

          // Once an algorithm blew the budget at some n, larger n for the
          // same (p, alpha) can only be slower.
          const bool predecessor_skipped = std::any_of(
              cells.begin(), cells.end(), [&](const BenchCell& c) {
                return c.status == "skipped" && c.algorithm == algorithm && c.p == p &&
                       c.alpha == alpha && c.n < n;
              });

          if (!applicable || oracle_too_big || predecessor_skipped) {
            cell.status = "skipped";
            cells.push_back(cell);
            continue;
          }

          DepthArgs da;
          da.algorithm = algorithm;
          da.tolerance = args.tolerance;
          da.threads = args.threads;
          da.seed = args.seed;
          std::vector<std::int64_t> times;
          bool over_budget = false;
          std::int32_t numerator = 0;
          std::int32_t total = 0;
          for (int r = 0; r < args.reps; ++r) {
            QueryRecord rec = run_query(da, data, z, 0);
            numerator = rec.numerator;
            total = rec.n;
            times.push_back(rec.elapsed_ns);
            if (static_cast<double>(rec.elapsed_ns) > args.budget_seconds * 1e9) {
              over_budget = true;
              break;
            }
          }
          if (over_budget) {
            cell.status = "skipped";
            cells.push_back(cell);
            continue;
          }

          cell.status = "ok";
          cell.numerator = numerator;
          cell.total = total;
          cell.min_ns = *std::min_element(times.begin(), times.end());
          cell.max_ns = *std::max_element(times.begin(), times.end());
          double sum = 0.0;
          for (auto t : times) sum += static_cast<double>(t);
          cell.mean_ns = sum / static_cast<double>(times.size());
          cells.push_back(cell);
          any_ok = true;

          if (algorithm == "random-upper") {
            if (exact_numerator && numerator < *exact_numerator) {
              std::cerr << "verification failure: random-upper undercut the exact depth\n";
              verify_failed = true;
            }
          } else {
            if (exact_numerator && *exact_numerator != numerator) {
              std::cerr << "verification failure: p=" << p << " n=" << n << " alpha=" << alpha
                        << " " << algorithm << " returned " << numerator << ", expected "
                        << *exact_numerator << "\n";
              verify_failed = true;
            }
            exact_numerator = numerator;
          }
        }
      }
    }
  }

  std::ostringstream out;
  out << "p,n,alpha,algorithm,status,numerator,total,reps,min_ns,mean_ns,max_ns\n";
  for (const BenchCell& c : cells) {
    out << c.p << ',' << c.n << ',' << tukey::format_double(c.alpha) << ',' << c.algorithm << ','
        << c.status << ',';
    if (c.status == "ok") {
      out << c.numerator << ',' << c.total << ',' << c.reps << ',' << c.min_ns << ','
          << tukey::format_double(c.mean_ns) << ',' << c.max_ns;
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
  if (args.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(args.out_path, std::ios::binary);
    if (!f) throw tukey::input_error("cannot open " + args.out_path + " for writing");
    f << out.str();
  }
  if (verify_failed) return 1;
  return any_ok ? kExitOk : kExitAllSkipped;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Tukey depth computation"};
  app.require_subcommand(1);

  DepthArgs depth_args;
  CLI::App* depth = app.add_subcommand("depth", "Compute depths of query points");
  depth->add_option("--algorithm", depth_args.algorithm, "rcom|adia|oracle|bivariate|random-upper")
      ->required()
      ->check(CLI::IsMember({"rcom", "adia", "oracle", "bivariate", "random-upper"}));
  depth->add_option("--data", depth_args.data_path, "CSV with n rows of p coordinates")->required();
  depth->add_option("--queries", depth_args.queries_path, "CSV with one query point per row")
      ->required();
  depth->add_option("--tolerance", depth_args.tolerance, "sign classification tolerance");
  depth->add_option("--threads", depth_args.threads, "worker threads (rcom)");
  depth->add_option("--out", depth_args.out_path, "output file (.json or .csv); stdout if absent");
  depth->add_option("--trials", depth_args.trials, "directions sampled by random-upper");
  depth->add_option("--seed", depth_args.seed, "seed for random-upper");
  depth->add_flag("--force-oracle", depth_args.force_oracle, "override the oracle cost guard");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate standard-normal datasets");
  gen->add_option("--dims", gen_args.dims, "dimensions")->required()->delimiter(',');
  gen->add_option("--sizes", gen_args.sizes, "sample sizes")->required()->delimiter(',');
  gen->add_option("--seed", gen_args.seed, "base seed");
  gen->add_option("--out", gen_args.out_dir, "output directory")->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Timing grid over synthetic data");
  bench->add_option("--dims", bench_args.dims, "dimensions")->delimiter(',');
  bench->add_option("--sizes", bench_args.sizes, "sample sizes, strictly increasing")
      ->delimiter(',');
  bench->add_option("--alphas", bench_args.alphas, "query offsets along the all-ones direction")
      ->delimiter(',');
  bench->add_option("--algorithms", bench_args.algorithms, "algorithms to time")->delimiter(',');
  bench->add_option("--reps", bench_args.reps, "repetitions per cell");
  bench->add_option("--budget", bench_args.budget_seconds, "per-run budget in seconds");
  bench->add_option("--seed", bench_args.seed, "base seed");
  bench->add_option("--threads", bench_args.threads, "worker threads (rcom)");
  bench->add_option("--tolerance", bench_args.tolerance, "sign classification tolerance");
  bench->add_option("--out", bench_args.out_path, "output CSV; stdout if absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (depth->parsed()) return cmd_depth(depth_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    return cmd_bench(bench_args);
  } catch (const tukey::general_position_error& e) {
    std::cerr << "general position violation: " << e.what() << "\n";
    return kExitDegeneracy;
  } catch (const tukey::degenerate_input_error& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kExitDegeneracy;
  } catch (const tukey::oracle_guard_error& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  } catch (const tukey::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
