// Command-line front end: bandwidth inspection, ridge estimation, coverage
// evaluation, and synthetic scene generation. Data goes to files or stdout;
// progress and diagnostics go to stderr.

#include <ctime>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ridgeline/ridgeline.hpp"

namespace {

using namespace ridgeline;

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void print_report(const char* stage, const FilterReport& r) {
  std::cerr << stage << ": read=" << r.rows_read
            << " dropped_missing=" << r.rows_dropped_missing;
  if (r.rows_dropped_year > 0) std::cerr << " dropped_year=" << r.rows_dropped_year;
  if (r.rows_dropped_unmapped > 0)
    std::cerr << " dropped_unmapped=" << r.rows_dropped_unmapped;
  std::cerr << " kept=" << r.rows_after_type_filter << '\n';
  for (const auto& [label, count] : r.per_type_counts)
    std::cerr << "  " << label << ": " << count << '\n';
  for (const auto& [label, count] : r.dropped_type_counts)
    std::cerr << "  dropped " << label << ": " << count << '\n';
}

struct IngestFlags {
  CsvSchema schema;
  bool part1 = true;
  std::string mapping_file;
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& f) {
  cmd->add_option("--type-column", f.schema.type_column, "Crime type column name");
  cmd->add_option("--lat-column", f.schema.lat_column, "Latitude column name");
  cmd->add_option("--lon-column", f.schema.lon_column, "Longitude column name");
  cmd->add_option("--date-column", f.schema.date_column, "Date column name");
  cmd->add_option("--year", [&f](const CLI::results_t& res) {
        f.schema.year = std::stoi(res[0]);
        return true;
      },
      "Keep only rows from this year (needs the date column)");
  cmd->add_flag("!--no-part1-filter", f.part1,
                "Skip the Part I crime-type filter");
  cmd->add_option("--mapping", f.mapping_file,
                  "Crime-type mapping file (default: built-in)");
}

std::vector<IncidentRecord> load_records(const std::string& path,
                                         const IngestFlags& flags) {
  auto [records, report] = load_csv(path, flags.schema);
  print_report("load", report);
  if (flags.part1) {
    const TypeMapping mapping = flags.mapping_file.empty()
                                    ? default_part1_mapping()
                                    : load_mapping(flags.mapping_file);
    auto [kept, freport] = filter_part1(records, mapping);
    print_report("part1", freport);
    return kept;
  }
  return records;
}

GeoPointSet sample_or_all(const std::vector<IncidentRecord>& records,
                          std::size_t sample, std::uint64_t seed) {
  if (sample == 0 || sample >= records.size()) {
    GeoPointSet pts;
    pts.reserve(records.size());
    for (const auto& r : records) pts.push_back(r.location);
    return pts;
  }
  return subsample(records, sample, seed);
}

int cmd_bandwidth(const std::string& input, const IngestFlags& flags,
                  int neighbors, std::size_t sample, std::uint64_t seed) {
  const auto records = load_records(input, flags);
  if (records.size() < 2) throw DegenerateDataError("need at least 2 records");
  const GeoPointSet pts = sample_or_all(records, sample, seed);
  const Bandwidth bw = knn_bandwidth(pts, neighbors);
  std::cout << "unit,value\n"
            << "radians," << format_double(bw.radians()) << '\n'
            << "degrees," << format_double(bw.degrees()) << '\n'
            << "miles," << format_double(bw.miles()) << '\n';
  return 0;
}

int run_estimate(const RunManifest& manifest, const std::string& manifest_out) {
  IngestFlags flags;
  flags.schema = manifest.schema;
  flags.part1 = manifest.part1_filter;
  flags.mapping_file = manifest.mapping_file;
  const auto records = load_records(manifest.input_csv, flags);
  if (records.size() < 2) throw DegenerateDataError("need at least 2 records");
  const GeoPointSet pts =
      sample_or_all(records, manifest.sample, manifest.sample_seed);
  std::cerr << "estimating ridges on " << pts.size() << " points\n";

  const ScmsResult result = run_scms(pts, manifest.config);
  std::cerr << "bandwidth: " << result.bandwidth_used.degrees()
            << " deg; threshold: " << result.threshold_used
            << "; mesh discarded: " << result.discarded_mesh_count
            << " (stranded " << result.stranded_count << ")\n"
            << "iterations: " << result.iterations_run
            << "; ridge points: " << result.ridges.points.size();
  if (manifest.config.percentage)
    std::cerr << " (of " << result.pre_cut_size << " before the percentage cut)";
  std::cerr << '\n';
  if (result.percentage_empty_warning)
    std::cerr << "warning: percentage 0 selects no ridge points\n";

  if (!manifest.out_csv.empty()) write_ridges_csv(manifest.out_csv, result.ridges);
  if (!manifest.out_geojson.empty())
    write_ridges_geojson(manifest.out_geojson, result.ridges);
  if (!manifest_out.empty()) save_manifest(manifest_out, manifest);
  return 0;
}

std::vector<double> make_radii(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw ParameterError("invalid radius sweep: need max >= min and step > 0");
  std::vector<double> radii;
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) radii.push_back(lo + i * step);
  return radii;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geospatial density ridge estimation and patrol-template "
               "evaluation"};
  app.require_subcommand(1);

  // bandwidth
  auto* bw = app.add_subcommand("bandwidth",
                                "Print the k-NN bandwidth of a dataset");
  std::string bw_input;
  IngestFlags bw_flags;
  int bw_neighbors = 10;
  std::size_t bw_sample = 0;
  std::uint64_t bw_seed = 1;
  bw->add_option("input", bw_input, "Incident CSV file")->required();
  add_ingest_flags(bw, bw_flags);
  bw->add_option("--neighbors", bw_neighbors, "Nearest neighbors for the bandwidth");
  bw->add_option("--sample", bw_sample, "Uniform subsample size (0 = all)");
  bw->add_option("--seed", bw_seed, "Subsample seed");

  // estimate
  auto* est = app.add_subcommand("estimate", "Extract density ridges to files");
  std::string est_input, est_from_manifest, est_manifest_out;
  std::vector<std::string> est_outs;
  IngestFlags est_flags;
  RunManifest est_m;
  double est_bandwidth_deg = 0.0;
  bool est_have_threads = false;
  est->add_option("input", est_input, "Incident CSV file");
  add_ingest_flags(est, est_flags);
  est->add_option("--neighbors", est_m.config.neighbors,
                  "Nearest neighbors for the automatic bandwidth");
  est->add_option("--bandwidth", est_bandwidth_deg,
                  "Fixed bandwidth in degrees (overrides --neighbors)");
  est->add_option("--convergence", est_m.config.convergence_degrees,
                  "Per-point convergence threshold in degrees");
  est->add_option("--percentage",
                  [&est_m](const CLI::results_t& res) {
                    est_m.config.percentage = std::stod(res[0]);
                    return true;
                  },
                  "Keep only the top p% highest-density ridge points");
  est->add_option("--sample", est_m.sample, "Uniform subsample size (0 = all)");
  est->add_option("--seed", est_m.config.seed, "Seed for subsample and mesh");
  est->add_option("--mesh-size",
                  [&est_m](const CLI::results_t& res) {
                    est_m.config.mesh_size = std::stoull(res[0]);
                    return true;
                  },
                  "Mesh point count (default: dataset size)");
  est->add_option("--threshold-quantile", est_m.config.threshold_quantile,
                  "Mesh density quantile removed before iterating");
  est->add_option("--max-iter", est_m.config.max_iterations,
                  "Iteration cap per mesh point");
  auto* est_threads_opt =
      est->add_option("--threads", est_m.config.threads, "Worker threads");
  est->add_option("--out", est_outs,
                  "Output file; .geojson/.json selects GeoJSON, else CSV "
                  "(repeatable; default ridges.csv)");
  est->add_option("--manifest", est_manifest_out, "Write the resolved run manifest");
  est->add_option("--from-manifest", est_from_manifest,
                  "Reproduce a run from a saved manifest");

  // evaluate
  auto* ev = app.add_subcommand(
      "evaluate", "Coverage of test incidents by train-data ridges");
  std::string ev_train, ev_test, ev_coverage_out = "coverage.csv",
                                 ev_iterations_out = "iterations.csv";
  IngestFlags ev_flags;
  ScmsConfig ev_cfg;
  int ev_runs = 10;
  double ev_rmin = 0.1, ev_rmax = 1.0, ev_rstep = 0.01;
  std::size_t ev_sample = 5000;
  std::uint64_t ev_seed = 1;
  std::string ev_band = "t";
  double ev_bandwidth_deg = 0.0;
  ev->add_option("train", ev_train, "Training incident CSV")->required();
  ev->add_option("test", ev_test, "Held-out incident CSV")->required();
  add_ingest_flags(ev, ev_flags);
  ev->add_option("--runs", ev_runs, "Number of training subsample runs");
  ev->add_option("--radii-min", ev_rmin, "Smallest envelope radius, miles");
  ev->add_option("--radii-max", ev_rmax, "Largest envelope radius, miles");
  ev->add_option("--radii-step", ev_rstep, "Radius step, miles");
  ev->add_option("--sample", ev_sample,
                 "Per-run training subsample size, also the test sample (0 = all)");
  ev->add_option("--seed", ev_seed, "Base seed; run r uses seed + 1 + r");
  ev->add_option("--neighbors", ev_cfg.neighbors,
                 "Nearest neighbors for the automatic bandwidth");
  ev->add_option("--bandwidth", ev_bandwidth_deg,
                 "Fixed bandwidth in degrees (overrides --neighbors)");
  ev->add_option("--convergence", ev_cfg.convergence_degrees,
                 "Per-point convergence threshold in degrees");
  ev->add_option("--percentage",
                 [&ev_cfg](const CLI::results_t& res) {
                   ev_cfg.percentage = std::stod(res[0]);
                   return true;
                 },
                 "Keep only the top p% highest-density ridge points");
  ev->add_option("--mesh-size",
                 [&ev_cfg](const CLI::results_t& res) {
                   ev_cfg.mesh_size = std::stoull(res[0]);
                   return true;
                 },
                 "Mesh point count (default: training sample size)");
  ev->add_option("--threshold-quantile", ev_cfg.threshold_quantile,
                 "Mesh density quantile removed before iterating");
  ev->add_option("--max-iter", ev_cfg.max_iterations, "Iteration cap per mesh point");
  ev->add_option("--threads", ev_cfg.threads, "Worker threads");
  ev->add_option("--band", ev_band, "Confidence band method: t or percentile");
  ev->add_option("--coverage-out", ev_coverage_out, "Coverage table output path");
  ev->add_option("--iterations-out", ev_iterations_out,
                 "Per-run iteration counts output path");

  // synth
  auto* sy = app.add_subcommand("synth", "Generate a synthetic filament scene");
  FilamentSpec sy_spec;
  std::string sy_kind = "line-segment", sy_out = "points.csv";
  sy->add_option("--kind", sy_kind, "line-segment | circle-arc | gaussian-cloud | cross");
  sy->add_option("--lat0", sy_spec.lat0, "Segment start latitude, radians");
  sy->add_option("--lon0", sy_spec.lon0, "Segment start longitude, radians");
  sy->add_option("--lat1", sy_spec.lat1, "Segment end latitude, radians");
  sy->add_option("--lon1", sy_spec.lon1, "Segment end longitude, radians");
  sy->add_option("--center-lat", sy_spec.center_lat, "Center latitude, radians");
  sy->add_option("--center-lon", sy_spec.center_lon, "Center longitude, radians");
  sy->add_option("--radius", sy_spec.radius, "Circle radius, radians");
  sy->add_option("--arc-start", sy_spec.arc_start, "Arc start angle, radians");
  sy->add_option("--arc-end", sy_spec.arc_end, "Arc end angle, radians");
  sy->add_option("--half-length", sy_spec.half_length, "Cross arm half length, radians");
  sy->add_option("--noise", sy_spec.noise_sigma, "Gaussian noise sigma, radians");
  sy->add_option("--n", sy_spec.n, "Number of points");
  sy->add_option("--seed", sy_spec.seed, "Generator seed");
  sy->add_option("--out", sy_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bw->parsed())
      return cmd_bandwidth(bw_input, bw_flags, bw_neighbors, bw_sample, bw_seed);

    if (est->parsed()) {
      est_have_threads = est_threads_opt->count() > 0;
      RunManifest manifest;
      if (!est_from_manifest.empty()) {
        const int threads_override = est_m.config.threads;
        manifest = load_manifest(est_from_manifest);
        if (est_have_threads) manifest.config.threads = threads_override;
      } else {
        if (est_input.empty())
          throw ParameterError("estimate needs an input CSV or --from-manifest");
        manifest = est_m;
        manifest.input_csv = est_input;
        manifest.schema = est_flags.schema;
        manifest.part1_filter = est_flags.part1;
        manifest.mapping_file = est_flags.mapping_file;
        manifest.sample_seed = est_m.config.seed;
        if (est_bandwidth_deg > 0.0)
          manifest.config.bandwidth = Bandwidth::from_degrees(est_bandwidth_deg);
        if (est_outs.empty()) est_outs.push_back("ridges.csv");
        for (const auto& path : est_outs) {
          const bool geojson = path.ends_with(".geojson") || path.ends_with(".json");
          (geojson ? manifest.out_geojson : manifest.out_csv) = path;
        }
      }
      manifest.timestamp = now_iso8601();
      return run_estimate(manifest, est_manifest_out);
    }

    if (ev->parsed()) {
      if (ev_runs < 2) throw ParameterError("evaluate needs --runs >= 2");
      if (ev_bandwidth_deg > 0.0)
        ev_cfg.bandwidth = Bandwidth::from_degrees(ev_bandwidth_deg);
      const auto train_records = load_records(ev_train, ev_flags);
      const auto test_records = load_records(ev_test, ev_flags);
      GeoPointSet train, test;
      for (const auto& r : train_records) train.push_back(r.location);
      for (const auto& r : test_records) test.push_back(r.location);
      EvalOptions opts;
      opts.train_sample = ev_sample;
      opts.test_sample = ev_sample;
      opts.base_seed = ev_seed;
      if (ev_band == "t") {
        opts.band = BandMethod::student_t;
      } else if (ev_band == "percentile") {
        opts.band = BandMethod::percentile;
      } else {
        throw ParameterError("--band must be 't' or 'percentile'");
      }
      const auto radii = make_radii(ev_rmin, ev_rmax, ev_rstep);
      std::cerr << "evaluating " << ev_runs << " runs over " << radii.size()
                << " radii\n";
      const auto [curve, iters] = coverage_curve(train, test, ev_cfg, ev_runs,
                                                 radii, opts);
      write_coverage_csv(ev_coverage_out, curve);
      write_iterations_csv(ev_iterations_out, iters);
      std::cerr << "wrote " << ev_coverage_out << " and " << ev_iterations_out
                << '\n';
      return 0;
    }

    if (sy->parsed()) {
      sy_spec.kind = filament_kind_from_string(sy_kind);
      const GeoPointSet pts = generate(sy_spec);
      write_points_csv(sy_out, pts);
      std::cerr << "wrote " << pts.size() << " points to " << sy_out << '\n';
      return 0;
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateDataError& e) {
    std::cerr << "degenerate data: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
