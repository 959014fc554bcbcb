#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "gfbbm/io.hpp"

using namespace gfbbm;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("profile round trip is bit exact") {
  SpectralGrid grid = make_grid(64.0, 512);
  SolitaryWave wave = solve_petviashvili({2.0, 1, 1.5}, grid);

  const std::string csv = temp_path("gfbbm_wave.csv");
  const std::string json = temp_path("gfbbm_wave.json");
  write_profile_csv(csv, wave);
  write_wave_sidecar(json, wave);

  SolitaryWave loaded = read_profile(csv, json);
  REQUIRE(loaded.profile.size() == wave.profile.size());
  for (std::size_t i = 0; i < wave.profile.size(); ++i)
    CHECK(loaded.profile[i] == wave.profile[i]);
  CHECK(loaded.params.alpha == wave.params.alpha);
  CHECK(loaded.params.c == wave.params.c);
  CHECK(loaded.grid.n_points() == wave.grid.n_points());
  CHECK(loaded.iterations == wave.iterations);

  // determinism: a second write is byte identical
  const std::string csv2 = temp_path("gfbbm_wave2.csv");
  write_profile_csv(csv2, wave);
  CHECK(slurp(csv) == slurp(csv2));
  std::remove(csv.c_str());
  std::remove(csv2.c_str());
  std::remove(json.c_str());
}

TEST_CASE("trace CSV columns") {
  SpectralGrid grid = make_grid(32.0, 256);
  SolitaryWave wave = exact_solution(1.4, grid);
  ExperimentOptions options;
  options.sample_interval = 0.5;
  EvolutionTrace trace = run_experiment({1.0}, wave, 1e-2, 1.0, options);

  const std::string path = temp_path("gfbbm_trace.csv");
  write_trace_csv(path, trace);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,peak,x_peak,orbital_distance,I,F,H");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(trace.times.size()));
  std::remove(path.c_str());
}

TEST_CASE("snapshot binary header") {
  SpectralGrid grid = make_grid(32.0, 256);
  SolitaryWave wave = exact_solution(1.4, grid);
  ExperimentOptions options;
  options.record_snapshots = true;
  options.sample_interval = 0.5;
  EvolutionTrace trace = run_experiment({1.0}, wave, 1e-2, 1.0, options);

  const std::string path = temp_path("gfbbm_snaps.bin");
  write_snapshots(path, trace, grid);
  const std::string bytes = slurp(path);
  REQUIRE(bytes.size() >=
          16 + 2 * sizeof(std::uint64_t) + sizeof(double) +
              trace.snapshots.size() * (1 + grid.n_points()) * sizeof(double));
  CHECK(bytes.substr(0, 12) == "GFBBMSNAPSHT");
  std::uint32_t version;
  std::memcpy(&version, bytes.data() + 12, 4);
  CHECK(version == 1);
  std::uint64_t n;
  std::memcpy(&n, bytes.data() + 16, 8);
  CHECK(n == 256);
  std::remove(path.c_str());
}

TEST_CASE("region scan covers the verdict set and stays sorted") {
  std::vector<RegionPoint> points = region_scan(0.3, 1.9, 0.1, 1.3, 0.1, 1);
  REQUIRE(!points.empty());
  bool saw_stable = false, saw_unstable = false, saw_none = false,
       saw_undefined = false;
  for (const RegionPoint& pt : points) {
    switch (pt.verdict) {
      case Verdict::SpectrallyStable: saw_stable = true; break;
      case Verdict::SpectrallyUnstable: saw_unstable = true; break;
      case Verdict::NoSolitaryWave: saw_none = true; break;
      case Verdict::HamiltonianUndefined: saw_undefined = true; break;
    }
  }
  CHECK(saw_stable);
  CHECK(saw_unstable);
  CHECK(saw_none);
  CHECK(saw_undefined);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const bool ordered =
        points[i - 1].alpha < points[i].alpha ||
        (points[i - 1].alpha == points[i].alpha &&
         points[i - 1].c < points[i].c);
    CHECK(ordered);
  }
  CHECK_THROWS_AS(region_scan(1.0, 0.5, 0.1, 1.3, 0.1, 1), ConfigError);
}

TEST_CASE("sweep runs on a pool and keeps lattice order") {
  SpectralGrid grid = make_grid(64.0, 512);
  PetviashviliSettings settings;
  const std::vector<double> alphas = {1.6, 2.0};
  const std::vector<double> cs = {0.8, 1.4, 1.8};
  std::vector<SweepPoint> points = sweep_waves(alphas, cs, 1, grid, settings, 2);
  REQUIRE(points.size() == 6);
  CHECK(points[0].alpha == 1.6);
  CHECK(points[0].c == 0.8);
  CHECK(!points[0].ok);
  CHECK(points[0].error_kind == "existence");
  CHECK(points[1].ok);
  CHECK(points[1].residual < 1e-10);
  // alpha = 2 row decays exponentially, so the quality column is tight there
  CHECK(points[4].alpha == 2.0);
  CHECK(points[4].pohozaev_rel_err < 1e-5);

  // identical run -> identical rows (determinism across scheduling)
  std::vector<SweepPoint> again = sweep_waves(alphas, cs, 1, grid, settings, 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].ok == again[i].ok);
    if (points[i].ok) CHECK(points[i].peak == again[i].peak);
  }

  const std::string path = temp_path("gfbbm_sweep.csv");
  write_sweep_csv(path, points);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "alpha,c,status,peak,residual,iterations,pohozaev_rel_err");
  std::remove(path.c_str());
}

TEST_CASE("spectrum report JSON") {
  SpectralGrid grid = make_grid(64.0, 512);
  SpectrumReport report = spectral_stability_report({2.0, 1, 1.5}, grid);
  const std::string path = temp_path("gfbbm_spectrum.json");
  write_spectrum_report_json(path, report);
  const std::string text = slurp(path);
  CHECK(text.find("\"n_negative\": 1") != std::string::npos);
  CHECK(text.find("\"analytic_verdict\": \"SpectrallyStable\"") !=
        std::string::npos);
  CHECK(text.find("\"verdict_agreement\": true") != std::string::npos);
  std::remove(path.c_str());
}
