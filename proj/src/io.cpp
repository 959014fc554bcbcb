#include "gfbbm/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace gfbbm {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path + " for reading");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_profile_csv(const std::string& path, const SolitaryWave& wave) {
  std::ofstream out = open_out(path);
  out << "x,Q\n";
  for (int i = 0; i < wave.grid.n_points(); ++i)
    out << format_double(wave.grid.nodes()[i]) << ','
        << format_double(wave.profile[i]) << '\n';
}

void write_wave_sidecar(const std::string& path, const SolitaryWave& wave) {
  nlohmann::ordered_json j;
  j["alpha"] = wave.params.alpha;
  j["p"] = wave.params.p;
  j["c"] = wave.params.c;
  j["half_length"] = wave.grid.half_length();
  j["n_points"] = wave.grid.n_points();
  j["residual"] = wave.residual;
  j["iterations"] = wave.iterations;
  j["domain_warning"] = wave.domain_warning;
  j["aliasing_warning"] = wave.aliasing_warning;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

SolitaryWave read_profile(const std::string& csv_path,
                          const std::string& json_path) {
  nlohmann::json j;
  {
    std::ifstream in = open_in(json_path);
    in >> j;
  }
  ModelParams params{j.at("alpha").get<double>(), j.at("p").get<int>(),
                     j.at("c").get<double>()};
  SpectralGrid grid(j.at("half_length").get<double>(),
                    j.at("n_points").get<int>());

  std::ifstream in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,Q", 0) != 0)
    throw IoError("missing x,Q header in " + csv_path);
  std::vector<double> profile;
  profile.reserve(grid.n_points());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("malformed row in " + csv_path + ": " + line);
    profile.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  if (static_cast<int>(profile.size()) != grid.n_points())
    throw IoError("profile row count " + std::to_string(profile.size()) +
                  " does not match n_points " +
                  std::to_string(grid.n_points()));

  SolitaryWave wave{params, grid, std::move(profile), 0.0,
                    j.value("iterations", 0), {}};
  wave.residual = equation_residual(wave.profile, params, grid);
  wave.domain_warning = j.value("domain_warning", false);
  wave.aliasing_warning = j.value("aliasing_warning", false);
  return wave;
}

void write_trace_csv(const std::string& path, const EvolutionTrace& trace) {
  std::ofstream out = open_out(path);
  out << "t,peak,x_peak,orbital_distance,I,F,H\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const InvariantRecord& rec = trace.invariant_series[i];
    out << format_double(trace.times[i]) << ','
        << format_double(trace.peak_amplitude[i]) << ','
        << format_double(trace.peak_location[i]) << ','
        << format_double(trace.orbital_dist[i]) << ','
        << format_double(rec.mass) << ',' << format_double(rec.momentum) << ','
        << format_double(rec.energy) << '\n';
  }
}

void write_snapshots(const std::string& path, const EvolutionTrace& trace,
                     const SpectralGrid& grid) {
  std::ofstream out = open_out(path, /*binary=*/true);
  const char magic[12] = {'G', 'F', 'B', 'B', 'M', 'S',
                          'N', 'A', 'P', 'S', 'H', 'T'};
  const std::uint32_t version = 1;
  out.write(magic, sizeof(magic));
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t n = grid.n_points();
  const double half_length = grid.half_length();
  const std::uint64_t count = trace.snapshots.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&half_length), sizeof(half_length));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
    const double t = trace.snapshot_times[s];
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
    out.write(reinterpret_cast<const char*>(trace.snapshots[s].data()),
              static_cast<std::streamsize>(n * sizeof(double)));
  }
}

std::vector<RegionPoint> region_scan(double alpha_min, double alpha_max,
                                     double c_min, double c_max,
                                     double resolution, int p) {
  if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
  if (!(alpha_max >= alpha_min) || !(c_max >= c_min))
    throw ConfigError("empty scan range");
  std::vector<RegionPoint> points;
  const int na = static_cast<int>(std::floor((alpha_max - alpha_min) /
                                             resolution + 1e-9)) + 1;
  const int nc = static_cast<int>(std::floor((c_max - c_min) /
                                             resolution + 1e-9)) + 1;
  points.reserve(static_cast<std::size_t>(na) * nc);
  for (int i = 0; i < na; ++i) {
    const double alpha = alpha_min + i * resolution;
    for (int k = 0; k < nc; ++k) {
      const double c = c_min + k * resolution;
      points.push_back({alpha, c, classify({alpha, p, c}).verdict});
    }
  }
  return points;
}

void write_region_csv(const std::string& path,
                      const std::vector<RegionPoint>& points) {
  std::ofstream out = open_out(path);
  out << "alpha,c,verdict\n";
  for (const RegionPoint& pt : points)
    out << format_double(pt.alpha) << ',' << format_double(pt.c) << ','
        << to_string(pt.verdict) << '\n';
}

void write_spectrum_report_json(const std::string& path,
                                const SpectrumReport& report) {
  nlohmann::ordered_json j;
  const StabilityReport& r = report.report;
  j["alpha"] = r.params.alpha;
  j["p"] = r.params.p;
  j["c"] = r.params.c;
  j["analytic_verdict"] = to_string(r.verdict);
  j["k_derivative_sign"] = r.k_derivative_sign;
  if (r.has_roots) {
    j["c1"] = r.roots.c1;
    j["c2"] = r.roots.c2;
  }
  j["n_negative"] = r.n_negative;
  j["n_I"] = r.n_I;
  j["index"] = report.index;
  j["kernel_quality"] = r.kernel_quality;
  if (std::isfinite(r.essential_edge)) j["essential_edge"] = r.essential_edge;
  j["verdict_agreement"] = report.verdict_agreement;
  if (std::isfinite(report.max_re_lambda))
    j["max_re_lambda"] = report.max_re_lambda;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<SweepPoint> sweep_waves(const std::vector<double>& alphas,
                                    const std::vector<double>& cs, int p,
                                    const SpectralGrid& grid,
                                    const PetviashviliSettings& settings,
                                    int n_threads) {
  if (alphas.empty() || cs.empty()) throw ConfigError("empty sweep ranges");
  std::vector<SweepPoint> points(alphas.size() * cs.size());
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t k = 0; k < cs.size(); ++k) {
      points[i * cs.size() + k].alpha = alphas[i];
      points[i * cs.size() + k].c = cs[k];
    }

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= points.size()) return;
      SweepPoint& pt = points[idx];
      try {
        const SolitaryWave wave =
            solve_petviashvili({pt.alpha, p, pt.c}, grid, settings);
        const PohozaevRatio ratio = pohozaev_ratio(wave);
        pt.ok = true;
        pt.peak = locate_peak(wave.profile, wave.grid).value;
        pt.residual = wave.residual;
        pt.iterations = wave.iterations;
        pt.pohozaev_rel_err =
            std::abs(ratio.measured - ratio.predicted) /
            std::abs(ratio.predicted);
      } catch (const Error& err) {
        pt.error_kind = err.kind();
      }
    }
  };

  int workers = n_threads > 0
                    ? n_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers,
                                      static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  return points;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points) {
  std::ofstream out = open_out(path);
  out << "alpha,c,status,peak,residual,iterations,pohozaev_rel_err\n";
  for (const SweepPoint& pt : points) {
    out << format_double(pt.alpha) << ',' << format_double(pt.c) << ',';
    if (pt.ok)
      out << "ok," << format_double(pt.peak) << ','
          << format_double(pt.residual) << ',' << pt.iterations << ','
          << format_double(pt.pohozaev_rel_err) << '\n';
    else
      out << pt.error_kind << ",,,,\n";
  }
}

}  // namespace gfbbm
