#ifndef GFBBM_IO_HPP
#define GFBBM_IO_HPP

#include <string>
#include <vector>

#include "gfbbm/evolution.hpp"
#include "gfbbm/solitary.hpp"
#include "gfbbm/stability.hpp"

namespace gfbbm {

// All data files are deterministic: 17-significant-digit decimals (lossless
// for doubles), comma separators, LF line endings, no timestamps.

std::string format_double(double v);

void write_profile_csv(const std::string& path, const SolitaryWave& wave);
void write_wave_sidecar(const std::string& path, const SolitaryWave& wave);
// Reads the pair written by the two functions above.
SolitaryWave read_profile(const std::string& csv_path,
                          const std::string& json_path);

void write_trace_csv(const std::string& path, const EvolutionTrace& trace);

// Flat binary snapshot file. Layout (little endian):
//   bytes 0..11   magic "GFBBMSNAPSHT"
//   bytes 12..15  uint32 format version (1)
//   uint64 n_points, float64 half_length, uint64 n_snapshots,
//   then per snapshot: float64 t followed by n_points float64 samples.
void write_snapshots(const std::string& path, const EvolutionTrace& trace,
                     const SpectralGrid& grid);

struct RegionPoint {
  double alpha;
  double c;
  Verdict verdict;
};

// Lattice scan of the analytic classification (rows ordered by alpha, then c).
std::vector<RegionPoint> region_scan(double alpha_min, double alpha_max,
                                     double c_min, double c_max,
                                     double resolution, int p);

void write_region_csv(const std::string& path,
                      const std::vector<RegionPoint>& points);

void write_spectrum_report_json(const std::string& path,
                                const SpectrumReport& report);

struct SweepPoint {
  double alpha;
  double c;
  bool ok = false;
  std::string error_kind;  // set when the solve failed
  double peak = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double pohozaev_rel_err = 0.0;
};

// Solves a wave per lattice point on a worker pool; rows come back ordered
// by (alpha, c) regardless of scheduling.
std::vector<SweepPoint> sweep_waves(const std::vector<double>& alphas,
                                    const std::vector<double>& cs, int p,
                                    const SpectralGrid& grid,
                                    const PetviashviliSettings& settings,
                                    int n_threads = 0);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points);

}  // namespace gfbbm

#endif
