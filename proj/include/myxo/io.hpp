#ifndef MYXO_IO_HPP
#define MYXO_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "myxo/bifurcation.hpp"
#include "myxo/fixedpoint.hpp"
#include "myxo/homogeneous.hpp"
#include "myxo/spatial.hpp"
#include "myxo/spectral.hpp"

namespace myxo {

/// Locale-independent shortest-17-significant-digit formatting; the same
/// bytes for the same double on every run.
std::string fmt17(double x);

const char* version_string();
const char* kernel_name(Kernel kernel);
Kernel kernel_from_name(const std::string& name);

void ensure_directory(const std::filesystem::path& dir);

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows);
void write_profile_csv(const std::filesystem::path& path,
                       const AngularGrid& grid, std::span<const double> f);
void write_spectrum_csv(const std::filesystem::path& path,
                        const SpectrumReport& report);
void write_sweep_csv(const std::filesystem::path& path,
                     const SweepTable& table);
/// mu vs the +-A2 branches and the uniform branch, for external plotting.
void write_diagram_csv(const std::filesystem::path& path,
                       const SweepTable& table);
void write_line_profile_csv(const std::filesystem::path& path,
                            const LineGrid& grid, std::span<const double> F);
void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<PicardRow>& history);
void write_comparison_csv(const std::filesystem::path& path,
                          const AngularGrid& grid,
                          std::span<const double> f_equilibrium,
                          std::span<const double> f_rescaled);
void write_decay_csv(const std::filesystem::path& path,
                     const std::vector<DecayRow>& rows);

/// Flat binary snapshot (ix-major, then iy, then k, 64-bit little-endian
/// reals) plus a JSON sidecar describing the dimensions.
void write_field_binary(const std::filesystem::path& path_bin,
                        const std::filesystem::path& path_json,
                        const KineticField& field);

}  // namespace myxo

#endif
