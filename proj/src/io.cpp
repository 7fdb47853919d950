#include "myxo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <system_error>

namespace myxo {

#ifndef MYXO_VERSION
#define MYXO_VERSION "0.1.0"
#endif

const char* version_string() { return "myxo-" MYXO_VERSION; }

const char* kernel_name(Kernel kernel) {
  return kernel == Kernel::rod ? "rod" : "maxwell";
}

Kernel kernel_from_name(const std::string& name) {
  if (name == "rod") return Kernel::rod;
  if (name == "maxwell") return Kernel::maxwell;
  throw std::invalid_argument("unknown kernel '" + name +
                              "' (expected rod or maxwell)");
}

std::string fmt17(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory '" + dir.string() +
                             "': " + ec.message());
  }
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,mass,l2_dist_uniform,a1,b1,a2,b2,a3,b3,a4,b4,a5,b5,a6,b6,"
         "m_left,m_right\n";
  for (const TrajectoryRow& r : rows) {
    out << fmt17(r.t) << ',' << fmt17(r.mass) << ','
        << fmt17(r.l2_dist_uniform);
    for (int m = 0; m < 6; ++m) {
      out << ',' << fmt17(r.a[m]) << ',' << fmt17(r.b[m]);
    }
    out << ',' << fmt17(r.m_left) << ',' << fmt17(r.m_right) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path,
                       const AngularGrid& grid, std::span<const double> f) {
  std::ofstream out = open_out(path);
  out << "phi,f\n";
  for (int k = 0; k < grid.num_points; ++k) {
    out << fmt17(grid.angle(k)) << ',' << fmt17(f[k]) << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const SpectrumReport& report) {
  std::ofstream out = open_out(path);
  out << "mode,lambda_closed,lambda_numeric,abs_err,rel_err\n";
  for (const ModeResult& m : report.modes) {
    out << m.mode << ',' << fmt17(m.lambda_closed) << ','
        << fmt17(m.lambda_numeric) << ',' << fmt17(m.abs_err) << ','
        << fmt17(m.rel_err) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepTable& table) {
  std::ofstream out = open_out(path);
  out << "mu,A2,A2_predicted,rel_err,t_equilibrate,converged\n";
  for (const SweepRow& r : table.rows) {
    double rel = r.predicted > 0.0
                     ? std::abs(r.amplitude - r.predicted) / r.predicted
                     : std::numeric_limits<double>::quiet_NaN();
    out << fmt17(r.mu) << ',' << fmt17(r.amplitude) << ','
        << fmt17(r.predicted) << ',' << fmt17(rel) << ','
        << fmt17(r.t_equilibrate) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_diagram_csv(const std::filesystem::path& path,
                       const SweepTable& table) {
  std::ofstream out = open_out(path);
  out << "mu,A2_upper,A2_lower,A2_uniform\n";
  for (const SweepRow& r : table.rows) {
    out << fmt17(r.mu) << ',' << fmt17(r.amplitude) << ','
        << fmt17(-r.amplitude) << ',' << fmt17(0.0) << '\n';
  }
}

void write_line_profile_csv(const std::filesystem::path& path,
                            const LineGrid& grid, std::span<const double> F) {
  std::ofstream out = open_out(path);
  out << "xi,F\n";
  for (int i = 0; i < grid.num_nodes; ++i) {
    out << fmt17(grid.nodes[i]) << ',' << fmt17(F[i]) << '\n';
  }
}

void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<PicardRow>& history) {
  std::ofstream out = open_out(path);
  out << "iter,sup_residual,mass_renorm_factor,variance\n";
  for (const PicardRow& r : history) {
    out << r.iter << ',' << fmt17(r.sup_residual) << ','
        << fmt17(r.mass_renorm_factor) << ',' << fmt17(r.variance) << '\n';
  }
}

void write_comparison_csv(const std::filesystem::path& path,
                          const AngularGrid& grid,
                          std::span<const double> f_equilibrium,
                          std::span<const double> f_rescaled) {
  std::ofstream out = open_out(path);
  out << "phi,f_equilibrium,f_rescaled\n";
  for (int k = 0; k < grid.num_points; ++k) {
    out << fmt17(grid.angle(k)) << ',' << fmt17(f_equilibrium[k]) << ','
        << fmt17(f_rescaled[k]) << '\n';
  }
}

void write_decay_csv(const std::filesystem::path& path,
                     const std::vector<DecayRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,mass,l2_dist\n";
  for (const DecayRow& r : rows) {
    out << fmt17(r.t) << ',' << fmt17(r.mass) << ',' << fmt17(r.l2_dist)
        << '\n';
  }
}

void write_field_binary(const std::filesystem::path& path_bin,
                        const std::filesystem::path& path_json,
                        const KineticField& field) {
  {
    std::ofstream out = open_out(path_bin);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) {
      throw std::runtime_error("write failed: '" + path_bin.string() + "'");
    }
  }
  std::ofstream out = open_out(path_json);
  out << "{\n"
      << "  \"layout\": \"ix-major,iy,k\",\n"
      << "  \"dtype\": \"float64-le\",\n"
      << "  \"nx\": " << field.nx << ",\n"
      << "  \"ny\": " << field.ny << ",\n"
      << "  \"n\": " << field.grid.n << ",\n"
      << "  \"num_angles\": " << field.grid.num_points << ",\n"
      << "  \"dx\": " << fmt17(field.dx) << ",\n"
      << "  \"dy\": " << fmt17(field.dy) << ",\n"
      << "  \"delta_phi\": " << fmt17(field.grid.delta_phi) << "\n"
      << "}\n";
}

}  // namespace myxo
