#pragma once

#include <string>

#include "varbw/grid.hpp"
#include "varbw/profile.hpp"
#include "varbw/spectral.hpp"

namespace varbw {

/// Profile file: JSON object {"breakpoints": [...], "values": [...]}.
BandwidthProfile read_profile_json(const std::string& path);
void write_profile_json(const std::string& path, const BandwidthProfile& p);

/// Density file: CSV `zeta,re_gminus,im_gminus,re_gplus,im_gplus`.
SpectralDensityPair read_density_csv(const std::string& path);
void write_density_csv(const std::string& path, const SpectralDensityPair& d);

/// Grid-function file: CSV `x,<name>` (real) or `x,re,im` (complex).
GridFunction read_grid_function_csv(const std::string& path);
void write_grid_function_csv(const std::string& path, const GridFunction& f,
                             const std::string& value_header = "value");

/// Kernel grid: CSV `x,y,k` in row-major order (x outer, y inner).
void write_kernel_csv(const std::string& path, const Eigen::VectorXd& xs,
                      const Eigen::VectorXd& ys, const Eigen::MatrixXd& k);

void write_text_file(const std::string& path, const std::string& content);

/// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);

}  // namespace varbw
