#pragma once

// Data-parallel scans used by the engine. Every kernel has an OpenMP
// version and a serial reference with identical output; tests compare the
// two and bench/ times them.

#include <cstdint>
#include <span>
#include <vector>

namespace lifelog {

enum class Execution : std::uint8_t { Parallel, Serial };

namespace kernels {

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance in km, inputs in degrees.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

struct RadiusHits {
  std::vector<std::uint32_t> rows;  // ascending row index into the input columns
  std::vector<double> distance_km;
};

// Rows whose distance to the center is <= radius_km.
RadiusHits radius_scan(std::span<const double> lat, std::span<const double> lon,
                       double center_lat, double center_lon, double radius_km, Execution exec);

// out[i] = cosine(row i of `matrix`, query). matrix is row-major rows x dim.
void cosine_scan(std::span<const float> matrix, std::size_t dim, std::span<const float> query,
                 std::span<double> out, Execution exec);

// Candidates for which pred(ordinal) holds, order preserved.
template <class Pred>
std::vector<std::uint32_t> select(std::span<const std::uint32_t> candidates, Pred&& pred,
                                  Execution exec) {
  std::vector<std::uint8_t> keep(candidates.size());
  const auto n = static_cast<std::int64_t>(candidates.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) keep[i] = pred(candidates[i]) ? 1 : 0;
  } else {
    for (std::int64_t i = 0; i < n; ++i) keep[i] = pred(candidates[i]) ? 1 : 0;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.push_back(candidates[i]);
  return out;
}

}  // namespace kernels
}  // namespace lifelog
