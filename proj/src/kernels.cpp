#include "lifelog/kernels.hpp"

#include <cmath>
#include <numbers>

namespace lifelog::kernels {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cosine_row(const float* row, std::span<const float> query) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < query.size(); ++k) {
    dot += double{row[k]} * query[k];
    na += double{row[k]} * row[k];
    nb += double{query[k]} * query[k];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  double p1 = lat1 * kDegToRad, p2 = lat2 * kDegToRad;
  double dp = (lat2 - lat1) * kDegToRad;
  double dl = (lon2 - lon1) * kDegToRad;
  double s1 = std::sin(dp / 2), s2 = std::sin(dl / 2);
  double a = s1 * s1 + std::cos(p1) * std::cos(p2) * s2 * s2;
  if (a > 1) a = 1;
  return 2 * kEarthRadiusKm * std::asin(std::sqrt(a));
}

RadiusHits radius_scan(std::span<const double> lat, std::span<const double> lon,
                       double center_lat, double center_lon, double radius_km, Execution exec) {
  std::vector<double> dist(lat.size());
  const auto n = static_cast<std::int64_t>(lat.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
      dist[i] = haversine_km(center_lat, center_lon, lat[i], lon[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i)
      dist[i] = haversine_km(center_lat, center_lon, lat[i], lon[i]);
  }
  RadiusHits hits;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= radius_km) {
      hits.rows.push_back(static_cast<std::uint32_t>(i));
      hits.distance_km.push_back(dist[i]);
    }
  }
  return hits;
}

void cosine_scan(std::span<const float> matrix, std::size_t dim, std::span<const float> query,
                 std::span<double> out, Execution exec) {
  const auto rows = static_cast<std::int64_t>(out.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) out[i] = cosine_row(matrix.data() + i * dim, query);
  } else {
    for (std::int64_t i = 0; i < rows; ++i) out[i] = cosine_row(matrix.data() + i * dim, query);
  }
}

}  // namespace lifelog::kernels
