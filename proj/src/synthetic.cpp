#include "lifelog/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lifelog/corpus.hpp"

namespace lifelog {

using nlohmann::json;

Vocabulary Vocabulary::defaults() {
  return Vocabulary{
      {"airplane_cabin", "airport_terminal", "bedroom/indoor", "bus_interior", "car_interior",
       "field", "gym/indoor", "hotel/outdoor", "indoor_pool", "kitchen", "library/indoor",
       "living_room", "meeting_room", "office", "parking_lot", "restaurant", "shop/indoor", "sky",
       "staircase", "street"},
      {"apple", "bag", "banana", "book", "bottle", "car", "chair", "cup", "laptop", "person",
       "phone", "tv"},
      {"bright", "cloudy", "crowded", "dark", "dry", "sunny", "wet"},
  };
}

namespace {

// Distributions are written out by hand: the standard ones are
// implementation-defined, and output must be byte-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int uniform_int(int lo, int hi) {
    auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<int>(x % range);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // k distinct indices from [0, n).
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    k = std::min(k, n);
    for (std::size_t i = 0; i < k; ++i)
      std::swap(idx[i], idx[i + static_cast<std::size_t>(uniform_int(0, static_cast<int>(n - i - 1)))]);
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

struct Place {
  const char* name;  // nullptr: no named location
  double lat, lon;
  bool has_geo;
};

const std::vector<Place>& everyday_places() {
  static const std::vector<Place> places = {
      {"Home", 53.349800, -6.260300, true},        {"Home", 53.349800, -6.260300, true},
      {"Work", 53.386100, -6.256600, true},        {"Work", 53.386100, -6.256600, true},
      {"The Helix", 53.385700, -6.258800, true},   {"Cafe", 53.344000, -6.267200, true},
      {"Gym", 53.360000, -6.250000, true},         {"Supermarket", 53.370000, -6.270000, true},
      {"Dublin Airport", 53.426400, -6.249900, true}, {nullptr, 53.330000, -6.300000, true},
      {nullptr, 53.290000, -6.140000, true},       {nullptr, 0, 0, false},
  };
  return places;
}

constexpr Place kStoryAirport{"Tromso Airport", 69.683300, 18.918900, true};
constexpr Place kStoryVenue{"Meeting Venue", 69.649600, 18.956000, true};

constexpr int kWakeStart = 6 * 3600;
constexpr int kWakeEnd = 23 * 3600;
constexpr int kMaxGap = 43;  // cadence is 40..43 s
constexpr int kSegmentBreak = 300;
constexpr int kMaxStoryImages = 800;

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

struct Segment {
  int start = 0;  // seconds since local midnight
  int size = 0;
  Place place;
};

std::vector<Segment> random_schedule(Rng& rng, int n) {
  int s = std::min(rng.uniform_int(2, 5), n);
  std::vector<int> cuts;
  while (static_cast<int>(cuts.size()) < s - 1) {
    int c = rng.uniform_int(1, n - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), 0);
  cuts.push_back(n);

  std::vector<Segment> segs(static_cast<std::size_t>(s));
  int busy = 0;
  for (int i = 0; i < s; ++i) {
    segs[i].size = cuts[i + 1] - cuts[i];
    busy += segs[i].size * kMaxGap;
  }
  int free = kWakeEnd - kWakeStart - busy - kSegmentBreak * (s - 1);
  std::vector<int> weights(static_cast<std::size_t>(s + 1));
  int total = 0;
  for (auto& w : weights) total += (w = rng.uniform_int(1, 10));
  int t = kWakeStart + free * weights[0] / total;
  const auto& places = everyday_places();
  for (int i = 0; i < s; ++i) {
    segs[i].start = t;
    segs[i].place = places[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(places.size()) - 1))];
    t += segs[i].size * kMaxGap + kSegmentBreak + free * weights[i + 1] / total;
  }
  return segs;
}

// Story and distractor days share one fixed shape: an early-morning
// segment, a mid-morning segment and an afternoon segment.
std::vector<Segment> story_schedule(Rng& rng, int n, bool travel) {
  const auto& places = everyday_places();
  auto pick = [&] {
    return places[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(places.size()) - 1))];
  };
  std::vector<Segment> segs = {
      {6 * 3600 + 30 * 60, 12, travel ? kStoryAirport : pick()},
      {9 * 3600, 8, travel ? kStoryVenue : pick()},
      {14 * 3600, n - 20, pick()},
  };
  return segs;
}

std::vector<Detection> random_detections(Rng& rng, const Vocabulary& vocab) {
  std::vector<Detection> out;
  auto draw = [&](DetectionKind kind, const std::vector<std::string>& terms, int lo, int hi) {
    auto k = static_cast<std::size_t>(rng.uniform_int(lo, hi));
    for (std::size_t i : rng.sample(terms.size(), k)) {
      Detection d{kind, terms[i], round_to(rng.uniform(0.05, 1.0), 1000), std::nullopt};
      if (kind == DetectionKind::Object) {
        d.bbox = BoundingBox{round_to(rng.uniform(0, 0.7), 1000), round_to(rng.uniform(0, 0.7), 1000),
                             round_to(rng.uniform(0.05, 0.3), 1000),
                             round_to(rng.uniform(0.05, 0.3), 1000)};
      }
      out.push_back(std::move(d));
    }
  };
  draw(DetectionKind::Concept, vocab.concepts, 1, 3);
  draw(DetectionKind::Object, vocab.objects, 0, 3);
  draw(DetectionKind::Attribute, vocab.attributes, 0, 2);
  return out;
}

void replace_kind(ImageRecord& r, DetectionKind kind, std::vector<Detection> with) {
  std::erase_if(r.detections, [&](const Detection& d) { return d.kind == kind; });
  r.detections.insert(r.detections.end(), with.begin(), with.end());
}

Detection planted(DetectionKind kind, const char* term, Rng& rng) {
  Detection d{kind, term, round_to(rng.uniform(0.9, 0.99), 1000), std::nullopt};
  if (kind == DetectionKind::Object) d.bbox = BoundingBox{0.2, 0.2, 0.3, 0.3};
  return d;
}

std::vector<double> normalized(std::vector<double> v) {
  double n = 0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

std::string record_id(Date d, int seq) {
  std::chrono::year_month_day ymd{d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u_%04d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), seq);
  return buf;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticParams& p) {
  if (p.days < 1) throw std::invalid_argument("days must be at least 1");
  if (p.images_per_day < 1 || p.images_per_day > kMaxImagesPerDay)
    throw std::invalid_argument("images_per_day must lie in [1, " + std::to_string(kMaxImagesPerDay) + "]");
  if (p.vocab.concepts.empty() || p.vocab.objects.empty() || p.vocab.attributes.empty())
    throw std::invalid_argument("vocabulary needs at least one concept, object and attribute");
  if (p.feature_dim < 2) throw std::invalid_argument("feature_dim must be at least 2");

  int story_day = -1;
  if (p.plant_story) {
    if (p.images_per_day < 30 || p.images_per_day > kMaxStoryImages)
      throw std::invalid_argument("plant_story needs images_per_day in [30, 800]");
    std::vector<int> mondays;
    for (int d = 0; d < p.days; ++d)
      if (weekday_of(p.start_date + std::chrono::days{d}) == 1) mondays.push_back(d);
    if (mondays.empty()) throw std::invalid_argument("plant_story needs a monday in the date range");
    story_day = mondays.size() > 3 ? mondays[3] : mondays.back();
  }
  const int tuesday_distractor = story_day >= 0 && story_day + 1 < p.days ? story_day + 1 : -1;
  const int friday_distractor = story_day >= 3 ? story_day - 3 : -1;

  Rng rng(p.seed);
  SyntheticCorpus out;
  json days_manifest = json::array();
  json runs = json::array();
  std::map<std::string, int> weekday_counts;
  json story;
  std::vector<double> prev_feature;
  std::size_t record_count = 0;

  for (int d = 0; d < p.days; ++d) {
    const Date date = p.start_date + std::chrono::days{d};
    const unsigned wd = weekday_of(date);
    ++weekday_counts[std::string(weekday_name(wd))];

    const bool fixed_shape = d == story_day || d == tuesday_distractor || d == friday_distractor;
    std::vector<Segment> segs =
        fixed_shape ? story_schedule(rng, p.images_per_day, d == story_day)
                    : random_schedule(rng, p.images_per_day);

    std::map<std::string, int> counts[3];
    std::map<std::string, int> visits;
    int seq = 0;
    std::vector<std::vector<std::string>> seg_ids(segs.size());

    for (std::size_t si = 0; si < segs.size(); ++si) {
      const Segment& seg = segs[si];
      int t = seg.start;
      int run_left = 0;
      std::vector<double> run_base;
      for (int k = 0; k < seg.size; ++k) {
        if (k > 0) t += 40 + rng.uniform_int(0, 3);
        ImageRecord r;
        r.id = record_id(date, seq++);
        std::int64_t local = std::int64_t{date.time_since_epoch().count()} * 86400 + t;
        r.timestamp = Timestamp{local - std::int64_t{p.utc_offset_minutes} * 60, p.utc_offset_minutes};
        if (seg.place.has_geo)
          r.geo = GeoPoint{round_to(seg.place.lat + rng.uniform(-0.001, 0.001), 1e6),
                           round_to(seg.place.lon + rng.uniform(-0.001, 0.001), 1e6)};
        if (seg.place.name) r.named_location = seg.place.name;
        r.detections = random_detections(rng, p.vocab);

        // Near-duplicate runs: a fresh base orthogonal to the previous
        // record, then small perturbations of it.
        std::vector<double> feat;
        if (run_left == 0) {
          bool featureless = rng.uniform01() < 0.05;
          run_left = featureless ? 1 : std::min(seg.size - k, rng.uniform01() < 0.35 ? rng.uniform_int(2, 6) : 1);
          runs.push_back({{"first_id", r.id}, {"length", run_left}});
          run_base.clear();
          if (!featureless) {
            std::vector<double> base(p.feature_dim);
            for (double& x : base) x = rng.normal();
            if (!prev_feature.empty()) {
              double dot = 0;
              for (std::size_t i = 0; i < base.size(); ++i) dot += base[i] * prev_feature[i];
              for (std::size_t i = 0; i < base.size(); ++i) base[i] -= dot * prev_feature[i];
            }
            run_base = normalized(std::move(base));
            feat = run_base;
          }
        } else if (!run_base.empty()) {
          feat = run_base;
          for (double& x : feat) x += 0.01 * rng.normal();
          feat = normalized(std::move(feat));
        }
        --run_left;
        prev_feature.clear();
        for (double x : feat) {
          double v = round_to(x, 1e6);
          r.feature.push_back(static_cast<float>(v));
          prev_feature.push_back(v);
        }
        if (!prev_feature.empty()) prev_feature = normalized(std::move(prev_feature));

        // Story plants.
        if (d == story_day && si == 0 && k >= 1 && k <= 4)
          replace_kind(r, DetectionKind::Concept, {planted(DetectionKind::Concept, "airport_terminal", rng)});
        if (d == story_day && si == 0 && k >= 6 && k <= 9) {
          replace_kind(r, DetectionKind::Concept, {planted(DetectionKind::Concept, "car_interior", rng)});
          replace_kind(r, DetectionKind::Object, {planted(DetectionKind::Object, "car", rng)});
        }
        if (d == story_day && si == 1 && k <= 2) {
          replace_kind(r, DetectionKind::Concept, {planted(DetectionKind::Concept, "meeting_room", rng)});
          replace_kind(r, DetectionKind::Object, {planted(DetectionKind::Object, "person", rng),
                                                  planted(DetectionKind::Object, "laptop", rng)});
        }
        if ((d == tuesday_distractor && si == 0 && k >= 1 && k <= 2) ||
            (d == friday_distractor && si == 2 && k <= 1))
          replace_kind(r, DetectionKind::Concept, {planted(DetectionKind::Concept, "airport_terminal", rng)});

        for (const auto& det : r.detections) ++counts[static_cast<int>(det.kind)][det.term];
        if (r.named_location) ++visits[*r.named_location];
        seg_ids[si].push_back(r.id);
        out.metadata += record_to_json_line(r);
        out.metadata += '\n';
        ++record_count;
      }
    }

    if (d == story_day) {
      auto slice = [](const std::vector<std::string>& v, std::size_t a, std::size_t b) {
        return std::vector<std::string>(v.begin() + static_cast<std::ptrdiff_t>(a),
                                        v.begin() + static_cast<std::ptrdiff_t>(b));
      };
      story["date"] = format_date(date);
      story["target_id"] = seg_ids[0][2];
      story["airport_ids"] = slice(seg_ids[0], 1, 5);
      story["taxi_ids"] = slice(seg_ids[0], 6, 10);
      story["meeting_ids"] = slice(seg_ids[1], 0, 3);
    }
    if (d == tuesday_distractor) story["distractor_morning_ids"] = {seg_ids[0][1], seg_ids[0][2]};
    if (d == friday_distractor) story["distractor_afternoon_ids"] = {seg_ids[2][0], seg_ids[2][1]};

    days_manifest.push_back({{"date", format_date(date)},
                             {"weekday", weekday_name(wd)},
                             {"image_count", seq},
                             {"term_counts",
                              {{"concept", counts[0]}, {"object", counts[1]}, {"attribute", counts[2]}}},
                             {"location_visits", visits}});
  }

  out.manifest = {{"seed", p.seed},
                  {"days", p.days},
                  {"images_per_day", p.images_per_day},
                  {"start_date", format_date(p.start_date)},
                  {"utc_offset_minutes", p.utc_offset_minutes},
                  {"feature_dim", p.feature_dim},
                  {"record_count", record_count},
                  {"vocabulary",
                   {{"concept", p.vocab.concepts}, {"object", p.vocab.objects}, {"attribute", p.vocab.attributes}}},
                  {"weekday_counts", weekday_counts},
                  {"per_day", std::move(days_manifest)},
                  {"runs", std::move(runs)},
                  {"run_count", 0}};
  out.manifest["run_count"] = out.manifest["runs"].size();
  if (story_day >= 0) out.manifest["story"] = std::move(story);
  return out;
}

}  // namespace lifelog
