#include "mmsched/moments.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "mmsched/errors.hpp"
#include "mmsched/parallel.hpp"

namespace mmsched {

namespace {

const CellIndex kOrigin{0, 0};

void check_kappa(double kappa) {
  if (!(std::isfinite(kappa) && kappa >= 2.0)) {
    throw Error(ErrorCode::DomainError, "pathloss exponent must be >= 2");
  }
}

// Running mean/variance (Welford) of x = ratio^kappa and x^2.
struct RatioStats {
  std::int64_t n = 0;
  double mean1 = 0.0, m2_1 = 0.0;
  double mean2 = 0.0, m2_2 = 0.0;

  void add(double x) {
    ++n;
    const double y = x * x;
    const double d1 = x - mean1;
    mean1 += d1 / static_cast<double>(n);
    m2_1 += d1 * (x - mean1);
    const double d2 = y - mean2;
    mean2 += d2 / static_cast<double>(n);
    m2_2 += d2 * (y - mean2);
  }

  double se(double m2) const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }

  MomentEntry entry() const { return {mean1, mean2, se(m2_1), se(m2_2)}; }
};

// (|u| / |b + u|)^kappa for a UE at offset u from its own BS, with the
// interfering BS at the origin and its own BS at b (unit cell radius).
inline double pathloss_ratio(Point2D own_bs, Point2D u, double half_kappa) {
  const double own2 = u.x * u.x + u.y * u.y;
  const double zx = own_bs.x + u.x;
  const double zy = own_bs.y + u.y;
  const double victim2 = zx * zx + zy * zy;
  return std::pow(own2 / victim2, half_kappa);
}

MomentEntry worst_case_entry(CellIndex offset, double kappa) {
  const Point2D z = worst_case_position(offset, kOrigin, 1.0);
  const Point2D own = bs_position(offset, 1.0);
  const double x = std::pow(distance(z, own) / norm(z), kappa);
  return {x, x * x, 0.0, 0.0};
}

std::vector<Point2D> draw_pool(std::int64_t n, double min_frac, Rng& rng) {
  std::vector<Point2D> pool;
  pool.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    pool.push_back(sample_ue_position(kOrigin, 1.0, min_frac, rng));
  }
  return pool;
}

MomentEntry average_entry(CellIndex offset, double kappa, const std::vector<Point2D>& pool) {
  if (offset == kOrigin) return {1.0, 1.0, 0.0, 0.0};
  const Point2D own = bs_position(offset, 1.0);
  const double half_kappa = 0.5 * kappa;
  RatioStats stats;
  for (const Point2D& u : pool) stats.add(pathloss_ratio(own, u, half_kappa));
  return stats.entry();
}

std::vector<MomentEntry> evaluate(std::span<const CellIndex> offsets, double kappa,
                                  InterferenceMode mode, const std::vector<Point2D>& pool) {
  std::vector<MomentEntry> out(offsets.size());
  parallel_for(offsets.size(), [&](std::size_t i) {
    const CellIndex o = offsets[i];
    if (o == kOrigin) {
      out[i] = {1.0, 1.0, 0.0, 0.0};
    } else if (mode == InterferenceMode::WorstCase) {
      out[i] = worst_case_entry(o, kappa);
    } else {
      out[i] = average_entry(o, kappa, pool);
    }
  });
  return out;
}

}  // namespace

const MomentEntry& MomentTable::at(CellIndex offset) const {
  auto it = entries.find(offset);
  if (it == entries.end()) {
    throw Error(ErrorCode::NotFound, "moment table has no entry for offset " + to_string(offset));
  }
  return it->second;
}

std::vector<CellIndex> MomentTable::offsets() const {
  std::vector<CellIndex> out;
  out.reserve(entries.size());
  for (const auto& [offset, entry] : entries) out.push_back(offset);
  return out;
}

MomentTable MomentTable::restricted(std::span<const CellIndex> keep) const {
  MomentTable out = *this;
  out.entries.clear();
  for (CellIndex c : keep) out.entries.emplace(c, at(c));
  return out;
}

MomentEstimate compute_moment(CellIndex offset, double kappa, int gamma, InterferenceMode mode,
                              std::int64_t n_samples, Rng& rng, double min_frac) {
  check_kappa(kappa);
  if (gamma != 1 && gamma != 2) throw Error(ErrorCode::DomainError, "gamma must be 1 or 2");
  if (mode == InterferenceMode::WorstCase) {
    if (offset == kOrigin) {
      throw Error(ErrorCode::DomainError, "own cell has no worst-case interferer position");
    }
    const MomentEntry e = worst_case_entry(offset, kappa);
    return {gamma == 1 ? e.mu1 : e.mu2, 0.0};
  }
  if (n_samples < 1) throw Error(ErrorCode::DomainError, "n_samples must be positive");
  if (offset == kOrigin) return {1.0, 0.0};

  const Point2D own = bs_position(offset, 1.0);
  const double exponent = 0.5 * kappa * gamma;
  std::int64_t n = 0;
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Point2D z = sample_ue_position(offset, 1.0, min_frac, rng);
    const Point2D u = z - own;
    const double x = std::pow((u.x * u.x + u.y * u.y) / (z.x * z.x + z.y * z.y), exponent);
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  const double se =
      n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return {mean, se};
}

MomentTable build_table_for(std::span<const CellIndex> offsets, double kappa,
                            InterferenceMode mode, std::int64_t n_samples, std::uint64_t seed,
                            double min_frac) {
  check_kappa(kappa);
  if (mode == InterferenceMode::Average && n_samples < 1) {
    throw Error(ErrorCode::DomainError, "n_samples must be positive");
  }
  MomentTable table;
  table.mode = mode;
  table.kappa = kappa;
  table.min_ue_distance_frac = min_frac;
  table.n_samples = mode == InterferenceMode::Average ? n_samples : 0;
  table.seed = seed;
  int tiers = 0;
  for (CellIndex c : offsets) tiers = std::max(tiers, hex_distance(c));
  table.tiers = tiers;

  std::vector<Point2D> pool;
  if (mode == InterferenceMode::Average) {
    Rng rng = make_stream(seed, stream::kMomentsAverage);
    pool = draw_pool(n_samples, min_frac, rng);
  }
  const auto values = evaluate(offsets, kappa, mode, pool);
  for (std::size_t i = 0; i < offsets.size(); ++i) table.entries.emplace(offsets[i], values[i]);
  return table;
}

MomentTable build_table(double kappa, InterferenceMode mode, TierPolicy policy,
                        std::int64_t n_samples, std::uint64_t seed, double min_frac) {
  check_kappa(kappa);
  if (mode == InterferenceMode::Average && n_samples < 1) {
    throw Error(ErrorCode::DomainError, "n_samples must be positive");
  }
  if (policy.max_tiers < 1 || !(policy.rel_tol > 0.0)) {
    throw Error(ErrorCode::DomainError, "tier policy needs max_tiers >= 1 and rel_tol > 0");
  }
  MomentTable table;
  table.mode = mode;
  table.kappa = kappa;
  table.min_ue_distance_frac = min_frac;
  table.n_samples = mode == InterferenceMode::Average ? n_samples : 0;
  table.seed = seed;
  table.entries.emplace(kOrigin, MomentEntry{1.0, 1.0, 0.0, 0.0});

  std::vector<Point2D> pool;
  if (mode == InterferenceMode::Average) {
    Rng rng = make_stream(seed, stream::kMomentsAverage);
    pool = draw_pool(n_samples, min_frac, rng);
  }

  double total = 1.0;
  for (int t = 1; t <= policy.max_tiers; ++t) {
    const auto cells = ring(t);
    const auto values = evaluate(cells, kappa, mode, pool);
    double increment = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      table.entries.emplace(cells[i], values[i]);
      increment += values[i].mu1;
    }
    total += increment;
    table.tiers = t;
    if (increment / total < policy.rel_tol) return table;
  }
  throw Error(ErrorCode::ConvergenceError,
              "tier " + std::to_string(policy.max_tiers) + " still adds more than " +
                  std::to_string(policy.rel_tol) + " of the interference sum (kappa = " +
                  std::to_string(kappa) + ")");
}

nlohmann::json to_json(const MomentTable& table) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [c, e] : table.entries) {
    entries.push_back({{"a1", c.a1}, {"a2", c.a2}, {"mu1", e.mu1}, {"mu2", e.mu2},
                       {"se1", e.se1}, {"se2", e.se2}});
  }
  return {
      {"format", "mmsched.moments"},
      {"version", MomentTable::kFormatVersion},
      {"mode", std::string(to_string(table.mode))},
      {"kappa", table.kappa},
      {"min_ue_distance_frac", table.min_ue_distance_frac},
      {"seed", table.seed},
      {"n_samples", table.n_samples},
      {"tiers", table.tiers},
      {"entries", std::move(entries)},
  };
}

MomentTable moment_table_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "mmsched.moments") {
      throw Error(ErrorCode::ParseError, "not a moment table file");
    }
    const int version = j.at("version").get<int>();
    if (version != MomentTable::kFormatVersion) {
      throw Error(ErrorCode::ParseError,
                  "unsupported moment table version " + std::to_string(version));
    }
    MomentTable t;
    t.mode = parse_mode(j.at("mode").get<std::string>());
    t.kappa = j.at("kappa").get<double>();
    t.min_ue_distance_frac = j.at("min_ue_distance_frac").get<double>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.n_samples = j.at("n_samples").get<std::int64_t>();
    t.tiers = j.at("tiers").get<int>();
    for (const auto& e : j.at("entries")) {
      t.entries.emplace(CellIndex{e.at("a1").get<int>(), e.at("a2").get<int>()},
                        MomentEntry{e.at("mu1").get<double>(), e.at("mu2").get<double>(),
                                    e.at("se1").get<double>(), e.at("se2").get<double>()});
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("malformed moment table: ") + ex.what());
  }
}

void save_moment_table(const MomentTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << to_json(table).dump(1) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

MomentTable load_moment_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + ex.what());
  }
  return moment_table_from_json(j);
}

}  // namespace mmsched
