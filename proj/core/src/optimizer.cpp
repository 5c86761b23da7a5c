#include "mmsched/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "mmsched/parallel.hpp"
#include "mmsched/se_analytic.hpp"

namespace mmsched {

namespace {

struct Slice {
  InterferenceMode mode;
  Scheme scheme;
  int n_antennas;
};

struct SliceOutput {
  std::vector<SweepRow> rows;
  std::vector<SkippedPoint> skipped;
};

bool better(const SweepRow& a, const SweepRow& b) {
  if (a.se != b.se) return a.se > b.se;
  if (a.n_users != b.n_users) return a.n_users < b.n_users;
  return a.reuse_factor < b.reuse_factor;
}

}  // namespace

SweepResult sweep(const NetworkConfig& config_template, const SweepSpec& spec,
                  const MomentTables& moments) {
  validate(config_template, {.pzfc = false, .hex_grid = true});
  if (spec.n_grid.empty() || spec.betas.empty() || spec.schemes.empty() || spec.modes.empty()) {
    throw Error(ErrorCode::DomainError, "sweep grids must be nonempty");
  }
  for (int n : spec.n_grid) {
    if (n < 1) throw Error(ErrorCode::DomainError, "antenna counts must be positive");
  }
  for (int beta : spec.betas) shift_pair(beta);

  const int t = config_template.coherence_block;
  const double s = config_template.noise_over_snr();

  // One collapsed profile per (mode, beta), shared by every slice.
  std::map<std::pair<InterferenceMode, int>, InterferenceProfile> profiles;
  for (InterferenceMode mode : spec.modes) {
    auto it = moments.find(mode);
    if (it == moments.end()) {
      throw Error(ErrorCode::NotFound,
                  "no moment table for mode " + std::string(to_string(mode)));
    }
    const auto offsets = it->second.offsets();
    for (int beta : spec.betas) {
      profiles.emplace(std::pair{mode, beta}, InterferenceProfile(it->second, offsets, beta));
    }
  }

  std::vector<Slice> slices;
  for (InterferenceMode mode : spec.modes) {
    for (Scheme scheme : spec.schemes) {
      for (int n : spec.n_grid) slices.push_back({mode, scheme, n});
    }
  }

  std::vector<SliceOutput> outputs(slices.size());
  parallel_for(slices.size(), [&](std::size_t idx) {
    const Slice& sl = slices[idx];
    SliceOutput& out = outputs[idx];
    for (int beta : spec.betas) {
      const InterferenceProfile& profile = profiles.at({sl.mode, beta});
      int k_hi = t / beta;
      if (spec.k_max > 0) k_hi = std::min(k_hi, spec.k_max);
      for (int k = 1; k <= k_hi; ++k) {
        const int b = beta * k;
        double sinr_value = 0.0;
        switch (sl.scheme) {
          case Scheme::Mrc: sinr_value = sinr_mrc(profile, sl.n_antennas, k, s); break;
          case Scheme::Pzfc:
            if (sl.n_antennas <= b) {
              out.skipped.push_back({sl.n_antennas, k, beta, sl.scheme, sl.mode,
                                     ErrorCode::InsufficientAntennas});
              continue;
            }
            sinr_value = sinr_pzfc(profile, sl.n_antennas, k, s);
            break;
          case Scheme::Asymptotic: sinr_value = asymptotic_sinr(profile); break;
        }
        out.rows.push_back({sl.n_antennas, k, beta, sl.scheme, sl.mode, sinr_value,
                            se_from_sinr(k, b, t, sinr_value)});
      }
    }
  });

  SweepResult result;
  for (std::size_t idx = 0; idx < slices.size(); ++idx) {
    const Slice& sl = slices[idx];
    auto& out = outputs[idx];
    if (out.rows.empty()) {
      throw Error(ErrorCode::EmptyFeasibleSet,
                  "no feasible (K, beta) for N = " + std::to_string(sl.n_antennas) + ", " +
                      std::string(to_string(sl.scheme)) + ", " + std::string(to_string(sl.mode)));
    }
    const std::size_t base = result.rows.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
      if (better(out.rows[i], out.rows[best])) best = i;
    }
    const SweepRow& row = out.rows[best];
    result.optima.push_back({sl.n_antennas, sl.scheme, sl.mode, row.n_users, row.reuse_factor,
                             row.se, row.sinr, base + best});
    result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
    result.skipped.insert(result.skipped.end(), out.skipped.begin(), out.skipped.end());
  }
  return result;
}

Optimum optimal_schedule(const SweepResult& result, int n_antennas, Scheme scheme,
                         InterferenceMode mode) {
  for (const Optimum& o : result.optima) {
    if (o.n_antennas == n_antennas && o.scheme == scheme && o.mode == mode) return o;
  }
  throw Error(ErrorCode::NotFound, "no optimum for N = " + std::to_string(n_antennas) + ", " +
                                       std::string(to_string(scheme)) + ", " +
                                       std::string(to_string(mode)));
}

std::vector<int> log_spaced_grid(int lo, int hi, int points) {
  if (lo < 1 || hi < lo || points < 1) {
    throw Error(ErrorCode::DomainError, "log grid needs 1 <= lo <= hi and points >= 1");
  }
  std::vector<int> out;
  if (points == 1 || lo == hi) {
    out.push_back(lo);
    if (hi != lo) out.push_back(hi);
    return out;
  }
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (int i = 0; i < points; ++i) {
    const double v = std::exp(a + (b - a) * i / (points - 1));
    out.push_back(static_cast<int>(std::lround(v)));
  }
  out.front() = lo;
  out.back() = hi;
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AsymptoticRow> asymptotic_table(int coherence_block, const std::vector<int>& betas,
                                            const MomentTables& moments) {
  std::vector<AsymptoticRow> rows;
  for (const auto& [mode, table] : moments) {
    const auto offsets = table.offsets();
    for (int beta : betas) {
      const InterferenceProfile profile(table, offsets, beta);
      AsymptoticRow row;
      row.mode = mode;
      row.reuse_factor = beta;
      row.k_star = kstar_asymptotic(coherence_block, beta);
      row.prelog = static_cast<double>(coherence_block) / (4.0 * beta);
      row.sinr = asymptotic_sinr(profile);
      row.se = optimized_asymptotic_se(coherence_block, beta, row.sinr);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "N,K,beta,scheme,mode,sinr,se\n";
  for (const SweepRow& r : result.rows) {
    out << r.n_antennas << ',' << r.n_users << ',' << r.reuse_factor << ','
        << to_string(r.scheme) << ',' << to_string(r.mode) << ',' << format_number(r.sinr)
        << ',' << format_number(r.se) << '\n';
  }
}

void write_optima_csv(std::ostream& out, const SweepResult& result) {
  out << "N,scheme,mode,K_star,beta_star,se_star,sinr,se_per_user\n";
  for (const Optimum& o : result.optima) {
    out << o.n_antennas << ',' << to_string(o.scheme) << ',' << to_string(o.mode) << ','
        << o.k_star << ',' << o.beta_star << ',' << format_number(o.se_star) << ','
        << format_number(o.sinr) << ',' << format_number(o.se_star / o.k_star) << '\n';
  }
}

void write_asymptotic_csv(std::ostream& out, const std::vector<AsymptoticRow>& rows) {
  out << "mode,beta,K_star,prelog,sinr,se\n";
  for (const AsymptoticRow& r : rows) {
    std::string ks;
    for (std::size_t i = 0; i < r.k_star.size(); ++i) {
      if (i) ks += ';';
      ks += std::to_string(r.k_star[i]);
    }
    out << to_string(r.mode) << ',' << r.reuse_factor << ',' << ks << ','
        << format_number(r.prelog) << ',' << format_number(r.sinr) << ','
        << format_number(r.se) << '\n';
  }
}

}  // namespace mmsched
