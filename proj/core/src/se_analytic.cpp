#include "mmsched/se_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmsched/errors.hpp"

namespace mmsched {

namespace {

const CellIndex kOrigin{0, 0};

void check_inputs(const SinrInputs& in, bool pzfc) {
  if (in.moments == nullptr) throw Error(ErrorCode::DomainError, "SINR inputs lack a moment table");
  validate(in.config, {.pzfc = pzfc, .hex_grid = true});
  if (in.plan.n_users() != in.config.n_users || in.plan.reuse_factor() != in.config.reuse_factor) {
    throw Error(ErrorCode::DomainError, "pilot plan does not match the configuration's K and beta");
  }
  if (std::find(in.tier_set.begin(), in.tier_set.end(), kOrigin) == in.tier_set.end()) {
    throw Error(ErrorCode::DomainError, "tier set must contain the victim cell (0,0)");
  }
  for (CellIndex c : in.tier_set) {
    if (!in.moments->covers(c)) {
      throw Error(ErrorCode::NotFound, "moment table does not cover cell " + to_string(c));
    }
  }
}

InterferenceProfile profile_of(const SinrInputs& in) {
  return InterferenceProfile(*in.moments, in.tier_set, in.config.reuse_factor);
}

double reciprocal_or_infinite(double denominator) {
  return denominator > 0.0 ? 1.0 / denominator : kInfiniteSinr;
}

}  // namespace

SinrInputs make_inputs(const NetworkConfig& config, const MomentTable& moments, Scheme scheme) {
  SinrInputs in;
  in.config = config;
  in.moments = &moments;
  in.plan = PilotPlan(config.n_users, config.reuse_factor);
  in.tier_set = moments.offsets();
  in.scheme = scheme;
  return in;
}

InterferenceProfile::InterferenceProfile(const MomentTable& moments,
                                         std::span<const CellIndex> tier_set, int beta)
    : beta_(beta), group_mu1_(static_cast<std::size_t>(beta), 0.0) {
  shift_pair(beta);  // rejects unsupported reuse factors
  cells_.reserve(tier_set.size());
  for (CellIndex c : tier_set) {
    const MomentEntry& e = moments.at(c);
    const int g = reuse_group(c, beta);
    cells_.push_back({e.mu1, g});
    sum_mu1_ += e.mu1;
    group_mu1_[static_cast<std::size_t>(g)] += e.mu1;
    if (g == 0) {
      copilot_mu1_ += e.mu1;
      copilot_variance_ += e.mu2 - e.mu1 * e.mu1;
      if (c != kOrigin) copilot_mu2_excess_ += e.mu2;
    }
  }
}

double InterferenceProfile::zf_residual(int pilot_len, double noise_over_snr) const {
  const double b = pilot_len;
  double sum = 0.0;
  for (const Cell& c : cells_) {
    const double denom = b * group_mu1_[static_cast<std::size_t>(c.group)] + noise_over_snr;
    sum += c.mu1 * (1.0 - b * c.mu1 / denom);
  }
  return sum;
}

SinrTerms sinr_terms_mrc(const InterferenceProfile& p, int n_antennas, int n_users,
                         double noise_over_snr) {
  const double n = n_antennas;
  const double k = n_users;
  const double b = static_cast<double>(p.reuse_factor()) * n_users;
  const double s = noise_over_snr;
  const double c = (p.copilot_mu1() + s / b) / n;
  SinrTerms t;
  t.estimation_error = c;
  t.intra_cell = (k - 1.0) * c;
  t.inter_cell = k * (p.sum_mu1() - 1.0) * c + p.copilot_mu2_excess() + p.copilot_variance() / n;
  t.noise = s * c;
  return t;
}

SinrTerms sinr_terms_pzfc(const InterferenceProfile& p, int n_antennas, int n_users,
                          double noise_over_snr) {
  const int pilot_len = p.reuse_factor() * n_users;
  if (n_antennas <= pilot_len) {
    throw Error(ErrorCode::InsufficientAntennas,
                "P-ZFC needs N > B, got N = " + std::to_string(n_antennas) +
                    ", B = " + std::to_string(pilot_len));
  }
  const double k = n_users;
  const double b = pilot_len;
  const double s = noise_over_snr;
  const double dof = static_cast<double>(n_antennas - pilot_len);
  const double own_denominator = b * p.copilot_mu1() + s;
  const double c = (p.copilot_mu1() + s / b) / dof;
  const double own_residual = 1.0 - b / own_denominator;
  SinrTerms t;
  t.estimation_error = own_residual * c;
  t.intra_cell = (k - 1.0) * own_residual * c;
  // The own cell contributes K * own_residual to the residual sum; the rest is inter-cell.
  t.inter_cell = (k * p.zf_residual(pilot_len, s) - k * own_residual) * c +
                 p.copilot_mu2_excess() + p.copilot_variance() / dof;
  t.noise = s * c;
  return t;
}

double sinr_mrc(const InterferenceProfile& p, int n_antennas, int n_users, double noise_over_snr) {
  const double n = n_antennas;
  const double b = static_cast<double>(p.reuse_factor()) * n_users;
  const double s = noise_over_snr;
  const double c = (p.copilot_mu1() + s / b) / n;
  const double denom = c * (n_users * p.sum_mu1() + s) + p.copilot_mu2_excess() +
                       p.copilot_variance() / n;
  return reciprocal_or_infinite(denom);
}

double sinr_pzfc(const InterferenceProfile& p, int n_antennas, int n_users, double noise_over_snr) {
  const int pilot_len = p.reuse_factor() * n_users;
  if (n_antennas <= pilot_len) {
    throw Error(ErrorCode::InsufficientAntennas,
                "P-ZFC needs N > B, got N = " + std::to_string(n_antennas) +
                    ", B = " + std::to_string(pilot_len));
  }
  const double b = pilot_len;
  const double s = noise_over_snr;
  const double dof = static_cast<double>(n_antennas - pilot_len);
  const double c = (p.copilot_mu1() + s / b) / dof;
  const double residual = n_users * p.zf_residual(pilot_len, s);
  const double denom =
      c * (residual + s) + p.copilot_mu2_excess() + p.copilot_variance() / dof;
  return reciprocal_or_infinite(denom);
}

double asymptotic_sinr(const InterferenceProfile& p) {
  return reciprocal_or_infinite(p.copilot_mu2_excess());
}

double sinr_mrc(const SinrInputs& in) {
  check_inputs(in, false);
  return sinr_mrc(profile_of(in), in.config.n_antennas, in.config.n_users,
                  in.config.noise_over_snr());
}

double sinr_pzfc(const SinrInputs& in) {
  check_inputs(in, true);
  return sinr_pzfc(profile_of(in), in.config.n_antennas, in.config.n_users,
                   in.config.noise_over_snr());
}

double sinr(const SinrInputs& in) {
  switch (in.scheme) {
    case Scheme::Mrc: return sinr_mrc(in);
    case Scheme::Pzfc: return sinr_pzfc(in);
    case Scheme::Asymptotic:
      check_inputs(in, false);
      return asymptotic_sinr(profile_of(in));
  }
  return 0.0;
}

SinrTerms sinr_terms(const SinrInputs& in) {
  const bool pzfc = in.scheme == Scheme::Pzfc;
  if (in.scheme == Scheme::Asymptotic) {
    throw Error(ErrorCode::DomainError, "per-term breakdown needs a finite-N scheme");
  }
  check_inputs(in, pzfc);
  const auto p = profile_of(in);
  const int n = in.config.n_antennas;
  const int k = in.config.n_users;
  const double s = in.config.noise_over_snr();
  return pzfc ? sinr_terms_pzfc(p, n, k, s) : sinr_terms_mrc(p, n, k, s);
}

double se_from_sinr(int n_users, int pilot_len, int coherence_block, double sinr) {
  const double prelog = 1.0 - static_cast<double>(pilot_len) / coherence_block;
  if (prelog <= 0.0) return 0.0;
  return n_users * prelog * std::log2(1.0 + sinr);
}

SeResult se_per_cell(const SinrInputs& in) {
  SeResult r;
  r.sinr = sinr(in);
  r.prelog = in.config.prelog();
  r.se_per_cell = se_from_sinr(in.config.n_users, in.config.pilot_length(),
                               in.config.coherence_block, r.sinr);
  return r;
}

double asymptotic_sinr(const MomentTable& moments, const PilotPlan& plan,
                       std::span<const CellIndex> tier_set) {
  return asymptotic_sinr(InterferenceProfile(moments, tier_set, plan.reuse_factor()));
}

double sinr_mrc_generic(const SinrInputs& in) {
  check_inputs(in, false);
  const MomentTable& mu = *in.moments;
  const int n_users = in.config.n_users;
  const double n = in.config.n_antennas;
  const double s = in.config.noise_over_snr();
  const int b = in.plan.pilot_len();
  const int victim_pilot = in.plan.pilot_of(kOrigin, 1);

  double load = 0.0;
  for (CellIndex l : in.tier_set) load += mu.at(l).mu1 * n_users / n;
  load += s / n;

  double contamination = 0.0;
  double second_order = 0.0;
  for (CellIndex l : in.tier_set) {
    const MomentEntry& e = mu.at(l);
    for (int m = 1; m <= n_users; ++m) {
      const double ip = inner_product(victim_pilot, in.plan.pilot_of(l, m), b);
      contamination += e.mu1 * ip;
      second_order += (e.mu2 + (e.mu2 - e.mu1 * e.mu1) / n) * ip;
    }
  }
  const double denom = load * (contamination + s) + second_order - b;
  return denom > 0.0 ? b / denom : kInfiniteSinr;
}

double sinr_pzfc_generic(const SinrInputs& in) {
  check_inputs(in, true);
  const MomentTable& mu = *in.moments;
  const int n_users = in.config.n_users;
  const double s = in.config.noise_over_snr();
  const int b = in.plan.pilot_len();
  const double dof = static_cast<double>(in.config.n_antennas - b);
  const int victim_pilot = in.plan.pilot_of(kOrigin, 1);

  double second_order = 0.0;
  double victim_contamination = 0.0;
  double residual = 0.0;
  for (CellIndex l : in.tier_set) {
    const MomentEntry& e = mu.at(l);
    for (int m = 1; m <= n_users; ++m) {
      const int pilot = in.plan.pilot_of(l, m);
      const double ip = inner_product(victim_pilot, pilot, b);
      second_order += (e.mu2 + (e.mu2 - e.mu1 * e.mu1) / dof) * ip;
      victim_contamination += e.mu1 * ip;

      double own_contamination = 0.0;
      for (CellIndex ell : in.tier_set) {
        const double mu1 = mu.at(ell).mu1;
        for (int mt = 1; mt <= n_users; ++mt) {
          own_contamination += mu1 * inner_product(pilot, in.plan.pilot_of(ell, mt), b);
        }
      }
      residual += e.mu1 * (1.0 - b * e.mu1 / (own_contamination + s));
    }
  }
  const double denom = second_order + (residual + s) * ((victim_contamination + s) / dof) - b;
  return denom > 0.0 ? b / denom : kInfiniteSinr;
}

double asymptotic_sinr_generic(const SinrInputs& in) {
  check_inputs(in, false);
  const int b = in.plan.pilot_len();
  const int victim_pilot = in.plan.pilot_of(kOrigin, 1);
  double sum = 0.0;
  for (CellIndex l : in.tier_set) {
    const double mu2 = in.moments->at(l).mu2;
    for (int m = 1; m <= in.config.n_users; ++m) {
      sum += mu2 * inner_product(victim_pilot, in.plan.pilot_of(l, m), b);
    }
  }
  const double denom = sum - b;
  return denom > 0.0 ? b / denom : kInfiniteSinr;
}

std::vector<int> kstar_asymptotic(int coherence_block, int beta) {
  if (beta < 1 || coherence_block < 2 * beta) {
    throw Error(ErrorCode::DomainError, "K* needs T >= 2 beta");
  }
  const int lo = coherence_block / (2 * beta);
  const int hi = (coherence_block + 2 * beta - 1) / (2 * beta);
  // K (T - K beta) is T times the pre-log objective; integers keep ties exact.
  auto objective = [&](long long k) { return k * (coherence_block - k * beta); };
  if (lo == hi) return {lo};
  const long long a = objective(lo);
  const long long c = objective(hi);
  if (a == c) return {lo, hi};
  return {a > c ? lo : hi};
}

double optimized_asymptotic_se(int coherence_block, int beta, double sinr) {
  return static_cast<double>(coherence_block) / (4.0 * beta) * std::log2(1.0 + sinr);
}

}  // namespace mmsched
