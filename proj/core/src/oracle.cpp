#include "mmsched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "mmsched/errors.hpp"
#include "mmsched/moments.hpp"
#include "mmsched/parallel.hpp"

namespace mmsched {

namespace {

using cd = std::complex<double>;

double pathloss(const NetworkConfig& c, Point2D z, Point2D bs) {
  return c.pathloss_ref / std::pow(distance(z, bs), c.pathloss_exponent);
}

std::size_t victim_user(const OracleSetup& setup, const std::vector<UserEquipment>& ues, int k) {
  for (std::size_t u = 0; u < ues.size(); ++u) {
    if (ues[u].cell == setup.victim && ues[u].k == k) return u;
  }
  throw Error(ErrorCode::NotFound, "victim cell is not part of the oracle setup");
}

// Sums gathered over one batch of realizations. The signal is averaged as a
// complex number; everything else as powers.
struct SinrAccumulator {
  CompensatedSum signal_re, signal_im, own_power, intra, inter, gain_norm;
  std::int64_t count = 0;

  void add(cd signal, double own, double intra_power, double inter_power, double norm2) {
    signal_re.add(signal.real());
    signal_im.add(signal.imag());
    own_power.add(own);
    intra.add(intra_power);
    inter.add(inter_power);
    gain_norm.add(norm2);
    ++count;
  }

  void merge(const SinrAccumulator& o) {
    signal_re.add(o.signal_re.value());
    signal_im.add(o.signal_im.value());
    own_power.add(o.own_power.value());
    intra.add(o.intra.value());
    inter.add(o.inter.value());
    gain_norm.add(o.gain_norm.value());
    count += o.count;
  }

  SinrTerms terms() const {
    const double n = static_cast<double>(count);
    const cd mean_signal{signal_re.value() / n, signal_im.value() / n};
    const double coherent = std::norm(mean_signal);
    SinrTerms t;
    t.estimation_error = (own_power.value() / n - coherent) / coherent;
    t.intra_cell = intra.value() / n / coherent;
    t.inter_cell = inter.value() / n / coherent;
    t.noise = gain_norm.value() / n / coherent;  // sigma^2 = 1
    return t;
  }
};

}  // namespace

OracleSetup make_cluster(const NetworkConfig& config, int tiers, InterferenceMode mode) {
  OracleSetup setup;
  setup.config = config;
  setup.victim = {0, 0};
  setup.cells = cells_within(tiers);
  setup.mode = mode;
  return setup;
}

Eigen::MatrixXcd dft_pilot_book(int pilot_len) {
  if (pilot_len < 1) throw Error(ErrorCode::DomainError, "pilot length must be positive");
  Eigen::MatrixXcd v(pilot_len, pilot_len);
  for (int t = 0; t < pilot_len; ++t) {
    for (int i = 0; i < pilot_len; ++i) {
      // Reduce the phase index first so large books stay exactly unit-modulus.
      const long long idx = (static_cast<long long>(t) * i) % pilot_len;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(idx) / pilot_len;
      v(t, i) = std::polar(1.0, phase);
    }
  }
  return v;
}

std::vector<UserEquipment> sample_users(const OracleSetup& setup, Rng& rng) {
  const NetworkConfig& c = setup.config;
  const PilotPlan plan = setup.plan();
  const Point2D victim_bs = bs_position(setup.victim, c.cell_radius);
  std::vector<UserEquipment> ues;
  ues.reserve(setup.cells.size() * static_cast<std::size_t>(c.n_users));
  for (CellIndex cell : setup.cells) {
    const Point2D own_bs = bs_position(cell, c.cell_radius);
    for (int k = 1; k <= c.n_users; ++k) {
      UserEquipment ue;
      ue.cell = cell;
      ue.k = k;
      ue.pilot = plan.pilot_of(cell, k);
      if (setup.mode == InterferenceMode::WorstCase && cell != setup.victim) {
        ue.position = worst_case_position(cell, setup.victim, c.cell_radius);
      } else {
        ue.position = sample_ue_position(cell, c.cell_radius, c.min_ue_distance_frac, rng);
      }
      ue.victim_gain = pathloss(c, ue.position, victim_bs);
      ue.own_gain = pathloss(c, ue.position, own_bs);
      ue.power = c.snr_linear / ue.own_gain;
      ues.push_back(ue);
    }
  }
  return ues;
}

Realization draw_realization(const OracleSetup& setup, std::vector<UserEquipment> ues, Rng& rng) {
  const int n = setup.config.n_antennas;
  const int b = setup.plan().pilot_len();
  ComplexNormal cn;
  Realization r;
  r.ues = std::move(ues);
  r.pilots = dft_pilot_book(b);
  r.channels.reserve(r.ues.size());
  for (const UserEquipment& ue : r.ues) {
    Eigen::VectorXcd h(n);
    for (int a = 0; a < n; ++a) h(a) = cn(rng, ue.victim_gain);
    r.channels.push_back(std::move(h));
  }
  r.noise.resize(n, b);
  for (int t = 0; t < b; ++t) {
    for (int a = 0; a < n; ++a) r.noise(a, t) = cn(rng, 1.0);
  }
  r.received = r.noise;
  for (std::size_t u = 0; u < r.ues.size(); ++u) {
    r.received.noalias() +=
        r.effective_channel(u) * r.pilots.col(r.ues[u].pilot - 1).adjoint();
  }
  return r;
}

Realization generate(const OracleSetup& setup, Rng& rng) {
  validate(setup.config);
  auto ues = sample_users(setup, rng);
  return draw_realization(setup, std::move(ues), rng);
}

EstimationOutput estimate_channels(const OracleSetup& setup, const Realization& r) {
  const int b = static_cast<int>(r.pilots.cols());
  const double s = setup.config.noise_over_snr();
  const double rho = setup.config.snr_linear;

  EstimationOutput out;
  Eigen::VectorXd contamination = Eigen::VectorXd::Zero(b);
  out.psi = Eigen::MatrixXcd::Identity(b, b) * s;
  for (const UserEquipment& ue : r.ues) {
    contamination(ue.pilot - 1) += ue.gain_ratio();
    const auto v = r.pilots.col(ue.pilot - 1);
    out.psi.noalias() += ue.gain_ratio() * v * v.adjoint();
  }
  out.pilot_denominators = contamination * static_cast<double>(b);
  out.pilot_denominators.array() += s;

  out.h_hat_book = r.received * r.pilots;
  for (int i = 0; i < b; ++i) out.h_hat_book.col(i) /= out.pilot_denominators(i);

  out.h_hat.reserve(r.ues.size());
  out.error_scale.reserve(r.ues.size());
  for (const UserEquipment& ue : r.ues) {
    const double ratio = ue.gain_ratio();
    const double denom = out.pilot_denominators(ue.pilot - 1);
    out.h_hat.push_back(ratio * out.h_hat_book.col(ue.pilot - 1));
    out.error_scale.push_back(rho * ratio * (1.0 - ratio * b / denom));
  }
  return out;
}

Eigen::VectorXcd lmmse_estimate(const OracleSetup& setup, const Realization& r, std::size_t ue) {
  if (ue >= r.ues.size()) throw Error(ErrorCode::IndexError, "UE index out of range");
  return estimate_channels(setup, r).h_hat[ue];
}

Eigen::VectorXcd lmmse_estimate_kronecker(const OracleSetup& setup, const Realization& r,
                                          std::size_t ue) {
  if (ue >= r.ues.size()) throw Error(ErrorCode::IndexError, "UE index out of range");
  const int n = static_cast<int>(r.received.rows());
  const int b = static_cast<int>(r.pilots.cols());
  const double rho = setup.config.snr_linear;
  const int dim = n * b;

  // vec(h v^H) = (conj(v) kron I_N) h
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Identity(dim, dim);  // noise, sigma^2 = 1
  for (const UserEquipment& u : r.ues) {
    const Eigen::VectorXcd w = r.pilots.col(u.pilot - 1).conjugate();
    const Eigen::MatrixXcd outer = w * w.adjoint();
    const double scale = rho * u.gain_ratio();
    for (int p = 0; p < b; ++p) {
      for (int q = 0; q < b; ++q) {
        cov.block(p * n, q * n, n, n).diagonal().array() += scale * outer(p, q);
      }
    }
  }
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(n, dim);
  const auto& target = r.ues[ue];
  const Eigen::VectorXcd v = r.pilots.col(target.pilot - 1);
  for (int p = 0; p < b; ++p) {
    cross.block(0, p * n, n, n).diagonal().setConstant(rho * target.gain_ratio() * v(p));
  }
  const Eigen::VectorXcd y = r.received.reshaped();
  return cross * cov.ldlt().solve(y);
}

Eigen::VectorXcd combine(const EstimationOutput& est, Scheme scheme, int pilot) {
  const int b = static_cast<int>(est.h_hat_book.cols());
  if (pilot < 1 || pilot > b) throw Error(ErrorCode::IndexError, "pilot index out of range");
  if (scheme == Scheme::Mrc) return est.h_hat_book.col(pilot - 1);
  if (scheme != Scheme::Pzfc) {
    throw Error(ErrorCode::DomainError, "combining needs a finite-N scheme");
  }
  const Eigen::MatrixXcd gram = est.h_hat_book.adjoint() * est.h_hat_book;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw Error(ErrorCode::RankDeficient, "estimate book Gram matrix is numerically singular");
  }
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(b);
  e(pilot - 1) = 1.0;
  return est.h_hat_book * gram.ldlt().solve(e);
}

MeasuredSinr measure_sinr(const OracleSetup& setup, Scheme scheme, std::int64_t n_realizations,
                          std::uint64_t seed) {
  validate(setup.config, {.pzfc = scheme == Scheme::Pzfc, .hex_grid = true});
  if (scheme == Scheme::Asymptotic) {
    throw Error(ErrorCode::DomainError, "the oracle measures finite-N schemes only");
  }
  if (n_realizations < 2) throw Error(ErrorCode::DomainError, "need at least two realizations");
  if (std::find(setup.cells.begin(), setup.cells.end(), setup.victim) == setup.cells.end()) {
    throw Error(ErrorCode::DomainError, "victim cell is not part of the oracle setup");
  }

  const int n_users = setup.config.n_users;
  const std::int64_t batches = std::min<std::int64_t>(n_realizations, 100);
  std::vector<SinrAccumulator> scaled(static_cast<std::size_t>(batches));
  std::vector<SinrAccumulator> literal(static_cast<std::size_t>(batches));

  parallel_for(static_cast<std::size_t>(batches), [&](std::size_t batch) {
    const std::int64_t lo = n_realizations * static_cast<std::int64_t>(batch) / batches;
    const std::int64_t hi = n_realizations * static_cast<std::int64_t>(batch + 1) / batches;
    Rng rng = make_stream(seed, stream::kOracleBase + batch);
    for (std::int64_t it = lo; it < hi; ++it) {
      const Realization r = draw_realization(setup, sample_users(setup, rng), rng);
      const EstimationOutput est = estimate_channels(setup, r);
      std::vector<Eigen::VectorXcd> eff;
      eff.reserve(r.ues.size());
      for (std::size_t u = 0; u < r.ues.size(); ++u) eff.push_back(r.effective_channel(u));

      for (int k = 1; k <= n_users; ++k) {
        const std::size_t self = victim_user(setup, r.ues, k);
        const int pilot = r.ues[self].pilot;
        Eigen::VectorXcd g = combine(est, scheme, pilot);
        // Literal MRC divides by the pilot denominator; undo it for unit gain.
        const double scale = scheme == Scheme::Mrc ? est.pilot_denominators(pilot - 1) : 1.0;
        g *= scale;

        cd signal{};
        double own = 0.0, intra = 0.0, inter = 0.0;
        for (std::size_t u = 0; u < r.ues.size(); ++u) {
          const cd ip = g.dot(eff[u]);  // g^H h
          const double p = std::norm(ip);
          if (u == self) {
            signal = ip;
            own = p;
          } else if (r.ues[u].cell == setup.victim) {
            intra += p;
          } else {
            inter += p;
          }
        }
        const double norm2 = g.squaredNorm();
        scaled[batch].add(signal, own, intra, inter, norm2);
        if (scheme == Scheme::Mrc) {
          const double inv = 1.0 / scale;
          literal[batch].add(signal * inv, own * inv * inv, intra * inv * inv,
                             inter * inv * inv, norm2 * inv * inv);
        }
      }
    }
  });

  SinrAccumulator total, total_literal;
  std::vector<double> batch_sinr;
  batch_sinr.reserve(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    total.merge(scaled[i]);
    total_literal.merge(literal[i]);
    batch_sinr.push_back(scaled[i].terms().sinr());
  }

  MeasuredSinr out;
  out.terms = total.terms();
  out.sinr = out.terms.sinr();
  out.realizations = n_realizations;
  if (scheme == Scheme::Mrc) out.literal_mrc_sinr = total_literal.terms().sinr();

  double mean = 0.0;
  for (double v : batch_sinr) mean += v;
  mean /= static_cast<double>(batch_sinr.size());
  double var = 0.0;
  for (double v : batch_sinr) var += (v - mean) * (v - mean);
  const double nb = static_cast<double>(batch_sinr.size());
  out.standard_error = nb > 1 ? std::sqrt(var / (nb - 1.0) / nb) : 0.0;
  return out;
}

EstimationMseCheck check_estimation_mse(const OracleSetup& setup, std::size_t ue,
                                        std::int64_t n_realizations, std::uint64_t seed) {
  validate(setup.config);
  if (n_realizations < 2) throw Error(ErrorCode::DomainError, "need at least two realizations");
  Rng rng = make_stream(seed, stream::kOracleBase);
  const auto users = sample_users(setup, rng);
  if (ue >= users.size()) throw Error(ErrorCode::IndexError, "UE index out of range");

  EstimationMseCheck out;
  out.ue = ue;
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < n_realizations; ++i) {
    const Realization r = draw_realization(setup, users, rng);
    const EstimationOutput est = estimate_channels(setup, r);
    if (i == 0) out.predicted_mse = setup.config.n_antennas * est.error_scale[ue];
    const double err = (r.effective_channel(ue) - est.h_hat[ue]).squaredNorm();
    const double d = err - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (err - mean);
  }
  out.empirical_mse = mean;
  out.standard_error =
      std::sqrt(m2 / static_cast<double>(n_realizations - 1) / static_cast<double>(n_realizations));
  return out;
}

FixtureReport run_fixture(const OracleFixture& fixture, std::uint64_t seed) {
  FixtureReport report;
  report.fixture = fixture;
  const OracleSetup setup = make_cluster(fixture.config, fixture.tiers, fixture.mode);

  const auto offsets = cells_within(fixture.tiers);
  const MomentTable moments =
      build_table_for(offsets, fixture.config.pathloss_exponent, fixture.mode,
                      fixture.moment_samples, splitmix64(seed ^ 0x6d6f6d656e7473ULL),
                      fixture.config.min_ue_distance_frac);
  SinrInputs in = make_inputs(fixture.config, moments, fixture.scheme);
  report.analytic_sinr = sinr(in);
  report.analytic_terms = sinr_terms(in);
  in.scheme = Scheme::Asymptotic;
  report.asymptotic_sinr = sinr(in);

  report.measured = measure_sinr(setup, fixture.scheme, fixture.n_realizations, seed);
  report.rel_gap = report.measured.sinr / report.analytic_sinr - 1.0;
  if (fixture.max_sigmas > 0.0) {
    report.pass = std::abs(report.measured.sinr - report.analytic_sinr) <=
                  fixture.max_sigmas * report.measured.standard_error;
  } else {
    report.pass = std::abs(report.rel_gap) <= fixture.rel_tolerance;
  }
  return report;
}

std::vector<OracleFixture> default_fixtures(double snr_linear) {
  NetworkConfig single;
  single.n_antennas = 50;
  single.n_users = 1;
  single.reuse_factor = 1;
  single.snr_linear = snr_linear;

  NetworkConfig cluster = single;
  cluster.n_antennas = 64;
  cluster.n_users = 2;

  std::vector<OracleFixture> out;
  out.push_back({.name = "single_cell_mrc_n50", .config = single, .tiers = 0,
                 .scheme = Scheme::Mrc, .n_realizations = 20000, .max_sigmas = 3.0});
  out.push_back({.name = "cluster7_mrc_n64", .config = cluster, .tiers = 1,
                 .scheme = Scheme::Mrc, .n_realizations = 100000});
  NetworkConfig large = cluster;
  large.n_antennas = 512;
  out.push_back({.name = "cluster7_mrc_n512", .config = large, .tiers = 1,
                 .scheme = Scheme::Mrc, .n_realizations = 20000});
  out.push_back({.name = "cluster7_pzfc_n64", .config = cluster, .tiers = 1,
                 .scheme = Scheme::Pzfc, .n_realizations = 100000});
  out.push_back({.name = "cluster7_mrc_worst_n64", .config = cluster, .tiers = 1,
                 .mode = InterferenceMode::WorstCase, .scheme = Scheme::Mrc,
                 .n_realizations = 20000});
  out.push_back({.name = "cluster7_pzfc_worst_n64", .config = cluster, .tiers = 1,
                 .mode = InterferenceMode::WorstCase, .scheme = Scheme::Pzfc,
                 .n_realizations = 20000});
  return out;
}

nlohmann::json to_json(const SinrTerms& t) {
  return {{"estimation_error", t.estimation_error},
          {"intra_cell", t.intra_cell},
          {"inter_cell", t.inter_cell},
          {"noise", t.noise},
          {"total", t.total()}};
}

nlohmann::json to_json(const FixtureReport& r) {
  const OracleFixture& f = r.fixture;
  nlohmann::json j{
      {"name", f.name},
      {"scheme", std::string(to_string(f.scheme))},
      {"mode", std::string(to_string(f.mode))},
      {"n_antennas", f.config.n_antennas},
      {"n_users", f.config.n_users},
      {"reuse_factor", f.config.reuse_factor},
      {"snr_linear", f.config.snr_linear},
      {"tiers", f.tiers},
      {"n_realizations", f.n_realizations},
      {"moment_samples", f.moment_samples},
      {"measured_sinr", r.measured.sinr},
      {"standard_error", r.measured.standard_error},
      {"analytic_sinr", r.analytic_sinr},
      {"asymptotic_sinr", r.asymptotic_sinr},
      {"rel_gap", r.rel_gap},
      {"rel_tolerance", f.rel_tolerance},
      {"max_sigmas", f.max_sigmas},
      {"pass", r.pass},
      {"terms_measured", to_json(r.measured.terms)},
      {"terms_analytic", to_json(r.analytic_terms)},
  };
  if (f.scheme == Scheme::Mrc) j["measured_sinr_unscaled_mrc"] = r.measured.literal_mrc_sinr;
  return j;
}

}  // namespace mmsched
