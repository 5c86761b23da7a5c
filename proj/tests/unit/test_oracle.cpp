#include <doctest.h>

#include <cmath>

#include "mmsched/errors.hpp"
#include "mmsched/oracle.hpp"

using namespace mmsched;

namespace {

OracleSetup cluster(int n, int k, int beta, InterferenceMode mode = InterferenceMode::Average) {
  NetworkConfig c;
  c.n_antennas = n;
  c.n_users = k;
  c.reuse_factor = beta;
  return make_cluster(c, 1, mode);
}

}  // namespace

TEST_CASE("DFT pilot book is orthogonal") {
  for (int b : {1, 2, 7, 30}) {
    const Eigen::MatrixXcd v = dft_pilot_book(b);
    const Eigen::MatrixXcd g = v.adjoint() * v;
    CHECK((g - b * Eigen::MatrixXcd::Identity(b, b)).cwiseAbs().maxCoeff() < 1e-12 * b);
    CHECK((v.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("power control and noise statistics") {
  const OracleSetup s = cluster(16, 2, 1);
  Rng rng = make_stream(5, 0);
  const int n = 10000;
  double sum = 0, sum2 = 0, nsum = 0, nsum2 = 0;
  for (int i = 0; i < n; ++i) {
    const Realization r = generate(s, rng);
    const double g = r.effective_channel(0).squaredNorm();  // victim-cell UE
    sum += g;
    sum2 += g * g;
    const double e = std::norm(r.noise(i % 16, 0));
    nsum += e;
    nsum2 += e * e;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 16 * 10.0) < 3 * se);
  const double nmean = nsum / n, nse = std::sqrt((nsum2 / n - nmean * nmean) / n);
  CHECK(std::abs(nmean - 1.0) < 3 * nse);
}

TEST_CASE("worst-case mode pins interferers to the cell edge") {
  const OracleSetup s = cluster(8, 2, 1, InterferenceMode::WorstCase);
  Rng rng = make_stream(6, 0);
  for (const UserEquipment& ue : sample_users(s, rng)) {
    if (ue.cell == s.victim) {
      CHECK(ue.gain_ratio() == 1.0);
    } else {
      const Point2D w = worst_case_position(ue.cell, s.victim, 1.0);
      CHECK(ue.position == w);
    }
  }
}

TEST_CASE("scalar LMMSE estimate matches the full covariance form") {
  const OracleSetup s = cluster(4, 2, 1);
  Rng rng = make_stream(8, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Realization r = generate(s, rng);
    for (std::size_t u = 0; u < r.ues.size(); ++u) {
      const Eigen::VectorXcd a = lmmse_estimate(s, r, u);
      const Eigen::VectorXcd b = lmmse_estimate_kronecker(s, r, u);
      CHECK((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
    }
  }
}

TEST_CASE("estimation error covariance") {
  for (int trial = 0; trial < 3; ++trial) {
    const OracleSetup s = cluster(8, 2, trial == 2 ? 3 : 1);
    const auto check = check_estimation_mse(s, 3 * trial + 1, 4000, 100 + trial);
    CHECK(check.predicted_mse >= 0.0);
    CHECK(std::abs(check.empirical_mse - check.predicted_mse) < 3 * check.standard_error);
  }
}

TEST_CASE("orthogonality of estimate and error") {
  const OracleSetup s = cluster(4, 1, 1);
  Rng rng = make_stream(9, 0);
  const auto users = sample_users(s, rng);
  const int n = 20000;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  double scale = 0;
  for (int i = 0; i < n; ++i) {
    const Realization r = draw_realization(s, users, rng);
    const Eigen::VectorXcd h = lmmse_estimate(s, r, 0);
    const Eigen::VectorXcd e = r.effective_channel(0) - h;
    acc += h * e.adjoint();
    scale += h.squaredNorm() * e.squaredNorm() / 16;
  }
  acc /= n;
  const double se = std::sqrt(scale / n / n);
  CHECK(acc.cwiseAbs().maxCoeff() < 5 * se);
}

TEST_CASE("noiseless single UE is estimated exactly") {
  NetworkConfig c;
  c.n_antennas = 8;
  c.n_users = 1;
  c.snr_linear = 1e12;
  const OracleSetup s = make_cluster(c, 0, InterferenceMode::Average);
  Rng rng = make_stream(10, 0);
  const Realization r = generate(s, rng);
  const Eigen::VectorXcd h = r.effective_channel(0);
  // Unit noise against rho = 1e12 leaves a relative error near 1e-6.
  CHECK((lmmse_estimate(s, r, 0) - h).norm() < 1e-5 * h.norm());
}

TEST_CASE("estimator linearity and pilot contamination") {
  const OracleSetup s = cluster(6, 2, 1);
  Rng rng = make_stream(11, 0);
  Realization r = generate(s, rng);
  const EstimationOutput est = estimate_channels(s, r);
  for (std::size_t u = 0; u < r.ues.size(); ++u) {
    for (std::size_t v = 0; v < r.ues.size(); ++v) {
      if (r.ues[u].pilot != r.ues[v].pilot) continue;
      const double factor = r.ues[u].gain_ratio() / r.ues[v].gain_ratio();
      CHECK((est.h_hat[u] - factor * est.h_hat[v]).norm() <= 1e-12 * est.h_hat[u].norm());
    }
    CHECK(est.error_scale[u] >= 0.0);
  }
  const std::complex<double> c{0.3, -1.7};
  const Eigen::VectorXcd before = est.h_hat[3];
  r.received *= c;
  CHECK((estimate_channels(s, r).h_hat[3] - c * before).norm() < 1e-12 * before.norm());
}

TEST_CASE("combining vectors") {
  const OracleSetup s = cluster(24, 3, 3);
  Rng rng = make_stream(12, 0);
  const Realization r = generate(s, rng);
  const EstimationOutput est = estimate_channels(s, r);
  const int b = s.plan().pilot_len();
  for (int i = 1; i <= b; ++i) {
    const Eigen::VectorXcd g = combine(est, Scheme::Pzfc, i);
    const Eigen::VectorXcd resp = est.h_hat_book.adjoint() * g;
    for (int j = 0; j < b; ++j) {
      CHECK(std::abs(resp(j) - (j == i - 1 ? 1.0 : 0.0)) < 1e-10);
    }
    CHECK((combine(est, Scheme::Mrc, i) - est.h_hat_book.col(i - 1)).norm() == 0.0);
  }
  CHECK_THROWS_AS(combine(est, Scheme::Mrc, b + 1), Error);

  EstimationOutput bad = est;
  bad.h_hat_book.col(1) = bad.h_hat_book.col(0);
  CHECK_THROWS_AS(combine(bad, Scheme::Pzfc, 1), Error);
}

TEST_CASE("MRC with a single pilot is parallel to the estimate") {
  NetworkConfig c;
  c.n_antennas = 10;
  c.n_users = 1;
  const OracleSetup s = make_cluster(c, 1, InterferenceMode::Average);
  Rng rng = make_stream(13, 0);
  const Realization r = generate(s, rng);
  const EstimationOutput est = estimate_channels(s, r);
  const Eigen::VectorXcd g = combine(est, Scheme::Mrc, 1);
  const Eigen::VectorXcd h = est.h_hat[0];
  CHECK(std::abs(g.dot(h)) == doctest::Approx(g.norm() * h.norm()).epsilon(1e-12));
}

TEST_CASE("measured SINR of an isolated cell") {
  NetworkConfig c;
  c.n_antennas = 50;
  c.n_users = 1;
  const OracleSetup s = make_cluster(c, 0, InterferenceMode::Average);
  const MeasuredSinr m = measure_sinr(s, Scheme::Mrc, 5000, 3);
  const double analytic = 50.0 / (1.1 * 1.1);
  CHECK(std::abs(m.sinr - analytic) < 3 * m.standard_error);
  CHECK(m.terms.inter_cell == 0.0);
  CHECK(m.terms.sinr() == doctest::Approx(m.sinr));
  CHECK_THROWS_AS(measure_sinr(s, Scheme::Asymptotic, 10, 1), Error);
}

TEST_CASE("measurements are reproducible") {
  const OracleSetup s = cluster(8, 1, 1);
  const MeasuredSinr a = measure_sinr(s, Scheme::Pzfc, 300, 21);
  const MeasuredSinr b = measure_sinr(s, Scheme::Pzfc, 300, 21);
  CHECK(a.sinr == b.sinr);
  CHECK(a.standard_error == b.standard_error);
}
