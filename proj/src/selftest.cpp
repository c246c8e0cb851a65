#include "lie_iekf/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lie_iekf/harness.hpp"
#include "lie_iekf/noise.hpp"
#include "lie_iekf/operators.hpp"
#include "lie_iekf/riccati.hpp"
#include "lie_iekf/so3.hpp"

namespace lie_iekf {

namespace {

SelfCheck check(std::string name, double value, double limit) {
  std::ostringstream detail;
  detail << "max deviation " << value << " (limit " << limit << ")";
  return {std::move(name), value <= limit, detail.str()};
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

Vec3 random_vec(std::mt19937_64& rng) { return random_matrix(rng, 3, 1); }

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::mt19937_64 rng(20240601);
  std::vector<SelfCheck> out;

  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec3 x = random_vec(rng);
      worst = std::max(worst, (vee(hat(x)) - x).cwiseAbs().maxCoeff());
    }
    out.push_back(check("hat/vee round trip", worst, 0.0));
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Vec3 x = random_vec(rng);
      const Mat3 k = hat(x);
      Mat3 term = Mat3::Identity();
      Mat3 series = Mat3::Identity();
      for (int n = 1; n < 30; ++n) {
        term = term * k / static_cast<double>(n);
        series += term;
      }
      worst = std::max(worst, (exp_so3(x).matrix() - series).cwiseAbs().maxCoeff());
    }
    out.push_back(check("exp_so3 vs power series", worst, 1e-12));
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int dims[] = {2, 3, 6};
      const int t = dims[i % 3], u = dims[(i / 3) % 3], v = dims[(i / 9) % 3], w = dims[(i / 27) % 3];
      const Eigen::MatrixXd x = random_matrix(rng, u, t);
      const Eigen::MatrixXd y = random_matrix(rng, w, v);
      const Eigen::MatrixXd z = random_matrix(rng, v, t);
      // (X (x) Y) acting on the components of Z, assembled term by term.
      Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(w, u);
      for (int a = 0; a < t; ++a)
        for (int b = 0; b < v; ++b) expected += z(b, a) * rank_one(x.col(a), y.col(b));
      worst = std::max(worst, (tensor_apply(x, y, z) - expected).cwiseAbs().maxCoeff());
    }
    out.push_back(check("tensor action identity", worst, 1e-12));
  }
  {
    Covariance<3> sigma = Covariance<3>::Identity();
    const RiccatiContext<3, 3, 3> ctx{[](double) { return LinOp<3, 3>::Zero().eval(); }, LinOp<3, 3>::Zero(),
                                      LinOp<3, 3>::Identity(), NoiseModel<3, 3>::isotropic(0.0, 1.0)};
    for (int k = 0; k < 50; ++k) sigma = step_riccati(sigma, ctx, 0.02 * k, 0.02).sigma;
    out.push_back(check("Riccati closed form sigma(1) = 0.5 I", (sigma - 0.5 * Covariance<3>::Identity()).cwiseAbs().maxCoeff(), 1e-6));
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Eigen::MatrixXd m = random_matrix(rng, 6, 6);
      const StateOp sigma = m * m.transpose();
      const StateOp a = random_matrix(rng, 6, 6);
      const Eigen::MatrixXd qm = random_matrix(rng, 3, 3);
      const Eigen::MatrixXd rm = random_matrix(rng, 3, 3);
      const IekfNoise noise(qm * qm.transpose(), rm * rm.transpose() + Mat3::Identity());
      const auto b = build_B();
      const auto c = build_C();
      const auto k = gain(sigma, c, noise);
      const StateOp lhs = covariance_rhs(sigma, a, b, c, k, noise);
      const StateOp rhs = riccati_rhs(sigma, a, b, c, noise);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
    out.push_back(check("gain-form covariance equals Riccati form", worst, 1e-12));
  }
  {
    SimConfig cfg;
    cfg.horizon = 2.0;
    cfg.filter = FilterSelection::Iekf;
    const PlantTrajectory base = simulate_plant(cfg, 0);
    const RunResult ref = run_filter(cfg, FilterKind::Iekf, base, 0, true);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Rot3 q = exp_so3(random_vec(rng));
      PlantTrajectory moved = base;
      for (auto& s : moved.states) s.X = q * s.X;
      for (auto& st : moved.stage_orientation)
        for (auto& m : st) m = q.matrix() * m;
      SimConfig moved_cfg = cfg;
      moved_cfg.filter_initial_orientation = q.matrix() * cfg.filter_initial_orientation;
      const RunResult r = run_filter(moved_cfg, FilterKind::Iekf, moved, 0, true);
      for (std::size_t k = 0; k < r.orientation.size(); ++k) {
        const Mat3 e_ref = base.states[k].X.matrix().transpose() * ref.orientation[k];
        const Mat3 e_mov = moved.states[k].X.matrix().transpose() * r.orientation[k];
        worst = std::max(worst, (e_ref - e_mov).cwiseAbs().maxCoeff());
        worst = std::max(worst, (ref.omega[k] - r.omega[k]).cwiseAbs().maxCoeff());
      }
    }
    out.push_back(check("IEKF left invariance", worst, 1e-9));
  }
  {
    SimConfig cfg;
    cfg.plant_noise = false;
    cfg.random_initial_state = false;
    cfg.filter_initial_omega = cfg.plant_initial_omega_mean;
    for (FilterKind f : {FilterKind::Iekf, FilterKind::Ekf}) {
      const RunResult r = run_single(cfg, f, 0);
      double worst = std::sqrt(r.final_squared_error);
      for (double e : r.squared_error) worst = std::max(worst, std::sqrt(e));
      out.push_back(check("zero-noise tracking (" + std::string(to_string(f)) + ")", worst, 1e-9));
    }
  }
  return out;
}

}  // namespace lie_iekf
