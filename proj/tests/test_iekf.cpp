#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lie_iekf/error.hpp"
#include "lie_iekf/harness.hpp"
#include "lie_iekf/iekf.hpp"
#include "lie_iekf/operators.hpp"
#include "support.hpp"

using namespace lie_iekf;
using lie_iekf::test::random_rotation;
using lie_iekf::test::random_vec3;

namespace {

const Inertia kInertia = Inertia::diagonal(Vec3(4.250, 4.337, 3.664));

DynamicsModel nominal_model() {
  return rigid_body_model(kInertia, [](double t) { return reference_control(kInertia, t); });
}

DynamicsModel still_model() {
  DynamicsModel m;
  m.f = [](double, const AlgVec&) { return AlgVec(AlgVec::Zero()); };
  m.df = [](double, const AlgVec&) { return Mat3(Mat3::Zero()); };
  return m;
}

}  // namespace

TEST(Innovation, ZeroAtAgreement) {
  const Rot3 h = random_rotation();
  EXPECT_LE(innovation(h.matrix(), h.matrix()).norm(), 1e-15);
}

TEST(Innovation, QuarterTurnAboutZ) {
  const Rot3 y = random_rotation();
  const Rot3 h = y * exp_so3(Vec3(0, 0, std::numbers::pi / 2));
  EXPECT_LE((innovation(y.matrix(), h.matrix()) - Vec3(0, 0, 1)).norm(), 1e-14);
}

TEST(Innovation, SmallAngle) {
  const double theta = 1e-4;
  const AlgVec out = innovation(Mat3::Identity(), exp_so3(Vec3(theta, 0, 0)).matrix());
  EXPECT_LE(std::abs(out.x() - theta) / theta, 1e-7);
  EXPECT_EQ(out.y(), 0.0);
  EXPECT_EQ(out.z(), 0.0);
}

TEST(Innovation, HalfTurnBlindSpot) {
  // A rotation by pi has a symmetric residual, so the innovation vanishes.
  const Rot3 y = random_rotation();
  const Rot3 h = y * exp_so3(std::numbers::pi * Vec3(1, 2, 2) / 3.0);
  EXPECT_LE(innovation(y.matrix(), h.matrix()).norm(), 1e-14);
}

TEST(Innovation, InvariantUnderLeftTranslation) {
  const Rot3 q = random_rotation();
  const Rot3 y = random_rotation();
  const Rot3 h = random_rotation();
  EXPECT_LE((innovation((q * y).matrix(), (q * h).matrix()) - innovation(y.matrix(), h.matrix())).norm(), 1e-14);
}

TEST(IekfRhs, StationaryFixedPoint) {
  const Rot3 h = random_rotation();
  const IekfGain k = test::random_fixed<6, 3>();
  const IekfTangent out = iekf_rhs(h.matrix(), AlgVec::Zero(), 0.0, h.matrix(), still_model(), k);
  EXPECT_LE(out.h_dot.norm(), 1e-15);
  EXPECT_LE(out.eta_dot.norm(), 1e-15);
}

TEST(IekfRhs, OpenLoopLimit) {
  const DynamicsModel model = nominal_model();
  const Rot3 h = random_rotation();
  const AlgVec eta = random_vec3();
  const IekfTangent out = iekf_rhs(h.matrix(), eta, 0.7, random_rotation().matrix(), model, IekfGain::Zero());
  EXPECT_EQ(out.h_dot, h.matrix() * hat(eta));
  EXPECT_EQ(out.eta_dot, model.f(0.7, eta));
}

TEST(IekfRhs, ComponentwiseTranscription) {
  const DynamicsModel model = nominal_model();
  for (int i = 0; i < 100; ++i) {
    const Mat3 h = random_rotation().matrix();
    const Mat3 y = random_rotation().matrix();
    const AlgVec eta = random_vec3();
    const IekfGain k = test::random_fixed<6, 3>();
    const double t = 0.3 * i;

    const Mat3 e = y.transpose() * h;
    const Vec3 inn(0.5 * (e(2, 1) - e(1, 2)), 0.5 * (e(0, 2) - e(2, 0)), 0.5 * (e(1, 0) - e(0, 1)));
    Vec3 kg = Vec3::Zero();
    Vec3 kv = Vec3::Zero();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        kg(r) += k(r, c) * inn(c);
        kv(r) += k(r + 3, c) * inn(c);
      }
    }
    const Vec3 rate = eta - kg;
    Mat3 skew;
    skew << 0, -rate.z(), rate.y(), rate.z(), 0, -rate.x(), -rate.y(), rate.x(), 0;
    const Vec3 u = reference_control(kInertia, t);
    const Vec3 im = kInertia.matrix() * eta;
    const Vec3 f = kInertia.inverse() * (test::cross_componentwise(im, eta) + u);

    const IekfTangent out = iekf_rhs(h, eta, t, y, model, k);
    EXPECT_LE((out.h_dot - h * skew).norm(), 1e-13);
    EXPECT_LE((out.eta_dot - (f - kv)).norm(), 1e-13);
  }
}

TEST(IekfStep, ZeroNoiseExactTracking) {
  const SimConfig cfg = test::exact_config();
  const RunResult r = run_single(cfg, FilterKind::Iekf, 0);
  ASSERT_FALSE(r.diverged);
  ASSERT_EQ(r.squared_error.size(), 500u);
  for (double e : r.squared_error) EXPECT_LE(std::sqrt(e), 1e-9);
  EXPECT_LE(std::sqrt(r.final_squared_error), 1e-9);
}

TEST(IekfStep, OpenLoopMatchesPlantIntegration) {
  const DynamicsModel model = nominal_model();
  const ControlFn control = [](double t) { return reference_control(kInertia, t); };
  const IekfNoise noise = IekfNoise::isotropic(2.0, 1e12);
  const double dt = 0.02;

  PlantState plant{random_rotation(), Vec3(2.0, 0.0, 1.0), 0.0};
  IekfState est;
  est.h = plant.X;
  est.eta = plant.omega;
  const Rot3 y = random_rotation();
  for (int k = 0; k < 50; ++k) {
    est = iekf_step(est, y, model, noise, dt);
    plant = plant_step(plant, kInertia, control, Vec3::Zero(), dt);
  }
  EXPECT_LE((est.h.matrix() - plant.X.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((est.eta - plant.omega).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(IekfStep, AdvancesTimeAndKeepsInvariants) {
  const DynamicsModel model = nominal_model();
  const IekfNoise noise = IekfNoise::isotropic(2.0, 0.3);
  IekfState s;
  s.eta = Vec3(2.1, 0.4, 1.2);
  s.sigma = Covariance<6>::Identity();
  const IekfState next = iekf_step(s, random_rotation(), model, noise, 0.02);
  EXPECT_DOUBLE_EQ(next.t, 0.02);
  EXPECT_LE(next.h.orthonormality_error(), 1e-12);
  EXPECT_EQ(next.sigma, next.sigma.transpose());
  EXPECT_TRUE(is_covariance(next.sigma));
}

TEST(IekfStep, RejectsNonPositiveStep) {
  const IekfNoise noise = IekfNoise::isotropic(2.0, 0.3);
  EXPECT_THROW(iekf_step(IekfState{}, Rot3::identity(), nominal_model(), noise, 0.0), Error);
}

TEST(IekfStep, HoldEqualsConstantStages) {
  const DynamicsModel model = nominal_model();
  const IekfNoise noise = IekfNoise::isotropic(2.0, 0.3);
  const Rot3 y = random_rotation();
  IekfState s;
  s.eta = random_vec3();
  const IekfState a = iekf_step(s, y, model, noise, 0.02);
  const IekfState b = iekf_step(s, StageMeasurements::at_stages({y.matrix(), y.matrix(), y.matrix(), y.matrix()}),
                                model, noise, 0.02);
  EXPECT_EQ(a.h.matrix(), b.h.matrix());
  EXPECT_EQ(a.eta, b.eta);
  EXPECT_EQ(a.sigma, b.sigma);
}

TEST(IekfInvariance, LeftTranslation) {
  SimConfig cfg;
  cfg.horizon = 2.0;
  const PlantTrajectory base = simulate_plant(cfg, 3);
  const RunResult ref = run_filter(cfg, FilterKind::Iekf, base, 3, true);
  for (int i = 0; i < 5; ++i) {
    const Rot3 q = random_rotation();
    const PlantTrajectory moved = test::translate(base, q);
    SimConfig moved_cfg = cfg;
    moved_cfg.filter_initial_orientation = q.matrix() * cfg.filter_initial_orientation;
    const RunResult r = run_filter(moved_cfg, FilterKind::Iekf, moved, 3, true);
    for (std::size_t k = 0; k + 1 < r.orientation.size(); ++k) {
      const Mat3 e_ref = base.states[k].X.matrix().transpose() * ref.orientation[k];
      const Mat3 e_mov = moved.states[k].X.matrix().transpose() * r.orientation[k];
      ASSERT_LE((e_ref - e_mov).cwiseAbs().maxCoeff(), 1e-9) << k;
      ASSERT_LE((ref.omega[k] - r.omega[k]).cwiseAbs().maxCoeff(), 1e-9) << k;
      const AlgVec i_ref = innovation(base.measurement(k).stage(0), ref.orientation[k]);
      const AlgVec i_mov = innovation(moved.measurement(k).stage(0), r.orientation[k]);
      ASSERT_LE((i_ref - i_mov).cwiseAbs().maxCoeff(), 1e-9) << k;
    }
  }
}

TEST(IekfInvariance, ManifoldPreservation) {
  const SimConfig cfg;
  const RunResult r = run_single(cfg, FilterKind::Iekf, 11);
  ASSERT_FALSE(r.diverged);
  EXPECT_LE(r.max_manifold_violation, 1e-9);
}

TEST(IekfInvariance, GainFormHoldsAlongTrajectory) {
  const DynamicsModel model = nominal_model();
  const IekfNoise noise = IekfNoise::isotropic(2.0, 0.3);
  SimConfig cfg;
  cfg.horizon = 4.0;
  const PlantTrajectory plant = simulate_plant(cfg, 5);
  IekfState s;
  s.eta = cfg.filter_initial_omega;
  s.sigma.setZero();
  s.sigma.topLeftCorner<3, 3>() = 0.06 * Mat3::Identity();
  s.sigma.bottomRightCorner<3, 3>() = 0.4 * Mat3::Identity();
  for (std::size_t k = 0; k < plant.steps(); ++k) {
    const StateOp a = build_A(s.eta, model.df(s.t, s.eta));
    const auto gain_k = gain(s.sigma, build_C(), noise);
    const Covariance<6> lhs = covariance_rhs(s.sigma, a, build_B(), build_C(), gain_k, noise);
    const Covariance<6> rhs = riccati_rhs(s.sigma, a, build_B(), build_C(), noise);
    ASSERT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10) << k;
    s = iekf_step(s, plant.measurement(k), model, noise, cfg.dt);
  }
  EXPECT_EQ(s.asymmetry_warnings, 0u);
}
