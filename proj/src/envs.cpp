#include "noisyq/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace noisyq {

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::cartpole: return "cartpole";
    case EnvKind::mountaincar: return "mountaincar";
    case EnvKind::acrobot: return "acrobot";
  }
  return "unknown";
}

EnvKind parse_env_kind(std::string_view name) {
  if (name == "cartpole") return EnvKind::cartpole;
  if (name == "mountaincar") return EnvKind::mountaincar;
  if (name == "acrobot") return EnvKind::acrobot;
  throw ConfigError("env", "unknown environment '" + std::string(name) +
                               "' (expected cartpole, mountaincar or acrobot)");
}

RealVector Environment::reset(std::uint64_t seed) {
  Rng rng(seed);
  randomise(rng);
  begin_episode();
  return observation();
}

StepResult Environment::step(int action) {
  if (done_) throw StateError("step called on a terminal state; reset the environment first");
  if (action < 0 || action >= action_count())
    throw ShapeError("step: action " + std::to_string(action) + " outside [0, " +
                     std::to_string(action_count()) + ")");
  const Transition t = advance(action);
  ++step_index_;
  done_ = t.terminal || step_index_ >= episode_cap();
  return {observation(), t.reward, done_};
}

// CartPole

RealVector CartPole::observation() const {
  return Eigen::Map<const RealVector>(state_.data(), 4);
}

void CartPole::set_state(const std::array<double, 4>& s) {
  state_ = s;
  begin_episode();
}

void CartPole::randomise(Rng& rng) {
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (auto& v : state_) v = dist(rng);
}

Environment::Transition CartPole::advance(int action) {
  auto [x, x_dot, theta, theta_dot] = state_;
  const double total_mass = kCartMass + kPoleMass;
  const double polemass_length = kPoleMass * kHalfLength;
  const double force = action == 1 ? kForce : -kForce;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);

  const double temp = (force + polemass_length * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc = (kGravity * sin_t - cos_t * temp) /
                           (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

  x += kTau * x_dot;
  x_dot += kTau * x_acc;
  theta += kTau * theta_dot;
  theta_dot += kTau * theta_acc;
  state_ = {x, x_dot, theta, theta_dot};

  const bool failed = std::abs(x) > kPositionLimit || std::abs(theta) > kAngleLimit;
  return {1.0, failed};
}

// MountainCar

RealVector MountainCar::observation() const {
  RealVector obs(2);
  obs << position_, velocity_;
  return obs;
}

void MountainCar::set_state(double position, double velocity) {
  position_ = position;
  velocity_ = velocity;
  begin_episode();
}

void MountainCar::randomise(Rng& rng) {
  std::uniform_real_distribution<double> dist(-0.6, -0.4);
  position_ = dist(rng);
  velocity_ = 0.0;
}

Environment::Transition MountainCar::advance(int action) {
  velocity_ += kForce * (action - 1) - kGravity * std::cos(3.0 * position_);
  velocity_ = std::clamp(velocity_, -kMaxSpeed, kMaxSpeed);
  position_ += velocity_;
  position_ = std::clamp(position_, kMinPosition, kMaxPosition);
  if (position_ == kMinPosition && velocity_ < 0.0) velocity_ = 0.0;
  return {-1.0, position_ >= kGoalPosition};
}

// Acrobot

RealVector Acrobot::observation() const {
  RealVector obs(6);
  obs << std::cos(state_[0]), std::sin(state_[0]), std::cos(state_[1]), std::sin(state_[1]),
      state_[2], state_[3];
  return obs;
}

void Acrobot::set_state(const State& s) {
  state_ = s;
  begin_episode();
}

void Acrobot::randomise(Rng& rng) {
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  for (auto& v : state_) v = dist(rng);
}

Acrobot::State Acrobot::dynamics(const State& s, double torque) {
  constexpr double pi = std::numbers::pi;
  const double m1 = kLinkMass1, m2 = kLinkMass2;
  const double l1 = kLinkLength1;
  const double lc1 = kLinkCom1, lc2 = kLinkCom2;
  const double i1 = kLinkMoi, i2 = kLinkMoi;
  const double g = kGravity;
  const auto [theta1, theta2, dtheta1, dtheta2] = s;

  const double d1 =
      m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * std::cos(theta2)) + i1 + i2;
  const double d2 = m2 * (lc2 * lc2 + l1 * lc2 * std::cos(theta2)) + i2;
  const double phi2 = m2 * lc2 * g * std::cos(theta1 + theta2 - pi / 2.0);
  const double phi1 = -m2 * l1 * lc2 * dtheta2 * dtheta2 * std::sin(theta2) -
                      2.0 * m2 * l1 * lc2 * dtheta2 * dtheta1 * std::sin(theta2) +
                      (m1 * lc1 + m2 * l1) * g * std::cos(theta1 - pi / 2.0) + phi2;
  const double ddtheta2 =
      (torque + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 * dtheta1 * std::sin(theta2) - phi2) /
      (m2 * lc2 * lc2 + i2 - d2 * d2 / d1);
  const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
  return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

Acrobot::State Acrobot::rk4(const State& s, double torque, double dt) {
  auto axpy = [](const State& base, const State& k, double h) {
    State out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = base[i] + h * k[i];
    return out;
  };
  const State k1 = dynamics(s, torque);
  const State k2 = dynamics(axpy(s, k1, dt / 2.0), torque);
  const State k3 = dynamics(axpy(s, k2, dt / 2.0), torque);
  const State k4 = dynamics(axpy(s, k3, dt), torque);
  State out;
  for (std::size_t i = 0; i < 4; ++i)
    out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

namespace {

double wrap_angle(double x) {
  constexpr double pi = std::numbers::pi;
  constexpr double two_pi = 2.0 * pi;
  while (x > pi) x -= two_pi;
  while (x < -pi) x += two_pi;
  return x;
}

}  // namespace

Environment::Transition Acrobot::advance(int action) {
  const double torque = static_cast<double>(action - 1);
  State next = rk4(state_, torque, kDt);
  next[0] = wrap_angle(next[0]);
  next[1] = wrap_angle(next[1]);
  next[2] = std::clamp(next[2], -kMaxVel1, kMaxVel1);
  next[3] = std::clamp(next[3], -kMaxVel2, kMaxVel2);
  state_ = next;
  const bool reached = -std::cos(state_[0]) - std::cos(state_[1] + state_[0]) > 1.0;
  return {-1.0, reached};
}

std::unique_ptr<Environment> make_environment(EnvKind kind) {
  switch (kind) {
    case EnvKind::cartpole: return std::make_unique<CartPole>();
    case EnvKind::mountaincar: return std::make_unique<MountainCar>();
    case EnvKind::acrobot: return std::make_unique<Acrobot>();
  }
  throw ConfigError("env", "unknown environment kind");
}

}  // namespace noisyq
