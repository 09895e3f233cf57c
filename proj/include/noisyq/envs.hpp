#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "noisyq/tensor.hpp"

namespace noisyq {

enum class EnvKind { cartpole, mountaincar, acrobot };

std::string_view to_string(EnvKind kind);
EnvKind parse_env_kind(std::string_view name);

struct StepResult {
  RealVector observation;
  double reward = 0.0;
  bool terminal = false;
};

struct ReturnBounds {
  double min;
  double max;
};

/// Episodic environment with a small discrete action set.
///
/// reset() must be called before the first step(). Once a step reports
/// terminal the episode is closed and further step() calls throw StateError
/// until the next reset().
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvKind kind() const = 0;
  virtual Index observation_size() const = 0;
  virtual int action_count() const = 0;
  virtual int episode_cap() const = 0;
  virtual ReturnBounds return_bounds() const = 0;
  virtual RealVector observation() const = 0;

  RealVector reset(std::uint64_t seed);
  StepResult step(int action);

  int step_index() const { return step_index_; }
  bool done() const { return done_; }

 protected:
  struct Transition {
    double reward;
    bool terminal;
  };

  virtual void randomise(Rng& rng) = 0;
  virtual Transition advance(int action) = 0;

  // Lets tests place the system in a specific state mid-episode.
  void begin_episode() {
    step_index_ = 0;
    done_ = false;
  }

 private:
  int step_index_ = 0;
  bool done_ = true;
};

/// Cart-pole balancing, Euler-integrated at 50 Hz. Actions: 0 = push left,
/// 1 = push right. Observation: x, x_dot, theta, theta_dot.
class CartPole final : public Environment {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kCartMass = 1.0;
  static constexpr double kPoleMass = 0.1;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kForce = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kPositionLimit = 2.4;
  static constexpr double kAngleLimit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  static constexpr int kEpisodeCap = 200;

  EnvKind kind() const override { return EnvKind::cartpole; }
  Index observation_size() const override { return 4; }
  int action_count() const override { return 2; }
  int episode_cap() const override { return kEpisodeCap; }
  ReturnBounds return_bounds() const override { return {1.0, 200.0}; }
  RealVector observation() const override;

  const std::array<double, 4>& state() const { return state_; }
  void set_state(const std::array<double, 4>& s);

 protected:
  void randomise(Rng& rng) override;
  Transition advance(int action) override;

 private:
  std::array<double, 4> state_{};
};

/// Under-powered car in a valley. Actions: 0 = push left, 1 = no push,
/// 2 = push right. Observation: position, velocity.
class MountainCar final : public Environment {
 public:
  static constexpr double kMinPosition = -1.2;
  static constexpr double kMaxPosition = 0.6;
  static constexpr double kMaxSpeed = 0.07;
  static constexpr double kGoalPosition = 0.5;
  static constexpr double kForce = 0.001;
  static constexpr double kGravity = 0.0025;
  static constexpr int kEpisodeCap = 200;

  EnvKind kind() const override { return EnvKind::mountaincar; }
  Index observation_size() const override { return 2; }
  int action_count() const override { return 3; }
  int episode_cap() const override { return kEpisodeCap; }
  ReturnBounds return_bounds() const override { return {-200.0, -1.0}; }
  RealVector observation() const override;

  double position() const { return position_; }
  double velocity() const { return velocity_; }
  void set_state(double position, double velocity);

 protected:
  void randomise(Rng& rng) override;
  Transition advance(int action) override;

 private:
  double position_ = 0.0;
  double velocity_ = 0.0;
};

/// Two-link under-actuated pendulum with torque on the middle joint,
/// RK4-integrated with 0.2 s steps. Actions: 0, 1, 2 apply torque -1, 0, +1.
/// Observation: cos t1, sin t1, cos t2, sin t2, t1_dot, t2_dot.
class Acrobot final : public Environment {
 public:
  static constexpr double kLinkLength1 = 1.0;
  static constexpr double kLinkMass1 = 1.0;
  static constexpr double kLinkMass2 = 1.0;
  static constexpr double kLinkCom1 = 0.5;
  static constexpr double kLinkCom2 = 0.5;
  static constexpr double kLinkMoi = 1.0;
  static constexpr double kGravity = 9.8;
  static constexpr double kDt = 0.2;
  static constexpr double kMaxVel1 = 4.0 * 3.14159265358979323846;
  static constexpr double kMaxVel2 = 9.0 * 3.14159265358979323846;
  static constexpr int kEpisodeCap = 500;

  using State = std::array<double, 4>;  // t1, t2, t1_dot, t2_dot

  EnvKind kind() const override { return EnvKind::acrobot; }
  Index observation_size() const override { return 6; }
  int action_count() const override { return 3; }
  int episode_cap() const override { return kEpisodeCap; }
  ReturnBounds return_bounds() const override { return {-500.0, -1.0}; }
  RealVector observation() const override;

  const State& state() const { return state_; }
  void set_state(const State& s);

  /// Time derivative of the joint state under a constant torque.
  static State dynamics(const State& s, double torque);
  /// One classical Runge-Kutta step of length dt, without wrapping or clamping.
  static State rk4(const State& s, double torque, double dt);

 protected:
  void randomise(Rng& rng) override;
  Transition advance(int action) override;

 private:
  State state_{};
};

std::unique_ptr<Environment> make_environment(EnvKind kind);

}  // namespace noisyq
