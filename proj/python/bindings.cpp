#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "noisyq/agent.hpp"
#include "noisyq/envs.hpp"
#include "noisyq/errors.hpp"
#include "noisyq/harness/config.hpp"
#include "noisyq/harness/experiment.hpp"
#include "noisyq/harness/report.hpp"
#include "noisyq/noisy_linear.hpp"
#include "noisyq/schedule.hpp"
#include "noisyq/trainer.hpp"

namespace py = pybind11;
using namespace noisyq;

namespace {

py::dict metrics_dict(const RunMetrics& m) {
  py::list episodes, frames;
  for (const auto& e : m.episodes) episodes.append(py::make_tuple(e.episode, e.frame, e.episode_return, e.length));
  for (const auto& f : m.frames) frames.append(py::make_tuple(f.frame, f.k, f.stability, f.loss));
  py::dict d;
  d["episodes"] = episodes;
  d["frames"] = frames;
  d["sync_count"] = m.sync_count;
  d["learn_steps"] = m.learn_steps;
  d["initial_D"] = m.initial_stability;
  d["final_D"] = m.final_stability;
  return d;
}

py::dict aggregate_dict(const harness::Aggregate& a) {
  py::dict d;
  d["algo"] = a.algo;
  d["env"] = a.env;
  d["mean"] = a.mean;
  d["std"] = a.std;
  d["seeds"] = a.seeds;
  return d;
}

AgentConfig with_overrides(EnvKind env, const std::map<std::string, std::string>& overrides) {
  AgentConfig c = AgentConfig::defaults(env);
  for (const auto& [k, v] : overrides) harness::apply_override(c, k, v);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DQN, NoisyNet-DQN and NROWAN-DQN on classic control tasks.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<NotReadyError>(m, "NotReadyError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Environment>(m, "Environment")
      .def_property_readonly("name", [](const Environment& e) { return std::string(to_string(e.kind())); })
      .def_property_readonly("observation_size", &Environment::observation_size)
      .def_property_readonly("action_count", &Environment::action_count)
      .def_property_readonly("episode_cap", &Environment::episode_cap)
      .def_property_readonly("done", &Environment::done)
      .def("reset", &Environment::reset, py::arg("seed"))
      .def("step", [](Environment& e, int action) {
        StepResult r = e.step(action);
        return py::make_tuple(r.observation, r.reward, r.terminal);
      }, py::arg("action"));

  m.def("make_env", [](const std::string& name) { return make_environment(parse_env_kind(name)); },
        py::arg("name"));

  py::class_<AgentConfig>(m, "AgentConfig")
      .def(py::init([](const std::string& env) { return AgentConfig::defaults(parse_env_kind(env)); }),
           py::arg("env") = "cartpole")
      .def_readwrite("gamma", &AgentConfig::gamma)
      .def_readwrite("learning_rate", &AgentConfig::learning_rate)
      .def_readwrite("target_sync_interval", &AgentConfig::target_sync_interval)
      .def_readwrite("learning_starts", &AgentConfig::learning_starts)
      .def_readwrite("replay_capacity", &AgentConfig::replay_capacity)
      .def_readwrite("frame_budget", &AgentConfig::frame_budget)
      .def_readwrite("batch_size", &AgentConfig::batch_size)
      .def_readwrite("hidden", &AgentConfig::hidden)
      .def_readwrite("sigma0", &AgentConfig::sigma0)
      .def_readwrite("k_final", &AgentConfig::k_final)
      .def_readwrite("growth_a", &AgentConfig::growth_a)
      .def_readwrite("inf_reward", &AgentConfig::inf_reward)
      .def_readwrite("sup_reward", &AgentConfig::sup_reward)
      .def_property("schedule",
                    [](const AgentConfig& c) { return std::string(to_string(c.schedule)); },
                    [](AgentConfig& c, const std::string& s) { c.schedule = parse_schedule(s); })
      .def_readwrite("eval_episodes", &AgentConfig::eval_episodes)
      .def("validate", &AgentConfig::validate);

  m.def("train", [](const std::string& algo, const std::string& env, const AgentConfig& config,
                    std::uint64_t seed, std::optional<long> eval_episodes) {
        auto e = make_environment(parse_env_kind(env));
        const Algorithm a = parse_algorithm(algo);
        TrainResult r = [&] {
          py::gil_scoped_release release;
          return train(*e, a, config, seed);
        }();
        py::dict d = metrics_dict(r.metrics);
        const long n = eval_episodes.value_or(config.eval_episodes);
        if (n > 0) {
          const double eps = a == Algorithm::dqn ? config.epsilon_final : 0.0;
          Evaluation ev;
          {
            py::gil_scoped_release release;
            ev = evaluate(r.online, *e, n, harness::evaluation_seed(seed), eps);
          }
          d["eval_mean"] = ev.mean;
          d["eval_std"] = ev.std;
          d["eval_returns"] = ev.returns;
        }
        return d;
      },
      py::arg("algo"), py::arg("env"), py::arg("config"), py::arg("seed"),
      py::arg("eval_episodes") = py::none(),
      "Train one agent; returns episode/frame logs and, unless eval_episodes is 0, evaluation scores.");

  m.def("run_experiment", [](const std::string& algo, const std::string& env,
                             const std::vector<std::uint64_t>& seeds, const std::filesystem::path& out,
                             const std::map<std::string, std::string>& overrides, int jobs) {
        harness::ExperimentConfig c;
        c.algorithm = parse_algorithm(algo);
        c.environment = parse_env_kind(env);
        c.seeds = seeds;
        c.agent = with_overrides(c.environment, overrides);
        c.output_dir = out;
        py::gil_scoped_release release;
        const auto s = harness::run_experiment(c, jobs);
        py::gil_scoped_acquire acquire;
        return aggregate_dict(s.aggregate);
      },
      py::arg("algo"), py::arg("env"), py::arg("seeds"), py::arg("out"),
      py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("jobs") = 1);

  m.def("compare", [](const std::filesystem::path& root, const std::string& env) {
        const auto row = harness::compare(root, parse_env_kind(env));
        py::list out;
        for (const auto& e : row.entries) {
          py::dict d;
          d["algo"] = std::string(to_string(e.algorithm));
          d["mean"] = e.mean;
          d["std"] = e.std;
          d["best"] = e.best;
          out.append(d);
        }
        return out;
      },
      py::arg("root"), py::arg("env"));

  m.def("format_score", &harness::format_score, py::arg("mean"), py::arg("std"));
  m.def("smooth_trailing", &harness::smooth_trailing, py::arg("values"), py::arg("window") = 10);
  m.def("k_frame", &k_frame, py::arg("frames"), py::arg("k_final"), py::arg("growth"));
  m.def("k_reward", &k_reward, py::arg("episode_reward"), py::arg("inf_reward"),
        py::arg("sup_reward"), py::arg("k_final"));
  m.def("factorise", [](const RealVector& x) -> RealVector {
    return x.unaryExpr([](double v) { return factorise(v); });
  }, py::arg("x"));
}
