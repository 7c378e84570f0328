#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgail/env.hpp"
#include "sgail/experiments.hpp"
#include "sgail/io.hpp"
#include "sgail/models.hpp"
#include "sgail/oracle.hpp"
#include "sgail/trainer.hpp"

namespace py = pybind11;
using namespace sgail;

namespace {

std::vector<MetricsRecord> train_from_config(const std::string& config_text) {
    Config cfg = Config::parse(config_text);
    auto env = make_env(cfg);
    TrainConfig tc = make_train_config(cfg);
    const auto expert_seed =
        static_cast<std::uint64_t>(cfg.get_double("train.expert_seed", 9000));
    auto experts = make_expert_data(*env, tc.expert_per_task, expert_seed);
    return train(tc, *env, experts).metrics;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multitask adversarial imitation learning lab";

    py::class_<ApproximatorSpec>(m, "ApproximatorSpec")
        .def(py::init([](int input_dim, std::vector<int> hidden, int output_dim,
                         const std::string& head) {
                 ApproximatorSpec spec;
                 spec.input_dim = input_dim;
                 spec.hidden_layers = std::move(hidden);
                 spec.output_dim = output_dim;
                 spec.output_head =
                     head == "softmax" ? OutputHead::Softmax : OutputHead::Linear;
                 return spec;
             }),
             py::arg("input_dim"), py::arg("hidden_layers"), py::arg("output_dim"),
             py::arg("output_head") = "linear")
        .def_readonly("input_dim", &ApproximatorSpec::input_dim)
        .def_readonly("hidden_layers", &ApproximatorSpec::hidden_layers)
        .def_readonly("output_dim", &ApproximatorSpec::output_dim)
        .def("param_count", &ApproximatorSpec::param_count);

    py::class_<Approximator>(m, "Approximator")
        .def(py::init<ApproximatorSpec, std::uint64_t>(), py::arg("spec"), py::arg("seed"))
        .def("forward",
             [](const Approximator& a, const std::vector<double>& x) { return a.forward(x); })
        .def("backward",
             [](const Approximator& a,
                const std::vector<std::pair<std::vector<double>, std::vector<double>>>& batch) {
                 std::vector<BackwardSample> samples;
                 for (const auto& [input, ograd] : batch) samples.push_back({input, ograd});
                 return a.backward(samples);
             })
        .def("get_params", &Approximator::get_params)
        .def("set_params",
             [](Approximator& a, const std::vector<double>& p) { a.set_params(p); })
        .def("param_count", &Approximator::param_count);

    py::class_<GridWorld>(m, "GridWorld")
        .def_static("default_world", &GridWorld::default_world, py::arg("horizon") = 60)
        .def_static("from_layout", &GridWorld::from_layout, py::arg("text"),
                    py::arg("horizon") = 60)
        .def("to_layout", &GridWorld::to_layout)
        .def("horizon", &GridWorld::horizon)
        .def("num_tasks", &GridWorld::num_tasks)
        .def("is_puddle", [](const GridWorld& w, int x, int y) { return w.is_puddle({x, y}); })
        .def("goal", [](const GridWorld& w, int task) {
            auto g = w.goals().at(task);
            return std::make_pair(g.x, g.y);
        });

    m.def(
        "grid_step",
        [](const GridWorld& w, std::pair<int, int> s, int direction) {
            auto n = grid_step(w, {s.first, s.second}, direction);
            return std::make_pair(n.x, n.y);
        },
        py::arg("world"), py::arg("state"), py::arg("direction"));

    py::class_<ReacherWorld>(m, "ReacherWorld")
        .def_static("make", []() { return ReacherWorld::make(); })
        .def_readonly("l1", &ReacherWorld::l1)
        .def_readonly("l2", &ReacherWorld::l2)
        .def_readonly("horizon", &ReacherWorld::horizon)
        .def_readonly("success_radius", &ReacherWorld::success_radius);

    m.def("reacher_state", &reacher_state, py::arg("theta1"), py::arg("theta2"),
          py::arg("vel1") = 0.0, py::arg("vel2") = 0.0);
    m.def(
        "reacher_step",
        [](const ReacherWorld& w, const std::vector<double>& s, const std::vector<double>& tau) {
            return reacher_step(w, s, tau);
        },
        py::arg("world"), py::arg("state"), py::arg("torque"));
    m.def(
        "tip_position",
        [](const ReacherWorld& w, const std::vector<double>& s) {
            auto tip = tip_position(w, s);
            return std::make_pair(tip[0], tip[1]);
        },
        py::arg("world"), py::arg("state"));

    m.def("airl_d", &airl_d, py::arg("f"), py::arg("pi_log_prob"));
    m.def("pseudo_reward", &pseudo_reward, py::arg("f"), py::arg("pi_log_prob"),
          py::arg("beta"));
    m.def("advantage", &advantage, py::arg("reward"), py::arg("v_s"), py::arg("v_next"),
          py::arg("gamma"), py::arg("terminal"));

    py::class_<BetaSchedule>(m, "BetaSchedule")
        .def(py::init([](const std::string& mode, double start, double end, int span) {
                 BetaSchedule s;
                 s.mode = mode == "linear" ? BetaSchedule::Mode::Linear
                                           : BetaSchedule::Mode::Constant;
                 s.start = start;
                 s.end = end;
                 s.span = span;
                 return s;
             }),
             py::arg("mode"), py::arg("start"), py::arg("end"), py::arg("span") = 1);
    m.def("beta_at", &beta_at, py::arg("schedule"), py::arg("epoch"));

    py::class_<oracle::SoftSolution>(m, "SoftSolution")
        .def_readonly("v", &oracle::SoftSolution::v)
        .def_readonly("q", &oracle::SoftSolution::q)
        .def_readonly("pi", &oracle::SoftSolution::pi)
        .def_readonly("residual", &oracle::SoftSolution::residual)
        .def_readonly("iterations", &oracle::SoftSolution::iterations);

    m.def(
        "grid_soft_values",
        [](const GridWorld& world, int task, double gamma, double omega, double tol) {
            auto grid = oracle::grid_tabular_mdp(world, task, gamma, omega);
            auto sol = oracle::soft_value_iteration(grid.mdp, tol);
            std::vector<std::pair<int, int>> cells;
            for (auto c : grid.cells) cells.emplace_back(c.x, c.y);
            return std::make_pair(sol, cells);
        },
        py::arg("world"), py::arg("task"), py::arg("gamma") = 0.95, py::arg("omega") = 1.0,
        py::arg("tol") = 1e-12);
    m.def(
        "bfs_shortest_path",
        [](const GridWorld& w, std::pair<int, int> start, std::pair<int, int> goal) {
            auto res = oracle::bfs_shortest_path(w, {start.first, start.second},
                                                 {goal.first, goal.second});
            std::vector<std::pair<int, int>> path;
            for (auto c : res.path) path.emplace_back(c.x, c.y);
            return std::make_pair(res.length, path);
        },
        py::arg("world"), py::arg("start"), py::arg("goal"));
    m.def("mutual_information_exact", &oracle::mutual_information_exact, py::arg("joint"));

    py::class_<MetricsRecord>(m, "MetricsRecord")
        .def_readonly("epoch", &MetricsRecord::epoch)
        .def_readonly("beta", &MetricsRecord::beta)
        .def_readonly("d_loss", &MetricsRecord::d_loss)
        .def_readonly("v_loss", &MetricsRecord::v_loss)
        .def_readonly("surrogate_gain", &MetricsRecord::surrogate_gain)
        .def_readonly("success", &MetricsRecord::success);

    m.def("train", &train_from_config, py::arg("config_text"),
          "Train from a key = value config string; returns the metric records.");
    m.def(
        "run_experiment",
        [](const std::string& config_text, const std::string& out_dir, int jobs) {
            return run_experiment(Config::parse(config_text), out_dir, jobs);
        },
        py::arg("config_text"), py::arg("out_dir"), py::arg("jobs") = 1);
}
