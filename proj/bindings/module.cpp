#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/functional.h>

#include "smes/data.hpp"
#include "smes/net.hpp"
#include "smes/objectives.hpp"
#include "smes/optimizer.hpp"
#include "smes/records.hpp"
#include "smes/rng.hpp"
#include "smes/selfcheck.hpp"
#include "smes/sweep.hpp"
#include "smes/tensor.hpp"

namespace py = pybind11;

namespace {

smes::Tensor tensor_from(const std::vector<std::size_t>& shape, const std::vector<double>& data) {
  return smes::Tensor(shape, data);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "second-moment exponential-scaling optimizers";

  py::class_<smes::Tensor>(m, "Tensor")
      .def(py::init(&tensor_from), py::arg("shape"), py::arg("data"))
      .def_static("zeros", [](std::vector<std::size_t> s) { return smes::Tensor::zeros(std::move(s)); })
      .def_static("from_vector", [](std::vector<double> v) { return smes::Tensor::from_vector(std::move(v)); })
      .def_property_readonly("shape", &smes::Tensor::shape)
      .def_property_readonly("data",
                             [](const smes::Tensor& t) {
                               return std::vector<double>(t.values().begin(), t.values().end());
                             })
      .def("__len__", &smes::Tensor::size)
      .def("__getitem__", [](const smes::Tensor& t, std::size_t i) {
        if (i >= t.size()) throw py::index_error();
        return t[i];
      })
      .def("__eq__", [](const smes::Tensor& a, const smes::Tensor& b) { return a == b; });

  m.def("add", py::overload_cast<const smes::Tensor&, const smes::Tensor&>(&smes::add));
  m.def("sub", py::overload_cast<const smes::Tensor&, const smes::Tensor&>(&smes::sub));
  m.def("mul", py::overload_cast<const smes::Tensor&, const smes::Tensor&>(&smes::mul));
  m.def("div", py::overload_cast<const smes::Tensor&, const smes::Tensor&>(&smes::div));
  m.def("pow_scalar", &smes::pow_scalar);
  m.def("max_scalar", &smes::max_scalar);
  m.def("matvec", &smes::matvec);

  py::class_<smes::RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &smes::RngStream::uniform)
      .def("normal", &smes::RngStream::normal)
      .def("uniform_tensor", &smes::RngStream::uniform_tensor)
      .def("normal_tensor", &smes::RngStream::normal_tensor);
  m.def("derive_seed", &smes::derive_seed);

  py::enum_<smes::Activation>(m, "Activation")
      .value("sigmoid", smes::Activation::sigmoid)
      .value("relu", smes::Activation::relu)
      .value("identity", smes::Activation::identity);
  py::enum_<smes::Loss>(m, "Loss")
      .value("softmax_ce", smes::Loss::softmax_cross_entropy)
      .value("mse", smes::Loss::mean_squared_error);

  m.def("activation_apply", &smes::activation_apply);
  m.def("activation_derivative", &smes::activation_derivative);
  m.def("loss_eval", &smes::loss_eval);

  py::class_<smes::GradientReport>(m, "GradientReport")
      .def_readonly("layer_grad_norms", &smes::GradientReport::layer_grad_norms)
      .def_readonly("loss", &smes::GradientReport::loss);

  py::class_<smes::Network>(m, "Network")
      .def("forward", &smes::Network::forward)
      .def("backward", &smes::Network::backward)
      .def("zero_gradients", &smes::Network::zero_gradients)
      .def_property_readonly("input_size", &smes::Network::input_size)
      .def_property_readonly("output_size", &smes::Network::output_size);
  m.def("init_network", &smes::init_network);

  py::enum_<smes::DecayMode>(m, "DecayMode")
      .value("coupled", smes::DecayMode::coupled_l2)
      .value("decoupled", smes::DecayMode::decoupled)
      .value("none", smes::DecayMode::none);

  py::class_<smes::SmesConfig>(m, "SmesConfig")
      .def(py::init<>())
      .def_readwrite("eta", &smes::SmesConfig::eta)
      .def_readwrite("beta1", &smes::SmesConfig::beta1)
      .def_readwrite("beta2", &smes::SmesConfig::beta2)
      .def_readwrite("epsilon", &smes::SmesConfig::epsilon)
      .def_readwrite("alpha", &smes::SmesConfig::alpha)
      .def_readwrite("weight_decay", &smes::SmesConfig::weight_decay)
      .def_readwrite("decay_mode", &smes::SmesConfig::decay_mode)
      .def_readwrite("clip_threshold", &smes::SmesConfig::clip_threshold)
      .def_readwrite("v_floor", &smes::SmesConfig::v_floor)
      .def("validate", &smes::SmesConfig::validate);

  py::class_<smes::SmesState>(m, "SmesState")
      .def_readonly("m", &smes::SmesState::m)
      .def_readonly("v", &smes::SmesState::v)
      .def_readonly("t", &smes::SmesState::t);

  m.def("smes_init", &smes::smes_init);
  m.def(
      "smes_step",
      [](smes::Tensor param, const smes::Tensor& grad, smes::SmesState& state,
         const smes::SmesConfig& cfg) {
        smes::smes_step(param, grad, state, cfg);
        return param;
      },
      py::arg("param"), py::arg("grad"), py::arg("state"), py::arg("cfg"),
      "returns the updated parameter; the state is mutated in place");
  m.def("clip_global_norm",
        py::overload_cast<std::vector<smes::Tensor>, double>(&smes::clip_global_norm));
  m.def("preset", &smes::preset);

  py::class_<smes::Objective>(m, "Objective")
      .def_readonly("name", &smes::Objective::name)
      .def_readonly("dimension", &smes::Objective::dimension)
      .def_readonly("minimum_point", &smes::Objective::minimum_point)
      .def_readonly("minimum_value", &smes::Objective::minimum_value)
      .def("eval", [](const smes::Objective& o, const smes::Tensor& x) { return o.eval(x); })
      .def("grad", [](const smes::Objective& o, const smes::Tensor& x) { return o.grad(x); });
  m.def("quadratic", &smes::quadratic);
  m.def("rosenbrock", &smes::rosenbrock);

  py::class_<smes::Dataset>(m, "Dataset")
      .def_readonly("features", &smes::Dataset::features)
      .def_readonly("labels", &smes::Dataset::labels)
      .def_readonly("num_classes", &smes::Dataset::num_classes)
      .def_readonly("split", &smes::Dataset::split)
      .def("__len__", &smes::Dataset::size);
  py::class_<smes::SplitPair>(m, "SplitPair")
      .def_readonly("train", &smes::SplitPair::train)
      .def_readonly("test", &smes::SplitPair::test);
  m.def("gen_blobs", &smes::gen_blobs);
  m.def("gen_sparse_manyclass", &smes::gen_sparse_manyclass);
  m.def("load_tabular",
        [](const std::string& path) { return smes::load_tabular(path); });
  m.def("save_tabular",
        [](const smes::Dataset& d, const std::string& path) { smes::save_tabular(d, path); });

  py::class_<smes::ModelSpec>(m, "ModelSpec")
      .def(py::init<>())
      .def_readwrite("layer_sizes", &smes::ModelSpec::layer_sizes)
      .def_readwrite("activations", &smes::ModelSpec::activations)
      .def_readwrite("loss", &smes::ModelSpec::loss);

  py::enum_<smes::DataSpec::Kind>(m, "DataKind")
      .value("blobs", smes::DataSpec::Kind::blobs)
      .value("sparse", smes::DataSpec::Kind::sparse)
      .value("file", smes::DataSpec::Kind::file);

  py::class_<smes::DataSpec>(m, "DataSpec")
      .def(py::init<>())
      .def_readwrite("kind", &smes::DataSpec::kind)
      .def_readwrite("classes", &smes::DataSpec::classes)
      .def_readwrite("per_class", &smes::DataSpec::per_class)
      .def_readwrite("dim", &smes::DataSpec::dim)
      .def_readwrite("active_dims", &smes::DataSpec::active_dims)
      .def_readwrite("spread", &smes::DataSpec::spread)
      .def_readwrite("path", &smes::DataSpec::path)
      .def_readwrite("test_path", &smes::DataSpec::test_path);

  py::class_<smes::SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("alpha_grid", &smes::SweepSpec::alpha_grid)
      .def_readwrite("seeds", &smes::SweepSpec::seeds)
      .def_readwrite("epochs", &smes::SweepSpec::epochs)
      .def_readwrite("batch_size", &smes::SweepSpec::batch_size)
      .def_readwrite("model", &smes::SweepSpec::model)
      .def_readwrite("data", &smes::SweepSpec::data)
      .def_readwrite("optimizer", &smes::SweepSpec::optimizer)
      .def_static("default_alpha_grid", &smes::SweepSpec::default_alpha_grid);

  py::class_<smes::RunRecord>(m, "RunRecord")
      .def_readonly("alpha", &smes::RunRecord::alpha)
      .def_readonly("seed", &smes::RunRecord::seed)
      .def_readonly("train_loss", &smes::RunRecord::train_loss)
      .def_readonly("train_err", &smes::RunRecord::train_err)
      .def_readonly("test_err", &smes::RunRecord::test_err)
      .def_readonly("grad_norms", &smes::RunRecord::grad_norms)
      .def_readonly("final_test_err", &smes::RunRecord::final_test_err)
      .def_readonly("diverged", &smes::RunRecord::diverged)
      .def_readonly("diverged_epoch", &smes::RunRecord::diverged_epoch)
      .def_readonly("wall_time_s", &smes::RunRecord::wall_time_s);

  py::class_<smes::SummaryRow>(m, "SummaryRow")
      .def_readonly("alpha", &smes::SummaryRow::alpha)
      .def_readonly("mean_test_err", &smes::SummaryRow::mean_test_err)
      .def_readonly("std_test_err", &smes::SummaryRow::std_test_err)
      .def_readonly("n_seeds", &smes::SummaryRow::n_seeds);
  py::class_<smes::SweepSummary>(m, "SweepSummary")
      .def_readonly("rows", &smes::SweepSummary::rows)
      .def_readonly("argmin_alpha", &smes::SweepSummary::argmin_alpha);

  m.def("train_one", &smes::train_one, py::arg("spec"), py::arg("alpha"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_sweep",
      [](const smes::SweepSpec& spec, const std::string& records_path, int jobs) {
        return smes::run_sweep(spec, records_path, jobs);
      },
      py::arg("spec"), py::arg("records_path"), py::arg("jobs") = 1,
      py::call_guard<py::gil_scoped_release>());
  py::class_<smes::SweepResult>(m, "SweepResult")
      .def_readonly("records", &smes::SweepResult::records)
      .def_readonly("summary", &smes::SweepResult::summary)
      .def_readonly("diverged_cells", &smes::SweepResult::diverged_cells);
  m.def("read_records", [](const std::string& path) { return smes::read_records(path); });
  m.def("summarize", &smes::summarize);

  py::class_<smes::SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &smes::SuiteResult::name)
      .def_readonly("passed", &smes::SuiteResult::passed)
      .def_readonly("detail", &smes::SuiteResult::detail);
  m.def("run_selfcheck", [] { return smes::run_selfcheck(); });
}
