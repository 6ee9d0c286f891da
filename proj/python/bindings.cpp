#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "maintseg/core.hpp"
#include "maintseg/detectors.hpp"
#include "maintseg/ingest.hpp"
#include "maintseg/matrix_profile.hpp"
#include "maintseg/metrics.hpp"
#include "maintseg/protocol.hpp"
#include "maintseg/segmentation.hpp"
#include "maintseg/sweep.hpp"
#include "maintseg/synth.hpp"

namespace py = pybind11;
using namespace maintseg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Signal to_signal(const Array& values) {
  const auto info = values.request();
  if (info.ndim == 1) {
    const auto* p = static_cast<const double*>(info.ptr);
    return Signal::from_column(std::span<const double>(p, static_cast<std::size_t>(info.shape[0])));
  }
  if (info.ndim != 2) throw std::invalid_argument("expected a 1-d or 2-d array");
  const auto rows = static_cast<std::size_t>(info.shape[0]);
  const auto cols = static_cast<std::size_t>(info.shape[1]);
  const auto* p = static_cast<const double*>(info.ptr);
  return Signal(rows, cols, std::vector<double>(p, p + rows * cols));
}

Array to_array(const Signal& s) {
  Array out({s.rows(), s.cols()});
  std::copy(s.data().begin(), s.data().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& values) {
  const auto info = values.request();
  if (info.ndim != 1) throw std::invalid_argument("expected a 1-d array");
  const auto* p = static_cast<const double*>(info.ptr);
  return {p, p + info.shape[0]};
}

BusinessParams make_params(double rd, double pp, double s) {
  BusinessParams params;
  params.rd = rd;
  params.pp = pp;
  params.s = s;
  params.validate();
  return params;
}

py::dict record_dict(const EvaluationRecord& r) {
  py::dict d;
  d["atm_id"] = r.atm_id;
  d["cycle_index"] = r.cycle_index;
  d["config_id"] = r.config_id;
  d["verdict"] = std::string(to_string(r.verdict));
  d["a"] = r.alert ? py::cast(r.alert->a) : py::none();
  d["window_number"] = r.alert ? py::cast(r.alert->window_number) : py::none();
  d["n"] = r.n;
  d["e_score"] = r.e_score;
  return d;
}

using Segmenter = Segmentation (*)(const Signal&, const SegmentCost&, double, std::size_t);

void bind_segmenter(py::module_& m, const char* name, Segmenter fn) {
  m.def(
      name,
      [fn](const Array& signal, const std::string& cost, double penalty, std::size_t min_size) {
        const auto seg = fn(to_signal(signal), SegmentCost::parse(cost), penalty, min_size);
        return py::make_tuple(seg.breakpoints, seg.total_cost);
      },
      py::arg("signal"), py::arg("cost") = "L2", py::arg("penalty") = 1.0, py::arg("min_size") = 2);
}

}  // namespace

PYBIND11_MODULE(_maintseg, m) {
  m.attr("__version__") = MAINTSEG_VERSION;

  py::register_exception<GridSpecError>(m, "GridSpecError", PyExc_ValueError);
  py::register_exception<IncompleteGridError>(m, "IncompleteGridError", PyExc_ValueError);

  py::class_<LifeCycle>(m, "LifeCycle")
      .def_readonly("atm_id", &LifeCycle::atm_id)
      .def_readonly("cycle_index", &LifeCycle::cycle_index)
      .def_readonly("feature_names", &LifeCycle::feature_names)
      .def_readonly("period_hours", &LifeCycle::period_hours)
      .def_readonly("ended_in_failure", &LifeCycle::ended_in_failure)
      .def_property_readonly("samples", [](const LifeCycle& c) { return to_array(c.samples); })
      .def("__len__", &LifeCycle::length)
      .def("__repr__", [](const LifeCycle& c) {
        return "<LifeCycle " + c.atm_id + "#" + std::to_string(c.cycle_index) + " n=" + std::to_string(c.length()) + ">";
      });

  bind_segmenter(m, "pelt", static_cast<Segmenter>(&pelt));
  bind_segmenter(m, "binseg", static_cast<Segmenter>(&binseg));
  bind_segmenter(m, "bottomup", static_cast<Segmenter>(&bottomup));
  m.def(
      "kcpd",
      [](const Array& signal, std::optional<double> gamma, double penalty, std::size_t min_size) {
        const auto seg = kcpd(to_signal(signal), gamma, penalty, min_size);
        return py::make_tuple(seg.breakpoints, seg.total_cost);
      },
      py::arg("signal"), py::arg("gamma") = py::none(), py::arg("penalty") = 1.0, py::arg("min_size") = 2);

  m.def(
      "matrix_profile",
      [](const Array& series, std::size_t window) {
        const auto x = to_vector(series);
        const auto mp = matrix_profile(x, window);
        return py::make_tuple(py::array_t<double>(mp.profile.size(), mp.profile.data()),
                              py::array_t<std::ptrdiff_t>(mp.index.size(), mp.index.data()));
      },
      py::arg("series"), py::arg("m"));
  m.def(
      "fluss_cac",
      [](const std::vector<std::ptrdiff_t>& index, std::size_t window) {
        const auto cac = fluss_cac(index, window);
        return py::array_t<double>(cac.size(), cac.data());
      },
      py::arg("index"), py::arg("m"));

  m.def("e_score", &e_score, py::arg("a"), py::arg("n"), py::arg("pp"), py::arg("rd"), py::arg("s"));
  m.def(
      "classify",
      [](std::optional<double> a, double n, double pp, double rd) { return std::string(to_string(classify(a, n, pp, rd))); },
      py::arg("a"), py::arg("n"), py::arg("pp"), py::arg("rd"));

  m.def(
      "normalize_config", [](const std::string& id) { return DetectorConfig::parse(id).id(); }, py::arg("config_id"));
  m.def(
      "detect",
      [](const Array& window, const std::string& config_id) {
        return detect(to_signal(window), DetectorConfig::parse(config_id));
      },
      py::arg("window"), py::arg("config_id"));

  m.def(
      "synthesize",
      [](const py::dict& spec) {
        const auto doc = nlohmann::json::parse(py::str(py::module_::import("json").attr("dumps")(spec)).cast<std::string>());
        return synthesize(SynthSpec::from_json(doc));
      },
      py::arg("spec") = py::dict());
  m.def("read_cycles", &read_cycle_dir, py::arg("directory"));
  m.def(
      "write_cycles",
      [](const std::vector<LifeCycle>& cycles, const std::filesystem::path& dir) {
        for (const auto& c : cycles) write_cycle(c, dir);
      },
      py::arg("cycles"), py::arg("directory"));
  m.def("corpus_fingerprint", &corpus_fingerprint, py::arg("directory"));

  m.def(
      "sweep",
      [](const std::vector<LifeCycle>& cycles, const std::vector<std::string>& config_ids, double rd, double pp,
         double s, std::size_t step, const std::string& alert_at, std::size_t workers) {
        std::vector<DetectorConfig> configs;
        for (const auto& id : config_ids) configs.push_back(DetectorConfig::parse(id));
        SweepOptions options;
        options.params = make_params(rd, pp, s);
        options.step = step;
        options.timing = parse_alert_timing(alert_at);
        options.workers = workers;
        ResultsTable table;
        {
          py::gil_scoped_release release;
          table = run_sweep(cycles, configs, options);
        }
        py::list records;
        for (const auto& r : table.records) records.append(record_dict(r));
        py::list failures;
        for (const auto& f : table.failures) {
          failures.append(py::make_tuple(f.atm_id, f.cycle_index, f.config_id, f.reason));
        }
        py::dict out;
        out["records"] = records;
        out["failures"] = failures;
        out["partial"] = table.partial;
        return out;
      },
      py::arg("cycles"), py::arg("configs"), py::arg("rd") = 1.0, py::arg("pp") = 14.0, py::arg("s") = 0.2,
      py::arg("step") = 7, py::arg("alert_at") = "window-end", py::arg("workers") = 1);

  m.def(
      "summarize",
      [](const std::vector<py::dict>& rows) {
        std::vector<EvaluationRecord> records;
        for (const auto& row : rows) {
          EvaluationRecord r;
          r.atm_id = row["atm_id"].cast<std::string>();
          r.cycle_index = row["cycle_index"].cast<int>();
          r.config_id = row["config_id"].cast<std::string>();
          r.verdict = parse_verdict(row["verdict"].cast<std::string>());
          r.e_score = row["e_score"].cast<double>();
          records.push_back(std::move(r));
        }
        const auto avg = best_average_config(records);
        const auto per = best_per_sample(records);
        py::dict out;
        out["best_average_config"] = avg.config_id;
        out["best_average_mean_e"] = avg.aggregate.mean_e;
        out["best_per_sample_mean_e"] = per.mean_e;
        return out;
      },
      py::arg("records"));
}
