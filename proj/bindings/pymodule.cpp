#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mulspace/fixtures.hpp"
#include "mulspace/grid.hpp"
#include "mulspace/msgf.hpp"
#include "mulspace/multiplier.hpp"
#include "mulspace/norms.hpp"
#include "mulspace/partitions.hpp"
#include "mulspace/rng.hpp"
#include "mulspace/runtime.hpp"
#include "mulspace/symbol.hpp"
#include "mulspace/verify.hpp"

namespace py = pybind11;
using namespace mulspace;

namespace {

Side parse_side(const std::string& side) {
  if (side == "space") return Side::space;
  if (side == "frequency") return Side::frequency;
  throw validation_error("side", "side must be 'space' or 'frequency'");
}

const char* side_name(Side side) { return side == Side::space ? "space" : "frequency"; }

GridFunction function_from_array(const Grid& grid, const std::string& side,
                                 const py::array_t<cplx, py::array::c_style | py::array::forcecast>& arr) {
  GridFunction f = make_zero(grid, parse_side(side));
  if (static_cast<std::size_t>(arr.size()) != f.samples.size()) {
    throw validation_error("samples", "sample count does not match the grid");
  }
  std::copy_n(arr.data(), f.samples.size(), f.samples.begin());
  return f;
}

py::array_t<cplx> array_from_function(const GridFunction& f) {
  py::array_t<cplx> arr(static_cast<py::ssize_t>(f.samples.size()));
  std::copy(f.samples.begin(), f.samples.end(), arr.mutable_data());
  return arr;
}

NormSpec build_spec(const std::string& family, double p, double q, double s,
                    const std::string& hardy_method, int stride, int levels) {
  NormSpec spec;
  if (family == "lp") {
    spec.family = NormFamily::lp;
  } else if (family == "sobolev") {
    spec.family = NormFamily::sobolev;
  } else if (family == "besov") {
    spec.family = NormFamily::besov;
  } else if (family == "modulation") {
    spec.family = NormFamily::modulation;
  } else if (family == "modulation_stft" || family == "stft") {
    spec.family = NormFamily::modulation_stft;
  } else if (family == "herz") {
    spec.family = NormFamily::herz;
  } else if (family == "flq") {
    spec.family = NormFamily::flq;
  } else if (family == "hardy1" || family == "hardy") {
    spec.family = NormFamily::hardy1;
  } else {
    throw validation_error("family", "unknown norm family " + family);
  }
  spec.p = p;
  spec.q = q;
  spec.s = s;
  spec.stft_stride = stride;
  spec.hardy_levels = levels;
  if (hardy_method == "riesz") {
    spec.hardy_method = HardyMethod::riesz;
  } else if (hardy_method == "maximal") {
    spec.hardy_method = HardyMethod::maximal;
  } else {
    throw validation_error("hardy_method", "hardy_method must be riesz or maximal");
  }
  return spec;
}

py::dict norm_result_dict(const NormResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["truncation_mass"] = r.truncation_mass;
  d["warnings"] = r.warnings;
  return d;
}

py::dict ratio_report_dict(const RatioReport& rep) {
  py::list per_input;
  for (const auto& e : rep.per_input) {
    py::dict row;
    row["id"] = e.id;
    row["lhs"] = e.lhs;
    row["rhs"] = e.rhs;
    row["ratio"] = e.ratio;
    per_input.append(row);
  }
  py::dict d;
  d["mode"] = rep.mode;
  d["lhs"] = rep.lhs_label;
  d["rhs"] = rep.rhs_label;
  d["per_input"] = per_input;
  d["ratio_min"] = rep.ratio_min;
  d["ratio_max"] = rep.ratio_max;
  d["ratio_spread"] = rep.ratio_spread;
  d["warnings"] = rep.warnings;
  return d;
}

EnsembleSpec build_ensemble_spec(const std::string& kind, int count, std::uint64_t seed,
                                 double band_lo, double band_hi, bool band_linf,
                                 double atom_scale) {
  EnsembleSpec spec;
  spec.kind = parse_ensemble_kind(kind);
  spec.count = count;
  spec.seed = seed;
  spec.band = {band_lo, band_hi, band_linf};
  spec.atom_scale = atom_scale;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_mulspace, mod) {
  mod.doc() = "dyadic multiplier pieces, time-frequency norms, and kernel diagnostics";

  py::register_exception<validation_error>(mod, "ValidationError", PyExc_ValueError);
  py::register_exception<io_error>(mod, "IoError", PyExc_OSError);

  py::class_<Grid>(mod, "Grid")
      .def(py::init([](int dim, int n, double half_width) { return make_grid(dim, n, half_width); }),
           py::arg("dim"), py::arg("n"), py::arg("half_width"))
      .def_readonly("dim", &Grid::dim)
      .def_readonly("n", &Grid::points_per_axis)
      .def_readonly("half_width", &Grid::half_width)
      .def_property_readonly("spacing", &Grid::spacing)
      .def_property_readonly("freq_spacing", &Grid::freq_spacing)
      .def_property_readonly("freq_half_width", &Grid::freq_half_width)
      .def_property_readonly("size", &Grid::size)
      .def("space_nodes",
           [](const Grid& g) {
             py::array_t<double> arr(g.points_per_axis);
             for (int i = 0; i < g.points_per_axis; ++i) arr.mutable_at(i) = g.space_node(i);
             return arr;
           })
      .def("freq_nodes",
           [](const Grid& g) {
             py::array_t<double> arr(g.points_per_axis);
             for (int i = 0; i < g.points_per_axis; ++i) arr.mutable_at(i) = g.freq_node(i);
             return arr;
           })
      .def("__repr__", [](const Grid& g) {
        return "Grid(dim=" + std::to_string(g.dim) + ", n=" + std::to_string(g.points_per_axis) +
               ", half_width=" + std::to_string(g.half_width) + ")";
      });

  mod.def("piece_reference_grid", &piece_reference_grid, py::arg("dim"));

  py::class_<GridFunction>(mod, "GridFunction")
      .def(py::init(&function_from_array), py::arg("grid"), py::arg("side"), py::arg("samples"))
      .def_readonly("grid", &GridFunction::grid)
      .def_property_readonly("side", [](const GridFunction& f) { return side_name(f.side); })
      .def_property_readonly("samples", &array_from_function)
      .def_property_readonly("cell_weight", &GridFunction::cell_weight)
      .def("__repr__", [](const GridFunction& f) {
        return std::string("GridFunction(") + side_name(f.side) + ", n=" +
               std::to_string(f.grid.points_per_axis) + "^" + std::to_string(f.grid.dim) + ")";
      });

  mod.def("fourier", &fourier, py::arg("f"));
  mod.def("inverse_fourier", &inverse_fourier, py::arg("f"));
  mod.def("forward_transform", &forward_transform, py::arg("f"));
  mod.def("inverse_transform", &inverse_transform, py::arg("f"));
  mod.def("lp_norm", &lp_norm, py::arg("f"), py::arg("p"));

  py::class_<Symbol>(mod, "Symbol")
      .def_readonly("label", &Symbol::label)
      .def("__call__",
           [](const Symbol& m, double xi0, double xi1) { return m(Point{xi0, xi1}); },
           py::arg("xi0"), py::arg("xi1") = 0.0);

  mod.def("symbol", &symbol_catalog, py::arg("name"), py::arg("params") = std::vector<double>{});
  mod.def(
      "symbol_from_callable",
      [](const std::string& label, const py::function& fn) {
        Symbol s;
        s.label = label;
        s.eval = [fn](const Point& p) -> cplx {
          py::gil_scoped_acquire gil;
          return fn(p[0], p[1]).cast<cplx>();
        };
        return s;
      },
      py::arg("label"), py::arg("fn"));

  mod.def(
      "norm",
      [](const GridFunction& f, const std::string& family, double p, double q, double s,
         const std::string& hardy_method, int stride, int levels, double sharpness) {
        NormSpec spec = build_spec(family, p, q, s, hardy_method, stride, levels);
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        UniformPartition uniform = build_uniform_partition(f.grid.dim);
        return norm_result_dict(compute_norm(f, spec, dyadic, uniform));
      },
      py::arg("f"), py::arg("family"), py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("s") = 0.0,
      py::arg("hardy_method") = "riesz", py::arg("stride") = 0, py::arg("levels") = 10,
      py::arg("sharpness") = 1.0);

  mod.def(
      "make_ensemble",
      [](const std::string& kind, int count, std::uint64_t seed, const Grid& grid, double band_lo,
         double band_hi, bool band_linf, double atom_scale) {
        return make_ensemble(build_ensemble_spec(kind, count, seed, band_lo, band_hi, band_linf,
                                                 atom_scale),
                             grid);
      },
      py::arg("kind"), py::arg("count"), py::arg("seed"), py::arg("grid"),
      py::arg("band_lo") = 0.0, py::arg("band_hi") = 4.0, py::arg("band_linf") = false,
      py::arg("atom_scale") = 1.0);

  mod.def(
      "extract_piece",
      [](const Symbol& m, int j, const Grid& reference, double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        return extract_piece(m, j, dyadic, reference).values;
      },
      py::arg("symbol"), py::arg("j"), py::arg("reference"), py::arg("sharpness") = 1.0);

  mod.def(
      "condition_report",
      [](const Symbol& m, double s, double p, int jmin, int jmax, const Grid& reference,
         double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        UniformPartition uniform = build_uniform_partition(reference.dim);
        ConditionReport rep = condition_report(m, s, p, {jmin, jmax}, dyadic, uniform, reference);
        py::list per_j;
        for (const auto& row : rep.per_j) {
          py::dict r;
          r["j"] = row.j;
          r["sobolev"] = row.sobolev;
          r["besov_half"] = row.besov_half;
          r["modulation"] = row.modulation;
          r["herz"] = row.herz;
          r["modulation_p"] = row.modulation_p;
          per_j.append(r);
        }
        py::dict sup;
        sup["sobolev"] = rep.sup.sobolev;
        sup["besov_half"] = rep.sup.besov_half;
        sup["modulation"] = rep.sup.modulation;
        sup["herz"] = rep.sup.herz;
        sup["modulation_p"] = rep.sup.modulation_p;
        py::dict d;
        d["s"] = rep.s;
        d["p"] = rep.p;
        d["per_j"] = per_j;
        d["sup"] = sup;
        d["argmax_j"] = rep.argmax_j;
        d["warnings"] = rep.warnings;
        return d;
      },
      py::arg("symbol"), py::arg("s"), py::arg("p"), py::arg("jmin"), py::arg("jmax"),
      py::arg("reference"), py::arg("sharpness") = 1.0);

  mod.def(
      "mihlin_sup",
      [](const Symbol& m, int dim, int order) {
        MihlinResult r = mihlin_sup(m, dim, order);
        py::dict d;
        d["value"] = r.value;
        d["order"] = r.order;
        d["diverged"] = r.diverged;
        return d;
      },
      py::arg("symbol"), py::arg("dim"), py::arg("order") = 0);

  mod.def("apply_multiplier", &apply_multiplier, py::arg("symbol"), py::arg("f"));

  mod.def(
      "kernel_diagnostics",
      [](const Symbol& m, int jmin, int jmax, const Grid& reference,
         const std::vector<double>& radii, double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        KernelDiagnostics diag = kernel_diagnostics(m, {jmin, jmax}, dyadic, reference, radii);
        py::list per_j;
        for (const auto& row : diag.per_j) {
          py::dict r;
          r["j"] = row.j;
          r["k_l1"] = row.k_l1;
          r["grad_k_l1"] = row.grad_k_l1;
          r["tail"] = row.tail;
          r["slope"] = row.slope;
          per_j.append(r);
        }
        py::dict d;
        d["per_j"] = per_j;
        d["max_slope"] = diag.max_slope;
        d["warnings"] = diag.warnings;
        return d;
      },
      py::arg("symbol"), py::arg("jmin"), py::arg("jmax"), py::arg("reference"), py::arg("radii"),
      py::arg("sharpness") = 1.0);

  mod.def(
      "hormander_integral",
      [](const Symbol& m, int jmin, int jmax, const Grid& grid,
         const std::vector<std::pair<double, double>>& ys, double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        std::vector<Point> points;
        for (const auto& [a, b] : ys) points.push_back({a, b});
        if (points.empty()) points = default_shift_samples(grid);
        HormanderReport rep = hormander_integral(m, {jmin, jmax}, dyadic, grid, points);
        py::list per_y;
        for (const auto& e : rep.per_y) {
          py::dict r;
          r["y"] = std::make_pair(e.y[0], e.y[1]);
          r["direct"] = e.direct;
          r["bound"] = e.bound;
          per_y.append(r);
        }
        py::dict d;
        d["per_y"] = per_y;
        d["sup_direct"] = rep.sup_direct;
        d["sup_bound"] = rep.sup_bound;
        return d;
      },
      py::arg("symbol"), py::arg("jmin"), py::arg("jmax"), py::arg("grid"),
      py::arg("ys") = std::vector<std::pair<double, double>>{}, py::arg("sharpness") = 1.0);

  mod.def(
      "equivalence_ratio",
      [](const std::string& mode, const std::string& kind, int count, std::uint64_t seed,
         const Grid& grid, double p, double q, double s, double band_lo, double band_hi,
         bool band_linf, double atom_scale, double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        UniformPartition uniform = build_uniform_partition(grid.dim);
        EnsembleSpec spec =
            build_ensemble_spec(kind, count, seed, band_lo, band_hi, band_linf, atom_scale);
        auto reports = equivalence_ratio(mode, spec, grid, {p, q, s}, dyadic, uniform);
        py::list out;
        for (const auto& rep : reports) out.append(ratio_report_dict(rep));
        return out;
      },
      py::arg("mode"), py::arg("kind"), py::arg("count"), py::arg("seed"), py::arg("grid"),
      py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("s") = 0.0, py::arg("band_lo") = 0.0,
      py::arg("band_hi") = 4.0, py::arg("band_linf") = false, py::arg("atom_scale") = 1.0,
      py::arg("sharpness") = 1.0);

  mod.def(
      "piece_equivalence_ratio",
      [](const std::string& mode, const Symbol& m, int jmin, int jmax, const Grid& reference,
         double p, double q, double s, double sharpness) {
        DyadicPartition dyadic = build_dyadic_partition(sharpness);
        UniformPartition uniform = build_uniform_partition(reference.dim);
        auto reports =
            equivalence_ratio(mode, m, {jmin, jmax}, reference, {p, q, s}, dyadic, uniform);
        py::list out;
        for (const auto& rep : reports) out.append(ratio_report_dict(rep));
        return out;
      },
      py::arg("mode"), py::arg("symbol"), py::arg("jmin"), py::arg("jmax"), py::arg("reference"),
      py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("s") = 0.0, py::arg("sharpness") = 1.0);

  mod.def("operator_norm_l2", &operator_norm_l2, py::arg("symbol"), py::arg("grid"),
          py::arg("iterations") = 256, py::arg("seed") = 0x5eed);

  mod.def(
      "atom_transfer_ratio",
      [](const Symbol& m, int count, std::uint64_t seed, const Grid& grid, double atom_scale) {
        EnsembleSpec spec =
            build_ensemble_spec("h1_atom", count, seed, 0.0, 4.0, false, atom_scale);
        return ratio_report_dict(atom_transfer_ratio(m, spec, grid));
      },
      py::arg("symbol"), py::arg("count"), py::arg("seed"), py::arg("grid"),
      py::arg("atom_scale") = 1.0);

  mod.def("read_msgf", &read_msgf, py::arg("path"));
  mod.def("write_msgf", &write_msgf, py::arg("path"), py::arg("f"));

  mod.def(
      "dyadic_partition_defect",
      [](double sharpness, int samples, std::uint64_t seed) {
        return partition_defect(build_dyadic_partition(sharpness), samples, seed);
      },
      py::arg("sharpness") = 1.0, py::arg("samples") = 4096, py::arg("seed") = 0);
  mod.def(
      "uniform_partition_defect",
      [](int dim, int samples, std::uint64_t seed) {
        return partition_defect(build_uniform_partition(dim), samples, seed);
      },
      py::arg("dim") = 1, py::arg("samples") = 4096, py::arg("seed") = 0);

  mod.def("set_threads", &runtime::set_thread_count, py::arg("n"));
  mod.attr("rng_algorithm") = Philox::algorithm();
}
