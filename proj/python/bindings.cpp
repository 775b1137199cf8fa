#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "annex/analysis.hpp"
#include "annex/codec.hpp"
#include "annex/errors.hpp"
#include "annex/simulate.hpp"
#include "annex/trace.hpp"

namespace py = pybind11;
using namespace annex;

namespace {

std::vector<FieldElement> to_elements(const GaloisField& f, const std::vector<std::uint32_t>& v) {
  std::vector<FieldElement> out;
  out.reserve(v.size());
  for (auto x : v) out.push_back(f.element(x));
  return out;
}

std::vector<std::uint32_t> to_ints(std::span<const FieldElement> v) {
  std::vector<std::uint32_t> out;
  out.reserve(v.size());
  for (auto e : v) out.push_back(e.value);
  return out;
}

Matrix to_matrix(const GaloisField& f, const std::vector<std::vector<std::uint32_t>>& rows) {
  const std::size_t r = rows.size(), c = r ? rows.front().size() : 0;
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ParameterError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = f.element(rows[i][j]);
  }
  return m;
}

std::vector<std::vector<std::uint32_t>> from_matrix(const Matrix& m) {
  std::vector<std::vector<std::uint32_t>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = to_ints(m.row(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random annex codes: finite-field codec, overlap analysis, throughput prediction, simulation";

  py::register_exception<RankDeficiencyError>(m, "RankDeficiencyError", PyExc_ArithmeticError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<SoundnessError>(m, "SoundnessError", PyExc_AssertionError);

  // -- field -------------------------------------------------------------
  py::class_<GaloisField>(m, "GaloisField")
      .def(py::init<unsigned>(), py::arg("degree") = 8)
      .def(py::init<unsigned, std::uint32_t>(), py::arg("degree"), py::arg("polynomial"))
      .def_static("with_size", &GaloisField::with_size, py::arg("q"))
      .def_property_readonly("degree", &GaloisField::degree)
      .def_property_readonly("size", &GaloisField::size)
      .def_property_readonly("polynomial", &GaloisField::polynomial)
      .def("add", [](const GaloisField& f, std::uint32_t a, std::uint32_t b) {
        return f.add(f.element(a), f.element(b)).value;
      })
      .def("mul", [](const GaloisField& f, std::uint32_t a, std::uint32_t b) {
        return f.mul(f.element(a), f.element(b)).value;
      })
      .def("inv", [](const GaloisField& f, std::uint32_t a) { return f.inv(f.element(a)).value; })
      .def("div", [](const GaloisField& f, std::uint32_t a, std::uint32_t b) {
        return f.div(f.element(a), f.element(b)).value;
      })
      .def("rank", [](const GaloisField& f, const std::vector<std::vector<std::uint32_t>>& rows) {
        return rank(f, to_matrix(f, rows));
      }, "row rank of a matrix given as a list of rows")
      .def("solve", [](const GaloisField& f, const std::vector<std::vector<std::uint32_t>>& a,
                       const std::vector<std::vector<std::uint32_t>>& rhs) {
        return from_matrix(solve(f, to_matrix(f, a), to_matrix(f, rhs)));
      })
      .def("__repr__", &GaloisField::to_string);

  // -- layout ------------------------------------------------------------
  py::enum_<Scheme>(m, "Scheme")
      .value("RANDOM_ANNEX", Scheme::kRandomAnnex)
      .value("HEAD_TO_TOE", Scheme::kHeadToToe)
      .value("DISJOINT", Scheme::kDisjoint);
  m.def("parse_scheme", [](const std::string& s) { return parse_scheme(s); });

  py::class_<CodeParams>(m, "CodeParams")
      .def(py::init([](std::size_t N, std::size_t h, std::size_t l, std::size_t d, std::uint32_t q) {
             CodeParams p{N, h, l, d, q};
             p.validate();
             return p;
           }),
           py::arg("N"), py::arg("h"), py::arg("l") = 0, py::arg("d") = 1, py::arg("q") = 256)
      .def_readwrite("N", &CodeParams::N)
      .def_readwrite("h", &CodeParams::h)
      .def_readwrite("l", &CodeParams::l)
      .def_readwrite("d", &CodeParams::d)
      .def_readwrite("q", &CodeParams::q)
      .def_property_readonly("n", &CodeParams::n)
      .def_property_readonly("g", &CodeParams::g)
      .def("__repr__", [](const CodeParams& p) {
        return "CodeParams(N=" + std::to_string(p.N) + ", h=" + std::to_string(p.h) +
               ", l=" + std::to_string(p.l) + ", d=" + std::to_string(p.d) +
               ", q=" + std::to_string(p.q) + ")";
      });

  py::class_<GenerationLayout>(m, "GenerationLayout")
      .def_property_readonly("params", &GenerationLayout::params)
      .def_property_readonly("scheme", &GenerationLayout::scheme)
      .def_property_readonly("generation_count", &GenerationLayout::generation_count)
      .def("members", [](const GenerationLayout& l, GenerationIndex i) {
        if (i >= l.generation_count()) throw py::index_error("generation index out of range");
        auto s = l.members(i);
        return std::vector<PacketIndex>(s.begin(), s.end());
      })
      .def("generations_of", [](const GenerationLayout& l, PacketIndex p) {
        if (p >= l.packet_count()) throw py::index_error("packet index out of range");
        std::vector<GenerationIndex> out;
        for (const auto& mem : l.generations_of(p)) out.push_back(mem.generation);
        return out;
      })
      .def("degree", [](const GenerationLayout& l, PacketIndex p) {
        if (p >= l.packet_count()) throw py::index_error("packet index out of range");
        return l.degree(p);
      })
      .def("to_json", &GenerationLayout::to_json)
      .def_static("from_json", [](const std::string& s) { return GenerationLayout::from_json(s); });

  m.def("make_random_annex", &make_random_annex, py::arg("params"), py::arg("seed"));
  m.def("make_head_to_toe", &make_head_to_toe, py::arg("params"));
  m.def("make_disjoint", &make_disjoint, py::arg("params"));
  m.def("make_layout", &make_layout, py::arg("scheme"), py::arg("params"), py::arg("seed") = 0);

  py::class_<LayoutStats>(m, "LayoutStats")
      .def_readonly("pi", &LayoutStats::pi)
      .def_readonly("mean_degree", &LayoutStats::mean_degree)
      .def_readonly("var_degree", &LayoutStats::var_degree)
      .def_readonly("expected_unique", &LayoutStats::expected_unique)
      .def_readonly("overlap_prob", &LayoutStats::overlap_prob)
      .def_readonly("forced_overlap", &LayoutStats::forced_overlap);
  m.def("layout_statistics", &layout_statistics, py::arg("params"));

  // -- codec -------------------------------------------------------------
  py::class_<CodedPacket>(m, "CodedPacket")
      .def_readonly("gen_index", &CodedPacket::gen_index)
      .def_property_readonly("coding_vector", [](const CodedPacket& c) { return to_ints(c.coding_vector); })
      .def_property_readonly("payload", [](const CodedPacket& c) { return to_ints(c.payload); });

  m.def("encode",
        [](const GenerationLayout& layout, const GaloisField& f,
           const std::vector<std::vector<std::uint32_t>>& packets, GenerationIndex j,
           const std::vector<std::uint32_t>& coding_vector) {
          std::vector<Packet> src;
          for (const auto& p : packets) src.push_back(to_elements(f, p));
          return encode_with(layout, f, src, j, to_elements(f, coding_vector));
        },
        py::arg("layout"), py::arg("field"), py::arg("packets"), py::arg("gen_index"),
        py::arg("coding_vector"));

  py::class_<DecodeReport>(m, "DecodeReport")
      .def_readonly("innovative", &DecodeReport::innovative)
      .def_readonly("newly_decoded_generations", &DecodeReport::newly_decoded_generations)
      .def_readonly("newly_resolved_packets", &DecodeReport::newly_resolved_packets)
      .def_readonly("complete", &DecodeReport::complete);

  // The decoder keeps references to its layout and field; keep_alive ties
  // their lifetimes to the Python object.
  py::class_<Decoder>(m, "Decoder")
      .def(py::init([](const GenerationLayout& layout, const GaloisField& f, std::size_t d, bool cascade) {
             return new Decoder(layout, f, d, DecoderOptions{cascade});
           }),
           py::arg("layout"), py::arg("field"), py::arg("payload_size") = 1, py::arg("cascade") = true,
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
      .def("ingest", &Decoder::ingest, py::arg("packet"))
      .def("is_complete", &Decoder::is_complete)
      .def("is_resolved", &Decoder::is_resolved)
      .def_property_readonly("resolved_count", &Decoder::resolved_count)
      .def_property_readonly("decoded_generation_count", &Decoder::decoded_generation_count)
      .def("recover", [](const Decoder& d) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& p : d.recover()) out.push_back(to_ints(p));
        return out;
      });

  // -- analysis ----------------------------------------------------------
  m.def("omega", &omega, py::arg("params"), py::arg("s"));
  m.def("omega_profile", &omega_profile, py::arg("params"));
  m.def("omega_asymptotic", &omega_asymptotic, py::arg("h"), py::arg("alpha"), py::arg("beta"));
  m.def("layout_overlap_profile", &layout_overlap_profile, py::arg("layout"));
  m.def("eta", &eta, py::arg("g"), py::arg("x"), py::arg("q"));
  m.def("eta_exact", &eta_exact, py::arg("g"), py::arg("x"), py::arg("q"));
  m.attr("UNBOUNDED") = py::int_(kUnbounded);
  m.def("partial_exp_sum", &partial_exp_sum, py::arg("m"), py::arg("x"));
  m.def("poisson_band", &poisson_band, py::arg("hi"), py::arg("lo"), py::arg("x"));

  py::class_<CollectorProfile>(m, "CollectorProfile")
      .def(py::init([](std::vector<std::size_t> k, std::vector<std::size_t> mm) {
             return CollectorProfile{std::move(k), std::move(mm)};
           }),
           py::arg("k"), py::arg("m"))
      .def_readonly("k", &CollectorProfile::k)
      .def_readonly("m", &CollectorProfile::m)
      .def_property_readonly("A", &CollectorProfile::A)
      .def("__eq__", [](const CollectorProfile& a, const CollectorProfile& b) { return a == b; });
  m.def("condense", [](const std::vector<std::size_t>& mp) { return condense(mp); }, py::arg("m_prime"));
  m.def("collection_integrand",
        [](std::size_t n, const CollectorProfile& p, double x) { return collection_integrand(n, p, x); },
        py::arg("n"), py::arg("profile"), py::arg("x"));
  m.def("expected_collection",
        [](std::size_t n, const CollectorProfile& p, double rel_tol) {
          return expected_collection(n, p, CollectionOptions{rel_tol});
        },
        py::arg("n"), py::arg("profile"), py::arg("rel_tol") = 1e-8);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("omega", &Prediction::omega)
      .def_readonly("requirements", &Prediction::requirements)
      .def_readonly("profile", &Prediction::profile)
      .def_readonly("expected_packets", &Prediction::expected_packets)
      .def_readonly("uniform_generation_size", &Prediction::uniform_generation_size);
  m.def("predict", [](const CodeParams& p) { return predict(p); }, py::arg("params"));
  m.def("predict_from_profile",
        [](const CodeParams& p, std::vector<double> om) { return predict_from_profile(p, std::move(om)); },
        py::arg("params"), py::arg("omega"));
  m.def("predict_expected_packets", &predict_expected_packets, py::arg("params"));

  // -- simulation --------------------------------------------------------
  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("packets_to_completion", &TrialResult::packets_to_completion)
      .def_readonly("decoded_generations_timeline", &TrialResult::decoded_generations_timeline)
      .def_readonly("per_generation_received", &TrialResult::per_generation_received)
      .def_readonly("non_innovative", &TrialResult::non_innovative)
      .def_readonly("max_solve_dimension", &TrialResult::max_solve_dimension);
  m.def("run_trial",
        [](const GenerationLayout& layout, std::uint64_t seed, std::size_t d, bool cascade) {
          const auto f = GaloisField::with_size(layout.params().q);
          py::gil_scoped_release release;
          return run_trial(layout, f, seed, TrialOptions{.d = d, .cascade = cascade});
        },
        py::arg("layout"), py::arg("seed"), py::arg("d") = 1, py::arg("cascade") = true);

  py::class_<MeanEstimate>(m, "MeanEstimate")
      .def_readonly("mean", &MeanEstimate::mean)
      .def_readonly("std_error", &MeanEstimate::std_error)
      .def_readonly("std_dev", &MeanEstimate::std_dev)
      .def_readonly("trials", &MeanEstimate::trials)
      .def_readonly("seed", &MeanEstimate::seed)
      .def_readonly("samples", &MeanEstimate::samples);
  m.def("estimate_mean",
        [](Scheme s, const CodeParams& p, std::size_t trials, std::uint64_t seed, bool cascade,
           unsigned threads) {
          py::gil_scoped_release release;
          return estimate_mean(s, p, trials, seed, TrialOptions{.cascade = cascade}, threads);
        },
        py::arg("scheme"), py::arg("params"), py::arg("trials"), py::arg("seed"),
        py::arg("cascade") = true, py::arg("threads") = 0);

  py::class_<FailureCurve>(m, "FailureCurve")
      .def_readonly("grid", &FailureCurve::grid)
      .def_readonly("p_fail", &FailureCurve::p_fail)
      .def_readonly("trials", &FailureCurve::trials)
      .def_readonly("seed", &FailureCurve::seed);
  m.def("failure_curve",
        [](Scheme s, const CodeParams& p, const std::vector<std::size_t>& grid, std::size_t trials,
           std::uint64_t seed, unsigned threads) {
          py::gil_scoped_release release;
          return failure_curve(s, p, grid, trials, seed, threads);
        },
        py::arg("scheme"), py::arg("params"), py::arg("grid"), py::arg("trials"), py::arg("seed"),
        py::arg("threads") = 0);

  py::class_<OverlapEstimate>(m, "OverlapEstimate")
      .def_readonly("mean", &OverlapEstimate::mean)
      .def_readonly("std_error", &OverlapEstimate::std_error)
      .def_readonly("samples", &OverlapEstimate::samples);
  m.def("empirical_overlap", &empirical_overlap, py::arg("params"), py::arg("s"), py::arg("samples"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
}
