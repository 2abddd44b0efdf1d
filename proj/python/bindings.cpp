#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kloost/bounds.hpp"
#include "kloost/diagram.hpp"
#include "kloost/kloosterman.hpp"
#include "kloost/oracle.hpp"

namespace py = pybind11;
using namespace kloost;

namespace {

using VertexKey = std::pair<int, int>;

py::int_ to_py(const mpz_class& z) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

CharacterPair characters(int N, const std::optional<std::vector<i64>>& psi, const std::optional<std::vector<i64>>& psi_prime) {
  const std::size_t n = static_cast<std::size_t>(N);
  CharacterPair ch{psi.value_or(std::vector<i64>(n, 1)), psi_prime.value_or(std::vector<i64>(n, 1))};
  if (ch.psi.size() != n || ch.psi_prime.size() != n) throw std::invalid_argument("characters need N entries");
  return ch;
}

py::dict sum_dict(const SumResult& s) {
  py::dict d;
  d["value"] = s.value.complex_value();
  d["modulus"] = s.value.modulus();
  std::vector<std::pair<u64, i64>> coeffs;
  const CyclotomicValue red = s.value.reduced();
  for (const auto& [t, n] : red.coefficients())
    if (n != 0) coeffs.emplace_back(t, n);
  d["coefficients"] = coeffs;
  d["magnitude"] = s.magnitude.value;
  d["magnitude_error"] = s.magnitude.error;
  d["cell_count"] = s.cell_count;
  return d;
}

EvalOptions eval_options(u64 budget, int threads) {
  EvalOptions opt;
  opt.budget = budget;
  opt.threads = threads;
  return opt;
}

ModuliAssignment assignment(const std::map<VertexKey, int>& m) {
  ModuliAssignment a;
  for (const auto& [k, x] : m) a.m[{k.first, k.second}] = x;
  return a;
}

}  // namespace

PYBIND11_MODULE(_kloost, m) {
  m.doc() = "Local generalized Kloosterman sums on GL(N+1) over Q_p";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<ArithmeticError>(m, "ArithmeticRangeError", PyExc_OverflowError);

  py::class_<WeylElement>(m, "WeylElement")
      .def(py::init(&make_admissible), py::arg("blocks"))
      .def_property_readonly("blocks", &WeylElement::blocks)
      .def_property_readonly("size", &WeylElement::size)
      .def_property_readonly("rank", &WeylElement::rank)
      .def_property_readonly("length", &WeylElement::length)
      .def_property_readonly("word", &WeylElement::word)
      .def_property_readonly("permutation", &WeylElement::permutation)
      .def_property_readonly("gamma_labels",
                             [](const WeylElement& w) {
                               std::vector<VertexKey> out;
                               for (const Vertex& v : w.gamma_labels()) out.emplace_back(v.i, v.j);
                               return out;
                             })
      .def("is_long_element", &WeylElement::is_long_element)
      .def("__repr__", [](const WeylElement& w) { return "WeylElement(" + w.str() + ")"; });

  m.def(
      "index_set",
      [](const std::vector<int>& blocks) {
        std::vector<VertexKey> out;
        for (const Vertex& v : index_set(make_admissible(blocks)).ordered) out.emplace_back(v.i, v.j);
        return out;
      },
      py::arg("blocks"), "I_w in gamma order");

  m.def(
      "moduli_assignments",
      [](const std::vector<int>& blocks, const std::vector<int>& r) {
        std::vector<std::map<VertexKey, int>> out;
        for (const auto& a : moduli_assignments(make_admissible(blocks), r)) {
          std::map<VertexKey, int> d;
          for (const auto& [v, x] : a.m) d[{v.i, v.j}] = x;
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("blocks"), py::arg("r"));

  m.def(
      "evaluate_sum",
      [](const std::vector<int>& blocks, long p, const std::vector<int>& r, std::optional<std::vector<i64>> psi,
         std::optional<std::vector<i64>> psi_prime, std::optional<int> level, u64 budget, int threads) {
        const WeylElement w = make_admissible(blocks);
        const CharacterPair ch = characters(w.rank(), psi, psi_prime);
        const EvalOptions opt = eval_options(budget, threads);
        SumResult s;
        {
          py::gil_scoped_release release;
          s = level ? evaluate_sum_gamma0(w, {p, r}, ch, *level, opt) : evaluate_sum(w, {p, r}, ch, opt);
        }
        return sum_dict(s);
      },
      py::arg("blocks"), py::arg("p"), py::arg("r"), py::arg("psi") = py::none(), py::arg("psi_prime") = py::none(),
      py::arg("level") = py::none(), py::arg("budget") = u64{100000000}, py::arg("threads") = 0,
      "Kl_p(r, psi, psi', w); characters default to all ones, level restricts to Gamma_0(p^level)");

  m.def(
      "oracle_sum",
      [](const std::vector<int>& blocks, long p, const std::vector<int>& r, std::optional<std::vector<i64>> psi,
         std::optional<std::vector<i64>> psi_prime, int level, u64 budget) {
        const WeylElement w = make_admissible(blocks);
        OracleOptions opt;
        opt.gamma0_level = level;
        opt.budget = budget;
        return sum_dict(oracle_sum(w, {p, r}, characters(w.rank(), psi, psi_prime), opt));
      },
      py::arg("blocks"), py::arg("p"), py::arg("r"), py::arg("psi") = py::none(), py::arg("psi_prime") = py::none(),
      py::arg("level") = 0, py::arg("budget") = u64{100000000}, "the same sum from a direct coset enumeration");

  m.def(
      "kloosterman_set_size",
      [](const std::vector<int>& blocks, long p, const std::vector<int>& r) {
        return enumerate_kloosterman_set(make_admissible(blocks), {p, r}).size();
      },
      py::arg("blocks"), py::arg("p"), py::arg("r"));

  m.def(
      "classical_kloosterman", [](i64 a, i64 b, u64 c) { return sum_dict(classical_kloosterman(a, b, c)); },
      py::arg("m"), py::arg("n"), py::arg("c"));
  m.def(
      "hyper_kloosterman", [](i64 a, int k, long p, int r) { return sum_dict(hyper_kloosterman(a, k, p, r)); },
      py::arg("a"), py::arg("k"), py::arg("p"), py::arg("r"));

  m.def(
      "scaling_identity_check",
      [](const std::vector<int>& blocks, const std::map<VertexKey, int>& mm, long p, const std::vector<i64>& psi,
         const std::vector<i64>& psi_prime, int k) {
        return scaling_identity_check(make_admissible(blocks), assignment(mm), p, {psi, psi_prime}, k);
      },
      py::arg("blocks"), py::arg("m"), py::arg("p"), py::arg("psi"), py::arg("psi_prime"), py::arg("k"));

  m.def(
      "inversion_identity_check",
      [](const std::vector<int>& blocks, long p, const std::vector<int>& r, std::optional<std::vector<i64>> psi,
         std::optional<std::vector<i64>> psi_prime) {
        const WeylElement w = make_admissible(blocks);
        return inversion_identity_check(w, {p, r}, characters(w.rank(), psi, psi_prime)).holds;
      },
      py::arg("blocks"), py::arg("p"), py::arg("r"), py::arg("psi") = py::none(), py::arg("psi_prime") = py::none());

  m.def(
      "trivial_bound", [](const std::vector<int>& blocks, const std::vector<int>& r, long p) {
        return to_py(trivial_bound(make_admissible(blocks), r, p));
      },
      py::arg("blocks"), py::arg("r"), py::arg("p"));
  m.def("weil_bound", &weil_bound, py::arg("m"), py::arg("n"), py::arg("c"));
  m.def("c_constant", &c_constant, py::arg("psi"), py::arg("r"), py::arg("p"));

  m.def(
      "thm_bounds",
      [](const std::vector<int>& blocks, const std::vector<int>& r, long p, std::optional<std::vector<i64>> psi,
         std::optional<std::vector<i64>> psi_prime) {
        const WeylElement w = make_admissible(blocks);
        const BoundReport b = thm_bounds(w, r, characters(w.rank(), psi, psi_prime), p);
        py::dict d;
        d["abs_kl"] = b.observed;
        d["trivial"] = to_py(b.trivial);
        d["weil"] = b.weil ? py::object(py::float_(*b.weil)) : py::object(py::none());
        d["C"] = b.C;
        d["length_bound"] = b.length_bound;
        d["rank_length_bound"] = b.rank_length_bound;
        d["ratio_length"] = b.ratio_length;
        d["ratio_rank_length"] = b.ratio_rank_length;
        d["trivial_ok"] = b.trivial_ok;
        d["weil_ok"] = b.weil_ok;
        return d;
      },
      py::arg("blocks"), py::arg("r"), py::arg("p"), py::arg("psi") = py::none(), py::arg("psi_prime") = py::none());

  m.def(
      "diagram_dot", [](const std::vector<int>& blocks) { return to_dot(build_diagram(make_admissible(blocks))); },
      py::arg("blocks"));
}
