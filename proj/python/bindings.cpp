#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dscrypt/errors.hpp"
#include "dscrypt/protocol.hpp"
#include "dscrypt/stability.hpp"

namespace py = pybind11;
using namespace dscrypt;

namespace {

// pybind11 holders cannot be shared_ptr<const T>
using PyRing = std::shared_ptr<Ring>;
PyRing py_ring(const RingPtr& r) { return std::const_pointer_cast<Ring>(r); }

std::vector<Code> encrypt_point(SessionCipher& c, const std::vector<Code>& p) { return c.encrypt(p); }

py::dict certificate_dict(const StabilityCertificate& c) {
  py::dict d;
  d["map_hash"] = c.map_hash;
  d["claimed_degree"] = c.claimed_degree;
  d["degree"] = c.degree;
  d["density"] = c.density;
  d["power_degrees"] = c.power_degrees;
  d["valid"] = c.valid;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dscrypt, m) {
  m.doc() = "Stable polynomial maps on Schubert-graph point spaces";

  auto base = py::register_exception<Error>(m, "DscryptError", PyExc_RuntimeError);
  py::register_exception<MessageCapExceeded>(m, "MessageCapExceeded", base.ptr());
  py::register_exception<DegreeExceeded>(m, "DegreeExceeded", base.ptr());

  py::class_<Ring, PyRing>(m, "Ring")
      .def_static("parse", [](std::string_view d) { return py_ring(Ring::parse(d)); })
      .def_property_readonly("descriptor", &Ring::descriptor)
      .def_property_readonly("size", &Ring::size)
      .def_property_readonly("characteristic", &Ring::characteristic)
      .def_property_readonly("is_field", &Ring::is_field)
      .def("add", &Ring::add)
      .def("mul", &Ring::mul)
      .def("inv", &Ring::inv)
      .def("__repr__", [](const Ring& r) { return "Ring('" + r.descriptor() + "')"; });

  py::class_<SeedStream>(m, "SeedStream")
      .def(py::init<std::uint64_t>())
      .def("next_u64", &SeedStream::next_u64)
      .def("uniform", &SeedStream::uniform)
      .def("fork", [](SeedStream& s, const std::string& label) { return s.fork(label); }, py::arg("label") = "");

  py::class_<PolyMap>(m, "PolyMap")
      .def_static("parse", &PolyMap::parse)
      .def_static("identity", [](const PyRing& r, std::size_t n) { return PolyMap::identity(r, n); })
      .def_property_readonly("ring", [](const PolyMap& f) { return py_ring(f.ring()); })
      .def_property_readonly("dimension", &PolyMap::dimension)
      .def_property_readonly("degree", &PolyMap::degree)
      .def_property_readonly("density", &PolyMap::density)
      .def_property_readonly("total_terms", &PolyMap::total_terms)
      .def("apply", [](const PolyMap& f, const std::vector<Code>& x) { return f.apply(x); })
      .def("is_identity", &PolyMap::is_identity)
      .def("to_text", &PolyMap::to_text)
      .def("__eq__", &PolyMap::operator==)
      .def("__str__", &PolyMap::to_text);

  py::class_<SymbolicKey>(m, "SymbolicKey")
      .def_static("parse", &SymbolicKey::parse)
      .def_property_readonly("k", &SymbolicKey::k)
      .def_property_readonly("length", &SymbolicKey::length)
      .def("to_text", &SymbolicKey::to_text)
      .def("__eq__", &SymbolicKey::operator==);

  m.def("compose", &map_compose, "x -> g(f(x))", py::arg("f"), py::arg("g"));
  m.def("power", &map_power, py::arg("f"), py::arg("e"), py::arg("degree_cap") = py::none());
  m.def("eta", &eta);
  m.def("key_product", &key_product);
  m.def("key_inverse", py::overload_cast<const SymbolicKey&>(&key_inverse));
  m.def("schubert_dimension", &schubert_dimension);

  m.def(
      "stable_group_element",
      [](const PyRing& ring, std::size_t k, SeedStream& rng, const std::string& terminal) {
        return generate_stable_group_element(ring, k, rng, parse_terminal_kind(terminal));
      },
      py::arg("ring"), py::arg("k"), py::arg("rng"), py::arg("terminal") = "singer");
  m.def(
      "stable_family_member",
      [](const PyRing& ring, std::size_t k, int degree, double density_exponent, const std::string& terminal,
         SeedStream& rng) {
        FamilySpec spec;
        spec.ring = ring;
        spec.k = k;
        spec.degree = degree;
        spec.density_exponent = density_exponent;
        spec.terminal = parse_terminal_kind(terminal);
        auto fm = generate_stable_family_member(spec, rng);
        return py::make_tuple(fm.map, fm.key, fm.density_low, fm.density_high);
      },
      py::arg("ring"), py::arg("k"), py::arg("degree"), py::arg("density_exponent"), py::arg("terminal"),
      py::arg("rng"));
  m.def(
      "check_stability",
      [](const PolyMap& f, int claimed, std::size_t J) { return certificate_dict(check_stability(f, claimed, J)); },
      py::arg("f"), py::arg("claimed_degree"), py::arg("powers") = 10);

  m.def("dh_shares", [](const PolyMap& g, std::uint64_t kA, std::uint64_t kB) {
    auto r = dh_run(g, kA, kB);
    return py::make_tuple(r.alice_share, r.bob_share);
  });

  m.def("message_cap", [](std::size_t n, const std::vector<std::uint32_t>& pw, std::uint64_t c) {
    return message_cap(n, pw, c);
  }, py::arg("n"), py::arg("password"), py::arg("c") = 1);
  m.def("word_degree_estimate", [](const std::vector<std::uint32_t>& pw) { return word_degree_estimate(pw); });

  py::class_<SessionCipher>(m, "SessionCipher")
      .def(py::init<std::vector<PolyMap>, std::vector<std::uint32_t>, std::uint64_t, std::vector<PolyMap>>(),
           py::arg("generators"), py::arg("password"), py::arg("cap_constant") = 1,
           py::arg("inverses") = std::vector<PolyMap>{})
      .def("encrypt", &encrypt_point)
      .def("decrypt", [](const SessionCipher& c, const std::vector<Code>& y) { return c.decrypt(y); })
      .def("word_map", &SessionCipher::word_map)
      .def_property_readonly("counter", &SessionCipher::counter)
      .def_property_readonly("cap", &SessionCipher::cap);

  m.def(
      "session_pair",
      [](const PyRing& ring, std::size_t k, SeedStream& rng) {
        const auto keys = twisted_keygen(ring, k, rng);
        const std::vector<AffineMap> conj{keys.secret.T};
        const auto t = make_tools(ring, k, rng, conj);
        return py::make_tuple(t.P, t.Q, t.P_inverse, t.Q_inverse);
      },
      "Generators P, Q and their inverses from a tools exchange.");

  m.def(
      "simulate",
      [](const std::string& scheme, const std::string& ring, std::size_t k, std::uint64_t seed,
         std::size_t messages, const std::string& policy) {
        SimConfig cfg;
        cfg.ring = Ring::parse(ring);
        cfg.k = k;
        cfg.seed = seed;
        cfg.messages = messages;
        cfg.exponents.policy = parse_exponent_policy(policy);
        const auto r = simulate_protocol(parse_scheme(scheme), cfg);
        py::list checks;
        for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.pass, c.detail));
        return py::make_tuple(r.pass(), checks, r.transcript.to_text());
      },
      py::arg("scheme"), py::arg("ring"), py::arg("k") = 2, py::arg("seed") = 1, py::arg("messages") = 10,
      py::arg("policy") = "uniform");
  m.def("replay", [](const std::string& text) -> py::object {
    const auto mismatch = replay_and_compare(Transcript::parse(text));
    if (!mismatch) return py::none();
    return py::str(mismatch->message());
  }, "None when the transcript replays exactly, else the first mismatch.");
}
