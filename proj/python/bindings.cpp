#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trngsbox/bitstream.hpp"
#include "trngsbox/entropy.hpp"
#include "trngsbox/error.hpp"
#include "trngsbox/evolver.hpp"
#include "trngsbox/metrics.hpp"
#include "trngsbox/sbox.hpp"
#include "trngsbox/spn.hpp"
#include "trngsbox/stat_tests.hpp"
#include "trngsbox/walker.hpp"

namespace py = pybind11;
using namespace trngsbox;

// Bit streams cross the boundary as '0'/'1' strings.

namespace {

std::vector<std::uint8_t> to_vec(const py::bytes& b) {
  std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes to_bytes(std::span<const std::uint8_t> v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

py::dict result_dict(const entropy::StatTestResult& r) {
  py::dict d;
  d["test"] = r.test_name;
  d["p_value"] = r.p_value;
  d["p_values"] = r.p_values;
  d["pass"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "trngsbox native core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<SBox>(m, "SBox")
      .def(py::init([](const py::bytes& raw) { return SBox::from_bytes(to_vec(raw)); }), py::arg("table"))
      .def(py::init([](const std::vector<int>& raw) {
             std::vector<std::uint8_t> v;
             for (int x : raw) {
               if (x < 0 || x > 255) throw Error(ErrorCode::ParseError, "value out of byte range");
               v.push_back(static_cast<std::uint8_t>(x));
             }
             return SBox::from_bytes(v);
           }),
           py::arg("table"))
      .def_static("identity", &SBox::identity)
      .def_static("parse", &parse_sbox, py::arg("text"))
      .def("__getitem__",
           [](const SBox& s, int x) {
             if (x < 0 || x > 255) throw py::index_error();
             return s[static_cast<std::size_t>(x)];
           })
      .def("__len__", [](const SBox&) { return 256; })
      .def("__eq__", [](const SBox& a, const SBox& b) { return a == b; })
      .def("__hash__", [](const SBox& s) { return SBoxDigestHash{}(canonical_digest(s)); })
      .def("table", [](const SBox& s) { return std::vector<int>(s.table().begin(), s.table().end()); })
      .def("to_bytes", [](const SBox& s) { return to_bytes(s.bytes()); })
      .def("digest", [](const SBox& s) { return canonical_digest(s).hex(); })
      .def(
          "serialize",
          [](const SBox& s, const std::string& format) {
            return serialize(s, format == "hex" ? SBoxFormat::hex_line : SBoxFormat::grid16);
          },
          py::arg("format") = "grid16");

  m.def("reverse_sbox", &reverse_sbox);
  m.def("nonlinearity", [](const SBox& s) { return metrics::nonlinearity(s); });
  m.def("min_component_nonlinearity", [](const SBox& s) { return metrics::min_component_nonlinearity(s); });
  m.def("evaluate", [](const SBox& s) {
    auto r = metrics::evaluate(s);
    py::dict d;
    d["nonlinearity"] = r.nonlinearity;
    d["nonlinearity_mean"] = r.nonlinearity_mean;
    d["nonlinearity_min"] = r.nonlinearity_min;
    d["sac_mean"] = r.sac_mean;
    d["sac_offset"] = r.sac_offset;
    d["bic_sac"] = r.bic_sac;
    d["bic_nl"] = r.bic_nl;
    d["bic_correlation"] = r.bic_correlation;
    d["lp"] = r.lp;
    d["dp_max"] = r.dp_max;
    return d;
  });

  m.def(
      "parse_ldar",
      [](const std::string& text, bool strict) {
        auto r = entropy::parse_ldar(text, strict);
        std::vector<std::tuple<int, int, int, int, int, std::int64_t, std::int64_t, std::int64_t>> out;
        for (const auto& s : r.records) {
          out.emplace_back(s.day, s.hour, s.minute, s.second, s.microsecond, s.east_m, s.north_m, s.alt_m);
        }
        return out;
      },
      py::arg("text"), py::arg("strict") = false);
  m.def(
      "bits_from_ldar",
      [](const std::string& text, bool whiten) {
        auto bits = entropy::strike_diff_bits(entropy::parse_ldar(text).records);
        return bits_to_string(whiten ? entropy::von_neumann(bits) : bits);
      },
      py::arg("text"), py::arg("whiten") = true);
  m.def("von_neumann", [](const std::string& bits) { return bits_to_string(entropy::von_neumann(bits_from_string(bits))); });
  m.def(
      "stat_test",
      [](const std::string& name, const std::string& bits) { return result_dict(entropy::stat_test(name, bits_from_string(bits))); },
      py::arg("name"), py::arg("bits"));
  m.def("run_battery", [](const std::string& bits) {
    py::list out;
    for (const auto& r : entropy::run_battery(bits_from_string(bits))) out.append(result_dict(r));
    return out;
  });

  m.def(
      "construct_sboxes",
      [](const std::string& bits, std::size_t total) {
        walker::ConstructionConfig cfg;
        cfg.keep_traces = false;
        return walker::construct_sboxes(bits_from_string(bits), total, cfg).sboxes;
      },
      py::arg("bits"), py::arg("total"));

  m.def(
      "optimize",
      [](const std::vector<SBox>& candidates, std::size_t islands, std::size_t generations, std::size_t population,
         int min_nl, int max_nl, std::uint64_t seed) {
        evolver::GAConfig cfg;
        cfg.islands = islands;
        cfg.generations = generations;
        cfg.population_per_island = population;
        cfg.min_nl = min_nl;
        cfg.max_nl = max_nl;
        cfg.rng_seed = seed;
        auto result = evolver::evolve(evolver::seed_population(candidates, cfg), cfg);
        std::vector<std::pair<SBox, int>> out;
        for (const auto& ind : result.population.merged()) out.emplace_back(ind.sbox, ind.fitness);
        return out;
      },
      py::arg("candidates"), py::arg("islands") = 4, py::arg("generations") = 50, py::arg("population") = 100,
      py::arg("min_nl") = 100, py::arg("max_nl") = 106, py::arg("seed") = 0x5eed);
  m.def("nl_histogram", [](const std::vector<int>& f) {
    auto h = evolver::nl_histogram(f);
    return std::vector<std::size_t>(h.begin(), h.end());
  });

  py::class_<spn::ImageBuffer>(m, "Image")
      .def(py::init([](std::size_t w, std::size_t h, const py::bytes& rgb) {
             std::string s = rgb;
             if (s.size() != 3 * w * h) throw Error(ErrorCode::DimensionMismatch, "expected 3*width*height bytes");
             auto img = spn::ImageBuffer::blank(w, h);
             for (std::size_t i = 0; i < w * h; ++i) {
               for (int c = 0; c < 3; ++c) img.channels[c][i] = static_cast<std::uint8_t>(s[3 * i + c]);
             }
             return img;
           }),
           py::arg("width"), py::arg("height"), py::arg("rgb"))
      .def_readonly("width", &spn::ImageBuffer::width)
      .def_readonly("height", &spn::ImageBuffer::height)
      .def("rgb",
           [](const spn::ImageBuffer& img) {
             std::string s(3 * img.pixels(), '\0');
             for (std::size_t i = 0; i < img.pixels(); ++i) {
               for (int c = 0; c < 3; ++c) s[3 * i + c] = static_cast<char>(img.channels[c][i]);
             }
             return py::bytes(s);
           })
      .def("__eq__", [](const spn::ImageBuffer& a, const spn::ImageBuffer& b) { return a == b; });

  py::class_<spn::RoundMaterial>(m, "Material")
      .def_static("identity", &spn::RoundMaterial::identity)
      .def_static("parse", &spn::parse_material)
      .def_readonly("channel_len", &spn::RoundMaterial::channel_len)
      .def("serialize", &spn::serialize_material);

  m.def(
      "derive_material",
      [](const std::string& bits, std::size_t channel_len, const std::vector<SBox>& pool) {
        return spn::derive_material(bits_from_string(bits), channel_len, pool);
      },
      py::arg("bits"), py::arg("channel_len"), py::arg("pool") = std::vector<SBox>{});
  m.def("encrypt_image", &spn::encrypt_image);
  m.def("decrypt_image", &spn::decrypt_image);
  m.def(
      "sensitivity",
      [](const spn::ImageBuffer& img, const spn::RoundMaterial& mat, std::size_t pixel) {
        auto s = spn::sensitivity(img, mat, pixel);
        py::dict d;
        d["npcr"] = std::vector<double>(s.npcr.begin(), s.npcr.end());
        d["uaci"] = std::vector<double>(s.uaci.begin(), s.uaci.end());
        return d;
      },
      py::arg("image"), py::arg("material"), py::arg("pixel") = 0);
}
