// Python bindings for the core library. Rasters cross the boundary as
// numpy arrays — images as float64 (height, width), bit masks as uint8
// (height, width) with 1 = light/foreground — and the stateful pieces
// (pattern sequences, share pairs, measurement series) as thin wrapper
// classes with read-only views.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spivc/hashing.hpp"
#include "spivc/measure.hpp"
#include "spivc/patterns.hpp"
#include "spivc/pnm.hpp"
#include "spivc/qr.hpp"
#include "spivc/reconstruct.hpp"
#include "spivc/sample.hpp"
#include "spivc/vc_opaque.hpp"
#include "spivc/vc_patterns.hpp"

namespace py = pybind11;
using namespace spivc;

namespace {

using BitArray =
    py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using ImageArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;

BitMatrix bits_in(const BitArray& arr) {
  if (arr.ndim() != 2)
    throw std::invalid_argument("expected a 2-D uint8 array of 0/1");
  BitMatrix m(int(arr.shape(1)), int(arr.shape(0)));
  auto view = arr.unchecked<2>();
  for (py::ssize_t r = 0; r < arr.shape(0); ++r)
    for (py::ssize_t c = 0; c < arr.shape(1); ++c)
      m.at(int(r), int(c)) = view(r, c) ? 1 : 0;
  return m;
}

py::array_t<std::uint8_t> bits_out(const BitMatrix& m) {
  py::array_t<std::uint8_t> arr({m.height, m.width});
  auto view = arr.mutable_unchecked<2>();
  for (int r = 0; r < m.height; ++r)
    for (int c = 0; c < m.width; ++c) view(r, c) = m.at(r, c);
  return arr;
}

Image image_in(const ImageArray& arr) {
  if (arr.ndim() != 2)
    throw std::invalid_argument("expected a 2-D float array");
  Image img(int(arr.shape(1)), int(arr.shape(0)));
  auto view = arr.unchecked<2>();
  for (py::ssize_t r = 0; r < arr.shape(0); ++r)
    for (py::ssize_t c = 0; c < arr.shape(1); ++c)
      img.at(int(r), int(c)) = view(r, c);
  return img;
}

py::array_t<double> image_out(const Image& img) {
  py::array_t<double> arr({img.height, img.width});
  auto view = arr.mutable_unchecked<2>();
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) view(r, c) = img.at(r, c);
  return arr;
}

SolveMethod method_from_string(const std::string& name) {
  if (name == "correlation") return SolveMethod::kCorrelation;
  if (name == "lsq") return SolveMethod::kLeastSquares;
  if (name == "tv") return SolveMethod::kTv;
  throw std::invalid_argument("method must be correlation, lsq, or tv");
}

SolverConfig make_config(const std::string& method, double lambda,
                         int max_iters, double tol, bool nonneg) {
  SolverConfig cfg;
  cfg.method = method_from_string(method);
  cfg.lambda = lambda;
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  cfg.nonneg = nonneg;
  return cfg;
}

qr::ThresholdPolicy policy_from_string(const std::string& name) {
  if (name == "otsu") return qr::ThresholdPolicy::kOtsu;
  if (name == "midpoint") return qr::ThresholdPolicy::kMidpoint;
  throw std::invalid_argument("policy must be otsu or midpoint");
}

ShareAssignment assignment_from_string(const std::string& name) {
  if (name == "random") return ShareAssignment::kRandom;
  if (name == "balanced") return ShareAssignment::kBalanced;
  throw std::invalid_argument("assignment must be random or balanced");
}

py::dict decoded_dict(const qr::Decoded& d) {
  py::dict out;
  out["message"] = d.message;
  out["corrected_errors"] = d.corrected_errors;
  out["version"] = d.version;
  out["ec_level"] = qr::to_string(d.ec_level);
  out["mask_id"] = d.mask_id;
  return out;
}

}  // namespace

PYBIND11_MODULE(_spivc, m) {
  m.doc() =
      "Deterministic single-pixel-imaging simulation with two ways to hide "
      "a secret: opaque visual keys derived from a machine-readable symbol, "
      "and paired illumination-pattern sequences.";

  py::register_exception<qr::DecodeError>(m, "DecodeError");

  // ----- deterministic scalar streams -------------------------------------
  m.def("counter_hash", &counter_hash, py::arg("seed"), py::arg("w0"),
        py::arg("w1"), py::arg("w2"),
        "Stateless 64-bit mix of (seed, w0, w1, w2); the root of every "
        "random-looking value in the library.");
  m.def("gaussian", &gaussian, py::arg("seed"), py::arg("n"),
        "Deterministic standard normal draw n for the given seed.");

  // ----- pattern sequences -------------------------------------------------
  py::class_<PatternSequence>(m, "PatternSequence",
                              "A run of binary illumination patterns, "
                              "regenerable from (width, height, count, "
                              "seed) alone.")
      .def_readonly("width", &PatternSequence::width)
      .def_readonly("height", &PatternSequence::height)
      .def_readonly("seed", &PatternSequence::seed)
      .def("__len__",
           [](const PatternSequence& p) { return p.patterns.size(); })
      .def("pattern",
           [](const PatternSequence& p, int n) {
             if (n < 0 || n >= p.count())
               throw std::out_of_range("pattern index out of range");
             return bits_out(p.patterns[std::size_t(n)]);
           },
           py::arg("n"), "Pattern n as a (height, width) uint8 array.")
      .def("as_array", [](const PatternSequence& p) {
        py::array_t<std::uint8_t> arr(
            {p.count(), p.height, p.width});
        auto view = arr.mutable_unchecked<3>();
        for (int n = 0; n < p.count(); ++n)
          for (int r = 0; r < p.height; ++r)
            for (int c = 0; c < p.width; ++c)
              view(n, r, c) = p.patterns[std::size_t(n)].at(r, c);
        return arr;
      }, "All patterns stacked as a (count, height, width) uint8 array.");

  m.def("generate_patterns", &generate_patterns, py::arg("width"),
        py::arg("height"), py::arg("count"), py::arg("seed"),
        "I.i.d. fair-bit illumination patterns; a shorter run is a "
        "bit-exact prefix of a longer one with the same seed.");

  // ----- measurement -------------------------------------------------------
  py::class_<MeasurementSeries>(m, "MeasurementSeries",
                                "Bucket-detector values plus the "
                                "provenance needed to regenerate the "
                                "illumination.")
      .def_property_readonly("values",
                             [](const MeasurementSeries& s) {
                               return py::array_t<double>(
                                   py::ssize_t(s.values.size()),
                                   s.values.data());
                             })
      .def_property_readonly(
          "scheme", [](const MeasurementSeries& s) { return s.meta.scheme; })
      .def_property_readonly(
          "width", [](const MeasurementSeries& s) { return s.meta.width; })
      .def_property_readonly(
          "height", [](const MeasurementSeries& s) { return s.meta.height; })
      .def_property_readonly(
          "count", [](const MeasurementSeries& s) { return s.meta.count; })
      .def_property_readonly(
          "seeds", [](const MeasurementSeries& s) { return s.meta.seeds; })
      .def("__len__",
           [](const MeasurementSeries& s) { return s.values.size(); });

  m.def(
      "measure",
      [](const ImageArray& object, const PatternSequence& patterns) {
        return measure(image_in(object), patterns);
      },
      py::arg("object"), py::arg("patterns"),
      "Single-detector series: value n is the inner product of the object "
      "with pattern n.");
  m.def(
      "measure_combined",
      [](const std::vector<ImageArray>& objects,
         const std::vector<PatternSequence>& sequences) {
        std::vector<Image> imgs;
        imgs.reserve(objects.size());
        for (const ImageArray& o : objects) imgs.push_back(image_in(o));
        return measure_combined(imgs, sequences);
      },
      py::arg("objects"), py::arg("sequences"),
      "One detector viewing several objects, each under its own "
      "illumination; only the summed signal is observable.");
  m.def(
      "add_noise",
      [](const MeasurementSeries& series, double sigma, std::uint64_t seed) {
        return add_noise(series,
                         {NoiseKind::kAdditiveGaussian, sigma, seed});
      },
      py::arg("series"), py::arg("sigma"), py::arg("seed") = 0,
      "Additive Gaussian noise with std = sigma * mean(values), "
      "deterministic in (seed, sample index).");

  // ----- reconstruction ----------------------------------------------------
  m.def(
      "reconstruct",
      [](const MeasurementSeries& series, const PatternSequence& patterns,
         const std::string& method, double lambda, int max_iters, double tol,
         bool nonneg) {
        SolverConfig cfg = make_config(method, lambda, max_iters, tol, nonneg);
        return image_out(reconstruct(series, patterns, cfg));
      },
      py::arg("series"), py::arg("patterns"), py::arg("method") = "tv",
      py::arg("lam") = -1.0, py::arg("max_iters") = 1500,
      py::arg("tol") = 1e-9, py::arg("nonneg") = false,
      "Recover the scene from a measurement series. method: correlation "
      "(differential baseline), lsq (exact oracle), or tv (smoothed "
      "iterative solver). lam < 0 picks the default heuristic weight.");
  m.def(
      "reconstruct_logged",
      [](const MeasurementSeries& series, const PatternSequence& patterns,
         const std::string& method, double lambda, int max_iters, double tol,
         bool nonneg) {
        SolverConfig cfg = make_config(method, lambda, max_iters, tol, nonneg);
        std::vector<IterationRecord> log;
        Image img = reconstruct(series, patterns, cfg, &log);
        py::list records;
        for (const IterationRecord& rec : log) {
          py::dict d;
          d["iter"] = rec.iter;
          d["objective"] = rec.objective;
          d["step"] = rec.step;
          records.append(d);
        }
        return py::make_tuple(image_out(img), records);
      },
      py::arg("series"), py::arg("patterns"), py::arg("method") = "tv",
      py::arg("lam") = -1.0, py::arg("max_iters") = 1500,
      py::arg("tol") = 1e-9, py::arg("nonneg") = false,
      "Like reconstruct, but also returns the per-iteration objective log "
      "(tv only; empty for the direct methods).");

  m.def(
      "psnr",
      [](const ImageArray& a, const ImageArray& reference) {
        return psnr(image_in(a), image_in(reference));
      },
      py::arg("a"), py::arg("reference"),
      "Peak signal-to-noise ratio against the reference's peak; inf when "
      "identical.");
  m.def(
      "dot_accuracy",
      [](const BitArray& a, const BitArray& b) {
        return dot_accuracy(bits_in(a), bits_in(b));
      },
      py::arg("a"), py::arg("b"), "Fraction of cells on which a and b agree.");
  m.def(
      "f1_score",
      [](const BitArray& predicted, const BitArray& truth) {
        return f1_score(bits_in(predicted), bits_in(truth));
      },
      py::arg("predicted"), py::arg("truth"),
      "F1 of the foreground class (value 1).");

  // ----- machine-readable symbols ------------------------------------------
  py::class_<qr::QrSymbol>(m, "QrSymbol",
                           "An encoded symbol: module matrix plus the "
                           "version / level / mask that produced it.")
      .def_readonly("version", &qr::QrSymbol::version)
      .def_property_readonly(
          "ec_level",
          [](const qr::QrSymbol& s) { return qr::to_string(s.ec_level); })
      .def_readonly("mask_id", &qr::QrSymbol::mask_id)
      .def_property_readonly("matrix", [](const qr::QrSymbol& s) {
        return bits_out(s.matrix);
      });

  m.def(
      "qr_encode",
      [](const std::string& message, int version, const std::string& ec,
         int mask_id) {
        return qr::qr_encode(message, version,
                             qr::ec_level_from_string(ec), mask_id);
      },
      py::arg("message"), py::arg("version"), py::arg("ec") = "H",
      py::arg("mask_id") = -1,
      "Byte-mode symbol, versions 1-4. mask_id -1 picks the mask by the "
      "penalty rules.");
  m.def(
      "qr_decode",
      [](const BitArray& matrix) {
        return decoded_dict(qr::qr_decode(bits_in(matrix)));
      },
      py::arg("matrix"),
      "Decode a module-aligned bit matrix (1 = light). Raises DecodeError "
      "when the symbol is beyond repair.");
  m.def(
      "qr_decode_gray",
      [](const ImageArray& image, const std::string& policy) {
        return decoded_dict(
            qr::qr_decode_gray(image_in(image), policy_from_string(policy)));
      },
      py::arg("image"), py::arg("policy") = "otsu",
      "Threshold a grayscale module grid (otsu or midpoint), then decode.");

  // ----- opaque visual keys -------------------------------------------------
  py::class_<SharePair>(m, "SharePair",
                        "Two opaque visual keys hiding one secret; "
                        "stacking them yields intensity 1 exactly on the "
                        "secret's support.")
      .def_property_readonly(
          "key1", [](const SharePair& p) { return bits_out(p.key1); })
      .def_property_readonly(
          "key2", [](const SharePair& p) { return bits_out(p.key2); })
      .def_property_readonly(
          "base", [](const SharePair& p) { return bits_out(p.base); })
      .def_property_readonly(
          "secret", [](const SharePair& p) { return bits_out(p.secret); })
      .def_readonly("seed", &SharePair::seed);

  m.def(
      "encode_shares",
      [](const BitArray& base, const BitArray& secret, std::uint64_t seed,
         const std::string& assignment) {
        return encode_shares(bits_in(base), bits_in(secret), seed,
                             assignment_from_string(assignment));
      },
      py::arg("base"), py::arg("secret"), py::arg("seed") = 0,
      py::arg("assignment") = "random",
      "Split a base bit image into two keys around a secret mask. "
      "assignment: random (fair stateless orientation) or balanced "
      "(modifications split evenly between the keys).");
  m.def(
      "overlay",
      [](const BitArray& key1, const BitArray& key2) {
        return image_out(overlay(bits_in(key1), bits_in(key2)));
      },
      py::arg("key1"), py::arg("key2"),
      "Pointwise sum of the stacked keys: 0, 1, or 2, with 1 exactly on "
      "the secret's support.");
  m.def(
      "extract_secret_from_overlay",
      [](const ImageArray& ov, double tau) {
        return bits_out(extract_secret_from_overlay(image_in(ov), tau));
      },
      py::arg("overlay"), py::arg("tau") = 0.25,
      "Nearest-level classification of an overlay to {0,1,2}; foreground "
      "where level 1 wins. Values outside [-tau, 2+tau] are rejected.");
  m.def(
      "rescale_overlay",
      [](const ImageArray& recon) {
        return image_out(rescale_overlay(image_in(recon)));
      },
      py::arg("recon"),
      "Affine map of a reconstructed overlay onto the {0,1,2} level set "
      "(reconstruction recovers intensities only up to gain/offset).");

  py::class_<ModificationBudget>(m, "ModificationBudget",
                                 "How much symbol damage a secret "
                                 "inflicts, against the per-block "
                                 "correction capacity.")
      .def_readonly("per_key_expected", &ModificationBudget::per_key_expected)
      .def_readonly("per_block_worst", &ModificationBudget::per_block_worst)
      .def_readonly("ok", &ModificationBudget::ok);

  m.def(
      "modification_budget",
      [](const BitArray& secret, const qr::QrSymbol& symbol) {
        return modification_budget(bits_in(secret), symbol);
      },
      py::arg("secret"), py::arg("symbol"));

  // ----- pattern-pair secrets ------------------------------------------------
  py::class_<PatternSharePair>(m, "PatternSharePair",
                               "A secret hidden across two illumination "
                               "sequences: complementary bits on the "
                               "secret's support, identical elsewhere.")
      .def_readonly("seq_a", &PatternSharePair::seq_a)
      .def_readonly("seq_b", &PatternSharePair::seq_b)
      .def_property_readonly(
          "secret",
          [](const PatternSharePair& p) { return bits_out(p.secret); })
      .def_readonly("base_seed", &PatternSharePair::base_seed)
      .def_readonly("orient_seed", &PatternSharePair::orient_seed);

  m.def(
      "encode_pattern_shares",
      [](int width, int height, int count, const BitArray& secret,
         std::uint64_t base_seed, std::uint64_t orient_seed) {
        return encode_pattern_shares(width, height, count, bits_in(secret),
                                     base_seed, orient_seed);
      },
      py::arg("width"), py::arg("height"), py::arg("count"),
      py::arg("secret"), py::arg("base_seed") = 0,
      py::arg("orient_seed") = 0);
  m.def(
      "reveal_secret_from_patterns",
      [](const PatternSharePair& pair) {
        return bits_out(reveal_secret_from_patterns(pair));
      },
      py::arg("pair"),
      "Exact pattern-domain recovery: a cell is foreground iff the "
      "superposed pair takes value 1 there.");
  m.def(
      "reveal_secret_from_reconstruction",
      [](const ImageArray& combined,
         const std::optional<ImageArray>& single) {
        if (single)
          return bits_out(reveal_secret_from_reconstruction(
              image_in(combined), image_in(*single)));
        return bits_out(reveal_secret_from_reconstruction(image_in(combined)));
      },
      py::arg("combined"), py::arg("single") = py::none(),
      "Detector-side recovery from reconstructions; with a reference "
      "reconstruction the residual against an affine fit is thresholded, "
      "without one the dimmer intensity class is kept.");

  // ----- stock inputs and file interop ----------------------------------------
  m.def(
      "ok_glyph",
      [](int width, int height, int scale) {
        return bits_out(sample::ok_glyph(width, height, scale));
      },
      py::arg("width"), py::arg("height"), py::arg("scale") = 0,
      "Stock secret glyph centered on the canvas; scale 0 picks a size "
      "that stays well inside a symbol's data area.");
  m.def(
      "scene",
      [](int width, int height, int variant) {
        return image_out(sample::scene(width, height, variant));
      },
      py::arg("width"), py::arg("height"), py::arg("variant") = 0,
      "Deterministic piecewise-smooth grayscale test object in [0, 1].");

  m.def(
      "read_pbm",
      [](const std::string& path) { return bits_out(read_pbm(path)); },
      py::arg("path"),
      "Read a PBM bit image; file black (1) maps to 0, white to 1.");
  m.def(
      "write_pbm",
      [](const BitArray& bits, const std::string& path, bool binary) {
        write_pbm(bits_in(bits), path, binary);
      },
      py::arg("bits"), py::arg("path"), py::arg("binary") = true,
      "Write a bit image as PBM; value 0 renders black, 1 white.");
  m.def(
      "read_pgm",
      [](const std::string& path) { return image_out(read_pgm(path)); },
      py::arg("path"));
  m.def(
      "write_pgm",
      [](const ImageArray& image, const std::string& path, bool binary) {
        write_pgm(image_in(image), path, binary);
      },
      py::arg("image"), py::arg("path"), py::arg("binary") = true,
      "Write a grayscale image as 8-bit PGM, min..max scaled to 0..255.");
}
