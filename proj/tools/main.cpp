// spivc — single-pixel-imaging visual cryptography toolbox.
//
// Every failure path prints exactly one line of the form
//   error: <subcommand-or-stage>: <message>
// to stderr and exits nonzero (1 runtime, 2 usage, 3 pipeline threshold
// miss), so scripts can dispatch on the prefix.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pattern_spec.hpp"
#include "pipeline.hpp"
#include "spivc/measure.hpp"
#include "spivc/patterns.hpp"
#include "spivc/pnm.hpp"
#include "spivc/qr.hpp"
#include "spivc/reconstruct.hpp"
#include "spivc/series_io.hpp"
#include "spivc/vc_opaque.hpp"
#include "spivc/vc_patterns.hpp"

namespace {

using nlohmann::json;
using namespace spivc;
using namespace spivc::cli;

namespace fs = std::filesystem;

// Reconstructions always land as a display PGM plus a full-precision JSON
// sidecar with the same stem; metrics must never depend on 8-bit rounding.
void write_image_pair(const Image& img, const std::string& out) {
  fs::path p(out);
  fs::path stem = p.parent_path() / p.stem();
  write_pgm(img, stem.string() + ".pgm");
  write_image_json(img, stem.string() + ".json");
}

json decoded_to_json(const qr::Decoded& d) {
  return {{"message", d.message},
          {"corrected_errors", d.corrected_errors},
          {"version", d.version},
          {"ec_level", qr::to_string(d.ec_level)},
          {"mask_id", d.mask_id}};
}

struct MeasureArgs {
  std::vector<std::string> objects;
  std::vector<std::string> patterns;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::string out;
};

void run_measure(const MeasureArgs& a) {
  if (a.objects.empty()) throw std::runtime_error("needs at least one --object");
  if (a.patterns.empty())
    throw std::runtime_error("needs at least one --patterns spec");
  if (a.patterns.size() != 1 && a.patterns.size() != a.objects.size())
    throw std::runtime_error(
        "give one --patterns spec shared by all objects, or one per object");

  std::vector<Image> objects;
  for (const std::string& path : a.objects)
    objects.push_back(read_image_any(path));

  std::vector<PatternSequence> sequences;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string& spec =
        a.patterns[a.patterns.size() == 1 ? 0 : i];
    sequences.push_back(load_patterns_file(spec));
  }

  MeasurementSeries series = objects.size() == 1
                                 ? measure(objects[0], sequences[0])
                                 : measure_combined(objects, sequences);
  if (a.noise_sigma > 0.0)
    series = add_noise(series, {NoiseKind::kAdditiveGaussian, a.noise_sigma,
                                a.noise_seed});
  write_series(series, a.out);
}

struct ReconstructArgs {
  std::string series;
  std::string patterns;
  std::string method = "tv";
  double lambda = -1.0;
  int max_iters = 1500;
  double tol = 1e-9;
  bool nonneg = false;
  std::string log;
  std::string out;
};

void run_reconstruct(const ReconstructArgs& a) {
  SolverConfig cfg;
  if (a.method == "correlation")
    cfg.method = SolveMethod::kCorrelation;
  else if (a.method == "lsq")
    cfg.method = SolveMethod::kLeastSquares;
  else if (a.method == "tv")
    cfg.method = SolveMethod::kTv;
  else
    throw std::runtime_error("--method must be correlation, lsq, or tv");
  cfg.lambda = a.lambda;
  cfg.max_iters = a.max_iters;
  cfg.tol = a.tol;
  cfg.nonneg = a.nonneg;

  MeasurementSeries series = read_series(a.series);
  PatternSequence patterns = load_patterns_file(a.patterns);

  std::vector<IterationRecord> log;
  Image recon = reconstruct(series, patterns, cfg,
                            a.log.empty() ? nullptr : &log);
  if (!a.log.empty()) {
    std::ofstream out(a.log);
    if (!out) throw std::runtime_error("cannot write '" + a.log + "'");
    for (const IterationRecord& rec : log)
      out << json{{"iter", rec.iter},
                  {"objective", rec.objective},
                  {"step", rec.step}}
                 .dump()
          << "\n";
  }
  write_image_pair(recon, a.out);
}

struct RevealArgs {
  std::string overlay_path;
  std::string combined;
  std::string single;
  std::string patterns_a;
  std::string patterns_b;
  double tau = 0.25;
  std::string out;
};

void run_reveal(const RevealArgs& a) {
  const bool overlay_mode = !a.overlay_path.empty();
  const bool recon_mode = !a.combined.empty();
  const bool pattern_mode = !a.patterns_a.empty() || !a.patterns_b.empty();
  if (int(overlay_mode) + int(recon_mode) + int(pattern_mode) != 1)
    throw std::runtime_error(
        "pick one mode: --overlay, --combined [--single], or "
        "--patterns-a with --patterns-b");

  BitMatrix secret;
  if (overlay_mode) {
    Image img = read_image_any(a.overlay_path);
    secret = extract_secret_from_overlay(rescale_overlay(img), a.tau);
  } else if (recon_mode) {
    Image combined = read_image_any(a.combined);
    secret = a.single.empty()
                 ? reveal_secret_from_reconstruction(combined)
                 : reveal_secret_from_reconstruction(
                       combined, read_image_any(a.single));
  } else {
    if (a.patterns_a.empty() || a.patterns_b.empty())
      throw std::runtime_error("--patterns-a and --patterns-b go together");
    json spec_a = read_json_file(a.patterns_a);
    json spec_b = read_json_file(a.patterns_b);
    for (const json* spec : {&spec_a, &spec_b})
      if (spec->value("kind", "") != "pattern-share")
        throw std::runtime_error("pattern reveal needs pattern-share specs");
    BitMatrix bits = bits_from_json(spec_a.at("secret"));
    PatternSharePair pair = encode_pattern_shares(
        spec_a.at("width").get<int>(), spec_a.at("height").get<int>(),
        spec_a.at("count").get<int>(), bits,
        spec_a.at("base_seed").get<std::uint64_t>(),
        spec_a.at("orient_seed").get<std::uint64_t>());
    // The b-side spec must describe the same pair or the reveal would mix
    // sequences that never shared a secret.
    json expected = share_spec(pair, 'b');
    if (spec_b != expected)
      throw std::runtime_error("--patterns-b does not match --patterns-a");
    secret = reveal_secret_from_patterns(pair);
  }
  write_pbm(secret, a.out);
}

struct MetricsArgs {
  std::string kind;
  std::string a;
  std::string b;
};

void run_metrics(const MetricsArgs& m) {
  double value = 0.0;
  if (m.kind == "psnr") {
    value = psnr(read_image_any(m.a), read_image_any(m.b));
  } else if (m.kind == "dot-accuracy") {
    value = dot_accuracy(read_pbm(m.a), read_pbm(m.b));
  } else if (m.kind == "f1") {
    value = f1_score(read_pbm(m.a), read_pbm(m.b));
  } else {
    throw std::runtime_error("--kind must be psnr, dot-accuracy, or f1");
  }
  std::cout << json{{"kind", m.kind}, {"value", value}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-pixel imaging with visual-cryptography key sharing"};
  app.require_subcommand(1);

  std::string active = "cli";

  // --- gen-qr ---
  struct {
    std::string text;
    int version = 4;
    std::string ec = "H";
    int mask = -1;
    std::string out;
  } genqr;
  {
    CLI::App* c = app.add_subcommand("gen-qr", "encode text into a PBM symbol");
    c->add_option("--text", genqr.text, "payload (byte mode)");
    c->add_option("--version", genqr.version, "symbol version 1..4")
        ->check(CLI::Range(1, 4));
    c->add_option("--ec", genqr.ec, "error-correction level L|M|Q|H");
    c->add_option("--mask", genqr.mask, "force mask 0..7, -1 = auto")
        ->check(CLI::Range(-1, 7));
    c->add_option("--out", genqr.out, "output .pbm path")->required();
    c->callback([&] {
      active = "gen-qr";
      qr::QrSymbol s = qr::qr_encode(genqr.text, genqr.version,
                                     qr::ec_level_from_string(genqr.ec),
                                     genqr.mask);
      write_pbm(s.matrix, genqr.out);
    });
  }

  // --- encode-shares ---
  struct {
    std::string base;
    std::string secret;
    std::uint64_t seed = 0;
    std::string assignment = "random";
    std::string out1;
    std::string out2;
    std::string manifest;
  } enc;
  {
    CLI::App* c = app.add_subcommand(
        "encode-shares", "split a base symbol into two visual keys");
    c->add_option("--base", enc.base, "base symbol .pbm")->required();
    c->add_option("--secret", enc.secret, "secret mask .pbm")->required();
    c->add_option("--seed", enc.seed, "orientation seed");
    c->add_option("--assignment", enc.assignment, "random|balanced");
    c->add_option("--out1", enc.out1, "first key .pbm")->required();
    c->add_option("--out2", enc.out2, "second key .pbm")->required();
    c->add_option("--manifest", enc.manifest,
                  "manifest path (default: <out1 stem>.manifest.json)");
    c->callback([&] {
      active = "encode-shares";
      BitMatrix base = read_pbm(enc.base);
      BitMatrix secret = read_pbm(enc.secret);
      ShareAssignment assignment;
      if (enc.assignment == "random")
        assignment = ShareAssignment::kRandom;
      else if (enc.assignment == "balanced")
        assignment = ShareAssignment::kBalanced;
      else
        throw std::runtime_error("--assignment must be random or balanced");
      SharePair pair = encode_shares(base, secret, enc.seed, assignment);
      write_pbm(pair.key1, enc.out1);
      write_pbm(pair.key2, enc.out2);

      json manifest{{"base", enc.base},
                    {"secret", enc.secret},
                    {"seed", enc.seed},
                    {"assignment", enc.assignment},
                    {"keys", {enc.out1, enc.out2}}};
      // When the base is a symbol, say whether the dots stay within what
      // its error-correction budget can absorb.
      try {
        int version = qr::version_for_side(base.width);
        qr::Decoded d = qr::qr_decode(base);
        qr::QrSymbol symbol{version, d.ec_level, d.mask_id, base};
        ModificationBudget budget = modification_budget(secret, symbol);
        manifest["modification_budget"] = {
            {"per_key_expected", budget.per_key_expected},
            {"per_block_worst", budget.per_block_worst},
            {"ok", budget.ok}};
        if (!budget.ok)
          std::cerr << "warning: encode-shares: secret exceeds the "
                       "per-block correction budget\n";
      } catch (const std::exception&) {
        // Not a decodable symbol; shares still work, budget is undefined.
      }
      std::string path = enc.manifest;
      if (path.empty()) {
        fs::path p(enc.out1);
        path = (p.parent_path() / p.stem()).string() + ".manifest.json";
      }
      write_json_file(manifest, path);
    });
  }

  // --- encode-pattern-shares ---
  struct {
    int width = 0;
    int height = 0;
    int n = 0;
    std::string secret;
    std::uint64_t base_seed = 0;
    std::uint64_t orient_seed = 0;
    std::string out_a;
    std::string out_b;
  } encp;
  {
    CLI::App* c = app.add_subcommand(
        "encode-pattern-shares",
        "hide a secret in a pair of illumination-sequence specs");
    c->add_option("--width", encp.width)->required();
    c->add_option("--height", encp.height)->required();
    c->add_option("--n", encp.n, "patterns per sequence")->required();
    c->add_option("--secret", encp.secret, "secret mask .pbm")->required();
    c->add_option("--base-seed", encp.base_seed);
    c->add_option("--orient-seed", encp.orient_seed);
    c->add_option("--out-a", encp.out_a, "sequence A spec .json")->required();
    c->add_option("--out-b", encp.out_b, "sequence B spec .json")->required();
    c->callback([&] {
      active = "encode-pattern-shares";
      BitMatrix secret = read_pbm(encp.secret);
      PatternSharePair pair =
          encode_pattern_shares(encp.width, encp.height, encp.n, secret,
                                encp.base_seed, encp.orient_seed);
      write_json_file(share_spec(pair, 'a'), encp.out_a);
      write_json_file(share_spec(pair, 'b'), encp.out_b);
    });
  }

  // --- gen-patterns ---
  struct {
    int width = 0;
    int height = 0;
    int n = 0;
    std::uint64_t seed = 0;
    std::string out;
  } genp;
  {
    CLI::App* c = app.add_subcommand(
        "gen-patterns", "write an i.i.d. illumination-sequence spec");
    c->add_option("--width", genp.width)->required();
    c->add_option("--height", genp.height)->required();
    c->add_option("--n", genp.n, "pattern count")->required();
    c->add_option("--seed", genp.seed);
    c->add_option("--out", genp.out, "spec .json path")->required();
    c->callback([&] {
      active = "gen-patterns";
      // Validate by generating once; the spec itself stores only the recipe.
      generate_patterns(genp.width, genp.height, genp.n, genp.seed);
      write_json_file(iid_spec(genp.width, genp.height, genp.n, genp.seed),
                      genp.out);
    });
  }

  // --- measure ---
  MeasureArgs meas;
  {
    CLI::App* c = app.add_subcommand(
        "measure", "single-pixel measurements of one or more objects");
    c->add_option("--object", meas.objects,
                  "object image (.pbm/.pgm/.json); repeat to sum scenes")
        ->required();
    c->add_option("--patterns", meas.patterns,
                  "pattern spec .json; one shared or one per object")
        ->required();
    c->add_option("--noise-sigma", meas.noise_sigma,
                  "additive Gaussian noise as a fraction of the mean");
    c->add_option("--noise-seed", meas.noise_seed);
    c->add_option("--out", meas.out, "series .json path")->required();
    c->callback([&] {
      active = "measure";
      run_measure(meas);
    });
  }

  // --- add-noise ---
  struct {
    std::string in;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string out;
  } noise;
  {
    CLI::App* c = app.add_subcommand("add-noise",
                                     "contaminate a measurement series");
    c->add_option("--in", noise.in, "input series .json")->required();
    c->add_option("--sigma", noise.sigma,
                  "std dev as a fraction of the mean noiseless value")
        ->required();
    c->add_option("--seed", noise.seed);
    c->add_option("--out", noise.out, "output series .json")->required();
    c->callback([&] {
      active = "add-noise";
      MeasurementSeries series = read_series(noise.in);
      series = add_noise(
          series, {NoiseKind::kAdditiveGaussian, noise.sigma, noise.seed});
      write_series(series, noise.out);
    });
  }

  // --- reconstruct ---
  ReconstructArgs rec;
  {
    CLI::App* c = app.add_subcommand(
        "reconstruct", "invert a measurement series back into an image");
    c->add_option("--series", rec.series, "series .json")->required();
    c->add_option("--patterns", rec.patterns, "pattern spec .json")
        ->required();
    c->add_option("--method", rec.method, "correlation|lsq|tv");
    c->add_option("--lambda", rec.lambda,
                  "smoothing weight; negative = default heuristic");
    c->add_option("--max-iters", rec.max_iters);
    c->add_option("--tol", rec.tol, "relative objective-change stop");
    c->add_flag("--nonneg", rec.nonneg, "clamp the estimate at zero");
    c->add_option("--log", rec.log, "iteration log .jsonl (tv only)");
    c->add_option("--out", rec.out,
                  "output stem; writes <stem>.pgm and <stem>.json")
        ->required();
    c->callback([&] {
      active = "reconstruct";
      run_reconstruct(rec);
    });
  }

  // --- reveal ---
  RevealArgs rev;
  {
    CLI::App* c = app.add_subcommand(
        "reveal", "recover a hidden mask from overlays, reconstructions, "
                  "or sequence specs");
    c->add_option("--overlay", rev.overlay_path,
                  "combined-scene reconstruction (rescaled to levels 0..2)");
    c->add_option("--tau", rev.tau, "level-1 half-width for --overlay");
    c->add_option("--combined", rev.combined,
                  "reconstruction carrying the hidden region");
    c->add_option("--single", rev.single,
                  "reference reconstruction of the same object");
    c->add_option("--patterns-a", rev.patterns_a, "sequence A spec .json");
    c->add_option("--patterns-b", rev.patterns_b, "sequence B spec .json");
    c->add_option("--out", rev.out, "secret mask .pbm")->required();
    c->callback([&] {
      active = "reveal";
      run_reveal(rev);
    });
  }

  // --- decode-qr ---
  struct {
    std::string in;
    std::string policy = "otsu";
    std::string out;
  } dec;
  {
    CLI::App* c = app.add_subcommand("decode-qr",
                                     "decode a symbol image to text");
    c->add_option("--in", dec.in, "symbol image (.pbm/.pgm/.json)")
        ->required();
    c->add_option("--policy", dec.policy,
                  "gray thresholding: otsu|midpoint (non-.pbm inputs)");
    c->add_option("--out", dec.out, "also write the result as .json");
    c->callback([&] {
      active = "decode-qr";
      qr::Decoded d;
      if (fs::path(dec.in).extension() == ".pbm") {
        d = qr::qr_decode(read_pbm(dec.in));
      } else {
        qr::ThresholdPolicy policy;
        if (dec.policy == "otsu")
          policy = qr::ThresholdPolicy::kOtsu;
        else if (dec.policy == "midpoint")
          policy = qr::ThresholdPolicy::kMidpoint;
        else
          throw std::runtime_error("--policy must be otsu or midpoint");
        d = qr::qr_decode_gray(read_image_any(dec.in), policy);
      }
      json j = decoded_to_json(d);
      std::cout << j.dump() << "\n";
      if (!dec.out.empty()) write_json_file(j, dec.out);
    });
  }

  // --- metrics ---
  MetricsArgs met;
  {
    CLI::App* c = app.add_subcommand("metrics",
                                     "compare two images or bit masks");
    c->add_option("--kind", met.kind, "psnr|dot-accuracy|f1")->required();
    c->add_option("--a", met.a, "candidate (psnr: image, else .pbm)")
        ->required();
    c->add_option("--b", met.b, "reference/truth")->required();
    c->callback([&] {
      active = "metrics";
      run_metrics(met);
    });
  }

  // --- pipeline ---
  struct {
    std::string manifest;
    std::string out_dir;
  } pipe;
  int exit_code = 0;
  {
    CLI::App* c = app.add_subcommand(
        "pipeline", "run a manifest end to end and write report.json");
    c->add_option("--manifest", pipe.manifest, "run manifest .json")
        ->required();
    c->add_option("--out-dir", pipe.out_dir,
                  "output directory (default: manifest's out_dir or .)");
    c->callback([&] {
      active = "pipeline";
      exit_code = run_pipeline(pipe.manifest, pipe.out_dir);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli: " << e.what() << "\n";
    return 2;
  } catch (const PipelineError& e) {
    std::cerr << "error: pipeline/" << e.stage << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << active << ": " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
