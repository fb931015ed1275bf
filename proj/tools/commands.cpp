#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "trngsbox/bitstream.hpp"
#include "trngsbox/entropy.hpp"
#include "trngsbox/error.hpp"
#include "trngsbox/evolver.hpp"
#include "trngsbox/metrics.hpp"
#include "trngsbox/sbox.hpp"
#include "trngsbox/spn.hpp"
#include "trngsbox/stat_tests.hpp"
#include "trngsbox/walker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace trngsbox::cli {

namespace {

struct Manifest {
  std::string command;
  json inputs = json::array();
  json config = json::object();
  std::uint64_t rng_seed = 0;
  json outputs = json::array();
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& path, const Manifest& m, const std::vector<std::string>& argv) {
  json j = {{"command", m.command},     {"inputs", m.inputs},     {"config", m.config},
            {"rng_seed", m.rng_seed},   {"outputs", m.outputs},   {"tool_version", kToolVersion},
            {"argv", argv}};
  write_text(path, j.dump(2) + "\n");
}

std::string sbox_file_name(std::size_t i) {
  std::ostringstream name;
  name << "sbox_" << std::setw(5) << std::setfill('0') << i << ".txt";
  return name.str();
}

// Grid16 files plus index.csv (file, digest, nonlinearity).
std::vector<std::string> write_sbox_set(const fs::path& dir, const std::vector<SBox>& boxes,
                                        const std::vector<int>& fitness) {
  fs::create_directories(dir);
  std::ostringstream index;
  index << "file,digest,nonlinearity\n";
  std::vector<std::string> files;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    auto name = sbox_file_name(i);
    write_sbox_file((dir / name).string(), boxes[i]);
    index << name << ',' << canonical_digest(boxes[i]).hex() << ',' << fitness[i] << '\n';
    files.push_back((dir / name).string());
  }
  write_text(dir / "index.csv", index.str());
  return files;
}

std::vector<SBox> read_sbox_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<SBox> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(read_sbox_file(p.string()));
  return out;
}

std::string battery_table(const std::string& stage, const BitStream& bits,
                          std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream out;
  out << stage << " stream: " << bits.size() << " bits\n";
  out << std::left << std::setw(22) << "test" << std::setw(12) << "p-value" << "result\n";
  kv.emplace_back(stage + ".bits", std::to_string(bits.size()));
  for (auto t : entropy::all_stat_tests()) {
    const std::string name(entropy::test_name(t));
    out << std::setw(22) << name;
    try {
      auto r = entropy::stat_test(t, bits);
      std::ostringstream p;
      p << std::fixed << std::setprecision(6) << r.p_value;
      out << std::setw(12) << p.str() << (r.pass ? "pass" : "FAIL") << '\n';
      kv.emplace_back(stage + "." + name + ".p_value", p.str());
      kv.emplace_back(stage + "." + name + ".pass", r.pass ? "true" : "false");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientBits) throw;
      out << std::setw(12) << "-" << "skipped (too few bits)\n";
      kv.emplace_back(stage + "." + name + ".pass", "skipped");
    }
  }
  return out.str();
}

std::pair<int, int> parse_range(const std::string& text) {
  auto sep = text.find_first_of(":-,");
  if (sep == std::string::npos) throw CLI::ValidationError("--range", "expected MIN:MAX");
  return {std::stoi(text.substr(0, sep)), std::stoi(text.substr(sep + 1))};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"trngsbox: S-box construction, optimization and evaluation from lightning entropy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::vector<std::string> args(argv, argv + argc);

  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Write the run manifest to this path");
  app.fallthrough();

  // extract
  auto* extract = app.add_subcommand("extract", "LDAR records -> raw or whitened bit stream");
  std::string ldar_path, bits_out, report_path, bit_format = "ascii";
  bool strict = false, whiten = false;
  extract->add_option("ldar", ldar_path, "LDAR text file")->required();
  extract->add_option("-o,--out", bits_out, "Output bit file")->required();
  extract->add_flag("--strict", strict, "Fail on the first malformed line");
  extract->add_flag("--whiten", whiten, "Apply the Von Neumann extractor");
  extract->add_option("--format", bit_format, "ascii or packed")->check(CLI::IsMember({"ascii", "packed"}));
  extract->add_option("--report", report_path, "Statistical report path (default <out>.report.txt)");

  // gen
  auto* gen = app.add_subcommand("gen", "Bit stream -> S-boxes by random walk");
  std::string bits_path, out_dir;
  std::size_t total = 1, step_budget = walker::kDefaultStepBudget, grid_bytes = 0;
  gen->add_option("bits", bits_path, "Bit file")->required();
  gen->add_option("-n,--total", total, "Number of S-boxes")->required();
  gen->add_option("-o,--out", out_dir, "Output directory")->required();
  gen->add_option("--step-budget", step_budget, "Steps allowed per walk");
  gen->add_option("--grid-bytes", grid_bytes, "Bytes used for the grid (0 = all)");

  // trace
  auto* trace = app.add_subcommand("trace", "Emit one walk as CSV (step,row,col,value,collected)");
  std::size_t walk_index = 0;
  std::string trace_out;
  trace->add_option("bits", bits_path, "Bit file")->required();
  trace->add_option("--walk", walk_index, "Index of the successful walk to emit");
  trace->add_option("-o,--out", trace_out, "CSV output path")->required();
  trace->add_option("--step-budget", step_budget, "Steps allowed per walk");
  trace->add_option("--grid-bytes", grid_bytes, "Bytes used for the grid (0 = all)");

  // eval
  auto* eval = app.add_subcommand("eval", "Security metrics of one S-box");
  std::string sbox_path, eval_out, dp_out, eval_format = "text";
  eval->add_option("sbox", sbox_path, "S-box file (grid16 or hex_line)")->required();
  eval->add_option("--format", eval_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  eval->add_option("-o,--out", eval_out, "Write the report here instead of stdout");
  eval->add_option("--dp-csv", dp_out, "Dump the 256x256 difference table");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Genetic optimization of an S-box directory");
  std::string in_dir, range_text = "100:106";
  evolver::GAConfig ga;
  optimize->add_option("in_dir", in_dir, "Directory of S-box files")->required();
  optimize->add_option("-o,--out", out_dir, "Output directory")->required();
  optimize->add_option("--islands", ga.islands, "Island count");
  optimize->add_option("--generations", ga.generations, "Generations");
  optimize->add_option("--pop", ga.population_per_island, "Population per island");
  optimize->add_option("--range", range_text, "Seed nonlinearity range MIN:MAX");
  optimize->add_option("--seed", ga.rng_seed, "RNG seed");
  optimize->add_option("--migration-interval", ga.migration_interval, "Generations between migrations");
  optimize->add_option("--migration-count", ga.migration_count, "Individuals copied per migration");
  optimize->add_option("--crossover-point", ga.crossover_point, "One-point crossover index");

  // material
  auto* material = app.add_subcommand("material", "Derive SPN round material from a bit stream");
  std::string material_out, sbox_dir, image_for_len;
  std::size_t channel_len = 0;
  material->add_option("bits", bits_path, "Bit file")->required();
  material->add_option("-o,--out", material_out, "Material file")->required();
  auto* len_opt = material->add_option("--channel-len", channel_len, "Bytes per channel");
  material->add_option("--image", image_for_len, "Take the channel length from this image")->excludes(len_opt);
  material->add_option("--sbox-dir", sbox_dir, "Optimized S-box pool (default: build by random walk)");

  // encrypt / decrypt / sensitivity
  std::string image_path, material_path, image_out;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt an image with the 16-round SPN");
  encrypt->add_option("image", image_path, "Input image (.ppm or raw RGB)")->required();
  encrypt->add_option("material", material_path, "Material file")->required();
  encrypt->add_option("-o,--out", image_out, "Output image")->required();
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt an image with the 16-round SPN");
  decrypt->add_option("image", image_path, "Input image (.ppm or raw RGB)")->required();
  decrypt->add_option("material", material_path, "Material file")->required();
  decrypt->add_option("-o,--out", image_out, "Output image")->required();
  auto* sens = app.add_subcommand("sensitivity", "NPCR/UACI for a one-pixel change");
  std::size_t pixel = 0;
  std::string sens_out;
  sens->add_option("image", image_path, "Input image")->required();
  sens->add_option("material", material_path, "Material file")->required();
  sens->add_option("--pixel", pixel, "Index of the perturbed pixel");
  sens->add_option("-o,--out", sens_out, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Manifest m;
  fs::path default_manifest;
  try {
    if (*extract) {
      m.command = "extract";
      m.inputs = {ldar_path};
      m.config = {{"strict", strict}, {"whiten", whiten}, {"format", bit_format}};
      auto parsed = entropy::read_ldar_file(ldar_path, strict);
      for (const auto& e : parsed.errors) {
        err << ldar_path << ":" << e.line << ": skipped malformed line: " << e.message << '\n';
      }
      auto raw = entropy::strike_diff_bits(parsed.records);
      std::vector<std::pair<std::string, std::string>> kv;
      kv.emplace_back("records", std::to_string(parsed.records.size()));
      kv.emplace_back("malformed_lines", std::to_string(parsed.errors.size()));
      std::string table = battery_table("raw", raw, kv);
      BitStream result = raw;
      if (whiten) {
        result = entropy::von_neumann(raw);
        table += "\n" + battery_table("whitened", result, kv);
      }
      write_bits_file(bits_out, result, bit_format == "packed" ? BitFormat::packed : BitFormat::ascii);
      if (report_path.empty()) report_path = bits_out + ".report.txt";
      std::ostringstream report;
      for (const auto& [k, v] : kv) report << k << " = " << v << '\n';
      write_text(report_path, report.str());
      out << table;
      m.outputs = {bits_out, report_path};
      default_manifest = bits_out + ".manifest.json";
    } else if (*gen) {
      m.command = "gen";
      m.inputs = {bits_path};
      m.config = {{"total", total}, {"step_budget", step_budget}, {"grid_bytes", grid_bytes}};
      auto bits = read_bits_file(bits_path);
      walker::ConstructionConfig cfg;
      cfg.step_budget = step_budget;
      cfg.grid_bytes = grid_bytes;
      cfg.keep_traces = false;
      auto built = walker::construct_sboxes(bits, total, cfg);
      std::vector<int> fitness;
      for (const auto& s : built.sboxes) fitness.push_back(metrics::nonlinearity(s));
      auto files = write_sbox_set(out_dir, built.sboxes, fitness);
      out << "grid " << built.grid.k << "x" << built.grid.k << ", " << built.sboxes.size()
          << " S-boxes, " << built.failed_walks << " failed walks\n";
      m.outputs = {(fs::path(out_dir) / "index.csv").string()};
      for (const auto& f : files) m.outputs.push_back(f);
      default_manifest = fs::path(out_dir) / "manifest.json";
    } else if (*trace) {
      m.command = "trace";
      m.inputs = {bits_path};
      m.config = {{"walk", walk_index}, {"step_budget", step_budget}, {"grid_bytes", grid_bytes}};
      auto bits = read_bits_file(bits_path);
      walker::ConstructionConfig cfg;
      cfg.step_budget = step_budget;
      cfg.grid_bytes = grid_bytes;
      auto built = walker::construct_sboxes(bits, walk_index + 1, cfg);
      write_text(trace_out, walker::trace_csv(built.grid, built.traces.at(walk_index)));
      m.outputs = {trace_out};
      default_manifest = trace_out + ".manifest.json";
    } else if (*eval) {
      m.command = "eval";
      m.inputs = {sbox_path};
      m.config = {{"format", eval_format}};
      auto s = read_sbox_file(sbox_path);
      auto report = metrics::evaluate(s);
      std::string text = eval_format == "csv"
                             ? metrics::csv_header() + "\n" + metrics::to_csv_row(report) + "\n"
                             : metrics::to_key_value(report);
      if (eval_out.empty()) {
        out << text;
      } else {
        write_text(eval_out, text);
        m.outputs.push_back(eval_out);
        default_manifest = eval_out + ".manifest.json";
      }
      if (!dp_out.empty()) {
        write_text(dp_out, metrics::dp_csv(metrics::dp(s)));
        m.outputs.push_back(dp_out);
      }
    } else if (*optimize) {
      m.command = "optimize";
      m.inputs = {in_dir};
      std::tie(ga.min_nl, ga.max_nl) = parse_range(range_text);
      m.rng_seed = ga.rng_seed;
      m.config = {{"islands", ga.islands},
                  {"generations", ga.generations},
                  {"population_per_island", ga.population_per_island},
                  {"range", {ga.min_nl, ga.max_nl}},
                  {"migration_interval", ga.migration_interval},
                  {"migration_count", ga.migration_count},
                  {"crossover_point", ga.crossover_point}};
      auto candidates = read_sbox_dir(in_dir);
      auto seeded = evolver::seed_population(candidates, ga);
      auto initial = evolver::nl_histogram(seeded);
      auto result = evolver::evolve(seeded, ga);
      auto final_set = result.population.merged();
      std::vector<SBox> boxes;
      std::vector<int> fitness;
      for (const auto& ind : final_set) {
        boxes.push_back(ind.sbox);
        fitness.push_back(ind.fitness);
      }
      auto files = write_sbox_set(out_dir, boxes, fitness);
      write_text(fs::path(out_dir) / "generations.csv", evolver::log_csv(result.log));
      auto final_hist = evolver::nl_histogram(fitness);
      std::ostringstream hist;
      hist << "bin,initial,final\n";
      for (std::size_t i = 0; i < evolver::kHistogramBins; ++i) {
        hist << evolver::histogram_labels()[i] << ',' << initial[i] << ',' << final_hist[i] << '\n';
      }
      write_text(fs::path(out_dir) / "histogram.csv", hist.str());
      out << "seeded " << seeded.size() << " individuals, final population " << final_set.size()
          << ", best nonlinearity " << (final_set.empty() ? 0 : final_set.front().fitness) << '\n';
      m.outputs = {(fs::path(out_dir) / "index.csv").string(),
                   (fs::path(out_dir) / "generations.csv").string(),
                   (fs::path(out_dir) / "histogram.csv").string()};
      for (const auto& f : files) m.outputs.push_back(f);
      default_manifest = fs::path(out_dir) / "manifest.json";
    } else if (*material) {
      m.command = "material";
      m.inputs = {bits_path};
      if (!image_for_len.empty()) {
        channel_len = spn::read_image(image_for_len).pixels();
        m.inputs.push_back(image_for_len);
      }
      if (channel_len == 0) throw CLI::ValidationError("material", "--channel-len or --image is required");
      std::vector<SBox> pool;
      if (!sbox_dir.empty()) {
        pool = read_sbox_dir(sbox_dir);
        // Best first, matching the optimizer's index order.
        std::stable_sort(pool.begin(), pool.end(), [](const SBox& a, const SBox& b) {
          return metrics::nonlinearity(a) > metrics::nonlinearity(b);
        });
        m.inputs.push_back(sbox_dir);
      }
      m.config = {{"channel_len", channel_len}};
      auto bits = read_bits_file(bits_path);
      spn::write_material_file(material_out, spn::derive_material(bits, channel_len, pool));
      m.outputs = {material_out};
      default_manifest = material_out + ".manifest.json";
    } else if (*encrypt || *decrypt) {
      m.command = *encrypt ? "encrypt" : "decrypt";
      m.inputs = {image_path, material_path};
      auto img = spn::read_image(image_path);
      auto mat = spn::read_material_file(material_path);
      if (mat.channel_len != img.pixels()) {
        throw Error(ErrorCode::LengthMismatch,
                    "material channel length " + std::to_string(mat.channel_len) + " but image has " +
                        std::to_string(img.pixels()) + " pixels");
      }
      auto result = *encrypt ? spn::encrypt_image(img, mat) : spn::decrypt_image(img, mat);
      spn::write_image(image_out, result);
      m.outputs = {image_out};
      default_manifest = image_out + ".manifest.json";
    } else if (*sens) {
      m.command = "sensitivity";
      m.inputs = {image_path, material_path};
      m.config = {{"pixel", pixel}};
      auto img = spn::read_image(image_path);
      auto mat = spn::read_material_file(material_path);
      if (mat.channel_len != img.pixels()) {
        throw Error(ErrorCode::LengthMismatch,
                    "material channel length " + std::to_string(mat.channel_len) + " but image has " +
                        std::to_string(img.pixels()) + " pixels");
      }
      auto s = spn::sensitivity(img, mat, pixel);
      std::ostringstream table;
      table << "channel,npcr,uaci\n" << std::fixed << std::setprecision(4);
      const char* names[] = {"R", "G", "B"};
      for (int c = 0; c < 3; ++c) table << names[c] << ',' << s.npcr[c] << ',' << s.uaci[c] << '\n';
      if (sens_out.empty()) {
        out << table.str();
      } else {
        write_text(sens_out, table.str());
        m.outputs = {sens_out};
        default_manifest = sens_out + ".manifest.json";
      }
    }
    fs::path manifest_target = manifest_path.empty() ? default_manifest : fs::path(manifest_path);
    if (!manifest_target.empty()) write_manifest(manifest_target, m, args);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 10 + static_cast<int>(e.code());
  } catch (const CLI::Error& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace trngsbox::cli
