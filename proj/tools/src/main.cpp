#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "config.hpp"
#include "pipelines.hpp"

namespace {

// Machine-readable single-line error record on stderr.
void report_error(int exit_code, const char* kind, const std::string& message) {
  std::string escaped;
  for (char c : message) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      case '\t': escaped += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) >= 0x20) escaped += c;
    }
  }
  std::fprintf(stderr, "{\"error\":{\"exit\":%d,\"type\":\"%s\",\"message\":\"%s\"}}\n",
               exit_code, kind, escaped.c_str());
}

struct SubArgs {
  std::string config_path;
  std::string out_dir;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretely poled nonlinear crystals: design and biphoton simulation"};
  app.require_subcommand(1);

  using Runner = void (*)(qpm::cli::Config&, const std::filesystem::path&);
  const std::pair<const char*, Runner> commands[] = {
      {"design", qpm::cli::run_design},   {"pmf", qpm::cli::run_pmf},
      {"hom", qpm::cli::run_hom},         {"beat", qpm::cli::run_beat},
      {"purity", qpm::cli::run_purity},   {"yield", qpm::cli::run_yield},
      {"compare", qpm::cli::run_compare},
  };
  const char* descriptions[] = {
      "Synthesize a poling layout approximating a target profile",
      "Phase-matching curves (section and domain models) plus metrics",
      "Hong-Ou-Mandel coincidence dip versus delay",
      "Quantum-beating sweep over center-frequency detunings",
      "Joint spectral amplitude and Schmidt-decomposition purity",
      "Pair-yield and PMF metrics of a layout against a target",
      "Side-by-side metrics for two crystals",
  };

  SubArgs args[std::size(commands)];
  CLI::App* subs[std::size(commands)];
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    subs[k] = app.add_subcommand(commands[k].first, descriptions[k]);
    subs[k]->add_option("-c,--config", args[k].config_path, "Configuration file")->required();
    subs[k]->add_option("-o,--out", args[k].out_dir,
                        "Output directory (default: config key out_dir or '.')");
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t k = 0; k < std::size(commands); ++k) {
    if (!subs[k]->parsed()) continue;
    try {
      auto config = qpm::cli::Config::from_file(args[k].config_path);
      std::filesystem::path out_dir = args[k].out_dir.empty()
                                          ? config.get_string_or("out_dir", ".")
                                          : args[k].out_dir;
      std::filesystem::create_directories(out_dir);
      commands[k].second(config, out_dir);
      return 0;
    } catch (const std::invalid_argument& e) {
      report_error(2, "config", e.what());
      return 2;
    } catch (const std::domain_error& e) {
      report_error(3, "numerical", e.what());
      return 3;
    } catch (const std::exception& e) {
      report_error(3, "internal", e.what());
      return 3;
    }
  }
  return 1;  // unreachable: require_subcommand(1)
}
