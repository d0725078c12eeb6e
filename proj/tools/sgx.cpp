#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "sgx/errors.hpp"
#include "sgx/experiments.hpp"

namespace {

void usage() {
  std::fprintf(stderr,
               "usage:\n"
               "  sgx run <config-path> [--override key=value ...]\n"
               "  sgx verify <manifest-path>\n"
               "\n"
               "Config is key=value text; see configs/ for the experiment suite.\n"
               "SGX_OUT_DIR overrides the configured output directory.\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    usage();
    return 2;
  }
  std::string command = argv[1];
  try {
    if (command == "run") {
      std::vector<std::string> overrides;
      for (int i = 3; i < argc; ++i) {
        if (std::strcmp(argv[i], "--override") == 0 && i + 1 < argc) {
          overrides.push_back(argv[++i]);
        } else {
          std::fprintf(stderr, "error: unexpected argument '%s'\n", argv[i]);
          return 2;
        }
      }
      sgx::experiments::ExperimentConfig config =
          sgx::experiments::parse_config_file(argv[2], overrides);
      sgx::experiments::RunManifest manifest = sgx::experiments::run(config);
      std::printf("wrote %zu files to %s (%.2fs)\n", manifest.files.size(),
                  config.out_dir.c_str(), manifest.wall_seconds);
      return 0;
    }
    if (command == "verify") {
      std::string message;
      bool ok = sgx::experiments::verify_manifest(argv[2], message);
      std::printf("%s: %s\n", ok ? "OK" : "FAIL", message.c_str());
      return ok ? 0 : 1;
    }
    usage();
    return 2;
  } catch (const sgx::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const sgx::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const sgx::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
