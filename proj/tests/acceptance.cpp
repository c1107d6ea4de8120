// Acceptance run: one PASS/FAIL line per criterion, at the default settings.
// usage: acceptance <mhdbl binary> <config for the determinism check>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mhdbl/mhdbl.hpp"

namespace fs = std::filesystem;
using namespace mhdbl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Outcome from_report(const VerificationReport& r) {
  Outcome o{true, ""};
  for (const auto& c : r.checks) {
    o.pass = o.pass && c.pass();
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += c.name + " " + brief(c.value) + (c.atMost ? " <= " : " >= ") + brief(c.threshold);
  }
  return o;
}

Outcome determinism(const std::string& exe, const std::string& config) {
  const fs::path root = fs::temp_directory_path() / "mhdbl_acceptance";
  fs::remove_all(root);
  for (const char* sub : {"a", "b"}) {
    const std::string cmd = "\"" + exe + "\" verify all --config \"" + config +
                            "\" --output-dir \"" + (root / sub).string() + "\" > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc) || (WEXITSTATUS(rc) != 0 && WEXITSTATUS(rc) != 3))
      return {false, "verify all did not run (status " + std::to_string(rc) + ")"};
  }
  int files = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    const fs::path other = root / "b" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other))
      return {false, e.path().filename().string() + " differs"};
    ++files;
  }
  return {files > 0, std::to_string(files) + " report files byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <mhdbl binary> <config>\n");
    return 2;
  }
  const RunConfig c;  // defaults are the acceptance settings
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"heat-oracle equivalence", [&] { return from_report(suite_oracle_heat(c)); }},
      {"MMS spatial convergence", [&] { return from_report(suite_mms_space(c)); }},
      {"MMS temporal convergence", [&] { return from_report(suite_mms_time(c)); }},
      {"cancellation residual", [&] { return from_report(suite_cancellation(c)); }},
      {"good-unknown identity", [&] { return from_report(suite_good_unknowns(c)); }},
      {"boundary identities", [&] { return from_report(suite_boundary(c)); }},
      {"commutator bench", [&] { return from_report(suite_commutator(c)); }},
      {"Hardy bench", [&] { return from_report(suite_hardy(c)); }},
      {"trace inequality", [&] { return from_report(suite_trace(c)); }},
      {"energy inequality", [&] { return from_report(suite_energy(c)); }},
      {"determinism", [&] { return determinism(argv[1], argv[2]); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %zu %s: %s (%s)\n", k + 1, criteria[k].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
