#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "mhdbl/config.hpp"
#include "mhdbl/diagnostics.hpp"
#include "mhdbl/dynamics.hpp"
#include "mhdbl/snapshot.hpp"
#include "mhdbl/suites.hpp"

namespace mhdbl {

enum ExitCode : int {
  kExitOk = 0,
  kExitBadInput = 1,
  kExitStopped = 2,  ///< positivity lost (or the step collapsed / blew up)
  kExitSuiteFailed = 3,
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw InvalidParameter("output_dir", "cannot write " + p.string());
  return os;
}

inline std::string snapshot_name(long step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%08ld.mhdbl", step);
  return buf;
}

/// C* along a run, accumulated one output row at a time.
class RunningRatio {
public:
  double push(const EnergyReport& r) {
    if (!started_) {
      started_ = true;
      e0_ = r.E;
    } else {
      const double h = r.t - last_.t;
      intD_ += 0.5 * h * (last_.D + r.D);
      intE_ += 0.5 * h * (last_.E + last_.E * last_.E + r.E + r.E * r.E);
    }
    last_ = r;
    if (!(e0_ > kEps0)) return 0.0;
    return (r.E + intD_) / (e0_ + intE_);
  }

private:
  bool started_ = false;
  double e0_ = 0.0, intD_ = 0.0, intE_ = 0.0;
  EnergyReport last_;
};

}  // namespace detail

/// Evolve the configured initial data to t_end, writing timeseries.csv,
/// snapshots and run_report.txt into the output directory.
inline int cmd_run(const RunConfig& c, std::ostream& log, std::ostream& err) {
  namespace fs = std::filesystem;
  try {
    validate_config(c);
    const fs::path dir(c.outputDir);
    fs::create_directories(dir);
    const Grid grid = build_grid(c.nx, c.ny, c.ymax, c.ell, c.delta);
    State s = make_initial_data(c.initial, grid);

    auto series = detail::open_out(dir / "timeseries.csv");
    series << EnergyReport::csv_header() << '\n';
    detail::RunningRatio ratio;
    auto emit = [&](const State& now, const State* prev) {
      EnergyReport r = make_energy_report(now, grid, prev);
      r.Cstar = ratio.push(r);
      series << r.csv_row() << '\n';
    };
    emit(s, nullptr);

    const SolverConfig& cfg = c.solver;
    const DiffusionSolver diffusion(grid, cfg.dt, cfg.diffusion);
    long n = 0;
    std::string stopReason;
    try {
      while (cfg.tEnd - s.t > 1e-12 * std::max(1.0, cfg.tEnd)) {
        const double remaining = cfg.tEnd - s.t;
        const double cap = remaining < cfg.dt * (1.0 + 1e-9) ? remaining : cfg.dt;
        State next = step(s, cfg, grid, {}, cap, &diffusion);
        ++n;
        const bool last = cfg.tEnd - next.t <= 1e-12 * std::max(1.0, cfg.tEnd);
        if (n % cfg.outputEvery == 0 || last) emit(next, &s);
        if (c.snapshotEvery > 0 && n % c.snapshotEvery == 0)
          write_snapshot((dir / detail::snapshot_name(n)).string(), next, grid);
        s = std::move(next);
      }
    } catch (const PositivityLost& e) {
      stopReason = e.what();
    } catch (const CflCollapse& e) {
      stopReason = e.what();
    } catch (const NonFinite& e) {
      stopReason = e.what();
    }
    series.close();
    write_snapshot((dir / "final.mhdbl").string(), s, grid);

    auto report = detail::open_out(dir / "run_report.txt");
    report << "steps " << n << "\nt " << format_double(s.t) << '\n';
    if (!stopReason.empty()) {
      report << "status stopped\nreason " << stopReason << '\n';
      err << "run stopped: " << stopReason << '\n';
      return kExitStopped;
    }
    report << "status completed\n";
    log << "run completed: " << n << " steps to t=" << format_double(s.t) << ", output in "
        << dir.string() << '\n';
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const EnvelopeViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const GridTooCoarse& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}

/// Run the suites selected by `word`, writing <suite>_report.{csv,txt} per suite
/// (plus all_report.* for "all"). Exit 0 iff every selected suite passes.
inline int cmd_verify(const std::string& word, const RunConfig& c, std::ostream& log,
                      std::ostream& err) {
  namespace fs = std::filesystem;
  const auto names = expand_suite(word);
  if (names.empty()) {
    err << "error: unknown suite '" << word << "'\n";
    return kExitBadInput;
  }
  try {
    validate_config(c);
    const fs::path dir(c.outputDir);
    fs::create_directories(dir);
    std::string allText, allCsv;
    std::vector<std::string> failed;
    for (const auto& name : names) {
      const VerificationReport rep = run_suite(name, c);
      detail::open_out(dir / (name + "_report.txt")) << rep.text();
      detail::open_out(dir / (name + "_report.csv")) << rep.csv();
      allText += rep.text() + '\n';
      allCsv += rep.csv(allCsv.empty());
      log << (rep.passed() ? "PASS " : "FAIL ") << name << '\n';
      if (!rep.passed()) failed.push_back(name);
    }
    if (word == "all" || word == "mms") {
      detail::open_out(dir / (word + "_report.txt")) << allText;
      detail::open_out(dir / (word + "_report.csv")) << allCsv;
    }
    if (!failed.empty()) {
      err << "failing suites:";
      for (const auto& f : failed) err << ' ' << f;
      err << '\n';
      return kExitSuiteFailed;
    }
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSuiteFailed;
  }
}

}  // namespace mhdbl
