#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhdbl/dynamics.hpp"
#include "mhdbl/errors.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/state.hpp"

namespace mhdbl {

/// Every knob of a run or a verification suite. Defaults are the acceptance
/// settings; a config file overrides any subset.
struct RunConfig {
  // grid
  std::size_t nx = 32;
  std::size_t ny = 256;
  double ymax = 20.0;
  double ell = 1.0;
  double delta = 2.0;
  // solver
  SolverConfig solver{};
  // initial data
  InitialDataSpec initial{};
  // output
  std::string outputDir = "out";
  int snapshotEvery = 0;  ///< 0: final snapshot only
  std::uint64_t seed = 12345;

  // oracle-heat
  std::size_t heatNx = 4;
  std::size_t heatNy = 512;
  double heatYmax = 20.0;
  double heatDt = 1e-4;
  double heatTEnd = 0.1;
  int heatRefine = 16;
  double heatTolU = 1e-12;
  double heatTolF = 1e-5;

  // mms
  double mmsAmp = 0.05;
  double mmsYmax = 20.0;
  std::size_t mmsNx = 16;
  std::vector<std::size_t> mmsNyList{128, 256, 512};
  double mmsSpaceDt = 1e-5;
  double mmsSpaceTEnd = 0.02;
  double mmsMinSpaceOrder = 3.0;
  double mmsXTol = 1e-10;
  std::size_t mmsTimeNy = 512;
  std::vector<double> mmsTimeDtList{4e-4, 2e-4, 1e-4};
  double mmsTimeTEnd = 0.2;
  double mmsTimeRefFactor = 8.0;
  double mmsMinTimeOrder = 0.9;

  // state families (cancellation, good unknowns, hardy, boundary)
  std::size_t familyNx = 32;
  double familyYmax = 8.0;
  std::vector<std::size_t> familyNyList{128, 256, 512};
  double cancelYmax = 20.0;  ///< tails must have decayed for the y-order to show
  double cancelMinOrder = 2.0;
  double cancelTol = 1e-4;
  double goodUnknownsTol = 1e-6;
  double hardyMaxSpread = 0.10;
  double boundaryDt = 1e-3;  ///< at the coarsest ny; scaled with the spacing
  double boundaryTEnd = 0.3;
  double boundaryMinOrder = 1.0;
  double boundaryZeroTol = 1e-8;

  // commutator
  double commutatorSigma = 0.5;
  std::vector<std::size_t> commutatorNxList{64, 128, 256, 512};
  int commutatorTrials = 100;
  double commutatorMaxGrowth = 1.25;

  // trace inequality
  int traceTrials = 50;
  std::size_t traceNx = 32;
  std::size_t traceNy = 256;
  double traceYmax = 8.0;
  double traceSlack = 0.05;

  // energy inequality
  std::vector<std::size_t> energyNxList{32, 64};
  std::vector<std::size_t> energyNyList{256, 512};
  double energyDt = 1e-3;
  double energyTEnd = 0.5;
  int energyOutputEvery = 10;
  double energyMaxSpread = 0.10;
  double energyMinEnvelope = 0.5;  ///< in units of c0
};

namespace detail {

template <class T>
T json_get(const nlohmann::json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw InvalidParameter(key, "must be a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw InvalidParameter(key, "must be a string");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw InvalidParameter(key, "must be an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<long long>() < 0) throw InvalidParameter(key, "must be >= 0");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw InvalidParameter(key, "must be a number");
    }
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidParameter(key, "has the wrong type");
  }
}

template <class T>
std::vector<T> json_list(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw InvalidParameter(key, "must be a non-empty array");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(json_get<T>(e, key));
  return out;
}

}  // namespace detail

inline void validate_config(const RunConfig& c);

/// Parse flat JSON text into a RunConfig. Unknown keys, wrong types and
/// out-of-range values raise InvalidParameter naming the key.
inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter("config", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("config", "top level must be an object");

  RunConfig c;
  using Setter = std::function<void(const nlohmann::json&)>;
  using detail::json_get;
  using detail::json_list;
  std::map<std::string, Setter> keys;
#define MHDBL_KEY(name, target, T) \
  keys[name] = [&](const nlohmann::json& v) { target = json_get<T>(v, name); }
#define MHDBL_LIST(name, target, T) \
  keys[name] = [&](const nlohmann::json& v) { target = json_list<T>(v, name); }
  MHDBL_KEY("nx", c.nx, std::size_t);
  MHDBL_KEY("ny", c.ny, std::size_t);
  MHDBL_KEY("ymax", c.ymax, double);
  MHDBL_KEY("ell", c.ell, double);
  MHDBL_KEY("delta", c.delta, double);
  MHDBL_KEY("dt", c.solver.dt, double);
  MHDBL_KEY("cfl", c.solver.cfl, double);
  MHDBL_KEY("t_end", c.solver.tEnd, double);
  MHDBL_KEY("f_floor", c.solver.fFloor, double);
  MHDBL_KEY("output_every", c.solver.outputEvery, int);
  MHDBL_KEY("dealias", c.solver.dealias, bool);
  keys["diffusion"] = [&](const nlohmann::json& v) {
    const auto s = json_get<std::string>(v, "diffusion");
    if (s == "sdirk2") c.solver.diffusion = DiffusionScheme::Sdirk2;
    else if (s == "backward_euler") c.solver.diffusion = DiffusionScheme::BackwardEuler;
    else throw InvalidParameter("diffusion", "must be \"sdirk2\" or \"backward_euler\"");
  };
  MHDBL_KEY("c0", c.initial.c0, double);
  MHDBL_KEY("amp_u", c.initial.ampU, double);
  MHDBL_KEY("amp_f", c.initial.ampF, double);
  MHDBL_KEY("mode", c.initial.mode, int);
  MHDBL_KEY("output_dir", c.outputDir, std::string);
  MHDBL_KEY("snapshot_every", c.snapshotEvery, int);
  MHDBL_KEY("seed", c.seed, std::uint64_t);

  MHDBL_KEY("heat_nx", c.heatNx, std::size_t);
  MHDBL_KEY("heat_ny", c.heatNy, std::size_t);
  MHDBL_KEY("heat_ymax", c.heatYmax, double);
  MHDBL_KEY("heat_dt", c.heatDt, double);
  MHDBL_KEY("heat_t_end", c.heatTEnd, double);
  MHDBL_KEY("heat_refine", c.heatRefine, int);
  MHDBL_KEY("heat_tol_u", c.heatTolU, double);
  MHDBL_KEY("heat_tol_f", c.heatTolF, double);

  MHDBL_KEY("mms_amp", c.mmsAmp, double);
  MHDBL_KEY("mms_ymax", c.mmsYmax, double);
  MHDBL_KEY("mms_nx", c.mmsNx, std::size_t);
  MHDBL_LIST("mms_ny_list", c.mmsNyList, std::size_t);
  MHDBL_KEY("mms_space_dt", c.mmsSpaceDt, double);
  MHDBL_KEY("mms_space_t_end", c.mmsSpaceTEnd, double);
  MHDBL_KEY("mms_min_space_order", c.mmsMinSpaceOrder, double);
  MHDBL_KEY("mms_x_tol", c.mmsXTol, double);
  MHDBL_KEY("mms_time_ny", c.mmsTimeNy, std::size_t);
  MHDBL_LIST("mms_time_dt_list", c.mmsTimeDtList, double);
  MHDBL_KEY("mms_time_ref_factor", c.mmsTimeRefFactor, double);
  MHDBL_KEY("mms_time_t_end", c.mmsTimeTEnd, double);
  MHDBL_KEY("mms_min_time_order", c.mmsMinTimeOrder, double);

  MHDBL_KEY("family_nx", c.familyNx, std::size_t);
  MHDBL_KEY("family_ymax", c.familyYmax, double);
  MHDBL_LIST("family_ny_list", c.familyNyList, std::size_t);
  MHDBL_KEY("cancel_ymax", c.cancelYmax, double);
  MHDBL_KEY("cancel_min_order", c.cancelMinOrder, double);
  MHDBL_KEY("cancel_tol", c.cancelTol, double);
  MHDBL_KEY("good_unknowns_tol", c.goodUnknownsTol, double);
  MHDBL_KEY("hardy_max_spread", c.hardyMaxSpread, double);
  MHDBL_KEY("boundary_dt", c.boundaryDt, double);
  MHDBL_KEY("boundary_t_end", c.boundaryTEnd, double);
  MHDBL_KEY("boundary_min_order", c.boundaryMinOrder, double);
  MHDBL_KEY("boundary_zero_tol", c.boundaryZeroTol, double);

  MHDBL_KEY("commutator_sigma", c.commutatorSigma, double);
  MHDBL_LIST("commutator_nx_list", c.commutatorNxList, std::size_t);
  MHDBL_KEY("commutator_trials", c.commutatorTrials, int);
  MHDBL_KEY("commutator_max_growth", c.commutatorMaxGrowth, double);

  MHDBL_KEY("trace_trials", c.traceTrials, int);
  MHDBL_KEY("trace_nx", c.traceNx, std::size_t);
  MHDBL_KEY("trace_ny", c.traceNy, std::size_t);
  MHDBL_KEY("trace_ymax", c.traceYmax, double);
  MHDBL_KEY("trace_slack", c.traceSlack, double);

  MHDBL_LIST("energy_nx_list", c.energyNxList, std::size_t);
  MHDBL_LIST("energy_ny_list", c.energyNyList, std::size_t);
  MHDBL_KEY("energy_dt", c.energyDt, double);
  MHDBL_KEY("energy_t_end", c.energyTEnd, double);
  MHDBL_KEY("energy_output_every", c.energyOutputEvery, int);
  MHDBL_KEY("energy_max_spread", c.energyMaxSpread, double);
  MHDBL_KEY("energy_min_envelope", c.energyMinEnvelope, double);
#undef MHDBL_KEY
#undef MHDBL_LIST

  for (const auto& [key, value] : j.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) throw InvalidParameter(key, "unknown configuration key");
    if (value.is_object()) throw InvalidParameter(key, "nested objects are not allowed");
    it->second(value);
  }
  c.initial.delta = c.delta;
  validate_config(c);
  return c;
}

/// Range checks that do not need a grid; the grid builder checks the rest.
inline void validate_config(const RunConfig& c) {
  c.solver.validate();
  if (!(c.initial.c0 > 0.0)) throw InvalidParameter("c0", "must be positive");
  if (!(c.initial.ampF >= 0.0 && c.initial.ampF < 1.0))
    throw InvalidParameter("amp_f", "must lie in [0, 1)");
  if (c.snapshotEvery < 0) throw InvalidParameter("snapshot_every", "must be >= 0");
  if (c.energyNxList.size() != c.energyNyList.size())
    throw InvalidParameter("energy_ny_list", "must have as many entries as energy_nx_list");
  if (!(c.mmsTimeRefFactor > 1.0))
    throw InvalidParameter("mms_time_ref_factor", "must be > 1");
  if (c.heatRefine < 1) throw InvalidParameter("heat_refine", "must be >= 1");
  if (c.outputDir.empty()) throw InvalidParameter("output_dir", "must not be empty");
  // The grid builder owns the (nx, ny, ymax, ell, delta) constraints; run it once
  // here so that a bad file fails before any work starts.
  (void)build_grid(c.nx, c.ny, c.ymax, c.ell, c.delta);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidParameter("config", "cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mhdbl
