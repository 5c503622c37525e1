#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cvxscat/experiment.hpp"

namespace cvxscat::cli {

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  bool quiet = false;
};

/// Defaults, then the config file, then --set overrides, in that order.
ExperimentConfig resolve_config(const CommonArgs& args, const ExperimentConfig& base = {});
std::filesystem::path output_dir(const CommonArgs& args, const ExperimentConfig& cfg);

int cmd_simulate(const CommonArgs& args, double field_k, bool dump_basis);
int cmd_invert(const CommonArgs& args, const std::string& data_file);
int cmd_reconstruct(const CommonArgs& args, const std::string& fields_file);
int cmd_certify(const CommonArgs& args, const std::string& example, const std::vector<std::string>& which);
int cmd_example(const CommonArgs& args, const std::string& name);
int cmd_invariance(const CommonArgs& args, const std::string& example);

}  // namespace cvxscat::cli
