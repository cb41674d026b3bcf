#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "ffchain/fit.hpp"
#include "ffchain/hopf.hpp"
#include "ffchain/sim.hpp"
#include "ffchain/steady.hpp"

namespace ffchain {

using Json = nlohmann::json;

/// CSV at 17 significant digits: lambda, x0..xn, eig_re_0.., eig_im_0..
std::string csv_steady_branch(const SteadyBranch& branch);

/// CSV: lambda, omega, B{i}_re, B{i}_im, ..., block eigenvalue columns.
std::string csv_hopf_branch(const HopfBranch& branch);

/// CSV: lambda, a0..an, period, t_transient, omega, hp0..hpn.
std::string csv_amplitude_table(const AmplitudeTable& table);

Json json_fit(const FitResult& fit);
Json json_steady_branch(const SteadyBranch& branch);
Json json_hopf_branch(const HopfBranch& branch);

std::uint64_t fnv1a64(const std::string& data);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Run manifest: config hash, tool version, seed, command, wall time. Kept
/// in its own file so numeric outputs stay byte-identical across runs.
Json make_manifest(const std::string& command, const std::string& config_text,
                   std::uint64_t seed, double wall_seconds);

extern const char* const kVersion;

} // namespace ffchain
