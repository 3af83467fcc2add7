// SPDX-License-Identifier: Apache-2.0
//! \file momlat/cli.hpp
//! Command-line front end: configs, simulate / spectral / verify commands.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "momlat/dynamics.hpp"

namespace momlat::cli
{
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

//! Version string written into every result record.
std::string tool_version();

//! Shortest round-trip decimal, '.' separator, no locale.
std::string format_double(double v);

//---------------------------------------------------------------------------//
struct ExperimentConfig
{
    std::string command;  //!< simulate, spectral or verify

    // simulate
    std::string model;
    int dim = 1;
    double eps = 0;
    std::vector<double> p;  //!< empty: isotropic
    double tmax = 1024;
    std::uint64_t reps = 1000;
    std::uint64_t seed = 0;
    std::string time_mode = "continuous";

    // spectral
    std::string quantity;
    std::vector<double> lambdas;
    std::string bound_mode = "aniso";
    int points = 0;  //!< 0: automatic resolution

    // verify
    std::string suite;
    bool strict_stated = false;

    std::string out;     //!< CSV (simulate, spectral) or JSON (verify) path
    std::string report;  //!< verify: JSON report path

    friend bool operator==(ExperimentConfig const&,
                           ExperimentConfig const&) = default;
};

nlohmann::json to_json(ExperimentConfig const& c);
//! Throws std::invalid_argument on unknown keys or wrong types.
ExperimentConfig config_from_json(nlohmann::json const& j);

//! Simulation config for `simulate`; throws std::invalid_argument.
SimConfig to_sim_config(ExperimentConfig const& c);

//---------------------------------------------------------------------------//
struct VerifyRow
{
    std::string suite;
    std::string name;
    double value = 0;
    double reference = 0;
    double sigma = 0;  //!< discrepancy in combined standard errors, if any
    bool pass = true;
    //! "derived" rows always gate, "stated" rows gate only with
    //! --strict-stated, "info" rows never gate.
    std::string kind = "derived";
    std::string detail;
};

//! Run one suite ("all" runs every suite). `reps` = 0 selects defaults.
std::vector<VerifyRow> run_suite(std::string const& suite, std::uint64_t reps,
                                 std::uint64_t seed, unsigned threads);

int cmd_simulate(ExperimentConfig const& c, unsigned threads,
                 std::ostream& out, std::ostream& err);
int cmd_spectral(ExperimentConfig const& c, std::ostream& out,
                 std::ostream& err);
int cmd_verify(ExperimentConfig const& c, unsigned threads, std::ostream& out,
               std::ostream& err);

//! Parse argv and dispatch; returns the process exit code.
int run(int argc, char const* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace momlat::cli
