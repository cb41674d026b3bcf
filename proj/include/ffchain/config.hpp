#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ffchain/poly.hpp"

namespace ffchain {

/// Parsed run configuration. Linear slot coefficients are matrix-valued
/// polynomials in the parameter of degree at most two; the nonlinear part is
/// given term-wise, either over scalar coordinates or in the complex cell
/// view (d = 2).
struct RunConfig {
    int n = 1;
    int d = 1;
    std::string pipeline = "steady";

    std::vector<std::array<Mat, 3>> linear; ///< n+1 slots, powers 0..2 of the parameter

    bool nonlinear_is_complex = false;
    PolyResponse nonlinear_real;
    ComplexPoly nonlinear_complex;

    double lambda_min = 1e-8;
    double lambda_max = 1e-4;
    int lambda_points = 20;
    std::string spacing = "log"; ///< "log" or "linear"
    double tol = 1e-10;
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

/// Parse the sectioned key-value format. Errors carry the line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical printer; print(parse(print(c))) == print(c) bit for bit.
std::string print_config(const RunConfig& cfg);

/// Full response in scalar coordinates (linear part plus nonlinear terms).
PolyResponse build_response(const RunConfig& cfg);

/// Full response in the complex cell view; requires d = 2.
ComplexPoly build_complex_response(const RunConfig& cfg);

/// The |lambda| grid described by the run section.
std::vector<double> lambda_grid(const RunConfig& cfg);

} // namespace ffchain
