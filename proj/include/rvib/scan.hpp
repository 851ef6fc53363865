#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rvib/dynamics.hpp"
#include "rvib/model.hpp"

namespace rvib {

struct ScanRequest {
    ModelParams params;
    FockCutoffs cutoffs;
    std::vector<double> rabi_grid;
    std::vector<double> rf_grid;   ///< absolute ω_rf values
    double rf_amplitude = 0.1;
    double temperature = 0.0;
    double thermal_epsilon = 1e-4;
    int thermal_margin = 8;
    double duration = 30.0;
    EvolveOptions evolve;
    InitialState initial = InitialState::bare;
    int threads = 1;
};

/// Integrated Rydberg signal I(Ω, ω_rf); rows follow rabi_grid, columns rf_grid.
struct ScanResult {
    std::vector<double> rabi_grid;
    std::vector<double> rf_grid;
    Eigen::MatrixXd signal;
    std::size_t space_dim = 0;
    std::size_t ensemble_size = 1;
};

ScanResult rf_scan(const ScanRequest& request);

/// Long form "omega,omega_rf,I" in grid order with %.10e formatting.
std::string scan_csv(const ScanResult& result);

/// Uniform grid of `points` values from lo to hi inclusive (a single point yields lo).
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace rvib
