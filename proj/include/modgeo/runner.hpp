#pragma once

#include "modgeo/poincare.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modgeo {

enum class Command { thm1, thm2, katok, periods, coeffs, histogram };

struct UsageError : std::invalid_argument {
	using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
	Command command = Command::thm1;
	std::vector<int> ks{2};
	std::vector<Int> gamma_discs;
	std::vector<Int> discs;                       // histogram: the ladder of D; otherwise more gamma discriminants
	std::optional<GroupElement> gamma_matrix;
	std::vector<GroupElement> sigma_matrices;
	std::vector<long> sigma_traces;
	std::vector<std::pair<Int, Int>> dcs;         // (d, c)
	std::optional<double> tol;                    // residual tolerance; per-command default when empty
	TruncationPolicy policy;
	int jobs = 1;
	int n_max = 10;                               // coeffs
	double y = 0.8;                               // coeffs: sampling height
	int bins = 20;                                // histogram
	std::string out;
};

struct RunResult {
	int exit_code = 0;             // 0 pass, 1 residual exceeded, 2 computation failure
	nlohmann::json report;
	std::string csv;               // coeffs and histogram tables
};

double default_tolerance(Command c);
Command parse_command(const std::string& s);
std::string command_name(Command c);
// "d/c" with gcd(d, c) = 1 and c > 0.
std::pair<Int, Int> parse_dc(const std::string& s);
// "a,b,c,d" with ad - bc = 1.
GroupElement parse_matrix(const std::string& s);

// Throws UsageError.
void validate(const ExperimentConfig& cfg);
RunResult run_verification(const ExperimentConfig& cfg);

// Kolmogorov-Smirnov distance of the sample to the uniform law on [-1, 1].
double ks_uniform(std::vector<double> xs);

}  // namespace modgeo
