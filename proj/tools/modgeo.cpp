#include "modgeo/runner.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace modgeo;

namespace {

constexpr int kUsage = 64;

void setup_logging() {
	spdlog::set_default_logger(spdlog::stderr_color_mt("modgeo"));
	spdlog::set_level(spdlog::level::warn);
	if (const char* lvl = std::getenv("MODGEO_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

std::vector<Int> to_discs(const std::vector<std::string>& xs) {
	std::vector<Int> out;
	for (const auto& s : xs) {
		try {
			out.emplace_back(s);
		} catch (const std::exception&) {
			throw UsageError("not an integer discriminant: '" + s + "'");
		}
	}
	return out;
}

void write_file(const std::string& path, const std::string& body) {
	std::ofstream f(path);
	if (!f) throw std::runtime_error("cannot write " + path);
	f << body;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"Modular integrals, cycle integrals and their geometric identities"};
	app.require_subcommand(1);
	app.set_config("--config", "", "flat key = value file; flags on the command line take precedence");

	std::vector<int> ks{2};
	std::vector<std::string> gamma_discs, discs, sigma_matrices, dcs;
	std::string gamma_matrix, out;
	std::vector<long> sigma_traces;
	std::optional<double> tol;
	TruncationPolicy policy;
	int jobs = 1, n_max = 10, bins = 20;
	double y = 0.8;
	bool csv_stdout = false;

	app.add_option("--k", ks, "weight parameter(s)")->delimiter(',');
	app.add_option("--gamma-disc", gamma_discs, "take gamma over every class of these discriminants")->delimiter(',');
	app.add_option("--disc", discs, "discriminant list (histogram ladder)")->delimiter(',');
	app.add_option("--gamma-matrix", gamma_matrix, "gamma as a,b,c,d");
	app.add_option("--sigma-matrix", sigma_matrices, "sigma as a,b,c,d; repeatable or ';'-separated")->delimiter(';');
	app.add_option("--sigma-trace", sigma_traces, "every primitive class of these traces")->delimiter(',');
	app.add_option("--dc", dcs, "cusp -d/c given as d/c")->delimiter(',');
	app.add_option("--tol", tol, "residual tolerance");
	app.add_option("--height", policy.height, "initial truncation height")->capture_default_str();
	app.add_option("--max-doublings", policy.max_doublings, "height doublings before giving up")->capture_default_str();
	app.add_option("--series-tol", policy.tol, "series convergence tolerance")->capture_default_str();
	app.add_option("--cycle-tol", policy.cycle_tol, "homogenization tolerance")->capture_default_str();
	app.add_option("--jobs", jobs, "worker threads")->capture_default_str();
	app.add_option("--out", out, "report path; CSV tables go next to it with a .csv suffix");
	app.add_option("--n-max", n_max, "coeffs: largest n")->capture_default_str();
	app.add_option("--y", y, "coeffs: sampling height")->capture_default_str();
	app.add_option("--bins", bins, "histogram: bin count")->capture_default_str();
	app.add_flag("--csv", csv_stdout, "coeffs/histogram: print the CSV table instead of the JSON report");

	std::string which;
	auto* verify = app.add_subcommand("verify", "check an identity numerically");
	verify->add_option("what", which, "thm1, thm2, katok or periods")
	    ->required()
	    ->check(CLI::IsMember({"thm1", "thm2", "katok", "periods"}));
	verify->fallthrough();
	auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients of F_{k,D}")->fallthrough();
	auto* hist = app.add_subcommand("histogram", "intersection angle statistics")->fallthrough();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int rc = app.exit(e);
		return rc == 0 ? 0 : kUsage;
	}

	setup_logging();
	ExperimentConfig cfg;
	try {
		if (verify->parsed()) cfg.command = parse_command(which);
		else if (coeffs->parsed()) cfg.command = Command::coeffs;
		else if (hist->parsed()) cfg.command = Command::histogram;
		cfg.ks = ks;
		cfg.gamma_discs = to_discs(gamma_discs);
		cfg.discs = to_discs(discs);
		if (!gamma_matrix.empty()) cfg.gamma_matrix = parse_matrix(gamma_matrix);
		for (const auto& s : sigma_matrices) cfg.sigma_matrices.push_back(parse_matrix(s));
		cfg.sigma_traces = sigma_traces;
		for (const auto& s : dcs) cfg.dcs.push_back(parse_dc(s));
		cfg.tol = tol;
		cfg.policy = policy;
		cfg.jobs = jobs;
		cfg.n_max = n_max;
		cfg.y = y;
		cfg.bins = bins;
		cfg.out = out;
		validate(cfg);
	} catch (const UsageError& e) {
		std::cerr << "usage error: " << e.what() << "\n";
		return kUsage;
	}

	try {
		RunResult r = run_verification(cfg);
		std::string report = r.report.dump(2) + "\n";
		if (!out.empty()) {
			write_file(out, report);
			if (cfg.command == Command::coeffs || cfg.command == Command::histogram)
				write_file(std::filesystem::path(out).replace_extension(".csv").string(), r.csv);
		}
		if (csv_stdout) std::cout << r.csv;
		else if (out.empty()) std::cout << report;
		return r.exit_code;
	} catch (const UsageError& e) {
		std::cerr << "usage error: " << e.what() << "\n";
		return kUsage;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
}
