#include "doctest.h"

#include "modgeo/runner.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace modgeo;
using json = nlohmann::json;

namespace {

struct Run {
	int code = -1;
	std::string out;
};

Run run(const std::string& args) {
	const char* exe = std::getenv("MODGEO_CLI");
	REQUIRE_MESSAGE(exe != nullptr, "MODGEO_CLI is not set");
	std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
	Run r;
	FILE* p = popen(cmd.c_str(), "r");
	REQUIRE(p != nullptr);
	std::array<char, 4096> buf;
	std::size_t n;
	while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
	int st = pclose(p);
	r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
	return r;
}

std::string tmp_path(const std::string& name) {
	return (std::filesystem::temp_directory_path() / ("modgeo_test_" + name)).string();
}

json strip_time(json j) {
	j.erase("generated_at");
	return j;
}

}  // namespace

TEST_CASE("thm1 on D = 5, k = 2 passes") {
	Run r = run("verify thm1 --k 2 --gamma-disc 5 --sigma-trace 6");
	CHECK(r.code == 0);
	json j = json::parse(r.out);
	REQUIRE(j["instances"].size() >= 1);
	for (const json& it : j["instances"]) {
		CHECK(it["residual"].get<double>() < 1e-5);
		CHECK(it.contains("lhs"));
		CHECK(it.contains("rhs"));
		CHECK(it.contains("n_used"));
	}
	CHECK(j["status"] == "pass");
}

TEST_CASE("thm2 on D = 5, k = 3 at 0 passes") {
	Run r = run("verify thm2 --k 3 --disc 5 --dc 0/1");
	CHECK(r.code == 0);
	json j = json::parse(r.out);
	REQUIRE(j["instances"].size() == 1);
	CHECK(j["instances"][0]["rhs"].get<double>() == doctest::Approx(-4));
}

TEST_CASE("usage errors exit 64") {
	CHECK(run("verify thm2 --k 3 --disc 5 --dc 2/4").code == 64);
	CHECK(run("verify thm2 --k 3 --disc 5 --dc 1/0").code == 64);
	CHECK(run("verify thm2 --k 4 --disc 5 --dc 0/1").code == 64);
	CHECK(run("verify thm1 --k 2 --gamma-disc 9 --sigma-trace 6").code == 64);
	CHECK(run("verify thm1 --k 2 --gamma-matrix 1,2,3,4 --sigma-trace 6").code == 64);
	CHECK(run("verify thm1 --k 2 --gamma-disc 5").code == 64);
	CHECK(run("verify nonsense --k 2").code == 64);
	CHECK(run("verify thm1 --k 2 --gamma-disc 5 --sigma-trace 6 --tol -1").code == 64);
	CHECK(run("").code == 64);
	CHECK(run("--help").code == 0);
}

TEST_CASE("forced truncation cap exits 2") {
	Run r = run("verify katok --k 2 --gamma-disc 5 --sigma-trace 6 --height 1 --max-doublings 0");
	CHECK(r.code == 2);
	json j = json::parse(r.out);
	CHECK(j["status"] == "failure");
	CHECK(j["instances"][0].contains("error"));
}

TEST_CASE("residual exceedance exits 1") {
	Run r = run("verify thm2 --k 3 --disc 5 --dc 0/1 --tol 1e-30");
	CHECK(r.code == 1);
	CHECK(json::parse(r.out)["status"] == "residual_exceeded");
}

TEST_CASE("reports are byte-stable apart from the timestamp") {
	Run a = run("verify thm2 --k 3 --disc 5,8 --dc 0/1,1/2 --jobs 3");
	Run b = run("verify thm2 --k 3 --disc 5,8 --dc 0/1,1/2 --jobs 1");
	REQUIRE(a.code == 0);
	// the worker count must not change the instance records or their order
	CHECK(json::parse(a.out)["instances"].dump() == json::parse(b.out)["instances"].dump());
	Run c = run("verify thm2 --k 3 --disc 5,8 --dc 0/1,1/2 --jobs 3");
	CHECK(strip_time(json::parse(a.out)).dump() == strip_time(json::parse(c.out)).dump());
}

TEST_CASE("config file with flag override") {
	std::string cfg = tmp_path("cfg.ini");
	{
		std::ofstream f(cfg);
		f << "k = 3\ndisc = 5\ndc = 1/2\n";
	}
	json j = json::parse(run("verify thm2 --config " + cfg).out);
	CHECK(j["instances"][0]["d"] == "1");
	CHECK(j["instances"][0]["c"] == "2");
	json o = json::parse(run("verify thm2 --config " + cfg + " --dc 1/3").out);
	CHECK(o["instances"][0]["c"] == "3");
	std::filesystem::remove(cfg);
}

TEST_CASE("histogram accounting") {
	std::string out = tmp_path("hist.json");
	Run r = run("histogram --gamma-disc 5 --disc 8,12,13 --out " + out);
	CHECK(r.code == 0);
	std::ifstream jf(out);
	json j = json::parse(jf);
	std::ifstream cf(std::filesystem::path(out).replace_extension(".csv"));
	std::string line;
	std::size_t rows = 0;
	while (std::getline(cf, line)) {
		++rows;
		double c = std::stod(line.substr(line.rfind(',') + 1));
		CHECK(c >= -1.0);
		CHECK(c <= 1.0);
	}
	std::size_t total = 0;
	for (const json& it : j["instances"]) {
		total += it["count"].get<std::size_t>();
		int binned = 0;
		for (int b : it["bins"]) binned += b;
		CHECK(binned == it["count"].get<int>());
		CHECK(it["ks_distance"].get<double>() >= 0);
	}
	CHECK(rows == total);
	CHECK(total > 0);
	std::filesystem::remove(out);
	std::filesystem::remove(std::filesystem::path(out).replace_extension(".csv"));
}

TEST_CASE("coeffs as CSV") {
	Run r = run("coeffs --k 3 --gamma-disc 5 --n-max 4 --csv");
	CHECK(r.code == 0);
	std::istringstream in(r.out);
	std::string line;
	int rows = 0;
	while (std::getline(in, line)) ++rows;
	CHECK(rows == 4);
}

TEST_CASE("in-process runner") {
	ExperimentConfig cfg;
	cfg.command = Command::periods;
	cfg.ks = {3};
	cfg.discs = {Int(5)};
	RunResult r = run_verification(cfg);
	CHECK(r.exit_code == 0);
	CHECK(r.report["instances"].size() == 2);
	cfg.ks = {};
	CHECK_THROWS_AS(run_verification(cfg), UsageError);
	CHECK(parse_dc("-1/3") == std::pair<Int, Int>{-1, 3});
	CHECK_THROWS_AS(parse_dc("1/-3"), UsageError);
	CHECK_THROWS_AS(parse_matrix("1,1,1"), UsageError);
	CHECK(parse_matrix("2, 1, 1, 1") == GroupElement{2, 1, 1, 1});
	CHECK(ks_uniform({-0.5, 0.5}) == doctest::Approx(0.25));
	CHECK(default_tolerance(Command::katok) == 1e-5);
}
