#include "modgeo/runner.hpp"

#include "modgeo/cycles.hpp"
#include "modgeo/lfun.hpp"
#include "modgeo/periods.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace modgeo {

using json = nlohmann::json;

namespace {

enum class Status { pass = 0, fail = 1, error = 2 };

struct Outcome {
	Status status = Status::pass;
	json items = json::array();
	std::string csv;
};

Int parse_int(const std::string& s) {
	std::size_t i = 0;
	if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
	if (i == s.size() || !std::all_of(s.begin() + i, s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
		throw UsageError("not an integer: '" + s + "'");
	return Int(s);
}

std::string trim(std::string s) {
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
	std::size_t i = 0;
	while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
	return s.substr(i);
}

std::vector<FormClass> gamma_classes(const ExperimentConfig& cfg, bool include_discs) {
	std::vector<FormClass> out;
	auto add = [&](const FormClass& c) {
		if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
	};
	if (cfg.gamma_matrix) add(reduction_cycle(form_from_matrix(normalize_hyperbolic(*cfg.gamma_matrix))));
	std::vector<Int> ds = cfg.gamma_discs;
	if (include_discs) ds.insert(ds.end(), cfg.discs.begin(), cfg.discs.end());
	for (const Int& D : ds)
		for (const FormClass& c : class_representatives(D)) add(c);
	return out;
}

std::vector<GroupElement> sigmas(const ExperimentConfig& cfg) {
	std::vector<GroupElement> out;
	for (const GroupElement& g : cfg.sigma_matrices) out.push_back(normalize_hyperbolic(g));
	for (long t : cfg.sigma_traces)
		for (const GroupElement& g : primitive_classes_of_trace(t)) out.push_back(g);
	return out;
}

QForm primitive_part(const QForm& q) {
	Int g = q.content();
	return {q.A / g, q.B / g, q.C / g};
}

// True when q or -q is a multiple of a form in cls, i.e. they cut out the same closed geodesic up to orientation.
bool same_geodesic(const FormClass& cls, const QForm& q) {
	FormClass p = reduction_cycle(primitive_part(q));
	QForm s = primitive_part(cls.seed);
	return p.contains(s) || p.contains(-s);
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json evaluator_json(const ModularIntegral& F) {
	return {{"coefficients", F.coefficients().size()},
	        {"condition", F.condition()},
	        {"residual", F.residual()},
	        {"validation_error", F.validation_error()}};
}

void mark(Outcome& o, bool ok) {
	if (!ok && o.status == Status::pass) o.status = Status::fail;
}

Outcome run_cycle_group(const ExperimentConfig& cfg, int k, const FormClass& cls, const std::vector<GroupElement>& sig,
                        double tol) {
	Outcome o;
	const bool katok = cfg.command == Command::katok;
	ModularIntegral F(k, cls, katok ? Flavor::katok : Flavor::parson, cfg.policy);
	for (const GroupElement& s : sig) {
		json item{{"k", k}, {"D", cls.discriminant.str()}, {"gamma", cls.seed.str()}, {"sigma", s.str()}};
		if (same_geodesic(cls, form_from_matrix(s))) {
			item["skipped"] = "sigma is conjugate to gamma";
			o.items.push_back(item);
			continue;
		}
		CycleIntegralReport r = katok ? katok_report(F, s, cfg.policy) : theorem1_report(F, s, cfg.policy);
		bool ok = r.residual < tol;
		item.update({{"lhs", r.lhs},
		             {"rhs", r.rhs},
		             {"residual", r.residual},
		             {"tol", tol},
		             {"pass", ok},
		             {"n_used", r.n_used},
		             {"heights_used", r.heights_used},
		             {"evaluator", evaluator_json(F)}});
		mark(o, ok);
		o.items.push_back(item);
	}
	return o;
}

Outcome run_thm2(const ExperimentConfig& cfg, int k, const FormClass& cls, double tol) {
	Outcome o;
	ModularIntegral F(k, cls, Flavor::parson, cfg.policy);
	for (const auto& [d, c] : cfg.dcs) {
		Theorem2Report r = theorem2_sides(F, d, c);
		bool ok = r.residual < tol;
		o.items.push_back({{"k", k},
		                   {"D", cls.discriminant.str()},
		                   {"gamma", cls.seed.str()},
		                   {"d", d.str()},
		                   {"c", c.str()},
		                   {"lhs", r.lhs},
		                   {"rhs", r.rhs},
		                   {"residual", r.residual},
		                   {"tol", tol},
		                   {"pass", ok},
		                   {"intersections", r.intersections},
		                   {"l_value", cplx_json(r.l_value)},
		                   {"evaluator", evaluator_json(F)}});
		mark(o, ok);
	}
	return o;
}

json period_json(const PeriodReport& r) {
	json rec = json::array();
	for (const RecognizedPeriod& p : r.recognized) {
		json e{{"n", p.n}, {"value", cplx_json(p.value)}};
		if (p.rational) {
			e["p"] = p.rational->p.str();
			e["q"] = p.rational->q.str();
		} else {
			e["p"] = nullptr;
			e["q"] = nullptr;
		}
		rec.push_back(e);
	}
	json lhs = json::array(), rhs = json::array(), per = json::array();
	for (const cplx& z : r.lhs) lhs.push_back(cplx_json(z));
	for (const cplx& z : r.rhs) rhs.push_back(cplx_json(z));
	for (const cplx& z : r.periods) per.push_back(cplx_json(z));
	return {{"formula", r.formula},
	        {"k", r.k},
	        {"D", r.D.str()},
	        {"periods", per},
	        {"lhs", lhs},
	        {"rhs", rhs},
	        {"ratios", r.ratios},
	        {"lambda", cplx_json(r.lambda)},
	        {"max_ratio_deviation", r.max_ratio_deviation},
	        {"degenerate", r.degenerate},
	        {"alt_sign_deviation", r.alt_sign_deviation},
	        {"neg_zeta_deviation", r.neg_zeta_deviation},
	        {"recognized_periods", rec},
	        {"symmetry_residuals", r.symmetry_residuals}};
}

Outcome run_periods(const ExperimentConfig& cfg, int k, const Int& D, double tol) {
	Outcome o;
	auto judge = [&](const PeriodReport& r) {
		bool sym = std::all_of(r.symmetry_residuals.begin(), r.symmetry_residuals.end(), [](double x) { return x < 1e-5; });
		bool ok = r.max_ratio_deviation < tol && r.recognition_ok() && sym;
		json j = period_json(r);
		j["tol"] = tol;
		j["pass"] = ok;
		mark(o, ok);
		o.items.push_back(j);
	};
	for (const FormClass& cls : class_representatives(D)) {
		PeriodReport r = verify_period_formula_class(k, cls, cfg.policy);
		judge(r);
		o.items.back()["gamma"] = cls.seed.str();
	}
	if (k % 2 == 1) judge(verify_period_formula_disc(k, D, cfg.policy));
	return o;
}

Outcome run_coeffs(const ExperimentConfig& cfg, int k, const FormClass& cls) {
	Outcome o;
	FourierTable t = fourier_coefficients(k, cls, cfg.n_max, cfg.y, cfg.policy);
	json cs = json::array();
	std::ostringstream csv;
	csv.precision(17);
	for (int n = 1; n <= cfg.n_max; ++n) {
		cs.push_back({{"n", n}, {"re", t.at(n).real()}, {"im", t.at(n).imag()}});
		csv << k << ',' << cls.discriminant.str() << ',' << cls.seed.str() << ',' << n << ',' << t.at(n).real() << ','
		    << t.at(n).imag() << '\n';
	}
	o.items.push_back({{"k", k},
	                   {"D", cls.discriminant.str()},
	                   {"gamma", cls.seed.str()},
	                   {"height_used", t.height_used},
	                   {"samples", t.samples},
	                   {"coeffs", cs}});
	o.csv = csv.str();
	return o;
}

Outcome run_histogram(const ExperimentConfig& cfg, const FormClass& gamma, const Int& D) {
	Outcome o;
	GroupElement g = fundamental_automorph(gamma.seed);
	std::vector<double> cosines;
	std::ostringstream csv;
	csv.precision(17);
	int skipped = 0;
	for (const FormClass& cls : class_representatives(D)) {
		if (same_geodesic(cls, form_from_matrix(g))) {
			++skipped;
			continue;
		}
		for (const Intersection& p : enumerate_closed_intersections(cls, g)) {
			cosines.push_back(p.cos_angle);
			csv << D.str() << ',' << cls.seed.str() << ',' << p.cos_angle << '\n';
		}
	}
	std::vector<int> bins(cfg.bins, 0);
	for (double c : cosines) {
		int b = std::clamp(int((c + 1) / 2 * cfg.bins), 0, cfg.bins - 1);
		++bins[b];
	}
	o.items.push_back({{"D", D.str()},
	                   {"gamma", gamma.seed.str()},
	                   {"count", cosines.size()},
	                   {"classes_skipped", skipped},
	                   {"ks_distance", cosines.empty() ? 1.0 : ks_uniform(cosines)},
	                   {"bins", bins}});
	o.csv = csv.str();
	return o;
}

std::string timestamp() {
	std::time_t t = std::time(nullptr);
	char buf[32];
	std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
	return buf;
}

json config_json(const ExperimentConfig& cfg) {
	json j{{"command", command_name(cfg.command)},
	       {"k", cfg.ks},
	       {"height", cfg.policy.height},
	       {"series_tol", cfg.policy.tol},
	       {"max_doublings", cfg.policy.max_doublings},
	       {"cycle_tol", cfg.policy.cycle_tol},
	       {"quad_tol", cfg.policy.quad_tol},
	       {"jobs", cfg.jobs}};
	json gd = json::array(), ds = json::array(), dcs = json::array(), sm = json::array();
	for (const Int& D : cfg.gamma_discs) gd.push_back(D.str());
	for (const Int& D : cfg.discs) ds.push_back(D.str());
	for (const auto& [d, c] : cfg.dcs) dcs.push_back(d.str() + "/" + c.str());
	for (const GroupElement& g : cfg.sigma_matrices) sm.push_back(g.str());
	j["gamma_disc"] = gd;
	j["disc"] = ds;
	j["dc"] = dcs;
	j["sigma_matrix"] = sm;
	j["sigma_trace"] = cfg.sigma_traces;
	j["gamma_matrix"] = cfg.gamma_matrix ? json(cfg.gamma_matrix->str()) : json(nullptr);
	j["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
	return j;
}

}  // namespace

double default_tolerance(Command c) {
	switch (c) {
	case Command::katok: return 1e-5;
	case Command::thm1:
	case Command::thm2:
	case Command::periods: return 1e-4;
	default: return 1e-4;
	}
}

Command parse_command(const std::string& s) {
	static const std::map<std::string, Command> m{{"thm1", Command::thm1},     {"thm2", Command::thm2},
	                                               {"katok", Command::katok},   {"periods", Command::periods},
	                                               {"coeffs", Command::coeffs}, {"histogram", Command::histogram}};
	auto it = m.find(s);
	if (it == m.end()) throw UsageError("unknown command '" + s + "'");
	return it->second;
}

std::string command_name(Command c) {
	switch (c) {
	case Command::thm1: return "thm1";
	case Command::thm2: return "thm2";
	case Command::katok: return "katok";
	case Command::periods: return "periods";
	case Command::coeffs: return "coeffs";
	case Command::histogram: return "histogram";
	}
	return "?";
}

std::pair<Int, Int> parse_dc(const std::string& s) {
	auto slash = s.find('/');
	if (slash == std::string::npos) throw UsageError("expected d/c, got '" + s + "'");
	Int d = parse_int(trim(s.substr(0, slash))), c = parse_int(trim(s.substr(slash + 1)));
	if (c <= 0) throw UsageError("d/c needs c > 0: '" + s + "'");
	if (gcd(abs(d), c) != 1) throw UsageError("d/c needs gcd(d, c) = 1: '" + s + "'");
	return {d, c};
}

GroupElement parse_matrix(const std::string& s) {
	std::vector<Int> v;
	std::stringstream ss(s);
	std::string part;
	while (std::getline(ss, part, ',')) v.push_back(parse_int(trim(part)));
	if (v.size() != 4) throw UsageError("expected a,b,c,d, got '" + s + "'");
	if (v[0] * v[3] - v[1] * v[2] != 1) throw UsageError("matrix must have determinant 1: '" + s + "'");
	GroupElement g{v[0], v[1], v[2], v[3]};
	if (!g.is_hyperbolic()) throw UsageError("matrix must be hyperbolic: '" + s + "'");
	return g;
}

void validate(const ExperimentConfig& cfg) {
	if (cfg.ks.empty()) throw UsageError("--k is required");
	for (int k : cfg.ks) {
		if (k < 2) throw UsageError("k must be at least 2");
		if (cfg.command == Command::thm2 && k % 2 == 0) throw UsageError("thm2 needs odd k");
	}
	if (cfg.tol && !(*cfg.tol > 0)) throw UsageError("--tol must be positive");
	if (!(cfg.policy.tol > 0) || !(cfg.policy.cycle_tol > 0) || !(cfg.policy.quad_tol > 0))
		throw UsageError("tolerances must be positive");
	if (cfg.policy.height < 1) throw UsageError("--height must be at least 1");
	if (cfg.policy.max_doublings < 0) throw UsageError("--max-doublings must be non-negative");
	if (cfg.jobs < 1) throw UsageError("--jobs must be at least 1");
	auto check_disc = [](const Int& D) {
		Int m = D % 4;
		if (D <= 0 || (m != 0 && m != 1) || is_square(D)) throw UsageError("not a positive non-square discriminant: " + D.str());
	};
	for (const Int& D : cfg.gamma_discs) check_disc(D);
	for (const Int& D : cfg.discs) check_disc(D);
	for (const auto& [d, c] : cfg.dcs)
		if (c <= 0 || gcd(abs(d), c) != 1) throw UsageError("d/c needs gcd(d, c) = 1 and c > 0");
	for (long t : cfg.sigma_traces)
		if (t < 3) throw UsageError("--sigma-trace must be at least 3");
	const bool has_gamma = cfg.gamma_matrix || !cfg.gamma_discs.empty();
	switch (cfg.command) {
	case Command::thm1:
	case Command::katok:
		if (!has_gamma && cfg.discs.empty()) throw UsageError("need --gamma-disc or --gamma-matrix");
		if (cfg.sigma_matrices.empty() && cfg.sigma_traces.empty()) throw UsageError("need --sigma-matrix or --sigma-trace");
		break;
	case Command::thm2:
		if (!has_gamma && cfg.discs.empty()) throw UsageError("need --disc, --gamma-disc or --gamma-matrix");
		if (cfg.dcs.empty()) throw UsageError("need --dc");
		break;
	case Command::periods:
		if (cfg.gamma_discs.empty() && cfg.discs.empty()) throw UsageError("need --disc or --gamma-disc");
		break;
	case Command::coeffs:
		if (!has_gamma && cfg.discs.empty()) throw UsageError("need --gamma-disc or --gamma-matrix");
		if (cfg.n_max < 1) throw UsageError("--n-max must be positive");
		if (cfg.y < 0.8) throw UsageError("--y must be at least 0.8");
		break;
	case Command::histogram:
		if (!has_gamma) throw UsageError("need --gamma-disc or --gamma-matrix");
		if (cfg.discs.empty()) throw UsageError("need --disc");
		if (cfg.bins < 1) throw UsageError("--bins must be positive");
		break;
	}
}

double ks_uniform(std::vector<double> xs) {
	if (xs.empty()) return 1.0;
	std::sort(xs.begin(), xs.end());
	const double n = double(xs.size());
	double d = 0;
	for (std::size_t i = 0; i < xs.size(); ++i) {
		double F = std::clamp((xs[i] + 1) / 2, 0.0, 1.0);
		d = std::max({d, (i + 1) / n - F, F - i / n});
	}
	return d;
}

RunResult run_verification(const ExperimentConfig& cfg) {
	validate(cfg);
	const double tol = cfg.tol.value_or(default_tolerance(cfg.command));
	std::vector<std::function<Outcome()>> tasks;
	std::vector<json> labels;
	const std::vector<int>& ks = cfg.ks;
	switch (cfg.command) {
	case Command::thm1:
	case Command::katok: {
		std::vector<GroupElement> sig = sigmas(cfg);
		for (int k : ks)
			for (const FormClass& cls : gamma_classes(cfg, true)) {
				tasks.push_back([&cfg, k, cls, sig, tol] { return run_cycle_group(cfg, k, cls, sig, tol); });
				labels.push_back({{"k", k}, {"gamma", cls.seed.str()}});
			}
		break;
	}
	case Command::thm2:
		for (int k : ks)
			for (const FormClass& cls : gamma_classes(cfg, true)) {
				tasks.push_back([&cfg, k, cls, tol] { return run_thm2(cfg, k, cls, tol); });
				labels.push_back({{"k", k}, {"gamma", cls.seed.str()}});
			}
		break;
	case Command::periods: {
		std::vector<Int> ds = cfg.gamma_discs;
		ds.insert(ds.end(), cfg.discs.begin(), cfg.discs.end());
		for (int k : ks)
			for (const Int& D : ds) {
				tasks.push_back([&cfg, k, D, tol] { return run_periods(cfg, k, D, tol); });
				labels.push_back({{"k", k}, {"D", D.str()}});
			}
		break;
	}
	case Command::coeffs:
		for (int k : ks)
			for (const FormClass& cls : gamma_classes(cfg, true)) {
				tasks.push_back([&cfg, k, cls] { return run_coeffs(cfg, k, cls); });
				labels.push_back({{"k", k}, {"gamma", cls.seed.str()}});
			}
		break;
	case Command::histogram: {
		std::vector<FormClass> gs = gamma_classes(cfg, false);
		for (const Int& D : cfg.discs) {
			tasks.push_back([&cfg, g = gs.front(), D] { return run_histogram(cfg, g, D); });
			labels.push_back({{"D", D.str()}});
		}
		break;
	}
	}

	std::vector<Outcome> results(tasks.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < tasks.size(); i = next++) {
			auto t0 = std::chrono::steady_clock::now();
			try {
				results[i] = tasks[i]();
			} catch (const std::exception& e) {
				results[i].status = Status::error;
				json item = labels[i];
				item["error"] = e.what();
				results[i].items.push_back(item);
				spdlog::error("{}: {}", labels[i].dump(), e.what());
			}
			double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
			spdlog::info("{} finished in {:.0f} ms", labels[i].dump(), ms);
		}
	};
	std::vector<std::thread> pool;
	const int n_threads = std::max(1, std::min<int>(cfg.jobs, int(tasks.size())));
	for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
	worker();
	for (auto& t : pool) t.join();

	RunResult rr;
	json items = json::array();
	Status worst = Status::pass;
	for (const Outcome& o : results) {
		for (const json& it : o.items) items.push_back(it);
		rr.csv += o.csv;
		worst = std::max(worst, o.status);
	}
	rr.exit_code = int(worst);
	rr.report = {{"generated_at", timestamp()},
	             {"config", config_json(cfg)},
	             {"tolerance", tol},
	             {"instances", items},
	             {"status", worst == Status::pass ? "pass" : (worst == Status::fail ? "residual_exceeded" : "failure")}};
	return rr;
}

}  // namespace modgeo
