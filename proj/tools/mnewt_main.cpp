// Command-line front end: single solves, extreme eigenvalues of a matrix
// file, benchmark sweeps over the shipped problem suite, and derivative
// checks. Exit codes: 0 converged/success, 1 usage or input error,
// 2 non-converged or failed check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mnewt/mnewt.hpp"
#include "mnewt/report.hpp"

namespace {

using namespace mnewt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

NormRule parse_norm(const std::string& s) {
    return s == "inf" ? NormRule::Inf : NormRule::Euclid;
}

Vec parse_csv_vector(const std::string& s) {
    Vec v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        try {
            v.push_back(std::stod(item, &pos));
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != item.size()) throw std::invalid_argument("bad number in --x0: '" + item + "'");
    }
    return v;
}

Vec eig_start(const std::string& name, std::size_t n) {
    if (name == "alt") {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? -1.0 : 1.0;
        return normalized(v);
    }
    if (name == "e1") {
        Vec v(n, 0.0);
        v[0] = 1.0;
        return v;
    }
    std::ifstream in(name);
    if (!in) throw std::runtime_error("cannot open start vector file '" + name + "'");
    Vec v(n);
    for (double& x : v)
        if (!(in >> x)) throw std::runtime_error("start vector file needs " + std::to_string(n) + " entries");
    return normalized(v);
}

void print_solve_human(const Problem& p, const SolveReport& rep) {
    std::printf("problem: %s (n = %zu)\n", p.name.c_str(), p.dim);
    std::printf("status: %s  iterations: %zu  f: %.9g  grad_norm: %.3e\n",
                to_string(rep.status), rep.iterations, rep.f_final, rep.grad_norm_final);
    std::printf("%5s %14s %12s %12s %10s %10s %8s\n", "k", "f", "grad_norm", "gamma", "alpha",
                "cos_theta", "fallback");
    for (const auto& r : rep.trace)
        std::printf("%5zu %14.6e %12.4e %12.4e %10.4g %10.6f %8s\n", r.k, r.f, r.grad_norm,
                    r.gamma, r.alpha, r.cos_theta, r.fallback_used ? "yes" : "no");
    std::printf("x_final:");
    for (double x : rep.x_final) std::printf(" %.10g", x);
    std::printf("\n");
}

void print_eig_human(const char* label, const EigEstimate& e) {
    std::printf("%s: value = %.12g  iterations = %zu  converged = %s  method = %s\n", label,
                e.value, e.iterations, e.converged ? "yes" : "no", to_string(e.method));
}

struct EigCli {
    std::string file;
    std::string which = "both";
    std::string x0 = "alt";
    double tol = 1e-9;
    std::size_t max_iter = 0;  // 0 = 10n
    bool json = false;
};

int run_eig(const EigCli& cli) {
    SymMatrix h = load_matrix_file(cli.file);
    const std::size_t n = h.size();
    const std::size_t cap = cli.max_iter ? cli.max_iter : 10 * n;
    const Vec x0 = eig_start(cli.x0, n);

    auto single = [&](Extreme which) {
        EigEstimate e = cg_extreme_eig(h, x0, {which, cli.tol, cap});
        if (!e.converged) {
            const EigDecomp eg = jacobi_eigs(h);
            const bool lo = which == Extreme::Min;
            e = {lo ? eg.values.front() : eg.values.back(),
                 lo ? eg.vectors.front() : eg.vectors.back(),
                 static_cast<std::size_t>(eg.sweeps), true, EigMethod::JacobiFallback};
        }
        return e;
    };

    json config{{"file", cli.file}, {"which", cli.which}, {"x0", cli.x0},
                {"tol", cli.tol},   {"max_iter", cap}};
    json result;
    if (cli.which == "both") {
        ExtremePair pair = extreme_pair(h, cli.tol, cap, &x0, &x0);
        result = json{{"lo", to_json(pair.lo)}, {"hi", to_json(pair.hi)}};
        if (!cli.json) {
            print_eig_human("min", pair.lo);
            print_eig_human("max", pair.hi);
        }
    } else {
        EigEstimate e = single(cli.which == "min" ? Extreme::Min : Extreme::Max);
        result = to_json(e);
        if (!cli.json) print_eig_human(cli.which.c_str(), e);
    }
    if (cli.json) std::cout << make_report("eig", config, result).dump(2) << "\n";
    return kExitOk;
}

struct SolveCli {
    std::string problem;
    std::string x0;
    SolverConfig cfg;
    std::string norm = "euclid";
    bool json = false;
};

std::optional<Problem> resolve_problem(const std::string& name) {
    if (auto p = find_problem(name)) return p;
    if (std::filesystem::exists(name)) {
        SymMatrix a = load_matrix_file(name);
        Problem p = quadratic(a, Vec(a.size(), 0.0));
        p.name = std::filesystem::path(name).stem().string();
        p.x0_default = Vec(a.size(), 1.0);
        return p;
    }
    return std::nullopt;
}

int run_solve(SolveCli& cli) {
    auto prob = resolve_problem(cli.problem);
    if (!prob) {
        std::cerr << "unknown problem '" << cli.problem << "'\n";
        return kExitUsage;
    }
    cli.cfg.norm_rule = parse_norm(cli.norm);
    Vec x0 = prob->x0_default;
    if (!cli.x0.empty()) {
        x0 = parse_csv_vector(cli.x0);
        if (x0.size() != prob->dim) {
            std::cerr << "--x0 needs " << prob->dim << " entries\n";
            return kExitUsage;
        }
    }
    const SolveReport rep = minimize(*prob, x0, cli.cfg);
    if (cli.json) {
        json config = config_echo(cli.cfg);
        config["problem"] = prob->name;
        config["x0"] = x0;
        std::cout << make_report("solve", config, to_json(rep)).dump(2) << "\n";
    } else {
        print_solve_human(*prob, rep);
    }
    return rep.status == SolveStatus::Converged ? kExitOk : kExitNotConverged;
}

struct BenchCli {
    std::string suite = "standard";
    SolverConfig cfg;
    std::string norm = "euclid";
    bool json = false;
    bool csv = false;
};

int run_bench(BenchCli& cli) {
    if (cli.suite != "standard") {
        std::cerr << "unknown suite '" << cli.suite << "'\n";
        return kExitUsage;
    }
    cli.cfg.norm_rule = parse_norm(cli.norm);
    std::vector<Problem> suite = standard_set();

    json rows = json::array();
    bool all_converged = true;
    for (const Problem& p : suite) {
        const SolveReport rep = minimize(p, p.x0_default, cli.cfg);
        all_converged = all_converged && rep.status == SolveStatus::Converged;
        rows.push_back(json{{"name", p.name},
                            {"iter", rep.iterations},
                            {"obj", rep.f_final},
                            {"grad_norm", rep.grad_norm_final},
                            {"status", to_string(rep.status)}});
    }

    if (cli.json) {
        json config = config_echo(cli.cfg);
        config["suite"] = cli.suite;
        std::cout << make_report("bench", config, json{{"rows", rows}}).dump(2) << "\n";
    } else if (cli.csv) {
        std::cout << "name,iter,obj,grad_norm,status\n";
        for (const auto& r : rows)
            std::printf("%s,%zu,%.12e,%.12e,%s\n", r["name"].get<std::string>().c_str(),
                        r["iter"].get<std::size_t>(), r["obj"].get<double>(),
                        r["grad_norm"].get<double>(), r["status"].get<std::string>().c_str());
    } else {
        std::printf("%-12s %8s %16s %14s %s\n", "name", "iter", "obj", "grad_norm", "status");
        for (const auto& r : rows)
            std::printf("%-12s %8zu %16.6e %14.4e %s\n", r["name"].get<std::string>().c_str(),
                        r["iter"].get<std::size_t>(), r["obj"].get<double>(),
                        r["grad_norm"].get<double>(), r["status"].get<std::string>().c_str());
    }
    return all_converged ? kExitOk : kExitNotConverged;
}

int run_check(const std::string& name, bool as_json) {
    auto prob = find_problem(name);
    if (!prob) {
        std::cerr << "unknown problem '" << name << "'\n";
        return kExitUsage;
    }
    std::vector<Vec> points;
    points.push_back(prob->x0_default);
    for (auto& x : check_points(*prob)) points.push_back(x);

    bool all_ok = true;
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const DerivativeReport rep = check_derivatives(*prob, points[i]);
        all_ok = all_ok && rep.ok();
        rows.push_back(json{{"point", i},
                            {"grad_rel_err", rep.grad_rel_err},
                            {"hess_rel_err", rep.hess_rel_err},
                            {"pass", rep.ok()}});
        if (!as_json)
            std::printf("point %zu: grad_rel_err = %.3e  hess_rel_err = %.3e  %s\n", i,
                        rep.grad_rel_err, rep.hess_rel_err, rep.ok() ? "pass" : "FAIL");
    }
    if (as_json) {
        std::cout << make_report("check", json{{"problem", name}},
                                 json{{"rows", rows}, {"pass", all_ok}})
                         .dump(2)
                  << "\n";
    } else {
        std::printf("%s: %s\n", name.c_str(), all_ok ? "pass" : "FAIL");
    }
    return all_ok ? kExitOk : kExitNotConverged;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg, std::string& norm) {
    cmd->add_option("--eps", cfg.eps, "gradient tolerance");
    cmd->add_option("--delta", cfg.gamma_params.delta, "eigenvalue floor for the blended matrix");
    cmd->add_option("--Delta", cfg.gamma_params.cap, "condition number cap for the blended matrix");
    cmd->add_option("--max-iter", cfg.max_iter, "outer iteration limit");
    cmd->add_option("--eig-tol", cfg.eig_tol, "sphere-CG residual tolerance");
    cmd->add_option("--norm", norm, "gradient norm for termination")
        ->check(CLI::IsMember({"euclid", "inf"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modified Newton unconstrained minimizer"};
    app.require_subcommand(1);

    SolveCli solve;
    CLI::App* cmd_solve = app.add_subcommand("solve", "minimize a named problem");
    cmd_solve->add_option("problem", solve.problem, "problem name or matrix file")->required();
    cmd_solve->add_option("--x0", solve.x0, "start point as comma-separated values");
    cmd_solve->add_flag("--json", solve.json, "machine-readable report");
    add_solver_flags(cmd_solve, solve.cfg, solve.norm);

    EigCli eig;
    CLI::App* cmd_eig = app.add_subcommand("eig", "extreme eigenvalues of a symmetric matrix");
    cmd_eig->add_option("matrix", eig.file, "matrix file")->required();
    cmd_eig->add_option("--which", eig.which, "which extreme")
        ->check(CLI::IsMember({"min", "max", "both"}));
    cmd_eig->add_option("--x0", eig.x0, "start vector: alt, e1, or a file");
    cmd_eig->add_option("--tol", eig.tol, "residual tolerance");
    cmd_eig->add_option("--max-iter", eig.max_iter, "iteration cap before dense fallback");
    cmd_eig->add_flag("--json", eig.json, "machine-readable report");

    BenchCli bench;
    CLI::App* cmd_bench = app.add_subcommand("bench", "run the benchmark suite");
    cmd_bench->add_option("--suite", bench.suite, "suite name");
    cmd_bench->add_flag("--json", bench.json, "machine-readable report");
    cmd_bench->add_flag("--csv", bench.csv, "CSV table");
    add_solver_flags(cmd_bench, bench.cfg, bench.norm);

    std::string check_problem;
    bool check_json = false;
    CLI::App* cmd_check = app.add_subcommand("check", "finite-difference derivative check");
    cmd_check->add_option("problem", check_problem, "problem name")->required();
    cmd_check->add_flag("--json", check_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_solve->parsed()) return run_solve(solve);
        if (cmd_eig->parsed()) return run_eig(eig);
        if (cmd_bench->parsed()) return run_bench(bench);
        if (cmd_check->parsed()) return run_check(check_problem, check_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
