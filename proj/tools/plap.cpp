// plap: command-line front end for the discrete p(x)-Laplacian solver.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "plap/io.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kSolve = 3, kCertificate = 4 };

void emit(const plap::Json& j) { std::cout << j.dump(2) << '\n'; }

int exit_for(const plap::Error& e) {
    switch (e.code()) {
    case plap::ErrorCode::ParseError:
    case plap::ErrorCode::SchemaError:
    case plap::ErrorCode::InvariantError:
    case plap::ErrorCode::DuplicateVertex:
    case plap::ErrorCode::UnknownEndpoint:
    case plap::ErrorCode::NonPositiveWeight:
    case plap::ErrorCode::SelfLoop:
    case plap::ErrorCode::OverlappingSets:
    case plap::ErrorCode::EmptySet:
    case plap::ErrorCode::Disconnected:
    case plap::ErrorCode::DuplicateEdge:
    case plap::ErrorCode::UnknownVertex:
        return kParse;
    case plap::ErrorCode::Usage:
    case plap::ErrorCode::GammaTooSmall:
        return kUsage;
    default:
        return kSolve;
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

unsigned thread_budget() {
    if (const char* env = std::getenv("PLAP_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_sweep(const plap::ProblemFile& file, double lo, double hi, int steps, const plap::SolverOptions& opts) {
    if (steps < 1 || !(lo > 0) || !(hi >= lo)) throw plap::Error(plap::ErrorCode::Usage, "need 0 < lambda-min <= lambda-max and steps >= 1");
    std::vector<std::string> rows(static_cast<std::size_t>(steps));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < steps; i = next++) {
            const double lambda = steps == 1 ? lo : lo + (hi - lo) * double(i) / double(steps - 1);
            plap::ProblemSpec spec = file.spec;
            spec.lambda = i == steps - 1 ? hi : lambda;
            std::ostringstream row;
            row << g17(spec.lambda) << ',';
            try {
                const auto rep = plap::solve(spec, opts, file.gamma);
                double min_res = std::numeric_limits<double>::infinity();
                std::string norms;
                for (const auto& s : rep.solutions) {
                    min_res = std::min(min_res, s.gradient_inf);
                    if (!norms.empty()) norms += ';';
                    norms += g17(s.norm);
                }
                row << rep.solutions.size() << ',' << (rep.solutions.empty() ? "" : g17(min_res)) << ',' << norms;
            } catch (const plap::Error&) {
                row << "0,,";
            }
            rows[static_cast<std::size_t>(i)] = row.str();
        }
    };
    const unsigned n = std::min<unsigned>(thread_budget(), static_cast<unsigned>(steps));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::cout << "lambda,solutions,min_residual,norms\n";
    for (const auto& r : rows) std::cout << r << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet problems for the discrete p(x)-Laplacian on weighted graphs"};
    app.require_subcommand(1);

    std::string file;
    std::optional<double> gamma;
    std::uint64_t seed = 0;
    double tol = 1e-9;

    auto* validate = app.add_subcommand("validate", "Check a problem file and report instance constants");
    validate->add_option("file", file, "Problem file")->required();

    auto* bounds = app.add_subcommand("bounds", "Thresholds, inequality constants and regime");
    bounds->add_option("file", file, "Problem file")->required();
    bounds->add_option("--gamma", gamma, "Annulus radius for lambda3");

    auto* solve = app.add_subcommand("solve", "Find positive critical points");
    solve->add_option("file", file, "Problem file")->required();
    solve->add_option("--seed", seed, "Random seed");
    solve->add_option("--tol", tol, "Gradient tolerance (infinity norm)");
    solve->add_option("--gamma", gamma, "Annulus radius for the two-solution construction");

    double lmin = 0, lmax = 0;
    int steps = 0;
    auto* sweep = app.add_subcommand("sweep", "Count solutions over a lambda grid (CSV)");
    sweep->add_option("file", file, "Problem file")->required();
    sweep->add_option("--lambda-min", lmin, "First lambda")->required();
    sweep->add_option("--lambda-max", lmax, "Last lambda")->required();
    sweep->add_option("--steps", steps, "Grid points, endpoints included")->required();
    sweep->add_option("--seed", seed, "Random seed");
    sweep->add_option("--tol", tol, "Gradient tolerance (infinity norm)");

    std::string solution;
    double cert_tol = 1e-8;
    auto* certify = app.add_subcommand("certify", "Check residual and positivity of a given function");
    certify->add_option("file", file, "Problem file")->required();
    certify->add_option("--solution", solution, "JSON with {\"values\": {...}} or a solve report")->required();
    certify->add_option("--tol", cert_tol, "Residual tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        const auto pf = plap::parse_problem(file);
        plap::SolverOptions opts;
        opts.rng_seed = seed;
        opts.grad_tol = tol;
        if (*validate) {
            auto j = plap::validate_report(pf);
            emit(j);
            return j["valid"].get<bool>() ? kOk : kParse;
        }
        if (*bounds) {
            emit(plap::bounds_report(pf, gamma));
            return kOk;
        }
        if (*solve) {
            const auto g = gamma ? gamma : pf.gamma;
            const auto rep = plap::solve(pf.spec, opts, g);
            emit(plap::solve_report(pf, rep, opts));
            return rep.solutions.empty() ? kSolve : kOk;
        }
        if (*sweep) return run_sweep(pf, lmin, lmax, steps, opts);
        if (*certify) {
            std::ifstream in(solution);
            if (!in) throw plap::Error(plap::ErrorCode::ParseError, "cannot open " + solution);
            plap::Json sj;
            try {
                sj = plap::Json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw plap::Error(plap::ErrorCode::ParseError, solution + ": " + e.what());
            }
            auto cert = plap::certify(pf.spec, sj, cert_tol);
            emit(cert.report);
            return cert.ok ? kOk : kCertificate;
        }
    } catch (const plap::Error& e) {
        std::cerr << "plap: " << e.what() << '\n';
        return exit_for(e);
    } catch (const std::exception& e) {
        std::cerr << "plap: " << e.what() << '\n';
        return kSolve;
    }
    return kUsage;
}
