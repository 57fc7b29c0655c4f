// mlea_cli.cpp: Command-line harness: deterministic experiment runs, CSV
// emission, inequality suites, the lower-bound harness, closed-form bound
// tables, and the library self-check.
//
// Exit codes: 0 success, 1 usage/config error, 2 assertion failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlea/adversaries.hpp"
#include "mlea/bench.hpp"
#include "mlea/io.hpp"
#include "mlea/jensen.hpp"
#include "mlea/potentials.hpp"
#include "mlea/verify.hpp"

namespace {

using namespace mlea;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool csv = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_flag("--csv", opts.csv, "write CSV outputs under --out");
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig c = config_from_json(json_from_file(opts.config_path));
    if (opts.seed_set) c.seed = opts.seed;
    return c;
}

void emit_run(const CommonOpts& opts, const RunResult& rr, const std::string& stem) {
    std::cout << rr.summary_json().dump(2) << "\n";
    if (opts.csv) {
        std::filesystem::create_directories(opts.out_dir);
        const std::string path = opts.out_dir + "/" + stem + ".csv";
        write_file(path, trace_to_csv(rr.trace));
        // per-round operator norms of the emitted losses
        std::string norms = "t,loss_op_norm\n";
        for (size_t t = 0; t < rr.g_norms.size(); ++t)
            norms += std::to_string(t + 1) + "," + format_g17(rr.g_norms[t]) + "\n";
        write_file(opts.out_dir + "/loss_norms.csv", norms);
        std::cout << "trace: " << path << "\n";
    }
}

// Optional JSON config for the non-run subcommands; flat key -> value with
// strict unknown-key rejection.
nlohmann::json flat_config(const std::string& path, std::initializer_list<const char*> allowed) {
    nlohmann::json j = json_from_file(path);
    if (!j.is_object()) throw config_error(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw config_error("config." + key + ": unknown key");
    }
    return j;
}

SpectralFunction phi_by_name(const std::string& name, long t, double eps, int d) {
    if (name == "abs") return SpectralFunction::abs();
    if (name == "affine") return SpectralFunction::affine(1.0, 0.5);
    if (name == "x2") return SpectralFunction::monomial(2);
    if (name == "x4") return SpectralFunction::monomial(4);
    if (name == "exp") return SpectralFunction::exp(0.5);
    if (name == "exp-") return SpectralFunction::exp(-0.5);
    if (name == "expsq") return SpectralFunction::exp_square(t, eps, d);
    if (name == "erfi") return SpectralFunction::erfi(t, eps, d);
    throw config_error("unknown --phi " + name);
}

// families for which a confirmed violation is an assertion failure
bool phi_must_hold(const std::string& name) { return name != "abs"; }

int cmd_ineq_check(const std::string& phi_name, const std::string& preset, int d, int trials,
                   long t, double eps, std::uint64_t seed, int search_kmax, int search_trials) {
    if (preset == "appendix-a") {
        std::vector<cplx> se = {0.0, 1.0, 1.0, 0.0};
        HermitianMatrix S = HermitianMatrix::from_entries(2, se);
        HermitianMatrix G = HermitianMatrix::diagonal(std::vector<double>{1.0, -1.0});
        SpectralFunction phi = SpectralFunction::abs();
        const double gap = jensen_gap(phi, S, G, 1.0);
        const EigenDecomposition esum = eig_hermitian(S + G);
        double lhs = 0.0;
        for (double lam : esum.values) lhs += phi(lam);
        const double rhs = lhs + gap;
        std::printf("phi=abs preset=appendix-a\n");
        std::printf("lhs=%.17g\nrhs=%.17g\ngap=%.17g\nverdict=%s\n", lhs, rhs, gap,
                    gap < 0.0 ? "VIOLATED" : "HOLDS");
        return 0;
    }
    if (!preset.empty()) throw config_error("unknown --preset " + preset);

    if (search_kmax > 0) {
        MonomialSearchReport rep = monomial_conjecture_search(search_kmax, search_trials, d, seed);
        for (const auto& row : rep.rows)
            std::printf("k=%d trials=%d min_gap=%.6g flagged=%d\n", row.k, row.trials,
                        row.min_normalized_gap, row.flagged);
        return rep.total_flagged() == 0 ? 0 : 2;
    }

    JensenSuiteResult res = random_jensen_suite(phi_by_name(phi_name, t, eps, d), d, trials, seed);
    std::printf("phi=%s d=%d trials=%d min_gap=%.6g violations=%d\n", res.phi_name.c_str(), d,
                res.trials, res.min_normalized_gap, res.confirmed_violations);
    if (res.confirmed_violations > 0) {
        std::printf("argmin instance:\n%s\n",
                    nlohmann::json{{"S", to_json(res.argmin.S)},
                                   {"G", to_json(res.argmin.G)},
                                   {"eps", res.argmin.eps},
                                   {"gap", res.argmin.gap}}
                        .dump(2)
                        .c_str());
    }
    if (phi_must_hold(phi_name) && res.confirmed_violations > 0) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix online-learning toolkit"};
    app.require_subcommand(1);

    CommonOpts lea_opts, quantum_opts;

    auto* lea = app.add_subcommand("lea-run", "single matrix LEA run");
    add_common(lea, lea_opts, true);

    auto* quantum = app.add_subcommand("quantum-run", "quantum state-learning scenario(s)");
    add_common(quantum, quantum_opts, true);
    bool dump_truth = false;
    quantum->add_flag("--dump-truth", dump_truth, "write the target state as JSON under --out");

    auto* ineq = app.add_subcommand("ineq-check", "one-sided Jensen inequality suites");
    std::string phi_name = "abs", preset;
    std::string ineq_config, ineq_out = ".";
    bool ineq_csv = false;
    int ineq_d = 6, ineq_trials = 10000, search_kmax = 0, search_trials = 0;
    long ineq_t = 1;
    double ineq_eps = 1.0;
    std::uint64_t ineq_seed = 1;
    ineq->add_option("--config", ineq_config, "flags as a JSON object");
    ineq->add_option("--out", ineq_out, "output directory");
    ineq->add_flag("--csv", ineq_csv, "write the suite summary CSV under --out");
    ineq->add_option("--phi", phi_name, "abs|affine|x2|x4|exp|exp-|expsq|erfi");
    ineq->add_option("--preset", preset, "appendix-a");
    ineq->add_option("--d", ineq_d, "matrix dimension (<= 16)");
    ineq->add_option("--trials", ineq_trials, "random trials");
    ineq->add_option("--t", ineq_t, "potential time index");
    ineq->add_option("--eps", ineq_eps, "norm budget for G");
    ineq->add_option("--seed", ineq_seed, "rng seed");
    ineq->add_option("--monomial-kmax", search_kmax, "run the even-monomial search up to k");
    ineq->add_option("--monomial-trials", search_trials, "trials per k for the search");

    auto* lower = app.add_subcommand("lower-bound", "regret lower-bound harness");
    std::string lb_config, lb_out = ".";
    bool lb_csv = false;
    int lb_d = 64, lb_seeds = 50, lb_k = 2, lb_trials = 0;
    long lb_T = 8192, lb_n = 0;
    double lb_l = 1.0;
    std::vector<double> lb_r = {1.0, 2.0, 4.0};
    std::uint64_t lb_seed = 2024;
    lower->add_option("--config", lb_config, "flags as a JSON object");
    lower->add_option("--out", lb_out, "output directory");
    lower->add_flag("--csv", lb_csv, "write the harness CSV under --out");
    lower->add_option("--d", lb_d, "dimension");
    lower->add_option("--T", lb_T, "horizon");
    lower->add_option("--r", lb_r, "entropy budgets");
    lower->add_option("--seeds", lb_seeds, "number of seeds");
    lower->add_option("--l", lb_l, "loss scale");
    lower->add_option("--seed", lb_seed, "root seed");
    lower->add_option("--anticoncentration-trials", lb_trials,
                      "run the anti-concentration check with this many trials");
    lower->add_option("--k", lb_k, "top-k for the anti-concentration check");
    lower->add_option("--n", lb_n, "per-coordinate sum length (0 = minimum legal)");

    auto* bound = app.add_subcommand("bound-table", "closed-form regret bound tables");
    std::vector<long> bt_T = {256, 1024, 4096};
    std::vector<int> bt_d = {16, 64};
    std::vector<double> bt_s = {0.0, 0.5, 1.0, 2.0};
    double bt_l = 1.0;
    std::string bt_config, bt_out = ".";
    bool bt_csv = false;
    std::uint64_t bt_seed = 0;
    bound->add_option("--config", bt_config, "flags as a JSON object");
    bound->add_option("--T", bt_T, "horizons");
    bound->add_option("--d", bt_d, "dimensions");
    bound->add_option("--s-rel", bt_s, "comparator relative entropies");
    bound->add_option("--l", bt_l, "loss scale");
    bound->add_option("--seed", bt_seed, "accepted for interface parity; closed forms need none");
    bound->add_option("--out", bt_out, "output directory");
    bound->add_flag("--csv", bt_csv, "write bounds.csv under --out instead of stdout");

    auto* verify = app.add_subcommand("verify", "full invariant self-check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (lea->parsed()) {
            ExperimentConfig c = load_config(lea_opts);
            if (!c.adversary) throw config_error("lea-run expects an adversary-mode config");
            emit_run(lea_opts, run(c), "trace");
            return 0;
        }
        if (quantum->parsed()) {
            nlohmann::json j = json_from_file(quantum_opts.config_path);
            if (j.contains("scenarios")) {
                for (const auto& [key, value] : j.items()) {
                    (void)value;
                    if (key != "scenarios")
                        throw config_error("config." + key + ": unknown key");
                }
                std::vector<ExperimentConfig> configs;
                for (const auto& cj : j.at("scenarios")) {
                    ExperimentConfig c = config_from_json(cj);
                    if (quantum_opts.seed_set) c.seed = quantum_opts.seed;
                    configs.push_back(std::move(c));
                }
                std::vector<TableRow> rows = table(configs);
                const std::string csv = table_to_csv(rows);
                std::cout << csv;
                if (quantum_opts.csv) {
                    std::filesystem::create_directories(quantum_opts.out_dir);
                    write_file(quantum_opts.out_dir + "/table.csv", csv);
                }
                return 0;
            }
            ExperimentConfig c = config_from_json(j);
            if (quantum_opts.seed_set) c.seed = quantum_opts.seed;
            if (!c.quantum) throw config_error("quantum-run expects a quantum-mode config");
            RunResult rr = run(c);
            if (dump_truth && rr.truth_state) {
                std::filesystem::create_directories(quantum_opts.out_dir);
                write_file(quantum_opts.out_dir + "/truth.json",
                           to_json(rr.truth_state->matrix()).dump(2));
            }
            emit_run(quantum_opts, rr, "trace");
            return 0;
        }
        if (ineq->parsed()) {
            if (!ineq_config.empty()) {
                nlohmann::json j = flat_config(
                    ineq_config,
                    {"phi", "preset", "d", "trials", "t", "eps", "seed", "monomial_kmax",
                     "monomial_trials"});
                phi_name = j.value("phi", phi_name);
                preset = j.value("preset", preset);
                ineq_d = j.value("d", ineq_d);
                ineq_trials = j.value("trials", ineq_trials);
                ineq_t = j.value("t", ineq_t);
                ineq_eps = j.value("eps", ineq_eps);
                ineq_seed = j.value("seed", ineq_seed);
                search_kmax = j.value("monomial_kmax", search_kmax);
                search_trials = j.value("monomial_trials", search_trials);
            }
            if (ineq_csv && preset.empty() && search_kmax == 0) {
                JensenSuiteResult res =
                    random_jensen_suite(phi_by_name(phi_name, ineq_t, ineq_eps, ineq_d), ineq_d,
                                        ineq_trials, ineq_seed);
                std::filesystem::create_directories(ineq_out);
                write_file(ineq_out + "/ineq_summary.csv",
                           "phi,d,trials,min_gap,violations\n" + res.phi_name + "," +
                               std::to_string(ineq_d) + "," + std::to_string(res.trials) + "," +
                               format_g17(res.min_normalized_gap) + "," +
                               std::to_string(res.confirmed_violations) + "\n");
                if (res.confirmed_violations > 0)
                    write_file(ineq_out + "/ineq_argmin.json",
                               nlohmann::json{{"S", to_json(res.argmin.S)},
                                              {"G", to_json(res.argmin.G)},
                                              {"eps", res.argmin.eps},
                                              {"gap", res.argmin.gap}}
                                   .dump(2));
            }
            return cmd_ineq_check(phi_name, preset, ineq_d, ineq_trials, ineq_t, ineq_eps,
                                  ineq_seed, search_kmax, search_trials);
        }
        if (lower->parsed()) {
            if (!lb_config.empty()) {
                nlohmann::json j = flat_config(
                    lb_config, {"d", "T", "r", "seeds", "l", "seed", "anticoncentration_trials",
                                "k", "n"});
                lb_d = j.value("d", lb_d);
                lb_T = j.value("T", lb_T);
                if (j.contains("r")) lb_r = j.at("r").get<std::vector<double>>();
                lb_seeds = j.value("seeds", lb_seeds);
                lb_l = j.value("l", lb_l);
                lb_seed = j.value("seed", lb_seed);
                lb_trials = j.value("anticoncentration_trials", lb_trials);
                lb_k = j.value("k", lb_k);
                lb_n = j.value("n", lb_n);
            }
            if (lb_trials > 0) {
                const long n_min =
                    static_cast<long>(std::ceil(1.6875 * (lb_d + 1.0) * (lb_d + 1.0)));
                const long n = lb_n > 0 ? lb_n : n_min;
                AntiConcentrationResult r =
                    anticoncentration_check(lb_d, n, lb_k, lb_trials, lb_seed);
                std::printf("d=%d k=%d n=%ld trials=%d\nempirical=%.6f\nbound=%.6f\nse=%.6f\n%s\n",
                            lb_d, lb_k, n, lb_trials, r.empirical, r.bound, r.std_error,
                            r.pass ? "PASS" : "FAIL");
                return r.pass ? 0 : 2;
            }
            std::vector<LowerBoundRow> rows =
                lower_bound_harness(lb_d, lb_T, lb_r, lb_seeds, lb_l, lb_seed);
            bool ok = true;
            std::string csv = "r,k,payoff_mean,c_emp\n";
            for (const auto& row : rows) {
                csv += format_g17(row.r) + "," + std::to_string(row.k) + "," +
                       format_g17(row.payoff_mean) + "," + format_g17(row.c_emp) + "\n";
                ok = ok && row.c_emp <= 3.0;
            }
            std::fputs(csv.c_str(), stdout);
            if (lb_csv) {
                std::filesystem::create_directories(lb_out);
                write_file(lb_out + "/lower_bound.csv", csv);
            }
            return ok ? 0 : 2;
        }
        if (bound->parsed()) {
            (void)bt_seed;
            if (!bt_config.empty()) {
                nlohmann::json j = flat_config(bt_config, {"T", "d", "s_rel", "l"});
                if (j.contains("T")) bt_T = j.at("T").get<std::vector<long>>();
                if (j.contains("d")) bt_d = j.at("d").get<std::vector<int>>();
                if (j.contains("s_rel")) bt_s = j.at("s_rel").get<std::vector<double>>();
                bt_l = j.value("l", bt_l);
            }
            std::string csv = "kind,T,l,d,s_rel,bound\n";
            for (RegretBoundKind kind :
                 {RegretBoundKind::ErfiMain, RegretBoundKind::ExpSq, RegretBoundKind::MmwuMinimax,
                  RegretBoundKind::MmwuOracle}) {
                for (long T : bt_T)
                    for (int d : bt_d)
                        for (double s : bt_s) {
                            if (s > std::log(static_cast<double>(d))) continue;
                            csv += std::string(to_string(kind)) + "," + std::to_string(T) + "," +
                                   format_g17(bt_l) + "," + std::to_string(d) + "," +
                                   format_g17(s) + "," +
                                   format_g17(regret_bound(kind, T, bt_l, d, s)) + "\n";
                        }
            }
            std::cout << csv;
            if (bt_csv) {
                std::filesystem::create_directories(bt_out);
                write_file(bt_out + "/bounds.csv", csv);
            }
            return 0;
        }
        if (verify->parsed()) {
            return verify_suite(std::cout) ? 0 : 2;
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const invariant_error& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
