// kvnlab: simulator and verifier for Koopman-embedded classical dynamics
// coupled to two qubits.
//
//   kvnlab run --config cfg.txt [--out dir] [--plot] [--jobs N]
//   kvnlab verify-algebra
//   kvnlab compare-oracle --config cfg.txt
//   kvnlab list-scenarios
//
// Exit codes: 0 all PASS, 1 any FAIL, 2 usage/config error.

#include <cstdio>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "kvnlab/dense_oracle.hpp"
#include "kvnlab/observe.hpp"
#include "kvnlab/propagate.hpp"
#include "kvnlab/scenario.hpp"

namespace {

using namespace kvn;

InitialCondition ic_from_cli(const ScenarioConfig& cfg) {
    InitialCondition ic;
    ic.x0 = cfg.x0;
    ic.p0 = cfg.p0;
    ic.profile = cfg.gaussian ? Profile::Gaussian : Profile::DiscreteDelta;
    ic.sigma_x = cfg.sigma_x;
    ic.sigma_p2 = cfg.sigma_p2;
    ic.qubit1 = cfg.qubit1;
    ic.qubit2 = cfg.qubit2;
    return ic;
}

void print_verdicts(const RunReport& rep) {
    for (const auto& v : rep.verdicts) {
        std::printf("  [%s] %-42s measured=%.6g tolerance=%.6g (%s)\n",
                    v.pass ? "PASS" : "FAIL", v.name.c_str(), v.measured, v.tolerance,
                    v.detail.c_str());
    }
}

int cmd_run(const std::string& config_path, const std::string& out_override, bool plot,
            unsigned jobs) {
    ScenarioConfig cfg = parse_config_file(config_path);
    const std::string out_base = out_override.empty() ? cfg.out_dir : out_override;

    std::vector<std::string> todo;
    if (cfg.scenario == "all") {
        todo = scenario_names();
    } else {
        todo.push_back(cfg.scenario);
    }

    std::vector<RunReport> reports(todo.size());
    std::vector<std::string> errors(todo.size());

    auto work = [&](std::size_t i) {
        try {
            ScenarioConfig c = cfg;
            c.scenario = todo[i];
            apply_scenario_defaults(c, c.echo);
            reports[i] = run_scenario(c);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    if (jobs > 1 && todo.size() > 1) {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (unsigned w = 0; w < std::min<std::size_t>(jobs, todo.size()); ++w) {
            pool.emplace_back([&work, &next, &todo]() {
                while (true) {
                    std::size_t i;
                    {
                        static std::mutex m;
                        std::lock_guard<std::mutex> lock(m);
                        if (next >= todo.size()) return;
                        i = next++;
                    }
                    work(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < todo.size(); ++i) work(i);
    }

    bool all_pass = true;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        if (!errors[i].empty()) {
            std::fprintf(stderr, "error in scenario %s: %s\n", todo[i].c_str(),
                         errors[i].c_str());
            return 2;
        }
        const std::string dir =
            (todo.size() == 1) ? out_base : out_base + "/" + todo[i];
        emit_report(reports[i], dir, plot);
        std::printf("scenario %s -> %s\n", todo[i].c_str(), dir.c_str());
        print_verdicts(reports[i]);
        all_pass = all_pass && reports[i].all_pass();
    }
    return all_pass ? 0 : 1;
}

void check_line(bool ok, const std::string& label, const std::string& detail, bool* all) {
    std::printf("  [%s] %-52s %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    *all = *all && ok;
}

int cmd_verify_algebra() {
    using namespace ops;
    bool all = true;
    std::printf("symbolic identity suite\n");

    check_line(is_zero(commutator(x1(), p2())), "[x1, p2] = 0", "commuting pair", &all);
    check_line(equals(commutator(x1(), p1()), cplx(0.0, 1.0) * unit()), "[x1, p1] = i",
               "canonical pair, mode 1", &all);
    check_line(equals(commutator(x2(), p2()), cplx(0.0, 1.0) * unit()), "[x2, p2] = i",
               "canonical pair, mode 2", &all);

    const double m = 1.0;
    const OperatorExpr h_free = (1.0 / m) * (p1() * p2());
    check_line(equals(heisenberg_rhs(h_free, x1()), (1.0 / m) * p2()),
               "dx1/dt = p2/m under p1 p2/m", "Heisenberg equation", &all);

    const double k = 1.0;
    const OperatorExpr h_harm = h_free + k * (x1() * x2());
    check_line(equals(heisenberg_rhs(h_harm, p2()), -k * x1()),
               "dp2/dt = -k x1 under p1 p2/m + k x1 x2",
               "sign fixed by dA/dt = i[H,A]; Newtonian force law", &all);
    check_line(is_zero(heisenberg_rhs(h_harm, unit())), "d(identity)/dt = 0", "trivial", &all);

    const double lam = 1.0;
    const OperatorExpr zsum = (sz1() + sz2()).simplified();
    const OperatorExpr h_coupled = (h_free + lam * (x1() * zsum)).simplified();
    check_line(conserves(h_coupled, sz1()), "[H, sz1] = 0", "Koopman coupling conserves sz1",
               &all);
    check_line(conserves(h_coupled, sz2()), "[H, sz2] = 0", "and sz2", &all);
    check_line(conserves(h_coupled, p2()), "[H, p2] = 0", "and p2", &all);

    const OperatorExpr h_ent =
        ((x1() * p2() + p1() * x2()) + (x1() * sx1()) + (p2() * sz2())).simplified();
    check_line(!conserves(h_ent, sz1()), "[H_ent, sz1] != 0",
               "hidden-variable engagement breaks the law", &all);
    check_line(!conserves((h_coupled + h_ent).simplified(), (sz1() + x1()).simplified()),
               "[H_total, sz1 + x1] != 0", "back-reaction requires it", &all);

    // factorization: X = -i t p1 p2 / m, Y = -i t lam x1 (sz1+sz2)
    const double t = 0.7;
    const OperatorExpr X = cplx(0.0, -t / m) * (p1() * p2());
    const OperatorExpr Y = cplx(0.0, -t * lam) * (x1() * zsum);
    const auto zf = zassenhaus_central_factor(X, Y);
    const OperatorExpr expected_c =
        cplx(0.0, -lam * t * t / (2.0 * m)) * (p2() * zsum);
    check_line(zf.central, "[X,[X,Y]] = [Y,[X,Y]] = 0", "central commutator", &all);
    check_line(equals(zf.c, expected_c),
               "third factor exponent = -i lam t^2/(2m) p2 (sz1+sz2)",
               "quadratic in t, not linear", &all);

    // dense-image check of e^{X+Y} = e^X e^Y e^C on a tiny grid
    {
        const GridSpec g1 = make_grid(64, 20.0530646833337503);
        const GridSpec g2 = make_grid(4, 2.0 * M_PI);
        InitialCondition ic;
        ic.profile = Profile::Gaussian;
        ic.sigma_x = 1.0;
        ic.x0 = g1.position(34);
        ic.p0 = g2.dp();  // nonzero so the p2-dependent factor discriminates
        const double rr = 1.0 / std::sqrt(2.0);
        ic.qubit1 = {cplx(rr, 0.0), cplx(rr, 0.0)};
        ic.qubit2 = ic.qubit1;
        const HybridState s0 = make_state(g1, g2, ic);
        const HybridState sf = factorized_propagator(s0, m, lam, t);

        HamiltonianSpec h;
        h.terms.push_back(FreeKvN{m});
        h.terms.push_back(QubitCouplingZ{lam, true, true});
        const std::vector<GridSpec> grids{g1, g2};
        const std::vector<RepTag> reps{RepTag::Position, RepTag::Momentum};
        const Eigen::MatrixXcd u = dense_oracle_unitary(h, grids, reps, t);
        const HybridState sd = apply_dense(u, s0, reps);
        const double fid = fidelity(sf, sd);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "fidelity deficit %.3e", 1.0 - fid);
        check_line(fid >= 1.0 - 1e-8, "dense oracle confirms e^{X+Y} = e^X e^Y e^C", buf, &all);

        // linear-in-t third factor fails visibly
        Atom third{Atom::Kind::CouplingZP2, lam / m, {}, true, true};
        HybridState sw = apply_atom(s0, third, t);  // exponent ~ t instead of t^2/2
        Atom second{Atom::Kind::CouplingZX1, lam, {}, true, true};
        sw = apply_atom(sw, second, t);
        Atom first{Atom::Kind::FreePP, m, {}, true, true};
        sw = apply_atom(sw, first, t);
        const double fid_wrong = fidelity(sw, sd);
        std::snprintf(buf, sizeof(buf), "fidelity deficit %.3e", 1.0 - fid_wrong);
        check_line(fid_wrong < 1.0 - 1e-3, "linear-in-t exponent rejected", buf, &all);
    }

    // randomized algebra laws
    {
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<int> pw(0, 2), pa(0, 3), ci(-3, 3);
        auto rand_expr = [&]() {
            OperatorExpr e;
            for (int terms = 0; terms < 3; ++terms) {
                Monomial mo;
                for (int v = 0; v < 4; ++v) mo.pw[v] = static_cast<std::uint8_t>(pw(rng));
                mo.q1 = static_cast<Pauli>(pa(rng));
                mo.q2 = static_cast<Pauli>(pa(rng));
                e.add_term(mo, cplx(static_cast<double>(ci(rng)), static_cast<double>(ci(rng))));
            }
            return e;
        };
        bool anti = true, jacobi = true, leibniz = true;
        for (int trial = 0; trial < 100; ++trial) {
            const OperatorExpr A = rand_expr(), B = rand_expr(), C = rand_expr();
            anti = anti && equals(commutator(A, B), -commutator(B, A));
            const OperatorExpr j = (commutator(A, commutator(B, C)) +
                                    commutator(B, commutator(C, A)) +
                                    commutator(C, commutator(A, B)))
                                       .simplified();
            jacobi = jacobi && is_zero(j);
            const OperatorExpr l =
                (commutator(A, B * C) - (commutator(A, B) * C + B * commutator(A, C)))
                    .simplified();
            leibniz = leibniz && is_zero(l);
        }
        check_line(anti, "antisymmetry on 100 randomized pairs", "", &all);
        check_line(jacobi, "Jacobi identity on 100 randomized triples", "", &all);
        check_line(leibniz, "Leibniz rule on 100 randomized triples", "", &all);
    }

    std::printf("verify-algebra: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}

int cmd_compare_oracle(const std::string& config_path) {
    ScenarioConfig cfg = parse_config_file(config_path);
    if (cfg.scenario == "all") {
        std::fprintf(stderr, "compare-oracle: pick a single scenario\n");
        return 2;
    }

    bool all = true;
    std::printf("trotter vs dense oracle (%s)\n", cfg.scenario.c_str());

    // assemble the scenario Hamiltonian on an oracle-sized grid
    HamiltonianSpec h;
    std::size_t n1 = std::min<std::size_t>(cfg.n1, 8), n2 = std::min<std::size_t>(cfg.n2, 8);
    const bool single = cfg.scenario == "static_compare";
    if (cfg.scenario == "entangling") {
        h.terms.push_back(FreeKvN{cfg.mass});
        if (cfg.lambda != 0.0) h.terms.push_back(QubitCouplingZ{cfg.lambda, true, true});
        h.terms.push_back(EntanglerAlpha{cfg.alpha});
        h.terms.push_back(EntanglerX1{cfg.lambda1});
        h.terms.push_back(EntanglerP2{cfg.lambda2});
    } else if (single) {
        h.terms.push_back(QuantumKinetic{cfg.mass});
        h.terms.push_back(QuantumPotential{cfg.quantum_potential});
        h.terms.push_back(QuantumQubitCoupling{cfg.lambda});
        n1 = std::min<std::size_t>(cfg.n1, 64);
    } else if (cfg.scenario == "harmonic") {
        h.terms.push_back(FreeKvN{cfg.mass});
        h.terms.push_back(HarmonicKvN{cfg.k});
    } else {
        h.terms.push_back(FreeKvN{cfg.mass});
        h.terms.push_back(QubitCouplingZ{cfg.lambda, true, true});
    }

    const GridSpec g1 = make_grid(n1, cfg.length1);
    const GridSpec g2full = make_grid(n2, cfg.length2);
    InitialCondition ic = ic_from_cli(cfg);
    // snap initial data to the reduced oracle grid
    auto snap = [](const std::vector<double>& vals, double v) {
        double best = vals.front();
        for (const double x : vals) {
            if (std::abs(x - v) < std::abs(best - v)) best = x;
        }
        return best;
    };
    ic.x0 = snap(g1.positions(), ic.x0);
    ic.p0 = single ? 0.0 : snap(g2full.momenta(), ic.p0);
    if (ic.profile == Profile::Gaussian) {
        ic.sigma_x = std::min(std::max(ic.sigma_x, 0.6 * g1.dx()), 0.45 * g1.length());
        if (ic.sigma_p2 > 0.0) {
            ic.sigma_p2 = std::min(std::max(ic.sigma_p2, 0.6 * g2full.dp()),
                                   0.45 * g2full.dp() * static_cast<double>(n2));
        }
    }
    HybridState s0 = single ? make_state_single(g1, ic) : make_state(g1, g2full, ic);
    std::vector<GridSpec> grids{g1};
    std::vector<RepTag> reps{RepTag::Position};
    if (!single) {
        grids.push_back(make_grid(n2, cfg.length2));
        reps.push_back(RepTag::Momentum);
    }

    const std::size_t step_list[] = {64, 128, 256, 512};
    for (const std::size_t steps : step_list) {
        const double t = cfg.t_max;
        const HybridState st = strang_evolve(s0, h, t, steps);
        const Eigen::MatrixXcd u = dense_oracle_unitary(h, grids, reps, t);
        const HybridState sd = apply_dense(u, s0, reps);
        const double fid = fidelity(st, sd);
        const bool ok = fid >= 1.0 - 1e-4;
        std::printf("  [%s] steps=%-5zu fidelity deficit %.3e\n", ok ? "PASS" : "FAIL", steps,
                    1.0 - fid);
        all = all && ok;
    }
    return all ? 0 : 1;
}

int cmd_list() {
    for (const auto& n : scenario_names()) {
        std::printf("%s\n", n.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koopman-embedded classical dynamics coupled to two qubits"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool plot = false;
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "run a scenario (or all) from a config file");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory (overrides out.dir)");
    run->add_flag("--plot", plot, "also write plot.svg");
    run->add_option("--jobs", jobs, "concurrent scenarios for 'all'")->default_val(1);

    auto* verify = app.add_subcommand("verify-algebra", "print the symbolic identity suite");
    auto* cmp = app.add_subcommand("compare-oracle", "trotter vs dense oracle on a tiny grid");
    cmp->add_option("--config", config_path, "configuration file")->required();
    auto* list = app.add_subcommand("list-scenarios", "list scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, plot, jobs);
        if (verify->parsed()) return cmd_verify_algebra();
        if (cmp->parsed()) return cmd_compare_oracle(config_path);
        if (list->parsed()) return cmd_list();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
