// Copyright 2026 The phasefe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// phasefe: command-line front end for the fidelity estimation experiments.
//
//   phasefe fig2a --seed 7 --deterministic
//   phasefe run --target haar --n 6 --scheme fofe --p 0.1 --shots 20000
//   phasefe mps-sample --n 6 --chi 4 --verify
//
// Exit codes: 0 ok, 2 configuration error, 3 cap exceeded, 4 numerical-health failure.

#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <utility>

#include "CLI11.hpp"
#include "phasefe/experiments.hpp"

using phasefe::ExperimentConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;
constexpr int kExitHealth = 4;

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"phasefe: phase-state fidelity estimation experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");

    // One config per subcommand: default_val() writes the bound variable at definition time.
    ExperimentConfig global;
    std::deque<ExperimentConfig> configs;
    std::map<CLI::App *, ExperimentConfig *> config_of;
    auto sub = [&](const char *name, const char *desc) {
        auto *c = app.add_subcommand(name, desc);
        configs.emplace_back();
        config_of[c] = &configs.back();
        return std::pair<CLI::App *, ExperimentConfig &>(c, configs.back());
    };

    std::string out, format = "csv";
    app.add_option("--seed", global.seed, "RNG seed")->capture_default_str();
    app.add_option("--workers", global.workers, "worker threads (results do not depend on this)")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    app.add_option("--out", out, "output file (stdout if omitted)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_flag("--deterministic", global.deterministic, "omit timestamp and timing metadata");

    auto [fig, fig_cfg] = sub("fig2a", "DFE vs FOFE on the complete 3-uniform hypergraph state");
    fig->add_option("--n", fig_cfg.n, "number of qubits")->default_val(7);
    fig->add_option("--shots", fig_cfg.shots, "copies per scheme")->default_val(5000);
    fig->add_option("--fidelity", fig_cfg.fidelity, "input fidelity, sets depolarizing p (default 0.8955)");
    fig->add_option("--p", fig_cfg.p, "depolarizing strength (instead of --fidelity)");
    fig->add_option("--mom", fig_cfg.mom_batches, "median-of-means batches")->default_val(1);

    auto [haar, haar_cfg] = sub("haar-scan", "Haar l1 norms and stripped-norm ratio versus n");
    haar->add_option("--n-min", haar_cfg.n_min)->default_val(1);
    haar->add_option("--n-max", haar_cfg.n_max)->default_val(10);
    haar->add_option("--samples", haar_cfg.samples, "Haar copies per n for the exact Monte Carlo")->default_val(50);
    haar->add_option("--dirichlet-samples", haar_cfg.dirichlet_samples)->default_val(10000);
    haar->add_option("--mc-cap", haar_cfg.mc_cap, "largest n for exact Monte Carlo")->default_val(8);
    haar->add_option("--stripped", haar_cfg.stripped, "exact|dirichlet|both")->default_val("both");
    haar->add_option("--formula", haar_cfg.formula, "literal|rederived|class_count")->default_val("class_count");
    haar->add_option("--terms", haar_cfg.terms, "dominant|full")->default_val("dominant");

    auto [nl, nl_cfg] = sub("nldfe-compare", "QWC-grouped weight W against the l1 norm");
    nl->add_option("--n-min", nl_cfg.n_min)->default_val(2);
    nl->add_option("--n-max", nl_cfg.n_max)->default_val(6);
    nl->add_option("--samples", nl_cfg.samples, "Haar copies per n")->default_val(100);
    nl->add_option("--shots", nl_cfg.shots, "shots for the variance comparison")->default_val(2000);
    nl->add_option("--ordering", nl_cfg.ordering, "canonical|greedy")->default_val("canonical");

    auto [hb, hb_cfg] = sub("hypergraph-bounds", "1/2-DFE variance bounds for hypergraph states");
    hb->add_option("--n-min", hb_cfg.n_min)->default_val(3);
    hb->add_option("--n-max", hb_cfg.n_max)->default_val(9);
    hb->add_option("--samples", hb_cfg.samples, "random x samples for the sampled bounds")->default_val(2000);
    hb->add_option("--shots", hb_cfg.shots, "shots for the empirical second moment")->default_val(100000);
    hb->add_option("--emp-cap", hb_cfg.emp_cap, "largest n for the empirical second moment")->default_val(7);

    auto [run, run_cfg] = sub("run", "one estimator on one target");
    run->add_option("--n", run_cfg.n)->default_val(6);
    run->add_option("--scheme", run_cfg.scheme, "dfe|fofe|nldfe")->default_val("fofe");
    run->add_option("--target", run_cfg.target, "plus|complete3|hypergraph|random-phase|dicke|haar|mps")
        ->default_val("complete3");
    run->add_option("--edges", run_cfg.edges, "hyperedges as 0-1-2,1-2-3 (random 3-uniform if empty)");
    run->add_option("--k", run_cfg.k, "Dicke excitation number")->default_val(2);
    run->add_option("--chi", run_cfg.chi, "MPS bond dimension")->default_val(4);
    run->add_option("--p", run_cfg.p, "depolarizing strength of the input");
    run->add_option("--fidelity", run_cfg.fidelity, "choose p so the input has this fidelity");
    run->add_option("--input", run_cfg.input, "JSON input state");
    run->add_option("--alpha", run_cfg.alpha, "DFE sampling exponent (0.5 or 1)")->default_val(0.5);
    run->add_option("--shots", run_cfg.shots)->default_val(10000);
    run->add_option("--mom", run_cfg.mom_batches, "median-of-means batches")->default_val(1);

    auto [tomo, tomo_cfg] = sub("tomography", "MUB tomography error over a shot ladder");
    tomo->add_option("--n", tomo_cfg.n)->default_val(2);
    tomo->add_option("--ladder", tomo_cfg.ladder, "shots per basis")->delimiter(',')->default_str("100,1000,10000,100000");
    tomo->add_option("--repetitions", tomo_cfg.repetitions)->default_val(10);
    tomo->add_option("--p", tomo_cfg.p, "depolarizing strength of the random input (default 0.2)");
    tomo->add_option("--path", tomo_cfg.path, "direct|fofe")->default_val("direct");

    auto [mps, mps_cfg] = sub("mps-sample", "l2 phase-point sampling of a random real MPS");
    mps->add_option("--n", mps_cfg.n)->default_val(6);
    mps->add_option("--chi", mps_cfg.chi)->default_val(4);
    mps->add_option("--shots", mps_cfg.shots, "draws")->default_val(10000);
    mps->add_flag("--verify", mps_cfg.verify, "compare with exact enumeration");

    auto [dk, dk_cfg] = sub("dicke", "l1 phase-point sampling of a Dicke state");
    dk->add_option("--n", dk_cfg.n)->default_val(8);
    dk->add_option("--k", dk_cfg.k)->default_val(2);
    dk->add_option("--shots", dk_cfg.shots, "draws")->default_val(10000);
    dk->add_flag("--verify", dk_cfg.verify, "compare with exact enumeration");

    auto [nm, nm_cfg] = sub("norms", "Pauli norms and stabilizer Renyi entropies");
    nm->add_option("--n", nm_cfg.n)->default_val(4);
    nm->add_option("--target", nm_cfg.target)->default_val("complete3");
    nm->add_option("--edges", nm_cfg.edges);
    nm->add_option("--k", nm_cfg.k)->default_val(2);
    nm->add_option("--chi", nm_cfg.chi)->default_val(4);
    nm->add_option("--input", nm_cfg.input, "JSON pure state");
    nm->add_option("--alphas", nm_cfg.alphas)->delimiter(',')->default_str("0,0.5,1,2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    CLI::App *chosen = app.get_subcommands().front();
    ExperimentConfig cfg = *config_of.at(chosen);
    cfg.command = chosen->get_name();
    cfg.seed = global.seed;
    cfg.workers = global.workers;
    cfg.deterministic = global.deterministic;

    try {
        phasefe::ResultTable t = phasefe::run_experiment(cfg);
        std::ofstream file;
        if (!out.empty()) {
            file.open(out);
            if (!file) {
                std::cerr << "error: cannot write " << out << "\n";
                return kExitConfig;
            }
        }
        std::ostream &os = out.empty() ? std::cout : file;
        if (format == "json") {
            os << t.to_json().dump(2) << "\n";
        } else {
            t.write_csv(os);
        }
    } catch (const phasefe::CapExceeded &e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const phasefe::NumericalHealthError &e) {
        std::cerr << "numerical health: " << e.what() << "\n";
        return kExitHealth;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
